"""Exact linear algebra over the rationals and prime fields.

Matrices hold Python numbers in numpy object arrays: ``Fraction``/``int``
over QQ, residues in ``[0, p)`` over GF(p).  Every routine is deterministic
(leftmost pivots, free variables set to zero), so results are reproducible
and can be frozen in tests.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "LinalgError", "MixedFields", "ShapeMismatch",
    "Field", "QQ", "GF", "Scalar", "Mat",
    "rref", "kernel_basis", "solve_linear", "determinant", "inverse", "integer_kernel", "Subspace",
]


class LinalgError(Exception):
    pass


class MixedFields(LinalgError):
    """Operands live over different fields."""


class ShapeMismatch(LinalgError, ValueError):
    pass


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class Field:
    """QQ (``p is None``) or the prime field GF(p) with p < 2**31."""

    __slots__ = ("p",)

    def __init__(self, p: int | None = None):
        if p is not None:
            p = int(p)
            if not (_is_prime(p) and p < 2**31):
                raise ValueError(f"{p} is not a prime below 2**31")
        self.p = p

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return "QQ" if self.p is None else f"GF({self.p})"

    @property
    def name(self) -> str:
        return "Q" if self.p is None else f"Fp:{self.p}"

    @staticmethod
    def parse(text: str) -> "Field":
        text = text.strip()
        if text in ("Q", "QQ"):
            return QQ
        if text.startswith("Fp:"):
            return GF(int(text[3:]))
        raise ValueError(f"unknown field {text!r} (expected 'Q' or 'Fp:<prime>')")

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1

    def __call__(self, x):
        """Coerce ``x`` (int, Fraction, "p/q" string, Scalar) into this field."""
        if isinstance(x, Scalar):
            if x.field != self:
                raise MixedFields(f"{x.field!r} scalar used over {self!r}")
            return x.value
        if isinstance(x, str):
            x = Fraction(x)
        if isinstance(x, bool) or not isinstance(x, (int, Fraction, np.integer)):
            raise TypeError(f"cannot coerce {x!r} into {self!r}")
        if self.p is None:
            x = Fraction(x)
            return x.numerator if x.denominator == 1 else x
        if isinstance(x, Fraction):
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.p is None:
            return Fraction(1) / x
        return pow(int(x), -1, self.p)

    def reduce(self, arr: np.ndarray) -> np.ndarray:
        if self.p is None:
            return arr
        return np.mod(arr, self.p)

    def format(self, x):
        """JSON encoding of one element: "p/q" string over QQ, int over GF(p)."""
        if self.p is None:
            return str(Fraction(x))
        return int(x)


QQ = Field()


@lru_cache(maxsize=None)
def GF(p: int) -> Field:
    return Field(p)


@dataclass(frozen=True)
class Scalar:
    field: Field
    value: object

    def __post_init__(self):
        object.__setattr__(self, "value", self.field(self.value))

    def _check(self, other):
        if not isinstance(other, Scalar):
            return Scalar(self.field, other)
        if other.field != self.field:
            raise MixedFields(f"{self.field!r} vs {other.field!r}")
        return other

    def __add__(self, other):
        other = self._check(other)
        return Scalar(self.field, self.value + other.value)

    def __sub__(self, other):
        other = self._check(other)
        return Scalar(self.field, self.value - other.value)

    def __mul__(self, other):
        other = self._check(other)
        return Scalar(self.field, self.value * other.value)

    def __truediv__(self, other):
        other = self._check(other)
        return Scalar(self.field, self.value * self.field.inv(other.value))

    def __neg__(self):
        return Scalar(self.field, -self.value)

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.field == other.field and self.value == other.value
        return self.value == self.field(other)

    def __hash__(self):
        return hash((self.field, self.value))


class Mat:
    """Dense matrix over a Field.  Treat instances as immutable."""

    __slots__ = ("field", "a")

    def __init__(self, field: Field, a: np.ndarray):
        a = np.asarray(a, dtype=object)
        if a.ndim != 2:
            raise ShapeMismatch(f"expected a 2-d array, got shape {a.shape}")
        self.field = field
        self.a = a

    # construction -----------------------------------------------------

    @classmethod
    def from_rows(cls, field: Field, rows: Sequence[Sequence], cols: int | None = None) -> "Mat":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        a = np.empty((len(rows), cols), dtype=object)
        for i, r in enumerate(rows):
            if len(r) != cols:
                raise ShapeMismatch(f"row {i} has {len(r)} entries, expected {cols}")
            for j, x in enumerate(r):
                a[i, j] = field(x)
        return cls(field, a)

    @classmethod
    def from_scalars(cls, rows: Sequence[Sequence[Scalar]]) -> "Mat":
        fields = {s.field for r in rows for s in r}
        if len(fields) > 1:
            raise MixedFields(f"entries over {sorted(map(repr, fields))}")
        if not fields:
            raise ValueError("cannot infer the field of an empty matrix")
        field = fields.pop()
        return cls.from_rows(field, [[s.value for s in r] for r in rows])

    @classmethod
    def zeros(cls, field: Field, rows: int, cols: int) -> "Mat":
        a = np.empty((rows, cols), dtype=object)
        a.fill(0)
        return cls(field, a)

    @classmethod
    def identity(cls, field: Field, n: int) -> "Mat":
        m = cls.zeros(field, n, n)
        for i in range(n):
            m.a[i, i] = 1
        return m

    @classmethod
    def column(cls, field: Field, values: Iterable) -> "Mat":
        values = list(values)
        return cls.from_rows(field, [[v] for v in values], cols=1)

    # shape ------------------------------------------------------------

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.a.shape

    def __repr__(self):
        return f"Mat({self.field!r}, {self.tolist()})"

    def tolist(self) -> list[list]:
        return [list(r) for r in self.a]

    def key(self) -> tuple:
        """Hashable content key."""
        return (self.field, self.shape, tuple(Fraction(x) for x in self.a.flat))

    def entry(self, i: int, j: int):
        return self.a[i, j]

    # arithmetic -------------------------------------------------------

    def _same_field(self, other: "Mat"):
        if other.field != self.field:
            raise MixedFields(f"{self.field!r} vs {other.field!r}")

    def __matmul__(self, other: "Mat") -> "Mat":
        self._same_field(other)
        if self.cols != other.rows:
            raise ShapeMismatch(f"{self.shape} @ {other.shape}")
        if self.cols == 0:
            return Mat.zeros(self.field, self.rows, other.cols)
        return Mat(self.field, self.field.reduce(self.a.dot(other.a)))

    def __add__(self, other: "Mat") -> "Mat":
        self._same_field(other)
        if self.shape != other.shape:
            raise ShapeMismatch(f"{self.shape} + {other.shape}")
        return Mat(self.field, self.field.reduce(self.a + other.a))

    def __sub__(self, other: "Mat") -> "Mat":
        self._same_field(other)
        if self.shape != other.shape:
            raise ShapeMismatch(f"{self.shape} - {other.shape}")
        return Mat(self.field, self.field.reduce(self.a - other.a))

    def __neg__(self) -> "Mat":
        return Mat(self.field, self.field.reduce(-self.a))

    def scale(self, c) -> "Mat":
        c = self.field(c)
        return Mat(self.field, self.field.reduce(self.a * c))

    @property
    def T(self) -> "Mat":
        return Mat(self.field, self.a.T.copy())

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        return (self.field == other.field and self.shape == other.shape
                and bool(np.all(self.a == other.a)))

    __hash__ = None

    def is_zero(self) -> bool:
        return bool(np.all(self.a == 0))

    def sub(self, rows=None, cols=None) -> "Mat":
        """Submatrix by row/column index lists (None keeps all)."""
        a = self.a
        if rows is not None:
            a = a[list(rows), :] if len(rows) else np.empty((0, a.shape[1]), dtype=object)
        if cols is not None:
            a = a[:, list(cols)] if len(cols) else np.empty((a.shape[0], 0), dtype=object)
        return Mat(self.field, a.copy())

    def hstack(self, *others: "Mat") -> "Mat":
        for o in others:
            self._same_field(o)
        return Mat(self.field, np.hstack([self.a] + [o.a for o in others]))

    def vstack(self, *others: "Mat") -> "Mat":
        for o in others:
            self._same_field(o)
        return Mat(self.field, np.vstack([self.a] + [o.a for o in others]))

    def kron(self, other: "Mat") -> "Mat":
        self._same_field(other)
        r1, c1 = self.shape
        r2, c2 = other.shape
        out = np.multiply.outer(self.a, other.a).transpose(0, 2, 1, 3).reshape(r1 * r2, c1 * c2)
        return Mat(self.field, self.field.reduce(out))

    def rank(self) -> int:
        return rref(self)[2]

    @staticmethod
    def block(field: Field, blocks: Sequence[Sequence["Mat | None"]],
              row_sizes: Sequence[int], col_sizes: Sequence[int]) -> "Mat":
        """Assemble a block matrix; ``None`` blocks are zero."""
        out = Mat.zeros(field, sum(row_sizes), sum(col_sizes)).a
        r0 = 0
        for bi, rs in enumerate(row_sizes):
            c0 = 0
            for bj, cs in enumerate(col_sizes):
                b = blocks[bi][bj]
                if b is not None:
                    if b.shape != (rs, cs):
                        raise ShapeMismatch(f"block ({bi},{bj}) has shape {b.shape}, expected {(rs, cs)}")
                    out[r0:r0 + rs, c0:c0 + cs] = b.a
                c0 += cs
            r0 += rs
        return Mat(field, out)

    @staticmethod
    def diag(field: Field, blocks: Sequence["Mat"]) -> "Mat":
        n = len(blocks)
        grid = [[blocks[i] if i == j else None for j in range(n)] for i in range(n)]
        return Mat.block(field, grid, [b.rows for b in blocks], [b.cols for b in blocks])


def rref(m: Mat) -> tuple[Mat, list[int], int]:
    """Reduced row-echelon form, pivot columns and rank."""
    field = m.field
    a = m.a.copy()
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        col = a[r:, c]
        nz = [i for i in range(len(col)) if col[i] != 0]
        if not nz:
            continue
        i = nz[0] + r
        if i != r:
            a[[r, i]] = a[[i, r]]
        a[r] = field.reduce(a[r] * field.inv(a[r, c]))
        others = [k for k in range(rows) if k != r and a[k, c] != 0]
        if others:
            a[others] = field.reduce(a[others] - np.outer(a[others, c], a[r]))
        pivots.append(c)
        r += 1
    return Mat(field, a), pivots, len(pivots)


def kernel_basis(m: Mat) -> Mat:
    """Null-space basis, one column per non-pivot column of rref(m)."""
    return Subspace.kernel(m).basis


def solve_linear(a: Mat, b: Mat) -> Mat | None:
    """One solution X of a @ X == b (free variables zero), or None."""
    if a.rows != b.rows:
        raise ShapeMismatch(f"a has {a.rows} rows, b has {b.rows}")
    a._same_field(b)
    n = a.cols
    r, pivots, rank = rref(a.hstack(b))
    if pivots and pivots[-1] >= n:
        return None
    x = Mat.zeros(a.field, n, b.cols)
    for i, c in enumerate(pivots):
        x.a[c, :] = r.a[i, n:]
    return x


def determinant(m: Mat):
    """Exact determinant by elimination."""
    if m.rows != m.cols:
        raise ShapeMismatch(f"determinant of a {m.rows}x{m.cols} matrix")
    field = m.field
    a = m.a.copy()
    n = m.rows
    det = field(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i, c] != 0), None)
        if piv is None:
            return field(0)
        if piv != c:
            a[[c, piv]] = a[[piv, c]]
            det = -det
        det = det * a[c, c]
        inv = field.inv(a[c, c])
        below = [k for k in range(c + 1, n) if a[k, c] != 0]
        if below:
            a[below] = field.reduce(a[below] - np.outer(a[below, c] * inv, a[c]))
    return field.reduce(np.array([det], dtype=object))[0]


def inverse(m: Mat) -> Mat | None:
    """Inverse of a square matrix, or None when singular."""
    if m.rows != m.cols:
        raise ShapeMismatch(f"inverse of a {m.rows}x{m.cols} matrix")
    x = solve_linear(m, Mat.identity(m.field, m.rows))
    if x is None or m.rank() < m.rows:
        return None
    return x


class Subspace:
    """A subspace of k^n in normal form.

    ``basis`` is n x r and its rows at ``coords`` form the identity, so the
    coordinates of any member vector are read off by restricting to
    ``coords``.
    """

    __slots__ = ("basis", "coords")

    def __init__(self, basis: Mat, coords: list[int]):
        self.basis = basis
        self.coords = list(coords)

    @property
    def ambient(self) -> int:
        return self.basis.rows

    @property
    def dim(self) -> int:
        return self.basis.cols

    @property
    def field(self) -> Field:
        return self.basis.field

    @classmethod
    def kernel(cls, m: Mat) -> "Subspace":
        r, pivots, rank = rref(m)
        free = [j for j in range(m.cols) if j not in set(pivots)]
        basis = Mat.zeros(m.field, m.cols, len(free))
        for k, j in enumerate(free):
            basis.a[j, k] = 1
            for i, c in enumerate(pivots):
                basis.a[c, k] = m.field.reduce(np.array([-r.a[i, j]], dtype=object))[0]
        return cls(basis, free)

    @classmethod
    def span(cls, vectors: Mat) -> "Subspace":
        """Column span of ``vectors``."""
        r, pivots, rank = rref(vectors.T)
        return cls(r.sub(rows=range(rank)).T, pivots)

    @classmethod
    def whole(cls, field: Field, n: int) -> "Subspace":
        return cls(Mat.identity(field, n), list(range(n)))

    def coordinates(self, v: Mat) -> Mat:
        return v.sub(rows=self.coords)

    def contains(self, v: Mat) -> bool:
        return (self.basis @ self.coordinates(v)) == v

    def quotient(self) -> tuple[Mat, Mat]:
        """(q, s): projection k^n -> k^n / self and its coordinate section.

        The complement is spanned by the standard vectors outside ``coords``.
        """
        n = self.ambient
        rest = [j for j in range(n) if j not in set(self.coords)]
        field = self.field
        q = Mat.zeros(field, len(rest), n)
        for k, j in enumerate(rest):
            q.a[k, j] = 1
        if self.coords:
            q.a[:, self.coords] = field.reduce(-self.basis.a[rest, :]) if rest else q.a[:, self.coords]
        s = Mat.zeros(field, n, len(rest))
        for k, j in enumerate(rest):
            s.a[j, k] = 1
        return q, s


# integer lattices ------------------------------------------------------

def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def _as_int_rows(m) -> list[list[int]]:
    rows = m.tolist() if isinstance(m, Mat) else [list(r) for r in m]
    out = []
    for r in rows:
        row = []
        for x in r:
            x = Fraction(x)
            if x.denominator != 1:
                raise ValueError(f"non-integer entry {x}")
            row.append(x.numerator)
        out.append(row)
    return out


def _hnf_rows(rows: list[list[int]]) -> list[list[int]]:
    """Row Hermite normal form (positive pivots, entries above reduced), zero rows dropped."""
    rows = [list(r) for r in rows]
    if not rows:
        return []
    ncols = len(rows[0])
    top = 0
    for c in range(ncols):
        for i in range(top + 1, len(rows)):
            if rows[i][c] == 0:
                continue
            a, b = rows[top][c], rows[i][c]
            g, s, t = _xgcd(a, b)
            u, v = a // g, b // g
            ra, rb = rows[top], rows[i]
            rows[top] = [s * x + t * y for x, y in zip(ra, rb)]
            rows[i] = [-v * x + u * y for x, y in zip(ra, rb)]
        if top < len(rows) and rows[top][c] != 0:
            if rows[top][c] < 0:
                rows[top] = [-x for x in rows[top]]
            p = rows[top][c]
            for i in range(top):
                q = rows[i][c] // p
                if q:
                    rows[i] = [x - q * y for x, y in zip(rows[i], rows[top])]
            top += 1
            if top == len(rows):
                break
    return [r for r in rows if any(r)]


def integer_kernel(m) -> Mat:
    """Z-basis of {x in Z^cols : m x = 0}, columns in Hermite normal form."""
    rows = _as_int_rows(m)
    ncols = len(rows[0]) if rows else (m.cols if isinstance(m, Mat) else 0)
    # column operations on m, tracked in the unimodular matrix u
    work = [list(r) for r in rows]
    u = [[int(i == j) for j in range(ncols)] for i in range(ncols)]

    def colop(a: int, b: int, s: int, t: int, v: int, w: int):
        # col_a <- s col_a + t col_b ; col_b <- v col_a + w col_b
        for mat in (work, u):
            for r in mat:
                x, y = r[a], r[b]
                r[a], r[b] = s * x + t * y, v * x + w * y

    k = 0
    for i in range(len(work)):
        if k == ncols:
            break
        for j in range(k + 1, ncols):
            y = work[i][j]
            if y == 0:
                continue
            x = work[i][k]
            g, s, t = _xgcd(x, y)
            colop(k, j, s, t, -y // g, x // g)
        if work[i][k] != 0:
            k += 1
    kernel_rows = [[u[r][c] for r in range(ncols)] for c in range(k, ncols)]
    kernel_rows = _hnf_rows(kernel_rows)
    out = Mat.zeros(QQ, ncols, len(kernel_rows))
    for c, vec in enumerate(kernel_rows):
        for r, x in enumerate(vec):
            out.a[r, c] = x
    return out
