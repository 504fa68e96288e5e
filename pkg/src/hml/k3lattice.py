"""Integral Mukai lattices: pairing, reflections, Hodge isometries, orientation.

The extended lattice over an even lattice Lambda (rank r) has coordinates
``(r0, c_1..c_r, s)``: index 0 is degree 0, indices 1..r are Lambda and
index r+1 is degree 4.  Periods are pairs of rational vectors (Re, Im) in
Lambda coordinates so every check stays exact.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import lcm
from typing import Sequence

from .linalg import QQ, Mat, determinant, integer_kernel, inverse, solve_linear

__all__ = [
    "LatticeError", "NotEven", "RankMismatch", "NotMinusTwo", "NotIsometry", "InvalidPeriod",
    "NotPositiveFourPlane", "DegenerateProjection", "Degenerate",
    "EvenLattice", "ExtendedLattice", "MukaiElement", "HodgePeriod", "LatticeIsometry",
    "NeronSeveri", "HodgeWitness",
    "hyperbolic_plane", "e8", "a1", "diagonal_lattice", "lattice_sum",
    "mukai_pairing", "mukai_vector", "euler_chi_lattice", "reflection_twist", "is_isometry",
    "is_hodge_isometry", "neron_severi", "orientation_check", "orientation_determinant",
    "extend_by_h2_sign", "cohom_fm", "diagonal_kernel",
]


class LatticeError(ValueError):
    pass


class NotEven(LatticeError):
    pass


class RankMismatch(LatticeError):
    pass


class NotMinusTwo(LatticeError):
    pass


class NotIsometry(LatticeError):
    pass


class InvalidPeriod(LatticeError):
    pass


class NotPositiveFourPlane(LatticeError):
    pass


class DegenerateProjection(ArithmeticError):
    pass


class Degenerate(LatticeError):
    pass


def _num(x):
    """Normalise an exact rational to int when integral."""
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else x


def _col(values) -> Mat:
    return Mat.column(QQ, [Fraction(v) for v in values])


def _dot(x: Mat, g: Mat, y: Mat):
    return _num((x.T @ g @ y).a[0, 0])


# lattices ---------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class EvenLattice:
    gram: Mat
    name: str = ""

    def __post_init__(self):
        g = self.gram
        if g.rows != g.cols:
            raise LatticeError("gram matrix must be square")
        if g != g.T:
            raise LatticeError("gram matrix must be symmetric")
        for i in range(g.rows):
            for j in range(g.cols):
                if Fraction(g.a[i, j]).denominator != 1:
                    raise LatticeError(f"gram entry ({i}, {j}) is not an integer")
            if Fraction(g.a[i, i]) % 2:
                raise NotEven(f"diagonal entry {i} is odd")

    @classmethod
    def from_gram(cls, rows: Sequence[Sequence[int]], name: str = "") -> "EvenLattice":
        return cls(Mat.from_rows(QQ, rows), name)

    @property
    def rank(self) -> int:
        return self.gram.rows

    def pair(self, x: Sequence, y: Sequence):
        if len(x) != self.rank or len(y) != self.rank:
            raise RankMismatch(f"vectors must have length {self.rank}")
        return _dot(_col(x), self.gram, _col(y))

    def gram_rows(self) -> list[list[int]]:
        return [[_num(x) for x in row] for row in self.gram.a.tolist()]


def hyperbolic_plane() -> EvenLattice:
    return EvenLattice.from_gram([[0, 1], [1, 0]], "U")


def e8(sign: int = -1) -> EvenLattice:
    """E8 scaled by ``sign``; the default is the negative definite E8(-1)."""
    n = 8
    rows = [[0] * n for _ in range(n)]
    edges = [(i, i + 1) for i in range(6)] + [(4, 7)]
    for i in range(n):
        rows[i][i] = 2 * sign
    for i, j in edges:
        rows[i][j] = rows[j][i] = -sign
    return EvenLattice.from_gram(rows, "E8(-1)" if sign < 0 else "E8")


def a1() -> EvenLattice:
    """The rank one lattice <-2>."""
    return EvenLattice.from_gram([[-2]], "A1(-1)")


def diagonal_lattice(*entries: int) -> EvenLattice:
    n = len(entries)
    return EvenLattice.from_gram([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)],
                                 "+".join(f"<{e}>" for e in entries))


def lattice_sum(*lats: EvenLattice) -> EvenLattice:
    g = Mat.diag(QQ, [x.gram for x in lats])
    return EvenLattice(g, "+".join(x.name or "?" for x in lats))


@dataclass(frozen=True)
class MukaiElement:
    r: object
    c: tuple
    s: object

    @classmethod
    def of(cls, r, c: Sequence, s) -> "MukaiElement":
        return cls(_num(r), tuple(_num(x) for x in c), _num(s))

    def as_list(self) -> list:
        return [self.r, *self.c, self.s]

    def __str__(self):
        return f"{self.r},({','.join(str(x) for x in self.c)}),{self.s}"


@dataclass(frozen=True, eq=False)
class ExtendedLattice:
    h2: EvenLattice

    @property
    def r(self) -> int:
        return self.h2.rank

    @property
    def rank(self) -> int:
        return self.h2.rank + 2

    @property
    def gram(self) -> Mat:
        """Mukai pairing matrix."""
        n = self.rank
        g = Mat.zeros(QQ, n, n)
        g.a[1:n - 1, 1:n - 1] = self.h2.gram.a
        g.a[0, n - 1] = g.a[n - 1, 0] = Fraction(-1)
        return g

    @property
    def integration_gram(self) -> Mat:
        """Matrix of the cup-and-integrate pairing."""
        n = self.rank
        g = Mat.zeros(QQ, n, n)
        g.a[1:n - 1, 1:n - 1] = self.h2.gram.a
        g.a[0, n - 1] = g.a[n - 1, 0] = Fraction(1)
        return g

    def check(self, e: MukaiElement) -> MukaiElement:
        if len(e.c) != self.r:
            raise RankMismatch(f"element has {len(e.c)} degree-2 coordinates, lattice has {self.r}")
        return e

    def vector(self, e: MukaiElement) -> Mat:
        return _col(self.check(e).as_list())

    def element(self, v: Mat | Sequence) -> MukaiElement:
        vals = [v.a[i, 0] for i in range(v.rows)] if isinstance(v, Mat) else list(v)
        if len(vals) != self.rank:
            raise RankMismatch(f"vector has length {len(vals)}, lattice has rank {self.rank}")
        return MukaiElement.of(vals[0], vals[1:-1], vals[-1])

    def basis(self) -> list[MukaiElement]:
        n = self.rank
        return [self.element([1 if k == i else 0 for k in range(n)]) for i in range(n)]


@dataclass(frozen=True, eq=False)
class LatticeIsometry:
    lattice: ExtendedLattice | EvenLattice
    matrix: Mat

    def __call__(self, e: MukaiElement) -> MukaiElement:
        lat = self.lattice
        return lat.element(self.matrix @ lat.vector(e))

    def __matmul__(self, other: "LatticeIsometry") -> "LatticeIsometry":
        return LatticeIsometry(self.lattice, self.matrix @ other.matrix)

    def rows(self) -> list[list[int]]:
        return [[_num(x) for x in row] for row in self.matrix.a.tolist()]


# pairing, vectors, reflections -------------------------------------------

def mukai_pairing(lat: ExtendedLattice, a: MukaiElement, b: MukaiElement):
    """<a, b> = a1.b1 - a0 b2 - a2 b0."""
    lat.check(a)
    lat.check(b)
    return _num(lat.h2.pair(a.c, b.c) - Fraction(a.r) * Fraction(b.s) - Fraction(a.s) * Fraction(b.r))


def mukai_vector(lat: ExtendedLattice, rk: int, c1: Sequence[int], c2: int) -> MukaiElement:
    """(rk, c1, rk + c1^2/2 - c2)."""
    if len(c1) != lat.r:
        raise RankMismatch(f"c1 has length {len(c1)}, lattice has rank {lat.r}")
    sq = Fraction(lat.h2.pair(c1, c1))
    return MukaiElement.of(rk, c1, rk + sq / 2 - c2)


def euler_chi_lattice(lat: ExtendedLattice, v: MukaiElement, w: MukaiElement):
    return _num(-Fraction(mukai_pairing(lat, v, w)))


def reflection_twist(lat: ExtendedLattice, v: MukaiElement) -> LatticeIsometry:
    """alpha |-> alpha + <v, alpha> v, defined for <v, v> = -2."""
    if mukai_pairing(lat, v, v) != -2:
        raise NotMinusTwo(f"<v, v> = {mukai_pairing(lat, v, v)}, expected -2")
    x = lat.vector(v)
    g = Mat.identity(QQ, lat.rank) + x @ x.T @ lat.gram
    return LatticeIsometry(lat, g)


def _matrix(g) -> Mat:
    return g.matrix if isinstance(g, LatticeIsometry) else g


def is_isometry(lat, g) -> bool:
    m = _matrix(g)
    gram = lat.gram
    if m.shape != gram.shape:
        raise RankMismatch(f"matrix has shape {m.shape}, lattice has rank {gram.rows}")
    if any(Fraction(x).denominator != 1 for x in m.a.flat):
        return False
    return m.T @ gram @ m == gram and abs(determinant(m)) == 1


def extend_by_h2_sign(lat: ExtendedLattice, sign: int) -> LatticeIsometry:
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    m = Mat.identity(QQ, lat.rank)
    for i in range(1, lat.rank - 1):
        m.a[i, i] = Fraction(sign)
    return LatticeIsometry(lat, m)


# periods ---------------------------------------------------------------

@dataclass(frozen=True)
class HodgePeriod:
    re: tuple
    im: tuple

    @classmethod
    def of(cls, h2: EvenLattice, re: Sequence, im: Sequence) -> "HodgePeriod":
        p = cls(tuple(_num(x) for x in re), tuple(_num(x) for x in im))
        p.check(h2)
        return p

    def check(self, h2: EvenLattice) -> "HodgePeriod":
        if len(self.re) != h2.rank or len(self.im) != h2.rank:
            raise RankMismatch(f"period vectors must have length {h2.rank}")
        rr, ii, ri = h2.pair(self.re, self.re), h2.pair(self.im, self.im), h2.pair(self.re, self.im)
        if rr != ii:
            raise InvalidPeriod(f"Re.Re = {rr} differs from Im.Im = {ii}")
        if ri != 0:
            raise InvalidPeriod(f"Re.Im = {ri}, expected 0")
        if rr <= 0:
            raise InvalidPeriod(f"Re.Re = {rr} is not positive")
        return self


def _h2(lat) -> EvenLattice:
    return lat.h2 if isinstance(lat, ExtendedLattice) else lat


def _period_vectors(lat, p: HodgePeriod) -> tuple[Mat, Mat]:
    """Period vectors in the coordinates of ``lat`` (embedded in degree 2 if extended)."""
    if isinstance(lat, ExtendedLattice):
        return _col([0, *p.re, 0]), _col([0, *p.im, 0])
    return _col(p.re), _col(p.im)


@dataclass(frozen=True)
class HodgeWitness:
    ok: bool
    a: object = None
    b: object = None


def is_hodge_isometry(lat, g, src: HodgePeriod, dst: HodgePeriod) -> HodgeWitness:
    """Whether g(sigma) = (a + b i) sigma' for some rational (a, b) != (0, 0).

    ``lat`` may be the degree-2 lattice or the extended lattice.
    """
    m = _matrix(g)
    if not is_isometry(lat, m):
        raise NotIsometry("g does not preserve the pairing")
    src.check(_h2(lat))
    dst.check(_h2(lat))
    re, im = _period_vectors(lat, src)
    re2, im2 = _period_vectors(lat, dst)
    system = re2.vstack(im2).hstack((-im2).vstack(re2))
    rhs = (m @ re).vstack(m @ im)
    sol = solve_linear(system, rhs)
    if sol is None:
        return HodgeWitness(False)
    a, b = _num(sol.a[0, 0]), _num(sol.a[1, 0])
    if a == 0 and b == 0:
        return HodgeWitness(False)
    return HodgeWitness(True, a, b)


@dataclass(frozen=True, eq=False)
class NeronSeveri:
    basis: Mat          # columns in degree-2 coordinates
    gram: Mat

    @property
    def rank(self) -> int:
        return self.basis.cols

    def vectors(self) -> list[list[int]]:
        return [[_num(self.basis.a[i, j]) for i in range(self.basis.rows)] for j in range(self.basis.cols)]


def _clear(row: list) -> list[int]:
    den = reduce(lcm, (Fraction(x).denominator for x in row), 1)
    return [int(Fraction(x) * den) for x in row]


def neron_severi(lat, p: HodgePeriod) -> NeronSeveri:
    """Integral classes orthogonal to Re and Im of the period."""
    h2 = _h2(lat)
    p.check(h2)
    g = h2.gram
    rows = [_clear(list((g @ _col(v)).a[:, 0])) for v in (p.re, p.im)]
    basis = integer_kernel(Mat.from_rows(QQ, rows))
    return NeronSeveri(basis, basis.T @ g @ basis)


# orientation ------------------------------------------------------------

def _positive_definite(g: Mat) -> bool:
    return all(determinant(g.sub(rows=range(k), cols=range(k))) > 0 for k in range(1, g.rows + 1))


def orientation_determinant(lat: ExtendedLattice, g, ample: Sequence[int], p: HodgePeriod):
    """det of g restricted and projected onto the positive four-plane."""
    h2 = lat.h2
    p.check(h2)
    if len(ample) != h2.rank:
        raise RankMismatch(f"ample class must have length {h2.rank}")
    sq = Fraction(h2.pair(ample, ample))
    if sq <= 0:
        raise NotPositiveFourPlane(f"ample class has square {sq}")
    if h2.pair(ample, p.re) != 0 or h2.pair(ample, p.im) != 0:
        raise NotPositiveFourPlane("ample class is not orthogonal to the period")
    z = [0] * h2.rank
    b = _col([1, *z, -sq / 2]).hstack(_col([0, *ample, 0]), _col([0, *p.re, 0]), _col([0, *p.im, 0]))
    gm = lat.gram
    gram_b = b.T @ gm @ b
    if not _positive_definite(gram_b):
        raise NotPositiveFourPlane("the four orientation classes do not span a positive plane")
    proj = inverse(gram_b) @ b.T @ gm @ _matrix(g) @ b
    det = determinant(proj)
    if det == 0:
        raise DegenerateProjection("projection of the image four-plane is singular")
    return _num(det)


def orientation_check(lat: ExtendedLattice, g, ample: Sequence[int], p: HodgePeriod) -> bool:
    """True when g preserves the orientation of the positive four-plane."""
    return orientation_determinant(lat, g, ample, p) > 0


# cohomological transforms -----------------------------------------------

def cohom_fm(lx: ExtendedLattice, ly: ExtendedLattice, kernel: Mat, beta: MukaiElement) -> MukaiElement:
    """beta |-> sum_t (int_X x_t . beta) y_t for the kernel sum_{ij} K[i, j] e_i (x) f_j."""
    if kernel.shape != (lx.rank, ly.rank):
        raise RankMismatch(f"kernel has shape {kernel.shape}, expected {(lx.rank, ly.rank)}")
    out = kernel.T @ lx.integration_gram @ lx.vector(beta)
    return ly.element(out)


def diagonal_kernel(lat: ExtendedLattice) -> Mat:
    """Kernel inducing the identity: sum of e_i (x) e^i over integration-dual bases."""
    inv = inverse(lat.integration_gram)
    if inv is None:
        raise Degenerate("integration pairing is degenerate")
    return inv
