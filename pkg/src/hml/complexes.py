"""Bounded cochain complexes of modules.

Degrees are integers; a complex stores only the degrees where its module is
nonzero, and ``d(i)`` is the differential C^i -> C^{i+1}.  Chain maps,
homotopies and the cone follow the cohomological sign conventions
``d_{C[1]} = -d_C`` and

    Cone^i(f) = C^{i+1} (+) D^i,   d = [[-d_C, 0], [f, d_D]].
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .algebra import (
    Algebra, FDModule, ModuleMap, HomSpace, direct_sum, ground_algebra,
    hom_module, tensor_space, zero_module,
)
from .linalg import Field, Mat, Subspace, solve_linear

__all__ = [
    "NotAComplex", "NotAChainMap",
    "Complex", "ChainMap", "Homotopy", "Triangle", "Cohomology", "Cone",
    "make_complex", "shift", "shift_map", "cohomology", "induced_cohomology_map",
    "is_quasi_iso", "cone", "find_homotopy", "homotopy_holds",
    "HomComplex", "hom_complex", "hom_complex_map",
    "TensorComplex", "tensor_complex", "euler_characteristic", "cohomology_dims",
    "vector_space", "direct_sum_complex", "truncate_below",
]


class NotAComplex(ValueError):
    pass


class NotAChainMap(ValueError):
    pass


def vector_space(field: Field, n: int) -> FDModule:
    """k^n as a module over the ground algebra."""
    k = ground_algebra(field)
    return FDModule(k, (Mat.identity(field, n),), n)


class Complex:
    """A bounded complex; instances are immutable by convention."""

    __slots__ = ("algebra", "modules", "diffs")

    def __init__(self, algebra: Algebra, modules: Mapping[int, FDModule],
                 diffs: Mapping[int, Mat] | None = None):
        self.algebra = algebra
        self.modules = {i: m for i, m in sorted(modules.items()) if m.dim > 0}
        diffs = diffs or {}
        self.diffs = {i: d for i, d in sorted(diffs.items())
                      if i in self.modules and i + 1 in self.modules}
        for i, d in self.diffs.items():
            if d.shape != (self.modules[i + 1].dim, self.modules[i].dim):
                raise NotAComplex(f"d^{i} has shape {d.shape}, expected "
                                  f"{(self.modules[i + 1].dim, self.modules[i].dim)}")

    @property
    def field(self) -> Field:
        return self.algebra.field

    @property
    def lo(self) -> int:
        return min(self.modules) if self.modules else 0

    @property
    def hi(self) -> int:
        return max(self.modules) if self.modules else -1

    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    def is_zero(self) -> bool:
        return not self.modules

    def module(self, i: int) -> FDModule:
        m = self.modules.get(i)
        return m if m is not None else zero_module(self.algebra)

    def dim(self, i: int) -> int:
        m = self.modules.get(i)
        return m.dim if m is not None else 0

    def dims(self) -> dict[int, int]:
        return {i: m.dim for i, m in self.modules.items()}

    def d(self, i: int) -> Mat:
        d = self.diffs.get(i)
        if d is None:
            return Mat.zeros(self.field, self.dim(i + 1), self.dim(i))
        return d

    @classmethod
    def single(cls, m: FDModule, degree: int = 0) -> "Complex":
        return cls(m.algebra, {degree: m})

    def __repr__(self):
        return f"Complex({self.dims()} over {self.algebra!r})"


def make_complex(algebra: Algebra, modules: Mapping[int, FDModule],
                 diffs: Mapping[int, Mat] | None = None) -> Complex:
    """Build a complex, checking equivariance and d o d = 0."""
    diffs = dict(diffs or {})
    for i in diffs:
        if i not in modules or i + 1 not in modules:
            if not diffs[i].is_zero():
                raise NotAComplex(f"d^{i} leaves the support")
    c = Complex(algebra, modules, diffs)
    for i, d in c.diffs.items():
        src, tgt = c.modules[i], c.modules[i + 1]
        for k, (a, b) in enumerate(zip(src.action, tgt.action)):
            if d @ a != b @ d:
                from .algebra import NotEquivariant
                raise NotEquivariant(f"d^{i} does not commute with basis element {k}")
    for i in c.degrees():
        if not (c.d(i + 1) @ c.d(i)).is_zero():
            raise NotAComplex(f"d^{i + 1} o d^{i} != 0")
    return c


class ChainMap:
    """Components f^i : C^i -> D^i (missing degrees are zero)."""

    __slots__ = ("source", "target", "comps")

    def __init__(self, source: Complex, target: Complex, comps: Mapping[int, Mat] | None = None):
        self.source = source
        self.target = target
        comps = comps or {}
        self.comps = {i: m for i, m in comps.items()
                      if source.dim(i) and target.dim(i)}
        for i, m in self.comps.items():
            if m.shape != (target.dim(i), source.dim(i)):
                raise NotAChainMap(f"f^{i} has shape {m.shape}, expected "
                                   f"{(target.dim(i), source.dim(i))}")

    @property
    def field(self) -> Field:
        return self.source.field

    def at(self, i: int) -> Mat:
        m = self.comps.get(i)
        if m is None:
            return Mat.zeros(self.field, self.target.dim(i), self.source.dim(i))
        return m

    def degrees(self) -> range:
        lo = min(self.source.lo, self.target.lo)
        hi = max(self.source.hi, self.target.hi)
        return range(lo, hi + 1)

    def check(self) -> "ChainMap":
        for i in self.degrees():
            if self.at(i + 1) @ self.source.d(i) != self.target.d(i) @ self.at(i):
                raise NotAChainMap(f"square at degree {i} does not commute")
            m = self.at(i)
            for k, (a, b) in enumerate(zip(self.source.module(i).action, self.target.module(i).action)):
                if m @ a != b @ m:
                    raise NotAChainMap(f"f^{i} is not equivariant (basis element {k})")
        return self

    def is_chain_map(self) -> bool:
        try:
            self.check()
        except NotAChainMap:
            return False
        return True

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.comps.values())

    def __matmul__(self, other: "ChainMap") -> "ChainMap":
        """self after other."""
        comps = {i: self.at(i) @ other.at(i) for i in other.source.modules
                 if self.target.dim(i)}
        return ChainMap(other.source, self.target, comps)

    def __add__(self, other: "ChainMap") -> "ChainMap":
        degs = set(self.comps) | set(other.comps)
        return ChainMap(self.source, self.target, {i: self.at(i) + other.at(i) for i in degs})

    def __sub__(self, other: "ChainMap") -> "ChainMap":
        degs = set(self.comps) | set(other.comps)
        return ChainMap(self.source, self.target, {i: self.at(i) - other.at(i) for i in degs})

    def __neg__(self) -> "ChainMap":
        return ChainMap(self.source, self.target, {i: -m for i, m in self.comps.items()})

    def scale(self, c) -> "ChainMap":
        return ChainMap(self.source, self.target, {i: m.scale(c) for i, m in self.comps.items()})

    def equals(self, other: "ChainMap") -> bool:
        return all(self.at(i) == other.at(i) for i in set(self.degrees()) | set(other.degrees()))

    @classmethod
    def identity(cls, c: Complex) -> "ChainMap":
        return cls(c, c, {i: Mat.identity(c.field, m.dim) for i, m in c.modules.items()})

    @classmethod
    def zero(cls, c: Complex, d: Complex) -> "ChainMap":
        return cls(c, d, {})

    @classmethod
    def single(cls, f: ModuleMap, degree: int = 0,
               source: Complex | None = None, target: Complex | None = None) -> "ChainMap":
        source = source or Complex.single(f.source, degree)
        target = target or Complex.single(f.target, degree)
        return cls(source, target, {degree: f.matrix})


@dataclass(frozen=True, eq=False)
class Homotopy:
    """Components h^i : C^i -> D^{i-1}."""

    source: Complex
    target: Complex
    comps: dict

    def at(self, i: int) -> Mat:
        m = self.comps.get(i)
        if m is None:
            return Mat.zeros(self.source.field, self.target.dim(i - 1), self.source.dim(i))
        return m


@dataclass(frozen=True, eq=False)
class Triangle:
    """first -f-> second -g-> third -h-> first[1], all strict chain maps."""

    first: Complex
    second: Complex
    third: Complex
    f: ChainMap
    g: ChainMap
    h: ChainMap


# shift ------------------------------------------------------------------

def shift(c: Complex, n: int) -> Complex:
    """C[n]^i = C^{i+n}, d_{C[n]}^i = (-1)^n d_C^{i+n}."""
    sign = -1 if n % 2 else 1
    modules = {i - n: m for i, m in c.modules.items()}
    diffs = {i - n: (d if sign == 1 else -d) for i, d in c.diffs.items()}
    return Complex(c.algebra, modules, diffs)


def shift_map(f: ChainMap, n: int, source: Complex | None = None,
              target: Complex | None = None) -> ChainMap:
    """f[n]^i = f^{i+n} (no sign)."""
    source = source or shift(f.source, n)
    target = target or shift(f.target, n)
    return ChainMap(source, target, {i - n: m for i, m in f.comps.items()})


def truncate_below(c: Complex, lo: int) -> Complex:
    """Brutal truncation keeping degrees >= lo."""
    return Complex(c.algebra, {i: m for i, m in c.modules.items() if i >= lo},
                   {i: d for i, d in c.diffs.items() if i >= lo})


def direct_sum_complex(cs: list[Complex]) -> Complex:
    alg = cs[0].algebra
    degs = sorted(set().union(*[c.modules for c in cs]))
    modules = {i: direct_sum([c.module(i) for c in cs], alg) for i in degs}
    diffs = {i: Mat.diag(alg.field, [c.d(i) for c in cs]) for i in degs}
    return Complex(alg, modules, diffs)


# cohomology -------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Cohomology:
    degree: int
    module: FDModule
    cycles: Subspace
    q: Mat          # cycle coordinates -> class coordinates
    reps: Mat       # C^i x dim H: representative cycles of the class basis

    @property
    def dim(self) -> int:
        return self.module.dim

    def classes(self, v: Mat) -> Mat:
        """Class coordinates of cycles (columns of v)."""
        return self.q @ self.cycles.coordinates(v)


def cohomology(c: Complex, i: int) -> Cohomology:
    m = c.module(i)
    z = Subspace.kernel(c.d(i))
    bz = z.coordinates(c.d(i - 1))
    q, s = Subspace.span(bz).quotient()
    action = [q @ z.coordinates(a @ z.basis) @ s for a in m.action]
    mod = FDModule(c.algebra, tuple(action), q.rows)
    return Cohomology(i, mod, z, q, z.basis @ s)


def cohomology_dims(c: Complex) -> dict[int, int]:
    return {i: cohomology(c, i).dim for i in c.degrees()}


def euler_characteristic(c: Complex) -> tuple[int, int]:
    """(sum (-1)^i dim C^i, sum (-1)^i dim H^i)."""
    chain = sum((-1) ** (i % 2) * m.dim for i, m in c.modules.items())
    hom = sum((-1) ** (i % 2) * d for i, d in cohomology_dims(c).items())
    return chain, hom


def _induced(f: ChainMap, i: int, hc: Cohomology, hd: Cohomology) -> Mat:
    return hd.classes(f.at(i) @ hc.reps)


def induced_cohomology_map(f: ChainMap, i: int) -> ModuleMap:
    hc, hd = cohomology(f.source, i), cohomology(f.target, i)
    return ModuleMap(hc.module, hd.module, _induced(f, i, hc, hd))


def is_quasi_iso(f: ChainMap, degrees: Iterable[int] | None = None) -> bool:
    for i in (f.degrees() if degrees is None else degrees):
        hc, hd = cohomology(f.source, i), cohomology(f.target, i)
        if hc.dim != hd.dim:
            return False
        if hc.dim and _induced(f, i, hc, hd).rank() != hc.dim:
            return False
    return True


# cone -------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Cone:
    complex: Complex
    triangle: Triangle

    @property
    def j(self) -> ChainMap:
        return self.triangle.g

    @property
    def p(self) -> ChainMap:
        return self.triangle.h


def cone(f: ChainMap) -> Cone:
    c, d = f.source, f.target
    field = c.field
    lo = min(c.lo - 1, d.lo)
    hi = max(c.hi - 1, d.hi)
    modules = {i: direct_sum([c.module(i + 1), d.module(i)], c.algebra) for i in range(lo, hi + 1)}
    diffs = {}
    for i in range(lo, hi + 1):
        rows = [c.dim(i + 2), d.dim(i + 1)]
        cols = [c.dim(i + 1), d.dim(i)]
        diffs[i] = Mat.block(field, [[-c.d(i + 1), None], [f.at(i + 1), d.d(i)]], rows, cols)
    e = Complex(c.algebra, modules, diffs)
    c1 = shift(c, 1)
    j = ChainMap(d, e, {i: Mat.block(field, [[None], [Mat.identity(field, d.dim(i))]],
                                     [c.dim(i + 1), d.dim(i)], [d.dim(i)]) for i in d.modules})
    p = ChainMap(e, c1, {i: Mat.block(field, [[Mat.identity(field, c.dim(i + 1)), None]],
                                      [c.dim(i + 1)], [c.dim(i + 1), d.dim(i)]) for i in e.modules})
    return Cone(e, Triangle(c, d, e, f, j, p))


# homotopy ---------------------------------------------------------------

def _vec(x: Mat) -> Mat:
    return Mat(x.field, x.a.reshape(-1, 1).copy())


def _unvec(v: Mat, rows: int, cols: int) -> Mat:
    return Mat(v.field, v.a.reshape(rows, cols).copy())


def find_homotopy(f: ChainMap, g: ChainMap, degrees: Iterable[int] | None = None) -> Homotopy | None:
    """A-linear h with f^i - g^i = h^{i+1} d^i + d^{i-1} h^i, or None.

    ``degrees`` restricts the degrees where the identity is imposed (used to
    compare maps on truncated resolutions inside their valid window).
    """
    c, d = f.source, f.target
    field = c.field
    eq_degs = [i for i in (f.degrees() if degrees is None else degrees) if c.dim(i) and d.dim(i)]
    # unknown blocks h^k : C^k -> D^{k-1}
    unknowns: list[tuple[int, HomSpace]] = []
    for k in c.modules:
        if d.dim(k - 1):
            hs = hom_module(c.module(k), d.module(k - 1))
            if hs.dim:
                unknowns.append((k, hs))
    row_off, n_rows = {}, 0
    for i in eq_degs:
        row_off[i] = n_rows
        n_rows += d.dim(i) * c.dim(i)
    rhs = Mat.zeros(field, n_rows, 1)
    for i in eq_degs:
        diff = f.at(i) - g.at(i)
        rhs.a[row_off[i]:row_off[i] + diff.rows * diff.cols, :] = _vec(diff).a
    n_cols = sum(hs.dim for _, hs in unknowns)
    system = Mat.zeros(field, n_rows, n_cols)
    col = 0
    for k, hs in unknowns:
        for beta in hs.basis():
            if k in row_off:       # d_D^{k-1} h^k in equation k
                blk = d.d(k - 1) @ beta
                system.a[row_off[k]:row_off[k] + blk.rows * blk.cols, col] = blk.a.reshape(-1)
            if k - 1 in row_off:   # h^k d_C^{k-1} in equation k-1
                blk = beta @ c.d(k - 1)
                system.a[row_off[k - 1]:row_off[k - 1] + blk.rows * blk.cols, col] = blk.a.reshape(-1)
            col += 1
    if n_rows == 0:
        return Homotopy(c, d, {})
    sol = solve_linear(system, rhs)
    if sol is None:
        return None
    comps, col = {}, 0
    for k, hs in unknowns:
        comps[k] = hs.element(sol.sub(rows=range(col, col + hs.dim)))
        col += hs.dim
    return Homotopy(c, d, comps)


def homotopy_holds(f: ChainMap, g: ChainMap, h: Homotopy, degrees: Iterable[int] | None = None) -> bool:
    c, d = f.source, f.target
    for i in (f.degrees() if degrees is None else degrees):
        lhs = f.at(i) - g.at(i)
        rhs = h.at(i + 1) @ c.d(i) + d.d(i - 1) @ h.at(i)
        if lhs != rhs:
            return False
    return True


# total Hom complex ------------------------------------------------------

@dataclass(frozen=True, eq=False)
class HomComplex:
    """Hom^n(C, D) = (+)_i Hom_A(C^i, D^{i+n}) as a complex of vector spaces."""

    source: Complex
    target: Complex
    complex: Complex
    summands: dict          # n -> list of (i, HomSpace, offset)

    def summand(self, n: int, i: int):
        for j, hs, off in self.summands.get(n, []):
            if j == i:
                return hs, off
        return None


def hom_complex(c: Complex, d: Complex) -> HomComplex:
    """Total Hom complex with d(phi) = d_D phi - (-1)^n phi d_C."""
    field = c.field
    if c.is_zero() or d.is_zero():
        return HomComplex(c, d, Complex(ground_algebra(field), {}), {})
    summands: dict[int, list] = {}
    for n in range(d.lo - c.hi, d.hi - c.lo + 1):
        entries, off = [], 0
        for i in c.modules:
            if d.dim(i + n):
                hs = hom_module(c.module(i), d.module(i + n))
                if hs.dim:
                    entries.append((i, hs, off))
                    off += hs.dim
        if entries:
            summands[n] = entries
    dims = {n: sum(hs.dim for _, hs, _ in e) for n, e in summands.items()}
    diffs = {}
    for n, entries in summands.items():
        if n + 1 not in summands:
            continue
        sign = -1 if n % 2 else 1
        tgt = {i: (hs, off) for i, hs, off in summands[n + 1]}
        mat = Mat.zeros(field, dims[n + 1], dims[n])
        for i, hs, off in entries:
            for t, phi in enumerate(hs.basis()):
                if i in tgt:
                    ths, toff = tgt[i]
                    v = ths.coordinates(d.d(i + n) @ phi)
                    mat.a[toff:toff + ths.dim, off + t] += v.a[:, 0]
                if i - 1 in tgt:
                    ths, toff = tgt[i - 1]
                    v = ths.coordinates(phi @ c.d(i - 1))
                    mat.a[toff:toff + ths.dim, off + t] -= sign * v.a[:, 0]
        diffs[n] = Mat(field, field.reduce(mat.a))
    modules = {n: vector_space(field, k) for n, k in dims.items()}
    return HomComplex(c, d, Complex(ground_algebra(field), modules, diffs), summands)


def hom_complex_map(src: HomComplex, tgt: HomComplex, pre: ChainMap | None = None,
                    post: ChainMap | None = None) -> ChainMap:
    """Map Hom(C, D) -> Hom(C', D') given by phi |-> post o phi o pre.

    ``pre`` : C' -> C and ``post`` : D -> D' (either may be None for identity).
    """
    field = src.source.field
    comps = {}
    for n, entries in src.summands.items():
        if n not in tgt.summands:
            continue
        tdim = tgt.complex.dim(n)
        mat = Mat.zeros(field, tdim, src.complex.dim(n))
        for i, hs, off in entries:
            found = tgt.summand(n, i)
            if found is None:
                continue
            ths, toff = found
            for t, phi in enumerate(hs.basis()):
                x = phi
                if post is not None:
                    x = post.at(i + n) @ x
                if pre is not None:
                    x = x @ pre.at(i)
                mat.a[toff:toff + ths.dim, off + t] = ths.coordinates(x).a[:, 0]
        comps[n] = mat
    return ChainMap(src.complex, tgt.complex, comps)


# total tensor complex ---------------------------------------------------

@dataclass(frozen=True, eq=False)
class TensorComplex:
    left: Complex
    right: Complex
    complex: Complex
    summands: dict          # n -> list of (i, j, TensorSpace, offset)


def tensor_complex(c: Complex, d: Complex) -> TensorComplex:
    """Total tensor complex over A with d(x (x) y) = dx (x) y + (-1)^i x (x) dy."""
    alg = c.algebra
    field = c.field
    summands: dict[int, list] = {}
    for i in c.modules:
        for j in d.modules:
            ts = tensor_space(c.module(i), d.module(j))
            if ts.dim:
                summands.setdefault(i + j, []).append([i, j, ts])
    for n in summands:
        off = 0
        entries = sorted(summands[n], key=lambda e: e[0])
        for e in entries:
            e.append(off)
            off += e[2].dim
        summands[n] = [tuple(e) for e in entries]
    modules = {}
    for n, entries in summands.items():
        parts = []
        for i, j, ts, _ in entries:
            i_r = Mat.identity(field, d.dim(j))
            act = [ts.induced(ts, a, i_r) for a in c.module(i).action]
            parts.append(FDModule(alg, tuple(act), ts.dim))
        modules[n] = direct_sum(parts, alg)
    diffs = {}
    for n, entries in summands.items():
        if n + 1 not in summands:
            continue
        tgt = {(i, j): (ts, off) for i, j, ts, off in summands[n + 1]}
        mat = Mat.zeros(field, modules[n + 1].dim, modules[n].dim)
        for i, j, ts, off in entries:
            sign = -1 if i % 2 else 1
            if (i + 1, j) in tgt:
                tts, toff = tgt[(i + 1, j)]
                blk = ts.induced(tts, c.d(i), Mat.identity(field, d.dim(j)))
                mat.a[toff:toff + tts.dim, off:off + ts.dim] += blk.a
            if (i, j + 1) in tgt:
                tts, toff = tgt[(i, j + 1)]
                blk = ts.induced(tts, Mat.identity(field, c.dim(i)), d.d(j))
                mat.a[toff:toff + tts.dim, off:off + ts.dim] += sign * blk.a
        diffs[n] = Mat(field, field.reduce(mat.a))
    return TensorComplex(c, d, Complex(alg, modules, diffs), summands)
