"""Free and injective resolutions of bounded complexes, and lifting of maps.

Free resolutions are built top-down.  Having built P^k for k > n together
with a chain map alpha to C, the next term covers

    K_n = {(p, c) in Z^{n+1}(P) (+) C^n : alpha(p) = d_C(c)}

by a free module; this makes alpha injective on H^{n+1} and surjective on
H^n.  Below the bottom of C the same step resolves the remaining kernel, so
modules and complexes share one code path.  Injective resolutions are linear
duals of free resolutions of the dual complex.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass

from ..algebra import (FDModule, ModuleMap, direct_sum, dual_module, free_module,
                       generated_submodule, zero_module)
from ..complexes import ChainMap, Complex, find_homotopy, truncate_below
from ..linalg import Mat, Subspace, solve_linear

__all__ = [
    "LiftFailed", "Resolution", "dual_complex", "dual_chain_map",
    "free_resolution", "injective_resolution", "resolve_complex", "lift_map", "lifts_homotopic",
    "clear_resolution_cache",
]


class LiftFailed(RuntimeError):
    """A lifting equation had no solution: the resolution is broken."""


@dataclass(frozen=True, eq=False)
class Resolution:
    kind: str                   # "free" or "injective"
    complex: Complex
    augmentation: ChainMap      # free: P -> C, injective: C -> I
    resolved: Complex
    depth: int
    truncated: bool
    bound: int | None           # free: exact for H^i, i >= bound; injective: i <= bound
    dual_of: "Resolution | None" = None

    def valid(self, i: int) -> bool:
        if self.bound is None:
            return True
        return i >= self.bound if self.kind == "free" else i <= self.bound


def dual_complex(c: Complex) -> Complex:
    """D(C)^i = D(C^{-i}) with transposed differentials."""
    modules = {-i: dual_module(m) for i, m in c.modules.items()}
    diffs = {-i - 1: d.T for i, d in c.diffs.items()}
    return Complex(c.algebra, modules, diffs)


def dual_chain_map(f: ChainMap, source: Complex | None = None,
                   target: Complex | None = None) -> ChainMap:
    """D(f) : D(target) -> D(source)."""
    source = source or dual_complex(f.target)
    target = target or dual_complex(f.source)
    return ChainMap(source, target, {-i: m.T for i, m in f.comps.items()})


def _unit_in_block(m: FDModule, t: int) -> Mat:
    alg = m.algebra
    v = Mat.zeros(alg.field, m.dim, 1)
    n = alg.dim
    v.a[t * n:(t + 1) * n, :] = alg.unit.a
    return v


def _free_cover_map(ambient: FDModule, gens: list[Mat]) -> tuple[FDModule, Mat]:
    """A^g -> ambient sending the unit of block t to gens[t]."""
    alg = ambient.algebra
    p = free_module(alg, len(gens))
    cols = [a @ g for g in gens for a in ambient.action]
    mat = cols[0].hstack(*cols[1:]) if cols else Mat.zeros(alg.field, ambient.dim, 0)
    return p, mat


def _choose_generators(ambient: FDModule, vectors: Mat, rng=None) -> list[Mat]:
    """Greedy generating set taken from the columns of ``vectors``."""
    field = ambient.field
    if rng is not None and vectors.cols:
        # random invertible recombination of the spanning vectors
        k = vectors.cols
        while True:
            r = Mat.from_rows(field, [[int(x) for x in row] for row in rng.integers(-3, 4, size=(k, k))])
            if r.rank() == k:
                break
        vectors = vectors @ r
    gens: list[Mat] = []
    span = Subspace.span(Mat.zeros(field, ambient.dim, 0))
    for t in range(vectors.cols):
        v = vectors.sub(cols=[t])
        if span.contains(v):
            continue
        gens.append(v)
        span = generated_submodule(ambient, gens[0].hstack(*gens[1:]) if len(gens) > 1 else gens[0])
        if span.dim == ambient.dim:
            break
    return gens


def _free_resolution_complex(c: Complex, depth: int, rng=None) -> Resolution:
    alg, field = c.algebra, c.field
    if c.is_zero():
        z = Complex(alg, {})
        return Resolution("free", z, ChainMap.zero(z, c), c, depth, False, None)
    lowest = c.lo - depth
    p_mod: dict[int, FDModule] = {}
    p_d: dict[int, Mat] = {}
    alpha: dict[int, Mat] = {}
    truncated = False
    n = c.hi
    while True:
        p1 = p_mod.get(n + 1)
        p1_dim = p1.dim if p1 is not None else 0
        cn = c.module(n)
        # cycles of P in degree n+1
        if p1_dim:
            nxt = p_mod.get(n + 2)
            dnext = p_d.get(n + 1, Mat.zeros(field, nxt.dim if nxt else 0, p1_dim))
            z = Subspace.kernel(dnext)
            a1 = alpha.get(n + 1, Mat.zeros(field, c.dim(n + 1), p1_dim)) @ z.basis
        else:
            z = Subspace.kernel(Mat.zeros(field, 0, 0))
            a1 = Mat.zeros(field, c.dim(n + 1), 0)
        system = a1.hstack(-c.d(n))
        ks = Subspace.kernel(system)
        # back to ambient coordinates P^{n+1} (+) C^n
        zpart = ks.basis.sub(rows=range(z.dim))
        cpart = ks.basis.sub(rows=range(z.dim, z.dim + cn.dim))
        kvec = (z.basis @ zpart).vstack(cpart)
        if n < lowest:
            truncated = ks.dim > 0
            break
        if ks.dim == 0 and n < c.lo:
            break
        if ks.dim:
            ambient = direct_sum([p1 if p1 is not None else zero_module(alg), cn], alg)
            gens = _choose_generators(ambient, kvec, rng)
            pn, cover = _free_cover_map(ambient, gens)
            p_mod[n] = pn
            if p1_dim:
                p_d[n] = cover.sub(rows=range(p1_dim))
            if cn.dim:
                alpha[n] = cover.sub(rows=range(p1_dim, p1_dim + cn.dim))
        n -= 1
    pc = Complex(alg, p_mod, p_d)
    aug = ChainMap(pc, c, alpha)
    bound = (lowest + 1) if truncated else None
    return Resolution("free", pc, aug, c, depth, truncated, bound)


_CACHE: dict = {}
_CACHE_LOCK = threading.Lock()


def clear_resolution_cache() -> None:
    with _CACHE_LOCK:
        _CACHE.clear()


def _cache_key(c: Complex, kind: str, depth: int):
    return (kind, depth, id(c.algebra),
            tuple((i, m.key()) for i, m in c.modules.items()),
            tuple((i, d.key()) for i, d in c.diffs.items()))


def resolve_complex(c: Complex, kind: str = "free", depth: int = 4, rng=None) -> Resolution:
    """Free (bounded above) or injective (bounded below) resolution of a bounded complex.

    ``depth`` counts the degrees built below the bottom of ``c`` (free) or
    above its top (injective).  Deterministic results are cached; passing
    ``rng`` randomises the generating sets and bypasses the cache.
    """
    if depth < 0:
        raise ValueError("depth must be non-negative")
    if kind not in ("free", "injective"):
        raise ValueError(f"unknown resolution kind {kind!r}")
    key = None
    if rng is None:
        key = _cache_key(c, kind, depth)
        with _CACHE_LOCK:
            hit = _CACHE.get(key)
        if hit is not None and hit.resolved is c:
            return hit
    if kind == "free":
        res = _free_resolution_complex(c, depth, rng)
    else:
        dc = dual_complex(c)
        fr = _free_resolution_complex(dc, depth, rng)
        ic = dual_complex(fr.complex)
        coaug = ChainMap(c, ic, {i: m.T for i, m in
                                 ((-k, a) for k, a in fr.augmentation.comps.items())})
        bound = None if fr.bound is None else -fr.bound
        res = Resolution("injective", ic, coaug, c, depth, fr.truncated, bound, fr)
    if key is not None:
        with _CACHE_LOCK:
            _CACHE[key] = res
    return res


def free_resolution(m: FDModule, depth: int = 4, rng=None) -> Resolution:
    return resolve_complex(Complex.single(m), "free", depth, rng)


def injective_resolution(m: FDModule, depth: int = 4, rng=None) -> Resolution:
    return resolve_complex(Complex.single(m), "injective", depth, rng)


def _as_chain_map(f, rs: Resolution, rt: Resolution) -> ChainMap:
    if isinstance(f, ModuleMap):
        return ChainMap(rs.resolved, rt.resolved, {0: f.matrix})
    return f


def _lift_free(f: ChainMap, rs: Resolution, rt: Resolution, rng=None) -> ChainMap:
    p, q = rs.complex, rt.complex
    alg, field = p.algebra, p.field
    stop = p.lo
    if rt.truncated:
        stop = max(stop, q.lo)
    comps: dict[int, Mat] = {}
    for n in range(p.hi, stop - 1, -1):
        pn = p.module(n)
        if not pn.dim:
            continue
        qn = q.module(n)
        upper = comps.get(n + 1, Mat.zeros(field, q.dim(n + 1), p.dim(n + 1)))
        rhs_top = upper @ p.d(n)
        rhs_bot = f.at(n) @ rs.augmentation.at(n)
        lhs = q.d(n).vstack(rt.augmentation.at(n))
        ncov = pn.dim // alg.dim
        images = []
        for t in range(ncov):
            u = _unit_in_block(pn, t)
            b = (rhs_top @ u).vstack(rhs_bot @ u)
            if qn.dim == 0:
                if not b.is_zero():
                    raise LiftFailed(f"no lift in degree {n}: target resolution vanishes there")
                images.append(Mat.zeros(field, 0, 1))
                continue
            y = solve_linear(lhs, b)
            if y is None:
                raise LiftFailed(f"no lift in degree {n} for generator {t}")
            if rng is not None:
                ker = Subspace.kernel(lhs).basis
                if ker.cols:
                    coeffs = Mat.column(field, [int(x) for x in rng.integers(-3, 4, size=ker.cols)])
                    y = y + ker @ coeffs
            images.append(y)
        if qn.dim:
            cols = [a @ y for y in images for a in qn.action]
            comps[n] = cols[0].hstack(*cols[1:])
    if stop > p.lo:
        return ChainMap(truncate_below(p, stop), truncate_below(q, stop), comps)
    return ChainMap(p, q, comps)


def lift_map(f, rs: Resolution, rt: Resolution, rng=None) -> ChainMap:
    """Lift f (ModuleMap or ChainMap) between the resolved objects to the resolutions.

    For truncated target resolutions the lift lives on the brutal truncations
    above the lowest constructed degree.
    """
    if rs.kind != rt.kind:
        raise ValueError("resolutions of different kinds")
    f = _as_chain_map(f, rs, rt)
    if rs.kind == "free":
        return _lift_free(f, rs, rt, rng)
    # injective: dualise, lift between the underlying free resolutions, dualise back
    fs, ft = rs.dual_of, rt.dual_of
    df = dual_chain_map(f, ft.resolved, fs.resolved)
    lifted = _lift_free(df, ft, fs, rng)
    src = dual_complex(lifted.target) if lifted.target is not fs.complex else rs.complex
    tgt = dual_complex(lifted.source) if lifted.source is not ft.complex else rt.complex
    return ChainMap(src, tgt, {-i: m.T for i, m in lifted.comps.items()})


def lifts_homotopic(one: ChainMap, two: ChainMap, kind: str = "free") -> bool:
    """Whether two lifts of the same map agree up to homotopy.

    Lifts between truncated resolutions are only pinned down away from the
    last constructed degree (the lowest for free, the highest for injective),
    so the identity is imposed on the remaining degrees.
    """
    c = one.source
    if c.is_zero():
        return True
    degrees = range(c.lo + 1, c.hi + 1) if kind == "free" else range(c.lo, c.hi)
    return find_homotopy(one, two, degrees) is not None
