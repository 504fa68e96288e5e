"""Long exact sequences and checkers for the triangulated structure on cones."""
from __future__ import annotations

from dataclasses import dataclass

from ..algebra import ModuleMap
from ..complexes import (ChainMap, Complex, Cone, Triangle, cohomology, cone, find_homotopy,
                         is_quasi_iso, shift, shift_map)
from ..linalg import Mat, Subspace, solve_linear
from .verdict import Failure, NotSES, Verdict, exactness_failures

__all__ = [
    "NotCommuting", "LongExactSequence", "cohomology_les", "ses_long_exact_sequence",
    "check_ses", "ses_to_triangle_check", "tr2_rotate", "tr3_complete", "octahedron",
    "windmill_check", "as_chain_map",
]


class NotCommuting(ValueError):
    """The square d o f ~ f' o c admits no homotopy witness."""


def as_chain_map(f) -> ChainMap:
    """Promote a ModuleMap to a chain map between complexes concentrated in degree 0."""
    if isinstance(f, ModuleMap):
        return ChainMap(Complex.single(f.source), Complex.single(f.target), {0: f.matrix})
    return f


@dataclass
class LongExactSequence:
    labels: list[str]
    dims: list[int]
    maps: list[Mat]
    verdict: Verdict


def _degree_window(*cs: Complex) -> range:
    live = [c for c in cs if not c.is_zero()]
    if not live:
        return range(0)
    return range(min(c.lo for c in live) - 1, max(c.hi for c in live) + 2)


def cohomology_les(t: Triangle, degrees: range | None = None) -> LongExactSequence:
    """Roll out ... -> H^i(C) -> H^i(D) -> H^i(E) -> H^{i+1}(C) -> ... and test exactness.

    The third map lands in C[1], whose H^i is identified with H^{i+1}(C).
    """
    degrees = _degree_window(t.first, t.second, t.third) if degrees is None else degrees
    labels, dims, maps = [], [], []
    for i in degrees:
        hc, hd, he = (cohomology(t.first, i), cohomology(t.second, i), cohomology(t.third, i))
        hc1 = cohomology(t.h.target, i)
        for name, h in (("first", hc), ("second", hd), ("third", he)):
            labels.append(f"H^{i}({name})")
            dims.append(h.dim)
        maps.append(hd.classes(t.f.at(i) @ hc.reps))
        maps.append(he.classes(t.g.at(i) @ hd.reps))
        maps.append(hc1.classes(t.h.at(i) @ he.reps))
    if maps:
        maps.pop()
    fails = exactness_failures(labels, dims, maps, start_zero=False)
    return LongExactSequence(labels, dims, maps, Verdict.of(fails))


def check_ses(f: ChainMap, g: ChainMap) -> None:
    """Raise NotSES unless 0 -> C -> D -> E -> 0 is exact in every degree."""
    c, d, e = f.source, f.target, g.target
    if g.source is not d and g.source.dims() != d.dims():
        raise NotSES("maps are not composable")
    for i in sorted(set(c.modules) | set(d.modules) | set(e.modules)):
        fi, gi = f.at(i), g.at(i)
        if not (gi @ fi).is_zero():
            raise NotSES(f"g o f != 0 in degree {i}")
        rf = fi.rank() if fi.rows and fi.cols else 0
        rg = gi.rank() if gi.rows and gi.cols else 0
        if rf != c.dim(i):
            raise NotSES(f"first map is not injective in degree {i}")
        if rg != e.dim(i):
            raise NotSES(f"second map is not surjective in degree {i}")
        if rf + rg != d.dim(i):
            raise NotSES(f"not exact in the middle in degree {i}")


def _connecting(f: ChainMap, g: ChainMap, i: int) -> Mat:
    """Snake map H^i(E) -> H^{i+1}(C) for a degreewise short exact sequence."""
    c, d, e = f.source, f.target, g.target
    he, hc1 = cohomology(e, i), cohomology(c, i + 1)
    field = c.field
    if he.dim == 0 or hc1.dim == 0:
        return Mat.zeros(field, hc1.dim, he.dim)
    y = solve_linear(g.at(i), he.reps)
    x = solve_linear(f.at(i + 1), d.d(i) @ y)
    if y is None or x is None:
        raise NotSES(f"connecting map undefined in degree {i}")
    return hc1.classes(x)


def ses_long_exact_sequence(f: ChainMap, g: ChainMap, degrees: range,
                            start_zero: bool = False) -> LongExactSequence:
    """LES of a degreewise short exact sequence of complexes, via the snake map."""
    c, d, e = f.source, f.target, g.target
    labels, dims, maps = [], [], []
    for i in degrees:
        hc, hd, he = cohomology(c, i), cohomology(d, i), cohomology(e, i)
        for name, h in (("first", hc), ("second", hd), ("third", he)):
            labels.append(f"H^{i}({name})")
            dims.append(h.dim)
        maps.append(hd.classes(f.at(i) @ hc.reps))
        maps.append(he.classes(g.at(i) @ hd.reps))
        maps.append(_connecting(f, g, i))
    if maps:
        maps.pop()
    fails = exactness_failures(labels, dims, maps, start_zero=start_zero)
    return LongExactSequence(labels, dims, maps, Verdict.of(fails))


@dataclass
class SesTriangle:
    verdict: Verdict
    qis: ChainMap
    cone: Cone
    les: LongExactSequence


def ses_to_triangle_check(f, g) -> SesTriangle:
    """For 0 -> C -f-> D -g-> E -> 0 verify that (0, g): Cone(f) -> E is a quasi-isomorphism."""
    f, g = as_chain_map(f), as_chain_map(g)
    if isinstance(g.source, Complex) and g.source is not f.target:
        g = ChainMap(f.target, g.target, g.comps)
    check_ses(f, g)
    c, d, e = f.source, f.target, g.target
    cn = cone(f)
    field = c.field
    comps = {i: Mat.block(field, [[None, g.at(i)]], [e.dim(i)], [c.dim(i + 1), d.dim(i)])
             for i in cn.complex.modules}
    theta = ChainMap(cn.complex, e, comps)
    fails: list[Failure] = []
    if not theta.is_chain_map():
        fails.append(Failure("Cone(f) -> E", "not a chain map"))
    elif not is_quasi_iso(theta, _degree_window(cn.complex, e)):
        fails.append(Failure("Cone(f) -> E", "not a quasi-isomorphism"))
    les = ses_long_exact_sequence(f, g, _degree_window(c, d, e), start_zero=True)
    fails.extend(les.verdict.failures)
    tri_les = cohomology_les(cn.triangle)
    fails.extend(tri_les.verdict.failures)
    return SesTriangle(Verdict.of(fails), theta, cn, les)


def _block(field, blocks, rows, cols) -> Mat:
    return Mat.block(field, blocks, rows, cols)


def tr2_rotate(t) -> Verdict:
    """Check that D -> Cone(f) -> C[1] -> D[1] is exact for the standard triangle of f.

    Builds psi: C[1] -> Cone(j), c |-> (-f c, c, 0), and the projection back,
    then checks they are mutually inverse up to homotopy.
    """
    f = t.triangle.f if isinstance(t, Cone) else (t.f if isinstance(t, Triangle) else as_chain_map(t))
    cn = cone(f)
    j = cn.j
    cj = cone(j)
    c, d = f.source, f.target
    field = c.field
    c1 = cn.p.target
    psi, pi = {}, {}
    for i in range(min(c.lo - 1, cj.complex.lo), max(c.hi, cj.complex.hi) + 1):
        rows = [d.dim(i + 1), c.dim(i + 1), d.dim(i)]
        if c.dim(i + 1):
            ident = Mat.identity(field, c.dim(i + 1))
            psi[i] = _block(field, [[-f.at(i + 1)], [ident], [None]], rows, [c.dim(i + 1)])
            pi[i] = _block(field, [[None, ident, None]], [c.dim(i + 1)], rows)
    psi_m = ChainMap(c1, cj.complex, psi)
    pi_m = ChainMap(cj.complex, c1, pi)
    fails: list[Failure] = []
    if not psi_m.is_chain_map():
        fails.append(Failure("psi", "C[1] -> Cone(j) is not a chain map"))
    if not pi_m.is_chain_map():
        fails.append(Failure("pi", "Cone(j) -> C[1] is not a chain map"))
    if not fails:
        if not (pi_m @ psi_m).equals(ChainMap.identity(c1)):
            fails.append(Failure("pi o psi", "differs from the identity"))
        if find_homotopy(psi_m @ pi_m, ChainMap.identity(cj.complex)) is None:
            fails.append(Failure("psi o pi", "not homotopic to the identity"))
        if not is_quasi_iso(psi_m, _degree_window(c1, cj.complex)):
            fails.append(Failure("psi", "not a quasi-isomorphism"))
        # compatibility with the rotated triangle
        if not (pi_m @ cj.j).equals(cn.p):
            fails.append(Failure("pi o j'", "differs from the cone projection"))
        if not (cj.p @ psi_m).equals(-shift_map(f, 1, c1, cj.p.target)):
            fails.append(Failure("p' o psi", "differs from -f[1]"))
    les = cohomology_les(Triangle(d, cn.complex, c1, j, cn.p, -shift_map(f, 1, c1)))
    fails.extend(les.verdict.failures)
    return Verdict.of(fails, psi=psi_m, pi=pi_m)


@dataclass
class Tr3Result:
    map: ChainMap
    verdict: Verdict


def tr3_complete(c: ChainMap, d: ChainMap, f: ChainMap, f2: ChainMap) -> Tr3Result:
    """Complete a square d f ~ f' c to a map of cone triangles e: Cone(f) -> Cone(f')."""
    c, d, f, f2 = (as_chain_map(x) for x in (c, d, f, f2))
    h = find_homotopy(d @ f, f2 @ c)
    if h is None:
        raise NotCommuting("d o f and f' o c are not homotopic")
    cn, cn2 = cone(f), cone(f2)
    src, tgt = f.source, f2.source
    dd, dd2 = f.target, f2.target
    field = src.field
    comps = {}
    for i in sorted(set(cn.complex.modules) | set(cn2.complex.modules)):
        rows = [tgt.dim(i + 1), dd2.dim(i)]
        cols = [src.dim(i + 1), dd.dim(i)]
        comps[i] = _block(field, [[c.at(i + 1), None], [h.at(i + 1), d.at(i)]], rows, cols)
    e = ChainMap(cn.complex, cn2.complex, comps)
    fails: list[Failure] = []
    if not e.is_chain_map():
        fails.append(Failure("e", "not a chain map"))
    if not (e @ cn.j).equals(cn2.j @ d):
        fails.append(Failure("e o j = j' o d", "square does not commute"))
    c1 = shift_map(c, 1, cn.p.target, cn2.p.target)
    if not (cn2.p @ e).equals(c1 @ cn.p):
        fails.append(Failure("p' o e = c[1] o p", "square does not commute"))
    return Tr3Result(e, Verdict.of(fails, homotopy=h))


@dataclass
class OctahedronResult:
    u: ChainMap
    v: ChainMap
    w: ChainMap
    verdict: Verdict


def octahedron(f, g) -> OctahedronResult:
    """Triangle of cones Cone(f) -> Cone(gf) -> Cone(g) -> Cone(f)[1] with its commutations."""
    f, g = as_chain_map(f), as_chain_map(g)
    if g.source is not f.target:
        g = ChainMap(f.target, g.target, g.comps)
    gf = g @ f
    cf, cgf, cg = cone(f), cone(gf), cone(g)
    c, d, e = f.source, f.target, g.target
    field = c.field
    u, v, w = {}, {}, {}
    cf1 = shift(cf.complex, 1)
    for i in sorted(set(cf.complex.modules) | set(cgf.complex.modules) | set(cg.complex.modules)
                    | set(cf1.modules)):
        ic = Mat.identity(field, c.dim(i + 1))
        u[i] = _block(field, [[ic, None], [None, g.at(i)]],
                      [c.dim(i + 1), e.dim(i)], [c.dim(i + 1), d.dim(i)])
        v[i] = _block(field, [[f.at(i + 1), None], [None, Mat.identity(field, e.dim(i))]],
                      [d.dim(i + 1), e.dim(i)], [c.dim(i + 1), e.dim(i)])
        # Cone(g)^i = D^{i+1} + E^i  ->  Cone(f)[1]^i = C^{i+2} + D^{i+1}
        w[i] = _block(field, [[None, None], [Mat.identity(field, d.dim(i + 1)), None]],
                      [c.dim(i + 2), d.dim(i + 1)], [d.dim(i + 1), e.dim(i)])
    um = ChainMap(cf.complex, cgf.complex, u)
    vm = ChainMap(cgf.complex, cg.complex, v)
    wm = ChainMap(cg.complex, cf1, w)
    fails: list[Failure] = []
    for name, m in (("u", um), ("v", vm), ("w", wm)):
        if not m.is_chain_map():
            fails.append(Failure(name, "not a chain map"))
    if fails:
        return OctahedronResult(um, vm, wm, Verdict.of(fails))
    # commutations with the three standard triangles
    if not (um @ cf.j).equals(cgf.j @ g):
        fails.append(Failure("u o j_f = j_gf o g", "does not commute"))
    if not (cgf.p @ um).equals(cf.p):
        fails.append(Failure("p_gf o u = p_f", "does not commute"))
    if not (vm @ cgf.j).equals(cg.j):
        fails.append(Failure("v o j_gf = j_g", "does not commute"))
    f1 = shift_map(f, 1, cgf.p.target, cg.p.target)
    if not (cg.p @ vm).equals(f1 @ cgf.p):
        fails.append(Failure("p_g o v = f[1] o p_gf", "does not commute"))
    jf1 = shift_map(cf.j, 1, cg.p.target, cf1)
    if not (wm).equals(jf1 @ cg.p):
        fails.append(Failure("w = j_f[1] o p_g", "does not commute"))
    # Cone(u) is quasi-isomorphic to Cone(g) compatibly with the triangle maps
    cu = cone(um)
    theta = {}
    for i in cu.complex.modules:
        # Cone(u)^i = Cone(f)^{i+1} + Cone(gf)^i = (C^{i+2} + D^{i+1}) + (C^{i+1} + E^i)
        rows = [d.dim(i + 1), e.dim(i)]
        cols = [c.dim(i + 2), d.dim(i + 1), c.dim(i + 1), e.dim(i)]
        theta[i] = _block(field, [[None, Mat.identity(field, d.dim(i + 1)), f.at(i + 1), None],
                                  [None, None, None, Mat.identity(field, e.dim(i))]], rows, cols)
    th = ChainMap(cu.complex, cg.complex, theta)
    if not th.is_chain_map():
        fails.append(Failure("Cone(u) -> Cone(g)", "not a chain map"))
    else:
        if not is_quasi_iso(th, _degree_window(cu.complex, cg.complex)):
            fails.append(Failure("Cone(u) -> Cone(g)", "not a quasi-isomorphism"))
        if not (th @ cu.j).equals(vm):
            fails.append(Failure("theta o j_u = v", "does not commute"))
        pu = ChainMap(cu.complex, cf1, cu.p.comps)
        if find_homotopy(wm @ th, pu) is None:
            fails.append(Failure("w o theta ~ p_u", "not homotopic"))
    les = cohomology_les(Triangle(cf.complex, cgf.complex, cg.complex, um, vm, wm))
    fails.extend(les.verdict.failures)
    return OctahedronResult(um, vm, wm, Verdict.of(fails, theta=th))


@dataclass
class Windmill:
    verdict: Verdict
    labels: list[str]
    dims: list[int]
    maps: list[Mat]


def windmill_check(f: ModuleMap, g: ModuleMap) -> Windmill:
    """ker f -> ker gf -> ker g -> coker f -> coker gf -> coker g, exact with zero ends."""
    a, b = f.matrix, g.matrix
    if b.cols != a.rows:
        raise ValueError("maps are not composable")
    ba = b @ a
    kf, kgf, kg = Subspace.kernel(a), Subspace.kernel(ba), Subspace.kernel(b)
    qf, sf = Subspace.span(a).quotient()
    qgf, sgf = Subspace.span(ba).quotient()
    qg, _ = Subspace.span(b).quotient()
    maps = [
        kgf.coordinates(kf.basis),
        kg.coordinates(a @ kgf.basis),
        qf @ kg.basis,
        qgf @ b @ sf,
        qg @ sgf,
    ]
    labels = ["ker f", "ker gf", "ker g", "coker f", "coker gf", "coker g"]
    dims = [kf.dim, kgf.dim, kg.dim, qf.rows, qgf.rows, qg.rows]
    fails = exactness_failures(labels, dims, maps, start_zero=True, end_zero=True)
    return Windmill(Verdict.of(fails), labels, dims, maps)

