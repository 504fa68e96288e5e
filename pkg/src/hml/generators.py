"""Small algebras and random instances for property tests and demos."""
from __future__ import annotations

from fractions import Fraction
from math import lcm

import numpy as np

from .algebra import (Algebra, AlgebraMap, FDModule, ModuleMap, free_module, generated_submodule, hom_module,
                      load_algebra, quotient_module, submodule)
from .complexes import ChainMap, Complex, find_homotopy
from .k3lattice import (EvenLattice, ExtendedLattice, HodgePeriod, MukaiElement, diagonal_lattice,
                        mukai_pairing)
from .linalg import GF, QQ, Field, Mat, Subspace, inverse

__all__ = [
    "truncated_polynomial", "square_zero", "split_product", "product_algebra", "diagonal_map",
    "algebra_catalog",
    "random_mat", "random_module", "random_module_map", "random_complex", "random_chain_map",
    "random_ses", "random_tr3_instance", "random_minus_two", "random_ample_period",
]


# algebras ---------------------------------------------------------------

def truncated_polynomial(field: Field, n: int) -> Algebra:
    """k[x]/(x^n) on the basis 1, x, ..., x^{n-1}."""
    c = [[[1 if i + j == k else 0 for k in range(n)] for j in range(n)] for i in range(n)]
    unit = [1] + [0] * (n - 1)
    labels = ["1"] + ["x" if i == 1 else f"x^{i}" for i in range(1, n)]
    return load_algebra(field, c, unit, labels, name=f"k[x]/(x^{n})")


def square_zero(field: Field, m: int = 2) -> Algebra:
    """k[y_1..y_m]/(y)^2: the unit plus m generators with all products zero."""
    n = m + 1
    c = [[[0] * n for _ in range(n)] for _ in range(n)]
    for j in range(n):
        c[0][j][j] = c[j][0][j] = 1
    labels = ["1"] + [f"y{i}" for i in range(1, n)]
    return load_algebra(field, c, [1] + [0] * m, labels, name=f"k[y1..y{m}]/(y)^2")


def split_product(field: Field, n: int = 2) -> Algebra:
    """k x ... x k with orthogonal idempotents."""
    c = [[[1 if i == j == k else 0 for k in range(n)] for j in range(n)] for i in range(n)]
    return load_algebra(field, c, [1] * n, [f"e{i}" for i in range(n)], name="k" + "xk" * (n - 1))


def product_algebra(*algs: Algebra) -> Algebra:
    """The product A_1 x ... x A_n with blockwise multiplication."""
    field = algs[0].field
    n = sum(a.dim for a in algs)
    c = [[[0] * n for _ in range(n)] for _ in range(n)]
    unit, labels, off = [], [], 0
    for t, a in enumerate(algs):
        s = a.structure()
        for i in range(a.dim):
            for j in range(a.dim):
                for k in range(a.dim):
                    c[off + i][off + j][off + k] = s[i][j][k]
        unit += [a.field.format(x) for x in a.unit.a[:, 0]]
        labels += [f"{lab}_{t}" for lab in a.labels]
        off += a.dim
    return load_algebra(field, c, unit, labels, name="x".join(a.name or "A" for a in algs))


def diagonal_map(a: Algebra, copies: int = 2) -> AlgebraMap:
    """a -> a x ... x a, x -> (x, ..., x)."""
    eye = Mat.identity(a.field, a.dim)
    return AlgebraMap(a, product_algebra(*[a] * copies), eye.vstack(*[eye] * (copies - 1))).check()


def algebra_catalog(field: Field = GF(5)) -> dict[str, Algebra]:
    return {
        "k": truncated_polynomial(field, 1),
        "dual": truncated_polynomial(field, 2),
        "cubic": truncated_polynomial(field, 3),
        "square0": square_zero(field, 2),
        "split": split_product(field, 2),
    }


# random linear data -----------------------------------------------------

def _ints(rng: np.random.Generator, shape, bound: int = 4):
    return rng.integers(-bound, bound + 1, size=shape).tolist()


def random_mat(rng: np.random.Generator, field: Field, rows: int, cols: int, bound: int = 4) -> Mat:
    if rows == 0 or cols == 0:
        return Mat.zeros(field, rows, cols)
    return Mat.from_rows(field, _ints(rng, (rows, cols), bound), cols)


def _random_invertible(rng, field: Field, n: int) -> Mat:
    while True:
        m = random_mat(rng, field, n, n)
        if m.rank() == n:
            return m


def _random_cyclic(rng, a: Algebra) -> FDModule:
    free = free_module(a, 1)
    gens = random_mat(rng, a.field, a.dim, int(rng.integers(0, 2)))
    # drop the unit direction half the time so quotients are not always zero
    if gens.cols and rng.random() < 0.7:
        gens.a[0, :] = a.field(0)
    return quotient_module(free, generated_submodule(free, gens))[0]


def random_module(rng, a: Algebra, max_dim: int = 3, min_dim: int = 0) -> FDModule:
    """Direct sum of random cyclic quotients, in a random basis."""
    target = int(rng.integers(min_dim, max_dim + 1))
    blocks: list[FDModule] = []
    total = 0
    tries = 0
    while total < target and tries < 20:
        tries += 1
        m = _random_cyclic(rng, a)
        if 0 < m.dim <= target - total:
            blocks.append(m)
            total += m.dim
    if total == 0:
        return FDModule(a, tuple(Mat.zeros(a.field, 0, 0) for _ in range(a.dim)), 0)
    action = [Mat.diag(a.field, [b.action[i] for b in blocks]) for i in range(a.dim)]
    p = _random_invertible(rng, a.field, total)
    pinv = inverse(p)
    return FDModule(a, tuple(pinv @ x @ p for x in action), total)


def _random_combination(rng, field: Field, basis: Mat) -> Mat:
    coeffs = random_mat(rng, field, basis.cols, 1)
    return basis @ coeffs if basis.cols else Mat.zeros(field, basis.rows, 1)


def random_module_map(rng, m: FDModule, n: FDModule) -> ModuleMap:
    hs = hom_module(m, n)
    coords = random_mat(rng, m.field, hs.dim, 1)
    return ModuleMap(m, n, hs.element(coords) if hs.dim else Mat.zeros(m.field, n.dim, m.dim))


def random_complex(rng, a: Algebra, amplitude: int = 3, max_dim: int = 3, lo: int = 0) -> Complex:
    """Random modules in degrees lo..lo+amplitude-1 with random differentials d o d = 0."""
    field = a.field
    mods = {lo + i: random_module(rng, a, max_dim) for i in range(amplitude)}
    diffs: dict[int, Mat] = {}
    for i in range(lo, lo + amplitude - 1):
        src, tgt = mods[i], mods[i + 1]
        if not src.dim or not tgt.dim:
            continue
        hs = hom_module(src, tgt)
        prev = diffs.get(i - 1)
        if prev is None or hs.dim == 0:
            cand = hs.space.basis
        else:
            cols = []
            for beta in hs.basis():
                comp = beta @ prev
                cols.append(Mat(field, comp.a.reshape(-1, 1).copy()))
            cons = cols[0].hstack(*cols[1:])
            ker = Subspace.kernel(cons).basis
            cand = hs.space.basis @ ker
        if cand.cols == 0:
            continue
        coords = hs.space.coordinates(_random_combination(rng, field, cand))
        diffs[i] = hs.element(coords)
    return Complex(a, mods, diffs)


def _chain_map_space(c: Complex, d: Complex):
    """Basis of chain maps C -> D as lists of per-degree components."""
    field = c.field
    unknowns = []
    for i in c.modules:
        if d.dim(i):
            hs = hom_module(c.module(i), d.module(i))
            if hs.dim:
                unknowns.append((i, hs))
    cols = []
    degs = [i for i in range(min(c.lo, d.lo) - 1, max(c.hi, d.hi) + 1) if d.dim(i + 1) and c.dim(i)]
    sizes = [d.dim(i + 1) * c.dim(i) for i in degs]
    n_rows = sum(sizes)
    for i, hs in unknowns:
        for beta in hs.basis():
            v = Mat.zeros(field, n_rows, 1)
            off = 0
            for k, sz in zip(degs, sizes):
                blk = None
                if k + 1 == i:
                    blk = beta @ c.d(k)
                elif k == i:
                    blk = -(d.d(k) @ beta)
                if blk is not None:
                    v.a[off:off + sz, 0] = blk.a.reshape(-1)
                off += sz
            cols.append(v)
    return unknowns, cols


def random_chain_map(rng, c: Complex, d: Complex) -> ChainMap:
    field = c.field
    unknowns, cols = _chain_map_space(c, d)
    if not cols:
        return ChainMap.zero(c, d)
    system = cols[0].hstack(*cols[1:])
    ker = Subspace.kernel(system).basis
    sol = _random_combination(rng, field, ker)
    comps, off = {}, 0
    for i, hs in unknowns:
        comps[i] = hs.element(sol.sub(rows=range(off, off + hs.dim)))
        off += hs.dim
    return ChainMap(c, d, comps)


def random_ses(rng, a: Algebra, max_dim: int = 3):
    """0 -> K -> M -> M/K -> 0 for a random module M and random submodule K."""
    m = random_module(rng, a, max_dim, min_dim=1)
    k = int(rng.integers(0, 3))
    sub = generated_submodule(m, random_mat(rng, a.field, m.dim, k))
    ks, incl = submodule(m, sub)
    q_mod, q, _ = quotient_module(m, sub)
    return ModuleMap(ks, m, incl), ModuleMap(m, q_mod, q)


def random_tr3_instance(rng, a: Algebra, amplitude: int = 2, max_dim: int = 2, tries: int = 5):
    """(c, d, f, f') with d f homotopic to f' c."""
    c1 = random_complex(rng, a, amplitude, max_dim)
    d1 = random_complex(rng, a, amplitude, max_dim)
    c2 = random_complex(rng, a, amplitude, max_dim)
    d2 = random_complex(rng, a, amplitude, max_dim)
    f = random_chain_map(rng, c1, d1)
    f2 = random_chain_map(rng, c2, d2)
    for attempt in range(tries + 1):
        c = random_chain_map(rng, c1, c2) if attempt < tries else ChainMap.zero(c1, c2)
        for _ in range(3):
            d = random_chain_map(rng, d1, d2)
            if find_homotopy(d @ f, f2 @ c) is not None:
                return c, d, f, f2
    return ChainMap.zero(c1, c2), ChainMap.zero(d1, d2), f, f2


# lattices ---------------------------------------------------------------

def _divisors(n: int) -> list[int]:
    n = abs(n)
    return [k for k in range(1, n + 1) if n % k == 0]


def random_minus_two(rng, lat: ExtendedLattice, bound: int = 3) -> MukaiElement:
    """A random element with Mukai square -2."""
    h2 = lat.h2
    while True:
        c = _ints(rng, h2.rank, bound)
        sq = h2.pair(c, c)
        n = (sq + 2) // 2               # need r s = n
        if n == 0:
            if rng.random() < 0.5:
                r, s = 0, int(rng.integers(-bound, bound + 1))
            else:
                r, s = int(rng.integers(-bound, bound + 1)), 0
        else:
            divs = _divisors(n)
            r = int(divs[rng.integers(0, len(divs))]) * int(rng.choice([-1, 1]))
            s = n // r
        v = MukaiElement.of(r, c, s)
        if mukai_pairing(lat, v, v) == -2:
            return v


def random_ample_period(rng, h2: EvenLattice | None = None, bound: int = 2):
    """(ample, period) related by a random rational isometry to (e3; e1, e2).

    ``h2`` must be diagonal with +2 in its first three entries.
    """
    h2 = h2 or diagonal_lattice(2, 2, 2, -2)
    n = h2.rank
    g = h2.gram
    ginv = inverse(g)
    while True:
        s = Mat.zeros(QQ, n, n)
        for i in range(n):
            for j in range(i + 1, n):
                x = Fraction(int(rng.integers(-bound, bound + 1)), int(rng.integers(1, 3)))
                s.a[i, j], s.a[j, i] = x, -x
        k = ginv @ s
        eye = Mat.identity(QQ, n)
        left = inverse(eye - k)
        if left is not None:
            break
    r = left @ (eye + k)
    re = [r.a[i, 0] for i in range(n)]
    im = [r.a[i, 1] for i in range(n)]
    alpha = [Fraction(r.a[i, 2]) for i in range(n)]
    den = lcm(*(x.denominator for x in alpha))
    ample = [int(x * den) for x in alpha]
    return ample, HodgePeriod.of(h2, re, im)
