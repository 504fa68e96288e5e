import numpy as np
import pytest
from hypothesis import given, strategies as st

from hml.algebra import ModuleMap, direct_sum, free_module, ground_algebra
from hml.complexes import ChainMap, Complex, cone, is_quasi_iso
from hml.derived import (NotSES, cohomology_les, octahedron, ses_to_triangle_check, tr2_rotate,
                         tr3_complete, windmill_check)
from hml.generators import (algebra_catalog, random_chain_map, random_complex, random_module,
                            random_module_map, random_ses, random_tr3_instance)
from hml.linalg import GF, Mat


@pytest.fixture
def x(regular):
    return ChainMap.single(ModuleMap(regular, regular, regular.action[1]))


@pytest.fixture
def ses(simple, regular, field):
    incl = ModuleMap(simple, regular, Mat.from_rows(field, [[0], [1]]))
    proj = ModuleMap(regular, simple, Mat.from_rows(field, [[1, 0]]))
    return incl, proj


def test_cone_triangle_les(x):
    les = cohomology_les(cone(x).triangle)
    assert les.verdict.ok


def test_identity_triangle_les(regular):
    c = Complex.single(regular)
    les = cohomology_les(cone(ChainMap.identity(c)).triangle)
    assert les.verdict.ok


def test_ses_triangle(ses):
    r = ses_to_triangle_check(*ses)
    assert r.verdict.ok and r.les.verdict.ok
    assert is_quasi_iso(r.qis)


def test_split_ses_triangle(simple, field):
    total = direct_sum([simple, simple])
    i1 = ModuleMap(simple, total, Mat.from_rows(field, [[1], [0]]))
    p2 = ModuleMap(total, simple, Mat.from_rows(field, [[0, 1]]))
    assert ses_to_triangle_check(i1, p2).verdict.ok


def test_not_ses_rejected(ses, simple, regular, field):
    incl, proj = ses
    zero = ModuleMap(simple, regular, Mat.zeros(field, 2, 1))
    with pytest.raises(NotSES):
        ses_to_triangle_check(zero, proj)


def test_tr2_examples(x, regular, simple, field):
    c = Complex.single(regular)
    assert tr2_rotate(ChainMap.identity(c)).ok
    assert tr2_rotate(x).ok
    assert tr2_rotate(ChainMap.zero(c, Complex.single(simple))).ok


def test_tr3_examples(x, regular):
    c = Complex.single(regular)
    ident = ChainMap.identity(c)
    res = tr3_complete(ident, ident, x, x)
    assert res.verdict.ok
    assert res.map.equals(ChainMap.identity(res.map.source))
    zero = ChainMap.zero(c, c)
    res = tr3_complete(zero, zero, x, x)
    assert res.verdict.ok and all(m.is_zero() for m in res.map.comps.values())
    res = tr3_complete(x, x, x, x)
    assert res.verdict.ok


def test_octahedron_examples(x, regular):
    c = Complex.single(regular)
    ident = ChainMap.identity(c)
    assert octahedron(x, ident).verdict.ok
    assert octahedron(ident, x).verdict.ok
    assert octahedron(x, x).verdict.ok


def test_windmill_worked_examples(field):
    k = ground_algebra(field)
    one, two = free_module(k, 1), free_module(k, 2)
    ident = ModuleMap(one, one, Mat.identity(field, 1))
    w = windmill_check(ident, ident)
    assert w.verdict.ok and w.dims == [0] * 6
    zero = ModuleMap(one, one, Mat.zeros(field, 1, 1))
    w = windmill_check(zero, zero)
    assert w.verdict.ok and w.dims == [1] * 6
    f = ModuleMap(one, two, Mat.from_rows(field, [[1], [0]]))
    g = ModuleMap(two, one, Mat.from_rows(field, [[0, 1]]))
    w = windmill_check(f, g)
    assert w.verdict.ok and w.dims == [0, 1, 1, 1, 1, 0]


CATALOG = algebra_catalog(GF(5))
names = st.sampled_from(sorted(CATALOG))
seeds = st.integers(0, 2**32 - 1)


@given(names, seeds)
def test_random_ses(name, seed):
    rng = np.random.default_rng(seed)
    r = ses_to_triangle_check(*random_ses(rng, CATALOG[name]))
    assert r.verdict.ok and r.les.verdict.ok


@given(names, seeds)
def test_random_tr2_and_octahedron(name, seed):
    rng = np.random.default_rng(seed)
    a = CATALOG[name]
    c, d, e = (random_complex(rng, a, 2, 2) for _ in range(3))
    f, g = random_chain_map(rng, c, d), random_chain_map(rng, d, e)
    assert tr2_rotate(f).ok
    assert octahedron(f, g).verdict.ok


@given(names, seeds)
def test_random_tr3(name, seed):
    rng = np.random.default_rng(seed)
    res = tr3_complete(*random_tr3_instance(rng, CATALOG[name]))
    assert res.verdict.ok


@given(names, seeds)
def test_random_windmill(name, seed):
    rng = np.random.default_rng(seed)
    a = CATALOG[name]
    c, d, e = (random_module(rng, a, 3) for _ in range(3))
    w = windmill_check(random_module_map(rng, c, d), random_module_map(rng, d, e))
    assert w.verdict.ok
