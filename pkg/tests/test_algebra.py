import numpy as np
import pytest
from hypothesis import given, strategies as st

from hml.algebra import (AlgebraError, AlgebraMap, ModuleError, ModuleMap, NoUnit,
                         NotAssociative, NotCommutative, dual_module, extend_scalars, free_module,
                         ground_algebra, hom_module, kernel_image_cokernel, load_algebra,
                         make_module, restrict_scalars, tensor_module, zero_module)
from hml.generators import algebra_catalog, random_module, random_module_map
from hml.linalg import GF, QQ, Mat


def test_ground_field_is_an_algebra():
    a = load_algebra(QQ, [[[1]]], [1])
    assert a.dim == 1


def test_dual_numbers_valid(dual):
    assert dual.dim == 2
    assert dual.labels == ("1", "x") or list(dual.labels) == ["1", "x"]


def test_wrong_unit_rejected():
    with pytest.raises(NoUnit):
        load_algebra(QQ, [[[1, 0], [0, 1]], [[0, 1], [0, 1]]], [0, 1])


def test_noncommutative_rejected():
    # 1, a, b with ab = a but ba = 0
    c = [[[1, 0, 0], [0, 1, 0], [0, 0, 1]], [[0, 1, 0], [0, 0, 0], [0, 1, 0]],
         [[0, 0, 1], [0, 0, 0], [0, 0, 0]]]
    with pytest.raises(NotCommutative):
        load_algebra(QQ, c, [1, 0, 0])


def test_nonassociative_rejected():
    c = [[[1, 0, 0], [0, 1, 0], [0, 0, 1]], [[0, 1, 0], [0, 0, 1], [0, 1, 0]],
         [[0, 0, 1], [0, 1, 0], [0, 0, 0]]]
    with pytest.raises(NotAssociative):
        load_algebra(QQ, c, [1, 0, 0])


def test_free_modules(dual, field):
    assert free_module(dual, 0).dim == 0
    k = ground_algebra(field)
    f3 = free_module(k, 3)
    assert f3.dim == 3 and f3.action[0] == Mat.identity(field, 3)
    reg = free_module(dual, 1)
    assert reg.action[1] == Mat.from_rows(field, [[0, 0], [1, 0]])


def test_action_must_respect_structure(dual, field):
    with pytest.raises(ModuleError) as err:
        make_module(dual, [Mat.identity(field, 1), Mat.identity(field, 1)])
    assert "(1, 1)" in str(err.value)


def test_kernel_image_cokernel_examples(dual, regular, simple, field):
    kic = kernel_image_cokernel(ModuleMap(regular, regular, Mat.identity(field, 2)))
    assert (kic.kernel.dim, kic.image.dim, kic.cokernel.dim) == (0, 2, 0)
    x = ModuleMap(regular, regular, regular.action[1])
    kic = kernel_image_cokernel(x)
    assert (kic.kernel.dim, kic.image.dim, kic.cokernel.dim) == (1, 1, 1)
    kic = kernel_image_cokernel(ModuleMap(regular, simple, Mat.zeros(field, 1, 2)))
    assert (kic.kernel.dim, kic.cokernel.dim) == (2, 1)


def test_hom_examples(dual, regular, simple):
    assert hom_module(regular, simple).dim == simple.dim
    assert hom_module(regular, regular).dim == 2
    assert hom_module(simple, simple).dim == 1
    assert hom_module(simple, zero_module(dual)).dim == 0


def test_tensor_examples(dual, regular, simple):
    assert tensor_module(regular, simple).dim == simple.dim
    assert tensor_module(simple, simple).dim == 1
    assert tensor_module(simple, zero_module(dual)).dim == 0


def test_dual_examples(dual, regular, field):
    assert dual_module(zero_module(dual)).dim == 0
    assert dual_module(regular).dim == 2
    assert dual_module(free_module(ground_algebra(field), 3)).dim == 3


def test_change_of_rings_examples(dual, regular, field):
    k = ground_algebra(field)
    ident = AlgebraMap(dual, dual, Mat.identity(field, 2)).check()
    assert restrict_scalars(ident, regular).action == regular.action
    assert extend_scalars(ident, regular).dim == 2
    phi = AlgebraMap(dual, k, Mat.from_rows(field, [[1, 0]])).check()
    pulled = restrict_scalars(phi, free_module(k, 1))
    assert pulled.dim == 1 and pulled.action[1].is_zero()
    assert extend_scalars(phi, regular).dim == 1
    assert extend_scalars(phi, zero_module(dual)).dim == 0
    assert restrict_scalars(phi, zero_module(k)).dim == 0


def test_algebra_map_must_be_multiplicative(dual, field):
    # 1 -> 1 + x does not preserve the unit
    with pytest.raises(AlgebraError):
        AlgebraMap(dual, dual, Mat.from_rows(field, [[1, 0], [1, 1]])).check()


CATALOG = algebra_catalog(GF(5))
names = st.sampled_from(sorted(CATALOG))


@given(names, st.integers(0, 2**32 - 1))
def test_hom_from_free_is_evaluation(name, seed):
    rng = np.random.default_rng(seed)
    a = CATALOG[name]
    m = random_module(rng, a, 3)
    assert hom_module(free_module(a, 1), m).dim == m.dim
    assert tensor_module(free_module(a, 1), m).dim == m.dim


@given(names, st.integers(0, 2**32 - 1))
def test_hom_and_tensor_additive(name, seed):
    rng = np.random.default_rng(seed)
    a = CATALOG[name]
    m, n = random_module(rng, a, 2), random_module(rng, a, 2)
    two = free_module(a, 2)
    assert hom_module(two, m).dim == 2 * m.dim
    assert tensor_module(m, n).dim == tensor_module(n, m).dim


@given(names, st.integers(0, 2**32 - 1))
def test_kernel_plus_image(name, seed):
    rng = np.random.default_rng(seed)
    a = CATALOG[name]
    m, n = random_module(rng, a, 3), random_module(rng, a, 3)
    f = random_module_map(rng, m, n)
    kic = kernel_image_cokernel(f)
    assert kic.kernel.dim + kic.image.dim == m.dim
    assert kic.image.dim + kic.cokernel.dim == n.dim


@given(names, st.integers(0, 2**32 - 1))
def test_double_dual(name, seed):
    rng = np.random.default_rng(seed)
    a = CATALOG[name]
    m = random_module(rng, a, 3)
    dd = dual_module(dual_module(m))
    assert dd.dim == m.dim
    assert all(x == y for x, y in zip(dd.action, m.action))
