from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hml.generators import random_ample_period, random_minus_two
from hml.k3lattice import (DegenerateProjection, EvenLattice, ExtendedLattice, HodgePeriod,
                           InvalidPeriod, MukaiElement, NotEven, NotMinusTwo, a1, cohom_fm,
                           diagonal_kernel, diagonal_lattice, e8, euler_chi_lattice,
                           extend_by_h2_sign, hyperbolic_plane, is_hodge_isometry, is_isometry,
                           lattice_sum, mukai_pairing, mukai_vector, neron_severi,
                           orientation_check, reflection_twist)
from hml.linalg import QQ, Mat, determinant

E = MukaiElement.of


@pytest.fixture
def rational_curves():
    return ExtendedLattice(EvenLattice.from_gram([[-2, 1], [1, -2]]))


@pytest.fixture
def small():
    return ExtendedLattice(diagonal_lattice(2, 2, 2, -2))


def test_lattice_validation():
    with pytest.raises(NotEven):
        EvenLattice.from_gram([[1]])
    with pytest.raises(Exception):
        EvenLattice.from_gram([[2, 1], [0, 2]])
    assert determinant(e8().gram) == 1
    assert lattice_sum(hyperbolic_plane(), a1()).rank == 3


def test_pairing_examples():
    lat = ExtendedLattice(a1())
    assert mukai_pairing(lat, E(1, [0], 1), E(1, [0], 1)) == -2
    assert mukai_pairing(lat, E(1, [0], 0), E(0, [0], 1)) == -1
    assert mukai_pairing(lat, E(0, [1], 0), E(0, [1], 0)) == -2


def test_mukai_vector_examples():
    lat = ExtendedLattice(a1())
    assert mukai_vector(lat, 1, [0], 0) == E(1, [0], 1)
    assert mukai_vector(lat, 0, [1], -2) == E(0, [1], 1)
    assert mukai_vector(lat, 0, [0], 0) == E(0, [0], 0)


def test_chi_examples(rational_curves):
    lat = ExtendedLattice(a1())
    assert euler_chi_lattice(lat, E(1, [0], 1), E(1, [0], 1)) == 2
    v, w = E(0, [1, 0], 1), E(0, [0, 1], 1)
    assert mukai_pairing(rational_curves, v, w) == 1
    assert euler_chi_lattice(rational_curves, v, w) == -1
    assert euler_chi_lattice(rational_curves, v, E(0, [0, 0], 0)) == 0


def test_twist_examples():
    lat = ExtendedLattice(a1())
    v = E(1, [0], 1)
    g = reflection_twist(lat, v)
    assert g(v) == E(-1, [0], -1)
    fixed = E(1, [0], -1)
    assert mukai_pairing(lat, v, fixed) == 0 and g(fixed) == fixed
    curve = E(0, [1], 1)
    t = reflection_twist(lat, curve)
    assert t(E(0, [1], 0)).c == (-1,)
    with pytest.raises(NotMinusTwo):
        reflection_twist(lat, E(1, [0], 0))


def test_isometry_examples():
    lat = ExtendedLattice(hyperbolic_plane())
    n = lat.rank
    assert is_isometry(lat, Mat.identity(QQ, n))
    assert is_isometry(lat, -Mat.identity(QQ, n))
    assert is_isometry(lat, reflection_twist(lat, E(1, [0, 0], 1)))
    assert not is_isometry(lat, Mat.identity(QQ, n).scale(2))


def test_extend_by_sign(small):
    plus, minus = extend_by_h2_sign(small, 1), extend_by_h2_sign(small, -1)
    assert plus.matrix == Mat.identity(QQ, small.rank)
    assert is_isometry(small, minus)
    assert (minus @ minus).matrix == Mat.identity(QQ, small.rank)


def test_hodge_examples():
    h2 = lattice_sum(hyperbolic_plane(), hyperbolic_plane())
    p = HodgePeriod.of(h2, [1, 1, 0, 0], [0, 0, 1, 1])
    w = is_hodge_isometry(h2, Mat.identity(QQ, 4), p, p)
    assert w.ok and (w.a, w.b) == (1, 0)
    w = is_hodge_isometry(h2, -Mat.identity(QQ, 4), p, p)
    assert w.ok and (w.a, w.b) == (-1, 0)
    swap = Mat.from_rows(QQ, [[0, 0, 1, 0], [0, 0, 0, 1], [1, 0, 0, 0], [0, 1, 0, 0]])
    assert not is_hodge_isometry(h2, swap, p, p).ok


def test_invalid_period():
    with pytest.raises(InvalidPeriod):
        HodgePeriod.of(diagonal_lattice(2, 2), [1, 0], [1, 0]).check(diagonal_lattice(2, 2))


def test_neron_severi_examples():
    h2 = diagonal_lattice(2, 2, -2)
    ns = neron_severi(h2, HodgePeriod.of(h2, [1, 0, 0], [0, 1, 0]))
    assert ns.vectors() == [[0, 0, 1]] and ns.gram.tolist() == [[-2]]
    h2 = diagonal_lattice(2, 2)
    assert neron_severi(h2, HodgePeriod.of(h2, [1, 0], [0, 1])).rank == 0


def test_orientation_examples(small):
    sigma = HodgePeriod.of(small.h2, [1, 0, 0, 0], [0, 1, 0, 0])
    ample = [0, 0, 1, 0]
    n = small.rank
    assert orientation_check(small, Mat.identity(QQ, n), ample, sigma)
    assert orientation_check(small, reflection_twist(small, E(0, [0, 0, 0, 1], 0)), ample, sigma)
    assert not orientation_check(small, extend_by_h2_sign(small, -1), ample, sigma)


def test_orientation_degenerate(small):
    sigma = HodgePeriod.of(small.h2, [1, 0, 0, 0], [0, 1, 0, 0])
    collapse = Mat.identity(QQ, small.rank)
    collapse.a[3, 3] = QQ(0)
    with pytest.raises(DegenerateProjection):
        orientation_check(small, collapse, [0, 0, 1, 0], sigma)


@pytest.mark.parametrize("h2", [a1(), hyperbolic_plane()], ids=["A1", "U"])
def test_diagonal_kernel_is_identity(h2):
    lat = ExtendedLattice(h2)
    delta = diagonal_kernel(lat)
    for i in range(lat.rank):
        e = lat.element(Mat.column(QQ, [1 if j == i else 0 for j in range(lat.rank)]))
        assert cohom_fm(lat, lat, delta, e) == e
        assert cohom_fm(lat, lat, delta, cohom_fm(lat, lat, delta, e)) == e


def test_fm_examples():
    lat = ExtendedLattice(a1())
    zero = Mat.zeros(QQ, lat.rank, lat.rank)
    assert cohom_fm(lat, lat, zero, E(1, [1], 1)) == E(0, [0], 0)
    # point class on X paired with a chosen class y on Y
    y = [2, 1, -1]
    kernel = Mat.from_rows(QQ, [[0, 0, 0], [0, 0, 0], y])
    assert cohom_fm(lat, lat, kernel, E(3, [5], 7)) == E(6, [3], -3)


h2s = st.sampled_from([a1(), hyperbolic_plane(), diagonal_lattice(2, 2, 2, -2),
                       lattice_sum(hyperbolic_plane(), a1())])
seeds = st.integers(0, 2**32 - 1)


@given(h2s, seeds)
def test_twist_properties(h2, seed):
    rng = np.random.default_rng(seed)
    lat = ExtendedLattice(h2)
    v = random_minus_two(rng, lat)
    g = reflection_twist(lat, v)
    eye = Mat.identity(QQ, lat.rank)
    assert is_isometry(lat, g)
    assert (g @ g).matrix == eye
    assert g(v) == E(-v.r, [-x for x in v.c], -v.s)
    assert (g.matrix - eye).rank() == 1


@given(h2s, seeds, seeds)
def test_chi_symmetric(h2, s1, s2):
    lat = ExtendedLattice(h2)
    v = random_minus_two(np.random.default_rng(s1), lat)
    w = random_minus_two(np.random.default_rng(s2), lat)
    assert euler_chi_lattice(lat, v, w) == euler_chi_lattice(lat, w, v)


@given(h2s, st.lists(st.integers(-3, 3), min_size=4, max_size=4),
       st.lists(st.integers(-3, 3), min_size=4, max_size=4))
def test_pairing_extends_h2(h2, a, b):
    lat = ExtendedLattice(h2)
    a, b = a[:h2.rank], b[:h2.rank]
    assert mukai_pairing(lat, E(0, a, 0), E(0, b, 0)) == h2.pair(a, b)


@given(seeds, seeds)
def test_twist_preserves_orientation(s1, s2):
    lat = ExtendedLattice(diagonal_lattice(2, 2, 2, -2))
    ample, sigma = random_ample_period(np.random.default_rng(s1))
    g = reflection_twist(lat, random_minus_two(np.random.default_rng(s2), lat))
    assert orientation_check(lat, g, ample, sigma)
    assert not orientation_check(lat, extend_by_h2_sign(lat, -1), ample, sigma)


def _h2_generators():
    """Integral isometries of <2>+<2>+<2>+<-2> with their action on e1 + i e2."""
    rot = Mat.from_rows(QQ, [[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    flip3 = Mat.identity(QQ, 4)
    flip3.a[2, 2] = QQ(-1)
    flip4 = Mat.identity(QQ, 4)
    flip4.a[3, 3] = QQ(-1)
    return [(rot, complex(0, -1)), (-Mat.identity(QQ, 4), complex(-1, 0)),
            (flip3, complex(1, 0)), (flip4, complex(1, 0))]


@given(st.lists(st.integers(0, 3), min_size=1, max_size=6))
def test_hodge_isometries_compose(word):
    h2 = diagonal_lattice(2, 2, 2, -2)
    p = HodgePeriod.of(h2, [1, 0, 0, 0], [0, 1, 0, 0])
    gens = _h2_generators()
    g, z = Mat.identity(QQ, 4), complex(1, 0)
    for k in word:
        m, w = gens[k]
        assert is_hodge_isometry(h2, m, p, p).ok
        g, z = m @ g, w * z
    w = is_hodge_isometry(h2, g, p, p)
    assert w.ok and (Fraction(w.a), Fraction(w.b)) == (round(z.real), round(z.imag))
