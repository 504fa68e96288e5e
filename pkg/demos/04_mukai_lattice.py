"""
Mukai vectors and lattice isometries
====================================

The even cohomology of a K3 surface carries the Mukai pairing, an extension
of the intersection form on H^2 by a hyperbolic plane in degrees 0 and 4.
Small stand-ins for H^2 keep every computation exact and instant.
"""
from hml import ExtendedLattice, HodgePeriod, MukaiElement, mukai_pairing, reflection_twist
from hml.k3lattice import (EvenLattice, cohom_fm, diagonal_kernel, diagonal_lattice,
                           euler_chi_lattice, extend_by_h2_sign, is_hodge_isometry, is_isometry,
                           mukai_vector, neron_severi, orientation_check)

E = MukaiElement.of

# two rational curves meeting once
curves = ExtendedLattice(EvenLattice.from_gram([[-2, 1], [1, -2]]))
v, w = E(0, [1, 0], 1), E(0, [0, 1], 1)
print("<v, w> =", mukai_pairing(curves, v, w), " chi(v, w) =", euler_chi_lattice(curves, v, w))

# the structure sheaf is spherical, and so is its reflection
L = ExtendedLattice(diagonal_lattice(2, 2, 2, -2))
o = mukai_vector(L, 1, [0, 0, 0, 0], 0)
print("v(O) =", o, " <v, v> =", mukai_pairing(L, o, o))
t = reflection_twist(L, o)
print("twist is an isometry:", is_isometry(L, t), " T(v) =", t(o))

# a period inside H^2 and the classes orthogonal to it
h2 = L.h2
sigma = HodgePeriod.of(h2, [1, 0, 0, 0], [0, 1, 0, 0])
ns = neron_severi(h2, sigma)
print("Neron-Severi basis:", ns.vectors(), " gram:", ns.gram.tolist())
hw = is_hodge_isometry(L, extend_by_h2_sign(L, -1), sigma, sigma)
print("-id is a Hodge isometry:", hw.ok, " sigma -> (a + bi) sigma with (a, b) =", (hw.a, hw.b))

# the four-plane spanned by degree 0/4 classes, an ample class and the period
ample = [0, 0, 1, 0]
print("twist preserves orientation:", orientation_check(L, t, ample, sigma))
minus = extend_by_h2_sign(L, -1)
print("-id on H^2 preserves orientation:", orientation_check(L, minus, ample, sigma))

# the diagonal acts as the identity correspondence
beta = E(2, [1, -1, 0, 3], 5)
print("diagonal transform of", beta, "is", cohom_fm(L, L, diagonal_kernel(L), beta))
