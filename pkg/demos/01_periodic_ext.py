"""
Ext and Tor over the dual numbers
=================================

k[x]/(x^2) is the smallest algebra with infinite global dimension: the simple
module k has a resolution that never stops, and every Ext and Tor group is one
dimensional. This script builds that resolution and reads the groups off it.
"""
from hml import (GF, Mat, ext, free_module, free_resolution, injective_resolution, make_module,
                 tor)
from hml.derived import NonConvergent, euler_chi
from hml.generators import truncated_polynomial

F = GF(5)
A = truncated_polynomial(F, 2)
k = make_module(A, [Mat.identity(F, 1), Mat.zeros(F, 1, 1)])

# the free resolution: ... -> A --x--> A --x--> A -> k
res = free_resolution(k, depth=4)
print("free resolution dims:", res.complex.dims())
print("truncated:", res.truncated, " exact for H^i with i >=", res.bound)
for i in range(res.complex.lo, res.complex.hi):
    print(f"  d^{i} =", res.complex.d(i).tolist())

# injective side: A is self-dual, so the same periodicity shows up upward
print("injective resolution dims:", injective_resolution(k, depth=4).complex.dims())

# both routes give the same table
print("Ext(k, k), projective:", ext(k, k, 8).dims)
print("Ext(k, k), injective: ", ext(k, k, 8, route="injective").dims)
print("Tor(k, k):            ", tor(k, k, 8).dims)

# the Euler pairing cannot be summed: the terms never vanish
try:
    euler_chi(k, k, 8)
except NonConvergent as exc:
    print("chi(k, k):", exc)

# against the free module it converges at once
print("chi(A, k) =", euler_chi(free_module(A, 1), k, 8))
