"""
Changing the algebra
====================

An algebra map phi: A -> B moves modules both ways: restriction pulls a
B-module back to A, and extension B (x)_A - pushes an A-module forward. The
derived version of extension is computed on a free resolution. Here phi is
the augmentation k[x]/(x^2) -> k that sends x to 0.
"""
from hml import GF, AlgebraMap, Mat, free_module, make_module
from hml.algebra import ground_algebra
from hml.derived import (NotFlat, adjunction_check, derived_extend, flat_base_change_check,
                         projection_formula_check)
from hml.complexes import cohomology_dims
from hml.generators import diagonal_map, truncated_polynomial

F = GF(5)
A = truncated_polynomial(F, 2)
B = ground_algebra(F)
phi = AlgebraMap(A, B, Mat.from_rows(F, [[1, 0]])).check()
k = make_module(A, [Mat.identity(F, 1), Mat.zeros(F, 1, 1)])
point = free_module(B, 1)

# k (x)^L_A k has one-dimensional cohomology in every nonpositive degree
lk, _ = derived_extend(phi, k, 5)
print("derived extension of k:", cohomology_dims(lk))

# Hom_B(L phi^* M, N) = Hom_A(M, phi_* N), degree by degree
for m, name in ((free_module(A, 1), "A"), (k, "k")):
    v = adjunction_check(phi, m, point, 4)
    print(f"adjunction with M = {name}: ok={v.ok} lhs={v.data['lhs']} rhs={v.data['rhs']}")

v = projection_formula_check(phi, point, k, 3)
print("projection formula:", v.ok, "degrees", v.data["degrees"], "dims", v.data["lhs"])

# base change along a flat map works; along phi itself it does not
v = flat_base_change_check(phi, diagonal_map(A), point, 3)
print("base change along A -> A x A:", v.ok, v.data["lhs"], "=", v.data["rhs"])
try:
    flat_base_change_check(phi, phi, point, 3)
except NotFlat as exc:
    print("base change along phi:", exc)
