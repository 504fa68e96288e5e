"""
Cones, triangles and the octahedron
===================================

Every chain map has a mapping cone, and the cone fits into a distinguished
triangle. Here the checkers are run on the simplest interesting map, the
multiplication by x on A = k[x]/(x^2), and on the short exact sequence
0 -> k -> A -> k -> 0.
"""
from hml import (GF, ChainMap, Mat, ModuleMap, cone, free_module, make_module, octahedron,
                 ses_to_triangle_check, tr2_rotate, tr3_complete, windmill_check)
from hml.complexes import cohomology_dims
from hml.generators import truncated_polynomial

F = GF(5)
A = truncated_polynomial(F, 2)
reg = free_module(A, 1)
k = make_module(A, [Mat.identity(F, 1), Mat.zeros(F, 1, 1)])
x = ModuleMap(reg, reg, reg.action[1])

# H^-1(cone) is the kernel of x and H^0 its cokernel
cn = cone(ChainMap.single(x))
print("cone dims:", cn.complex.dims(), " cohomology:", cohomology_dims(cn.complex))

print("TR2 (rotation):", tr2_rotate(x).ok)
res = tr3_complete(*(ChainMap.single(x),) * 4)
print("TR3 (fill-in):", res.verdict.ok, " e =", {i: m.tolist() for i, m in res.map.comps.items()})

# x o x = 0, so the middle cone is just A[1] + A
oct_ = octahedron(x, x)
print("octahedron:", oct_.verdict.ok)

# kernels and cokernels of f, g and g o f in one six-term sequence
w = windmill_check(x, x)
for label, d in zip(w.labels, w.dims):
    print(f"  {label:9s}{d}")

# the short exact sequence becomes a triangle k -> A -> k -> k[1]
incl = ModuleMap(k, reg, Mat.from_rows(F, [[0], [1]]))
proj = ModuleMap(reg, k, Mat.from_rows(F, [[1, 0]]))
r = ses_to_triangle_check(incl, proj)
print("SES -> triangle:", r.verdict.ok, " long exact sequence dims:", r.les.dims)
