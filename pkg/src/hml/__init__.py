"""Exact homological algebra over small commutative algebras, plus Mukai lattices.

Everything is computed over QQ or a prime field with exact arithmetic; there is
no floating point anywhere in the pipeline.
"""
from .algebra import (Algebra, AlgebraMap, FDModule, ModuleMap, dual_module, extend_scalars,
                      free_module, hom_module, kernel_image_cokernel, load_algebra, make_module,
                      restrict_scalars, tensor_module)
from .complexes import (ChainMap, Complex, cohomology, cone, find_homotopy, hom_complex,
                        is_quasi_iso, make_complex, shift, tensor_complex)
from .derived import (euler_chi, ext, free_resolution, injective_resolution, lift_map,
                      octahedron, resolve_complex, ses_to_triangle_check, tor, tr2_rotate,
                      tr3_complete, windmill_check)
from .k3lattice import (EvenLattice, ExtendedLattice, HodgePeriod, MukaiElement, mukai_pairing,
                        reflection_twist)
from .linalg import GF, QQ, Field, Mat, Subspace

__all__ = [
    "Field", "QQ", "GF", "Mat", "Subspace",
    "Algebra", "AlgebraMap", "FDModule", "ModuleMap", "load_algebra", "make_module", "free_module",
    "kernel_image_cokernel", "hom_module", "tensor_module", "dual_module", "restrict_scalars",
    "extend_scalars",
    "Complex", "ChainMap", "make_complex", "shift", "cohomology", "is_quasi_iso", "cone",
    "find_homotopy", "hom_complex", "tensor_complex",
    "free_resolution", "injective_resolution", "resolve_complex", "lift_map", "ext", "tor",
    "euler_chi", "ses_to_triangle_check", "tr2_rotate", "tr3_complete", "octahedron",
    "windmill_check",
    "EvenLattice", "ExtendedLattice", "HodgePeriod", "MukaiElement", "mukai_pairing",
    "reflection_twist",
]

__version__ = "0.1.0"
