"""Finite-dimensional commutative algebras and their modules.

An algebra is stored through its regular representation: ``mult[i]`` is the
matrix of multiplication by the i-th basis element, so
``mult[i][k, j]`` is the structure constant c_{ij}^k.  A module is a vector
space together with one action matrix per algebra basis element.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .linalg import Field, Mat, Subspace, QQ

__all__ = [
    "AlgebraError", "NotAssociative", "NotCommutative", "NoUnit",
    "ModuleError", "NotEquivariant",
    "Algebra", "FDModule", "ModuleMap", "AlgebraMap",
    "load_algebra", "ground_algebra", "make_module", "free_module", "zero_module",
    "direct_sum", "kernel_image_cokernel", "KernelImageCokernel",
    "HomSpace", "hom_module", "TensorSpace", "tensor_space", "tensor_module",
    "dual_module", "dual_map", "restrict_scalars", "extend_scalars", "extend_map",
    "identity_map", "zero_map", "compose", "submodule", "quotient_module",
    "generated_submodule", "extension_data",
]


class AlgebraError(ValueError):
    pass


class NotAssociative(AlgebraError):
    pass


class NotCommutative(AlgebraError):
    pass


class NoUnit(AlgebraError):
    pass


class ModuleError(ValueError):
    pass


class NotEquivariant(ModuleError):
    pass


@dataclass(frozen=True, eq=False)
class Algebra:
    field: Field
    mult: tuple[Mat, ...]
    unit: Mat
    labels: tuple[str, ...]
    name: str = ""

    @property
    def dim(self) -> int:
        return len(self.mult)

    def structure(self) -> list[list[list]]:
        """c[i][j][k] with b_i b_j = sum_k c[i][j][k] b_k."""
        n = self.dim
        return [[[self.mult[i].a[k, j] for k in range(n)] for j in range(n)] for i in range(n)]

    def element(self, coeffs) -> Mat:
        return Mat.column(self.field, coeffs)

    def __repr__(self):
        return f"Algebra({self.name or '?'}, dim={self.dim}, {self.field!r})"


def load_algebra(field: Field, structure, unit, labels: Sequence[str] | None = None,
                 name: str = "") -> Algebra:
    """Validate structure constants c[i][j][k] and build an Algebra."""
    n = len(structure)
    if any(len(row) != n or any(len(c) != n for c in row) for row in structure):
        raise AlgebraError("structure constants must form an n x n x n table")
    c = [[[field(x) for x in structure[i][j]] for j in range(n)] for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if c[i][j] != c[j][i]:
                raise NotCommutative(f"b_{i} b_{j} != b_{j} b_{i}")
    u = [field(x) for x in unit]
    if len(u) != n:
        raise NoUnit(f"unit vector has length {len(u)}, expected {n}")
    for j in range(n):
        for k in range(n):
            v = field.reduce(np.array([sum(u[i] * c[i][j][k] for i in range(n))], dtype=object))[0]
            if v != (1 if j == k else 0):
                raise NoUnit(f"unit times b_{j} differs from b_{j} in coordinate {k}")
    mult = []
    for i in range(n):
        m = Mat.zeros(field, n, n)
        for j in range(n):
            for k in range(n):
                m.a[k, j] = c[i][j][k]
        mult.append(m)
    # (b_i b_j) b_l == b_i (b_j b_l)
    for i in range(n):
        for j in range(n):
            lhs = Mat.zeros(field, n, n)
            for k in range(n):
                if c[i][j][k] != 0:
                    lhs = lhs + mult[k].scale(c[i][j][k])
            rhs = mult[i] @ mult[j]
            if lhs != rhs:
                bad = next(l for l in range(n) if lhs.sub(cols=[l]) != rhs.sub(cols=[l]))
                raise NotAssociative(f"(b_{i} b_{j}) b_{bad} != b_{i} (b_{j} b_{bad})")
    labels = tuple(labels) if labels is not None else tuple(f"b{i}" for i in range(n))
    return Algebra(field, tuple(mult), Mat.column(field, u), labels, name)


@lru_cache(maxsize=None)
def ground_algebra(field: Field = QQ) -> Algebra:
    """The field itself as a 1-dimensional algebra."""
    return load_algebra(field, [[[1]]], [1], ["1"], name="k")


@dataclass(frozen=True, eq=False)
class FDModule:
    algebra: Algebra
    action: tuple[Mat, ...]
    dim: int

    @property
    def field(self) -> Field:
        return self.algebra.field

    def act(self, coeffs) -> Mat:
        """Action matrix of the algebra element with the given coordinates."""
        out = Mat.zeros(self.field, self.dim, self.dim)
        for c, m in zip(coeffs, self.action):
            if c != 0:
                out = out + m.scale(c)
        return out

    def key(self) -> tuple:
        return (id(self.algebra), self.dim, tuple(m.key() for m in self.action))

    def __repr__(self):
        return f"FDModule(dim={self.dim} over {self.algebra!r})"


def make_module(algebra: Algebra, action: Sequence[Mat], check: bool = True) -> FDModule:
    if len(action) != algebra.dim:
        raise ModuleError(f"need {algebra.dim} action matrices, got {len(action)}")
    dims = {m.shape for m in action}
    if len(dims) != 1 or next(iter(dims))[0] != next(iter(dims))[1]:
        raise ModuleError("action matrices must be square and of one size")
    dim = action[0].rows
    mod = FDModule(algebra, tuple(action), dim)
    if check:
        if mod.act(list(algebra.unit.a[:, 0])) != Mat.identity(algebra.field, dim):
            raise ModuleError("the unit does not act as the identity")
        n = algebra.dim
        for i in range(n):
            for j in range(i, n):
                coeffs = list(algebra.mult[i].a[:, j])
                if action[i] @ action[j] != mod.act(coeffs):
                    raise ModuleError(f"action violates the structure constants at (i, j) = ({i}, {j})")
    return mod


def free_module(algebra: Algebra, n: int) -> FDModule:
    """A^n with block-diagonal regular action; basis vector t*dim(A)+k is b_k in block t."""
    if n < 0:
        raise ValueError("rank must be non-negative")
    if n == 0:
        return zero_module(algebra)
    action = [Mat.diag(algebra.field, [m] * n) for m in algebra.mult]
    return FDModule(algebra, tuple(action), algebra.dim * n)


def zero_module(algebra: Algebra) -> FDModule:
    return FDModule(algebra, tuple(Mat.zeros(algebra.field, 0, 0) for _ in algebra.mult), 0)


@dataclass(frozen=True, eq=False)
class ModuleMap:
    source: FDModule
    target: FDModule
    matrix: Mat

    def __post_init__(self):
        if self.matrix.shape != (self.target.dim, self.source.dim):
            raise ModuleError(f"map matrix has shape {self.matrix.shape}, "
                              f"expected {(self.target.dim, self.source.dim)}")

    def check(self) -> "ModuleMap":
        for i, (s, t) in enumerate(zip(self.source.action, self.target.action)):
            if self.matrix @ s != t @ self.matrix:
                raise NotEquivariant(f"map does not commute with the action of basis element {i}")
        return self

    def __matmul__(self, other: "ModuleMap") -> "ModuleMap":
        return compose(self, other)


def identity_map(m: FDModule) -> ModuleMap:
    return ModuleMap(m, m, Mat.identity(m.field, m.dim))


def zero_map(m: FDModule, n: FDModule) -> ModuleMap:
    return ModuleMap(m, n, Mat.zeros(m.field, n.dim, m.dim))


def compose(g: ModuleMap, f: ModuleMap) -> ModuleMap:
    """g after f."""
    return ModuleMap(f.source, g.target, g.matrix @ f.matrix)


def direct_sum(modules: Sequence[FDModule], algebra: Algebra | None = None) -> FDModule:
    if not modules:
        return zero_module(algebra)
    alg = modules[0].algebra
    action = [Mat.diag(alg.field, [m.action[i] for m in modules]) for i in range(alg.dim)]
    return FDModule(alg, tuple(action), sum(m.dim for m in modules))


def submodule(m: FDModule, sub: Subspace) -> tuple[FDModule, Mat]:
    """Module structure on an invariant subspace, with its inclusion matrix."""
    action = [sub.coordinates(a @ sub.basis) for a in m.action]
    return FDModule(m.algebra, tuple(action), sub.dim), sub.basis


def quotient_module(m: FDModule, sub: Subspace) -> tuple[FDModule, Mat, Mat]:
    """Quotient by an invariant subspace: (module, projection q, section s)."""
    q, s = sub.quotient()
    action = [q @ a @ s for a in m.action]
    return FDModule(m.algebra, tuple(action), q.rows), q, s


def generated_submodule(m: FDModule, vectors: Mat) -> Subspace:
    """Smallest invariant subspace containing the given columns."""
    if vectors.cols == 0:
        return Subspace.span(Mat.zeros(m.field, m.dim, 0))
    cols = [a @ vectors for a in m.action]
    return Subspace.span(cols[0].hstack(*cols[1:]) if len(cols) > 1 else cols[0])


@dataclass(frozen=True, eq=False)
class KernelImageCokernel:
    kernel: FDModule
    kernel_incl: ModuleMap
    image: FDModule
    image_incl: ModuleMap
    cokernel: FDModule
    cokernel_proj: ModuleMap
    cokernel_section: Mat


def kernel_image_cokernel(f: ModuleMap) -> KernelImageCokernel:
    ksub = Subspace.kernel(f.matrix)
    kmod, kinc = submodule(f.source, ksub)
    isub = Subspace.span(f.matrix)
    imod, iinc = submodule(f.target, isub)
    cmod, q, s = quotient_module(f.target, isub)
    return KernelImageCokernel(
        kmod, ModuleMap(kmod, f.source, kinc),
        imod, ModuleMap(imod, f.target, iinc),
        cmod, ModuleMap(f.target, cmod, q), s,
    )


# Hom ------------------------------------------------------------------

def _vec_rows(x: Mat) -> Mat:
    """Row-major vectorisation as a column."""
    return Mat(x.field, x.a.reshape(-1, 1).copy())


def _unvec(v: Mat, rows: int, cols: int) -> Mat:
    return Mat(v.field, v.a.reshape(rows, cols).copy())


@dataclass(frozen=True, eq=False)
class HomSpace:
    """Hom_A(source, target) as a subspace of all (target.dim x source.dim) matrices."""

    source: FDModule
    target: FDModule
    space: Subspace
    module: FDModule

    @property
    def dim(self) -> int:
        return self.space.dim

    def basis(self) -> list[Mat]:
        b = self.space.basis
        return [_unvec(b.sub(cols=[t]), self.target.dim, self.source.dim) for t in range(b.cols)]

    def element(self, coords) -> Mat:
        v = self.space.basis @ (coords if isinstance(coords, Mat) else Mat.column(self.source.field, coords))
        return _unvec(v, self.target.dim, self.source.dim)

    def coordinates(self, x: Mat) -> Mat:
        """Coordinates of an equivariant matrix (column vector)."""
        return self.space.coordinates(_vec_rows(x))


def _hom_space(m: FDModule, n: FDModule) -> Subspace:
    field = m.field
    eqs = []
    im = Mat.identity(field, m.dim)
    in_ = Mat.identity(field, n.dim)
    for am, an in zip(m.action, n.action):
        # row-major vec: vec(an X) = (an kron I) vec X, vec(X am) = (I kron am^T) vec X
        eqs.append(an.kron(im) - in_.kron(am.T))
    system = eqs[0].vstack(*eqs[1:]) if len(eqs) > 1 else eqs[0]
    return Subspace.kernel(system)


def hom_module(m: FDModule, n: FDModule) -> HomSpace:
    """Hom_A(M, N) with A acting by post-composition with the action on N."""
    if m.algebra is not n.algebra:
        raise ModuleError("modules over different algebras")
    space = _hom_space(m, n)
    hs = HomSpace(m, n, space, None)  # type: ignore[arg-type]
    action = []
    for an in n.action:
        cols = [hs.coordinates(an @ b) for b in hs.basis()]
        action.append(cols[0].hstack(*cols[1:]) if cols else Mat.zeros(m.field, 0, 0))
    module = FDModule(m.algebra, tuple(action), space.dim)
    return HomSpace(m, n, space, module)


# tensor ---------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class TensorSpace:
    """M (x)_A N as a quotient of M (x)_k N: projection q and section s."""

    left: FDModule
    right: FDModule
    q: Mat
    s: Mat

    @property
    def dim(self) -> int:
        return self.q.rows

    def induced(self, other: "TensorSpace", x: Mat, y: Mat) -> Mat:
        """Matrix of x (x) y: self -> other (x, y must descend)."""
        return other.q @ x.kron(y) @ self.s


def tensor_space(m: FDModule, n: FDModule) -> TensorSpace:
    if m.algebra is not n.algebra:
        raise ModuleError("modules over different algebras")
    field = m.field
    im, in_ = Mat.identity(field, m.dim), Mat.identity(field, n.dim)
    # image of m (x) a (x) n -> ma (x) n - m (x) an, one block per basis element a
    blocks = [am.kron(in_) - im.kron(an) for am, an in zip(m.action, n.action)]
    if m.dim * n.dim == 0:
        rel = Mat.zeros(field, m.dim * n.dim, 0)
    else:
        rel = blocks[0].hstack(*blocks[1:]) if len(blocks) > 1 else blocks[0]
    q, s = Subspace.span(rel).quotient()
    return TensorSpace(m, n, q, s)


def tensor_module(m: FDModule, n: FDModule) -> FDModule:
    ts = tensor_space(m, n)
    i_n = Mat.identity(m.field, n.dim)
    action = [ts.induced(ts, am, i_n) for am in m.action]
    return FDModule(m.algebra, tuple(action), ts.dim)


# duality and change of rings -------------------------------------------

def dual_module(m: FDModule) -> FDModule:
    """Linear dual with transposed action."""
    return FDModule(m.algebra, tuple(a.T for a in m.action), m.dim)


def dual_map(f: ModuleMap) -> ModuleMap:
    return ModuleMap(dual_module(f.target), dual_module(f.source), f.matrix.T)


@dataclass(frozen=True, eq=False)
class AlgebraMap:
    source: Algebra
    target: Algebra
    matrix: Mat

    def check(self) -> "AlgebraMap":
        a, b, phi = self.source, self.target, self.matrix
        if phi.shape != (b.dim, a.dim):
            raise AlgebraError(f"algebra map matrix has shape {phi.shape}, expected {(b.dim, a.dim)}")
        if phi @ a.unit != b.unit:
            raise AlgebraError("algebra map does not preserve the unit")
        for i in range(a.dim):
            for j in range(i, a.dim):
                lhs = phi @ a.mult[i].sub(cols=[j])
                rhs = _left_mult(b, phi.sub(cols=[i])) @ phi.sub(cols=[j])
                if lhs != rhs:
                    raise AlgebraError(f"algebra map is not multiplicative on (b_{i}, b_{j})")
        return self


def _left_mult(b: Algebra, x: Mat) -> Mat:
    out = Mat.zeros(b.field, b.dim, b.dim)
    for c, m in zip(x.a[:, 0], b.mult):
        if c != 0:
            out = out + m.scale(c)
    return out


def restrict_scalars(phi: AlgebraMap, n: FDModule) -> FDModule:
    """phi_* N: the same space with a acting as phi(a)."""
    action = [n.act(list(phi.matrix.a[:, i])) for i in range(phi.source.dim)]
    return FDModule(phi.source, tuple(action), n.dim)


def extend_scalars(phi: AlgebraMap, m: FDModule) -> FDModule:
    """B (x)_A M with B acting on the left factor."""
    return extension_data(phi, m)[0]


def extension_data(phi: AlgebraMap, m: FDModule) -> tuple[FDModule, TensorSpace]:
    b = phi.target
    b_over_a = restrict_scalars(phi, free_module(b, 1))
    ts = tensor_space(b_over_a, m)
    i_m = Mat.identity(m.field, m.dim)
    action = [ts.induced(ts, lb, i_m) for lb in b.mult]
    return FDModule(b, tuple(action), ts.dim), ts


def extend_map(phi: AlgebraMap, f: ModuleMap) -> ModuleMap:
    src, ts_src = extension_data(phi, f.source)
    tgt, ts_tgt = extension_data(phi, f.target)
    i_b = Mat.identity(f.source.field, phi.target.dim)
    return ModuleMap(src, tgt, ts_src.induced(ts_tgt, i_b, f.matrix))

