"""Orthogonal projectors and their lattice operations.

Projectors are the truth values of everything downstream.  Meets go through
one kernel computation (the kernel of a sum of positive operators is the
intersection of the kernels), joins are the De Morgan dual, and every
projector is rebuilt as B B^dag from an orthonormal range basis so
idempotence never drifts.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatchError
from .linalg import dagger, kernel_basis, opnorm, range_basis, require_square, solution_basis
from .tolerances import DEFAULT_TOL, ToleranceConfig


class Projector:
    """An orthogonal projection, stored as matrix plus orthonormal range basis.

    Instances are immutable by convention.  ``basis`` columns are trusted to
    be orthonormal; use :meth:`from_basis` to orthonormalize raw spans and
    :meth:`from_matrix` to validate an externally supplied matrix.
    """

    __slots__ = ("matrix", "basis", "dim", "tol", "_complement")

    def __init__(self, basis: np.ndarray, dim: int | None = None,
                 tol: ToleranceConfig = DEFAULT_TOL):
        basis = np.asarray(basis, dtype=complex)
        if basis.ndim != 2:
            raise DimensionMismatchError("projector basis must be a column stack")
        self.basis = basis
        self.dim = basis.shape[0] if dim is None else dim
        if basis.shape[0] != self.dim:
            raise DimensionMismatchError(
                f"basis lives in dimension {basis.shape[0]}, expected {self.dim}")
        self.matrix = basis @ dagger(basis)
        self.tol = tol
        self._complement: Projector | None = None

    @classmethod
    def from_basis(cls, columns, dim: int | None = None,
                   tol: ToleranceConfig = DEFAULT_TOL) -> "Projector":
        """Build from a (possibly redundant, non-orthonormal) spanning set."""
        c = np.asarray(columns, dtype=complex)
        if c.ndim == 1:
            c = c[:, None]
        return cls(range_basis(c, tol), dim=dim if dim is not None else c.shape[0], tol=tol)

    @classmethod
    def from_matrix(cls, matrix, tol: ToleranceConfig = DEFAULT_TOL) -> "Projector":
        """Validate a Hermitian idempotent matrix and rebuild it from its range."""
        m = require_square(matrix)
        if opnorm(m - dagger(m)) > tol.assert_tol:
            raise ValueError("projector matrix is not Hermitian within tolerance")
        if opnorm(m @ m - m) > tol.assert_tol:
            raise ValueError("projector matrix is not idempotent within tolerance")
        eigenvalues, eigenvectors = np.linalg.eigh((m + dagger(m)) / 2.0)
        return cls(eigenvectors[:, eigenvalues > 0.5], dim=m.shape[0], tol=tol)

    @classmethod
    def zero(cls, dim: int, tol: ToleranceConfig = DEFAULT_TOL) -> "Projector":
        return cls(np.zeros((dim, 0), dtype=complex), dim=dim, tol=tol)

    @classmethod
    def identity(cls, dim: int, tol: ToleranceConfig = DEFAULT_TOL) -> "Projector":
        return cls(np.eye(dim, dtype=complex), dim=dim, tol=tol)

    @property
    def rank(self) -> int:
        return self.basis.shape[1]

    def isclose(self, other: "Projector", tol: ToleranceConfig | None = None) -> bool:
        t = tol or self.tol
        _require_same_dim(self, other)
        return opnorm(self.matrix - other.matrix) <= t.assert_tol

    def __repr__(self) -> str:
        return f"Projector(dim={self.dim}, rank={self.rank})"

    # Operator sugar for formula-shaped code; defaults to the stored tolerance.
    def __and__(self, other: "Projector") -> "Projector":
        return meet(self, other)

    def __or__(self, other: "Projector") -> "Projector":
        return join(self, other)

    def __invert__(self) -> "Projector":
        return ortho(self)

    def __le__(self, other: "Projector") -> bool:
        return leq(self, other)


def _require_same_dim(*projectors: Projector) -> int:
    dims = {p.dim for p in projectors}
    if len(dims) > 1:
        raise DimensionMismatchError(f"projectors on different spaces: dims {sorted(dims)}")
    return projectors[0].dim


def _resolve(tol: ToleranceConfig | None, p: Projector) -> ToleranceConfig:
    return tol if tol is not None else p.tol


def null_space_projector(matrix, tol: ToleranceConfig = DEFAULT_TOL,
                         scale_floor: float = 0.0) -> Projector:
    """Projector onto the null space of a square matrix."""
    m = require_square(matrix)
    return Projector(kernel_basis(m, tol, scale_floor), dim=m.shape[0], tol=tol)


def common_null_space_projector(matrices: Sequence[np.ndarray],
                                dim: int | None = None,
                                tol: ToleranceConfig = DEFAULT_TOL,
                                scale_floor: float = 0.0) -> Projector:
    """Projector onto the joint null space of a family of constraint matrices.

    The constraints are stacked and factored together.  Summing M^dag M terms
    instead would square the small singular values, and a kernel read off the
    squared operator only pins the individual residuals down to the square
    root of working precision; the stacked form keeps them linear.
    """
    mats = [np.asarray(m, dtype=complex) for m in matrices]
    if not mats:
        if dim is None:
            raise DimensionMismatchError("joint kernel of an empty family needs a dimension")
        return Projector.identity(dim, tol)
    n = mats[0].shape[1]
    for m in mats:
        if m.ndim != 2 or m.shape[1] != n:
            raise DimensionMismatchError("constraint matrices act on different spaces")
    if dim is not None and dim != n:
        raise DimensionMismatchError(f"constraints act on dimension {n}, expected {dim}")
    return Projector(solution_basis(np.vstack(mats), n, tol, scale_floor), dim=n, tol=tol)


def column_space_projector(columns, dim: int | None = None,
                           tol: ToleranceConfig = DEFAULT_TOL) -> Projector:
    """Projector onto the span of the given columns; empty input gives zero."""
    return Projector.from_basis(columns, dim=dim, tol=tol)


def meet(p: Projector, q: Projector, tol: ToleranceConfig | None = None) -> Projector:
    """Lattice meet: joint kernel of 1-P and 1-Q, the intersection of the ranges."""
    t = _resolve(tol, p)
    dim = _require_same_dim(p, q)
    eye = np.eye(dim, dtype=complex)
    return common_null_space_projector([eye - p.matrix, eye - q.matrix], dim, t,
                                       scale_floor=1.0)


def meet_all(projectors: Sequence[Projector], dim: int | None = None,
             tol: ToleranceConfig = DEFAULT_TOL) -> Projector:
    """Meet of a finite family in one kernel computation; empty family gives 1."""
    projectors = list(projectors)
    if not projectors:
        if dim is None:
            raise DimensionMismatchError("meet of an empty family needs an explicit dimension")
        return Projector.identity(dim, tol)
    d = _require_same_dim(*projectors)
    eye = np.eye(d, dtype=complex)
    return common_null_space_projector([eye - p.matrix for p in projectors], d, tol,
                                       scale_floor=1.0)


def ortho(p: Projector, tol: ToleranceConfig | None = None) -> Projector:
    """Orthocomplement, rebuilt from the complement basis and cached both ways.

    The cache makes ortho(ortho(P)) return the original object, so the double
    complement is exact rather than merely close.
    """
    if p._complement is None:
        t = _resolve(tol, p)
        q = Projector(kernel_basis(p.matrix, t), dim=p.dim, tol=t)
        q._complement = p
        p._complement = q
    return p._complement


def join(p: Projector, q: Projector, tol: ToleranceConfig | None = None) -> Projector:
    """Lattice join via De Morgan: ortho(meet(ortho(P), ortho(Q)))."""
    t = _resolve(tol, p)
    return ortho(meet(ortho(p, t), ortho(q, t), t), t)


def join_all(projectors: Sequence[Projector], dim: int | None = None,
             tol: ToleranceConfig = DEFAULT_TOL) -> Projector:
    """Join of a finite family as the span of the concatenated range bases."""
    projectors = list(projectors)
    if not projectors:
        if dim is None:
            raise DimensionMismatchError("join of an empty family needs an explicit dimension")
        return Projector.zero(dim, tol)
    d = _require_same_dim(*projectors)
    stacked = np.hstack([p.basis for p in projectors])
    return column_space_projector(stacked, dim=d, tol=tol)


def leq(p: Projector, q: Projector, tol: ToleranceConfig | None = None) -> bool:
    """Range inclusion: holds iff Q P = P within tolerance."""
    t = _resolve(tol, p)
    _require_same_dim(p, q)
    return opnorm(q.matrix @ p.matrix - p.matrix) <= t.assert_tol


def commutes(p: Projector, q: Projector, tol: ToleranceConfig | None = None) -> bool:
    """Compatibility: ||[P, Q]|| within tolerance.

    Equivalent to the lattice form P = (P ^ Q) v (P ^ Q'), which the test
    suite cross-checks; the norm form is the production route.
    """
    t = _resolve(tol, p)
    _require_same_dim(p, q)
    return opnorm(p.matrix @ q.matrix - q.matrix @ p.matrix) <= t.assert_tol


def sasaki_implies(p: Projector, q: Projector, tol: ToleranceConfig | None = None) -> Projector:
    """Sasaki arrow P -> Q = P' v (P ^ Q)."""
    t = _resolve(tol, p)
    return join(ortho(p, t), meet(p, q, t), t)


def logical_equiv(p: Projector, q: Projector, tol: ToleranceConfig | None = None) -> Projector:
    """Biconditional (P -> Q) ^ (Q -> P) with the Sasaki arrow."""
    t = _resolve(tol, p)
    return meet(sasaki_implies(p, q, t), sasaki_implies(q, p, t), t)


def meet_weak_limit(p: Projector, q: Projector, iterations: int = 200) -> np.ndarray:
    """Oracle route for the meet: the limit of (P Q)^n, returned as a matrix.

    Kept as an independent slow route for cross-checks; convergence is
    geometric in the principal angles, so a couple hundred iterations is far
    more than desk scale needs.
    """
    _require_same_dim(p, q)
    product = p.matrix @ q.matrix
    power = np.eye(p.dim, dtype=complex)
    for _ in range(iterations):
        power = power @ product
    # Symmetrize the tail: (PQ)^n -> meet only in the limit, and the limit is
    # Hermitian even though each iterate is not.
    return (power + dagger(power)) / 2.0


def family_commutes(projectors: Iterable[Projector],
                    tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """True when every pair in the family commutes."""
    ps = list(projectors)
    for i in range(len(ps)):
        for j in range(i + 1, len(ps)):
            if not commutes(ps[i], ps[j], tol):
                return False
    return True
