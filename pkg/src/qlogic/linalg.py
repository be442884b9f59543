"""Dense complex linear algebra kernel.

Everything downstream funnels through these few routines so the tolerance
policy is applied in exactly one place.  Matrices are plain complex ndarrays;
no sparsity, dimensions stay at desk scale.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatchError, NonSquareError, NotHermitianError, QLogicError
from .tolerances import DEFAULT_TOL, ToleranceConfig


def as_matrix(value) -> np.ndarray:
    """Coerce to a 2-D complex ndarray without copying when possible."""
    m = np.asarray(value, dtype=complex)
    if m.ndim != 2:
        raise NonSquareError(f"expected a matrix, got ndim={m.ndim}")
    return m


def require_square(value) -> np.ndarray:
    m = as_matrix(value)
    if m.shape[0] != m.shape[1]:
        raise NonSquareError(f"expected a square matrix, got shape {m.shape}")
    return m


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(m).T


def opnorm(m) -> float:
    """Operator 2-norm (largest singular value)."""
    m = np.asarray(m, dtype=complex)
    if m.size == 0:
        return 0.0
    return float(np.linalg.norm(m, 2))


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def matrices_commute(a, b, tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    a = require_square(a)
    b = require_square(b)
    scale = max(1.0, opnorm(a) * opnorm(b))
    return opnorm(commutator(a, b)) <= tol.assert_tol * scale


def hermitian_eig(matrix, tol: ToleranceConfig = DEFAULT_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecompose a Hermitian matrix.

    Returns eigenvalues ascending and orthonormal eigenvector columns.  The
    input is symmetrized as (M + M^dag)/2 before factoring; inputs further
    than assert_tol * ||M|| from Hermitian are rejected.
    """
    m = require_square(matrix)
    scale = max(1.0, opnorm(m))
    if opnorm(m - dagger(m)) > tol.assert_tol * scale:
        raise NotHermitianError(f"matrix is {opnorm(m - dagger(m)):.3e} from Hermitian")
    sym = (m + dagger(m)) / 2.0
    eigenvalues, eigenvectors = np.linalg.eigh(sym)
    n = m.shape[0]
    residual = opnorm(sym - eigenvectors @ np.diag(eigenvalues) @ dagger(eigenvectors))
    gram = opnorm(dagger(eigenvectors) @ eigenvectors - np.eye(n))
    if residual > tol.assert_tol * scale or gram > tol.assert_tol:
        raise QLogicError(
            f"eigendecomposition postcondition failed (residual {residual:.3e}, gram {gram:.3e})"
        )
    return eigenvalues, eigenvectors


def singular_cutoff(singular_values: np.ndarray, dim: int, tol: ToleranceConfig,
                    scale_floor: float = 0.0) -> float:
    """Rank cutoff: rank_rel_tol relative to largest singular value times dimension.

    ``scale_floor`` raises the reference scale when the caller knows the
    natural scale of its operator (projector sums have scale one); without it
    a matrix that is pure numerical noise would have its noise ranked.
    """
    if singular_values.size == 0:
        return 0.0
    return tol.rank_rel_tol * max(float(singular_values[0]), scale_floor) * dim


def kernel_basis(matrix, tol: ToleranceConfig = DEFAULT_TOL,
                 scale_floor: float = 0.0) -> np.ndarray:
    """Orthonormal columns spanning the null space of a square matrix.

    Membership is judged by singular values below the rank_rel_tol cutoff,
    so non-Hermitian inputs need no special casing.
    """
    m = require_square(matrix)
    n = m.shape[0]
    if n == 0:
        return np.zeros((0, 0), dtype=complex)
    _, s, vh = np.linalg.svd(m)
    cutoff = singular_cutoff(s, n, tol, scale_floor)
    null_mask = s <= cutoff
    return dagger(vh)[:, null_mask]


def solution_basis(system, unknowns: int, tol: ToleranceConfig = DEFAULT_TOL,
                   scale_floor: float = 0.0) -> np.ndarray:
    """Orthonormal basis of the solution space of A x = 0 for rectangular A."""
    a = np.asarray(system, dtype=complex)
    if a.ndim != 2 or a.shape[1] != unknowns:
        raise DimensionMismatchError(f"system shape {a.shape} does not match {unknowns} unknowns")
    if a.shape[0] == 0:
        return np.eye(unknowns, dtype=complex)
    if a.shape[0] < unknowns:
        # Pad to square so the economy factorization still carries every
        # right-singular direction; a full left factor of a tall stack
        # would be quadratic in the row count.
        a = np.vstack([a, np.zeros((unknowns - a.shape[0], unknowns), dtype=complex)])
    _, s, vh = np.linalg.svd(a, full_matrices=False)
    cutoff = singular_cutoff(s, unknowns, tol, scale_floor)
    rank = int(np.count_nonzero(s > cutoff))
    return dagger(vh)[:, rank:]


def range_basis(columns, tol: ToleranceConfig = DEFAULT_TOL) -> np.ndarray:
    """Orthonormal columns spanning the column space of the given stack."""
    c = np.asarray(columns, dtype=complex)
    if c.ndim != 2:
        raise DimensionMismatchError(f"expected a column stack, got ndim={c.ndim}")
    if c.shape[1] == 0:
        return np.zeros((c.shape[0], 0), dtype=complex)
    u, s, _ = np.linalg.svd(c, full_matrices=False)
    cutoff = singular_cutoff(s, max(c.shape), tol)
    return u[:, s > cutoff]


def kron(a, b) -> np.ndarray:
    """Kronecker product, first factor on the slow index."""
    return np.kron(as_matrix(a), as_matrix(b))


def partial_trace_second(matrix, dim_first: int, dim_second: int) -> np.ndarray:
    """Trace out the second tensor factor of an operator on C^d1 (x) C^d2."""
    m = require_square(matrix)
    if m.shape[0] != dim_first * dim_second:
        raise DimensionMismatchError(
            f"matrix of dimension {m.shape[0]} is not {dim_first} x {dim_second}"
        )
    blocks = m.reshape(dim_first, dim_second, dim_first, dim_second)
    return np.einsum("ikjk->ij", blocks)
