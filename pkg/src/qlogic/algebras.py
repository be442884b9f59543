"""Finite-dimensional *-algebras of matrices via commutants.

The commutant is computed as the solution space of the linear system
[X, G] = 0, [X, G^dag] = 0 over all generators G, vectorized row-major.
Generated algebras are double commutants; centers are span intersections;
minimal central projections come from eigenspaces of a random Hermitian
central element, verified and retried if the randomization lands degenerate.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateRandomizationError, DimensionMismatchError, QLogicError
from .linalg import commutator, dagger, opnorm, range_basis, require_square, solution_basis
from .projectors import Projector
from .tolerances import DEFAULT_TOL, ToleranceConfig

# Cap on basis-product pairs checked during closure validation, so the full
# dim-16 algebra (256 basis elements) stays constructible.
_CLOSURE_CHECK_CAP = 2048


def _vec(m: np.ndarray) -> np.ndarray:
    return np.asarray(m, dtype=complex).reshape(-1)


def _commutation_rows(g: np.ndarray, n: int) -> np.ndarray:
    # Row-major vec: vec(G X) = (G (x) I) vec(X), vec(X G) = (I (x) G^T) vec(X).
    eye = np.eye(n, dtype=complex)
    return np.kron(g, eye) - np.kron(eye, g.T)


def commutant(generators: Sequence[np.ndarray], dim: int,
              tol: ToleranceConfig = DEFAULT_TOL) -> list[np.ndarray]:
    """Orthonormal (Hilbert-Schmidt) basis of {X : [X, G] = [X, G^dag] = 0}.

    Adjoint constraints are always adjoined, so the result is a *-algebra
    whatever the generators are.  No generators means no constraints: the
    full matrix algebra comes back.
    """
    mats = [require_square(g) for g in generators]
    for g in mats:
        if g.shape[0] != dim:
            raise DimensionMismatchError(f"generator of dimension {g.shape[0]}, expected {dim}")
    rows = []
    for g in mats:
        # Per-generator normalization keeps the system scale-free; a generator
        # that is numerically a scalar would otherwise contribute a pure-noise
        # block whose own norm sets the rank cutoff.
        scale = opnorm(g)
        if scale == 0.0:
            continue
        rows.append(_commutation_rows(g, dim) / scale)
        rows.append(_commutation_rows(dagger(g), dim) / scale)
    system = np.vstack(rows) if rows else np.zeros((0, dim * dim), dtype=complex)
    basis_vectors = solution_basis(system, dim * dim, tol, scale_floor=1.0)
    basis = [basis_vectors[:, k].reshape(dim, dim) for k in range(basis_vectors.shape[1])]
    if not _span_contains(basis_vectors, _vec(np.eye(dim, dtype=complex)), tol):
        raise QLogicError("commutant basis does not span the identity")
    return basis


def _stack(basis: Sequence[np.ndarray]) -> np.ndarray:
    if not basis:
        n2 = 0
        return np.zeros((n2, 0), dtype=complex)
    return np.column_stack([_vec(b) for b in basis])


def _span_contains(stack: np.ndarray, vector: np.ndarray,
                   tol: ToleranceConfig) -> bool:
    residual = vector - stack @ (dagger(stack) @ vector)
    return float(np.linalg.norm(residual)) <= tol.assert_tol * max(1.0, float(np.linalg.norm(vector)))


def span_equal(first: Sequence[np.ndarray], second: Sequence[np.ndarray],
               tol: ToleranceConfig = DEFAULT_TOL) -> bool:
    """Mutual containment of two Hilbert-Schmidt spans of matrices.

    The inputs need not be orthonormal or even independent; each stack is
    reduced to an orthonormal range first, since the containment test
    projects with the stack directly.
    """
    a, b = range_basis(_stack(first), tol), range_basis(_stack(second), tol)
    if a.shape[1] != b.shape[1]:
        return False
    return all(_span_contains(a, b[:, k], tol) for k in range(b.shape[1])) and \
        all(_span_contains(b, a[:, k], tol) for k in range(a.shape[1]))


@dataclass
class MatrixAlgebra:
    """A unital *-subalgebra of the dim x dim matrices.

    ``basis`` and ``commutant_basis`` are Hilbert-Schmidt orthonormal; the
    generating set is kept for reports.  Construct via
    :func:`algebra_from_generators`, which validates the invariants.
    """

    dim: int
    generators: list[np.ndarray] = field(repr=False)
    basis: list[np.ndarray] = field(repr=False)
    commutant_basis: list[np.ndarray] = field(repr=False)
    tol: ToleranceConfig = DEFAULT_TOL

    @property
    def size(self) -> int:
        return len(self.basis)

    def __repr__(self) -> str:
        return f"MatrixAlgebra(dim={self.dim}, size={self.size})"


def algebra_from_generators(generators: Sequence[np.ndarray], dim: int,
                            tol: ToleranceConfig = DEFAULT_TOL) -> MatrixAlgebra:
    """Double commutant of the generators, with construction-time invariants.

    Checks: the identity is in the span, the span is closed under product and
    adjoint, and the double commutant of the result reproduces the commutant
    (fixpoint).
    """
    gens = [require_square(g) for g in generators]
    comm = commutant(gens, dim, tol)
    basis = commutant(comm, dim, tol)
    stack = _stack(basis)
    for b in basis:
        if not _span_contains(stack, _vec(dagger(b)), tol):
            raise QLogicError("algebra span is not adjoint-closed")
    pairs = [(i, j) for i in range(len(basis)) for j in range(len(basis))]
    for i, j in pairs[:_CLOSURE_CHECK_CAP]:
        if not _span_contains(stack, _vec(basis[i] @ basis[j]), tol):
            raise QLogicError("algebra span is not closed under products")
    if not span_equal(commutant(basis, dim, tol), comm, tol):
        raise QLogicError("double commutant fixpoint failed")
    return MatrixAlgebra(dim=dim, generators=gens, basis=basis,
                         commutant_basis=comm, tol=tol)


def contains(algebra: MatrixAlgebra, matrix, tol: ToleranceConfig | None = None) -> bool:
    """Membership: M commutes with every commutant basis element."""
    t = tol or algebra.tol
    m = require_square(matrix)
    if m.shape[0] != algebra.dim:
        raise DimensionMismatchError(f"matrix of dimension {m.shape[0]}, expected {algebra.dim}")
    scale = max(1.0, opnorm(m))
    return all(opnorm(commutator(m, b)) <= t.assert_tol * scale
               for b in algebra.commutant_basis)


def center(algebra: MatrixAlgebra, tol: ToleranceConfig | None = None) -> list[np.ndarray]:
    """HS-orthonormal basis of the center, as a span intersection.

    Intersection of span(basis) and span(commutant_basis) in vec space, via
    the same kernel-of-sum-of-complements route the projector meet uses.
    """
    t = tol or algebra.tol
    n2 = algebra.dim * algebra.dim
    a, b = _stack(algebra.basis), _stack(algebra.commutant_basis)
    eye = np.eye(n2, dtype=complex)
    gap = (eye - a @ dagger(a)) + (eye - b @ dagger(b))
    vectors = solution_basis(gap, n2, t, scale_floor=1.0)
    return [vectors[:, k].reshape(algebra.dim, algebra.dim) for k in range(vectors.shape[1])]


def _cluster_indices(values: np.ndarray, width: float) -> list[np.ndarray]:
    """Group indices of ascending values whose neighbors sit within width."""
    if values.size == 0:
        return []
    groups = [[0]]
    for k in range(1, values.size):
        if values[k] - values[k - 1] <= width:
            groups[-1].append(k)
        else:
            groups.append([k])
    return [np.asarray(g) for g in groups]


def minimal_central_projections(algebra: MatrixAlgebra,
                                tol: ToleranceConfig | None = None,
                                attempts: int = 5) -> list[Projector]:
    """The minimal projections of the center, ordered by first eigenvalue.

    A random Hermitian combination of the center basis separates the central
    blocks with probability one; each candidate eigencluster projector is
    verified (central, minimal, mutually orthogonal, summing to one) and the
    randomization is retried when a check fails.
    """
    t = tol or algebra.tol
    zbasis = center(algebra, t)
    hermitian_parts: list[np.ndarray] = []
    for z in zbasis:
        for h in ((z + dagger(z)) / 2.0, (z - dagger(z)) / 2.0j):
            if opnorm(h) > t.rank_rel_tol:
                hermitian_parts.append(h)
    if not hermitian_parts:
        raise QLogicError("center span contains no Hermitian part")
    rng = np.random.default_rng(0x5EED)
    failure = "no attempt made"
    for _ in range(attempts):
        coeffs = rng.standard_normal(len(hermitian_parts))
        h = sum(c * part for c, part in zip(coeffs, hermitian_parts))
        eigenvalues, eigenvectors = np.linalg.eigh((h + dagger(h)) / 2.0)
        width = t.cluster_tol * max(1.0, float(np.max(np.abs(eigenvalues))))
        clusters = _cluster_indices(eigenvalues, width)
        candidates = [Projector(eigenvectors[:, idx], dim=algebra.dim, tol=t)
                      for idx in clusters]
        ok, failure = _verify_minimal_central(candidates, algebra, zbasis, t)
        if ok:
            return candidates
    raise DegenerateRandomizationError(
        f"minimal central projections not separated after {attempts} attempts: {failure}")


def _verify_minimal_central(candidates: list[Projector], algebra: MatrixAlgebra,
                            zbasis: list[np.ndarray],
                            t: ToleranceConfig) -> tuple[bool, str]:
    total = sum(p.matrix for p in candidates)
    if opnorm(total - np.eye(algebra.dim)) > t.assert_tol:
        return False, "candidates do not sum to the identity"
    for p in candidates:
        if not contains(algebra, p.matrix, t):
            return False, "candidate not in the algebra"
        for b in algebra.basis:
            if opnorm(commutator(p.matrix, b)) > t.assert_tol * max(1.0, opnorm(b)):
                return False, "candidate not central"
        # Minimality: the center compresses to scalars on the range.
        r = max(p.rank, 1)
        for z in zbasis:
            lam = np.trace(z @ p.matrix) / r
            if opnorm(p.matrix @ z @ p.matrix - lam * p.matrix) > t.assert_tol * max(1.0, opnorm(z)):
                return False, "candidate splits further inside the center"
    for i in range(len(candidates)):
        for j in range(i + 1, len(candidates)):
            if opnorm(candidates[i].matrix @ candidates[j].matrix) > t.assert_tol:
                return False, "candidates not mutually orthogonal"
    return True, ""
