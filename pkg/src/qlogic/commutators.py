"""Commutator projections of projector families and observables.

Three independent routes to the same object:

* ``com_pair`` / ``com_family``: the lattice formula, a join of meets over
  sign assignments of the family members;
* ``com_kernel``: the joint kernel of the triple products [P1, P2] P3,
  which is linear-algebraic rather than lattice-built;
* ``com_observables``: the spectral-family kernel route for observables,
  cross-checked against the commutator kernel of a basis of the generated
  algebra.

The engine never collapses routes into each other: route agreement is the
load-bearing correctness signal.
"""

from __future__ import annotations

import itertools
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .algebras import MatrixAlgebra, algebra_from_generators, minimal_central_projections
from .errors import CrossCheckFailure, FamilyTooLargeError
from .linalg import commutator, opnorm
from .observables import Observable
from .projectors import (
    Projector,
    common_null_space_projector,
    join_all,
    leq,
    meet,
    meet_all,
    ortho,
)
from .tolerances import DEFAULT_TOL, ToleranceConfig

_MAX_FAMILY = 12


def com_pair(p: Projector, q: Projector, tol: ToleranceConfig = DEFAULT_TOL) -> Projector:
    """Two-element commutator (P^Q) v (P^Q') v (P'^Q) v (P'^Q')."""
    pc, qc = ortho(p, tol), ortho(q, tol)
    parts = [meet(p, q, tol), meet(p, qc, tol), meet(pc, q, tol), meet(pc, qc, tol)]
    return join_all(parts, dim=p.dim, tol=tol)


def com_family(family: Sequence[Projector], tol: ToleranceConfig = DEFAULT_TOL) -> Projector:
    """Commutator of a finite family: join over all sign maps of the meets.

    Exponential in the family size by construction; families larger than
    twelve are rejected rather than silently approximated.
    """
    members = list(family)
    if not members:
        raise FamilyTooLargeError("commutator of an empty family is not defined here")
    if len(members) > _MAX_FAMILY:
        raise FamilyTooLargeError(
            f"family of size {len(members)} exceeds the sign-map expansion cap {_MAX_FAMILY}")
    dim = members[0].dim
    signed = [(p, ortho(p, tol)) for p in members]
    meets = []
    for signs in itertools.product((0, 1), repeat=len(members)):
        chosen = [pair[s] for pair, s in zip(signed, signs)]
        meets.append(meet_all(chosen, dim=dim, tol=tol))
    return join_all(meets, dim=dim, tol=tol)


def com_kernel(family: Sequence[Projector], tol: ToleranceConfig = DEFAULT_TOL) -> Projector:
    """Commutator as the joint kernel of the triple products [P1, P2] P3.

    One constraint block per unordered pair and trailing member; the blocks
    are stacked rather than summed as squares so the kernel pins every
    [P_i, P_j] P_k psi down at working precision.
    """
    members = list(family)
    if not members:
        raise FamilyTooLargeError("commutator of an empty family is not defined here")
    dim = members[0].dim
    pairs = [commutator(p1.matrix, p2.matrix)
             for i, p1 in enumerate(members) for p2 in members[i + 1:]]
    blocks = [c @ p3.matrix for c in pairs for p3 in members]
    return common_null_space_projector(blocks, dim, tol, scale_floor=1.0)


def threshold_family(observables: Sequence[Observable]) -> list[Projector]:
    """All cumulative spectral projectors of the given observables."""
    return [x.threshold(v) for x in observables for v in x.spectrum]


def com_observables(observables: Sequence[Observable],
                    tol: ToleranceConfig = DEFAULT_TOL,
                    cross_check: bool = True) -> Projector:
    """Commutator of finitely many observables.

    Production route: the triple-product kernel over the cumulative spectral
    projectors.  Cross-check route: the kernel of summed pairwise commutators
    of an algebra basis for the generated *-algebra.  Disagreement raises
    CrossCheckFailure since both characterize the same projection.
    """
    xs = list(observables)
    spectral_route = com_kernel(threshold_family(xs), tol)
    if cross_check:
        dim = xs[0].dim
        alg = algebra_from_generators([x.matrix for x in xs], dim, tol)
        blocks = [commutator(b1, b2)
                  for i, b1 in enumerate(alg.basis) for b2 in alg.basis[i + 1:]]
        algebra_route = common_null_space_projector(blocks, dim, tol, scale_floor=1.0)
        gap = opnorm(spectral_route.matrix - algebra_route.matrix)
        if gap > tol.assert_tol:
            raise CrossCheckFailure(
                f"commutator routes disagree by {gap:.3e} on {[x.name for x in xs]}")
    return spectral_route


@dataclass
class SubcommutatorReport:
    """Checks that com(F) is the largest central element making F compatible."""

    com: Projector
    central: bool
    compressions_commute: bool
    interval_ranks: list[int]
    interval_commute: list[bool]

    @property
    def passed(self) -> bool:
        return self.central and self.compressions_commute and all(self.interval_commute)


def verify_subcommutator(family: Sequence[Projector], algebra: MatrixAlgebra,
                         tol: ToleranceConfig = DEFAULT_TOL) -> SubcommutatorReport:
    """Report on the subcommutator role of com(F) inside the given algebra.

    Checks that E = com(F) is central, that the compressions P_i E commute
    pairwise, and that the same holds below every minimal central projection
    under E (the interval property of the compatible part).
    """
    members = list(family)
    e = com_family(members, tol)
    scale = max(1.0, max((opnorm(b) for b in algebra.basis), default=1.0))
    central = all(opnorm(commutator(e.matrix, b)) <= tol.assert_tol * scale
                  for b in algebra.basis)
    from .algebras import contains as algebra_contains
    central = central and algebra_contains(algebra, e.matrix, tol)
    compressions_commute = _compressed_family_commutes(members, e, tol)
    interval_ranks: list[int] = []
    interval_commute: list[bool] = []
    for c in minimal_central_projections(algebra, tol):
        if leq(c, e, tol):
            interval_ranks.append(c.rank)
            interval_commute.append(_compressed_family_commutes(members, c, tol))
    return SubcommutatorReport(com=e, central=central,
                               compressions_commute=compressions_commute,
                               interval_ranks=interval_ranks,
                               interval_commute=interval_commute)


def _compressed_family_commutes(members: Sequence[Projector], central: Projector,
                                tol: ToleranceConfig) -> bool:
    compressed = [p.matrix @ central.matrix for p in members]
    for i in range(len(compressed)):
        for j in range(i + 1, len(compressed)):
            if opnorm(commutator(compressed[i], compressed[j])) > tol.assert_tol:
                return False
    return True


@dataclass
class FactorizationReport:
    """Boolean/non-Boolean splitting of an algebra along com(F)."""

    com: Projector
    abelian_below: bool
    abelian_residual: float
    residual_blocks: list[int]
    residual_nonabelian: list[bool]
    residual_norms: list[float]

    @property
    def passed(self) -> bool:
        return self.abelian_below and all(self.residual_nonabelian)


def boolean_factorization_check(family: Sequence[Projector], algebra: MatrixAlgebra,
                                tol: ToleranceConfig = DEFAULT_TOL) -> FactorizationReport:
    """Check the two-sided factorization along c = com(F).

    Below c the compressed algebra must be abelian; below every minimal
    central projection orthogonal to c it must fail to be abelian, i.e. no
    Boolean factor survives on the incompatible side.
    """
    members = list(family)
    c = com_family(members, tol)
    worst = 0.0
    for i in range(len(algebra.basis)):
        for j in range(i + 1, len(algebra.basis)):
            worst = max(worst, opnorm(commutator(algebra.basis[i], algebra.basis[j]) @ c.matrix))
    abelian_below = worst <= tol.assert_tol
    c_perp = ortho(c, tol)
    blocks: list[int] = []
    flags: list[bool] = []
    norms: list[float] = []
    for e in minimal_central_projections(algebra, tol):
        if not leq(e, c_perp, tol):
            continue
        peak = 0.0
        for i in range(len(algebra.basis)):
            for j in range(i + 1, len(algebra.basis)):
                peak = max(peak, opnorm(commutator(algebra.basis[i], algebra.basis[j]) @ e.matrix))
        blocks.append(e.rank)
        norms.append(peak)
        flags.append(peak > tol.assert_tol)
    return FactorizationReport(com=c, abelian_below=abelian_below, abelian_residual=worst,
                               residual_blocks=blocks, residual_nonabelian=flags,
                               residual_norms=norms)
