"""Density states, quantum equality, and the equivalence batteries.

The two batteries here each take one semantic predicate (simultaneous
determinateness of a family, equality of a pair in a state) and evaluate
every implemented characterization of it independently.  The clauses must
agree; disagreement beyond tolerance is a kernel bug, not a property of the
input, and raises InconsistentBattery.
"""

from __future__ import annotations

import itertools
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from .algebras import algebra_from_generators
from .commutators import com_observables
from .errors import (
    CrossCheckFailure,
    DimensionMismatchError,
    InconsistentBattery,
    NotCommutingError,
    QLogicError,
)
from .linalg import commutator, dagger, hermitian_eig, kron, opnorm, require_square
from .observables import Observable
from .projectors import (
    Projector,
    column_space_projector,
    common_null_space_projector,
    leq,
    meet,
    meet_all,
)
from .tolerances import DEFAULT_TOL, ToleranceConfig


class DensityState:
    """A density operator with its support resolved.

    Eigenvalues under the rank cutoff are truncated and the state is
    renormalized, so the support projector is trustworthy downstream.
    """

    __slots__ = ("matrix", "support", "eigenvalues", "eigenvectors", "tol")

    def __init__(self, matrix: np.ndarray, support: Projector, eigenvalues: np.ndarray,
                 eigenvectors: np.ndarray, tol: ToleranceConfig):
        self.matrix = matrix
        self.support = support
        self.eigenvalues = eigenvalues
        self.eigenvectors = eigenvectors
        self.tol = tol

    @classmethod
    def from_matrix(cls, matrix, tol: ToleranceConfig = DEFAULT_TOL) -> "DensityState":
        m = require_square(matrix)
        eigenvalues, eigenvectors = hermitian_eig(m, tol)
        if float(eigenvalues[0]) < -tol.assert_tol:
            raise ValueError(f"state has negative eigenvalue {eigenvalues[0]:.3e}")
        trace = float(np.sum(eigenvalues))
        if abs(trace - 1.0) > tol.assert_tol:
            raise ValueError(f"state trace {trace} is not one within tolerance")
        cutoff = tol.rank_rel_tol * float(eigenvalues[-1]) * m.shape[0]
        keep = eigenvalues > cutoff
        kept_values = eigenvalues[keep]
        kept_vectors = eigenvectors[:, keep]
        kept_values = kept_values / float(np.sum(kept_values))
        rebuilt = (kept_vectors * kept_values) @ dagger(kept_vectors)
        support = Projector(kept_vectors, dim=m.shape[0], tol=tol)
        return cls(rebuilt, support, kept_values, kept_vectors, tol)

    @classmethod
    def from_vector(cls, vector, tol: ToleranceConfig = DEFAULT_TOL) -> "DensityState":
        v = np.asarray(vector, dtype=complex).reshape(-1)
        norm = float(np.linalg.norm(v))
        if abs(norm - 1.0) > tol.assert_tol:
            raise ValueError(f"state vector norm {norm} is not one within tolerance")
        v = v / norm
        column = v[:, None]
        support = Projector(column, dim=v.size, tol=tol)
        return cls(column @ dagger(column), support, np.array([1.0]), column, tol)

    @classmethod
    def maximally_mixed(cls, dim: int, tol: ToleranceConfig = DEFAULT_TOL) -> "DensityState":
        return cls.from_matrix(np.eye(dim, dtype=complex) / dim, tol)

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[0])

    @property
    def rank(self) -> int:
        return self.support.rank

    def tensor(self, other: "DensityState") -> "DensityState":
        return DensityState.from_matrix(kron(self.matrix, other.matrix), self.tol)

    def expectation(self, operator: np.ndarray) -> complex:
        return complex(np.trace(operator @ self.matrix))

    def __repr__(self) -> str:
        return f"DensityState(dim={self.dim}, rank={self.rank})"


@dataclass(frozen=True)
class JointDistribution:
    """A probability assignment on tuples of spectral values."""

    axes: tuple[str, ...]
    atoms: dict[tuple[float, ...], float] = field(compare=False)

    def __post_init__(self):
        bad = [v for v in self.atoms.values() if v < -DEFAULT_TOL.assert_tol]
        if bad:
            raise QLogicError(f"negative joint mass {min(bad):.3e}")
        if abs(self.total_mass - 1.0) > DEFAULT_TOL.assert_tol:
            raise QLogicError(f"joint mass {self.total_mass} is not one")

    @property
    def total_mass(self) -> float:
        return float(sum(self.atoms.values()))

    def mass(self, rectangle: Sequence[Sequence[float]]) -> float:
        """Mass of a product set given per-axis value collections."""
        total = 0.0
        for values, p in sorted(self.atoms.items()):
            if all(any(abs(v - w) <= 1e-12 for w in axis) for v, axis in zip(values, rectangle)):
                total += p
        return total

    def marginal(self, axis: int) -> dict[float, float]:
        out: dict[float, float] = {}
        for values, p in sorted(self.atoms.items()):
            out[values[axis]] = out.get(values[axis], 0.0) + p
        return out

    def sorted_items(self) -> list[tuple[tuple[float, ...], float]]:
        return sorted(self.atoms.items())


def probability(proposition, state: DensityState, registry,
                tol: ToleranceConfig | None = None) -> float:
    """Born probability of a proposition: Tr of its truth projector against the state."""
    from .propositions import truth_value  # deferred: propositions builds on this module

    t = tol or state.tol
    projector = truth_value(proposition, registry, t)
    return projector_probability(projector, state, t)


def projector_probability(projector: Projector, state: DensityState,
                          tol: ToleranceConfig | None = None) -> float:
    t = tol or state.tol
    if projector.dim != state.dim:
        raise DimensionMismatchError("proposition and state live on different spaces")
    value = complex(np.trace(projector.matrix @ state.matrix))
    if abs(value.imag) > t.assert_tol:
        raise QLogicError(f"probability has imaginary part {value.imag:.3e}")
    return float(min(1.0, max(0.0, value.real)))


def holds(proposition, state: DensityState, registry,
          tol: ToleranceConfig | None = None) -> bool:
    """A proposition holds in a state when its probability is one."""
    t = tol or state.tol
    return probability(proposition, state, registry, t) >= 1.0 - t.assert_tol


def born_joint(observables: Sequence[Observable], thresholds: Sequence[float],
               state: DensityState, tol: ToleranceConfig | None = None) -> float:
    """Joint distribution function of commuting observables at the given cuts."""
    t = tol or state.tol
    xs = list(observables)
    if len(xs) != len(thresholds):
        raise DimensionMismatchError("one threshold per observable required")
    for i in range(len(xs)):
        for j in range(i + 1, len(xs)):
            if not xs[i].commutes_with(xs[j], t):
                raise NotCommutingError(
                    f"{xs[i].name} and {xs[j].name} do not commute; no joint distribution function")
    product = np.eye(state.dim, dtype=complex)
    for x, cut in zip(xs, thresholds):
        product = product @ x.threshold(cut).matrix
    value = complex(np.trace(product @ state.matrix))
    return float(min(1.0, max(0.0, value.real)))


def cyclic_projector(observables: Sequence[Observable], state: DensityState,
                     tol: ToleranceConfig | None = None) -> Projector:
    """Projector onto the orbit of the state's support under the generated algebra.

    This is the smallest projection commuting with the family that leaves the
    state invariant; both properties are asserted before returning.
    """
    t = tol or state.tol
    xs = list(observables)
    dim = state.dim
    alg = algebra_from_generators([x.matrix for x in xs], dim, t)
    columns = []
    for b in alg.basis:
        columns.append(b @ state.support.basis)
    stacked = np.hstack(columns) if columns else state.support.basis
    projector = column_space_projector(stacked, dim=dim, tol=t)
    for x in xs:
        scale = max(1.0, opnorm(x.matrix))
        if opnorm(commutator(projector.matrix, x.matrix)) > t.assert_tol * scale:
            raise QLogicError(f"cyclic projector fails to commute with {x.name}")
    if opnorm(projector.matrix @ state.matrix - state.matrix) > t.assert_tol:
        raise QLogicError("cyclic projector does not fix the state")
    return projector


def simultaneously_determinate(observables: Sequence[Observable], state: DensityState,
                               tol: ToleranceConfig | None = None) -> bool:
    """The family has definite values together in the state: Tr[com rho] = 1."""
    t = tol or state.tol
    com = com_observables(list(observables), t)
    return projector_probability(com, state, t) >= 1.0 - t.assert_tol


# ---------------------------------------------------------------------------
# determinateness battery


@dataclass
class DeterminatenessReport:
    """Outcome of every implemented determinateness characterization."""

    names: tuple[str, ...]
    com: Projector
    clauses: dict[str, bool]
    residuals: dict[str, float]
    distribution: JointDistribution | None

    @property
    def coherent(self) -> bool:
        return len(set(self.clauses.values())) == 1

    @property
    def determinate(self) -> bool:
        return all(self.clauses.values())


def determinateness_battery(observables: Sequence[Observable], state: DensityState,
                            tol: ToleranceConfig | None = None) -> DeterminatenessReport:
    """Evaluate all determinateness characterizations and enforce agreement.

    Clauses: the commutator carries full probability; it fixes the state; the
    cyclic subspace sits below it; the generated algebra's commutators kill
    the state; the family compressed to the cyclic subspace commutes; and the
    spectral-atom product masses form an additive probability measure.  When
    all pass, the joint distribution is constructed and attached.
    """
    t = tol or state.tol
    xs = list(observables)
    com = com_observables(xs, t)
    cyclic = cyclic_projector(xs, state, t)
    alg = algebra_from_generators([x.matrix for x in xs], state.dim, t)

    clauses: dict[str, bool] = {}
    residuals: dict[str, float] = {}

    deficit = 1.0 - projector_probability(com, state, t)
    clauses["full_probability"] = deficit <= t.assert_tol
    residuals["full_probability"] = deficit

    invariance = opnorm(com.matrix @ state.matrix - state.matrix)
    clauses["state_invariance"] = invariance <= t.assert_tol
    residuals["state_invariance"] = invariance

    domination = opnorm(com.matrix @ cyclic.matrix - cyclic.matrix)
    clauses["cyclic_dominated"] = domination <= t.assert_tol
    residuals["cyclic_dominated"] = domination

    worst = 0.0
    for i in range(len(alg.basis)):
        for j in range(i + 1, len(alg.basis)):
            worst = max(worst, opnorm(commutator(alg.basis[i], alg.basis[j]) @ state.matrix))
    clauses["algebra_kills_state"] = worst <= t.assert_tol
    residuals["algebra_kills_state"] = worst

    worst = 0.0
    compressed = [x.matrix @ cyclic.matrix for x in xs]
    for i in range(len(compressed)):
        for j in range(i + 1, len(compressed)):
            scale = max(1.0, opnorm(xs[i].matrix) * opnorm(xs[j].matrix))
            worst = max(worst, opnorm(commutator(compressed[i], compressed[j])) / scale)
    clauses["compressions_commute"] = worst <= t.assert_tol
    residuals["compressions_commute"] = worst

    masses, measure_residual, measure_ok = _grid_measure(xs, state, t)
    clauses["product_measure"] = measure_ok
    residuals["product_measure"] = measure_residual

    distribution = None
    if all(clauses.values()):
        distribution = JointDistribution(tuple(x.name for x in xs),
                                         {k: max(0.0, v) for k, v in masses.items()})
    report = DeterminatenessReport(tuple(x.name for x in xs), com, clauses,
                                   residuals, distribution)
    if not report.coherent:
        raise InconsistentBattery(
            f"determinateness clauses disagree: {report.clauses}", report)
    return report


def _grid_measure(xs: list[Observable], state: DensityState,
                  t: ToleranceConfig) -> tuple[dict[tuple[float, ...], float], float, bool]:
    """Spectral-atom product masses plus their worst additivity violation."""
    dim = state.dim
    atom_projectors = [[x.eigenprojector_at(v) for v in x.spectrum] for x in xs]
    grids = [range(len(x.spectrum)) for x in xs]
    masses: dict[tuple[float, ...], float] = {}
    worst = 0.0
    for combo in itertools.product(*grids):
        parts = [atom_projectors[j][k] for j, k in enumerate(combo)]
        p = meet_all(parts, dim=dim, tol=t)
        value = float(np.real(np.trace(p.matrix @ state.matrix)))
        masses[tuple(xs[j].spectrum[k] for j, k in enumerate(combo))] = value
        worst = max(worst, max(0.0, -value))
    total = float(sum(masses.values()))
    worst = max(worst, abs(total - 1.0))
    # Additivity along each axis: summing an axis out must match the measure
    # of the meet over the remaining atoms.
    for j in range(len(xs)):
        other_grids = [range(len(x.spectrum)) for i, x in enumerate(xs) if i != j]
        for rest in itertools.product(*other_grids):
            parts = []
            rest_iter = iter(rest)
            summed = 0.0
            for i, x in enumerate(xs):
                if i != j:
                    parts.append(atom_projectors[i][next(rest_iter)])
            direct = meet_all(parts, dim=dim, tol=t)
            direct_mass = float(np.real(np.trace(direct.matrix @ state.matrix)))
            for k in range(len(xs[j].spectrum)):
                combo_values = []
                rest_iter2 = iter(rest)
                for i, x in enumerate(xs):
                    if i == j:
                        combo_values.append(x.spectrum[k])
                    else:
                        combo_values.append(x.spectrum[next(rest_iter2)])
                summed += masses[tuple(combo_values)]
            worst = max(worst, abs(summed - direct_mass))
    return masses, worst, worst <= t.assert_tol


# ---------------------------------------------------------------------------
# quantum equality


def _merged_spectrum(x: Observable, y: Observable) -> list[float]:
    """Union of the two spectra with snap-width identification."""
    width = max(x.snap_width, y.snap_width)
    values = sorted(list(x.spectrum) + list(y.spectrum))
    merged: list[float] = []
    for v in values:
        if merged and v - merged[-1] <= width:
            continue
        merged.append(v)
    return merged


def equality_projector(x: Observable, y: Observable,
                       tol: ToleranceConfig | None = None,
                       cross_check: bool = True) -> Projector:
    """Truth projector of "X = Y": largest subspace where the spectral families agree.

    Production route: joint kernel of E_X(lambda) - E_Y(lambda) over the
    merged spectrum.  Independent route: joint kernel of the disjoint-atom
    cross terms E_X({a}) E_Y({b}), a != b; the two must agree.
    """
    t = tol or x.tol
    if x.dim != y.dim:
        raise DimensionMismatchError(f"{x.name} and {y.name} live on different spaces")
    dim = x.dim
    cuts = _merged_spectrum(x, y)
    differences = [x.threshold(cut).matrix - y.threshold(cut).matrix for cut in cuts]
    by_thresholds = common_null_space_projector(differences, dim, t, scale_floor=1.0)
    if cross_check:
        width = max(x.snap_width, y.snap_width)
        crossings = [x.eigenprojector_at(a).matrix @ y.eigenprojector_at(b).matrix
                     for a in x.spectrum for b in y.spectrum if abs(a - b) > width]
        by_atoms = common_null_space_projector(crossings, dim, t, scale_floor=1.0)
        gap = opnorm(by_thresholds.matrix - by_atoms.matrix)
        if gap > t.assert_tol:
            raise CrossCheckFailure(
                f"equality projector routes disagree by {gap:.3e} on ({x.name}, {y.name})")
    return by_thresholds


def equal_in_state(x: Observable, y: Observable, state: DensityState,
                   tol: ToleranceConfig | None = None) -> bool:
    """X and Y are equal in the state: the equality projector has probability one."""
    t = tol or state.tol
    q = equality_projector(x, y, t)
    return projector_probability(q, state, t) >= 1.0 - t.assert_tol


@dataclass
class EqualityReport:
    """Outcome of every implemented equality characterization."""

    names: tuple[str, str]
    projector: Projector
    clauses: dict[str, bool]
    residuals: dict[str, float]

    @property
    def coherent(self) -> bool:
        return len(set(self.clauses.values())) == 1

    @property
    def equal(self) -> bool:
        return all(self.clauses.values())


def equality_battery(x: Observable, y: Observable, state: DensityState,
                     tol: ToleranceConfig | None = None) -> EqualityReport:
    """Evaluate all equality-in-a-state characterizations and enforce agreement.

    Clauses: probability one of the equality projector; vanishing cross
    correlations on disjoint atoms; the operators and their spectral data
    agree on the cyclic subspace; spectral projections act identically on the
    state; the two cyclic subspaces coincide with matching compressions; and
    the joint distribution concentrates on the diagonal.
    """
    t = tol or state.tol
    if x.dim != y.dim or x.dim != state.dim:
        raise DimensionMismatchError("observables and state live on different spaces")
    q = equality_projector(x, y, t)
    cyclic_x = cyclic_projector([x], state, t)
    cyclic_y = cyclic_projector([y], state, t)
    width = max(x.snap_width, y.snap_width)
    merged = _merged_spectrum(x, y)
    op_scale = max(1.0, opnorm(x.matrix) + opnorm(y.matrix))

    clauses: dict[str, bool] = {}
    residuals: dict[str, float] = {}

    deficit = 1.0 - projector_probability(q, state, t)
    clauses["full_probability"] = deficit <= t.assert_tol
    residuals["full_probability"] = deficit

    worst = 0.0
    for a in x.spectrum:
        for b in y.spectrum:
            if abs(a - b) <= width:
                continue
            value = np.trace(x.eigenprojector_at(a).matrix @ y.eigenprojector_at(b).matrix
                             @ state.matrix)
            worst = max(worst, abs(complex(value)))
    clauses["no_cross_correlation"] = worst <= t.assert_tol
    residuals["no_cross_correlation"] = worst

    gap = opnorm((x.matrix - y.matrix) @ cyclic_x.matrix) / op_scale
    clauses["operators_agree_on_cyclic"] = gap <= t.assert_tol
    residuals["operators_agree_on_cyclic"] = gap

    worst = 0.0
    for v in merged:
        d = x.eigenprojector_at(v).matrix - y.eigenprojector_at(v).matrix
        worst = max(worst, opnorm(cyclic_x.matrix @ d @ cyclic_x.matrix))
    clauses["expectations_agree_on_cyclic"] = worst <= t.assert_tol
    residuals["expectations_agree_on_cyclic"] = worst

    worst = 0.0
    for v in merged:
        d = x.eigenprojector_at(v).matrix - y.eigenprojector_at(v).matrix
        worst = max(worst, opnorm(d @ state.matrix))
    clauses["spectral_action_on_state"] = worst <= t.assert_tol
    residuals["spectral_action_on_state"] = worst

    cyclic_gap = opnorm(cyclic_x.matrix - cyclic_y.matrix)
    compression_gap = opnorm(x.matrix @ cyclic_x.matrix - y.matrix @ cyclic_x.matrix) / op_scale
    clauses["cyclic_subspaces_match"] = cyclic_gap <= t.assert_tol and \
        compression_gap <= t.assert_tol
    residuals["cyclic_subspaces_match"] = max(cyclic_gap, compression_gap)

    diagonal_mass = 0.0
    determinate = simultaneously_determinate([x, y], state, t)
    if determinate:
        for v in merged:
            p = meet(x.eigenprojector_at(v), y.eigenprojector_at(v), t)
            diagonal_mass += float(np.real(np.trace(p.matrix @ state.matrix)))
    clauses["diagonal_concentration"] = determinate and diagonal_mass >= 1.0 - t.assert_tol
    residuals["diagonal_concentration"] = 1.0 - diagonal_mass

    report = EqualityReport((x.name, y.name), q, clauses, residuals)
    if not report.coherent:
        raise InconsistentBattery(f"equality clauses disagree: {report.clauses}", report)
    return report


@dataclass
class EquivalenceReport:
    """Reflexivity, symmetry, transitivity of the equality connective."""

    reflexive_residual: float
    symmetric_exact: bool
    transitive: bool

    @property
    def passed(self) -> bool:
        return self.reflexive_residual <= 1e-10 and self.symmetric_exact and self.transitive


def equivalence_relation_check(x: Observable, y: Observable, z: Observable,
                               tol: ToleranceConfig | None = None) -> EquivalenceReport:
    """Check that quantum equality behaves as an equivalence relation.

    Reflexivity must be numerically exact (identity to 1e-10), symmetry must
    be bitwise (the construction is sign-symmetric), and transitivity holds
    as the lattice inequality (X=Y) ^ (Y=Z) <= (X=Z).
    """
    t = tol or x.tol
    reflexive = opnorm(equality_projector(x, x, t).matrix - np.eye(x.dim))
    xy = equality_projector(x, y, t)
    yx = equality_projector(y, x, t)
    symmetric = bool(np.array_equal(xy.matrix, yx.matrix))
    yz = equality_projector(y, z, t)
    xz = equality_projector(x, z, t)
    transitive = leq(meet(xy, yz, t), xz, t)
    return EquivalenceReport(reflexive, symmetric, transitive)


def common_eigenvector_projector(observables: Sequence[Observable],
                                 mode: str = "determinate",
                                 tol: ToleranceConfig | None = None) -> Projector:
    """Span of the relevant common eigenvectors, cross-checked structurally.

    ``determinate`` mode spans every joint eigenspace of the family and must
    reproduce the commutator projection.  ``equal`` mode spans the common
    eigenspaces with matching eigenvalues of a pair and must reproduce the
    equality projector.
    """
    xs = list(observables)
    t = tol or xs[0].tol
    dim = xs[0].dim
    if mode == "determinate":
        grids = [range(len(x.spectrum)) for x in xs]
        bases = []
        for combo in itertools.product(*grids):
            parts = [x.eigenprojector_at(x.spectrum[k]) for x, k in zip(xs, combo)]
            p = meet_all(parts, dim=dim, tol=t)
            if p.rank:
                bases.append(p.basis)
        span = column_space_projector(np.hstack(bases) if bases else np.zeros((dim, 0)),
                                      dim=dim, tol=t)
        target = com_observables(xs, t)
        label = "commutator projection"
    elif mode == "equal":
        if len(xs) != 2:
            raise DimensionMismatchError("equal mode compares exactly two observables")
        x, y = xs
        width = max(x.snap_width, y.snap_width)
        bases = []
        for a in x.spectrum:
            for b in y.spectrum:
                if abs(a - b) > width:
                    continue
                p = meet(x.eigenprojector_at(a), y.eigenprojector_at(b), t)
                if p.rank:
                    bases.append(p.basis)
        span = column_space_projector(np.hstack(bases) if bases else np.zeros((dim, 0)),
                                      dim=dim, tol=t)
        target = equality_projector(x, y, t)
        label = "equality projector"
    else:
        raise ValueError(f"unknown mode {mode!r}")
    gap = opnorm(span.matrix - target.matrix)
    if gap > t.assert_tol:
        raise CrossCheckFailure(
            f"common eigenvector span disagrees with the {label} by {gap:.3e}")
    return span
