"""Measuring processes, POVMs, and the measurement equivalences.

A measuring process couples the object space H to a probe space K: probe
state, coupling unitary, and a pointer observable on K.  The induced POVM,
the three measurement predicates (state-dependent measurement, weak
measurement, Born-rule reproduction on the cyclic subspace), their battery,
the probe dilation of an arbitrary POVM, and the joint-measurability
construction for simultaneously determinate pairs all live here.
"""

from __future__ import annotations

from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass

import numpy as np

from .commutators import com_observables
from .errors import (
    CrossCheckFailure,
    DimensionMismatchError,
    InconsistentBattery,
    NotAPOVMError,
    NotUnitaryError,
    QLogicError,
)
from .linalg import dagger, kron, matrices_commute, opnorm, partial_trace_second, require_square
from .observables import Observable, embed_first, embed_second, heisenberg, spectral_decompose
from .projectors import Projector
from .states import (
    DensityState,
    cyclic_projector,
    equal_in_state,
    projector_probability,
    simultaneously_determinate,
)
from .tolerances import DEFAULT_TOL, ToleranceConfig

Outcome = float | tuple[float, ...]


class POVM:
    """Positive effects labeled by outcomes, resolving the identity."""

    __slots__ = ("outcomes", "elements", "dim", "tol")

    def __init__(self, outcomes: Sequence[Outcome], elements: Sequence[np.ndarray],
                 tol: ToleranceConfig = DEFAULT_TOL):
        if len(outcomes) != len(elements):
            raise NotAPOVMError("one effect per outcome required")
        if len(set(outcomes)) != len(outcomes):
            raise NotAPOVMError("outcome labels must be distinct")
        mats = [require_square(e) for e in elements]
        dims = {m.shape[0] for m in mats}
        if len(dims) != 1:
            raise NotAPOVMError("effects live on different spaces")
        dim = dims.pop()
        total = np.zeros((dim, dim), dtype=complex)
        for m in mats:
            if opnorm(m - dagger(m)) > tol.assert_tol:
                raise NotAPOVMError("effect is not Hermitian within tolerance")
            smallest = float(np.min(np.linalg.eigvalsh((m + dagger(m)) / 2.0)))
            if smallest < -tol.assert_tol:
                raise NotAPOVMError(f"effect has negative eigenvalue {smallest:.3e}")
            total = total + m
        if opnorm(total - np.eye(dim)) > tol.assert_tol:
            raise NotAPOVMError("effects do not resolve the identity")
        self.outcomes = tuple(outcomes)
        self.elements = tuple(mats)
        self.dim = dim
        self.tol = tol

    def element(self, outcome: Outcome, width: float = 0.0) -> np.ndarray:
        """Effect of an outcome; unknown labels give the zero effect."""
        for label, m in zip(self.outcomes, self.elements):
            if _labels_match(label, outcome, width):
                return m
        return np.zeros((self.dim, self.dim), dtype=complex)

    def sorted_pairs(self) -> list[tuple[Outcome, np.ndarray]]:
        return sorted(zip(self.outcomes, self.elements), key=lambda kv: kv[0])

    def __repr__(self) -> str:
        return f"POVM(dim={self.dim}, outcomes={self.outcomes})"


def _labels_match(a: Outcome, b: Outcome, width: float) -> bool:
    if isinstance(a, tuple) != isinstance(b, tuple):
        return False
    if isinstance(a, tuple):
        return len(a) == len(b) and all(abs(x - y) <= width for x, y in zip(a, b))
    return abs(a - b) <= width


class MeasuringProcess:
    """Probe model of a measurement: (K, sigma, U, M)."""

    __slots__ = ("dim_h", "probe", "unitary", "meter", "algebra", "tol", "_meter_after")

    def __init__(self, dim_h: int, probe: DensityState, unitary: np.ndarray,
                 meter: Observable, algebra=None, tol: ToleranceConfig = DEFAULT_TOL):
        u = require_square(unitary)
        if meter.dim != probe.dim:
            raise DimensionMismatchError("meter and probe state must share the probe space")
        if u.shape[0] != dim_h * probe.dim:
            raise DimensionMismatchError(
                f"coupling acts on dimension {u.shape[0]}, expected {dim_h * probe.dim}")
        if opnorm(dagger(u) @ u - np.eye(u.shape[0])) > tol.assert_tol:
            raise NotUnitaryError("coupling matrix is not unitary within tolerance")
        self.dim_h = dim_h
        self.probe = probe
        self.unitary = u
        self.meter = meter
        self.algebra = algebra
        self.tol = tol
        self._meter_after: Observable | None = None
        if algebra is not None:
            self._check_algebra_stability()

    @property
    def dim_k(self) -> int:
        return self.probe.dim

    @property
    def meter_after(self) -> Observable:
        """The pointer in the Heisenberg picture: U^dag (1 (x) M) U."""
        if self._meter_after is None:
            self._meter_after = heisenberg(
                embed_second(self.meter, self.dim_h), self.unitary, self.tol)
        return self._meter_after

    def _check_algebra_stability(self) -> None:
        from .algebras import contains

        sigma = self.probe.matrix
        for x in self.algebra.basis:
            for p in self.meter.eigenprojectors:
                coupled = dagger(self.unitary) @ kron(x, p.matrix) @ self.unitary
                reduced = partial_trace_second(
                    coupled @ kron(np.eye(self.dim_h), sigma), self.dim_h, self.dim_k)
                if not contains(self.algebra, reduced, self.tol):
                    raise QLogicError(
                        "process output leaves the supplied observable algebra")

    def __repr__(self) -> str:
        return f"MeasuringProcess(dim_h={self.dim_h}, dim_k={self.dim_k})"


def povm_of_process(process: MeasuringProcess) -> POVM:
    """The statistics the process induces on the object space."""
    eye_h = np.eye(process.dim_h, dtype=complex)
    sigma = process.probe.matrix
    elements = []
    for p in process.meter_after.eigenprojectors:
        elements.append(partial_trace_second(
            p.matrix @ kron(eye_h, sigma), process.dim_h, process.dim_k))
    return POVM(process.meter_after.spectrum, elements, process.tol)


def output_distribution(process: MeasuringProcess, state: DensityState,
                        tol: ToleranceConfig | None = None) -> dict[float, float]:
    """Outcome distribution, computed on the joint space and via the POVM.

    The two routes must agree to 1e-10; their disagreement would mean the
    partial trace and the joint-space expectation have diverged.
    """
    t = tol or process.tol
    if state.dim != process.dim_h:
        raise DimensionMismatchError("state does not live on the object space")
    joint = state.tensor(process.probe)
    povm = povm_of_process(process)
    out: dict[float, float] = {}
    for value, projector in zip(process.meter_after.spectrum, process.meter_after.eigenprojectors):
        via_joint = projector_probability(projector, joint, t)
        via_povm = float(np.real(np.trace(povm.element(value) @ state.matrix)))
        if abs(via_joint - via_povm) > 1e-10:
            raise CrossCheckFailure(
                f"distribution routes disagree at outcome {value}: "
                f"{via_joint!r} vs {via_povm!r}")
        out[float(value)] = via_joint
    return out


def measures_in_state(process: MeasuringProcess, observable: Observable,
                      state: DensityState, tol: ToleranceConfig | None = None) -> bool:
    """The process measures the observable in the state: object value before
    coupling equals pointer value after, as quantum equality in rho (x) sigma."""
    t = tol or process.tol
    embedded = embed_first(observable, process.dim_k)
    joint = state.tensor(process.probe)
    return equal_in_state(embedded, process.meter_after, joint, t)


def _atom_values(process_values: Sequence[float], spectrum: Sequence[float],
                 width: float) -> list[float]:
    merged = sorted(set(float(v) for v in process_values) | set(float(v) for v in spectrum))
    out: list[float] = []
    for v in merged:
        if out and v - out[-1] <= width:
            continue
        out.append(v)
    return out


def weakly_measures(process: MeasuringProcess, observable: Observable,
                    state: DensityState, tol: ToleranceConfig | None = None) -> bool:
    """Weak joint distribution of pointer and object values is diagonal.

    Over all outcome/spectral atoms m, a: Tr[Pi({m}) E({a}) rho] equals
    Tr[E({m} cap {a}) rho].
    """
    t = tol or process.tol
    povm = povm_of_process(process)
    width = max(observable.snap_width, process.meter_after.snap_width)
    atoms = _atom_values(povm.outcomes, observable.spectrum, width)
    for m in atoms:
        effect = povm.element(m, width)
        for a in atoms:
            lhs = complex(np.trace(effect @ observable.eigenprojector_at(a).matrix
                                   @ state.matrix))
            if abs(m - a) <= width:
                rhs = complex(np.trace(observable.eigenprojector_at(a).matrix @ state.matrix))
            else:
                rhs = 0.0
            if abs(lhs - rhs) > t.assert_tol:
                return False
    return True


def satisfies_bsf(process: MeasuringProcess, observable: Observable,
                  state: DensityState, tol: ToleranceConfig | None = None) -> bool:
    """Born statistics for every vector state of the cyclic subspace.

    Compressing Pi({v}) - E({v}) to the cyclic subspace of the observable in
    the state tests all its vector states at once (polarization).
    """
    t = tol or process.tol
    cyclic = cyclic_projector([observable], state, t)
    povm = povm_of_process(process)
    width = max(observable.snap_width, process.meter_after.snap_width)
    atoms = _atom_values(povm.outcomes, observable.spectrum, width)
    for v in atoms:
        gap = povm.element(v, width) - observable.eigenprojector_at(v).matrix
        if opnorm(cyclic.matrix @ gap @ cyclic.matrix) > t.assert_tol:
            return False
    return True


@dataclass
class MeasurementReport:
    """The three measurement predicates, which must agree."""

    clauses: dict[str, bool]

    @property
    def coherent(self) -> bool:
        return len(set(self.clauses.values())) == 1

    @property
    def measures(self) -> bool:
        return all(self.clauses.values())


def measurement_battery(process: MeasuringProcess, observable: Observable,
                        state: DensityState,
                        tol: ToleranceConfig | None = None) -> MeasurementReport:
    """Evaluate the three equivalent measurement predicates independently."""
    t = tol or process.tol
    clauses = {
        "equality_on_joint_state": measures_in_state(process, observable, state, t),
        "weak_joint_distribution": weakly_measures(process, observable, state, t),
        "born_on_cyclic": satisfies_bsf(process, observable, state, t),
    }
    report = MeasurementReport(clauses)
    if not report.coherent:
        raise InconsistentBattery(f"measurement clauses disagree: {clauses}", report)
    return report


@dataclass
class GlobalMeasurementReport:
    """State-independent measurement versus the POVM identity."""

    all_states_measure: bool
    povm_is_spectral: bool
    worst_effect_gap: float

    @property
    def coherent(self) -> bool:
        return self.all_states_measure == self.povm_is_spectral

    @property
    def measures_globally(self) -> bool:
        return self.all_states_measure and self.povm_is_spectral


def global_measurement_check(process: MeasuringProcess, observable: Observable,
                             states: Sequence[DensityState],
                             tol: ToleranceConfig | None = None) -> GlobalMeasurementReport:
    """The process measures in every state iff its POVM is the spectral measure.

    The state sample must span the Hermitian operators for the left side to
    be a faithful stand-in for "every state"; `spanning_state_sample`
    provides such a sample.
    """
    t = tol or process.tol
    all_measure = all(measures_in_state(process, observable, s, t) for s in states)
    povm = povm_of_process(process)
    width = max(observable.snap_width, process.meter_after.snap_width)
    atoms = _atom_values(povm.outcomes, observable.spectrum, width)
    worst = 0.0
    for v in atoms:
        worst = max(worst, opnorm(povm.element(v, width)
                                  - observable.eigenprojector_at(v).matrix))
    report = GlobalMeasurementReport(all_measure, worst <= t.assert_tol, worst)
    if not report.coherent:
        raise InconsistentBattery(
            f"global measurement clauses disagree (gap {worst:.3e})", report)
    return report


def spanning_state_sample(dim: int, tol: ToleranceConfig = DEFAULT_TOL) -> list[DensityState]:
    """Pure and mixed states whose span is the full Hermitian operator space."""
    states: list[DensityState] = [DensityState.maximally_mixed(dim, tol)]
    for i in range(dim):
        v = np.zeros(dim, dtype=complex)
        v[i] = 1.0
        states.append(DensityState.from_vector(v, tol))
    for i in range(dim):
        for j in range(i + 1, dim):
            for phase in (1.0, 1.0j):
                v = np.zeros(dim, dtype=complex)
                v[i] = 1.0 / np.sqrt(2)
                v[j] = phase / np.sqrt(2)
                states.append(DensityState.from_vector(v, tol))
    return states


def _psd_sqrt(matrix: np.ndarray, tol: ToleranceConfig) -> np.ndarray:
    values, vectors = np.linalg.eigh((matrix + dagger(matrix)) / 2.0)
    # The square root turns eigenvalue noise of size eps into sqrt(eps)
    # contamination outside the true range, so the noise floor is zeroed
    # rather than merely clipped at zero.
    floor = tol.rank_rel_tol * max(float(values[-1]), 1.0) * values.size
    cleaned = np.where(values > floor, values, 0.0)
    return (vectors * np.sqrt(cleaned)) @ dagger(vectors)


def naimark_process(povm: POVM, meter_name: str = "M",
                    tol: ToleranceConfig | None = None) -> MeasuringProcess:
    """Dilate a POVM to a measuring process on H (x) C^m with a sharp pointer.

    The probe starts in the first basis state, the coupling extends the
    isometry psi -> sum_k (sqrt(Pi_k) psi) (x) e_k by a deterministic
    orthonormal completion, and the pointer is diagonal with the outcome
    labels as eigenvalues.  The induced POVM of the result is verified to
    reproduce the input.
    """
    t = tol or povm.tol
    for outcome in povm.outcomes:
        if isinstance(outcome, tuple):
            raise NotAPOVMError("dilation needs scalar outcome labels; encode pairs first")
    labels = [float(v) for v in povm.outcomes]
    m = len(labels)
    n = povm.dim
    width = t.cluster_tol * max(1.0, max(abs(v) for v in labels))
    sorted_labels = sorted(labels)
    if any(b - a <= width for a, b in zip(sorted_labels, sorted_labels[1:])):
        raise NotAPOVMError("outcome labels too close to survive spectral clustering")

    isometry = np.zeros((n * m, n), dtype=complex)
    for k, element in enumerate(povm.elements):
        isometry[k::m, :] = _psd_sqrt(element, t)
    if opnorm(dagger(isometry) @ isometry - np.eye(n)) > t.assert_tol:
        raise NotAPOVMError("effect square roots do not assemble into an isometry")

    left, _, _ = np.linalg.svd(isometry, full_matrices=True)
    completion = left[:, n:]
    unitary = np.zeros((n * m, n * m), dtype=complex)
    next_extra = 0
    for j in range(n):
        unitary[:, j * m] = isometry[:, j]
        for k in range(1, m):
            unitary[:, j * m + k] = completion[:, next_extra]
            next_extra += 1
    if opnorm(dagger(unitary) @ unitary - np.eye(n * m)) > t.assert_tol:
        raise QLogicError("unitary completion failed")

    probe_vector = np.zeros(m, dtype=complex)
    probe_vector[0] = 1.0
    meter = spectral_decompose(meter_name, np.diag(labels).astype(complex), t)
    process = MeasuringProcess(n, DensityState.from_vector(probe_vector, t),
                               unitary, meter, tol=t)
    induced = povm_of_process(process)
    for label, element in zip(povm.outcomes, povm.elements):
        gap = opnorm(induced.element(float(label), width) - element)
        if gap > t.assert_tol:
            raise CrossCheckFailure(
                f"dilated process does not reproduce effect {label}: gap {gap:.3e}")
    return process


def apply_outcome_function(process: MeasuringProcess,
                           f: Callable[[float], float] | Mapping[float, float],
                           name: str | None = None) -> MeasuringProcess:
    """Post-process outcomes: same coupling and probe, pointer pushed through f."""
    meter = process.meter.apply_function(f, name)
    return MeasuringProcess(process.dim_h, process.probe, process.unitary, meter,
                            algebra=process.algebra, tol=process.tol)


@dataclass
class SimultaneousMeasurementReport:
    """Joint measurement of a determinate pair via the central compression."""

    determinate: bool
    witness: MeasuringProcess | None
    first_codes: dict[float, float]
    second_codes: dict[float, float]
    first_measures: bool
    second_measures: bool
    joint_marginals_match: bool
    individual_marginals_match: bool
    note: str

    @property
    def passed(self) -> bool:
        if not self.determinate:
            return True
        return (self.first_measures and self.second_measures
                and self.joint_marginals_match and self.individual_marginals_match)


def simultaneous_measurability(first: Observable, second: Observable,
                               state: DensityState,
                               tol: ToleranceConfig | None = None
                               ) -> SimultaneousMeasurementReport:
    """Construct a joint measurement witness when the pair is determinate.

    Compressing both observables by their commutator projection makes them
    commute; the product of the compressed spectral measures is a POVM whose
    dilation measures both observables in the given state.  The construction
    is one-directional: nothing is concluded when the pair is not
    determinate.
    """
    t = tol or state.tol
    if not simultaneously_determinate([first, second], state, t):
        return SimultaneousMeasurementReport(
            determinate=False, witness=None, first_codes={}, second_codes={},
            first_measures=False, second_measures=False,
            joint_marginals_match=False, individual_marginals_match=False,
            note="pair not simultaneously determinate in the state; "
                 "the compression witness does not apply")

    g = com_observables([first, second], t)
    for x in (first, second):
        if not matrices_commute(x.matrix, g.matrix, t):
            raise QLogicError(f"commutator projection fails to commute with {x.name}")
    compressed_first = spectral_decompose(f"{first.name}|c", first.matrix @ g.matrix, t)
    compressed_second = spectral_decompose(f"{second.name}|c", second.matrix @ g.matrix, t)
    if not matrices_commute(compressed_first.matrix, compressed_second.matrix, t):
        raise QLogicError("compressed pair fails to commute")

    stride = float(len(compressed_second.spectrum))
    outcomes: list[float] = []
    elements: list[np.ndarray] = []
    first_codes: dict[float, float] = {}
    second_codes: dict[float, float] = {}
    for i, a in enumerate(compressed_first.spectrum):
        for j, b in enumerate(compressed_second.spectrum):
            code = float(i) * stride + float(j)
            outcomes.append(code)
            elements.append(compressed_first.eigenprojector_at(a).matrix
                            @ compressed_second.eigenprojector_at(b).matrix)
            first_codes[code] = float(a)
            second_codes[code] = float(b)
    witness = naimark_process(POVM(outcomes, elements, t), meter_name="pair", tol=t)

    first_process = apply_outcome_function(witness, first_codes, name=f"{first.name}-pointer")
    second_process = apply_outcome_function(witness, second_codes, name=f"{second.name}-pointer")
    first_measures = measurement_battery(first_process, first, state, t).measures
    second_measures = measurement_battery(second_process, second, state, t).measures

    joint_cyclic = cyclic_projector([first, second], state, t)
    joint_ok = _marginals_match(compressed_first, first, joint_cyclic, t) and \
        _marginals_match(compressed_second, second, joint_cyclic, t)
    individual_ok = _marginals_match(compressed_first, first,
                                     cyclic_projector([first], state, t), t) and \
        _marginals_match(compressed_second, second,
                         cyclic_projector([second], state, t), t)
    return SimultaneousMeasurementReport(
        determinate=True, witness=witness,
        first_codes=first_codes, second_codes=second_codes,
        first_measures=first_measures, second_measures=second_measures,
        joint_marginals_match=joint_ok, individual_marginals_match=individual_ok,
        note="compression witness constructed")


def _marginals_match(compressed: Observable, original: Observable,
                     cyclic: Projector, t: ToleranceConfig) -> bool:
    """Marginal effects agree with the original spectral measure on a subspace."""
    width = max(compressed.snap_width, original.snap_width)
    atoms = _atom_values(compressed.spectrum, original.spectrum, width)
    for v in atoms:
        gap = (compressed.eigenprojector_at(v).matrix
               - original.eigenprojector_at(v).matrix) @ cyclic.matrix
        if opnorm(gap) > t.assert_tol:
            return False
    return True
