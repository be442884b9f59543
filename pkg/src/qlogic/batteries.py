"""Seeded property suites covering every structural claim the package makes.

Each suite draws its instances from a fixed seed, runs the relevant
cross-checked computation, and reports one line per claim.  The acceptance
tests and the command-line `battery` command both run these functions, so
the numbers printed there are the numbers tested here.
"""

from __future__ import annotations

import json
import os
import subprocess
import sys
import tempfile
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .commutators import com_family, com_kernel, com_observables, com_pair
from .errors import QLogicError, UnknownNameError
from .linalg import opnorm
from .measurement import (
    apply_outcome_function,
    global_measurement_check,
    measurement_battery,
    naimark_process,
    povm_of_process,
    simultaneous_measurability,
    spanning_state_sample,
)
from .observables import BorelSet, Observable, spectral_decompose
from .projectors import (
    Projector,
    commutes,
    join,
    join_all,
    leq,
    meet,
    ortho,
)
from .propositions import (
    EqConst,
    Leq,
    Not,
    ObservableRegistry,
    is_classical_tautology,
    parse_skeleton,
    skeleton_variables,
    tautology_transfer_check,
)
from .sampling import (
    cnot_process,
    haar_unitary,
    measuring_process_for,
    random_agreeing_pair,
    random_commuting_observables,
    random_density,
    random_determinate_family,
    random_measuring_process,
    random_observable,
    random_povm,
    random_projector,
    random_subprojector,
    random_vector_state,
    rng_from_seed,
)
from .states import (
    DensityState,
    common_eigenvector_projector,
    determinateness_battery,
    equality_battery,
    equality_projector,
    equivalence_relation_check,
    projector_probability,
)
from .tolerances import DEFAULT_TOL, ToleranceConfig

DEFAULT_SEED = 7


@dataclass
class CheckLine:
    label: str
    passed: bool
    detail: str = ""


@dataclass
class SuiteResult:
    suite: str
    seed: int
    elapsed_s: float
    checks: list[CheckLine] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def summary(self) -> dict:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "passed": self.passed,
            "elapsed_s": self.elapsed_s,
            "checks": [{"label": c.label, "passed": c.passed, "detail": c.detail}
                       for c in self.checks],
        }


def _fmt(x: float) -> str:
    return f"{x:.3e}"


def _gap(p: Projector, q: Projector) -> float:
    return opnorm(p.matrix - q.matrix)


# ---------------------------------------------------------------------------
# lattice laws


def _block_diagonal_projector(blocks: list[np.ndarray], tol: ToleranceConfig) -> Projector:
    dim = sum(b.shape[0] for b in blocks)
    matrix = np.zeros((dim, dim), dtype=complex)
    at = 0
    for b in blocks:
        matrix[at:at + b.shape[0], at:at + b.shape[0]] = b
        at += b.shape[0]
    return Projector.from_matrix(matrix, tol)


def _commuting_triple(dim: int, rng: np.random.Generator,
                      tol: ToleranceConfig) -> tuple[Projector, Projector, Projector]:
    q, (p1, p2) = _family_commuting_with(dim, 2, rng, tol)
    return p1, p2, q


def _family_commuting_with(dim: int, count: int, rng: np.random.Generator,
                           tol: ToleranceConfig) -> tuple[Projector, list[Projector]]:
    """A block-scalar Q and a family of block-diagonal projectors in Q's
    frame: every member commutes with Q, members need not commute pairwise."""
    d1 = int(rng.integers(1, dim))
    d2 = dim - d1
    frame = haar_unitary(dim, rng)
    q_matrix = np.zeros((dim, dim), dtype=complex)
    q_matrix[:d1, :d1] = np.eye(d1)
    q = Projector.from_matrix(frame @ q_matrix @ frame.conj().T, tol)
    family = []
    for _ in range(count):
        block = _block_diagonal_projector(
            [random_projector(d1, rng, tol=tol).matrix,
             random_projector(d2, rng, tol=tol).matrix], tol)
        family.append(Projector.from_matrix(frame @ block.matrix @ frame.conj().T, tol))
    return q, family


def _suite_lattice_laws(rng: np.random.Generator, tol: ToleranceConfig) -> list[CheckLine]:
    worst = {"C1": 0.0, "C3": 0.0, "OM": 0.0, "P21": 0.0, "P22": 0.0, "DEC": 0.0}
    double_ortho_ok = True
    commutes_iff = True
    for _ in range(500):
        dim = int(rng.integers(2, 7))
        p = random_projector(dim, rng, tol=tol)
        q = random_projector(dim, rng, tol=tol)
        r = random_projector(dim, rng, tol=tol)

        sub = random_subprojector(q, rng)
        lhs = ortho(q, tol)
        rhs = ortho(sub, tol)
        worst["C1"] = max(worst["C1"], opnorm(rhs.matrix @ lhs.matrix - lhs.matrix))

        double_ortho_ok = double_ortho_ok and (ortho(ortho(p, tol), tol) is p)

        worst["C3"] = max(
            worst["C3"],
            _gap(join(p, ortho(p, tol), tol), Projector.identity(dim, tol)),
            _gap(meet(p, ortho(p, tol), tol), Projector.zero(dim, tol)),
            _gap(ortho(join(p, q, tol), tol), meet(ortho(p, tol), ortho(q, tol), tol)),
            _gap(ortho(meet(p, q, tol), tol), join(ortho(p, tol), ortho(q, tol), tol)),
        )

        below = meet(q, r, tol)
        rebuilt = join(below, meet(ortho(below, tol), q, tol), tol)
        worst["OM"] = max(worst["OM"], _gap(rebuilt, q))

        decomposition = join(meet(p, q, tol), meet(p, ortho(q, tol), tol), tol)
        residual = _gap(decomposition, p)
        worst["DEC"] = max(worst["DEC"], residual if commutes(p, q, tol) else 0.0)
        commutes_iff = commutes_iff and (commutes(p, q, tol) == (residual <= tol.assert_tol))

        p1, p2, qq = _commuting_triple(dim, rng, tol)
        identities = [
            (meet(qq, join(p1, p2, tol), tol), join(meet(qq, p1, tol), meet(qq, p2, tol), tol)),
            (join(qq, meet(p1, p2, tol), tol), meet(join(qq, p1, tol), join(qq, p2, tol), tol)),
            (meet(p1, join(p2, qq, tol), tol), join(meet(p1, p2, tol), meet(p1, qq, tol), tol)),
            (join(p1, meet(p2, qq, tol), tol), meet(join(p1, p2, tol), join(p1, qq, tol), tol)),
            (meet(p2, join(p1, qq, tol), tol), join(meet(p2, p1, tol), meet(p2, qq, tol), tol)),
            (join(p2, meet(p1, qq, tol), tol), meet(join(p2, p1, tol), join(p2, qq, tol), tol)),
        ]
        for a, b in identities:
            worst["P21"] = max(worst["P21"], _gap(a, b))

        k = int(rng.integers(2, 5))
        qq, family = _family_commuting_with(dim, k, rng, tol)
        lhs = meet(qq, join_all(family, dim=dim, tol=tol), tol)
        rhs = join_all([meet(qq, f, tol) for f in family], dim=dim, tol=tol)
        worst["P22"] = max(worst["P22"], _gap(lhs, rhs))

    z_up = Projector.from_matrix(np.diag([1.0, 0.0]).astype(complex), tol)
    x_up = Projector.from_matrix(np.array([[0.5, 0.5], [0.5, 0.5]], dtype=complex), tol)
    x_down = ortho(x_up, tol)
    violation = _gap(meet(z_up, join(x_up, x_down, tol), tol),
                     join(meet(z_up, x_up, tol), meet(z_up, x_down, tol), tol))

    a = tol.assert_tol
    return [
        CheckLine("complement reverses order on 500 constructed pairs",
                  worst["C1"] <= a, f"max residual {_fmt(worst['C1'])}"),
        CheckLine("double complement returns the original object", double_ortho_ok),
        CheckLine("complement join/meet and De Morgan identities",
                  worst["C3"] <= a, f"max residual {_fmt(worst['C3'])}"),
        CheckLine("orthomodular law on constructed comparable pairs",
                  worst["OM"] <= a, f"max residual {_fmt(worst['OM'])}"),
        CheckLine("commutes iff P = (P^Q) v (P^Q')",
                  commutes_iff and worst["DEC"] <= a, f"max residual {_fmt(worst['DEC'])}"),
        CheckLine("six distributivity forms with a doubly commuting element",
                  worst["P21"] <= a, f"max residual {_fmt(worst['P21'])}"),
        CheckLine("family distributivity over joins",
                  worst["P22"] <= a, f"max residual {_fmt(worst['P22'])}"),
        CheckLine("Pauli distributivity counterexample violates by > 0.1",
                  violation > 0.1, f"violation {_fmt(violation)}"),
    ]


# ---------------------------------------------------------------------------
# commutator routes


def _block_projector_family(dim: int, count: int, rng: np.random.Generator,
                            tol: ToleranceConfig) -> list[Projector]:
    """Shared eigenbasis on the first block, independent bases on the second."""
    d1 = int(rng.integers(1, dim))
    d2 = dim - d1
    shared = haar_unitary(d1, rng)
    family = []
    for _ in range(count):
        bits = rng.integers(0, 2, size=d1).astype(float)
        top = (shared * bits) @ shared.conj().T
        bottom = random_projector(d2, rng, tol=tol).matrix
        family.append(_block_diagonal_projector([top, bottom], tol))
    return family


def _suite_commutator_routes(rng: np.random.Generator, tol: ToleranceConfig) -> list[CheckLine]:
    worst_family = 0.0
    worst_pair = 0.0
    failures = 0
    for i in range(200):
        dim = int(rng.integers(2, 7))
        count = int(rng.integers(2, 4))
        if i % 2 == 0:
            family = [random_projector(dim, rng, tol=tol) for _ in range(count)]
        else:
            family = _block_projector_family(dim, count, rng, tol)
        try:
            a = com_family(family, tol)
            b = com_kernel(family, tol)
            worst_family = max(worst_family, _gap(a, b))
            if count == 2:
                worst_pair = max(worst_pair, _gap(a, com_pair(family[0], family[1], tol)))
        except QLogicError:
            failures += 1

    monotone = True
    for i in range(100):
        dim = int(rng.integers(2, 7))
        if i % 2 == 0:
            family = [random_projector(dim, rng, tol=tol) for _ in range(3)]
        else:
            family = _block_projector_family(dim, 3, rng, tol)
        whole = com_family(family, tol)
        for size in (2,):
            part = com_family(family[:size], tol)
            monotone = monotone and leq(whole, part, tol)

    a = tol.assert_tol
    return [
        CheckLine("sign-map join equals kernel route on 200 families",
                  worst_family <= a and failures == 0, f"max gap {_fmt(worst_family)}"),
        CheckLine("pairwise formula agrees on two-element families",
                  worst_pair <= a, f"max gap {_fmt(worst_pair)}"),
        CheckLine("commutator shrinks under family growth on 100 nested families",
                  monotone),
    ]


# ---------------------------------------------------------------------------
# spectral identities


def _suite_spectral_identities(rng: np.random.Generator,
                               tol: ToleranceConfig) -> list[CheckLine]:
    worst = {"threshold": 0.0, "tail": 0.0, "window": 0.0, "point": 0.0}
    for _ in range(100):
        dim = int(rng.integers(2, 9))
        x = random_observable("X", dim, rng, tol=tol)
        spectrum = x.spectrum
        delta = x.delta()
        cuts = [spectrum[0] - 1.0, spectrum[-1] + 1.0,
                float(rng.choice(spectrum)),
                float(rng.choice(spectrum)) + 0.5 * delta]
        for t in cuts:
            worst["threshold"] = max(worst["threshold"], _gap(
                x.threshold(t), x.spectral_projector(BorelSet.up_to(t))))
            worst["tail"] = max(worst["tail"], _gap(
                ortho(x.threshold(t), tol), x.spectral_projector(BorelSet.above(t))))
        lo, hi = sorted(rng.uniform(spectrum[0] - 1.0, spectrum[-1] + 1.0, size=2))
        if hi - lo > x.snap_width:
            worst["window"] = max(worst["window"], _gap(
                meet(x.threshold(hi), ortho(x.threshold(lo), tol), tol),
                x.spectral_projector(BorelSet.left_open(lo, hi))))
        v = float(rng.choice(spectrum))
        point = x.spectral_projector(BorelSet.point(v))
        worst["point"] = max(
            worst["point"],
            _gap(point, x.eigenprojector_at(v)),
            _gap(point, meet(x.threshold(v + delta), ortho(x.threshold(v - delta), tol), tol)),
        )

    a = tol.assert_tol
    return [
        CheckLine("threshold equals the (-inf, x] spectral projector",
                  worst["threshold"] <= a, f"max residual {_fmt(worst['threshold'])}"),
        CheckLine("complement of threshold equals the (x, inf) projector",
                  worst["tail"] <= a, f"max residual {_fmt(worst['tail'])}"),
        CheckLine("half-open window equals the threshold difference",
                  worst["window"] <= a, f"max residual {_fmt(worst['window'])}"),
        CheckLine("singleton projector via the half-gap window",
                  worst["point"] <= a, f"max residual {_fmt(worst['point'])}"),
    ]


# ---------------------------------------------------------------------------
# com expansion


def _mixed_observable_family(dim: int, count: int, style: int, rng: np.random.Generator,
                             tol: ToleranceConfig) -> list[Observable]:
    if style == 0:
        return [random_observable(f"X{i + 1}", dim, rng, tol=tol) for i in range(count)]
    if style == 1:
        return random_commuting_observables(dim, count, rng, tol)
    family, _ = random_determinate_family(max(dim, 4), count, rng, tol)
    return family


def _suite_com_expansion(rng: np.random.Generator, tol: ToleranceConfig) -> list[CheckLine]:
    worst = 0.0
    biggest_grid = 0
    failures = 0
    for i in range(50):
        dim = int(rng.integers(3, 7))
        count = 2 if i % 2 == 0 else 3
        xs = _mixed_observable_family(dim, count, i % 3, rng, tol)
        grid = 1
        for x in xs:
            grid *= len(x.spectrum)
        if grid > 4096:
            failures += 1
            continue
        biggest_grid = max(biggest_grid, grid)
        try:
            span = common_eigenvector_projector(xs, "determinate", tol)
            worst = max(worst, _gap(span, com_observables(xs, tol)))
        except QLogicError:
            failures += 1
    return [
        CheckLine("join-of-meets expansion equals the commutator on 50 families",
                  worst <= tol.assert_tol and failures == 0,
                  f"max gap {_fmt(worst)}, largest atom grid {biggest_grid}"),
    ]


# ---------------------------------------------------------------------------
# determinateness


def _suite_determinateness(rng: np.random.Generator, tol: ToleranceConfig) -> list[CheckLine]:
    incoherent = 0
    commuting_true = 0
    commuting_total = 0
    block_positive = 0
    block_positive_total = 0
    block_negative = 0
    block_negative_total = 0
    worst_born = 0.0
    for i in range(300):
        style = i % 4
        try:
            if style == 0:
                dim = int(rng.integers(3, 7))
                count = int(rng.integers(2, 4))
                xs = random_commuting_observables(dim, count, rng, tol)
                state = random_density(dim, rng, tol=tol)
                report = determinateness_battery(xs, state, tol)
                commuting_total += 1
                if report.determinate:
                    commuting_true += 1
                if report.distribution is not None:
                    for values, mass in report.distribution.sorted_items():
                        atom = np.eye(dim, dtype=complex)
                        for x, v in zip(xs, values):
                            atom = atom @ x.eigenprojector_at(v).matrix
                        born = float(np.real(np.trace(atom @ state.matrix)))
                        worst_born = max(worst_born, abs(mass - born))
            elif style == 1:
                dim = int(rng.integers(4, 7))
                xs, state = random_determinate_family(dim, int(rng.integers(2, 4)), rng, tol)
                report = determinateness_battery(xs, state, tol)
                block_positive_total += 1
                if report.determinate:
                    block_positive += 1
            elif style == 2:
                dim = int(rng.integers(4, 7))
                xs, _ = random_determinate_family(dim, int(rng.integers(2, 4)), rng, tol)
                state = random_density(dim, rng, rank=dim, tol=tol)
                report = determinateness_battery(xs, state, tol)
                block_negative_total += 1
                if not any(report.clauses.values()):
                    block_negative += 1
            else:
                dim = int(rng.integers(2, 6))
                xs = [random_observable(f"X{k + 1}", dim, rng, tol=tol)
                      for k in range(int(rng.integers(2, 4)))]
                state = random_density(dim, rng, tol=tol)
                determinateness_battery(xs, state, tol)
        except QLogicError:
            incoherent += 1

    sigma_z = spectral_decompose("Z", np.diag([1.0, -1.0]).astype(complex), tol)
    sigma_x = spectral_decompose("X", np.array([[0, 1], [1, 0]], dtype=complex), tol)
    pauli = determinateness_battery(
        [sigma_z, sigma_x], DensityState.maximally_mixed(2, tol), tol)
    pauli_all_false = not any(pauli.clauses.values())

    return [
        CheckLine("clause coherence across 300 sampled instances",
                  incoherent == 0, f"{incoherent} incoherent"),
        CheckLine("commuting families all determinate",
                  commuting_true == commuting_total,
                  f"{commuting_true}/{commuting_total}"),
        CheckLine("sector-supported states determinate for block families",
                  block_positive == block_positive_total,
                  f"{block_positive}/{block_positive_total}"),
        CheckLine("full-rank states fail every clause for block families",
                  block_negative == block_negative_total,
                  f"{block_negative}/{block_negative_total}"),
        CheckLine("Pauli pair with mixed state fails every clause",
                  pauli.coherent and pauli_all_false),
        CheckLine("constructed joint measure matches Born atom masses",
                  worst_born <= tol.assert_tol, f"max gap {_fmt(worst_born)}"),
    ]


# ---------------------------------------------------------------------------
# equality


def _renamed(x: Observable, name: str) -> Observable:
    return Observable(name, x.matrix, x.spectrum, x.eigenprojectors, x.tol)


def _suite_equality(rng: np.random.Generator, tol: ToleranceConfig) -> list[CheckLine]:
    route_failures = 0
    for i in range(200):
        dim = int(rng.integers(2, 7))
        try:
            if i % 3 == 0:
                x = random_observable("X", dim, rng, tol=tol)
                y = _renamed(x, "Y")
            elif i % 3 == 1:
                x = random_observable("X", dim, rng, tol=tol)
                y = random_observable("Y", dim, rng, tol=tol)
            else:
                x, y, _ = random_agreeing_pair(max(dim, 4), rng, tol)
            equality_projector(x, y, tol)
        except QLogicError:
            route_failures += 1

    incoherent = 0
    positives = 0
    positives_total = 0
    negatives = 0
    negatives_total = 0
    for i in range(300):
        style = i % 4
        try:
            if style == 0:
                x, y, state = random_agreeing_pair(int(rng.integers(4, 7)), rng, tol)
                positives_total += 1
                if equality_battery(x, y, state, tol).equal:
                    positives += 1
            elif style == 1:
                dim = int(rng.integers(2, 6))
                x = random_observable("X", dim, rng, tol=tol)
                state = random_vector_state(dim, rng, tol)
                positives_total += 1
                if equality_battery(x, _renamed(x, "Y"), state, tol).equal:
                    positives += 1
            elif style == 2:
                dim = int(rng.integers(2, 6))
                x = random_observable("X", dim, rng, tol=tol)
                y = random_observable("Y", dim, rng, tol=tol)
                state = random_density(dim, rng, tol=tol)
                report = equality_battery(x, y, state, tol)
                if not report.equal:
                    negatives_total += 1
                    if not any(report.clauses.values()):
                        negatives += 1
            else:
                x, y, _ = random_agreeing_pair(int(rng.integers(4, 7)), rng, tol)
                state = random_density(x.dim, rng, rank=x.dim, tol=tol)
                report = equality_battery(x, y, state, tol)
                if not report.equal:
                    negatives_total += 1
                    if not any(report.clauses.values()):
                        negatives += 1
        except QLogicError:
            incoherent += 1

    z = np.diag([1.0, -1.0]).astype(complex)
    eye2 = np.eye(2, dtype=complex)
    first = spectral_decompose("ZL", np.kron(z, eye2), tol)
    second = spectral_decompose("ZR", np.kron(eye2, z), tol)
    bell_vector = np.zeros(4, dtype=complex)
    bell_vector[0] = bell_vector[3] = 1.0 / np.sqrt(2.0)
    bell = DensityState.from_vector(bell_vector, tol)
    q = equality_projector(first, second, tol)
    bell_probability = projector_probability(q, bell, tol)
    expected_span = np.zeros((4, 4), dtype=complex)
    expected_span[0, 0] = expected_span[3, 3] = 1.0
    bell_ok = abs(1.0 - bell_probability) <= 1e-10 and _gap(
        q, Projector.from_matrix(expected_span, tol)) <= tol.assert_tol

    return [
        CheckLine("threshold-kernel and cross-term routes agree on 200 pairs",
                  route_failures == 0, f"{route_failures} disagreements"),
        CheckLine("clause coherence across 300 sampled instances",
                  incoherent == 0, f"{incoherent} incoherent"),
        CheckLine("agreeing pairs equal in sector states",
                  positives == positives_total, f"{positives}/{positives_total}"),
        CheckLine("unequal instances fail every clause",
                  negatives == negatives_total, f"{negatives}/{negatives_total}"),
        CheckLine("Bell state satisfies left = right with probability 1 (1e-10)",
                  bell_ok, f"probability deficit {_fmt(abs(1.0 - bell_probability))}"),
    ]


# ---------------------------------------------------------------------------
# equivalence relation


def _suite_equivalence_relation(rng: np.random.Generator,
                                tol: ToleranceConfig) -> list[CheckLine]:
    worst_reflexive = 0.0
    symmetric = True
    transitive = True
    for i in range(200):
        dim = int(rng.integers(2, 7))
        if i % 3 == 0:
            x = random_observable("X", dim, rng, tol=tol)
            y = _renamed(x, "Y")
            z = random_observable("Z", dim, rng, tol=tol)
        elif i % 3 == 1:
            x, y, z = random_commuting_observables(dim, 3, rng, tol)
        else:
            x = random_observable("X", dim, rng, tol=tol)
            y = random_observable("Y", dim, rng, tol=tol)
            z = random_observable("Z", dim, rng, tol=tol)
        report = equivalence_relation_check(x, y, z, tol)
        worst_reflexive = max(worst_reflexive, report.reflexive_residual)
        symmetric = symmetric and report.symmetric_exact
        transitive = transitive and report.transitive
    return [
        CheckLine("self equality is the identity to 1e-10",
                  worst_reflexive <= 1e-10, f"max residual {_fmt(worst_reflexive)}"),
        CheckLine("equality projector is bitwise symmetric", symmetric),
        CheckLine("transitivity as a lattice inequality on 200 triples", transitive),
    ]


# ---------------------------------------------------------------------------
# common eigenvectors


def _suite_common_eigenvectors(rng: np.random.Generator,
                               tol: ToleranceConfig) -> list[CheckLine]:
    worst_det = 0.0
    det_failures = 0
    for i in range(100):
        dim = int(rng.integers(3, 7))
        count = 2 if i % 2 == 0 else 3
        xs = _mixed_observable_family(dim, count, i % 3, rng, tol)
        try:
            span = common_eigenvector_projector(xs, "determinate", tol)
            worst_det = max(worst_det, _gap(span, com_observables(xs, tol)))
        except QLogicError:
            det_failures += 1

    worst_eq = 0.0
    eq_failures = 0
    for i in range(100):
        dim = int(rng.integers(2, 7))
        try:
            if i % 3 == 0:
                x = random_observable("X", dim, rng, tol=tol)
                y = _renamed(x, "Y")
            elif i % 3 == 1:
                x, y, _ = random_agreeing_pair(max(dim, 4), rng, tol)
            else:
                x = random_observable("X", dim, rng, tol=tol)
                y = random_observable("Y", dim, rng, tol=tol)
            span = common_eigenvector_projector([x, y], "equal", tol)
            worst_eq = max(worst_eq, _gap(span, equality_projector(x, y, tol)))
        except QLogicError:
            eq_failures += 1

    a = tol.assert_tol
    return [
        CheckLine("joint eigenspace span equals the commutator on 100 families",
                  worst_det <= a and det_failures == 0, f"max gap {_fmt(worst_det)}"),
        CheckLine("matching eigenspace span equals the equality projector on 100 pairs",
                  worst_eq <= a and eq_failures == 0, f"max gap {_fmt(worst_eq)}"),
    ]


# ---------------------------------------------------------------------------
# tautology transfer


_TAUTOLOGIES = (
    "a or not a",
    "not (a and not a)",
    "(a and b) or not a or not b",
    "(not a or b) or (not b or a)",
    "not (a or b) or a or b",
    "not (a and (not a or b)) or b",
    "(a and b) or (a and not b) or not a",
    "(a or b) or (not a and not b)",
    "not a or not b or (a and b)",
    "(a and b and c) or not a or not b or not c",
    "(a or not b) or (b or not c) or (c or not a)",
    "not ((not a or b) and (not b or c)) or not a or c",
)


def _random_atom(name: str, registry_entry: Observable, rng: np.random.Generator):
    kind = int(rng.integers(0, 3))
    if kind == 0:
        cut = float(rng.choice(registry_entry.spectrum))
        return Leq(name, cut)
    if kind == 1:
        value = float(rng.choice(registry_entry.spectrum))
        return EqConst(name, value)
    cut = float(rng.choice(registry_entry.spectrum)) - 0.25
    return Not(Leq(name, cut))


def _suite_tautology_transfer(rng: np.random.Generator,
                              tol: ToleranceConfig) -> list[CheckLine]:
    oracle_ok = all(is_classical_tautology(parse_skeleton(s)) for s in _TAUTOLOGIES)
    non_tautology = not is_classical_tautology(parse_skeleton("a or b"))

    passed = 0
    total = 0
    for source in _TAUTOLOGIES:
        skeleton = parse_skeleton(source)
        variables = skeleton_variables(skeleton)
        for j in range(20):
            dim = int(rng.integers(2, 5))
            if j % 2 == 0:
                pool = [random_observable(f"O{k + 1}", dim, rng, tol=tol) for k in range(3)]
            else:
                pool = random_commuting_observables(dim, 3, rng, tol)
                pool = [_renamed(x, f"O{k + 1}") for k, x in enumerate(pool)]
            registry = ObservableRegistry(pool)
            assignment = {}
            for v in variables:
                pick = pool[int(rng.integers(0, len(pool)))]
                assignment[v] = _random_atom(pick.name, pick, rng)
            report = tautology_transfer_check(skeleton, assignment, registry, tol)
            total += 1
            if report.passed:
                passed += 1
    return [
        CheckLine("truth-table oracle certifies the 12 fixtures", oracle_ok),
        CheckLine("truth-table oracle rejects a non-tautology", non_tautology),
        CheckLine("commutator below the truth value in all instantiations",
                  passed == total, f"{passed}/{total}"),
    ]


# ---------------------------------------------------------------------------
# measurement


def _suite_measurement(rng: np.random.Generator, tol: ToleranceConfig) -> list[CheckLine]:
    cnot = cnot_process(tol)
    sigma_z = spectral_decompose("Z", np.diag([1.0, -1.0]).astype(complex), tol)
    sigma_x = spectral_decompose("X", np.array([[0, 1], [1, 0]], dtype=complex), tol)

    cnot_hits = 0
    for _ in range(50):
        state = random_vector_state(2, rng, tol)
        if measurement_battery(cnot, sigma_z, state, tol).measures:
            cnot_hits += 1

    up = DensityState.from_vector(np.array([1.0, 0.0], dtype=complex), tol)
    x_report = measurement_battery(cnot, sigma_x, up, tol)
    x_all_false = x_report.coherent and not any(x_report.clauses.values())

    incoherent = 0
    pushforward_gap = 0.0
    for i in range(100):
        try:
            if i % 3 == 0:
                dim = int(rng.integers(2, 4))
                a = random_observable("A", dim, rng, tol=tol)
                process = measuring_process_for(a, tol)
                state = random_vector_state(dim, rng, tol)
                measurement_battery(process, a, state, tol)
            elif i % 3 == 1:
                dim_h = int(rng.integers(2, 4))
                dim_k = int(rng.integers(2, 4))
                process = random_measuring_process(dim_h, dim_k, rng, tol)
                a = random_observable("A", dim_h, rng, tol=tol)
                state = random_density(dim_h, rng, tol=tol)
                measurement_battery(process, a, state, tol)
            else:
                dim = int(rng.integers(2, 4))
                a = random_observable("A", dim, rng, n_values=dim, tol=tol)
                process = measuring_process_for(a, tol)
                squared = apply_outcome_function(process, lambda v: v * v)
                base = povm_of_process(process)
                pushed = povm_of_process(squared)
                for value in squared.meter.spectrum:
                    expected = sum(
                        (base.element(m) for m in base.outcomes
                         if abs(float(m) ** 2 - value) <= squared.meter.snap_width),
                        np.zeros((dim, dim), dtype=complex))
                    pushforward_gap = max(pushforward_gap,
                                          opnorm(pushed.element(value) - expected))
                state = random_vector_state(dim, rng, tol)
                measurement_battery(squared, a.apply_function(lambda v: v * v), state, tol)
        except QLogicError:
            incoherent += 1

    global_ok = 0
    for i in range(20):
        dim = int(rng.integers(2, 4))
        a = random_observable("A", dim, rng, tol=tol)
        if i % 2 == 0:
            process = measuring_process_for(a, tol)
        else:
            process = random_measuring_process(dim, int(rng.integers(2, 4)), rng, tol)
        try:
            report = global_measurement_check(process, a, spanning_state_sample(dim, tol), tol)
            expected = i % 2 == 0
            if report.coherent and report.measures_globally == expected:
                global_ok += 1
        except QLogicError:
            pass

    naimark_worst = 0.0
    naimark_failures = 0
    for _ in range(100):
        dim = int(rng.integers(2, 5))
        outcomes = int(rng.integers(2, 5))
        povm = random_povm(dim, outcomes, rng, tol)
        try:
            process = naimark_process(povm, tol=tol)
            induced = povm_of_process(process)
            for label, element in zip(povm.outcomes, povm.elements):
                naimark_worst = max(naimark_worst,
                                    opnorm(induced.element(float(label)) - element))
        except QLogicError:
            naimark_failures += 1

    witness_ok = 0
    for _ in range(50):
        dim = int(rng.integers(4, 6))
        (first, second), state = random_determinate_family(dim, 2, rng, tol)
        try:
            report = simultaneous_measurability(first, second, state, tol)
            if report.determinate and report.passed:
                witness_ok += 1
        except QLogicError:
            pass

    return [
        CheckLine("CNOT model measures Z in 50 random states",
                  cnot_hits == 50, f"{cnot_hits}/50"),
        CheckLine("CNOT model fails X in |0> with every clause false", x_all_false),
        CheckLine("predicate coherence across 100 sampled models",
                  incoherent == 0, f"{incoherent} incoherent"),
        CheckLine("outcome pushforward matches the relabeled statistics",
                  pushforward_gap <= tol.assert_tol, f"max gap {_fmt(pushforward_gap)}"),
        CheckLine("all-states measurement iff the statistics are spectral (20 models)",
                  global_ok == 20, f"{global_ok}/20"),
        CheckLine("probe dilation reproduces 100 random statistics maps",
                  naimark_worst <= tol.assert_tol and naimark_failures == 0,
                  f"max gap {_fmt(naimark_worst)}"),
        CheckLine("joint witness succeeds on 50 determinate pairs",
                  witness_ok == 50, f"{witness_ok}/50"),
    ]


# ---------------------------------------------------------------------------
# cli determinism


_CLI_SCENARIO = {
    "dimension": 2,
    "observables": {
        "Z": {"matrix": [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [-1.0, 0.0]]]},
        "X": {"matrix": [[[0.0, 0.0], [1.0, 0.0]], [[1.0, 0.0], [0.0, 0.0]]]},
        "N": {"matrix": [[[0.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]]},
    },
    "states": {
        "up": {"vector": [[1.0, 0.0], [0.0, 0.0]]},
        "mixed": {"matrix": [[[0.5, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.5, 0.0]]]},
    },
    "propositions": {
        "p": "Z <= 0 or not Z <= 0",
        "q": "Z <= 0 and X <= 0",
    },
    "seed": 7,
}


def _run_cli(arguments: list[str], cwd: str) -> subprocess.CompletedProcess:
    package_root = str(Path(__file__).resolve().parents[1])
    env = dict(os.environ)
    env["PYTHONPATH"] = package_root + os.pathsep + env.get("PYTHONPATH", "")
    return subprocess.run([sys.executable, "-m", "qlogic.cli", *arguments],
                          capture_output=True, cwd=cwd, env=env, timeout=120)


def _suite_cli_determinism(rng: np.random.Generator,
                           tol: ToleranceConfig) -> list[CheckLine]:
    checks: list[CheckLine] = []
    with tempfile.TemporaryDirectory() as workdir:
        scenario_path = os.path.join(workdir, "scenario.json")
        with open(scenario_path, "w", encoding="utf-8") as handle:
            json.dump(_CLI_SCENARIO, handle)
        broken_path = os.path.join(workdir, "broken.json")
        with open(broken_path, "w", encoding="utf-8") as handle:
            handle.write('{"dimension": 2,')

        first = _run_cli(["prob", scenario_path, "p", "up", "--json"], workdir)
        second = _run_cli(["prob", scenario_path, "p", "up", "--json"], workdir)
        checks.append(CheckLine(
            "probability reports byte-identical across runs",
            first.returncode == 0 and first.stdout == second.stdout,
            f"exit {first.returncode}, {len(first.stdout)} bytes"))

        eval_first = _run_cli(["eval", scenario_path, "q", "--json"], workdir)
        eval_second = _run_cli(["eval", scenario_path, "q", "--json"], workdir)
        checks.append(CheckLine(
            "evaluation reports byte-identical across runs",
            eval_first.returncode == 0 and eval_first.stdout == eval_second.stdout,
            f"exit {eval_first.returncode}"))

        failing = _run_cli(["check", scenario_path, "determinate", "Z", "X", "mixed",
                            "--json"], workdir)
        failing_again = _run_cli(["check", scenario_path, "determinate", "Z", "X", "mixed",
                                  "--json"], workdir)
        checks.append(CheckLine(
            "failed determinateness check exits 1 with stable output",
            failing.returncode == 1 and failing.stdout == failing_again.stdout,
            f"exit {failing.returncode}"))

        passing = _run_cli(["check", scenario_path, "determinate", "Z", "N", "up"], workdir)
        checks.append(CheckLine(
            "passing determinateness check exits 0",
            passing.returncode == 0, f"exit {passing.returncode}"))

        malformed = _run_cli(["prob", broken_path, "p", "up"], workdir)
        checks.append(CheckLine(
            "malformed scenario exits 2",
            malformed.returncode == 2, f"exit {malformed.returncode}"))

        unknown = _run_cli(["prob", scenario_path, "nosuch", "up"], workdir)
        checks.append(CheckLine(
            "unknown proposition name exits 2",
            unknown.returncode == 2, f"exit {unknown.returncode}"))
    return checks


# ---------------------------------------------------------------------------
# registry


BUILTIN_SUITES = {
    "lattice-laws": _suite_lattice_laws,
    "commutator-routes": _suite_commutator_routes,
    "spectral-identities": _suite_spectral_identities,
    "com-expansion": _suite_com_expansion,
    "determinateness": _suite_determinateness,
    "equality": _suite_equality,
    "equivalence-relation": _suite_equivalence_relation,
    "common-eigenvectors": _suite_common_eigenvectors,
    "tautology-transfer": _suite_tautology_transfer,
    "measurement": _suite_measurement,
    "cli-determinism": _suite_cli_determinism,
}


def run_suite(name: str, seed: int | None = None,
              tol: ToleranceConfig = DEFAULT_TOL) -> SuiteResult:
    """Run one named suite under a recorded seed."""
    try:
        suite = BUILTIN_SUITES[name]
    except KeyError:
        raise UnknownNameError(
            f"unknown suite {name!r}; available: {', '.join(sorted(BUILTIN_SUITES))}"
        ) from None
    actual_seed = DEFAULT_SEED if seed is None else seed
    started = time.perf_counter()
    checks = suite(rng_from_seed(actual_seed), tol)
    elapsed = time.perf_counter() - started
    return SuiteResult(name, actual_seed, elapsed, checks)


def run_all(seed: int | None = None, tol: ToleranceConfig = DEFAULT_TOL) -> list[SuiteResult]:
    return [run_suite(name, seed, tol) for name in BUILTIN_SUITES]
