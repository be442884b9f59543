"""States, Born probabilities, determinateness, and quantum equality."""

import numpy as np
import pytest

from conftest import SIGMA_X, SIGMA_Z
from qlogic.errors import (
    DimensionMismatchError,
    NotCommutingError,
    QLogicError,
)
from qlogic.observables import embed_first, embed_second, spectral_decompose
from qlogic.projectors import Projector
from qlogic.propositions import ObservableRegistry, parse
from qlogic.sampling import random_commuting_observables
from qlogic.states import (
    DensityState,
    JointDistribution,
    born_joint,
    common_eigenvector_projector,
    cyclic_projector,
    determinateness_battery,
    equal_in_state,
    equality_battery,
    equality_projector,
    equivalence_relation_check,
    holds,
    probability,
    projector_probability,
    simultaneously_determinate,
)


def diag_obs(name, *values):
    return spectral_decompose(name, np.diag(np.array(values, dtype=float)).astype(complex))


def basis_state(dim, index):
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return DensityState.from_vector(v)


@pytest.fixture
def pauli_z():
    return spectral_decompose("Z", SIGMA_Z)


@pytest.fixture
def pauli_x():
    return spectral_decompose("X", SIGMA_X)


@pytest.fixture
def bell():
    return DensityState.from_vector(np.array([1.0, 0.0, 0.0, 1.0], dtype=complex) / np.sqrt(2))


# ---------------------------------------------------------------------------
# density states


def test_from_matrix_resolves_support():
    rho = DensityState.from_matrix(np.diag([0.5, 0.5, 0.0]).astype(complex))
    assert rho.dim == 3
    assert rho.rank == 2
    assert np.allclose(rho.support.matrix, np.diag([1.0, 1.0, 0.0]))


def test_from_matrix_validation():
    with pytest.raises(ValueError):
        DensityState.from_matrix(np.diag([1.5, -0.5]).astype(complex))
    with pytest.raises(ValueError):
        DensityState.from_matrix(np.diag([0.9, 0.9]).astype(complex))


def test_from_vector_validation():
    with pytest.raises(ValueError):
        DensityState.from_vector(np.array([1.0, 1.0]))
    rho = DensityState.from_vector(np.array([1.0, 1.0]) / np.sqrt(2))
    assert rho.rank == 1
    assert rho.expectation(SIGMA_X).real == pytest.approx(1.0)


def test_maximally_mixed_and_tensor():
    rho = DensityState.maximally_mixed(2)
    product = rho.tensor(basis_state(3, 0))
    assert product.dim == 6
    assert product.rank == 2
    assert np.trace(product.matrix).real == pytest.approx(1.0)


# ---------------------------------------------------------------------------
# probabilities


def test_projector_probability_clamps_and_checks_dim():
    rho = basis_state(2, 0)
    p = Projector.from_matrix(np.diag([1.0, 0.0]))
    assert projector_probability(p, rho) == pytest.approx(1.0)
    with pytest.raises(DimensionMismatchError):
        projector_probability(Projector.identity(3), rho)


def test_probability_and_holds(pauli_z, pauli_x):
    registry = ObservableRegistry([pauli_z, pauli_x])
    up = basis_state(2, 0)
    assert probability(parse("Z == 1"), up, registry) == pytest.approx(1.0)
    assert probability(parse("Z == -1"), up, registry) == pytest.approx(0.0)
    assert holds(parse("Z == 1"), up, registry)
    assert not holds(parse("X == 1"), up, registry)
    plus = DensityState.from_vector(np.array([1.0, 1.0]) / np.sqrt(2))
    assert probability(parse("X == 1"), plus, registry) == pytest.approx(1.0)


def test_born_joint_matches_hand_computation():
    a = diag_obs("A", 0.0, 1.0, 2.0)
    b = diag_obs("B", 0.0, 0.0, 5.0)
    rho = DensityState.from_matrix(np.diag([0.2, 0.3, 0.5]).astype(complex))
    # Pr{A <= 1, B <= 0} sums the first two diagonal weights.
    assert born_joint([a, b], [1.0, 0.0], rho) == pytest.approx(0.5)
    assert born_joint([a, b], [2.0, 5.0], rho) == pytest.approx(1.0)
    assert born_joint([a, b], [-1.0, 5.0], rho) == pytest.approx(0.0)


def test_born_joint_rejects_non_commuting(pauli_z, pauli_x):
    with pytest.raises(NotCommutingError):
        born_joint([pauli_z, pauli_x], [0.0, 0.0], basis_state(2, 0))


def test_born_joint_threshold_count_mismatch(pauli_z):
    with pytest.raises(DimensionMismatchError):
        born_joint([pauli_z], [0.0, 1.0], basis_state(2, 0))


# ---------------------------------------------------------------------------
# joint distributions


def test_joint_distribution_accessors():
    dist = JointDistribution(("A", "B"), {(0.0, 0.0): 0.2, (1.0, 0.0): 0.3, (2.0, 5.0): 0.5})
    assert dist.total_mass == pytest.approx(1.0)
    assert dist.mass([[0.0, 1.0], [0.0]]) == pytest.approx(0.5)
    assert dist.marginal(0) == pytest.approx({0.0: 0.2, 1.0: 0.3, 2.0: 0.5})
    assert dist.marginal(1) == pytest.approx({0.0: 0.5, 5.0: 0.5})
    assert [v for v, _ in dist.sorted_items()] == [(0.0, 0.0), (1.0, 0.0), (2.0, 5.0)]


def test_joint_distribution_validation():
    with pytest.raises(QLogicError):
        JointDistribution(("A",), {(0.0,): 0.4})
    with pytest.raises(QLogicError):
        JointDistribution(("A",), {(0.0,): 1.5, (1.0,): -0.5})


# ---------------------------------------------------------------------------
# cyclic subspaces


def test_cyclic_projector_spans_orbit():
    a = diag_obs("A", 0.0, 1.0, 2.0)
    rho = basis_state(3, 1)
    p = cyclic_projector([a], rho)
    # A's eigenvectors are the coordinate axes, so the orbit stays on axis 1.
    assert p.rank == 1
    assert np.allclose(p.matrix, np.diag([0.0, 1.0, 0.0]))


def test_cyclic_projector_grows_with_mixing(pauli_x):
    up = basis_state(2, 0)
    p = cyclic_projector([pauli_x], up)
    # X maps the up state onto the down state, so the orbit is everything.
    assert p.rank == 2


# ---------------------------------------------------------------------------
# determinateness


def test_simultaneously_determinate_commuting(rng):
    xs = random_commuting_observables(4, 2, rng)
    rho = DensityState.maximally_mixed(4)
    assert simultaneously_determinate(xs, rho)


def test_simultaneously_determinate_depends_on_state(pauli_z, pauli_x):
    xs = [pauli_z, pauli_x]
    assert not simultaneously_determinate(xs, DensityState.maximally_mixed(2))
    assert not simultaneously_determinate(xs, basis_state(2, 0))


def test_determinateness_battery_positive(rng):
    xs = random_commuting_observables(4, 2, rng)
    rho = DensityState.maximally_mixed(4)
    report = determinateness_battery(xs, rho)
    assert report.coherent
    assert report.determinate
    assert all(report.clauses.values())
    assert report.com.rank == 4
    assert report.distribution is not None
    assert report.distribution.total_mass == pytest.approx(1.0)
    assert set(report.clauses) == {
        "full_probability", "state_invariance", "cyclic_dominated",
        "algebra_kills_state", "compressions_commute", "product_measure",
    }


def test_determinateness_battery_negative(pauli_z, pauli_x):
    report = determinateness_battery([pauli_z, pauli_x], DensityState.maximally_mixed(2))
    assert report.coherent
    assert not report.determinate
    assert not any(report.clauses.values())
    assert report.distribution is None
    assert report.com.rank == 0


def test_determinateness_battery_block_state():
    # Non-commuting in one sector, but the state lives in the compatible one.
    a = np.zeros((4, 4), dtype=complex)
    a[:2, :2] = SIGMA_Z
    a[2:, 2:] = np.diag([3.0, 4.0])
    b = np.zeros((4, 4), dtype=complex)
    b[:2, :2] = SIGMA_X
    b[2:, 2:] = np.diag([6.0, 7.0])
    xs = [spectral_decompose("A", a), spectral_decompose("B", b)]
    sector_state = DensityState.from_matrix(np.diag([0.0, 0.0, 0.5, 0.5]).astype(complex))
    report = determinateness_battery(xs, sector_state)
    assert report.determinate
    marg = report.distribution.marginal(0)
    assert marg == pytest.approx({-1.0: 0.0, 1.0: 0.0, 3.0: 0.5, 4.0: 0.5}, abs=1e-10)
    outside = DensityState.maximally_mixed(4)
    assert not determinateness_battery(xs, outside).determinate


def test_determinateness_joint_distribution_matches_born(rng):
    xs = random_commuting_observables(4, 2, rng)
    rho = DensityState.maximally_mixed(4)
    report = determinateness_battery(xs, rho)
    x, y = xs
    for (a, b), mass in report.distribution.sorted_items():
        direct = np.trace(x.eigenprojector_at(a).matrix @ y.eigenprojector_at(b).matrix
                          @ rho.matrix)
        assert mass == pytest.approx(direct.real, abs=1e-10)


# ---------------------------------------------------------------------------
# equality


def test_equality_projector_diagonal_fixtures():
    a = diag_obs("A", 0.0, 1.0, 2.0)
    b = diag_obs("B", 0.0, 0.0, 5.0)
    q = equality_projector(a, b)
    assert np.allclose(q.matrix, np.diag([1.0, 0.0, 0.0]))
    assert equality_projector(a, a).rank == 3


def test_equality_projector_requires_matching_dims(pauli_z):
    with pytest.raises(DimensionMismatchError):
        equality_projector(pauli_z, diag_obs("B", 0.0, 1.0, 2.0))


def test_equal_in_state_diagonal():
    a = diag_obs("A", 0.0, 1.0, 2.0)
    b = diag_obs("B", 0.0, 0.0, 5.0)
    assert equal_in_state(a, b, basis_state(3, 0))
    assert not equal_in_state(a, b, basis_state(3, 1))


def test_bell_state_equality(bell):
    first = embed_first(spectral_decompose("Z1", SIGMA_Z), 2)
    second = embed_second(spectral_decompose("Z2", SIGMA_Z), 2)
    q = equality_projector(first, second)
    assert np.allclose(q.matrix, np.diag([1.0, 0.0, 0.0, 1.0]), atol=1e-10)
    # The Bell state is a witness: perfectly correlated, probability one.
    assert projector_probability(q, bell) >= 1.0 - 1e-10
    report = equality_battery(first, second, bell)
    assert report.equal
    assert report.coherent


def test_equality_battery_negative(bell):
    first = embed_first(spectral_decompose("Z1", SIGMA_Z), 2)
    x_second = embed_second(spectral_decompose("X2", SIGMA_X), 2)
    report = equality_battery(first, x_second, bell)
    assert report.coherent
    assert not report.equal
    assert not any(report.clauses.values())


def test_equality_battery_clause_names():
    a = diag_obs("A", 0.0, 1.0)
    b = diag_obs("B", 0.0, 1.0)
    report = equality_battery(a, b, basis_state(2, 1))
    assert set(report.clauses) == {
        "full_probability", "no_cross_correlation", "operators_agree_on_cyclic",
        "expectations_agree_on_cyclic", "spectral_action_on_state",
        "cyclic_subspaces_match", "diagonal_concentration",
    }
    assert report.equal


def test_equivalence_relation_fixtures():
    x = diag_obs("A", 0.0, 1.0, 2.0)
    y = diag_obs("B", 0.0, 0.0, 5.0)
    z = diag_obs("C", 1.0, 3.0, 5.0)
    report = equivalence_relation_check(x, y, z)
    assert report.passed
    assert report.reflexive_residual <= 1e-10
    assert report.symmetric_exact
    assert report.transitive


def test_equivalence_relation_with_non_commuting_middle(pauli_z, pauli_x):
    z2 = spectral_decompose("Z2", SIGMA_Z)
    report = equivalence_relation_check(pauli_z, pauli_x, z2)
    assert report.passed


# ---------------------------------------------------------------------------
# common eigenvector spans


def test_common_eigenvectors_determinate_mode(rng):
    xs = random_commuting_observables(4, 2, rng)
    span = common_eigenvector_projector(xs, mode="determinate")
    assert span.rank == 4


def test_common_eigenvectors_match_com_on_blocks():
    a = np.zeros((4, 4), dtype=complex)
    a[:2, :2] = SIGMA_Z
    a[2:, 2:] = np.diag([3.0, 4.0])
    b = np.zeros((4, 4), dtype=complex)
    b[:2, :2] = SIGMA_X
    b[2:, 2:] = np.diag([6.0, 7.0])
    xs = [spectral_decompose("A", a), spectral_decompose("B", b)]
    span = common_eigenvector_projector(xs, mode="determinate")
    assert np.allclose(span.matrix, np.diag([0.0, 0.0, 1.0, 1.0]), atol=1e-8)


def test_common_eigenvectors_equal_mode():
    a = diag_obs("A", 0.0, 1.0, 2.0)
    b = diag_obs("B", 0.0, 0.0, 5.0)
    span = common_eigenvector_projector([a, b], mode="equal")
    assert np.allclose(span.matrix, np.diag([1.0, 0.0, 0.0]), atol=1e-8)


def test_common_eigenvectors_equal_mode_arity():
    a = diag_obs("A", 0.0, 1.0, 2.0)
    with pytest.raises(DimensionMismatchError):
        common_eigenvector_projector([a], mode="equal")
