"""Samplers: distributional contracts the suites and tests rely on."""

import numpy as np
import pytest

from qlogic.linalg import commutator, dagger, opnorm
from qlogic.projectors import Projector, leq
from qlogic.sampling import (
    haar_unitary,
    observable_from_eigenbasis,
    random_agreeing_pair,
    random_block_observables,
    random_commuting_observables,
    random_density,
    random_determinate_family,
    random_observable,
    random_povm,
    random_projector,
    random_subprojector,
    random_vector_state,
    rng_from_seed,
    state_supported_in,
)
from qlogic.states import equal_in_state, simultaneously_determinate


def test_haar_unitary_is_unitary(rng):
    for dim in (2, 5):
        u = haar_unitary(dim, rng)
        assert opnorm(dagger(u) @ u - np.eye(dim)) < 1e-12


def test_haar_unitary_seed_determinism():
    a = haar_unitary(4, rng_from_seed(3))
    b = haar_unitary(4, rng_from_seed(3))
    assert np.array_equal(a, b)


def test_random_projector_contracts(rng):
    p = random_projector(5, rng, rank=2)
    assert p.rank == 2
    assert opnorm(p.matrix @ p.matrix - p.matrix) < 1e-12
    assert opnorm(p.matrix - dagger(p.matrix)) < 1e-12


def test_random_subprojector_sits_below_parent(rng):
    parent = random_projector(6, rng, rank=4)
    child = random_subprojector(parent, rng, rank=2)
    assert child.rank == 2
    assert leq(child, parent)


def test_observable_from_eigenbasis_exact(rng):
    basis = haar_unitary(4, rng)
    x = observable_from_eigenbasis("A", basis, [-1.0, 2.0], [3, 1])
    assert x.spectrum == (-1.0, 2.0)
    assert [p.rank for p in x.eigenprojectors] == [3, 1]
    assert opnorm(x.matrix - basis @ np.diag([-1.0, -1.0, -1.0, 2.0]) @ dagger(basis)) < 1e-12


def test_random_observable_integer_spectrum(rng):
    x = random_observable("A", 5, rng)
    assert all(float(v).is_integer() for v in x.spectrum)
    assert all(-5.0 <= v <= 5.0 for v in x.spectrum)
    assert sum(p.rank for p in x.eigenprojectors) == 5


def test_random_commuting_observables_commute(rng):
    xs = random_commuting_observables(5, 3, rng)
    for i in range(len(xs)):
        for j in range(i + 1, len(xs)):
            assert opnorm(commutator(xs[i].matrix, xs[j].matrix)) < 1e-10


def test_random_block_observables_structure(rng):
    xs = random_block_observables([2, 3], [True, False], 3, rng)
    for x in xs:
        assert x.dim == 5
        # Off-diagonal coupling between blocks is absent by construction.
        assert opnorm(x.matrix[:2, 2:]) < 1e-12
    # The shared-basis block commutes across the family.
    for i in range(3):
        for j in range(i + 1, 3):
            top = commutator(xs[i].matrix[:2, :2], xs[j].matrix[:2, :2])
            assert opnorm(top) < 1e-10


def test_random_density_contracts(rng):
    rho = random_density(4, rng, rank=2)
    assert rho.rank == 2
    assert np.trace(rho.matrix).real == pytest.approx(1.0)
    assert float(np.min(np.linalg.eigvalsh(rho.matrix))) > -1e-12


def test_random_vector_state_is_pure(rng):
    rho = random_vector_state(4, rng)
    assert rho.rank == 1
    assert np.trace(rho.matrix @ rho.matrix).real == pytest.approx(1.0)


def test_state_supported_in_sector(rng):
    sector = Projector.from_basis(np.eye(4)[:, [1, 2]])
    rho = state_supported_in(sector, rng)
    assert leq(rho.support, sector)
    with pytest.raises(ValueError):
        state_supported_in(Projector.zero(4), rng)


def test_random_determinate_family_contract(rng):
    family, state = random_determinate_family(5, 3, rng)
    # At least one genuinely non-commuting pair...
    worst = max(opnorm(commutator(x.matrix, y.matrix))
                for i, x in enumerate(family) for y in family[i + 1:])
    assert worst > 1e-3
    # ...yet the state is supported where everything commutes.
    assert simultaneously_determinate(family, state)
    with pytest.raises(ValueError):
        random_determinate_family(3, 2, rng)


def test_random_agreeing_pair_contract(rng):
    x, y, state = random_agreeing_pair(6, rng)
    assert equal_in_state(x, y, state)
    with pytest.raises(ValueError):
        random_agreeing_pair(3, rng)


def test_random_povm_contract(rng):
    povm = random_povm(3, 4, rng)
    assert povm.outcomes == (0.0, 1.0, 2.0, 3.0)
    total = sum(povm.elements)
    assert opnorm(total - np.eye(3)) < 1e-10
    for element in povm.elements:
        assert float(np.min(np.linalg.eigvalsh(element))) > -1e-10
