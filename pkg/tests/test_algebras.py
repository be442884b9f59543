"""Commutants, double commutants, centers, minimal central projections."""

import numpy as np
import pytest

from conftest import SIGMA_X, SIGMA_Y, SIGMA_Z
from qlogic.algebras import (
    MatrixAlgebra,
    algebra_from_generators,
    center,
    commutant,
    contains,
    minimal_central_projections,
    span_equal,
)
from qlogic.linalg import dagger, opnorm
from qlogic.sampling import haar_unitary


def test_commutant_of_nothing_is_everything():
    basis = commutant([], 3)
    assert len(basis) == 9


def test_commutant_of_irreducible_pair_is_scalars():
    basis = commutant([SIGMA_X, SIGMA_Z], 2)
    assert len(basis) == 1
    b = basis[0]
    assert opnorm(b - np.trace(b) / 2.0 * np.eye(2)) < 1e-10


def test_commutant_of_diagonal_matrix_is_diagonal():
    basis = commutant([np.diag([1.0, 2.0, 3.0]).astype(complex)], 3)
    assert len(basis) == 3
    for b in basis:
        assert opnorm(b - np.diag(np.diag(b))) < 1e-10


def test_commutant_members_commute_with_generators(rng):
    u = haar_unitary(4, rng)
    g = u @ np.diag([1.0, 1.0, 2.0, 3.0]) @ dagger(u)
    for b in commutant([g], 4):
        assert opnorm(g @ b - b @ g) < 1e-8


def test_commutant_ignores_scalar_noise_generator(rng):
    # A generator that is the identity up to rounding must not shrink the
    # commutant below the full matrix algebra.
    noisy_identity = np.eye(4, dtype=complex) + 1e-15 * rng.normal(size=(4, 4))
    basis = commutant([noisy_identity], 4)
    assert len(basis) == 16


def test_algebra_from_generators_full():
    alg = algebra_from_generators([SIGMA_X, SIGMA_Z], 2)
    assert isinstance(alg, MatrixAlgebra)
    assert alg.size == 4
    assert len(alg.commutant_basis) == 1


def test_algebra_from_generators_abelian():
    alg = algebra_from_generators([np.diag([1.0, 2.0, 2.0]).astype(complex)], 3)
    # Two spectral projections span a two-dimensional unital algebra.
    assert alg.size == 2
    assert contains(alg, np.eye(3))
    assert contains(alg, np.diag([5.0, -1.0, -1.0]))
    assert not contains(alg, np.diag([0.0, 1.0, 2.0]))
    embedded = np.zeros((3, 3), dtype=complex)
    embedded[:2, :2] = SIGMA_X
    assert not contains(alg, embedded)


def test_center_of_full_algebra_is_scalars():
    alg = algebra_from_generators([SIGMA_X, SIGMA_Z], 2)
    central = center(alg)
    assert len(central) == 1
    c = central[0]
    assert opnorm(c - np.trace(c) / 2.0 * np.eye(2)) < 1e-10


def test_center_of_block_algebra():
    g1 = np.zeros((4, 4), dtype=complex)
    g1[:2, :2] = SIGMA_X
    g2 = np.zeros((4, 4), dtype=complex)
    g2[:2, :2] = SIGMA_Z
    alg = algebra_from_generators([g1, g2], 4)
    assert len(center(alg)) == 2


def test_minimal_central_projections_resolve_blocks():
    g = np.diag([1.0, 1.0, 4.0, 4.0]).astype(complex)
    coupling = np.zeros((4, 4), dtype=complex)
    coupling[0, 1] = coupling[1, 0] = 1.0
    alg = algebra_from_generators([g, coupling], 4)
    centrals = minimal_central_projections(alg)
    total = sum(p.matrix for p in centrals)
    assert np.allclose(total, np.eye(4), atol=1e-10)
    for p in centrals:
        for b in alg.basis:
            assert opnorm(p.matrix @ b - b @ p.matrix) < 1e-8
    # The diagonal blocks {0,1} and {2,3} are the two factors.
    assert sorted(p.rank for p in centrals) == [1, 1, 2]


def test_minimal_central_projection_of_factor_is_identity():
    alg = algebra_from_generators([SIGMA_X, SIGMA_Y], 2)
    centrals = minimal_central_projections(alg)
    assert len(centrals) == 1
    assert centrals[0].rank == 2


def test_span_equal():
    first = [np.eye(2, dtype=complex), SIGMA_Z]
    second = [np.diag([1.0, 0.0]).astype(complex), np.diag([0.0, 1.0]).astype(complex)]
    assert span_equal(first, second)
    assert not span_equal(first, [np.eye(2, dtype=complex)])
    assert not span_equal(first, [np.eye(2, dtype=complex), SIGMA_X])


def test_double_commutant_is_idempotent(rng):
    u = haar_unitary(4, rng)
    g = u @ np.diag([0.0, 1.0, 1.0, 3.0]) @ dagger(u)
    alg = algebra_from_generators([g], 4)
    again = algebra_from_generators(alg.basis, 4)
    assert again.size == alg.size
    assert span_equal(alg.basis, again.basis)
