"""Shared fixtures: deterministic generators, standard matrices, scenario files."""

import json

import numpy as np
import pytest

from qlogic import DEFAULT_TOL
from qlogic.sampling import rng_from_seed

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)

CNOT = np.array([[1, 0, 0, 0],
                 [0, 1, 0, 0],
                 [0, 0, 0, 1],
                 [0, 0, 1, 0]], dtype=complex)


def pairs(matrix):
    """Serialize a matrix into the nested [re, im] form scenario files use."""
    return [[[float(entry.real), float(entry.imag)] for entry in row]
            for row in np.asarray(matrix, dtype=complex)]


def vector_pairs(vector):
    return [[float(entry.real), float(entry.imag)]
            for entry in np.asarray(vector, dtype=complex)]


@pytest.fixture
def tol():
    return DEFAULT_TOL


@pytest.fixture
def rng():
    # One fixed stream per test keeps failures reproducible without
    # coupling tests to each other's draw order.
    return rng_from_seed(91240)


@pytest.fixture
def qubit_document():
    """A small two-level scenario exercising every section of the format."""
    return {
        "dimension": 2,
        "seed": 11,
        "observables": {
            "Z": {"matrix": pairs(SIGMA_Z)},
            "X": {"matrix": pairs(SIGMA_X)},
            "Z2": {"matrix": pairs(SIGMA_Z)},
        },
        "states": {
            "up": {"vector": vector_pairs([1.0, 0.0])},
            "plus": {"vector": vector_pairs([2 ** -0.5, 2 ** -0.5])},
            "mixed": {"matrix": pairs(np.eye(2) / 2.0)},
        },
        "propositions": {
            "zpos": "Z == 1",
            "zlow": "Z <= 0",
            "compatible": "com(Z, X)",
            "same": "Z = Z2",
            "either": "Z == 1 or Z == -1",
        },
        "processes": {
            "pointer": {
                "dimK": 2,
                "sigma": {"vector": vector_pairs([1.0, 0.0])},
                "U": pairs(CNOT),
                "M": pairs(SIGMA_Z),
            },
        },
    }


@pytest.fixture
def scenario_file(tmp_path, qubit_document):
    """Write the qubit scenario to disk and return its path as a string."""
    path = tmp_path / "qubit.json"
    path.write_text(json.dumps(qubit_document))
    return str(path)


@pytest.fixture
def write_scenario(tmp_path):
    """Factory writing an arbitrary document to a fresh file."""
    counter = {"n": 0}

    def write(document):
        counter["n"] += 1
        path = tmp_path / f"scenario_{counter['n']}.json"
        path.write_text(json.dumps(document))
        return str(path)

    return write
