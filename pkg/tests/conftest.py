"""Shared fixtures and independent oracles for the test suite.

The oracles here are deliberately coded differently from the library: a
permutation-sum determinant, characteristic-polynomial interpolation, and
numpy's LAPACK eigensolver.
"""

import itertools
import math

import numpy as np
import pytest

from wahba import ObservationSet, Quaternion, quaternion_to_matrix, weights_from_sigmas

CORPUS_SIZE = 1000
CORPUS_SEED = 2024


def perm_det(m) -> float:
    """Leibniz permutation-sum determinant (any small square size)."""
    m = np.asarray(m, dtype=float)
    n = m.shape[0]
    total = 0.0
    for perm in itertools.permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = -1.0 if inversions % 2 else 1.0
        for i, j in enumerate(perm):
            term *= m[i, j]
        total += term
    return total


def charpoly_by_interpolation(k) -> np.ndarray:
    """Coefficients (a, b, c, d) of det(xI - k) from five sample evaluations."""
    k = np.asarray(k, dtype=float)
    xs = np.array([-2.0, -1.0, 0.0, 1.0, 2.0])
    ys = np.array([perm_det(x * np.eye(4) - k) for x in xs])
    vander = np.vander(xs, 5)
    coeffs = np.linalg.solve(vander, ys)
    return coeffs[1:] / coeffs[0]


def random_rotation(rng) -> np.ndarray:
    return quaternion_to_matrix(Quaternion.from_array(rng.standard_normal(4)))


def random_unit_vectors(rng, n: int) -> np.ndarray:
    v = rng.standard_normal((n, 3))
    return v / np.linalg.norm(v, axis=1)[:, None]


def random_observation_set(rng, weighting: str = "inverse_variance"):
    """(true A, ObservationSet) with n in 2..6 and sigma log-uniform in [1e-6, 1e-1]."""
    n = int(rng.integers(2, 7))
    A = random_rotation(rng)
    refs = random_unit_vectors(rng, n)
    sigmas = 10.0 ** rng.uniform(-6.0, -1.0, size=n)
    bodies = refs @ A.T + rng.standard_normal((n, 3)) * sigmas[:, None]
    obs = ObservationSet.from_vectors(refs, bodies, weights_from_sigmas(sigmas, weighting))
    return A, obs


def make_corpus(size: int = CORPUS_SIZE, seed: int = CORPUS_SEED, weighting: str = "inverse_variance"):
    rng = np.random.default_rng(seed)
    return [random_observation_set(rng, weighting) for _ in range(size)]


def noiseless_set(rng, A, n: int = 3) -> ObservationSet:
    refs = random_unit_vectors(rng, n)
    return ObservationSet.from_vectors(refs, refs @ A.T, [1.0] * n, normalize_weights=True)


@pytest.fixture(scope="session")
def corpus():
    return make_corpus()


@pytest.fixture(scope="session")
def equal_corpus():
    return make_corpus(seed=CORPUS_SEED + 1, weighting="equal")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def rel_scale(*values) -> float:
    return max(1.0, *(abs(float(v)) for v in values))


def angle_deg(u, v) -> float:
    return math.degrees(math.acos(max(-1.0, min(1.0, float(np.dot(u, v))))))


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance():
    """Record one PASS/FAIL line per acceptance criterion; asserts on failure."""

    def record(number: int, ok: bool, detail: str):
        ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}")
        print(ACCEPTANCE_LINES[-1])
        assert ok, detail

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
