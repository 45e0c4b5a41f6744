"""Observations, attitude profile, Davenport K-matrix and its characteristic quartic."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import EmptyObservationSet, InvalidObservation, NonOrthogonalAttitude
from .linalg import adjugate3, det4_adjugate4, frobenius

UNIT_TOL = 1e-12
ORTHO_TOL = 1e-10


def normalize(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    n = math.sqrt(float(v @ v))
    if n == 0.0 or not math.isfinite(n):
        raise InvalidObservation(f"cannot normalize vector {v.tolist()}")
    return v / n


@dataclass(frozen=True)
class Observation:
    """One weighted pair of unit vectors: ``body ~= A @ reference``."""

    reference: np.ndarray
    body: np.ndarray
    weight: float = 1.0

    def __post_init__(self):
        r = np.asarray(self.reference, dtype=float).reshape(3)
        b = np.asarray(self.body, dtype=float).reshape(3)
        for name, v in (("reference", r), ("body", b)):
            if abs(math.sqrt(float(v @ v)) - 1.0) > UNIT_TOL:
                raise InvalidObservation(f"{name} vector {v.tolist()} is not unit norm")
        if not (self.weight > 0 and math.isfinite(self.weight)):
            raise InvalidObservation(f"weight must be positive, got {self.weight}")
        object.__setattr__(self, "reference", r)
        object.__setattr__(self, "body", b)
        object.__setattr__(self, "weight", float(self.weight))


@dataclass(frozen=True)
class ObservationSet:
    observations: tuple[Observation, ...]

    def __post_init__(self):
        obs = tuple(self.observations)
        if not obs:
            raise EmptyObservationSet("at least one observation is required")
        object.__setattr__(self, "observations", obs)

    @property
    def total_weight(self) -> float:
        return math.fsum(o.weight for o in self.observations)

    def __len__(self) -> int:
        return len(self.observations)

    def __iter__(self):
        return iter(self.observations)

    @classmethod
    def from_vectors(
        cls,
        references: Iterable,
        bodies: Iterable,
        weights: Sequence[float] | None = None,
        normalize_weights: bool = False,
        normalize_vectors: bool = True,
    ) -> "ObservationSet":
        """Build a set from parallel sequences of reference/body vectors.

        Vectors are rescaled to unit length unless ``normalize_vectors`` is
        False, in which case non-unit input is rejected. With
        ``normalize_weights`` the weights are rescaled to sum to one.
        """
        refs = [np.asarray(r, dtype=float) for r in references]
        bods = [np.asarray(b, dtype=float) for b in bodies]
        if len(refs) != len(bods):
            raise InvalidObservation("reference and body lists differ in length")
        if not refs:
            raise EmptyObservationSet("at least one observation is required")
        if weights is None:
            weights = [1.0] * len(refs)
        weights = [float(w) for w in weights]
        if len(weights) != len(refs):
            raise InvalidObservation("weight list length does not match vectors")
        if normalize_weights:
            total = math.fsum(weights)
            if not total > 0:
                raise InvalidObservation("weights must sum to a positive value")
            weights = [w / total for w in weights]
        if normalize_vectors:
            refs = [normalize(r) for r in refs]
            bods = [normalize(b) for b in bods]
        return cls(tuple(Observation(r, b, w) for r, b, w in zip(refs, bods, weights)))


def weights_from_sigmas(sigmas: Sequence[float], mode: str = "inverse_variance") -> list[float]:
    """Normalized observation weights from measurement standard deviations.

    ``inverse_variance`` gives ``a_i = sigma_i^-2 / sum_j sigma_j^-2``; ``equal``
    ignores sigma and gives ``1/n`` to each observation.
    """
    if any(not (s > 0) for s in sigmas):
        raise InvalidObservation("sigmas must be positive")
    if mode == "inverse_variance":
        raw = [1.0 / (s * s) for s in sigmas]
    elif mode == "equal":
        raw = [1.0] * len(sigmas)
    else:
        raise ValueError(f"unknown weighting mode {mode!r}")
    total = math.fsum(raw)
    return [w / total for w in raw]


@dataclass(frozen=True)
class AttitudeProfile:
    B: np.ndarray
    S: np.ndarray
    z: np.ndarray
    trB: float


@dataclass(frozen=True)
class QuarticCoeffs:
    """Coefficients of the monic quartic ``x^4 + a x^3 + b x^2 + c x + d``."""

    a: float
    b: float
    c: float
    d: float

    def __iter__(self):
        return iter((self.a, self.b, self.c, self.d))

    @property
    def scale(self) -> float:
        return max(1.0, abs(self.a), abs(self.b), abs(self.c), abs(self.d))

    def __call__(self, x: float) -> float:
        return (((x + self.a) * x + self.b) * x + self.c) * x + self.d

    def derivative(self, x: float) -> float:
        return ((4.0 * x + 3.0 * self.a) * x + 2.0 * self.b) * x + self.c


def build_profile(obs: ObservationSet) -> AttitudeProfile:
    if len(obs) == 0:
        raise EmptyObservationSet("at least one observation is required")
    B = np.zeros((3, 3))
    for o in obs:
        B += o.weight * np.outer(o.body, o.reference)
    S = B + B.T
    z = np.array([B[1, 2] - B[2, 1], B[2, 0] - B[0, 2], B[0, 1] - B[1, 0]])
    return AttitudeProfile(B=B, S=S, z=z, trB=float(B[0, 0] + B[1, 1] + B[2, 2]))


def build_k_matrix(p: AttitudeProfile) -> np.ndarray:
    K = np.empty((4, 4))
    K[:3, :3] = p.S - p.trB * np.eye(3)
    K[:3, 3] = p.z
    K[3, :3] = p.z
    K[3, 3] = p.trB
    return K


def quartic_coefficients(p: AttitudeProfile, k: np.ndarray) -> QuarticCoeffs:
    """Characteristic polynomial ``det(x I - K)`` written through B, S and z.

    The cubic coefficient vanishes identically because K is traceless.
    """
    adjS = adjugate3(p.S)
    b = -2.0 * p.trB**2 + float(adjS[0, 0] + adjS[1, 1] + adjS[2, 2]) - float(p.z @ p.z)
    detK, adjK = det4_adjugate4(k)
    c = -float(np.trace(adjK))
    return QuarticCoeffs(a=0.0, b=b, c=c, d=detK)


def wahba_loss(A, obs: ObservationSet) -> float:
    """Weighted half sum of squared residuals ``|b_i - A r_i|^2``."""
    A = np.asarray(A, dtype=float)
    if frobenius(A.T @ A - np.eye(3)) > ORTHO_TOL:
        raise NonOrthogonalAttitude("attitude matrix is not orthogonal within 1e-10")
    total = 0.0
    for o in obs:
        r = o.body - A @ o.reference
        total += o.weight * float(r @ r)
    return 0.5 * total
