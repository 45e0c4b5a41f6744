"""Wahba solvers: closed-form quartic, QUEST-style Newton, and Davenport's q-method.

All three share the K-matrix construction and return a :class:`SolverReport`.
Quaternions are stored vector-first, scalar-last, matching the block layout
of K (``z`` in the last column, ``tr B`` in the corner).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

import numpy as np

from .errors import DegenerateEigenvector, NonConvergence, ZeroDerivative
from .linalg import det4_adjugate4, frobenius, jacobi_eigen_sym4
from .problem import (
    ObservationSet,
    QuarticCoeffs,
    build_k_matrix,
    build_profile,
    quartic_coefficients,
)
from .quartic import cubic_real_roots, depressed_cubic, max_real_root, quartic_roots

AMBIGUITY_TOL = 1e-9
# Rounding-error bound factor for degree-4 Horner evaluation (2n * u, u = eps/2).
_HORNER_ERR = 4.0 * 2.220446049250313e-16
DEGENERACY_TOL = 1e-12
# Below this (relative to the leading column) a second adjugate column is noise.
_RITZ_TOL = 1e-14


@dataclass(frozen=True)
class Quaternion:
    vector: np.ndarray
    scalar: float

    @classmethod
    def from_array(cls, q) -> "Quaternion":
        """Normalize a 4-array ``[x, y, z, w]`` and flip it so ``w >= 0``."""
        q = np.asarray(q, dtype=float)
        q = q / math.sqrt(float(q @ q))
        if q[3] < 0.0:
            q = -q
        return cls(vector=q[:3].copy(), scalar=float(q[3]))

    def as_array(self) -> np.ndarray:
        return np.append(self.vector, self.scalar)

    @property
    def norm(self) -> float:
        return math.sqrt(float(self.vector @ self.vector) + self.scalar**2)


IDENTITY = Quaternion(np.zeros(3), 1.0)


def quaternion_to_matrix(qn: Quaternion) -> np.ndarray:
    """Attitude matrix ``A`` with ``A @ r ~= b`` for the K-matrix eigenvector ``qn``."""
    x, y, z = qn.vector.tolist()
    w = qn.scalar
    return np.array(
        [
            [w * w + x * x - y * y - z * z, 2.0 * (x * y + w * z), 2.0 * (x * z - w * y)],
            [2.0 * (x * y - w * z), w * w - x * x + y * y - z * z, 2.0 * (y * z + w * x)],
            [2.0 * (x * z + w * y), 2.0 * (y * z - w * x), w * w - x * x - y * y + z * z],
        ]
    )


def extract_quaternion(k, lam: float) -> Quaternion:
    """Eigenvector of ``k`` for eigenvalue ``lam`` from the adjugate of ``lam I - k``.

    When ``lam`` is exact and simple, ``adj(lam I - k)`` is a rank-one
    multiple of ``q q^T`` and its largest column is ``q``. An error ``e`` in
    ``lam`` mixes in the next eigenvector with relative weight ``e / gap``;
    applying the adjugate once more to that column squares the ratio, which
    matters when the two largest eigenvalues are close.

    Raises:
        DegenerateEigenvector: every column is numerically zero, i.e. ``lam``
            is repeated and the attitude is not unique.
    """
    M = lam * np.eye(4) - np.asarray(k, dtype=float)
    _, adj = det4_adjugate4(M)
    norms = np.sqrt((adj * adj).sum(axis=0))
    j = int(np.argmax(norms))
    scale = frobenius(M) ** 3
    if not norms[j] > DEGENERACY_TOL * scale:
        raise DegenerateEigenvector(
            f"adjugate of (lambda I - K) vanishes (max column {norms[j]:.3e}); "
            "largest eigenvalue is repeated"
        )
    col = adj[:, j] / norms[j]
    return Quaternion.from_array(adj @ col)


def _orthonormal_columns(V: np.ndarray) -> np.ndarray:
    """Gram-Schmidt with reorthogonalization; drops columns that vanish."""
    ref = float(np.sqrt((V * V).sum(axis=0)).max())
    cols = []
    for v in V.T:
        for _ in range(2):
            for u in cols:
                v = v - u * (u @ v)
        n = math.sqrt(float(v @ v))
        if n > _RITZ_TOL * ref:
            cols.append(v / n)
    return np.column_stack(cols)


def refine_eigenpair(
    k, lam: float, others: Sequence[float] = ()
) -> tuple[float, Quaternion, float | None]:
    """Rayleigh-Ritz correction of a polynomial root and its eigenvector.

    A root of the characteristic polynomial is only good to about
    ``sqrt(eps)`` when the two largest eigenvalues nearly coincide, and the
    single adjugate column is then an arbitrary mix of both eigenvectors.
    Near the top of the spectrum the adjugate's range is, to working
    precision, the span of those two eigenvectors, so the largest Ritz value
    of ``k`` on a two-column basis of that range recovers ``lambda_max`` at
    rounding level.

    The adjugate itself carries rounding of order ``eps * ||K||^3`` against a
    size of order ``gap * ||K||^2``, so its range leaks the two bottom
    eigenvectors at about ``eps / gap``. Given the other roots of the
    polynomial in ``others``, the basis is filtered with
    ``(K - l3 I)(K - l4 I)``, built from the two smallest, which removes them
    using only products with ``K``. Without them the basis goes through the
    adjugate once more, as in :func:`extract_quaternion`. Fixed cost, no
    iteration.

    Returns:
        (lambda_max, quaternion, second) where ``second`` is the smaller Ritz
        value, an estimate of the next eigenvalue that stays accurate when the
        polynomial roots are not, or None when the basis has one column.

    Raises:
        DegenerateEigenvector: as for :func:`extract_quaternion`.
    """
    k = np.asarray(k, dtype=float)
    M = lam * np.eye(4) - k
    _, adj = det4_adjugate4(M)
    norms = np.sqrt((adj * adj).sum(axis=0))
    j = int(np.argmax(norms))
    if not norms[j] > DEGENERACY_TOL * frobenius(M) ** 3:
        raise DegenerateEigenvector(
            f"adjugate of (lambda I - K) vanishes (max column {norms[j]:.3e}); "
            "largest eigenvalue is repeated"
        )
    basis = [adj[:, j] / norms[j]]
    rest = adj - np.outer(basis[0], basis[0] @ adj)
    rnorms = np.sqrt((rest * rest).sum(axis=0))
    i = int(np.argmax(rnorms))
    if rnorms[i] > _RITZ_TOL * norms[j]:
        basis.append(rest[:, i] / rnorms[i])
    V = np.column_stack(basis)
    if len(others) >= 2:
        l4, l3 = sorted(others)[:2]
        KV = k @ V - l3 * V
        V = k @ KV - l4 * KV
    else:
        V = adj @ V
    U = _orthonormal_columns(V)
    H = U.T @ k @ U
    if H.shape == (1, 1):
        return float(H[0, 0]), Quaternion.from_array(U[:, 0]), None
    h11, h12, h22 = H[0, 0], 0.5 * (H[0, 1] + H[1, 0]), H[1, 1]
    half = 0.5 * (h11 - h22)
    radius = math.hypot(half, h12)
    mu = 0.5 * (h11 + h22) + radius
    v1 = np.array([mu - h22, h12])
    v2 = np.array([h12, mu - h11])
    v = v1 if v1 @ v1 >= v2 @ v2 else v2
    if not v @ v > 0.0:
        v = np.array([1.0, 0.0])
    second = mu - 2.0 * radius if len(others) >= 2 else None
    return float(mu), Quaternion.from_array(U @ v), second


@dataclass(frozen=True)
class NewtonConfig:
    x0: float | None = None
    tol: float = 1e-13
    max_iterations: int = 100

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("Newton tolerance must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")


def newton_max_root(
    qc: QuarticCoeffs, cfg: NewtonConfig = NewtonConfig(), trace: list | None = None
) -> tuple[float, int]:
    """Newton iteration on the monic quartic starting from ``cfg.x0``.

    Stops when a step is below ``tol * max(1, |x|)`` or when ``|p(x)|`` is
    within the rounding error of its own Horner evaluation, past which the
    steps are noise; the latter is what ends the slow crawl into a double
    root. If ``trace`` is given, every iterate (starting with ``x0``) is
    appended to it.

    Returns:
        (root, iterations)
    """
    x = 1.0 if cfg.x0 is None else float(cfg.x0)
    if trace is not None:
        trace.append(x)
    for it in range(cfg.max_iterations):
        px = qc(x)
        ax = abs(x)
        bound = _HORNER_ERR * ((((ax + abs(qc.a)) * ax + abs(qc.b)) * ax + abs(qc.c)) * ax + abs(qc.d))
        if abs(px) <= bound:
            return x, it
        dpx = qc.derivative(x)
        if abs(dpx) <= 1e-300:
            raise ZeroDerivative(f"p'(x) vanishes at x={x!r}")
        step = px / dpx
        x -= step
        if trace is not None:
            trace.append(x)
        if abs(step) <= cfg.tol * max(1.0, abs(x)):
            return x, it + 1
    raise NonConvergence(
        f"Newton did not converge in {cfg.max_iterations} iterations",
        best=x,
        iterations=cfg.max_iterations,
    )


def deflated_roots(qc: QuarticCoeffs, root: float) -> list[float]:
    """Real roots of the cubic ``p(x) / (x - root)``, largest first."""
    e2 = qc.a + root
    e1 = qc.b + root * e2
    e0 = qc.c + root * e1
    shift = e2 / 3.0
    p = e1 - e2 * e2 / 3.0
    q = 2.0 * e2**3 / 27.0 - e2 * e1 / 3.0 + e0
    return [y - shift for y in cubic_real_roots(depressed_cubic(p, q))]


def deflated_max_root(qc: QuarticCoeffs, root: float) -> float:
    """Largest real root of ``p(x) / (x - root)``."""
    return deflated_roots(qc, root)[0]


@dataclass(frozen=True)
class SolverReport:
    solver: str
    lambda_max: float
    quaternion: Quaternion | None
    attitude: np.ndarray | None
    loss: float
    iterations: int
    eigenvalue_gap: float
    ambiguous: bool
    wall_time_ns: int
    diagnostics: dict = field(default_factory=dict)


def _finish(
    solver: str,
    obs: ObservationSet,
    K: np.ndarray,
    lam: float,
    second: float,
    iterations: int,
    t0: int,
    quaternion: Quaternion | None = None,
    diagnostics: dict | None = None,
    others: Sequence[float] = (),
) -> SolverReport:
    report = SolverReport(
        solver=solver,
        lambda_max=lam,
        quaternion=None,
        attitude=None,
        loss=obs.total_weight - lam,
        iterations=iterations,
        eigenvalue_gap=lam - second,
        ambiguous=_ambiguous(lam, second),
        wall_time_ns=0,
        diagnostics=diagnostics or {},
    )
    if quaternion is None:
        try:
            lam, quaternion, ritz_second = refine_eigenpair(K, lam, others)
        except DegenerateEigenvector as exc:
            exc.report = replace(
                report, ambiguous=True, wall_time_ns=time.perf_counter_ns() - t0
            )
            raise
        if ritz_second is not None:
            second = ritz_second
    elapsed = time.perf_counter_ns() - t0
    return replace(
        report,
        lambda_max=lam,
        loss=obs.total_weight - lam,
        eigenvalue_gap=lam - second,
        ambiguous=_ambiguous(lam, second),
        quaternion=quaternion,
        attitude=quaternion_to_matrix(quaternion),
        wall_time_ns=elapsed,
    )


def _ambiguous(lam: float, second: float) -> bool:
    return lam - second < AMBIGUITY_TOL * max(1.0, lam)


def solve_analytic(obs: ObservationSet) -> SolverReport:
    """Closed-form solve: characteristic quartic, resolvent cubic, factor pair."""
    profile = build_profile(obs)
    K = build_k_matrix(profile)
    t0 = time.perf_counter_ns()
    qc = quartic_coefficients(profile, K)
    rs = quartic_roots(qc)
    lam = max_real_root(rs)
    rest = list(rs.roots)
    rest.remove(lam)
    second = max(rest) if rest else -math.inf
    return _finish(
        "analytic",
        obs,
        K,
        lam,
        second,
        0,
        t0,
        diagnostics={"coefficients": qc, "roots": rs.roots, "resolvent_root": rs.resolvent_root},
        others=rest,
    )


def solve_quest_newton(obs: ObservationSet, cfg: NewtonConfig | None = None) -> SolverReport:
    """QUEST-style solve: Newton on the characteristic quartic from ``x0 = sum(a_i)``."""
    profile = build_profile(obs)
    K = build_k_matrix(profile)
    if cfg is None or cfg.x0 is None:
        cfg = replace(cfg or NewtonConfig(), x0=obs.total_weight)
    t0 = time.perf_counter_ns()
    qc = quartic_coefficients(profile, K)
    lam, iterations = newton_max_root(qc, cfg)
    rest = deflated_roots(qc, lam)
    return _finish(
        "quest",
        obs,
        K,
        lam,
        rest[0],
        iterations,
        t0,
        diagnostics={"coefficients": qc},
        others=rest,
    )


def solve_davenport(obs: ObservationSet) -> SolverReport:
    """Davenport's q-method: full Jacobi eigendecomposition of K."""
    profile = build_profile(obs)
    K = build_k_matrix(profile)
    t0 = time.perf_counter_ns()
    eig = jacobi_eigen_sym4(K)
    lam = float(eig.values[0])
    return _finish(
        "davenport",
        obs,
        K,
        lam,
        float(eig.values[1]),
        eig.sweeps,
        t0,
        quaternion=Quaternion.from_array(eig.vectors[:, 0]),
        diagnostics={"eigenvalues": tuple(eig.values.tolist())},
    )


SOLVERS: dict[str, Callable[[ObservationSet], SolverReport]] = {
    "analytic": solve_analytic,
    "quest": solve_quest_newton,
    "davenport": solve_davenport,
}


def get_solver(name: str) -> Callable[[ObservationSet], SolverReport]:
    try:
        return SOLVERS[name]
    except KeyError:
        raise ValueError(f"unknown solver {name!r}; choose from {sorted(SOLVERS)}") from None
