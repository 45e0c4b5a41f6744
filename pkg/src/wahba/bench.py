"""Monte Carlo reproduction of the twelve-case attitude error study.

Each trial draws its noise from an independent counter-based stream keyed by
``(base_seed, trial_index)``, so results do not depend on the order or the
process in which trials run. The same seeds are reused across cases and
solvers, which makes solver columns directly comparable.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import WahbaError
from .linalg import frobenius
from .problem import Observation, ObservationSet, normalize, weights_from_sigmas
from .solvers import get_solver

DEFAULT_TRIALS = 4000
DEFAULT_SEED = 42
DEFAULT_SOLVERS = ("analytic", "quest", "davenport")
DEFAULT_WEIGHTING = "equal"
PAPER_FLAG_TOL = 0.10

_TRUE_ATTITUDE = (
    (0.352, 0.864, 0.360),
    (-0.864, 0.152, 0.480),
    (0.360, -0.480, 0.800),
)


@dataclass(frozen=True)
class BenchmarkCase:
    id: int
    references: tuple[tuple[float, float, float], ...]
    sigmas: tuple[float, ...]
    paper_phi: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if len(self.references) != len(self.sigmas) or len(self.sigmas) not in (2, 3):
            raise ValueError(f"case {self.id}: need 2 or 3 references with matching sigmas")
        if any(not s > 0 for s in self.sigmas):
            raise ValueError(f"case {self.id}: sigmas must be positive")

    def unit_references(self) -> np.ndarray:
        return np.array([normalize(r) for r in self.references])


@dataclass(frozen=True)
class TrialSeed:
    base: int
    index: int

    def rng(self) -> np.random.Generator:
        return np.random.default_rng(np.random.SeedSequence([self.base, self.index]))


@dataclass(frozen=True)
class CaseStats:
    case: int
    solver: str
    trials: int
    mean_phi_deg: float
    std_phi_deg: float
    mean_lambda: float
    failures: int
    # Wall time is never part of equality: everything else is reproducible.
    mean_time_ns: float = field(default=math.nan, compare=False)


def true_attitude() -> np.ndarray:
    """The true attitude matrix exactly as tabulated (three-decimal entries)."""
    return np.array(_TRUE_ATTITUDE)


def orthonormalize(A) -> np.ndarray:
    """Closest rotation matrix in the Frobenius sense (polar factor)."""
    U, _, Vt = np.linalg.svd(np.asarray(A, dtype=float))
    R = U @ Vt
    if np.linalg.det(R) < 0:
        U[:, -1] = -U[:, -1]
        R = U @ Vt
    return R


def reference_attitude() -> np.ndarray:
    return orthonormalize(true_attitude())


# (analytic, quest, davenport) mean phi in degrees as tabulated.
_PAPER_PHI = {
    1: (6.495694956077782e-05, 6.495694956097059e-05, 6.49569495609e-05),
    2: (8.324164015961696e-05, 8.324223749065883e-05, 8.32422374907e-05),
    3: (0.649531332307863, 0.649531332307864, 0.649531332307864),
    4: (0.832408546987256, 0.832408547860284, 0.832408547860284),
    5: (0.557528700788137, 0.557528701877667, 0.557528701877667),
    6: (6.495694956077782e-05, 6.495694956097059e-05, 6.49569495609e-05),
    7: (8.324164015961696e-05, 8.324223749065883e-05, 8.32422374907e-05),
    8: (0.649531332307863, 0.649531332307864, 0.649531332307864),
    9: (0.832408546987256, 0.832408547860284, 0.832408547860284),
    10: (1.371174492955960, 1.371174492966333, 1.371174492966333),
    11: (1.685838524732360, 1.685841533993944, 1.685841533993952),
    12: (1.670635461315306, 1.670644941845449, 1.670644941845431),
}

_E1, _E2, _E3 = (1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0)
_CASES = {
    1: ((_E1, _E2, _E3), (1e-6, 1e-6, 1e-6)),
    2: ((_E1, _E2), (1e-6, 1e-6)),
    3: ((_E1, _E2, _E3), (0.01, 0.01, 0.01)),
    4: ((_E1, _E2), (0.01, 0.01)),
    5: (((0.6, 0.8, 0.0), (0.8, -0.6, 0.0)), (1e-6, 0.01)),
    6: ((_E1, (0.0, 0.01, 0.0), (0.0, 0.0, 0.01)), (1e-6, 1e-6, 1e-6)),
    7: ((_E1, (1.0, 0.01, 0.0)), (1e-6, 1e-6)),
    8: ((_E1, (1.0, 0.01, 0.0), (1.0, 0.0, 0.01)), (0.01, 0.01, 0.01)),
    9: ((_E1, (1.0, 0.01, 0.0)), (0.01, 0.01)),
    10: ((_E1, (0.96, 0.28, 0.0), (0.96, 0.0, 0.28)), (1e-6, 0.01, 0.01)),
    11: ((_E1, (0.96, 0.28, 0.0)), (1e-6, 0.01)),
    12: ((_E1, (0.96, 0.28, 0.0)), (0.01, 1e-6)),
}


def case_table() -> list[BenchmarkCase]:
    """All twelve simulation cases, vectors as tabulated (not yet normalized)."""
    return [
        BenchmarkCase(
            id=cid,
            references=refs,
            sigmas=sigmas,
            paper_phi=dict(zip(DEFAULT_SOLVERS, _PAPER_PHI[cid])),
        )
        for cid, (refs, sigmas) in _CASES.items()
    ]


def get_case(case_id: int) -> BenchmarkCase:
    for case in case_table():
        if case.id == case_id:
            return case
    raise ValueError(f"no benchmark case {case_id}; valid ids are 1-12")


def sample_measurement(
    case: BenchmarkCase,
    A,
    seed: TrialSeed,
    weighting: str = DEFAULT_WEIGHTING,
) -> ObservationSet:
    """Noisy body vectors ``b_i = normalize(A r_i + n_i)`` with ``n_i ~ N(0, sigma_i^2 I)``."""
    refs = case.unit_references()
    sigmas = np.asarray(case.sigmas)
    noise = seed.rng().standard_normal(refs.shape) * sigmas[:, None]
    bodies = refs @ np.asarray(A, dtype=float).T + noise
    weights = weights_from_sigmas(case.sigmas, weighting)
    return ObservationSet(
        tuple(Observation(r, normalize(b), w) for r, b, w in zip(refs, bodies, weights))
    )


def attitude_error(Ae, A) -> float:
    """Rotation angle between two attitude matrices, in degrees."""
    dist = frobenius(np.asarray(Ae, dtype=float) - np.asarray(A, dtype=float))
    return math.degrees(2.0 * math.asin(min(1.0, dist / math.sqrt(8.0))))


def _run_trials(
    case: BenchmarkCase,
    solver: str,
    indices: Sequence[int],
    base_seed: int,
    weighting: str,
) -> list[tuple[float, float, int, bool]]:
    """(phi_deg, lambda_max, wall_time_ns, failed) for each trial index."""
    solve = get_solver(solver)
    A = reference_attitude()
    out = []
    for idx in indices:
        obs = sample_measurement(case, A, TrialSeed(base_seed, idx), weighting)
        try:
            report = solve(obs)
        except WahbaError as exc:
            partial = getattr(exc, "report", None)
            lam = partial.lambda_max if partial is not None else math.nan
            out.append((math.nan, lam, 0, True))
            continue
        if report.ambiguous:
            out.append((math.nan, report.lambda_max, report.wall_time_ns, True))
            continue
        out.append((attitude_error(report.attitude, A), report.lambda_max, report.wall_time_ns, False))
    return out


def _chunks(n: int, parts: int) -> list[range]:
    step = max(1, math.ceil(n / parts))
    return [range(i, min(n, i + step)) for i in range(0, n, step)]


def run_case(
    case: BenchmarkCase,
    solver: str,
    trials: int = DEFAULT_TRIALS,
    base_seed: int = DEFAULT_SEED,
    weighting: str = DEFAULT_WEIGHTING,
    workers: int = 1,
) -> CaseStats:
    """Run ``trials`` noisy solves of one case and aggregate the errors.

    Trials whose solve raises or comes back ambiguous (a repeated largest
    eigenvalue, so the attitude is not unique) count as failures and are
    excluded from the means. With ``workers > 1`` trials are
    spread over processes; results are gathered back in trial order, so the
    statistics are bit-identical to a serial run.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    get_solver(solver)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [
                pool.submit(_run_trials, case, solver, chunk, base_seed, weighting)
                for chunk in _chunks(trials, workers * 4)
            ]
            rows = [row for fut in futures for row in fut.result()]
    else:
        rows = _run_trials(case, solver, range(trials), base_seed, weighting)

    ok = [r for r in rows if not r[3]]
    failures = len(rows) - len(ok)
    if ok:
        phi = np.array([r[0] for r in ok])
        lam = np.array([r[1] for r in ok])
        times = np.array([r[2] for r in ok], dtype=float)
        mean_phi = float(np.mean(phi))
        std_phi = float(np.std(phi, ddof=1)) if len(ok) > 1 else 0.0
        mean_lambda = float(np.mean(lam))
        mean_time = float(np.mean(times))
    else:
        mean_phi = std_phi = mean_lambda = mean_time = math.nan
    return CaseStats(case.id, solver, trials, mean_phi, std_phi, mean_lambda, failures, mean_time)


@dataclass(frozen=True)
class BenchmarkReport:
    stats: list[CaseStats]
    trials: int
    base_seed: int
    weighting: str

    def solver_times(self) -> dict[str, float]:
        """Mean per-solve wall time (ns) for each solver, averaged over cases."""
        out: dict[str, list[float]] = {}
        for s in self.stats:
            out.setdefault(s.solver, []).append(s.mean_time_ns)
        return {k: float(np.nanmean(v)) for k, v in out.items()}

    def get(self, case: int, solver: str) -> CaseStats:
        for s in self.stats:
            if s.case == case and s.solver == solver:
                return s
        raise KeyError((case, solver))


def paper_comparison(stats: CaseStats) -> tuple[float, float, bool]:
    """(tabulated mean, relative difference, flagged) for a stats row."""
    paper = _PAPER_PHI.get(stats.case)
    if paper is None or stats.solver not in DEFAULT_SOLVERS:
        return math.nan, math.nan, False
    ref = paper[DEFAULT_SOLVERS.index(stats.solver)]
    rel = (stats.mean_phi_deg - ref) / ref
    return ref, rel, not abs(rel) <= PAPER_FLAG_TOL


def run_all(
    trials: int = DEFAULT_TRIALS,
    base_seed: int = DEFAULT_SEED,
    solvers: Sequence[str] = DEFAULT_SOLVERS,
    cases: Sequence[int] | None = None,
    weighting: str = DEFAULT_WEIGHTING,
    workers: int = 1,
) -> BenchmarkReport:
    if not solvers:
        raise ValueError("at least one solver is required")
    selected = case_table() if cases is None else [get_case(c) for c in cases]
    stats = [
        run_case(case, solver, trials, base_seed, weighting, workers)
        for case in selected
        for solver in solvers
    ]
    return BenchmarkReport(stats, trials, base_seed, weighting)

