"""Attitude determination from vector observations via a closed-form quartic solve."""

from .errors import (
    ConstraintViolation,
    DegenerateEigenvector,
    EmptyObservationSet,
    InvalidObservation,
    NegativeRadicand,
    NonConvergence,
    NonOrthogonalAttitude,
    NoRealRoot,
    WahbaError,
    ZeroDerivative,
)
from .problem import (
    AttitudeProfile,
    Observation,
    ObservationSet,
    QuarticCoeffs,
    build_k_matrix,
    build_profile,
    quartic_coefficients,
    wahba_loss,
    weights_from_sigmas,
)
from .quartic import quartic_roots, max_real_root
from .solvers import (
    NewtonConfig,
    Quaternion,
    SolverReport,
    extract_quaternion,
    newton_max_root,
    quaternion_to_matrix,
    solve_analytic,
    solve_davenport,
    solve_quest_newton,
)

__version__ = "0.1.0"
