"""Fixed-size real linear algebra for 3-vectors, 3x3 and 4x4 matrices.

Everything here works on small numpy arrays but unpacks them into Python
floats internally: at these sizes explicit cofactor formulas are both exact
in form and much cheaper than the general-purpose numpy.linalg routines.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NonConvergence

DEFAULT_JACOBI_TOL = 1e-14
DEFAULT_MAX_SWEEPS = 50


@dataclass(frozen=True)
class EigenDecomp4:
    """Eigenpairs of a symmetric 4x4 matrix.

    ``values`` are sorted in descending order and ``vectors[:, k]`` is the
    unit eigenvector belonging to ``values[k]``.
    """

    values: np.ndarray
    vectors: np.ndarray
    sweeps: int = 0


def det3(m) -> float:
    (a, b, c), (d, e, f), (g, h, i) = np.asarray(m, dtype=float).tolist()
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)


def adjugate3(m) -> np.ndarray:
    """Transpose of the cofactor matrix, so that ``m @ adj(m) == det(m) I``."""
    (a, b, c), (d, e, f), (g, h, i) = np.asarray(m, dtype=float).tolist()
    return np.array(
        [
            [e * i - f * h, c * h - b * i, b * f - c * e],
            [f * g - d * i, a * i - c * g, c * d - a * f],
            [d * h - e * g, b * g - a * h, a * e - b * d],
        ]
    )


def det4_adjugate4(m) -> tuple[float, np.ndarray]:
    """Determinant and adjugate of a 4x4 matrix by cofactor expansion.

    The 2x2 minors of the top and bottom row pairs are shared between the
    determinant and all sixteen cofactors.
    """
    (
        (a00, a01, a02, a03),
        (a10, a11, a12, a13),
        (a20, a21, a22, a23),
        (a30, a31, a32, a33),
    ) = np.asarray(m, dtype=float).tolist()

    s0 = a00 * a11 - a10 * a01
    s1 = a00 * a12 - a10 * a02
    s2 = a00 * a13 - a10 * a03
    s3 = a01 * a12 - a11 * a02
    s4 = a01 * a13 - a11 * a03
    s5 = a02 * a13 - a12 * a03

    c5 = a22 * a33 - a32 * a23
    c4 = a21 * a33 - a31 * a23
    c3 = a21 * a32 - a31 * a22
    c2 = a20 * a33 - a30 * a23
    c1 = a20 * a32 - a30 * a22
    c0 = a20 * a31 - a30 * a21

    det = s0 * c5 - s1 * c4 + s2 * c3 + s3 * c2 - s4 * c1 + s5 * c0
    adj = np.array(
        [
            [
                a11 * c5 - a12 * c4 + a13 * c3,
                -a01 * c5 + a02 * c4 - a03 * c3,
                a31 * s5 - a32 * s4 + a33 * s3,
                -a21 * s5 + a22 * s4 - a23 * s3,
            ],
            [
                -a10 * c5 + a12 * c2 - a13 * c1,
                a00 * c5 - a02 * c2 + a03 * c1,
                -a30 * s5 + a32 * s2 - a33 * s1,
                a20 * s5 - a22 * s2 + a23 * s1,
            ],
            [
                a10 * c4 - a11 * c2 + a13 * c0,
                -a00 * c4 + a01 * c2 - a03 * c0,
                a30 * s4 - a31 * s2 + a33 * s0,
                -a20 * s4 + a21 * s2 - a23 * s0,
            ],
            [
                -a10 * c3 + a11 * c1 - a12 * c0,
                a00 * c3 - a01 * c1 + a02 * c0,
                -a30 * s3 + a31 * s1 - a32 * s0,
                a20 * s3 - a21 * s1 + a22 * s0,
            ],
        ]
    )
    return det, adj


def frobenius3(m) -> float:
    return math.sqrt(sum(x * x for row in np.asarray(m, dtype=float).tolist() for x in row))


def frobenius(m) -> float:
    return math.sqrt(sum(x * x for x in np.asarray(m, dtype=float).ravel().tolist()))


_PAIRS = ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3))


def jacobi_eigen_sym4(
    m, tol: float = DEFAULT_JACOBI_TOL, max_sweeps: int = DEFAULT_MAX_SWEEPS
) -> EigenDecomp4:
    """Cyclic Jacobi eigensolver for a symmetric 4x4 matrix.

    Args:
        m: symmetric 4x4 matrix (only the upper triangle is trusted).
        tol: stop once every off-diagonal magnitude is ``<= tol * ||m||_F``.
            One further sweep then rotates away whatever is left: the
            eigenvector error scales like the residual over the eigenvalue
            gap, and convergence is quadratic, so it costs a single sweep.
        max_sweeps: cap on full cyclic sweeps over the six off-diagonal pairs.

    Returns:
        EigenDecomp4 with eigenvalues sorted descending.

    Raises:
        NonConvergence: if ``max_sweeps`` sweeps do not reach ``tol``.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    a = np.asarray(m, dtype=float).tolist()
    for i in range(4):
        for j in range(i):
            a[i][j] = a[j][i]
    v = [[1.0 if i == j else 0.0 for j in range(4)] for i in range(4)]
    thresh = tol * math.sqrt(sum(x * x for row in a for x in row))

    sweeps = 0
    polished = False
    while True:
        off = max(abs(a[p][q]) for p, q in _PAIRS)
        if off <= thresh:
            if polished or off == 0.0:
                break
            polished = True
            skip = 0.0
        else:
            skip = thresh
        if sweeps >= max_sweeps:
            raise NonConvergence(
                f"Jacobi did not converge in {max_sweeps} sweeps (off-diagonal {off:.3e})",
                best=np.array(a),
                iterations=sweeps,
            )
        sweeps += 1
        for p, q in _PAIRS:
            apq = a[p][q]
            if abs(apq) <= skip:
                continue
            theta = (a[q][q] - a[p][p]) / (2.0 * apq)
            t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
            c = 1.0 / math.sqrt(t * t + 1.0)
            s = t * c
            for k in range(4):
                akp, akq = a[k][p], a[k][q]
                a[k][p] = c * akp - s * akq
                a[k][q] = s * akp + c * akq
            for k in range(4):
                apk, aqk = a[p][k], a[q][k]
                a[p][k] = c * apk - s * aqk
                a[q][k] = s * apk + c * aqk
            a[p][q] = a[q][p] = 0.0
            for k in range(4):
                vkp, vkq = v[k][p], v[k][q]
                v[k][p] = c * vkp - s * vkq
                v[k][q] = s * vkp + c * vkq

    order = sorted(range(4), key=lambda k: -a[k][k])
    values = np.array([a[k][k] for k in order])
    vectors = np.array([[v[i][k] for k in order] for i in range(4)])
    return EigenDecomp4(values=values, vectors=vectors, sweeps=sweeps)
