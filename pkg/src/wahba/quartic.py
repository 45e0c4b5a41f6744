"""Closed-form quartic roots through a depressed resolvent cubic.

The quartic ``x^4 + a x^3 + b x^2 + c x + d`` is split into two quadratics
``(x^2 + g1 x + h1)(x^2 + g2 x + h2)``. The split is parameterized by a real
root ``y`` of the resolvent ``y^3 + p y + q``, which has no quadratic term,
so its roots come straight from Cardano's formula or, when all three are
real, from the trigonometric form. No iteration is involved anywhere.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import ConstraintViolation, NegativeRadicand, NoRealRoot, WahbaError
from .problem import QuarticCoeffs

DELTA_CLAMP = 1e-14
RADICAND_CLAMP = 1e-10
FACTOR_TOL = 1e-9

_TWO_PI_3 = 2.0 * math.pi / 3.0
_TINY = 1e-300


class CubicBranch(enum.Enum):
    ONE_REAL = "one_real"
    REPEATED = "repeated"
    THREE_REAL = "three_real"


@dataclass(frozen=True)
class ResolventCubic:
    p: float
    q: float
    delta: float
    branch: CubicBranch


@dataclass(frozen=True)
class FactorPair:
    g1: float
    g2: float
    h1: float
    h2: float

    def expand(self) -> QuarticCoeffs:
        g1, g2, h1, h2 = self.g1, self.g2, self.h1, self.h2
        return QuarticCoeffs(g1 + g2, g1 * g2 + h1 + h2, g1 * h2 + g2 * h1, h1 * h2)


@dataclass(frozen=True)
class RootSet:
    """Real roots of a quartic, largest first, repeated roots listed twice.

    ``complex_pair[k]`` is True when quadratic factor ``k`` had a negative
    discriminant and its conjugate pair was dropped.
    """

    roots: tuple[float, ...]
    complex_pair: tuple[bool, bool]
    resolvent_root: float
    factors: FactorPair

    def __len__(self) -> int:
        return len(self.roots)

    def __iter__(self):
        return iter(self.roots)


def cbrt(x: float) -> float:
    """Real cube root that keeps the sign of ``x``."""
    return math.copysign(abs(x) ** (1.0 / 3.0), x)


def classify(p: float, q: float, delta: float) -> CubicBranch:
    scale = max((q / 2.0) ** 2, abs(p / 3.0) ** 3)
    if abs(delta) <= DELTA_CLAMP * scale:
        return CubicBranch.REPEATED
    return CubicBranch.ONE_REAL if delta > 0 else CubicBranch.THREE_REAL


def depressed_cubic(p: float, q: float) -> ResolventCubic:
    delta = (q / 2.0) ** 2 + (p / 3.0) ** 3
    return ResolventCubic(p, q, delta, classify(p, q, delta))


def resolvent_cubic(qc: QuarticCoeffs) -> ResolventCubic:
    a, b, c, d = qc
    p = a * c - b * b / 3.0 - 4.0 * d
    q = a * b * c / 3.0 - a * a * d - 2.0 * b**3 / 27.0 - c * c + 8.0 * b * d / 3.0
    return depressed_cubic(p, q)


def cubic_real_roots(rc: ResolventCubic) -> list[float]:
    """Real roots of ``y^3 + p y + q``, sorted descending."""
    p, q = rc.p, rc.q
    if rc.branch is CubicBranch.ONE_REAL:
        # Take the cube root of the larger-magnitude radical and recover the
        # other from u*v = -p/3 to avoid cancellation.
        half_q = -q / 2.0
        sq = math.sqrt(rc.delta)
        t = half_q + math.copysign(sq, half_q) if half_q != 0.0 else sq
        u = cbrt(t)
        v = -p / (3.0 * u) if u != 0.0 else 0.0
        return [u + v]
    if rc.branch is CubicBranch.REPEATED:
        s = cbrt(-q / 2.0)
        return sorted([2.0 * s, -s, -s], reverse=True)
    r = math.sqrt(-((p / 3.0) ** 3))
    arg = max(-1.0, min(1.0, -q / (2.0 * r)))
    theta = math.acos(arg) / 3.0
    m = 2.0 * cbrt(r)
    return sorted((m * math.cos(theta + k * _TWO_PI_3) for k in range(3)), reverse=True)


def _split_quadratic(total: float, product: float) -> tuple[float, float]:
    """Roots of ``h^2 - total h + product`` given a non-negative discriminant."""
    disc = total * total - 4.0 * product
    sq = math.sqrt(max(disc, 0.0))
    big = 0.5 * (total + math.copysign(sq, total))
    small = product / big if big != 0.0 else 0.5 * (total - math.copysign(sq, total))
    return big, small


def _assemble(qc: QuarticCoeffs, G: float, h_sum: float, hd: float) -> FactorPair:
    h1 = 0.5 * (h_sum + hd)
    h2 = 0.5 * (h_sum - hd)
    # Whichever of h1, h2 is smaller in magnitude is better taken from h1*h2 = d.
    if abs(h1) >= abs(h2) and h1 != 0.0:
        h2 = qc.d / h1
    elif h2 != 0.0:
        h1 = qc.d / h2
    return FactorPair(qc.a / 2.0 + G, qc.a / 2.0 - G, h1, h2)


def _factor_pair(qc: QuarticCoeffs, y: float) -> tuple[FactorPair, float]:
    a, b, c, d = qc
    eps = RADICAND_CLAMP * qc.scale

    g_rad = a * a / 4.0 - 2.0 * b / 3.0 + y
    if g_rad < -eps:
        raise NegativeRadicand(f"g radicand {g_rad:.3e} for y={y!r}")
    h_sum = y + b / 3.0
    h_rad = h_sum * h_sum - 4.0 * d
    if h_rad < -eps:
        raise NegativeRadicand(f"h radicand {h_rad:.3e} for y={y!r}")

    # g1,2 = a/2 +- G and h1,2 = (h_sum +- hd)/2, so the c-relation reads
    # a*h_sum/2 - G*hd = c. G >= 0 always; the sign of hd is the h ordering.
    G = math.sqrt(max(g_rad, 0.0))
    hd = math.sqrt(max(h_rad, 0.0))
    target = a * h_sum / 2.0 - c
    if abs(target - G * hd) > abs(target + G * hd):
        hd = -hd

    # A radicand that nearly cancels loses about half its digits under the
    # square root, so the c-relation may give a better G (or hd) than the
    # square root did. All three variants are tried; the residual decides.
    variants = [(G, hd)]
    if hd != 0.0:
        G_alt = target / hd
        variants.append((G_alt, hd) if G_alt >= 0.0 else (-G_alt, -hd))
    if G != 0.0:
        variants.append((G, target / G))
    best: tuple[FactorPair, float] | None = None
    for Gv, hdv in variants:
        fp = _assemble(qc, Gv, h_sum, hdv)
        err = max(abs(x - y0) for x, y0 in zip(fp.expand(), qc))
        if best is None or err < best[1]:
            best = (fp, err)
    return best


def factor_pairs(qc: QuarticCoeffs, y: float) -> FactorPair:
    """Quadratic-factor coefficients for one real resolvent root ``y``.

    ``g1`` takes the positive square root and ``h1``/``h2`` are ordered so
    that ``g1*h2 + g2*h1 = c``.

    Raises:
        NegativeRadicand: ``y`` does not give real ``g`` or ``h`` values.
        ConstraintViolation: the factors do not reproduce ``(a, b, c, d)``.
    """
    fp, err = _factor_pair(qc, y)
    if err > FACTOR_TOL * qc.scale:
        raise ConstraintViolation(f"factor pair misses coefficients by {err:.3e} for y={y!r}")
    return fp


def _quadratic_real_roots(g: float, h: float, eps: float) -> tuple[list[float], bool]:
    disc = g * g - 4.0 * h
    if disc < -eps:
        return [], True
    if disc <= 0.0:
        # Double root, or a conjugate pair within rounding of the real axis.
        return [-0.5 * g, -0.5 * g], False
    sq = math.sqrt(disc)
    x1 = 0.5 * (-g - math.copysign(sq, g))
    x2 = h / x1 if x1 != 0.0 else 0.5 * (-g + math.copysign(sq, g))
    return [x1, x2], False


def depress(qc: QuarticCoeffs) -> tuple[QuarticCoeffs, float]:
    """Taylor-shift ``p(t + s)`` with ``s = -a/4``, which removes the cubic term."""
    s = -qc.a / 4.0
    if s == 0.0:
        return qc, 0.0
    # Repeated synthetic division by (x - s) yields p(s), p'(s), p''(s)/2, ...
    coeffs = [1.0, qc.a, qc.b, qc.c, qc.d]
    shifted = []
    for n in range(4, 0, -1):
        acc = coeffs[0]
        quotient = [acc]
        for cf in coeffs[1 : n + 1]:
            acc = acc * s + cf
            quotient.append(acc)
        shifted.append(quotient[-1])
        coeffs = quotient[:-1]
    d, c, b, _ = shifted
    return QuarticCoeffs(0.0, b, c, d), s


def _shift_factors(fp: FactorPair, s: float) -> FactorPair:
    """Factors in ``t`` rewritten for ``x = t + s``."""
    return FactorPair(
        fp.g1 - 2.0 * s,
        fp.g2 - 2.0 * s,
        fp.h1 + s * (s - fp.g1),
        fp.h2 + s * (s - fp.g2),
    )


def quartic_roots(qc: QuarticCoeffs) -> RootSet:
    """All real roots of the quartic, computed in closed form.

    A nonzero cubic coefficient is shifted away first, so the split always
    works on a depressed quartic (characteristic polynomials of K already are
    depressed). Every real resolvent root is turned into a factor pair and
    the pair that best reproduces the coefficients wins. Near a double
    resolvent root the trigonometric form loses about half the digits, so
    the isolated root is the one to trust. Roots with negative radicands are
    skipped.

    ``resolvent_root`` refers to the depressed quartic; ``factors`` are given
    in the original variable.
    """
    original = qc
    qc, shift = depress(qc)
    candidates = cubic_real_roots(resolvent_cubic(qc))
    best: tuple[float, float, FactorPair] | None = None
    first_error: WahbaError | None = None
    for y in candidates:
        try:
            fp, resid = _factor_pair(qc, y)
        except NegativeRadicand as exc:
            first_error = first_error or exc
            continue
        if best is None or resid < best[0]:
            best = (resid, y, fp)
    if best is None:
        assert first_error is not None
        raise first_error
    _, y, fp = best
    eps = RADICAND_CLAMP * qc.scale
    r1, cplx1 = _quadratic_real_roots(fp.g1, fp.h1, eps)
    r2, cplx2 = _quadratic_real_roots(fp.g2, fp.h2, eps)
    roots = sorted((x + shift for x in r1 + r2), reverse=True)
    if not roots:
        raise NoRealRoot(f"quartic {tuple(original)} has no real roots")
    if shift != 0.0:
        fp = _shift_factors(fp, shift)
    return RootSet(tuple(roots), (cplx1, cplx2), y, fp)


def max_real_root(rs: RootSet) -> float:
    if not rs.roots:
        raise NoRealRoot("root set is empty")
    return max(rs.roots)
