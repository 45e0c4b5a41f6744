import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from wahba import QuarticCoeffs, build_k_matrix, build_profile, quartic_coefficients
from wahba.errors import ConstraintViolation, NegativeRadicand, NoRealRoot
from wahba.linalg import jacobi_eigen_sym4
from wahba.quartic import (
    CubicBranch,
    RootSet,
    cubic_real_roots,
    depress,
    depressed_cubic,
    factor_pairs,
    max_real_root,
    quartic_roots,
    resolvent_cubic,
)

EPS = np.finfo(float).eps
SIMPLE = QuarticCoeffs(0.0, -2.0, 0.0, 1.0)
ESOQ = QuarticCoeffs(0.0, -0.666666666666667, -0.296296296294793, -0.037037037036536)

root_values = st.floats(-3.0, 3.0, allow_nan=False)


def from_roots(roots) -> QuarticCoeffs:
    coeffs = np.poly(roots)
    return QuarticCoeffs(*coeffs[1:])


def cubic_residual_ok(p, q, y):
    return abs(y**3 + p * y + q) <= 1e-10 * max(1.0, abs(p) ** 1.5, abs(q))


def test_resolvent_of_simple_quartic_is_repeated():
    rc = resolvent_cubic(SIMPLE)
    assert rc.p == pytest.approx(-16.0 / 3.0, abs=1e-15)
    assert rc.q == pytest.approx(-128.0 / 27.0, abs=1e-15)
    assert abs(rc.delta) <= 1e-12
    assert rc.branch is CubicBranch.REPEATED


def test_resolvent_of_x4_minus_x2():
    rc = resolvent_cubic(QuarticCoeffs(0.0, -1.0, 0.0, 0.0))
    assert rc.p == pytest.approx(-1.0 / 3.0, abs=1e-16)
    assert rc.q == pytest.approx(2.0 / 27.0, abs=1e-16)
    assert abs(rc.delta) <= 1e-16
    assert rc.branch is CubicBranch.REPEATED


@pytest.mark.parametrize(
    "p, q, expected",
    [
        (0.0, -8.0, [2.0]),
        (-16.0 / 3.0, -128.0 / 27.0, [8.0 / 3.0, -4.0 / 3.0, -4.0 / 3.0]),
        (-7.0, 6.0, [2.0, 1.0, -3.0]),
    ],
)
def test_cubic_real_roots_examples(p, q, expected):
    roots = cubic_real_roots(depressed_cubic(p, q))
    np.testing.assert_allclose(roots, expected, rtol=0, atol=1e-12)
    for y in roots:
        assert cubic_residual_ok(p, q, y)


def test_depress_removes_cubic_term():
    qc, s = depress(from_roots([1.0, 2.0, 3.0, 4.0]))
    assert s == 2.5
    assert qc.a == 0.0
    np.testing.assert_allclose(sorted(quartic_roots(qc).roots), [-1.5, -0.5, 0.5, 1.5], atol=1e-12)
    assert tuple(depress(QuarticCoeffs(4.0, 6.0, 4.0, 1.0))[0]) == (0.0, 0.0, 0.0, 0.0)


def test_cubic_branches():
    assert depressed_cubic(0.0, -8.0).branch is CubicBranch.ONE_REAL
    assert depressed_cubic(-7.0, 6.0).branch is CubicBranch.THREE_REAL
    assert depressed_cubic(0.0, 0.0).branch is CubicBranch.REPEATED
    assert cubic_real_roots(depressed_cubic(0.0, 0.0)) == [0.0, 0.0, 0.0]


@settings(max_examples=500)
@given(st.floats(-50.0, 50.0), st.floats(-50.0, 50.0))
def test_cubic_roots_satisfy_cubic(p, q):
    rc = depressed_cubic(p, q)
    roots = cubic_real_roots(rc)
    assert len(roots) in (1, 3)
    assert roots == sorted(roots, reverse=True)
    for y in roots:
        assert cubic_residual_ok(p, q, y)


@settings(max_examples=300)
@given(root_values, root_values, root_values)
def test_cubic_recovers_constructed_roots(r1, r2, r3):
    shift = (r1 + r2 + r3) / 3.0
    r = sorted([r1 - shift, r2 - shift, r3 - shift], reverse=True)
    p = r[0] * r[1] + r[0] * r[2] + r[1] * r[2]
    q = -r[0] * r[1] * r[2]
    roots = cubic_real_roots(depressed_cubic(p, q))
    for y in roots:
        assert cubic_residual_ok(p, q, y)
        # A root of multiplicity m is only determined to about eps^(1/m).
        assert min(abs(y - t) for t in r) <= 1e-5 * max(1.0, abs(r[0]))


@pytest.mark.parametrize(
    "qc, y, expected",
    [
        (SIMPLE, 8.0 / 3.0, (2.0, -2.0, 1.0, 1.0)),
        (QuarticCoeffs(0.0, -1.0, 0.0, 0.0), 1.0 / 3.0, (1.0, -1.0, 0.0, 0.0)),
        (SIMPLE, -4.0 / 3.0, (0.0, 0.0, -1.0, -1.0)),
    ],
)
def test_factor_pairs_examples(qc, y, expected):
    fp = factor_pairs(qc, y)
    np.testing.assert_allclose((fp.g1, fp.g2, fp.h1, fp.h2), expected, rtol=0, atol=1e-7)
    np.testing.assert_allclose(tuple(fp.expand()), tuple(qc), rtol=0, atol=1e-9 * qc.scale)


def test_factor_pairs_rejects_invalid_resolvent_root():
    with pytest.raises(NegativeRadicand):
        factor_pairs(SIMPLE, -10.0)
    with pytest.raises(ConstraintViolation):
        factor_pairs(QuarticCoeffs(0.0, -5.0, 1.0, 4.0), 10.0)


def test_quartic_roots_simple():
    rs = quartic_roots(SIMPLE)
    np.testing.assert_allclose(rs.roots, [1.0, 1.0, -1.0, -1.0], rtol=0, atol=1e-12)
    assert rs.complex_pair == (False, False)
    assert max_real_root(rs) == pytest.approx(1.0, abs=1e-12)


def test_quartic_roots_esoq_failure_case():
    rs = quartic_roots(ESOQ)
    assert abs(max_real_root(rs) - 0.999999999999155) <= 1e-9


def test_quartic_roots_x4_minus_x2():
    rs = quartic_roots(QuarticCoeffs(0.0, -1.0, 0.0, 0.0))
    np.testing.assert_allclose(rs.roots, [1.0, 0.0, 0.0, -1.0], rtol=0, atol=1e-12)
    assert max_real_root(rs) == 1.0


def test_quartic_roots_partial_and_no_real_roots():
    rs = quartic_roots(QuarticCoeffs(0.0, 0.0, 0.0, -1.0))
    np.testing.assert_allclose(rs.roots, [1.0, -1.0], atol=1e-12)
    assert sum(rs.complex_pair) == 1
    with pytest.raises(NoRealRoot):
        quartic_roots(QuarticCoeffs(0.0, 2.0, 0.0, 1.0))
    with pytest.raises(NoRealRoot):
        max_real_root(RootSet((), (True, True), 0.0, factor_pairs(SIMPLE, 8.0 / 3.0)))


def vieta_ok(qc, roots):
    x = roots
    s = qc.scale
    e1 = sum(x)
    e2 = sum(x[i] * x[j] for i in range(4) for j in range(i + 1, 4))
    e3 = sum(x[i] * x[j] * x[k] for i in range(4) for j in range(i + 1, 4) for k in range(j + 1, 4))
    e4 = x[0] * x[1] * x[2] * x[3]
    return (
        abs(e1 + qc.a) <= 1e-9 * s
        and abs(e2 - qc.b) <= 1e-8 * s
        and abs(e3 + qc.c) <= 1e-8 * s
        and abs(e4 - qc.d) <= 1e-8 * s
    )


@settings(max_examples=500)
@given(root_values, root_values, root_values, root_values)
def test_quartic_vieta_on_constructed_roots(r1, r2, r3, r4):
    qc = from_roots([r1, r2, r3, r4])
    try:
        rs = quartic_roots(qc)
    except NoRealRoot:
        # Rounding the coefficients of a clustered root can push every root
        # off the real axis; an independent root finder must agree.
        assert np.max(np.abs(np.roots([1.0, *qc]).imag)) > 0.0
        return
    assume(len(rs.roots) == 4)
    assert vieta_ok(qc, rs.roots)
    fp = rs.factors
    np.testing.assert_allclose(tuple(fp.expand()), tuple(qc), rtol=0, atol=1e-9 * qc.scale)


@settings(max_examples=300)
@given(root_values, root_values, root_values)
def test_quartic_depressed_constructed_roots_all_real(r1, r2, r3):
    # Trace-free like a K-matrix: the fourth root balances the other three.
    roots = [r1, r2, r3, -(r1 + r2 + r3)]
    qc = from_roots(roots)
    rs = quartic_roots(qc)
    assert len(rs.roots) == 4
    assert vieta_ok(qc, rs.roots)
    # A triple root is only determined to about eps^(1/3).
    scale = max(1.0, max(abs(r) for r in roots))
    assert abs(max(rs.roots) - max(roots)) <= 8.0 * EPS ** (1.0 / 3.0) * scale


def horner_bound(qc, lam):
    """First/second-order conditioning of a root under coefficient rounding."""
    x = abs(lam)
    H = (((x + abs(qc.a)) * x + abs(qc.b)) * x + abs(qc.c)) * x + abs(qc.d)
    d1 = abs(qc.derivative(lam))
    d2 = abs(12.0 * lam * lam + 6.0 * qc.a * lam + 2.0 * qc.b)
    return min(EPS * H / max(d1, 1e-300), math.sqrt(2.0 * EPS * H / max(d2, 1e-300)))


def test_kmatrix_quartics_match_jacobi_equal_weights(equal_corpus):
    for _, obs in equal_corpus:
        p = build_profile(obs)
        K = build_k_matrix(p)
        qc = quartic_coefficients(p, K)
        rs = quartic_roots(qc)
        eig = jacobi_eigen_sym4(K)
        assert rs.complex_pair == (False, False)
        assert len(rs.roots) == 4
        assert vieta_ok(qc, rs.roots)
        lam = eig.values[0]
        assert abs(max_real_root(rs) - lam) <= 1e-10 * abs(lam)


def test_kmatrix_quartics_match_jacobi_to_conditioning(corpus):
    # Inverse-variance weights make the two largest eigenvalues nearly equal
    # in many sets; a polynomial root is then only as good as its condition.
    for _, obs in corpus:
        p = build_profile(obs)
        K = build_k_matrix(p)
        qc = quartic_coefficients(p, K)
        rs = quartic_roots(qc)
        lam = jacobi_eigen_sym4(K).values[0]
        assert rs.complex_pair == (False, False)
        assert vieta_ok(qc, rs.roots)
        assert abs(max_real_root(rs) - lam) <= max(1e-10 * abs(lam), 64.0 * horner_bound(qc, lam))
