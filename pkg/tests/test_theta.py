from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from cntheta import kernels
from cntheta.arith import CMPoint
from cntheta.errors import NonPositiveIm, OutOfDomain
from cntheta.hpc import PrecisionContext, sqrt_varpi_over_pi
from cntheta.theta import (
    BigTheta,
    Char,
    Chi,
    DivisorSum,
    FRatio,
    Jacobi,
    OddTheta,
    evaluate,
    majorant_scale,
    q_power_ladder,
    truncation_K,
)

TIGHT = mpmath.mpf(10) ** -36  # oracles run at 60 digits


def _agree(bc, exact, slack=TIGHT):
    return abs(bc.value - exact) <= bc.err + slack


def test_truncation_examples(ctx):
    K, bound = truncation_K(Fraction(1, 2), 1, ctx)
    assert K <= 8 and bound <= ctx.target_tail
    K, _ = truncation_K(Fraction(1, 2 * 25**2), 1, ctx)
    assert K <= 200
    with pytest.raises(NonPositiveIm):
        truncation_K(0, 1, ctx)


@given(st.fractions(Fraction(1, 5000), Fraction(3)), st.sampled_from([1, Fraction(1, 2)]))
@settings(max_examples=40, deadline=None)
def test_truncation_minimal_and_bounds_tail(im, ws):
    ctx = PrecisionContext(128)
    K, bound = truncation_K(im, ws, ctx)
    mp = oracles.mpctx(60)
    c = 2 * mp.pi * mp.mpf(ws.numerator if isinstance(ws, Fraction) else ws) / (ws.denominator if isinstance(ws, Fraction) else 1) * mp.mpf(im.numerator) / im.denominator
    true_tail = 2 * mp.nsum(lambda k: mp.exp(-c * k * k), [K + 1, mp.inf])
    assert true_tail <= bound * (1 + mp.mpf(10) ** -20)
    assert bound <= ctx.target_tail
    if K > 0:
        prev_bound = 2 * mp.exp(-c * K**2) / (1 - mp.exp(-c * (2 * K + 1)))
        assert prev_bound > ctx.target_tail * (1 - mp.mpf(10) ** -20)


def test_jacobi_gauss_point(ctx):
    v = evaluate(Jacobi(), CMPoint(1, 2), ctx)
    s = sqrt_varpi_over_pi(ctx)
    assert abs(v.value - s.value) <= v.err + s.err
    assert mpmath.nstr(v.real, 7) == "0.9135791"


def test_chi5_vanishes_at_mock_heegner_point(ctx):
    v = evaluate(Chi(5), CMPoint(18, 50), ctx)
    assert abs(v.value) <= 16 * v.err


def test_divisor_sum_one_is_one(ctx):
    v = evaluate(DivisorSum(1), CMPoint(3, 7), ctx)
    assert abs(v.value - 1) <= v.err


def test_domain_errors(ctx):
    with pytest.raises(OutOfDomain):
        DivisorSum(21)
    with pytest.raises(OutOfDomain):
        Chi(0)
    with pytest.raises(NonPositiveIm):
        evaluate(Jacobi(), mpmath.mpc(0.5, -1), ctx)
    assert FRatio(7, 5).r == 2


taus = st.tuples(st.floats(-1, 1), st.floats(0.05, 2)).map(lambda t: complex(*t))


@given(taus, st.sampled_from([1, 4, 5, 8, 12, 13, 17, 65]))
@settings(max_examples=30, deadline=None)
def test_chi_matches_direct_sum(tau, n):
    ctx = PrecisionContext(128)
    mp = oracles.mpctx(60)
    t = mp.mpc(tau)
    v = evaluate(Chi(n), t, ctx)
    assert _agree(v, oracles.theta_chi(n, t))


@given(taus)
@settings(max_examples=15, deadline=None)
def test_chi1_is_jacobi(tau):
    ctx = PrecisionContext(128)
    a = evaluate(Chi(1), tau, ctx)
    b = evaluate(Jacobi(), tau, ctx)
    assert a.value == b.value
    assert _agree(a, oracles.theta_chi(1, tau, kind="jacobi"))


@given(
    st.fractions(Fraction(-3), Fraction(3), max_denominator=13),
    st.fractions(Fraction(-1), Fraction(2), max_denominator=4),
    taus,
)
@settings(max_examples=30, deadline=None)
def test_char_matches_direct_sum(mu, nu, tau):
    ctx = PrecisionContext(128)
    v = evaluate(Char(mu, nu), tau, ctx)
    mp = oracles.mpctx(60)
    exact = oracles.theta_char(mp.mpf(mu.numerator) / mu.denominator, mp.mpf(nu.numerator) / nu.denominator, tau)
    assert _agree(v, exact)


def test_composite_kinds_match_oracles(ctx):
    mp = oracles.mpctx(60)
    t = mp.mpc(0.3, 0.7)
    jac = oracles.theta_chi(1, t, kind="jacobi")
    assert _agree(evaluate(BigTheta(), t, ctx), jac**2)
    assert _agree(evaluate(OddTheta(), t, ctx), oracles.theta_chi(4, t) ** 2)
    f = oracles.theta_char(mp.mpf(2) / 5, 0.5, t) / oracles.theta_char(0, 0.5, t)
    assert _agree(evaluate(FRatio(2, 5), t, ctx), f)
    th = lambda z: oracles.theta_chi(1, z, kind="jacobi") ** 2  # noqa: E731
    ds = th(5 * t / 2) / th(t / 2) - th(t / 2) / th(t / 2) / 5
    assert _agree(evaluate(DivisorSum(5), t, ctx), ds)


@given(taus, st.sampled_from([1, 5, 13, 17]))
@settings(max_examples=20, deadline=None)
def test_half_shift_flips_q(tau, n):
    """theta(tau + 1/2) is the series with q -> -q: weights chi(k)(-1)^k."""
    ctx = PrecisionContext(128)
    mp = oracles.mpctx(60)
    t = mp.mpc(tau)
    shifted = evaluate(Chi(n), t + mp.mpf(1) / 2, ctx)
    K = 400
    direct = mp.fsum(
        (1 if (k == 0 and n == 1) else 0) if k == 0 else
        (oracles.kronecker_brute(k, n) + oracles.kronecker_brute(-k, n)) * (-1) ** k * mp.exp(2j * mp.pi * k * k * t)
        for k in range(K)
    )
    assert _agree(shifted, direct)


@given(taus, st.sampled_from([5, 13, 17, 41]))
@settings(max_examples=20, deadline=None)
def test_reflection_conjugates(tau, n):
    ctx = PrecisionContext(128)
    mp = ctx.mp
    t = mp.mpc(tau)
    a = evaluate(Chi(n), t, ctx)
    b = evaluate(Chi(n), -mp.conj(t), ctx)
    assert abs(a.value - mp.conj(b.value)) <= a.err + b.err


def test_square_identity(ctx):
    a = evaluate(Jacobi(), CMPoint(0, 2), ctx).square()
    b = evaluate(Jacobi(), CMPoint(1, 2), ctx).square() * ctx.mp.sqrt(2)
    assert abs(a.value - b.value) <= a.err + b.err


def test_chi4_shift_by_eighth_is_a_phase(ctx):
    """Every odd k has k^2 = 1 mod 8, so tau -> tau + 1/8 multiplies by e^{i pi/4}."""
    a = evaluate(Chi(4), CMPoint(0, 8), ctx)
    b = evaluate(Chi(4), CMPoint(1, 8), ctx)
    assert abs(abs(a.value) - abs(b.value)) <= a.err + b.err
    phase = ctx.mp.expjpi(ctx.mp.mpf(1) / 4)
    assert abs(b.value - phase * a.value) <= a.err + b.err + ctx.rounding(a.value)


def test_theta_square_sum_identity(ctx):
    rng = np.random.default_rng(55)
    for _ in range(20):
        t = ctx.mp.mpc(rng.uniform(-1, 1), rng.uniform(0.3, 2))
        lhs = evaluate(BigTheta(), t, ctx) + evaluate(OddTheta(), t / 4, ctx)
        rhs = evaluate(BigTheta(), t / 2, ctx)
        assert abs(lhs.value - rhs.value) <= lhs.err + rhs.err


KINDS = [Chi(5), Chi(13), Chi(4), Jacobi(), BigTheta(), OddTheta(), Char(Fraction(1, 3), Fraction(1, 2)), FRatio(2, 5), DivisorSum(65)]


@pytest.mark.parametrize("kind", KINDS, ids=str)
def test_doubling_K_stays_within_err(kind, ctx):
    t = ctx.mp.mpc(0.21, 0.13)
    a = evaluate(kind, t, ctx)
    b = evaluate(kind, t, ctx, k_factor=2)
    assert abs(a.value - b.value) <= a.err


@pytest.mark.skipif(not kernels.HAVE_NUMBA, reason="numba unavailable")
@pytest.mark.parametrize("kind", [Chi(13), Char(Fraction(2, 5), Fraction(5, 2)), DivisorSum(5)], ids=str)
def test_backends_agree_bitwise(kind, ctx):
    t = ctx.mp.mpc(0.4, 0.05)
    a = evaluate(kind, t, ctx, backend="numba")
    b = evaluate(kind, t, ctx, backend="numpy")
    assert a.value == b.value and a.err == b.err


def test_q_power_ladder(ctx):
    tau = CMPoint(2, 13)
    lad = q_power_ladder(tau, 50, 1, ctx)
    assert lad.terms[0] == 1
    assert lad.multiplications == 100
    mp = oracles.mpctx(80)
    t = mp.mpc(2, 1) / 13
    ulp = ctx.mp.ldexp(1, -ctx.wp)
    for k, v in enumerate(lad.terms):
        assert abs(v - mp.exp(2j * mp.pi * k * k * t)) <= 8 * ulp


def test_majorant_scale():
    assert majorant_scale(100) == pytest.approx(1.0)
    assert majorant_scale(0.5) > 1.0
