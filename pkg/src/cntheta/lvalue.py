"""Central L-values of y^2 = x^3 - n^2 x from theta values at CM points.

For odd n and an even b with b^2 = -1 (mod n^2)::

    L(E_n, 1) = pi |theta_chi_n((b + i)/(2n^2))|^2 / (4 sqrt(2) n)

and for n = 2m::

    L(E_n, 1) = pi |theta_chi_m((b + m^2 + i)/(2m^2))|^2 / (sqrt(2) n).

When L(E_n, 1) != 0 the same theta value gives the order of Sha predicted
by the Birch and Swinnerton-Dyer conjecture.  Since that order is at least
1, the theta value is bounded below, which makes the zero / nonzero
decision well conditioned.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .arith import CMPoint, CurveInput, is_perfect_square, sigma0, sqrt_minus_one, tau_point, validate_curve
from .errors import OutOfDomain, VanishingLValue
from .hpc import BoundedComplex, PrecisionContext, lemniscate, sqrt_varpi_over_pi
from .theta import Chi, evaluate, majorant_scale
from .tunnell import TunnellCounts, tunnell_vanishing


class Vanishing(enum.Enum):
    ZERO = "zero"
    NONZERO = "nonzero"
    INDETERMINATE = "indeterminate"


class Verdict(enum.Enum):
    CONGRUENT_PREDICTED = "congruent-predicted"
    NOT_CONGRUENT = "not-congruent"
    INDETERMINATE = "indeterminate"


@dataclass(frozen=True)
class ShaPrediction:
    value: object  # mpf
    err: object
    rounded: int
    near_integer: bool
    is_square: bool


@dataclass(frozen=True)
class LValueReport:
    input: CurveInput
    b: int
    tau: CMPoint
    theta: BoundedComplex
    theta_abs: object
    lvalue: object
    err: object
    vanishing: Vanishing
    bits: int
    zero_threshold: object
    lower_bound: object
    sha: ShaPrediction | None = None
    tunnell: TunnellCounts | None = None

    @property
    def sha_predicted(self):
        return None if self.sha is None else self.sha.value

    @property
    def sha_rounded(self):
        return None if self.sha is None else self.sha.rounded

    @property
    def tunnell_consistent(self) -> bool | None:
        if self.tunnell is None or self.vanishing is Vanishing.INDETERMINATE:
            return None
        return self.tunnell.vanishing == (self.vanishing is Vanishing.ZERO)


def _as_input(inp) -> CurveInput:
    return validate_curve(inp) if isinstance(inp, int) else inp


def lvalue_constant(inp: CurveInput, ctx: PrecisionContext):
    """The factor c with L(E_n, 1) = c |theta|^2."""
    mp = ctx.mp
    if inp.is_odd:
        return mp.pi / (4 * mp.sqrt(2) * inp.n)
    return mp.pi / (mp.sqrt(2) * inp.n)


def theta_lower_bound(inp, ctx: PrecisionContext):
    """Smallest |theta| compatible with L(E_n, 1) != 0 (Sha order >= 1)."""
    inp = _as_input(inp)
    mp = ctx.mp
    s = sqrt_varpi_over_pi(ctx).real
    if inp.is_odd:
        return mp.root(2 * inp.n, 4) * s * sigma0(inp.n)
    return mp.root(mp.mpf(inp.n) / 2, 4) * s * sigma0(inp.m)


def theta_at_tau(inp: CurveInput, ctx: PrecisionContext, b: int | None = None):
    b, tau = tau_point(inp, b)
    return b, tau, evaluate(Chi(inp.m), tau, ctx)


def _sha_from_theta(inp: CurveInput, theta_abs2, theta_err2, ctx: PrecisionContext) -> ShaPrediction:
    mp = ctx.mp
    w = lemniscate(ctx)
    if inp.is_odd:
        c = mp.pi / (mp.sqrt(2 * inp.n) * sigma0(inp.n) ** 2)
    else:
        c = mp.sqrt(2) * mp.pi / (mp.sqrt(inp.n) * sigma0(inp.m) ** 2)
    v = c * theta_abs2 / w.real
    err = c * theta_err2 / w.real + v * w.err / (w.real - w.err) + ctx.rounding(v)
    rounded = int(mp.nint(v))
    tol = max(16 * err, mp.ldexp(1, -(ctx.bits // 4)))
    return ShaPrediction(
        value=v,
        err=err,
        rounded=rounded,
        near_integer=abs(v - rounded) <= tol,
        is_square=rounded > 0 and is_perfect_square(rounded),
    )


def central_lvalue(inp, ctx: PrecisionContext, *, escalate: bool = True, with_tunnell: bool = True, b: int | None = None) -> LValueReport:
    """L(E_n, 1) with an error bound, a vanishing verdict and the Sha prediction.

    Zero when |theta| <= max(16 err, 2^{-p/4} S), S the positive majorant of
    the series; nonzero when |theta| >= half the Sha lower bound.  Anything in
    between is retried once at doubled precision before being reported as
    indeterminate.
    """
    inp = _as_input(inp)
    b, tau, th = theta_at_tau(inp, ctx, b)
    mp = ctx.mp
    a = abs(th.value)
    const = lvalue_constant(inp, ctx)
    lval = const * a * a
    lerr = const * (2 * a * th.err + th.err**2) + ctx.rounding(lval)
    scale = majorant_scale(tau.imag)
    threshold = max(16 * th.err, mp.ldexp(1, -(ctx.bits // 4)) * scale)
    lb = theta_lower_bound(inp, ctx)
    if a <= threshold:
        vanishing = Vanishing.ZERO
    elif a >= lb / 2:
        vanishing = Vanishing.NONZERO
    else:
        vanishing = Vanishing.INDETERMINATE
    if vanishing is Vanishing.INDETERMINATE and escalate:
        return central_lvalue(inp, ctx.doubled(), escalate=False, with_tunnell=with_tunnell, b=b)
    sha = None
    if vanishing is Vanishing.NONZERO:
        sha = _sha_from_theta(inp, a * a, 2 * a * th.err + th.err**2, ctx)
    return LValueReport(
        input=inp,
        b=b,
        tau=tau,
        theta=th,
        theta_abs=a,
        lvalue=lval,
        err=lerr,
        vanishing=vanishing,
        bits=ctx.bits,
        zero_threshold=threshold,
        lower_bound=lb,
        sha=sha,
        tunnell=tunnell_vanishing(inp) if with_tunnell else None,
    )


def predicted_sha(inp, ctx: PrecisionContext, report: LValueReport | None = None) -> ShaPrediction:
    """Order of Sha(E_n) predicted from the theta value (needs L(E_n, 1) != 0)."""
    inp = _as_input(inp)
    report = report or central_lvalue(inp, ctx, with_tunnell=False)
    if report.vanishing is Vanishing.ZERO:
        raise VanishingLValue(f"L(E_{inp.n}, 1) = 0; the Sha formula does not apply")
    if report.sha is None:
        raise OutOfDomain(f"could not decide whether L(E_{inp.n}, 1) vanishes")
    return report.sha


def classify_congruent(inp, ctx: PrecisionContext, report: LValueReport | None = None) -> Verdict:
    """Congruence verdict, conditional on BSD; really a statement about L(E_n, 1).

    The theta side says "vanishes" when |theta| is below the Sha lower bound
    by more than its error, and "does not vanish" when it clears the zero
    threshold.  The verdict stands only when the Tunnell counts agree.
    """
    inp = _as_input(inp)
    report = report or central_lvalue(inp, ctx)
    tun = report.tunnell or tunnell_vanishing(inp)
    a, err = report.theta_abs, report.theta.err
    if a < report.lower_bound - err:
        return Verdict.CONGRUENT_PREDICTED if tun.vanishing else Verdict.INDETERMINATE
    if a > report.zero_threshold and not tun.vanishing:
        return Verdict.NOT_CONGRUENT
    return Verdict.INDETERMINATE


@dataclass(frozen=True)
class AltFormDiagnostic:
    n: int
    theta_abs: object
    lvalue: object
    ratio_square: object | None
    ratio_linear: object | None
    theta_prime_abs: object


def alt_form_diagnostic(inp, ctx: PrecisionContext) -> AltFormDiagnostic:
    """Compare L(E_n, 1) with |theta_chi_{2n}(tau_m / 4)| for n = 2m.

    An alternative even-n formulation reads L = |theta| with no constant and
    no square.  This reports the ratios L/|theta|^2 and L/|theta| next to
    |theta_chi_m(tau'_m)| for comparison; nothing here is asserted.
    """
    inp = _as_input(inp)
    if inp.is_odd:
        raise OutOfDomain("the alternative formulation concerns even n only")
    m = inp.m
    b = sqrt_minus_one(m)
    th = evaluate(Chi(2 * inp.n), CMPoint(b, 8 * m * m), ctx)
    rep = central_lvalue(inp, ctx, with_tunnell=False)
    a = abs(th.value)
    tiny = a <= 16 * th.err
    return AltFormDiagnostic(
        n=inp.n,
        theta_abs=a,
        lvalue=rep.lvalue,
        ratio_square=None if tiny else rep.lvalue / a**2,
        ratio_linear=None if tiny else rep.lvalue / a,
        theta_prime_abs=rep.theta_abs,
    )
