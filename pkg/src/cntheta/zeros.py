"""Mock Heegner zeros of theta_chi_n at tau_n = (b + i)/(2n^2).

The Atkin-Lehner matrix sigma = (2b, -lambda; 4n^2, -2b), lambda = (b^2+1)/n^2,
fixes tau_n and satisfies

    theta_chi_n(sigma tau) = eps sqrt(n^2 tau - b/2) theta_chi_n(tau),
    eps = 1 - i (n = 1 mod 8),  i - 1 (n = 5 mod 8).

At the fixed point this forces theta_chi_n(tau_n) = 0 when n = 5 mod 8, and
an even vanishing order when n = 1 mod 8.  Orders are estimated from
discretised Cauchy integrals around tau_n.
"""

from __future__ import annotations

import math
import multiprocessing
import os
from dataclasses import dataclass, field

import numpy as np

from .arith import CMPoint, CurveInput, is_valid_curve, sqrt_minus_one, tau_point, validate_curve
from .errors import AllCoefficientsBelowThreshold, DomainError, OutOfDomain
from .hpc import BoundedComplex, PrecisionContext
from .lvalue import Vanishing, central_lvalue
from .theta import Chi, _mp_at, chi_series, evaluate, majorant_scale


def _odd_input(inp) -> CurveInput:
    inp = validate_curve(inp) if isinstance(inp, int) else inp
    if not inp.is_odd:
        raise OutOfDomain(f"n = {inp.n} is even; this operation needs odd n")
    return inp


@dataclass(frozen=True)
class AtkinLehnerData:
    n: int
    b: int
    lam: int

    def __post_init__(self):
        if self.b % 2 or self.b * self.b + 1 != self.lam * self.n * self.n:
            raise OutOfDomain(f"b = {self.b} is not an even root of -1 modulo {self.n}^2")

    @classmethod
    def for_input(cls, inp, b: int | None = None) -> "AtkinLehnerData":
        inp = _odd_input(inp)
        b = sqrt_minus_one(inp.n) if b is None else b
        return cls(inp.n, b, (b * b + 1) // (inp.n * inp.n))

    @property
    def matrix(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return ((2 * self.b, -self.lam), (4 * self.n * self.n, -2 * self.b))

    @property
    def determinant(self) -> int:
        (a, b), (c, d) = self.matrix
        return a * d - b * c

    @property
    def epsilon(self) -> complex:
        return 1 - 1j if self.n % 8 == 1 else -1 + 1j


def atkin_lehner_apply(data: AtkinLehnerData, tau: BoundedComplex) -> BoundedComplex:
    """sigma(tau) = (2b tau - lambda)/(4n^2 tau - 2b).

    The image is computed and kept with 64 extra bits: sigma(tau) lies
    within ~1/(4n^2) of a cusp, so rounding it to working precision would
    cost far more than the theta evaluation itself.
    """
    ctx = tau.ctx
    mp = _mp_at(ctx.wp + 64)
    z = mp.mpc(tau.value)
    if not z.imag > 0:
        raise OutOfDomain("Im(tau) must be positive")
    (a, b), (c, d) = data.matrix
    den = c * z + d
    assert den != 0, "pole of sigma inside the upper half-plane"
    w = (a * z + b) / den
    # |sigma'(tau)| = det/|c tau + d|^2 amplifies the input error
    err = tau.err * data.determinant / abs(den) ** 2 + abs(w) * mp.ldexp(1, -ctx.wp - 60)
    return BoundedComplex(w, ctx.mp.mpf(err), ctx)


def _derivative_majorant(im_tau: float) -> float:
    """Upper bound for |d/dtau theta_chi(tau)| from sum 2 pi k^2 |q|^{k^2}."""
    c = 2 * math.pi * im_tau
    kmax = int(math.sqrt(80.0 / c)) + 2
    k = np.arange(1, kmax + 1, dtype=np.float64)
    return 1.01 * 4 * math.pi * float((k * k * np.exp(-c * k * k)).sum()) + 1e-300


@dataclass(frozen=True)
class AtkinLehnerCheck:
    n: int
    tau: object
    residual: object
    err: object

    @property
    def ok(self) -> bool:
        return self.residual <= self.err


def verify_atkin_lehner(inp, tau, ctx: PrecisionContext, backend=None) -> AtkinLehnerCheck:
    """Residual of the Atkin-Lehner functional equation at ``tau``."""
    inp = _odd_input(inp)
    data = AtkinLehnerData.for_input(inp)
    mp = ctx.mp
    t = tau if isinstance(tau, BoundedComplex) else ctx.bounded(tau)
    s = atkin_lehner_apply(data, t)
    th_s = evaluate(Chi(inp.n), s, ctx, backend=backend)
    th_t = evaluate(Chi(inp.n), t, ctx, backend=backend)
    mp_hi = _mp_at(ctx.wp + 64)
    arg = inp.n**2 * mp_hi.mpc(t.value) - mp_hi.mpf(data.b) / 2
    if not arg.imag > 0:
        raise OutOfDomain("square-root argument left the upper half-plane")
    factor = BoundedComplex(mp.mpc(mp_hi.mpc(data.epsilon) * mp_hi.sqrt(arg)), ctx.rounding(abs(arg)), ctx)
    rhs = factor * th_t
    # sigma(tau) is only known to s.err; theta moves by at most |theta'| s.err
    shift = mp.mpf(_derivative_majorant(float(s.imag) - float(s.err))) * s.err
    diff = th_s - rhs
    return AtkinLehnerCheck(inp.n, t.value, abs(diff.value), diff.err + shift)


@dataclass(frozen=True)
class ZeroOrderReport:
    n: int
    tau: CMPoint
    order: int
    coeff_mags: list
    radius: object
    samples: int
    delta: object
    noise: object


def vanishing_order(
    inp,
    ctx: PrecisionContext,
    *,
    samples: int = 32,
    n_coeffs: int = 4,
    radius=None,
    escalate: bool = True,
    backend=None,
) -> ZeroOrderReport:
    """Vanishing order of theta_chi_n at tau_n from Cauchy coefficients.

    theta is sampled at tau_n + r e^{2 pi i t/N}; the discrete Fourier
    coefficients approximate c_j r^j.  The order is the first j with
    |c_j r^j| > delta max_k |c_k r^k|, delta = 2^{-p/4}.  ``noise`` bounds
    evaluation error plus aliasing from coefficients j + N, j + 2N, ...
    """
    inp = _odd_input(inp)
    b, tau = tau_point(inp)
    mp = ctx.mp
    im = mp.mpf(1) / tau.d
    r = im / 8 if radius is None else mp.mpf(radius)
    N, J = samples, n_coeffs
    mp_hi = _mp_at(ctx.wp + 64)
    centre = mp_hi.mpc(tau.b, 1) / tau.d
    pts = [centre + mp_hi.mpf(r) * mp_hi.expjpi(mp_hi.mpf(2 * t) / N) for t in range(N)]
    vals = chi_series(inp.n, pts, ctx, backend=backend)
    eval_err = max(v.err for v in vals)
    # Cauchy bound on the disc of radius R = Im(tau_n)/2 around tau_n
    R = im / 2
    rho = r / R
    M = mp.mpf(majorant_scale(float(im - R)))
    mags = []
    noise = mp.mpf(0)
    for j in range(J + 1):
        acc = mp.mpc(0)
        for t, v in enumerate(vals):
            acc += v.value * mp.expjpi(-mp.mpf(2 * j * t) / N)
        c = abs(acc / N)
        mags.append(c)
        alias = M * rho ** (j + N) / (1 - rho**N)
        noise = max(noise, eval_err + alias + ctx.rounding(c))
    delta = mp.ldexp(1, -(ctx.bits // 4))
    top = max(mags)
    if top * delta <= 4 * noise:
        if escalate:
            return vanishing_order(inp, ctx, samples=2 * N, n_coeffs=2 * J, radius=r / 2, escalate=False, backend=backend)
        raise AllCoefficientsBelowThreshold(
            f"n = {inp.n}: Cauchy coefficients up to j = {J} are indistinguishable from noise"
        )
    order = next(j for j, c in enumerate(mags) if c > delta * top)
    return ZeroOrderReport(inp.n, tau, order, mags, r, N, delta, noise)


@dataclass(frozen=True)
class EvenZeroCheck:
    """|theta| at the four points where vanishing of L(E_{2m}, 1) forces zeros."""

    n: int
    values: dict
    errs: dict

    @property
    def all_zero(self) -> bool:
        return all(v <= 16 * self.errs[k] for k, v in self.values.items())


def even_zero_check(inp, ctx: PrecisionContext) -> EvenZeroCheck:
    inp = validate_curve(inp) if isinstance(inp, int) else inp
    if inp.is_odd:
        raise OutOfDomain("the even-n zero statements need n = 2m")
    m = inp.m
    b = sqrt_minus_one(m)
    M = m * m
    pts = {
        "tau'_m": (Chi(m), CMPoint(b + M, 2 * M)),
        "-conj(tau'_m)": (Chi(m), CMPoint(-b - M, 2 * M)),
        "tau_m/4": (Chi(4 * m), CMPoint(b, 8 * M)),
        "-conj(tau'_m)/4": (Chi(4 * m), CMPoint(-b - M, 8 * M)),
    }
    vals, errs = {}, {}
    for name, (kind, p) in pts.items():
        v = evaluate(kind, p, ctx)
        vals[name], errs[name] = abs(v.value), v.err
    return EvenZeroCheck(inp.n, vals, errs)


# --------------------------------------------------------------------------
# range scans


@dataclass(frozen=True)
class ScanRecord:
    """One row of a range scan; numbers are decimal strings at scan precision."""

    n: int
    status: str  # ok | flagged | error
    case: str | None = None
    b: int | None = None
    tau: CMPoint | None = None
    theta_abs: str | None = None
    lvalue: str | None = None
    err: str | None = None
    vanishing: str | None = None
    sha_predicted: str | None = None
    sha_rounded: int | None = None
    tunnell_a: int | None = None
    tunnell_b: int | None = None
    tunnell_vanishing: bool | None = None
    zero_order: int | None = None
    flags: tuple = field(default_factory=tuple)
    message: str = ""


def digits_for(bits: int) -> int:
    return math.ceil(0.3 * bits)


def fmt(x, bits: int) -> str:
    return _mp_at(bits + 16).nstr(x, digits_for(bits), strip_zeros=False)


def scan_one(n: int, bits: int, with_order: bool = True) -> ScanRecord:
    """Full analysis of one n; domain errors become an ``error`` record."""
    ctx = PrecisionContext(bits)
    try:
        inp = validate_curve(n)
        rep = central_lvalue(inp, ctx)
        order = None
        if with_order and inp.is_odd:
            order = vanishing_order(inp, ctx).order
    except DomainError as exc:
        return ScanRecord(n=n, status="error", message=f"{type(exc).__name__}: {exc}")
    tun = rep.tunnell
    flags = []
    if rep.tunnell_consistent is False:
        flags.append("tunnell-mismatch")
    if rep.vanishing is Vanishing.INDETERMINATE:
        flags.append("indeterminate")
    if rep.sha is not None and not (rep.sha.near_integer and rep.sha.is_square):
        flags.append("sha-not-square")
    if order is not None:
        if inp.n_mod_8 == 1 and order == 1:
            flags.append("odd-order-at-1-mod-8")
        if inp.n_mod_8 == 5 and order == 0:
            flags.append("nonzero-at-5-mod-8")
        if (order == 0) != (rep.vanishing is Vanishing.NONZERO):
            flags.append("order-vs-lvalue")
    return ScanRecord(
        n=n,
        status="flagged" if flags else "ok",
        case=inp.case.value,
        b=rep.b,
        tau=rep.tau,
        theta_abs=fmt(rep.theta_abs, bits),
        lvalue=fmt(rep.lvalue, bits),
        err=fmt(rep.err, bits),
        vanishing=rep.vanishing.value,
        sha_predicted=None if rep.sha is None else fmt(rep.sha.value, bits),
        sha_rounded=rep.sha_rounded,
        tunnell_a=tun.a_count,
        tunnell_b=tun.b_count,
        tunnell_vanishing=tun.vanishing,
        zero_order=order,
        flags=tuple(flags),
    )


def _scan_star(args):
    return scan_one(*args)


def default_jobs() -> int:
    try:
        return len(os.sched_getaffinity(0))
    except AttributeError:  # pragma: no cover - non-Linux
        return os.cpu_count() or 1


def mock_heegner_scan(
    n_from: int,
    n_to: int,
    ctx: PrecisionContext,
    *,
    jobs: int = 1,
    with_order: bool = True,
    skip: set | None = None,
    on_record=None,
) -> list[ScanRecord]:
    """Analyse every valid n in [n_from, n_to], returned in increasing n.

    Invalid n (4 | n, not squarefree, or a prime 3 mod 4) are skipped.
    ``skip`` lists n already done (resume); ``on_record`` is called with each
    record in n order as soon as it and all smaller n are finished.
    """
    if n_from > n_to:
        raise OutOfDomain(f"empty range [{n_from}, {n_to}]")
    skip = skip or set()
    todo = [n for n in range(max(n_from, 1), n_to + 1) if n not in skip and is_valid_curve(n)]
    args = [(n, ctx.bits, with_order) for n in todo]
    out = []
    if jobs <= 1 or len(args) <= 1:
        results = map(_scan_star, args)
        pool = None
    else:
        pool = multiprocessing.get_context("spawn").Pool(min(jobs, len(args)))
        results = pool.imap(_scan_star, args, chunksize=1)
    try:
        for rec in results:
            out.append(rec)
            if on_record is not None:
                on_record(rec)
    finally:
        if pool is not None:
            pool.close()
            pool.join()
    return out
