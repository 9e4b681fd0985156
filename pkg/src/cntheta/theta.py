"""Theta series evaluation with truncation bounds.

Supported series (``q = e^{2 pi i tau}``):

* ``Chi(n)``      sum_k chi_n(k) q^{k^2}, chi_n the Kronecker symbol (k/n)
* ``Jacobi``      sum_k q^{k^2}
* ``BigTheta``    sum_{j,k} q^{j^2+k^2}, computed as Jacobi^2
* ``OddTheta``    sum_{j,k odd} q^{j^2+k^2}, computed as Chi(4)^2
* ``Char(mu,nu)`` sum_n exp(pi i (n+mu)^2 tau + 2 pi i nu (n+mu))
* ``FRatio``      Char(r/d, nu) / Char(0, nu)
* ``DivisorSum``  sum_{d | rad n'} ((-1)^omega(d)/d) BigTheta(n' tau/(2d)) / BigTheta(tau/2)

Each series is summed by a geometric ladder (one exponential up front, two
complex multiplications per term) in fixed point, see :mod:`cntheta.kernels`.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

import mpmath
import numpy as np
from mpmath.libmp import to_fixed

from . import kernels
from .arith import CMPoint, factorize, kronecker, kronecker_period, squarefree_divisors
from .errors import NonPositiveIm, OutOfDomain
from .hpc import BoundedComplex, PrecisionContext


@dataclass(frozen=True)
class Chi:
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise OutOfDomain(f"Chi needs n >= 1, got {self.n}")


@dataclass(frozen=True)
class Jacobi:
    pass


@dataclass(frozen=True)
class BigTheta:
    pass


@dataclass(frozen=True)
class OddTheta:
    pass


@dataclass(frozen=True)
class Char:
    mu: Fraction
    nu: Fraction

    def __post_init__(self):
        object.__setattr__(self, "mu", Fraction(self.mu))
        object.__setattr__(self, "nu", Fraction(self.nu))


@dataclass(frozen=True)
class FRatio:
    r: int
    d: int
    nu: Fraction = Fraction(1, 2)

    def __post_init__(self):
        if self.d < 1:
            raise OutOfDomain(f"FRatio needs d >= 1, got {self.d}")
        object.__setattr__(self, "r", self.r % self.d)
        object.__setattr__(self, "nu", Fraction(self.nu))


@dataclass(frozen=True)
class DivisorSum:
    n: int

    def __post_init__(self):
        bad = [p for p in factorize(self.n) if p % 4 != 1]
        if bad:
            raise OutOfDomain(f"DivisorSum needs primes = 1 mod 4, {self.n} has {bad[0]}")


ThetaKind = Union[Chi, Jacobi, BigTheta, OddTheta, Char, FRatio, DivisorSum]

TauLike = Union[CMPoint, BoundedComplex, complex, mpmath.mpc]


# --------------------------------------------------------------------------
# helpers

_local = threading.local()


def _mp_at(prec: int):
    """A private mpmath context at ``prec`` bits, cached per thread."""
    cache = getattr(_local, "ctxs", None)
    if cache is None:
        cache = _local.ctxs = {}
    mp = cache.get(prec)
    if mp is None:
        mp = mpmath.MPContext()
        mp.prec = prec
        cache[prec] = mp
    return mp


def _real(x, mp):
    if isinstance(x, Fraction):
        return mp.mpf(x.numerator) / x.denominator
    return mp.mpf(x)


def to_mpc(tau: TauLike, mp) -> mpmath.mpc:
    if isinstance(tau, CMPoint):
        return mp.mpc(tau.b, 1) / tau.d
    if isinstance(tau, BoundedComplex):
        return mp.mpc(tau.value)
    return mp.mpc(tau)


def _check_im(im) -> None:
    if not im > 0:
        raise NonPositiveIm(f"Im(tau) must be positive, got {im}")


def truncation_K(im_tau, weight_scale, ctx: PrecisionContext):
    """Smallest K whose tail 2 sum_{k>K} e^{-c k^2} is below 2^{-(p+g)}.

    ``c = 2 pi weight_scale im_tau``.  The tail is bounded by the geometric
    majorant 2 e^{-c(K+1)^2} / (1 - e^{-c(2K+3)}).  Returns ``(K, bound)``.
    """
    mp = ctx.mp
    im_tau = _real(im_tau, mp)
    _check_im(im_tau)
    c = 2 * mp.pi * _real(weight_scale, mp) * im_tau
    target = ctx.target_tail

    def bound(K):
        return 2 * mp.exp(-c * (K + 1) ** 2) / (1 - mp.exp(-c * (2 * K + 3)))

    K = max(0, int(mp.sqrt(ctx.wp * mp.ln(2) / c)) - 2)
    while K > 0 and bound(K - 1) <= target:
        K -= 1
    while bound(K) > target:
        K += 1
    return K, bound(K)


def majorant_scale(im_tau, weight_scale=1) -> float:
    """sum_k |q|^{k^2} over all integers k, in double precision."""
    c = 2 * math.pi * float(weight_scale) * float(im_tau)
    kmax = int(math.sqrt(60.0 / c)) + 2
    k = np.arange(1, kmax + 1, dtype=np.float64)
    return 1.0 + 2.0 * float(np.exp(-c * k * k).sum())


def chi_weights(n: int, K: int) -> np.ndarray:
    """Weights w_0 = chi(0), w_k = chi(k) + chi(-k) of the folded chi_n series."""
    per = kronecker_period(n)
    base = np.array([kronecker(k, n) + kronecker(-k, n) for k in range(per)], dtype=np.int64)
    w = np.resize(base, K + 1)
    w[0] = kronecker(0, n)
    return w


@dataclass
class _Plan:
    frac_bits: int
    L: int
    err: object  # mpf, absolute error of the kernel result


def _plan(K: int, weight_max: int, ctx: PrecisionContext) -> _Plan:
    frac = ctx.wp + 8
    while True:
        L = kernels.limbs_for_bits(frac)
        ulps = kernels.ladder_error_ulps(K, L, weight_max)
        needed = ctx.wp + 4 + ulps.bit_length()
        if kernels.LIMB_BITS * L >= needed:
            F = kernels.LIMB_BITS * L
            return _Plan(F, L, ctx.mp.ldexp(ulps, -F))
        frac = needed


def _to_limbs(z, F: int, L: int) -> np.ndarray:
    out = np.empty((2, L + 1), dtype=np.int64)
    out[0] = kernels.int_to_limbs(to_fixed(z.real._mpf_, F), L)
    out[1] = kernels.int_to_limbs(to_fixed(z.imag._mpf_, F), L)
    return out


def _from_limbs(a, F: int, mp):
    re = mp.ldexp(mp.mpf(kernels.limbs_to_int(a[0])), -F)
    im = mp.ldexp(mp.mpf(kernels.limbs_to_int(a[1])), -F)
    return mp.mpc(re, im)


def _run_ladders(seeds, weights, K, ctx: PrecisionContext, backend=None):
    """Sum a batch of ladders given as (t0, r0, s) exponent triples.

    Each seed entry holds three complex *exponents* x with the actual seed
    being e^{2 pi i x}.  Returns one mpc per batch row plus the common bound.
    """
    wmax = int(np.abs(weights).max()) if len(weights) else 0
    plan = _plan(K, max(wmax, 1), ctx)
    mp_hi = _mp_at(plan.frac_bits + 32)
    two_pi_i = 2 * mp_hi.pi * mp_hi.j
    arrs = [np.empty((len(seeds), 2, plan.L + 1), dtype=np.int64) for _ in range(3)]
    for b, triple in enumerate(seeds):
        for a, x in zip(arrs, triple):
            a[b] = _to_limbs(mp_hi.exp(two_pi_i * x), plan.frac_bits, plan.L)
    acc = kernels.ladder_sum(arrs[0], arrs[1], arrs[2], weights, plan.L, backend=backend)
    vals = [_from_limbs(acc[b], plan.frac_bits, ctx.mp) for b in range(len(seeds))]
    return vals, plan.err


def _tau_hi(tau: TauLike, ctx: PrecisionContext):
    mp = _mp_at(ctx.wp + 64)
    return to_mpc(tau, mp)


# --------------------------------------------------------------------------
# q-series (Chi / Jacobi)


def qseries_batch(weights_of, taus: Sequence[TauLike], ctx: PrecisionContext, k_factor: int = 1, backend=None):
    """sum_k w_k q^{k^2} at several points sharing one truncation K.

    ``weights_of(K)`` returns the int64 weight vector of length K + 1.
    """
    his = [_tau_hi(t, ctx) for t in taus]
    im_min = min(z.imag for z in his)
    _check_im(im_min)
    K, tail = truncation_K(im_min, 1, ctx)
    if k_factor > 1:
        K = k_factor * (K + 1) - 1
        tail = truncation_tail(im_min, 1, K, ctx)
    w = weights_of(K)
    seeds = [(0, z, 2 * z) for z in his]
    vals, kerr = _run_ladders(seeds, w, K, ctx, backend=backend)
    wmax = int(np.abs(w).max()) / 2 if len(w) else 0
    out = []
    for v in vals:
        err = max(wmax, 0.5) * tail + kerr + ctx.rounding(v)
        out.append(BoundedComplex(v, ctx.mp.mpf(err), ctx))
    return out


def truncation_tail(im_tau, weight_scale, K: int, ctx: PrecisionContext):
    """Tail majorant for a given K (same formula as :func:`truncation_K`)."""
    mp = ctx.mp
    c = 2 * mp.pi * _real(weight_scale, mp) * _real(im_tau, mp)
    return 2 * mp.exp(-c * (K + 1) ** 2) / (1 - mp.exp(-c * (2 * K + 3)))


def chi_series(n: int, taus: Sequence[TauLike], ctx: PrecisionContext, k_factor: int = 1, backend=None):
    return qseries_batch(lambda K: chi_weights(n, K), taus, ctx, k_factor, backend)


# --------------------------------------------------------------------------
# characteristic thetas


def _frac_mp(x: Fraction, mp):
    return mp.mpf(x.numerator) / x.denominator


def char_theta(mu, nu, tau: TauLike, ctx: PrecisionContext, k_factor: int = 1, backend=None) -> BoundedComplex:
    """theta_[mu,nu](tau), summed over n in [-K-1, K] after reducing mu to [0, 1)."""
    mu, nu = Fraction(mu), Fraction(nu)
    mp_hi = _mp_at(ctx.wp + 64)
    z = _tau_hi(tau, ctx)
    _check_im(z.imag)
    shift = math.floor(mu)
    mu -= shift  # theta_[mu+1,nu] = theta_[mu,nu]
    K, tail = truncation_K(z.imag, Fraction(1, 2), ctx)
    if k_factor > 1:
        K = k_factor * (K + 1) - 1
        tail = truncation_tail(z.imag, Fraction(1, 2), K, ctx)
    m, v = _frac_mp(mu, mp_hi), _frac_mp(nu, mp_hi)
    m1 = 1 - m
    # exponents divided by 2 pi i: (x^2 tau)/2 + nu x  for x = n + mu
    pos = (z * m * m / 2 + v * m, z * (2 * m + 1) / 2 + v, z)
    neg = (z * m1 * m1 / 2 - v * m1, z * (2 * m1 + 1) / 2 - v, z)
    w = np.ones(K + 1, dtype=np.int64)
    (a, b), kerr = _run_ladders([pos, neg], w, K, ctx, backend=backend)
    val = a + b
    err = tail + 2 * kerr + ctx.rounding(val)
    return BoundedComplex(val, ctx.mp.mpf(err), ctx)


# --------------------------------------------------------------------------
# public entry points


def evaluate(kind: ThetaKind, tau: TauLike, ctx: PrecisionContext, k_factor: int = 1, backend=None) -> BoundedComplex:
    """Value of the series ``kind`` at ``tau`` with an absolute error bound.

    ``k_factor`` multiplies every truncation length; it exists to check
    that the reported bounds are honest.  A :class:`BoundedComplex` tau is
    treated as exact.
    """
    if isinstance(kind, Chi):
        return chi_series(kind.n, [tau], ctx, k_factor, backend)[0]
    if isinstance(kind, Jacobi):
        return chi_series(1, [tau], ctx, k_factor, backend)[0]
    if isinstance(kind, BigTheta):
        return evaluate(Jacobi(), tau, ctx, k_factor, backend).square()
    if isinstance(kind, OddTheta):
        return evaluate(Chi(4), tau, ctx, k_factor, backend).square()
    if isinstance(kind, Char):
        return char_theta(kind.mu, kind.nu, tau, ctx, k_factor, backend)
    if isinstance(kind, FRatio):
        num = char_theta(Fraction(kind.r, kind.d), kind.nu, tau, ctx, k_factor, backend)
        den = char_theta(0, kind.nu, tau, ctx, k_factor, backend)
        return num / den
    if isinstance(kind, DivisorSum):
        return divisor_sum(kind.n, tau, ctx, k_factor, backend)
    raise TypeError(f"unknown theta kind {kind!r}")


def divisor_sum(n: int, tau: TauLike, ctx: PrecisionContext, k_factor: int = 1, backend=None) -> BoundedComplex:
    DivisorSum(n)  # domain check
    z = _tau_hi(tau, ctx)
    den = evaluate(BigTheta(), z / 2, ctx, k_factor, backend)
    total = ctx.bounded(0)
    for d, sign in squarefree_divisors(n):
        num = den if d == n else evaluate(BigTheta(), z * (n // d) / 2, ctx, k_factor, backend)
        total = total + (num / den) * ctx.bounded(ctx.mp.mpf(sign) / d)
    return total


@dataclass
class Ladder:
    terms: list
    multiplications: int
    err: object


def q_power_ladder(tau: TauLike, K: int, weight_scale, ctx: PrecisionContext, backend=None) -> Ladder:
    """The values e^{2 pi i weight_scale k^2 tau} for k = 0..K.

    Computed with one exponential and two multiplications per step.
    """
    z = _tau_hi(tau, ctx)
    _check_im(z.imag)
    ws = Fraction(weight_scale)
    mp_hi = _mp_at(ctx.wp + 64)
    x = z * _frac_mp(ws, mp_hi)
    plan = _plan(K, 1, ctx)
    mp_f = _mp_at(plan.frac_bits + 32)
    two_pi_i = 2 * mp_f.pi * mp_f.j
    seeds = [_to_limbs(mp_f.exp(two_pi_i * e), plan.frac_bits, plan.L) for e in (0, x, 2 * x)]
    raw = kernels.ladder_terms(*seeds, K, plan.L, backend=backend)
    terms = [_from_limbs(raw[k], plan.frac_bits, ctx.mp) for k in range(K + 1)]
    return Ladder(terms, 2 * K, plan.err)
