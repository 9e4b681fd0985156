"""Numerical checks of the structural theta identities behind the L-value formula.

Each check returns an :class:`IdentityCheck` holding |LHS - RHS| and the
combined error bound of both sides; the identity is confirmed when the
residual does not exceed the bound.  Nothing here raises on a failed
identity: asserting is the caller's job.

Notation: tau_X = (b + i)/X, Theta = theta^2, Theta_o = theta_chi_4^2, and
theta_[mu,nu](tau) = sum_n exp(pi i (n+mu)^2 tau + 2 pi i nu (n+mu)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .arith import CMPoint, factorize, squarefree_divisors
from .errors import PreconditionViolated
from .hpc import BoundedComplex, PrecisionContext, lemniscate, sqrt_varpi_over_pi
from .lvalue import central_lvalue
from .theta import BigTheta, Char, Chi, DivisorSum, FRatio, Jacobi, OddTheta, _mp_at, evaluate


@dataclass(frozen=True)
class IdentityCheck:
    name: str
    residual: object
    err: object

    @property
    def ok(self) -> bool:
        return self.residual <= self.err


def _check(name: str, lhs: BoundedComplex, rhs: BoundedComplex) -> IdentityCheck:
    d = lhs - rhs
    return IdentityCheck(name, abs(d.value), d.err)


def _abs(x: BoundedComplex) -> BoundedComplex:
    return BoundedComplex(x.ctx.mp.mpc(abs(x.value)), x.err, x.ctx)


def _sqrt(x: BoundedComplex) -> BoundedComplex:
    """Square root of a positive real with error e/(2 sqrt(v - e))."""
    mp = x.ctx.mp
    v = x.real
    if v - x.err <= 0:
        raise PreconditionViolated("square root of a value not bounded away from zero")
    r = mp.sqrt(v)
    return BoundedComplex(mp.mpc(r), x.err / (2 * mp.sqrt(v - x.err)) + x.ctx.rounding(r), x.ctx)


def verify_gauss(ctx: PrecisionContext) -> list[IdentityCheck]:
    """Gauss's lemniscate series in theta form, plus the two auxiliary identities.

    (iv) carries the constant 2^{3/4}: with L(E_2, 1) = varpi/(2 sqrt 2) this
    is the value consistent with the general L-value formula.  (vi) compares
    moduli; the two sides differ by the phase e^{i pi/4} since every odd k
    has k^2 = 1 mod 8.
    """
    mp = ctx.mp
    s = sqrt_varpi_over_pi(ctx)
    th_half = evaluate(Jacobi(), CMPoint(1, 2), ctx)  # (1+i)/2
    th_i2 = evaluate(Jacobi(), CMPoint(0, 2), ctx)  # i/2
    t4 = evaluate(Chi(4), CMPoint(0, 8), ctx)  # i/8
    t4s = evaluate(Chi(4), CMPoint(1, 8), ctx)  # (1+i)/8
    pi = ctx.bounded(mp.pi)
    l1 = central_lvalue(1, ctx, with_tunnell=False)
    l2 = central_lvalue(2, ctx, with_tunnell=False)
    L1 = ctx.bounded(l1.lvalue, l1.err)
    L2 = ctx.bounded(l2.lvalue, l2.err)
    c34 = ctx.bounded(mp.root(2, 4) ** 3)
    return [
        _check("(i) theta((1+i)/2) = sqrt(varpi/pi)", th_half, s),
        _check("(ii) theta_chi4(i/8) = sqrt(varpi/pi)", t4, s),
        _check("(iii) 2 sqrt(L(E_1,1)/pi) = theta((1+i)/2)", 2 * _sqrt(L1 / pi), th_half),
        _check("(iv) 2^(3/4) sqrt(L(E_2,1)/pi) = theta_chi4(i/8)", c34 * _sqrt(L2 / pi), t4),
        _check("(v) theta(i/2)^2 = sqrt2 theta((1+i)/2)^2", th_i2.square(), ctx.bounded(mp.sqrt(2)) * th_half.square()),
        _check("(vi) |theta_chi4(i/8)| = |theta_chi4((1+i)/8)|", _abs(t4), _abs(t4s)),
    ]


def lvalue_oracles(ctx: PrecisionContext) -> list[IdentityCheck]:
    """L(E_1, 1) = varpi/4 and L(E_2, 1) = varpi/(2 sqrt 2)."""
    w = lemniscate(ctx)
    out = []
    for n, target in ((1, w / 4), (2, w / (2 * ctx.mp.sqrt(2)))):
        rep = central_lvalue(n, ctx, with_tunnell=False)
        out.append(_check(f"L(E_{n},1)", ctx.bounded(rep.lvalue, rep.err), target))
    return out


def _no_bad_primes(x: int) -> bool:
    return all(p % 4 != 3 for p in factorize(x))


def verify_factorization(a: int, a1: int, D: int, b: int, ctx: PrecisionContext) -> IdentityCheck:
    """Factorization of Theta(D tau_A / 2) into products of characteristic thetas.

    sqrt(2/(D^2 a1)) sum_{r<D} theta_[ar/D, 1/2](tau_{A^2 A1})
    * conj(theta_[r/D, a/2](tau_{A1})) = Theta(D tau_A / 2).

    The conjugated factor has second characteristic a/2 (the two-variable
    factorization pairs nu with -a nu); with 1/2 in its place
    the identity only survives when D divides (a - 1)/2.  It holds for even
    b; for odd b the residual is reported as is.
    """
    if D < 1 or a < 1 or a1 < 1:
        raise PreconditionViolated("a, a1, D must be positive")
    if not _no_bad_primes(D):
        raise PreconditionViolated(f"D = {D} has a prime factor 3 mod 4")
    if a % 4 != 1 or a1 % 4 != 1:
        raise PreconditionViolated("a and a1 must be 1 mod 4")
    M = D * a * a * a1
    if (b * b + 1) % M:
        raise PreconditionViolated(f"b^2 = {b * b} is not -1 mod {M}")
    mp_hi = _mp_at(ctx.wp + 64)
    z = mp_hi.mpc(b, 1)
    t_aa, t_a1, t_a = z / (a * a * a1), z / a1, z / a
    total = ctx.bounded(0)
    for r in range(D):
        u = evaluate(Char(Fraction(a * r, D), Fraction(1, 2)), t_aa, ctx)
        v = evaluate(Char(Fraction(r, D), Fraction(a, 2)), t_a1, ctx)
        total = total + u * v.conj()
    lhs = ctx.bounded(ctx.mp.sqrt(ctx.mp.mpf(2) / (D * D * a1))) * total
    rhs = evaluate(BigTheta(), D * t_a / 2, ctx)
    return _check(f"factorization a={a} a1={a1} D={D} b={b}", lhs, rhs)


def verify_corthetaf(n_prime: int, a: int, a1: int, b: int, ctx: PrecisionContext) -> IdentityCheck:
    """Divisor-sum theta Theta_n'(tau_A) as a character sum of theta ratios.

    Theta_n'(tau_A) = mu(n')/n' + (1/n') sum_{r in (Z/n')^x}
    f_{ar}(tau_{A^2 A1}) conj(f^{a/2}_r(tau_{A1})),
    f^nu_r = theta_[r/n', nu]/theta_[0, nu], f = f^{1/2}; mu(n') is
    sum over squarefree divisors of (-1)^omega, i.e. 1 for n' = 1 and 0 otherwise.
    Needs gcd(a, n') = 1 so that r -> ar permutes the units.
    """
    if n_prime < 1 or a < 1 or a1 < 1:
        raise PreconditionViolated("n', a, a1 must be positive")
    if any(p % 4 != 1 for p in factorize(n_prime)):
        raise PreconditionViolated(f"n' = {n_prime} must be a product of primes 1 mod 4")
    if a % 4 != 1 or a1 % 4 != 1:
        raise PreconditionViolated("a and a1 must be 1 mod 4")
    if math.gcd(a, n_prime) != 1:
        raise PreconditionViolated(f"gcd(a, n') = {math.gcd(a, n_prime)} != 1")
    M = n_prime * a * a * a1
    if (b * b + 1) % M:
        raise PreconditionViolated(f"b^2 = {b * b} is not -1 mod {M}")
    mp = ctx.mp
    mp_hi = _mp_at(ctx.wp + 64)
    z = mp_hi.mpc(b, 1)
    t_aa, t_a1, t_a = z / (a * a * a1), z / a1, z / a
    lhs = evaluate(DivisorSum(n_prime), t_a, ctx)
    mobius = sum(sign for _, sign in squarefree_divisors(n_prime))
    total = ctx.bounded(mp.mpf(mobius))
    for r in range(1, n_prime):
        if math.gcd(r, n_prime) != 1:
            continue
        u = evaluate(FRatio(a * r, n_prime), t_aa, ctx)
        v = evaluate(FRatio(r, n_prime, Fraction(a, 2)), t_a1, ctx)
        total = total + u * v.conj()
    rhs = total * ctx.bounded(mp.mpf(1) / n_prime)
    return _check(f"divisor sum n'={n_prime} a={a} a1={a1} b={b}", lhs, rhs)


def verify_lemtheta1(tau, ctx: PrecisionContext) -> IdentityCheck:
    """Theta(tau) + Theta_o(tau/4) = Theta(tau/2)."""
    z = _mp_at(ctx.wp + 64).mpc(tau.value if isinstance(tau, BoundedComplex) else tau)
    lhs = evaluate(BigTheta(), z, ctx) + evaluate(OddTheta(), z / 4, ctx)
    rhs = evaluate(BigTheta(), z / 2, ctx)
    return _check(f"Theta + Theta_o at {tau}", lhs, rhs)
