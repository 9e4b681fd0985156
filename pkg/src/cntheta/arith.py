"""Exact integer arithmetic: curve validation, Kronecker symbols, roots of -1.

Everything here is pure integer code.  Nothing touches floating point, so
results are reproducible bit for bit and safe to share between threads.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import BadPrimeFactor, FourDividesN, NoRoot, NonPositiveInput, NotSquarefree


class Case(enum.Enum):
    ODD = "odd"
    EVEN = "even"


class Parity(enum.Enum):
    EVEN = 0
    ODD = 1


def factorize(n: int) -> dict[int, int]:
    """Trial division; fine for the n <= 10**7 this package works with."""
    if n < 1:
        raise NonPositiveInput(f"cannot factor {n}")
    out: dict[int, int] = {}
    while n % 2 == 0:
        out[2] = out.get(2, 0) + 1
        n //= 2
    p = 3
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


@dataclass(frozen=True)
class CurveInput:
    """A validated n for the congruent number curve y^2 = x^3 - n^2 x.

    ``n = 2**e * m`` with ``e`` in {0, 1} and every prime of ``m``
    congruent to 1 mod 4.
    """

    n: int
    m: int
    e: int
    primes: tuple[int, ...]
    case: Case
    n_mod_8: int

    @property
    def is_odd(self) -> bool:
        return self.case is Case.ODD


def validate_curve(n: int) -> CurveInput:
    if n < 1:
        raise NonPositiveInput(f"n must be positive, got {n}")
    if n % 4 == 0:
        raise FourDividesN(f"4 divides {n}")
    fac = factorize(n)
    if any(k > 1 for k in fac.values()):
        raise NotSquarefree(f"{n} is not squarefree")
    bad = [p for p in fac if p % 4 == 3]
    if bad:
        raise BadPrimeFactor(f"{n} has prime factor {bad[0]} = 3 mod 4")
    e = fac.pop(2, 0)
    m = n >> e
    return CurveInput(
        n=n,
        m=m,
        e=e,
        primes=tuple(sorted(fac)),
        case=Case.EVEN if e else Case.ODD,
        n_mod_8=n % 8,
    )


def is_valid_curve(n: int) -> bool:
    try:
        validate_curve(n)
    except (NotSquarefree, BadPrimeFactor, FourDividesN, NonPositiveInput):
        return False
    return True


def kronecker(k: int, n: int) -> int:
    """Kronecker symbol (k/n) for any integer k and any integer n.

    ``n == 0`` gives 1 when k = +-1 and 0 otherwise, the usual convention.
    """
    if n == 0:
        return 1 if abs(k) == 1 else 0
    if k % 2 == 0 and n % 2 == 0:
        return 0
    result = 1
    if n < 0:
        n = -n
        if k < 0:
            result = -result
    v = (n & -n).bit_length() - 1
    n >>= v
    if v & 1 and k % 8 in (3, 5):
        result = -result
    # n is now odd and positive: Jacobi symbol with reciprocity
    k %= n
    while k:
        while k % 2 == 0:
            k //= 2
            if n % 8 in (3, 5):
                result = -result
        k, n = n, k
        if k % 4 == 3 and n % 4 == 3:
            result = -result
        k %= n
    return result if n == 1 else 0


def kronecker_period(n: int) -> int:
    """A period of k -> (k/n) for n > 0."""
    return n if n % 4 != 2 else 4 * n


def _sqrt_minus_one_mod_prime(p: int) -> int:
    if p == 2:
        return 1
    if p % 4 != 1:
        raise NoRoot(f"-1 is not a square modulo {p}")
    # c^((p-1)/4) is a root of -1 for any quadratic non-residue c
    c = 2
    while pow(c, (p - 1) // 2, p) != p - 1:
        c += 1
    return pow(c, (p - 1) // 4, p)


def _hensel_square(r: int, p: int) -> int:
    """Lift r with r^2 = -1 (mod p) to a root modulo p^2."""
    p2 = p * p
    t = ((r * r + 1) // p) * pow(2 * r, -1, p) % p
    return (r - t * p) % p2


def roots_of_minus_one(mod_sqrt: int) -> list[int]:
    """All x in [0, m^2) with x^2 = -1 (mod m^2), for odd squarefree m."""
    if mod_sqrt == 1:
        return [0]
    fac = factorize(mod_sqrt)
    if any(k > 1 for k in fac.values()) or 2 in fac:
        raise NoRoot(f"{mod_sqrt} must be odd and squarefree")
    m2 = mod_sqrt * mod_sqrt
    local = []
    for p in fac:
        r = _hensel_square(_sqrt_minus_one_mod_prime(p), p)
        local.append((p * p, r))
    roots = []
    for signs in itertools.product((1, -1), repeat=len(local)):
        x = 0
        for (q, r), s in zip(local, signs):
            other = m2 // q
            x += (s * r % q) * other * pow(other, -1, q)
        roots.append(x % m2)
    return sorted(roots)


def sqrt_minus_one(m: int, parity: Parity = Parity.EVEN) -> int:
    """Smallest b in [0, 2m^2) of the given parity with b^2 = -1 (mod m^2)."""
    if m < 1 or m % 2 == 0:
        raise NoRoot(f"m must be odd and positive, got {m}")
    m2 = m * m
    want = parity.value
    best = None
    for r in roots_of_minus_one(m):
        # m^2 is odd, so exactly one of r, r + m^2 has each parity
        b = r if r % 2 == want else r + m2
        if best is None or b < best:
            best = b
    return best


def root_of_minus_one_mod(modulus: int, parity: Parity | None = None) -> int:
    """Smallest b >= 0 with b^2 = -1 (mod modulus), optionally of given parity.

    ``modulus`` may be any positive integer whose odd primes are all 1 mod 4
    and which is not divisible by 4.  Brute force: only used for the small
    moduli of the identity checks.
    """
    step = 2 * modulus if parity is not None else modulus
    for b in range(step):
        if (b * b + 1) % modulus == 0 and (parity is None or b % 2 == parity.value):
            return b
    raise NoRoot(f"no square root of -1 modulo {modulus}")


def sigma0(n: int) -> int:
    if n < 1:
        raise NonPositiveInput(f"sigma0 needs n >= 1, got {n}")
    return math.prod(k + 1 for k in factorize(n).values())


def squarefree_divisors(n: int) -> list[tuple[int, int]]:
    """Divisors d of rad(n) paired with the Mobius sign (-1)^omega(d)."""
    primes = sorted(factorize(n))
    out = []
    for r in range(len(primes) + 1):
        for combo in itertools.combinations(primes, r):
            out.append((math.prod(combo), -1 if r % 2 else 1))
    out.sort()
    return out


def is_perfect_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


@dataclass(frozen=True)
class CMPoint:
    """The point (b + i)/d of the upper half-plane, kept as exact integers."""

    b: int
    d: int

    def __post_init__(self):
        if self.d <= 0:
            raise NonPositiveInput(f"denominator must be positive, got {self.d}")

    @property
    def real(self) -> Fraction:
        return Fraction(self.b, self.d)

    @property
    def imag(self) -> Fraction:
        return Fraction(1, self.d)

    def __str__(self) -> str:
        return f"({self.b}+i)/{self.d}"


def tau_point(inp: CurveInput, b: int | None = None) -> tuple[int, CMPoint]:
    """Base root b and the CM point at which the theta value encodes L(E_n, 1).

    Odd n: (b + i)/(2n^2).  Even n = 2m: (b + m^2 + i)/(2m^2).
    """
    m = inp.m
    if b is None:
        b = sqrt_minus_one(m, Parity.EVEN)
    if b % 2 or (b * b + 1) % (m * m):
        raise NoRoot(f"b={b} is not an even root of -1 modulo {m}^2")
    offset = 0 if inp.is_odd else m * m
    return b, CMPoint(b + offset, 2 * m * m)
