"""Working-precision context and error-carrying complex numbers.

Arithmetic is delegated to mpmath.  Every :class:`PrecisionContext` owns a
private mpmath context, so evaluations never touch mpmath's global state
and several precisions can coexist in one process.

Error accounting is a single conservative scalar per value: the caller's
truncation bound plus a fixed allowance of 4 ulps per operation.  It is
not interval arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import mpmath

from .errors import NonPositiveInput

DEFAULT_BITS = 128
ROUNDING_ULPS = 4


@dataclass(frozen=True)
class PrecisionContext:
    """Precision ``bits`` plus ``guard`` extra bits used internally."""

    bits: int = DEFAULT_BITS
    guard: int = 16
    mp: mpmath.ctx_mp.MPContext = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.bits < 64:
            raise ValueError(f"precision must be at least 64 bits, got {self.bits}")
        if self.guard < 8:
            raise ValueError(f"guard must be at least 8 bits, got {self.guard}")
        mp = mpmath.MPContext()
        mp.prec = self.bits + self.guard
        object.__setattr__(self, "mp", mp)

    @property
    def wp(self) -> int:
        """Working precision in bits."""
        return self.bits + self.guard

    @property
    def target_tail(self):
        """Absolute tolerance that series tails must meet."""
        return self.mp.ldexp(1, -self.wp)

    @property
    def eps(self):
        return self.mp.ldexp(1, 1 - self.wp)

    def doubled(self) -> "PrecisionContext":
        return PrecisionContext(2 * self.bits, self.guard)

    def rounding(self, magnitude):
        return ROUNDING_ULPS * self.eps * abs(magnitude)

    def pi(self):
        return self.mp.pi

    def bounded(self, value, err=0) -> "BoundedComplex":
        return BoundedComplex(self.mp.mpc(value), self.mp.mpf(err), self)


@dataclass(frozen=True)
class BoundedComplex:
    """A complex value with an absolute error bound: ``|value - exact| <= err``."""

    value: mpmath.mpc
    err: mpmath.mpf
    ctx: PrecisionContext = field(repr=False, compare=False)

    def __post_init__(self):
        if self.err < 0:
            raise ValueError("error bound must be nonnegative")

    @property
    def real(self):
        return self.value.real

    @property
    def imag(self):
        return self.value.imag

    def __abs__(self):
        return abs(self.value)

    def _coerce(self, other) -> "BoundedComplex":
        if isinstance(other, BoundedComplex):
            return other
        return self.ctx.bounded(other)

    def __add__(self, other):
        o = self._coerce(other)
        v = self.value + o.value
        return BoundedComplex(v, self.err + o.err + self.ctx.rounding(v), self.ctx)

    __radd__ = __add__

    def __neg__(self):
        return BoundedComplex(-self.value, self.err, self.ctx)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        v = self.value * o.value
        err = abs(self.value) * o.err + abs(o.value) * self.err + self.err * o.err
        return BoundedComplex(v, err + self.ctx.rounding(v), self.ctx)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        den = abs(o.value) - o.err
        if den <= 0:
            raise ZeroDivisionError("divisor is not bounded away from zero")
        v = self.value / o.value
        err = (self.err + abs(v) * o.err) / den
        return BoundedComplex(v, err + self.ctx.rounding(v), self.ctx)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def conj(self) -> "BoundedComplex":
        return BoundedComplex(self.ctx.mp.conj(self.value), self.err, self.ctx)

    def square(self) -> "BoundedComplex":
        return self * self

    def abs2(self):
        """``|value|^2`` with its error bound, as a real pair (value, err)."""
        a = abs(self.value)
        err = 2 * a * self.err + self.err**2
        v = a * a
        return v, err + self.ctx.rounding(v)

    def contains(self, exact, slack=0) -> bool:
        return abs(self.value - exact) <= self.err + slack


def agm(a, b, ctx: PrecisionContext) -> BoundedComplex:
    """Arithmetic-geometric mean of two positive reals."""
    mp = ctx.mp
    a, b = mp.mpf(a), mp.mpf(b)
    if a <= 0 or b <= 0:
        raise NonPositiveInput("agm needs positive arguments")
    tol = mp.ldexp(1, -ctx.wp - ctx.guard)
    # the iteration keeps b <= a after the first step; both stay between them
    for _ in range(ctx.wp + 64):
        if abs(a - b) <= tol * a:
            break
        a, b = (a + b) / 2, mp.sqrt(a * b)
    else:  # pragma: no cover - quadratic convergence makes this unreachable
        raise RuntimeError("agm did not converge")
    v = (a + b) / 2
    return BoundedComplex(mp.mpc(v), abs(a - b) + ctx.rounding(v), ctx)


def lemniscate(ctx: PrecisionContext) -> BoundedComplex:
    """The lemniscate constant pi / agm(1, sqrt 2) = 2.62205755429..."""
    m = agm(1, ctx.mp.sqrt(2), ctx)
    return ctx.bounded(ctx.mp.pi) / m


def sqrt_varpi_over_pi(ctx: PrecisionContext) -> BoundedComplex:
    """sqrt(varpi / pi) = 1 / sqrt(agm(1, sqrt 2)); real positive."""
    m = agm(1, ctx.mp.sqrt(2), ctx)
    v = 1 / ctx.mp.sqrt(m.real)
    # d/dm m^(-1/2) = -m^(-3/2)/2
    err = m.err * v / (2 * (m.real - m.err))
    return BoundedComplex(ctx.mp.mpc(v), err + ctx.rounding(v), ctx)
