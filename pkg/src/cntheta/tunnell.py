"""Ternary-form representation counts deciding whether L(E_n, 1) vanishes.

For odd n: A = #{2x^2 + y^2 + 32z^2 = n}, B = #{2x^2 + y^2 + 8z^2 = n};
for n = 2m: A = #{4x^2 + y^2 + 32z^2 = m}, B = #{4x^2 + y^2 + 8z^2 = m}.
L(E_n, 1) = 0 exactly when 2A = B.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import kernels
from .arith import CurveInput, validate_curve
from .errors import NonPositiveInput

ODD_FORMS = ((2, 1, 32), (2, 1, 8))
EVEN_FORMS = ((4, 1, 32), (4, 1, 8))


@dataclass(frozen=True)
class TunnellCounts:
    n: int
    a_count: int
    b_count: int

    @property
    def vanishing(self) -> bool:
        return 2 * self.a_count == self.b_count


def count_reps(target: int, coeffs: tuple[int, int, int], backend: str | None = None) -> int:
    """Number of integer triples with c1 x^2 + c2 y^2 + c3 z^2 = target."""
    if target < 1:
        raise NonPositiveInput(f"target must be positive, got {target}")
    c1, c2, c3 = coeffs
    if min(coeffs) < 1:
        raise NonPositiveInput("form coefficients must be positive")
    return kernels.count_reps(target, c1, c2, c3, backend=backend)


def tunnell_vanishing(inp: CurveInput | int) -> TunnellCounts:
    if isinstance(inp, int):
        inp = validate_curve(inp)
    if inp.is_odd:
        target, (fa, fb) = inp.n, ODD_FORMS
    else:
        target, (fa, fb) = inp.m, EVEN_FORMS
    return TunnellCounts(inp.n, count_reps(target, fa), count_reps(target, fb))
