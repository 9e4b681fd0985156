"""Central L-values of congruent number curves from CM values of theta functions."""

__version__ = "0.1.0"

from .arith import CMPoint, CurveInput, kronecker, sqrt_minus_one, validate_curve
from .errors import DomainError
from .hpc import BoundedComplex, PrecisionContext
from .identities import verify_corthetaf, verify_factorization, verify_gauss, verify_lemtheta1
from .lvalue import LValueReport, Vanishing, Verdict, central_lvalue, classify_congruent, predicted_sha, theta_lower_bound
from .theta import BigTheta, Char, Chi, DivisorSum, FRatio, Jacobi, OddTheta, evaluate
from .tunnell import TunnellCounts, count_reps, tunnell_vanishing
from .zeros import AtkinLehnerData, ZeroOrderReport, atkin_lehner_apply, mock_heegner_scan, vanishing_order, verify_atkin_lehner

__all__ = [
    "AtkinLehnerData", "BigTheta", "BoundedComplex", "CMPoint", "Char", "Chi", "CurveInput",
    "DivisorSum", "DomainError", "FRatio", "Jacobi", "LValueReport", "OddTheta", "PrecisionContext",
    "TunnellCounts", "Vanishing", "Verdict", "ZeroOrderReport", "atkin_lehner_apply", "central_lvalue",
    "classify_congruent", "count_reps", "evaluate", "kronecker", "mock_heegner_scan", "predicted_sha",
    "sqrt_minus_one", "theta_lower_bound", "tunnell_vanishing", "validate_curve", "vanishing_order",
    "verify_atkin_lehner", "verify_corthetaf", "verify_factorization", "verify_gauss", "verify_lemtheta1",
]
