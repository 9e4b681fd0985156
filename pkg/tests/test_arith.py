import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from cntheta.arith import (
    Case,
    CMPoint,
    Parity,
    kronecker,
    root_of_minus_one_mod,
    roots_of_minus_one,
    sigma0,
    sqrt_minus_one,
    squarefree_divisors,
    tau_point,
    validate_curve,
)
from cntheta.errors import BadPrimeFactor, FourDividesN, NoRoot, NonPositiveInput, NotSquarefree


def test_validate_examples():
    one = validate_curve(1)
    assert (one.m, one.e, one.case, one.n_mod_8, one.primes) == (1, 0, Case.ODD, 1, ())
    ten = validate_curve(10)
    assert (ten.m, ten.e, ten.case, ten.primes) == (5, 1, Case.EVEN, (5,))
    assert validate_curve(65).primes == (5, 13)


@pytest.mark.parametrize(
    "n, exc",
    [(3, BadPrimeFactor), (21, BadPrimeFactor), (25, NotSquarefree), (8, FourDividesN), (4, FourDividesN), (0, NonPositiveInput), (-5, NonPositiveInput)],
)
def test_validate_rejects(n, exc):
    with pytest.raises(exc):
        validate_curve(n)


def test_four_divides_checked_before_squarefree():
    # 4 | n implies n is not squarefree; the more specific error wins
    with pytest.raises(FourDividesN):
        validate_curve(20)


@given(st.integers(1, 3000))
def test_validity_matches_brute(n):
    try:
        validate_curve(n)
        ok = True
    except (NotSquarefree, BadPrimeFactor, FourDividesN):
        ok = False
    assert ok == oracles.is_valid_n(n)


def test_kronecker_examples():
    assert kronecker(3, 13) == 1
    assert kronecker(2, 5) == -1
    assert kronecker(0, 1) == 1
    assert kronecker(0, 5) == 0
    assert kronecker(1, 0) == 1 and kronecker(2, 0) == 0


@given(st.integers(-500, 500), st.integers(-300, 300).filter(lambda x: x != 0))
def test_kronecker_matches_definition(k, n):
    assert kronecker(k, n) == oracles.kronecker_brute(k, n)


@given(st.sampled_from([5, 13, 17, 65, 85, 221, 1105]))
def test_kronecker_even_for_one_mod_four(n):
    # chi(-k) = chi(k) for these moduli, which the folded series relies on
    assert all(kronecker(k, n) == kronecker(-k, n) for k in range(4 * n))


@pytest.mark.parametrize("m", [1, 5, 13, 17, 29, 65, 85, 145, 221, 1105])
def test_roots_of_minus_one_complete(m):
    assert roots_of_minus_one(m) == oracles.roots_of_minus_one_brute(m * m)


@pytest.mark.parametrize("m", [1, 5, 13, 17, 41, 65, 85, 205, 221])
@pytest.mark.parametrize("parity", [Parity.EVEN, Parity.ODD])
def test_sqrt_minus_one_smallest(m, parity):
    assert sqrt_minus_one(m, parity) == oracles.smallest_root(m * m, parity.value)


def test_sqrt_minus_one_examples():
    assert sqrt_minus_one(5) == 18
    assert sqrt_minus_one(5, Parity.ODD) == 7
    assert sqrt_minus_one(1) == 0
    assert sqrt_minus_one(1, Parity.ODD) == 1
    with pytest.raises(NoRoot):
        sqrt_minus_one(3)
    with pytest.raises(NoRoot):
        sqrt_minus_one(2)


def test_root_of_minus_one_mod():
    assert root_of_minus_one_mod(5) == 2
    assert root_of_minus_one_mod(25, Parity.ODD) == 7
    with pytest.raises(NoRoot):
        root_of_minus_one_mod(7)


def test_divisor_helpers():
    assert sigma0(1) == 1 and sigma0(65) == 4 and sigma0(12) == 6
    assert squarefree_divisors(65) == [(1, 1), (5, -1), (13, -1), (65, 1)]
    assert sum(s for _, s in squarefree_divisors(1105)) == 0


def test_tau_point():
    b, p = tau_point(validate_curve(5))
    assert (b, p) == (18, CMPoint(18, 50))
    b, p = tau_point(validate_curve(10))
    assert (b, p) == (18, CMPoint(43, 50))
    b, p = tau_point(validate_curve(2))
    assert (b, p) == (0, CMPoint(1, 2))
    with pytest.raises(NoRoot):
        tau_point(validate_curve(5), b=7)
