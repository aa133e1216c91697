"""Field arithmetic in Q(xi): unit values, oracles, and axiom sweeps."""

from fractions import Fraction
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weylnf.errors import ContextMismatchError, DivisionByZeroError
from weylnf.scalars import CycloScalar, cyclotomic_poly, parse_scalar, xi_pow


def naive_mod_xk_minus_1(k, a, b):
    """Oracle: multiply polynomials in xi, reduce by xi^k = 1 only."""
    out = [Fraction(0)] * k
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            out[(i + j) % k] += ai * bj
    return out


def project(k, coeffs):
    """Project a xi-polynomial (any degree) to canonical form mod Phi_k."""
    total = CycloScalar.zero(k)
    for e, c in enumerate(coeffs):
        total = total + xi_pow(k, e) * c
    return total


def test_cyclotomic_polys():
    assert cyclotomic_poly(1) == (-1, 1)
    assert cyclotomic_poly(2) == (1, 1)
    assert cyclotomic_poly(3) == (1, 1, 1)
    assert cyclotomic_poly(4) == (1, 0, 1)
    assert cyclotomic_poly(6) == (1, -1, 1)
    assert cyclotomic_poly(12) == (1, 0, -1, 0, 1)


def test_xi_squared_is_one_at_k2():
    xi = CycloScalar.xi(2)
    assert xi * xi == CycloScalar.one(2)
    assert xi == CycloScalar.from_rational(2, -1)


def test_add_zero_identity():
    a = CycloScalar(4, [Fraction(1, 2), Fraction(3)])
    assert a + CycloScalar.zero(4) == a


def test_k4_product_against_mod_xk_oracle():
    # (1+xi)(1-xi) at k=4 via the xi^4=1 oracle, then projected mod Phi_4.
    one_plus = CycloScalar(4, [1, 1])
    one_minus = CycloScalar(4, [1, -1])
    raw = naive_mod_xk_minus_1(4, [Fraction(1), Fraction(1), Fraction(0), Fraction(0)],
                               [Fraction(1), Fraction(-1), Fraction(0), Fraction(0)])
    assert one_plus * one_minus == project(4, raw)
    assert one_plus * one_minus == CycloScalar.from_rational(4, 2)


def test_inv_unit_cases():
    assert CycloScalar.one(5).inv() == CycloScalar.one(5)
    # k=3: xi * xi^2 = 1
    assert xi_pow(3, 1).inv() == xi_pow(3, 2)


def test_inv_one_plus_xi_k4():
    a = CycloScalar(4, [1, 1])
    got = a.inv()
    assert a * got == CycloScalar.one(4)
    assert got == CycloScalar(4, [Fraction(1, 2), Fraction(-1, 2)])


def test_xi_pow_unit_cases():
    assert xi_pow(5, 5) == CycloScalar.one(5)
    assert xi_pow(2, 1) == CycloScalar.from_rational(2, -1)
    assert xi_pow(3, -1) == xi_pow(3, 2)


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5, 6])
def test_xi_pow_additivity(k):
    for a in range(-3 * k, 3 * k + 1):
        for b in range(-3 * k, 3 * k + 1):
            assert xi_pow(k, a) * xi_pow(k, b) == xi_pow(k, a + b)


def _rand_scalar(rng, k):
    d = len(cyclotomic_poly(k)) - 1
    return CycloScalar(k, [Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(d)])


def test_ring_axioms_random_sweep():
    rng = random.Random(20240809)
    for _ in range(1000):
        k = rng.choice([1, 2, 3, 4, 5, 6])
        a, b, c = (_rand_scalar(rng, k) for _ in range(3))
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a + b == b + a
        assert a * b == b * a
        assert a * (b + c) == a * b + a * c


def test_inverse_two_sided_random():
    rng = random.Random(7)
    count = 0
    while count < 200:
        k = rng.choice([1, 2, 3, 4, 5, 6])
        a = _rand_scalar(rng, k)
        if a.is_zero():
            continue
        count += 1
        assert a * a.inv() == CycloScalar.one(k)
        assert a.inv() * a == CycloScalar.one(k)


def test_zero_division_raises():
    with pytest.raises(DivisionByZeroError):
        CycloScalar.zero(3).inv()


def test_context_mismatch_raises():
    with pytest.raises(ContextMismatchError):
        CycloScalar.one(2) + CycloScalar.one(3)


@given(st.integers(min_value=1, max_value=6),
       st.lists(st.fractions(min_value=-9, max_value=9, max_denominator=9),
                min_size=1, max_size=6))
@settings(max_examples=200, deadline=None)
def test_reduction_matches_projection(k, coeffs):
    # Constructing from a long coefficient list equals summing xi^e terms.
    direct = CycloScalar(k, coeffs)
    assert direct == project(k, coeffs)


def test_rendering_round_trip():
    cases = [
        CycloScalar.from_rational(3, Fraction(1, 2)),
        CycloScalar(4, [Fraction(1, 2), Fraction(3)]),
        CycloScalar(4, [0, -1]),
        CycloScalar(3, [Fraction(-1, 2), Fraction(-2, 7)]),
        CycloScalar.zero(5),
        CycloScalar(5, [0, 1, 0, Fraction(3)]),
    ]
    for a in cases:
        assert parse_scalar(a.k, str(a)) == a


def test_rendering_examples():
    assert str(CycloScalar.from_rational(2, Fraction(1, 2))) == "1/2"
    assert str(CycloScalar(4, [Fraction(1, 2), Fraction(0)])) == "1/2"
    a = CycloScalar(5, [Fraction(1, 2), 0, Fraction(3)])
    assert str(a) == "1/2 + 3*xi^2"
    assert str(CycloScalar.zero(3)) == "0"
    assert str(CycloScalar(4, [0, -1])) == "-xi"
