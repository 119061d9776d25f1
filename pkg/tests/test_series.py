from fractions import Fraction

import pytest

from tautcalc.scalars import (FormalSeries, LOG2, Scalar, builtin_series,
                              harmonic, harmonic_symbol, sech_squared_half,
                              tanh_series, zeta_negative_odd,
                              zeta_prime_symbol)


def test_sech_squared_from_tanh_route():
    # independent oracle: derivative of 2*tanh(z/2) from Bernoulli numbers
    order = 12
    q = sech_squared_half(order)
    t = tanh_series("z", order + 1)
    half = FormalSeries("z", order + 1,
                        {k: c * Fraction(1, 2 ** k)
                         for k, c in t.coefficients().items()})
    alt = half.derivative() * 2
    for k in range(order):
        assert q.coefficient(k) == alt.coefficient(k), k


def test_sech_squared_frozen_values():
    q = sech_squared_half(8)
    assert q.coefficient(0) == Scalar.coerce(1)
    assert q.coefficient(2) == Scalar.coerce(Fraction(-1, 4))
    assert q.coefficient(4) == Scalar.coerce(Fraction(1, 24))
    assert q.coefficient(6) == Scalar.coerce(Fraction(-17, 2880))
    assert all(not q.coefficient(k) for k in range(1, 8, 2))


def test_exp_log_inverse_pair():
    s = FormalSeries("z", 9, {1: 1, 3: Fraction(2, 5), 4: -2})
    assert s.exp().log() == s
    t = FormalSeries("z", 9, {0: 1, 1: 1})
    assert t.log().exp() == t


def test_exp_log_preconditions():
    with pytest.raises(ValueError):
        FormalSeries("z", 4, {0: 1}).exp()
    with pytest.raises(ValueError):
        FormalSeries("z", 4, {0: 2}).log()
    with pytest.raises(ValueError):
        FormalSeries("z", 4, {1: 1}).inverse()


def test_compose_even():
    sq = FormalSeries("z", 6, {2: 1})
    assert sq.compose_even() == FormalSeries("z", 3, {1: -1})
    with pytest.raises(ValueError):
        FormalSeries("z", 4, {1: 1}).compose_even()


def test_compose_even_multiplicative():
    s = FormalSeries("z", 12, {0: 1, 2: Fraction(1, 3), 6: -2})
    t = FormalSeries("z", 12, {0: 2, 4: Fraction(5, 7)})
    left = (s * t).compose_even()
    right = s.compose_even() * t.compose_even()
    assert left == right


def test_derivative_and_arithmetic():
    s = FormalSeries("z", 5, {0: 3, 2: Fraction(1, 2), 5: 7})
    ds = s.derivative()
    assert ds.coefficient(1) == Scalar.coerce(1)
    assert ds.coefficient(4) == Scalar.coerce(35)
    assert (s - s).is_zero()
    inv = FormalSeries("z", 8, {0: 1, 1: 1}).inverse()
    assert inv.coefficient(5) == Scalar.coerce(-1)


def test_truncation_is_exact():
    a = FormalSeries("z", 3, {1: 1})
    b = FormalSeries("z", 9, {0: 1, 5: 4})
    assert (a * b).order == 3
    assert (a * b).coefficient(1) == Scalar.coerce(1)


def test_rodd_coefficients():
    r = builtin_series("rodd", 7)
    Z1 = zeta_prime_symbol(1)
    assert r.coefficient(1) == Z1 * 6 - Fraction(1, 4) + LOG2 * Fraction(2, 3)
    # displayed formula at every odd index
    from math import factorial
    for k in (1, 2, 3):
        z = zeta_negative_odd(k)
        bracket = (zeta_prime_symbol(k) * (2 * (4 ** k - 1))
                   + Scalar.from_rational((4 ** k - 1) * z * harmonic(2 * k - 1))
                   - LOG2 * (2 * 4 ** k * z))
        assert r.coefficient(2 * k - 1) == bracket / factorial(2 * k - 1)
    assert all(not r.coefficient(m) for m in range(0, 8, 2))


def test_ch_even_defect_coefficients():
    u = builtin_series("ch-even-defect", 5)
    Z1 = zeta_prime_symbol(1)
    assert u.coefficient(1) == Z1 * (-12) + Fraction(1, 2) - LOG2 * Fraction(4, 3)
    from math import factorial
    k = 2
    bracket = (zeta_prime_symbol(k) / zeta_negative_odd(k)
               + Scalar.from_rational(harmonic(3) / 2)
               - LOG2 * Fraction(16, 15))
    assert u.coefficient(3) == bracket / factorial(3)


def test_harmonic_symbol_series():
    h = builtin_series("harmonic-odd", 6)
    assert h.coefficient(1) == harmonic_symbol(1)
    assert h.coefficient(5) == harmonic_symbol(3)
    assert not h.coefficient(2)


def test_builtin_qtilde_constant_term():
    q = builtin_series("qtilde", 4)
    assert q.coefficient(0) == Scalar.coerce(1)


def test_builtin_unknown_name():
    with pytest.raises(ValueError):
        builtin_series("nope", 4)
    with pytest.raises(ValueError):
        builtin_series("qtilde", 0)


def test_rodd_matches_pontrjagin_bracket():
    # The rodd coefficient equals -(4^k-1)(-1)^(k+1) zeta(1-2k) times the
    # bracket that multiplies the odd power sum in the Pontrjagin values.
    from math import factorial
    for k in (1, 2, 3):
        z = zeta_negative_odd(k)
        bracket = (zeta_prime_symbol(k) * (Fraction(2) / z)
                   + Scalar.from_rational(harmonic(2 * k - 1))
                   - LOG2 * Fraction(2 * 4 ** k, 4 ** k - 1))
        lhs = bracket * (Fraction((4 ** k - 1) * (-1) ** (k + 1)) * z) * Fraction((-1) ** k)
        rodd = builtin_series("rodd", 2 * k)
        assert rodd.coefficient(2 * k - 1) * factorial(2 * k - 1) == -lhs
