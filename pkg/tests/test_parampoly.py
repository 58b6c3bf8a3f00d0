import random
from fractions import Fraction

import pytest

from futakizero.parampoly import (ParamPolyError, PPoly, RatFunc, exact_div,
                                  poly_gcd, rational_roots)


def upoly(*coeffs):
    """Univariate polynomial in s from ascending coefficients."""
    names = ("s",)
    return PPoly(names, {(k,): Fraction(c) for k, c in enumerate(coeffs) if c})


class TestPolyGcd:
    def test_univariate(self):
        p = upoly(-1, 0, 1)          # s^2 - 1
        q = upoly(1, 2, 1)           # (s+1)^2
        assert poly_gcd(p, q) == upoly(1, 1)

    def test_coprime(self):
        assert poly_gcd(upoly(1, 1), upoly(-1, 1)) == upoly(1)

    def test_two_variables(self):
        names = ("a", "b")
        a = PPoly.var(names, "a")
        b = PPoly.var(names, "b")
        common = a + b
        f = common * (a - b)
        g = common * common
        assert poly_gcd(f, g) == common

    def test_exact_division_raises_when_inexact(self):
        with pytest.raises(ParamPolyError):
            exact_div(upoly(1, 1), upoly(0, 1))

    def test_random_products_reduce(self):
        rng = random.Random(21)
        for _ in range(40):
            f = upoly(*[rng.randint(-3, 3) for _ in range(rng.randint(1, 4))])
            g = upoly(*[rng.randint(-3, 3) for _ in range(rng.randint(1, 4))])
            h = upoly(*[rng.randint(-2, 2) for _ in range(rng.randint(2, 3))])
            if f.is_zero() or g.is_zero() or h.is_zero():
                continue
            gcd = poly_gcd(f * h, g * h)
            exact_div(gcd, poly_gcd(f, g) * h)  # h * gcd(f, g) divides it


class TestRatFunc:
    def test_reduction(self):
        num = upoly(-1, 0, 1) * upoly(1, 1)
        den = upoly(1, 1) * upoly(-3, 1)
        r = RatFunc(num, den)
        assert r.num == upoly(-1, 0, 1)
        assert r.den == upoly(-3, 1)

    def test_field_identities(self):
        rng = random.Random(9)
        for _ in range(30):
            num = upoly(*[rng.randint(-4, 4) for _ in range(3)])
            den = upoly(*[rng.randint(-4, 4) for _ in range(3)])
            if num.is_zero() or den.is_zero():
                continue
            r = RatFunc(num, den)
            one = RatFunc.const(("s",), 1)
            assert r * r.inverse() == one
            assert r + (-r) == RatFunc.const(("s",), 0)
            assert (r + one) - one == r

    def test_denominator_sign_normalized(self):
        r = RatFunc(upoly(1), upoly(0, -2))
        assert r.den == upoly(0, 2) or r.den == upoly(0, 1)
        assert not r.render().startswith("(-")

    def test_evaluate(self):
        r = RatFunc(upoly(1, 1), upoly(-1, 1))     # (1+s)/(s-1)
        assert r.evaluate({"s": Fraction(3)}) == Fraction(2)
        with pytest.raises(ZeroDivisionError):
            r.evaluate({"s": Fraction(1)})


class TestRationalRoots:
    def test_quadratic_with_double_root(self):
        p = upoly(-1, 0, 1) * upoly(1, 1)
        roots, irrational = rational_roots(p)
        assert roots == [Fraction(-1), Fraction(1)]
        assert not irrational

    def test_zero_root_and_fraction_root(self):
        # s * (2s - 1)
        p = upoly(0, -1, 2)
        roots, irrational = rational_roots(p)
        assert roots == [Fraction(0), Fraction(1, 2)]
        assert not irrational

    def test_irrational_flagged(self):
        roots, irrational = rational_roots(upoly(-2, 0, 1))   # s^2 - 2
        assert roots == []
        assert irrational

    def test_constant_has_no_roots(self):
        assert rational_roots(upoly(5)) == ([], False)
