"""Exact arithmetic in the fraction field Q(params).

Coefficients of multihomogeneous polynomials, scalars of monomial maps and
span-solve results all live in Q(a, s, t, ...).  Elements are kept as reduced
ratios of integer-coefficient polynomials so that printed forms are canonical
and golden tests stay byte-stable.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


class ParamPolyError(ValueError):
    pass


def _prune(terms):
    return {e: c for e, c in terms.items() if c != 0}


class PPoly:
    """Polynomial with Fraction coefficients in a fixed ordered tuple of names."""

    __slots__ = ("names", "terms")

    def __init__(self, names, terms):
        self.names = tuple(names)
        self.terms = _prune(terms)

    @classmethod
    def zero(cls, names):
        return cls(names, {})

    @classmethod
    def const(cls, names, value):
        value = Fraction(value)
        if value == 0:
            return cls.zero(names)
        return cls(names, {(0,) * len(names): value})

    @classmethod
    def var(cls, names, name):
        i = tuple(names).index(name)
        expo = tuple(1 if j == i else 0 for j in range(len(names)))
        return cls(names, {expo: Fraction(1)})

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return all(all(e == 0 for e in expo) for expo in self.terms)

    def constant_value(self):
        if self.is_zero():
            return Fraction(0)
        if not self.is_constant():
            raise ParamPolyError("not a constant polynomial")
        return next(iter(self.terms.values()))

    def degree_in(self, i):
        return max((expo[i] for expo in self.terms), default=0)

    def total_degree(self):
        return max((sum(expo) for expo in self.terms), default=0)

    def __eq__(self, other):
        return isinstance(other, PPoly) and self.names == other.names and self.terms == other.terms

    def __hash__(self):
        return hash((self.names, tuple(sorted(self.terms.items()))))

    def _binop(self, other, sign):
        terms = dict(self.terms)
        for expo, c in other.terms.items():
            terms[expo] = terms.get(expo, Fraction(0)) + sign * c
        return PPoly(self.names, terms)

    def __add__(self, other):
        return self._binop(other, 1)

    def __sub__(self, other):
        return self._binop(other, -1)

    def __neg__(self):
        return PPoly(self.names, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = PPoly.const(self.names, other)
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, Fraction(0)) + c1 * c2
        return PPoly(self.names, terms)

    __rmul__ = __mul__

    def __pow__(self, k):
        result = PPoly.const(self.names, 1)
        for _ in range(k):
            result = result * self
        return result

    def scaled(self, factor):
        factor = Fraction(factor)
        return PPoly(self.names, {e: c * factor for e, c in self.terms.items()})

    def evaluate(self, values):
        """Evaluate at a dict name -> Fraction."""
        point = [Fraction(values[n]) for n in self.names]
        total = Fraction(0)
        for expo, c in self.terms.items():
            v = c
            for x, e in zip(point, expo):
                v *= x ** e
            total += v
        return total

    def sorted_terms(self):
        # display order: grade first, then earlier names first
        return sorted(self.terms.items(),
                      key=lambda item: (sum(item[0]), tuple(-k for k in item[0])))

    def render(self):
        """Canonical text form, ascending lex exponent order."""
        if self.is_zero():
            return "0"
        parts = []
        for expo, c in self.sorted_terms():
            mono = "*".join(
                n if e == 1 else f"{n}^{e}"
                for n, e in zip(self.names, expo) if e > 0
            )
            if not mono:
                body = _render_fraction(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{_render_fraction(abs(c))}*{mono}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(parts)

    def __repr__(self):
        return f"PPoly({self.render()!r})"


def _render_fraction(q):
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _int_content_and_primitive(p):
    """Largest Fraction c with p = c * (primitive integer-coefficient poly)."""
    if p.is_zero():
        return Fraction(1), p
    num_gcd = 0
    den_lcm = 1
    for c in p.terms.values():
        num_gcd = gcd(num_gcd, abs(c.numerator))
        den_lcm = den_lcm * c.denominator // gcd(den_lcm, c.denominator)
    content = Fraction(num_gcd, den_lcm)
    return content, p.scaled(1 / content)


def _leading(p):
    expo = max(p.terms)
    return expo, p.terms[expo]


def _monomial_divides(e1, e2):
    return all(a <= b for a, b in zip(e1, e2))


def exact_div(p, q):
    """Exact polynomial division p / q; raises ParamPolyError if not exact."""
    if q.is_zero():
        raise ParamPolyError("division by zero polynomial")
    names = p.names
    quotient = PPoly.zero(names)
    rest = p
    qe, qc = _leading(q)
    while not rest.is_zero():
        re, rc = _leading(rest)
        if not _monomial_divides(qe, re):
            raise ParamPolyError("inexact polynomial division")
        me = tuple(a - b for a, b in zip(re, qe))
        mono = PPoly(names, {me: rc / qc})
        quotient = quotient + mono
        rest = rest - mono * q
    return quotient


def _coeffs_in_main_var(p, nvars):
    """Split p in Q[x0,...,x_{k-1}] as a list of coefficients of x0^i, each a
    PPoly in the remaining names."""
    rest = p.names[1:]
    by_deg = {}
    for expo, c in p.terms.items():
        d = expo[0]
        by_deg.setdefault(d, {})[expo[1:]] = c
    top = max(by_deg, default=0)
    return [PPoly(rest, by_deg.get(i, {})) for i in range(top + 1)]


def _from_coeffs(coeffs, names):
    terms = {}
    for i, c in enumerate(coeffs):
        for expo, v in c.terms.items():
            terms[(i,) + expo] = v
    return PPoly(names, terms)


def _uni_degree(coeffs):
    for i in range(len(coeffs) - 1, -1, -1):
        if not coeffs[i].is_zero():
            return i
    return -1


def _pseudo_rem(f, g, names):
    """Pseudo-remainder of f by g, both coefficient lists over PPoly."""
    df, dg = _uni_degree(f), _uni_degree(g)
    lc_g = g[dg]
    r = list(f)
    while _uni_degree(r) >= dg:
        dr = _uni_degree(r)
        lc_r = r[dr]
        r = [c * lc_g for c in r]
        shift = dr - dg
        for i in range(dg + 1):
            r[i + shift] = r[i + shift] - lc_r * g[i]
        while r and r[-1].is_zero():
            r.pop()
        if not r:
            break
    return r


def poly_gcd(p, q):
    """Gcd of two PPoly, primitive with positive leading coefficient."""
    if p.names != q.names:
        raise ParamPolyError("gcd across different parameter tuples")
    if p.is_zero():
        return _positive_primitive(q)
    if q.is_zero():
        return _positive_primitive(p)
    if not p.names:
        return PPoly.const(p.names, 1)
    _, p = _int_content_and_primitive(p)
    _, q = _int_content_and_primitive(q)
    return _positive_primitive(_gcd_rec(p, q))


def _content_poly(coeffs):
    names = coeffs[0].names if coeffs else ()
    g = PPoly.zero(names)
    for c in coeffs:
        g = _gcd_rec(g, c)
        if g.is_constant() and not g.is_zero():
            break
    if g.is_zero():
        return PPoly.const(names, 1)
    return g


def _gcd_rec(p, q):
    if p.is_zero():
        return q
    if q.is_zero():
        return p
    names = p.names
    if not names:
        a = p.constant_value()
        b = q.constant_value()
        g = Fraction(gcd(a.numerator * b.denominator, b.numerator * a.denominator),
                     a.denominator * b.denominator)
        return PPoly.const(names, abs(g))
    if p.degree_in(0) == 0 and q.degree_in(0) == 0:
        sub = _gcd_rec(_drop_main(p), _drop_main(q))
        return _lift_main(sub, names)
    f = _coeffs_in_main_var(p, len(names))
    g = _coeffs_in_main_var(q, len(names))
    if _uni_degree(f) < _uni_degree(g):
        f, g = g, f
    cont_f = _content_poly(f)
    cont_g = _content_poly(g)
    f = [exact_div(c, cont_f) for c in f]
    g = [exact_div(c, cont_g) for c in g]
    while True:
        r = _pseudo_rem(f, g, names)
        if _uni_degree(r) < 0:
            break
        cont_r = _content_poly(r)
        r = [exact_div(c, cont_r) for c in r]
        f, g = g, r
    cont = _gcd_rec(cont_f, cont_g)
    result = _from_coeffs([c * cont for c in _strip(g)], names)
    # remove stray rational content picked up by pseudo-division
    _, result = _int_content_and_primitive(result)
    return result


def _strip(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1].is_zero():
        coeffs.pop()
    return coeffs


def _drop_main(p):
    return PPoly(p.names[1:], {expo[1:]: c for expo, c in p.terms.items()})


def _lift_main(p, names):
    return PPoly(names, {(0,) + expo: c for expo, c in p.terms.items()})


def _positive_primitive(p):
    if p.is_zero():
        return p
    _, p = _int_content_and_primitive(p)
    _, lead = _leading(p)
    if lead < 0:
        p = -p
    return p


class RatFunc:
    """Reduced ratio of integer-coefficient PPoly; denominator lex-leading
    coefficient positive, gcd(num, den) = 1, joint integer content 1."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if den is None:
            den = PPoly.const(num.names, 1)
        if den.is_zero():
            raise ParamPolyError("zero denominator")
        if num.names != den.names:
            raise ParamPolyError("mismatched parameter tuples")
        num, den = _reduce(num, den)
        self.num = num
        self.den = den

    @classmethod
    def const(cls, names, value):
        return cls(PPoly.const(names, value))

    @classmethod
    def var(cls, names, name):
        return cls(PPoly.var(names, name))

    @property
    def names(self):
        return self.num.names

    def is_zero(self):
        return self.num.is_zero()

    def is_one(self):
        return self == RatFunc.const(self.names, 1)

    def is_constant(self):
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self):
        return self.num.constant_value() / self.den.constant_value()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = RatFunc.const(self.names, other)
        return (isinstance(other, RatFunc) and self.num == other.num
                and self.den == other.den)

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other):
        other = self._coerce(other)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        return RatFunc(self.num * other.den - other.num * self.den, self.den * other.den)

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __mul__(self, other):
        other = self._coerce(other)
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def inverse(self):
        return RatFunc.const(self.names, 1) / self

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, (int, Fraction)):
            return RatFunc.const(self.names, other)
        raise TypeError(f"cannot coerce {other!r} into Q(params)")

    def evaluate(self, values):
        den = self.den.evaluate(values)
        if den == 0:
            raise ZeroDivisionError("denominator vanishes at the sample point")
        return self.num.evaluate(values) / den

    def render(self):
        if self.den == PPoly.const(self.names, 1):
            return self.num.render()
        num = self.num.render()
        den = self.den.render()
        if len(self.num.terms) > 1:
            num = f"({num})"
        if len(self.den.terms) > 1 or not self.den.is_constant():
            den = f"({den})"
        return f"{num}/{den}"

    def __repr__(self):
        return f"RatFunc({self.render()!r})"


def _reduce(num, den):
    if num.is_zero():
        return num, PPoly.const(num.names, 1)
    g = poly_gcd(num, den)
    num = exact_div(num, g)
    den = exact_div(den, g)
    cn, num = _int_content_and_primitive(num)
    cd, den = _int_content_and_primitive(den)
    scale = cn / cd
    _, lead = _leading(den)
    if lead < 0:
        den = -den
        scale = -scale
    return num.scaled(scale.numerator), den.scaled(scale.denominator)


def rational_roots(p):
    """All rational roots of a PPoly in at most one effective variable.

    Returns (roots, has_nonrational_factor).  Multi-parameter polynomials with
    an honest mixed dependence are reported via the flag.
    """
    if p.is_zero():
        raise ParamPolyError("zero polynomial has every root")
    active = [i for i in range(len(p.names)) if p.degree_in(i) > 0]
    if not active:
        return [], False
    if len(active) > 1:
        return [], True
    i = active[0]
    _, p = _int_content_and_primitive(p)
    coeffs = {}
    for expo, c in p.terms.items():
        coeffs[expo[i]] = coeffs.get(expo[i], Fraction(0)) + c
    top = max(coeffs)
    dense = [int(coeffs.get(k, 0)) for k in range(top + 1)]
    roots = set()
    low = next(k for k in range(top + 1) if dense[k] != 0)
    if low > 0:
        roots.add(Fraction(0))
        dense = dense[low:]
    a0, an = dense[0], dense[-1]
    for pnum in _divisors(abs(a0)):
        for q in _divisors(abs(an)):
            for cand in (Fraction(pnum, q), Fraction(-pnum, q)):
                if sum(Fraction(c) * cand ** k for k, c in enumerate(dense)) == 0:
                    roots.add(cand)
    return sorted(roots), _has_irrational_part(dense, roots)


def _has_irrational_part(dense, roots):
    # deflate found nonzero roots; anything of degree >= 1 left is irrational
    coeffs = [Fraction(c) for c in dense]
    for r in roots:
        if r == 0:
            continue
        while True:
            quot, rem = _deflate(coeffs, r)
            if rem != 0:
                break
            coeffs = quot
            if len(coeffs) == 1:
                break
    return len(coeffs) > 1


def _deflate(coeffs, r):
    out = [Fraction(0)] * (len(coeffs) - 1)
    acc = Fraction(0)
    for k in range(len(coeffs) - 1, 0, -1):
        acc = coeffs[k] + acc * r
        out[k - 1] = acc
    rem = coeffs[0] + acc * r
    return out, rem


def _divisors(n):
    if n == 0:
        return [1]
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)
