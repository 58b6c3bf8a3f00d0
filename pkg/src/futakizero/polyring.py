"""Multihomogeneous polynomials on products of projective spaces.

Coefficients live in the fraction field Q(params); the surface syntax admits
`+ - * / ^`, parentheses, integer and rational literals, and declared
coordinate/parameter names.  Division is restricted to coordinate-free
divisors (enough for rational literals and parameter scalars such as
``y0/(1-s)``).  Canonical form: terms sorted by descending lex exponent
vector, reduced nonzero coefficients, one multidegree for the whole
polynomial.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .parampoly import RatFunc, rational_roots
from .ratlinalg import kernel_basis_generic, solve_generic


class PolyError(ValueError):
    pass


class ParseError(PolyError):
    pass


class InhomogeneousError(PolyError):
    pass


@dataclass(frozen=True)
class AmbientSpace:
    """Product of projective spaces; one (dimension, coordinate names) pair
    per factor, names globally unique."""

    factors: tuple  # tuple of (dim, tuple-of-names)

    def __post_init__(self):
        if not self.factors:
            raise PolyError("ambient needs at least one factor")
        seen = set()
        for dim, names in self.factors:
            if dim < 1:
                raise PolyError("factor dimension must be >= 1")
            if len(names) != dim + 1:
                raise PolyError(f"factor of dimension {dim} needs {dim + 1} coordinates")
            for n in names:
                if n in seen:
                    raise PolyError(f"duplicate coordinate name {n!r}")
                seen.add(n)

    @classmethod
    def product(cls, *factor_names):
        return cls(tuple((len(names) - 1, tuple(names)) for names in factor_names))

    @property
    def coords(self):
        return tuple(n for _, names in self.factors for n in names)

    @property
    def nfactors(self):
        return len(self.factors)

    def factor_of(self, index):
        offset = 0
        for f, (dim, names) in enumerate(self.factors):
            if index < offset + dim + 1:
                return f
            offset += dim + 1
        raise PolyError("coordinate index out of range")

    def block(self, f):
        """Global coordinate index range of factor f."""
        offset = sum(d + 1 for d, _ in self.factors[:f])
        return range(offset, offset + self.factors[f][0] + 1)

    def coord_index(self, name):
        try:
            return self.coords.index(name)
        except ValueError:
            raise PolyError(f"unknown coordinate {name!r}") from None

    def describe(self):
        return " x ".join(f"P{dim}" for dim, _ in self.factors)


@dataclass(frozen=True)
class ParamField:
    """Declared parameters with excluded rational values (catalog smoothness
    constraints such as a not in {-1, 1})."""

    names: tuple = ()
    excluded: dict = field(default_factory=dict)  # name -> tuple of Fractions

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(
            self, "excluded",
            {n: tuple(Fraction(v) for v in vs) for n, vs in dict(self.excluded).items()})
        for n in self.excluded:
            if n not in self.names:
                raise PolyError(f"exclusions for undeclared parameter {n!r}")

    def one(self):
        return RatFunc.const(self.names, 1)

    def const(self, value):
        return RatFunc.const(self.names, value)

    def var(self, name):
        if name not in self.names:
            raise PolyError(f"unknown parameter {name!r}")
        return RatFunc.var(self.names, name)

    def admits(self, name, value):
        return Fraction(value) not in self.excluded.get(name, ())

    def sample(self, name):
        """First admissible member of the fixed cross-check sequence."""
        for v in _SAMPLE_SEQUENCE:
            if self.admits(name, v):
                return Fraction(v)
        raise PolyError(f"no admissible sample for {name!r}")

    def sample_point(self):
        return {n: self.sample(n) for n in self.names}


_SAMPLE_SEQUENCE = (Fraction(1, 2), Fraction(2), Fraction(3), Fraction(1, 3),
                    Fraction(5), Fraction(1, 5), Fraction(7), Fraction(1, 7),
                    Fraction(11), Fraction(13))


class MultiPoly:
    """Multihomogeneous polynomial: dict of exponent vector -> RatFunc
    coefficient, all terms of one multidegree."""

    __slots__ = ("ambient", "params", "terms")

    def __init__(self, ambient, params, terms, check=True):
        self.ambient = ambient
        self.params = params
        self.terms = {e: c for e, c in terms.items() if not c.is_zero()}
        if check:
            self._check_homogeneous()

    def _check_homogeneous(self):
        degrees = {self._term_degree(e) for e in self.terms}
        if len(degrees) > 1:
            raise InhomogeneousError(
                f"terms of differing multidegree: {sorted(degrees)}")

    def _term_degree(self, expo):
        return tuple(sum(expo[i] for i in self.ambient.block(f))
                     for f in range(self.ambient.nfactors))

    @classmethod
    def zero(cls, ambient, params):
        return cls(ambient, params, {})

    @classmethod
    def constant(cls, ambient, params, value):
        nz = len(ambient.coords)
        return cls(ambient, params, {(0,) * nz: params.const(value)})

    @classmethod
    def coordinate(cls, ambient, params, name):
        i = ambient.coord_index(name)
        expo = tuple(int(j == i) for j in range(len(ambient.coords)))
        return cls(ambient, params, {expo: params.one()})

    def is_zero(self):
        return not self.terms

    def multidegree(self):
        """Per-factor degree vector; the zero/constant polynomial has all
        zeros."""
        if not self.terms:
            return (0,) * self.ambient.nfactors
        return self._term_degree(next(iter(self.terms)))

    def sorted_terms(self):
        return sorted(self.terms.items(), reverse=True)

    def _same_ring(self, other):
        if self.ambient != other.ambient or self.params.names != other.params.names:
            raise PolyError("ambient/parameter mismatch")

    def __add__(self, other):
        self._same_ring(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, self.params.const(0)) + c
        return MultiPoly(self.ambient, self.params, terms)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return MultiPoly(self.ambient, self.params,
                         {e: -c for e, c in self.terms.items()}, check=False)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = MultiPoly.constant(self.ambient, self.params, other)
        elif isinstance(other, RatFunc):
            return self.scale(other)
        self._same_ring(other)
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, self.params.const(0)) + c1 * c2
        return MultiPoly(self.ambient, self.params, terms, check=False)

    __rmul__ = __mul__

    def scale(self, coeff):
        return MultiPoly(self.ambient, self.params,
                         {e: c * coeff for e, c in self.terms.items()}, check=False)

    def __eq__(self, other):
        return (isinstance(other, MultiPoly) and self.ambient == other.ambient
                and self.params.names == other.params.names and self.terms == other.terms)

    def __hash__(self):
        return hash((self.ambient, tuple(sorted(self.terms))))

    def evaluate_params(self, values):
        """Specialize the parameters, returning a MultiPoly over Q."""
        empty = ParamField()
        terms = {}
        for e, c in self.terms.items():
            v = c.evaluate(values)
            if v != 0:
                terms[e] = empty.const(v)
        return MultiPoly(self.ambient, empty, terms, check=False)

    def substitute(self, images):
        """Ring substitution coord_i -> images[i]; images are MultiPoly on any
        shared ambient (used by pullbacks and curve plug-ins)."""
        if len(images) != len(self.ambient.coords):
            raise PolyError("substitution needs one image per coordinate")
        result = None
        for e, c in self.terms.items():
            term = None
            for img, k in zip(images, e):
                if k == 0:
                    continue
                p = img
                for _ in range(k - 1):
                    p = p * img
                term = p if term is None else term * p
            if term is None:
                term = MultiPoly.constant(images[0].ambient, images[0].params, 1)
            term = term.scale(c)
            result = term if result is None else result + term
        if result is None:
            return MultiPoly.zero(images[0].ambient, images[0].params)
        return result

    def render(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                n if k == 1 else f"{n}^{k}"
                for n, k in zip(self.ambient.coords, e) if k > 0)
            parts.append(_render_term(c, mono))
        out = parts[0]
        for p in parts[1:]:
            if p.startswith("-") and not p.startswith("-("):
                out += " - " + p[1:]
            else:
                out += " + " + p
        return out

    def __repr__(self):
        return f"MultiPoly({self.render()!r})"


def _render_term(coeff, mono):
    if coeff.is_constant():
        v = coeff.constant_value()
        if not mono:
            return _frac_text(v)
        if v == 1:
            return mono
        if v == -1:
            return f"-{mono}"
        return f"{_frac_text(v)}*{mono}"
    if coeff.den.is_constant() and len(coeff.num.terms) == 1:
        # bare monomial scalar such as a or 2*a
        body = coeff.render()
        return f"{body}*{mono}" if mono else body
    body = f"({coeff.render()})"
    return f"{body}*{mono}" if mono else body


def _frac_text(v):
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


# ---------------------------------------------------------------------------
# surface-syntax parser
# ---------------------------------------------------------------------------

_TOKEN_CHARS = set("+-*/^()")


def _tokenize(text):
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in _TOKEN_CHARS:
            tokens.append((ch, ch, i))
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(("int", text[i:j], i))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("name", text[i:j], i))
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r} at position {i}")
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    """Recursive descent over +- / */ / unary / ^ / atoms."""

    def __init__(self, text, ambient, params):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0
        self.ambient = ambient
        self.params = params

    def peek(self):
        return self.tokens[self.pos]

    def take(self, kind=None):
        tok = self.tokens[self.pos]
        if kind is not None and tok[0] != kind:
            raise ParseError(f"expected {kind} at position {tok[2]} in {self.text!r}")
        self.pos += 1
        return tok

    def parse(self):
        value = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"trailing input at position {tok[2]} in {self.text!r}")
        return value

    def expr(self):
        value = self.term()
        while self.peek()[0] in "+-":
            op = self.take()[0]
            rhs = self.term()
            value = self._add(value, rhs) if op == "+" else self._add(value, self._neg(rhs))
        return value

    def term(self):
        value = self.unary()
        while self.peek()[0] in "*/":
            op = self.take()[0]
            rhs = self.unary()
            if op == "*":
                value = value * rhs
            else:
                value = self._divide(value, rhs)
        return value

    def unary(self):
        if self.peek()[0] in "+-":
            op = self.take()[0]
            value = self.unary()
            return value if op == "+" else self._neg(value)
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            negative = False
            if self.peek()[0] == "-":
                self.take()
                negative = True
            expo = int(self.take("int")[1])
            if negative:
                raise ParseError("negative exponents are not in the grammar")
            result = MultiPoly.constant(self.ambient, self.params, 1)
            for _ in range(expo):
                result = result * base
            return result
        return base

    def atom(self):
        tok = self.peek()
        if tok[0] == "(":
            self.take()
            value = self.expr()
            self.take(")")
            return value
        if tok[0] == "int":
            self.take()
            return MultiPoly.constant(self.ambient, self.params, int(tok[1]))
        if tok[0] == "name":
            self.take()
            name = tok[1]
            if name in self.ambient.coords:
                return MultiPoly.coordinate(self.ambient, self.params, name)
            if name in self.params.names:
                expo = (0,) * len(self.ambient.coords)
                return MultiPoly(self.ambient, self.params,
                                 {expo: self.params.var(name)}, check=False)
            raise ParseError(f"unknown symbol {name!r}")
        raise ParseError(f"unexpected token {tok[1]!r} at position {tok[2]}")

    # internal sums may be inhomogeneous; homogeneity is enforced at the top
    def _add(self, a, b):
        terms = dict(a.terms)
        for e, c in b.terms.items():
            terms[e] = terms.get(e, self.params.const(0)) + c
        return MultiPoly(self.ambient, self.params, terms, check=False)

    def _neg(self, a):
        return MultiPoly(self.ambient, self.params,
                         {e: -c for e, c in a.terms.items()}, check=False)

    def _divide(self, a, b):
        const = _as_scalar(b)
        if const is None:
            raise ParseError("division is only allowed by coordinate-free factors")
        if const.is_zero():
            raise ParseError("division by zero")
        return a.scale(const.inverse())


def _as_scalar(p):
    """RatFunc value of a coordinate-free polynomial, else None."""
    if not p.terms:
        return p.params.const(0)
    if len(p.terms) != 1:
        items = list(p.terms.items())
        if any(any(k > 0 for k in e) for e, _ in items):
            return None
        total = p.params.const(0)
        for _, c in items:
            total = total + c
        return total
    e, c = next(iter(p.terms.items()))
    if any(k > 0 for k in e):
        return None
    return c


def parse_poly(text, ambient, params=None):
    """Parse the catalog surface syntax into canonical MultiPoly.

    Raises ParseError for bad syntax or unknown symbols and
    InhomogeneousError when terms have differing multidegrees.
    """
    if params is None:
        params = ParamField()
    raw = _Parser(text, ambient, params).parse()
    return MultiPoly(ambient, params, raw.terms)


def multidegree(p):
    return p.multidegree()


def pullback(p, automorphism):
    """p composed with a monomial automorphism, in canonical form."""
    return automorphism.pullback(p)


# ---------------------------------------------------------------------------
# span membership over Q(params)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpanSolution:
    """p = sum coeff_i * gens_i with exact Q(params) coefficients."""

    coefficients: tuple
    denominator_roots: tuple       # rational parameter values killing a denominator
    has_irrational_denominator: bool

    def nonzero_indices(self):
        return [i for i, c in enumerate(self.coefficients) if not c.is_zero()]


def in_span(p, gens, params=None):
    """Express p as a Q(params)-linear combination of gens, or None.

    Exact elimination over the fraction field; the returned solution records
    the rational parameter values where any coefficient denominator vanishes.
    """
    if params is None:
        params = p.params
    for g in gens:
        if g.ambient != p.ambient:
            raise PolyError("ambient mismatch in span check")
    monomials = sorted({e for g in gens for e in g.terms} | set(p.terms), reverse=True)
    zero = params.const(0)
    rows = [[g.terms.get(m, zero) for g in gens] for m in monomials]
    rhs = [p.terms.get(m, zero) for m in monomials]
    solution = solve_generic(rows, rhs, lambda x: x.is_zero())
    if solution is None:
        return None
    roots = set()
    irrational = False
    for c in solution:
        if c.den.is_constant():
            continue
        rs, irr = rational_roots(c.den)
        roots.update(rs)
        irrational = irrational or irr
    return SpanSolution(tuple(solution), tuple(sorted(roots)), irrational)


def reconstruct(gens, solution):
    """Sum coeff_i * gens_i for an in_span solution (exactness checks)."""
    total = None
    for g, c in zip(gens, solution.coefficients):
        part = g.scale(c)
        total = part if total is None else total + part
    return total


def span_kernel(gens, params):
    """Linear dependencies among gens over Q(params) (used for sanity checks)."""
    monomials = sorted({e for g in gens for e in g.terms}, reverse=True)
    zero = params.const(0)
    rows = [[g.terms.get(m, zero) for g in gens] for m in monomials]
    return kernel_basis_generic(rows, len(gens), params.const(1), zero,
                                lambda x: x.is_zero())
