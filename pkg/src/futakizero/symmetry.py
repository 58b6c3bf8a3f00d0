"""Projective symmetries, torus actions and their interaction.

A MonomialAutomorphism is a generalized permutation map tau(x)_i =
c_i * x_{sigma(i)} together with the factor bijection it induces; a
TorusGenerator is an integer weight vector modulo one constant per factor.
The checks here mechanize the invariance hypotheses (variety, blow-up
centers, curve parametrizations) and the adjoint action on torus generators.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .parampoly import RatFunc
from .polyring import AmbientSpace, MultiPoly, ParamField, in_span, parse_poly
from .ratlinalg import QMatrix, solve


class SymmetryError(ValueError):
    pass


class CenterMatchError(SymmetryError):
    """A symmetry fails to permute the blow-up centers."""

    def __init__(self, index, message):
        super().__init__(message)
        self.index = index


CURVE_AMBIENT = AmbientSpace.product(("r", "s"))


@dataclass(frozen=True)
class TorusGenerator:
    """Integer weight per homogeneous coordinate, canonicalized so the first
    coordinate of each factor has weight zero."""

    ambient: AmbientSpace
    weights: tuple

    def __post_init__(self):
        if len(self.weights) != len(self.ambient.coords):
            raise SymmetryError("one weight per homogeneous coordinate required")
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))

    def canonical(self):
        out = list(self.weights)
        for f in range(self.ambient.nfactors):
            block = list(self.ambient.block(f))
            base = out[block[0]]
            for i in block:
                out[i] -= base
        return tuple(out)

    def permuted(self, automorphism):
        """Weight vector of Ad_tau(v): coordinate i takes weight w[sigma(i)]."""
        return tuple(self.weights[automorphism.perm[i]]
                     for i in range(len(self.weights)))

    def monomial_weight(self, expo):
        return sum(w * k for w, k in zip(self.weights, expo))


@dataclass(frozen=True)
class MonomialAutomorphism:
    """tau(x)_i = scalars[i] * x_{perm[i]}; factor_map[f] is the source factor
    feeding image factor f."""

    ambient: AmbientSpace
    perm: tuple
    scalars: tuple
    params: ParamField

    def __post_init__(self):
        n = len(self.ambient.coords)
        if sorted(self.perm) != list(range(n)):
            raise SymmetryError("coordinate map is not a bijection")
        if len(self.scalars) != n:
            raise SymmetryError("one scalar per coordinate required")
        if any(c.is_zero() for c in self.scalars):
            raise SymmetryError("zero scalar in monomial automorphism")
        for f in range(self.ambient.nfactors):
            sources = {self.ambient.factor_of(self.perm[i]) for i in self.ambient.block(f)}
            if len(sources) != 1:
                raise SymmetryError(f"image factor {f} mixes source factors")
            src = sources.pop()
            if self.ambient.factors[f][0] != self.ambient.factors[src][0]:
                raise SymmetryError("factor bijection must preserve dimensions")

    @classmethod
    def identity(cls, ambient, params):
        n = len(ambient.coords)
        return cls(ambient, tuple(range(n)), tuple(params.one() for _ in range(n)), params)

    @classmethod
    def from_images(cls, images, ambient, params):
        """Build from the image expression of each coordinate in ambient
        order; every image must be scalar * single coordinate."""
        if len(images) != len(ambient.coords):
            raise SymmetryError("one image per coordinate required")
        perm = []
        scalars = []
        for text in images:
            p = text if isinstance(text, MultiPoly) else parse_poly(text, ambient, params)
            if len(p.terms) != 1:
                raise SymmetryError(f"image {text!r} is not a monomial")
            expo, coeff = next(iter(p.terms.items()))
            if sum(expo) != 1:
                raise SymmetryError(f"image {text!r} is not a single coordinate")
            perm.append(expo.index(1))
            scalars.append(coeff)
        return cls(ambient, tuple(perm), tuple(scalars), params)

    @property
    def factor_map(self):
        return tuple(self.ambient.factor_of(self.perm[next(iter(self.ambient.block(f)))])
                     for f in range(self.ambient.nfactors))

    def apply_point(self, point):
        """Image of a point given as a list of RatFunc coordinates."""
        return [self.scalars[i] * point[self.perm[i]] for i in range(len(point))]

    def pullback(self, p):
        """p o tau in canonical form (ring homomorphism substitution)."""
        if p.ambient != self.ambient:
            raise SymmetryError("ambient mismatch in pullback")
        terms = {}
        for e, c in p.terms.items():
            new_e = [0] * len(e)
            coeff = c
            for j, k in enumerate(e):
                if k == 0:
                    continue
                new_e[self.perm[j]] += k
                for _ in range(k):
                    coeff = coeff * self.scalars[j]
            key = tuple(new_e)
            terms[key] = terms.get(key, p.params.const(0)) + coeff
        return MultiPoly(p.ambient, p.params, terms)

    def compose(self, other):
        """Map x -> self(other(x))."""
        if self.ambient != other.ambient:
            raise SymmetryError("ambient mismatch in composition")
        perm = tuple(other.perm[self.perm[i]] for i in range(len(self.perm)))
        scalars = tuple(self.scalars[i] * other.scalars[self.perm[i]]
                        for i in range(len(self.perm)))
        return MonomialAutomorphism(self.ambient, perm, scalars, self.params)

    def inverse(self):
        inv = _invert(self.perm)
        scalars = tuple(self.scalars[inv[k]].inverse() for k in range(len(inv)))
        return MonomialAutomorphism(self.ambient, tuple(inv), scalars, self.params)

    def is_projective_identity(self):
        """Identity as a projective map: per-factor scalar, no permutation.

        Tested by cross multiplication, never by normalizing a coordinate.
        """
        if any(self.perm[i] != i for i in range(len(self.perm))):
            return False
        for f in range(self.ambient.nfactors):
            block = list(self.ambient.block(f))
            c0 = self.scalars[block[0]]
            for i in block[1:]:
                # c_i * x_i * (c_0 x_0) == c_0 * x_0 * (c_i x_i) reduces to c_i == c_0
                if not (self.scalars[i] - c0).is_zero():
                    return False
        return True

    def order_divides(self, n):
        power = self
        for _ in range(n - 1):
            power = power.compose(self)
        return power.is_projective_identity()

    def with_scalars(self, scalars):
        return MonomialAutomorphism(self.ambient, self.perm, tuple(scalars), self.params)

    def render(self):
        coords = self.ambient.coords
        images = []
        for i in range(len(coords)):
            c = self.scalars[i]
            name = coords[self.perm[i]]
            if c.is_one():
                images.append(name)
            elif c.is_constant() and c.constant_value() == -1:
                images.append(f"-{name}")
            else:
                body = c.render()
                if not body.startswith("(") and (" " in body or "/" in body):
                    body = f"({body})"
                images.append(f"{body}*{name}")
        return f"map({', '.join(images)})"


def _invert(perm):
    inv = [0] * len(perm)
    for i, j in enumerate(perm):
        inv[j] = i
    return inv


# ---------------------------------------------------------------------------
# subvariety presentations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ParamCurve:
    """Map P^1 -> ambient given per coordinate by a homogeneous polynomial in
    (r, s); coordinates within a factor share their (r, s)-degree."""

    ambient: AmbientSpace
    params: ParamField
    coords: tuple  # MultiPoly over CURVE_AMBIENT

    def __post_init__(self):
        if len(self.coords) != len(self.ambient.coords):
            raise SymmetryError("curve needs one component per ambient coordinate")
        for f in range(self.ambient.nfactors):
            degrees = {self.coords[i].multidegree()[0]
                       for i in self.ambient.block(f) if not self.coords[i].is_zero()}
            if not degrees:
                raise SymmetryError(f"curve is identically zero on factor {f}")
            if len(degrees) != 1:
                raise SymmetryError(f"mixed (r,s)-degrees on factor {f}")

    @classmethod
    def from_texts(cls, texts, ambient, params):
        coords = tuple(parse_poly(t, CURVE_AMBIENT, params) for t in texts)
        return cls(ambient, params, coords)

    def factor_degree(self, f):
        for i in self.ambient.block(f):
            if not self.coords[i].is_zero():
                return self.coords[i].multidegree()[0]
        raise SymmetryError("empty factor")

    def substituted(self, p):
        """Value of the ambient polynomial p along the curve."""
        return p.substitute(list(self.coords))

    def reparametrized(self, rep):
        r = MultiPoly.coordinate(CURVE_AMBIENT, self.params, "r")
        s = MultiPoly.coordinate(CURVE_AMBIENT, self.params, "s")
        gamma = self.params.const(rep.gamma)
        if rep.swap:
            images = [s, r.scale(gamma)]
        else:
            images = [r, s.scale(gamma)]
        return ParamCurve(self.ambient, self.params,
                          tuple(c.substitute(images) for c in self.coords))

    def transformed(self, tau):
        """tau o phi as a ParamCurve."""
        return ParamCurve(self.ambient, self.params,
                          tuple(self.coords[tau.perm[i]].scale(tau.scalars[i])
                                for i in range(len(self.coords))))

    def render(self):
        return f"curve({', '.join(c.render() for c in self.coords)})"


@dataclass(frozen=True)
class SubvarietyPresentation:
    """Blow-up center: ideal generators, a P^1 parametrization, or both.

    When both are present, invariance checks use the curve side (the listed
    ideal generators may cut extra components, so their span need not be
    stable even when the center is); the ideal is used for cross-validation.
    """

    ideal: tuple = ()
    curve: object = None

    def __post_init__(self):
        if not self.ideal and self.curve is None:
            raise SymmetryError("empty presentation")

    def kind(self):
        if self.curve is not None and self.ideal:
            return "both"
        return "curve" if self.curve is not None else "ideal"


@dataclass(frozen=True)
class Reparam:
    """[r:s] -> [r : gamma s], composed with the swap when flagged."""

    swap: bool
    gamma: Fraction

    def describe(self):
        base = "swap" if self.swap else "identity"
        if self.gamma == 1:
            return base
        return f"{base} . scale({self.gamma})"


@dataclass(frozen=True)
class InvarianceResult:
    invariant: bool
    matrix: tuple          # rows: in_span coefficient vectors (RatFunc)
    denominator_roots: tuple
    failing_index: int = None

    def describe(self):
        if self.invariant:
            return "invariant"
        return f"inconclusive (generator {self.failing_index} left the span)"


def check_variety_invariant(gens, tau):
    """Invariant iff each pullback stays in the Q(params)-span of gens.

    A failed span check is inconclusive, never a proof of non-invariance.
    """
    rows = []
    roots = set()
    for idx, g in enumerate(gens):
        sol = in_span(tau.pullback(g), list(gens), tau.params)
        if sol is None:
            return InvarianceResult(False, (), (), failing_index=idx)
        rows.append(sol.coefficients)
        roots.update(sol.denominator_roots)
    return InvarianceResult(True, tuple(rows), tuple(sorted(roots)))


@dataclass(frozen=True)
class Equivariance:
    reparam: Reparam
    factor_scalars: tuple  # RatFunc per ambient factor


def check_curve_equivariance(curve, tau):
    """Find psi with tau o phi = phi o psi projectively, or None."""
    return check_curve_match(curve, curve, tau)


def check_curve_match(source, target, tau):
    """Find psi with tau o source = target o psi projectively, or None.

    The search family is {identity, swap} composed with one diagonal scaling
    [r:s] -> [r:gamma s]; gamma is solved for exactly.
    """
    moved = source.transformed(tau)
    for swap in (False, True):
        found = _match_with_form(moved, target, swap)
        if found is not None:
            return found
    return None


def _match_with_form(moved, target, swap):
    ambient = target.ambient
    params = target.params
    constraints = []  # (gamma exponent, RatFunc ratio)
    for f in range(ambient.nfactors):
        block = list(ambient.block(f))
        base = None
        for i in block:
            lhs = moved.coords[i]
            rhs = target.coords[i]
            lhs_support = set(lhs.terms)
            rhs_support = {_form_image(e, swap) for e in rhs.terms}
            if lhs_support != rhs_support:
                return None
            for e_rhs, c_rhs in rhs.terms.items():
                e_lhs = _form_image(e_rhs, swap)
                expo = _gamma_exponent(e_rhs, swap)
                ratio = lhs.terms[e_lhs] / c_rhs
                if base is None:
                    base = (expo, ratio)
                else:
                    constraints.append((expo - base[0], ratio / base[1]))
        if base is None:
            return None
    candidates = _gamma_candidates(constraints)
    for gamma in candidates:
        rep = Reparam(swap, gamma)
        scalars = _verify_proportional(moved, target, rep)
        if scalars is not None:
            return Equivariance(rep, tuple(scalars))
    return None


def _form_image(e, swap):
    a, b = e
    return (b, a) if swap else (a, b)


def _gamma_exponent(e, swap):
    # both reparametrization forms feed gamma to the curve's s-slot
    del swap
    return e[1]


def _gamma_candidates(constraints):
    fixed = []
    for d, ratio in constraints:
        if d == 0:
            if not (ratio - 1).is_zero():
                return []
        else:
            if not ratio.is_constant():
                return []
            fixed.append((d, ratio.constant_value()))
    if not fixed:
        return [Fraction(1)]
    d, q = fixed[0]
    roots = _rational_power_roots(q, d)
    return [g for g in roots
            if all(g ** dd == qq for dd, qq in fixed)]


def _rational_power_roots(q, d):
    """All rational gamma with gamma^d = q."""
    if d < 0:
        if q == 0:
            return []
        q, d = 1 / q, -d
    if q == 0:
        return []
    sign = 1 if q > 0 else -1
    num = _perfect_root(abs(q.numerator), d)
    den = _perfect_root(abs(q.denominator), d)
    if num is None or den is None:
        return []
    root = Fraction(num, den)
    if sign > 0:
        return [root, -root] if d % 2 == 0 else [root]
    return [] if d % 2 == 0 else [-root]


def _perfect_root(n, d):
    if n == 0:
        return 0
    lo, hi = 0, 1
    while hi ** d < n:
        hi *= 2
    while lo < hi:
        mid = (lo + hi) // 2
        if mid ** d < n:
            lo = mid + 1
        else:
            hi = mid
    return lo if lo ** d == n else None


def _verify_proportional(moved, target, rep):
    """Exact per-factor proportionality of moved vs target o rep, by cross
    multiplication; returns the factor scalars or None."""
    composed = target.reparametrized(rep)
    scalars = []
    for f in range(target.ambient.nfactors):
        block = list(target.ambient.block(f))
        scalar = None
        for i in block:
            lhs = moved.coords[i]
            rhs = composed.coords[i]
            if lhs.is_zero() != rhs.is_zero():
                return None
            if lhs.is_zero():
                continue
            if scalar is None:
                e = next(iter(rhs.terms))
                if e not in lhs.terms:
                    return None
                scalar = lhs.terms[e] / rhs.terms[e]
        if scalar is None:
            return None
        for i in block:
            lhs = moved.coords[i]
            if not (lhs - composed.coords[i].scale(scalar)).is_zero():
                return None
        scalars.append(scalar)
    return scalars


def match_centers(centers, tau, stages=None):
    """Permutation rho with pullback of center rho(i) matching center i.

    Matching never crosses blow-up stages.  An unmatched center raises
    CenterMatchError carrying the offending index.
    """
    n = len(centers)
    if stages is None:
        stages = [1] * n
    rho = [None] * n
    used = set()
    for i, center in enumerate(centers):
        hit = None
        for j in range(n):
            if j in used or stages[i] != stages[j]:
                continue
            if _presentations_match(center, centers[j], tau):
                hit = j
                break
        if hit is None:
            raise CenterMatchError(i, f"center {i} is not matched by the symmetry")
        rho[i] = hit
        used.add(hit)
    return tuple(rho)


def _presentations_match(target_i, source_j, tau):
    """True iff tau maps center i onto center j (pullback of j matches i)."""
    if target_i.kind() in ("curve", "both") and source_j.kind() in ("curve", "both"):
        return check_curve_match(target_i.curve, source_j.curve, tau) is not None
    if target_i.kind() == "ideal" and source_j.kind() == "ideal":
        pulled = [tau.pullback(g) for g in source_j.ideal]
        fwd = all(in_span(p, list(target_i.ideal), tau.params) is not None for p in pulled)
        if not fwd:
            return False
        back = all(in_span(g, pulled, tau.params) is not None for g in target_i.ideal)
        return back
    return False


@dataclass(frozen=True)
class EigencheckResult:
    ok: bool
    detail: str = ""


def torus_eigencheck(target, v):
    """Ideal generators must be weight eigenvectors; curve coordinate weights
    must be an affine function of the (r, s)-bidegree."""
    if isinstance(target, ParamCurve):
        return _curve_eigencheck(target, v)
    for idx, g in enumerate(target):
        weights = {v.monomial_weight(e) for e in g.terms}
        if len(weights) > 1:
            pair = sorted(g.terms)[:2]
            return EigencheckResult(
                False,
                f"generator {idx} mixes weights {sorted(weights)} "
                f"(monomials {pair[0]} vs {pair[-1]})")
    return EigencheckResult(True)


def _curve_eigencheck(curve, v):
    ambient = curve.ambient
    nf = ambient.nfactors
    rows = []
    rhs = []
    for f in range(nf):
        for i in ambient.block(f):
            c = curve.coords[i]
            if c.is_zero():
                continue
            for (er, es) in c.terms:
                row = [Fraction(er), Fraction(es)] + [Fraction(int(g == f)) for g in range(nf)]
                rows.append(row)
                rhs.append(Fraction(v.weights[i]))
    m = QMatrix.from_rows(rows)
    solution = solve(m, rhs)
    if solution is None:
        return EigencheckResult(False, "weights are not affine in the (r,s)-bidegree")
    return EigencheckResult(True)


@dataclass(frozen=True)
class AdjointUnsolvable:
    """tau does not normalize the chosen torus complement; carries the first
    generator whose permuted weights leave the span."""

    generator_index: int
    permuted_weights: tuple

    def describe(self):
        return (f"adjoint solve failed: permuted weights {self.permuted_weights} of "
                f"generator {self.generator_index} are not in the torus span modulo "
                f"per-factor constants")


def adjoint_matrix(tau, torus):
    """A with Ad_tau(v_j) = sum_i A[i][j] v_i, solved over Q modulo one
    constant per factor; the scalars of tau provably play no role."""
    if not torus:
        return QMatrix.zero(0, 0)
    columns = [list(v.canonical()) for v in torus]
    basis_matrix = QMatrix.from_rows([[col[i] for col in columns]
                                      for i in range(len(columns[0]))])
    if basis_matrix.rank() != len(torus):
        raise SymmetryError("torus generators dependent modulo per-factor constants")
    entries = []
    for j, v in enumerate(torus):
        permuted = TorusGenerator(v.ambient, v.permuted(tau)).canonical()
        coeffs = solve(basis_matrix, [Fraction(w) for w in permuted])
        if coeffs is None:
            return AdjointUnsolvable(j, permuted)
        entries.append(coeffs)
    # entries[j] holds column j
    r = len(torus)
    return QMatrix(r, r, [entries[j][i] for i in range(r) for j in range(r)])
