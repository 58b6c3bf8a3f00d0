"""Exact toric Futaki computation on moment polytopes.

Halfspace representations with primitive integer outer normals, exact
vertex/volume/moment computation, the lattice-normalized boundary measure
(dmu = dsigma ^ d<u,.>, computed with lattice determinants only, no
radicals), the Donaldson-type functional L(f), Futaki vectors, moment
polytope builders for the toric catalog members, and zero-locus scans.

Every integral is evaluated along two independent routes (base-vertex
triangulation vs divergence theorem over the boundary data) and the public
operations insist the routes agree exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from itertools import combinations
from math import gcd

from .ratlinalg import rref


class ToricError(ValueError):
    pass


class UnboundedError(ToricError):
    pass


class DegenerateError(ToricError):
    pass


class KahlerRegionError(ToricError):
    """Class parameters outside the Kähler region: a facet degenerates."""


@dataclass(frozen=True)
class Halfspace:
    """<normal, x> <= offset with a primitive integer normal."""

    normal: tuple
    offset: Fraction

    def __post_init__(self):
        normal = tuple(int(n) for n in self.normal)
        if all(n == 0 for n in normal):
            raise ToricError("zero normal")
        g = 0
        for n in normal:
            g = gcd(g, abs(n))
        if g != 1:
            raise ToricError(f"normal {normal} is not primitive")
        object.__setattr__(self, "normal", normal)
        object.__setattr__(self, "offset", Fraction(self.offset))

    def value(self, point):
        # normals are ints and points Fractions; int*Fraction is exact
        return sum(n * x for n, x in zip(self.normal, point))

    def render(self):
        nums = " ".join(str(n) for n in self.normal)
        c = self.offset
        ctext = str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
        return f"{nums} <= {ctext}"


class Polytope:
    """Bounded full-dimensional polytope in dimension 1, 2 or 3."""

    __slots__ = ("dim", "halfspaces", "vertices", "facet_cycles", "_cache")

    def __init__(self, dim, halfspaces, vertices, facet_cycles):
        self.dim = dim
        self.halfspaces = tuple(halfspaces)
        self.vertices = tuple(vertices)
        self.facet_cycles = tuple(facet_cycles)
        self._cache = {}

    @classmethod
    def from_halfspaces(cls, dim, halfspaces):
        if dim not in (1, 2, 3):
            raise ToricError("only dimensions 1..3 are supported")
        halfspaces = [h if isinstance(h, Halfspace) else Halfspace(*h) for h in halfspaces]
        if len({h.normal for h in halfspaces}) != len(halfspaces):
            raise ToricError("repeated facet normal")
        _check_bounded(dim, halfspaces)
        vertices = _enumerate_vertices(dim, halfspaces)
        if not vertices:
            raise DegenerateError("no vertices: empty or degenerate halfspace system")
        if _affine_rank(vertices) != dim:
            raise DegenerateError("lower-dimensional input")
        cycles = _facet_cycles(dim, halfspaces, vertices)
        return cls(dim, halfspaces, vertices, cycles)

    def facet_vertices(self, f):
        return [self.vertices[i] for i in self.facet_cycles[f]]

    def contains(self, point):
        return all(h.value(point) <= h.offset for h in self.halfspaces)

    def translated(self, t):
        t = [Fraction(x) for x in t]
        hs = [Halfspace(h.normal, h.offset + sum(Fraction(n) * x for n, x in zip(h.normal, t)))
              for h in self.halfspaces]
        return Polytope.from_halfspaces(self.dim, hs)

    def unimodular_image(self, umatrix, t=None):
        """Image under x -> U x + t for an integer U with |det U| = 1."""
        d = self.dim
        if t is None:
            t = [Fraction(0)] * d
        u_inv_t = _inverse_transpose_int(umatrix)
        hs = []
        for h in self.halfspaces:
            normal = tuple(sum(u_inv_t[i][j] * h.normal[j] for j in range(d)) for i in range(d))
            shift = sum(Fraction(n) * Fraction(x) for n, x in zip(normal, t))
            hs.append(Halfspace(normal, h.offset + shift))
        return Polytope.from_halfspaces(d, hs)

    def scaled(self, k):
        k = Fraction(k)
        if k <= 0:
            raise ToricError("scale factor must be positive")
        return Polytope.from_halfspaces(
            self.dim, [Halfspace(h.normal, h.offset * k) for h in self.halfspaces])

    def render(self):
        return "\n".join(h.render() for h in self.halfspaces) + "\n"


def vertices_from_halfspaces(dim, halfspaces):
    """Exact rational vertices of a valid H-representation."""
    return Polytope.from_halfspaces(dim, halfspaces).vertices


def parse_polytope_text(text, dim=None):
    """One halfspace per line: ``n1 n2 [n3] <= c``; ``#`` comments allowed."""
    halfspaces = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "<=" not in line:
            raise ToricError(f"line {lineno}: missing '<='")
        lhs, rhs = line.split("<=")
        normal = tuple(int(tok) for tok in lhs.split())
        offset = Fraction(rhs.strip())
        halfspaces.append(Halfspace(normal, offset))
    if not halfspaces:
        raise ToricError("no halfspaces")
    dims = {len(h.normal) for h in halfspaces}
    if len(dims) != 1:
        raise ToricError("inconsistent dimensions")
    d = dims.pop()
    if dim is not None and dim != d:
        raise ToricError("dimension mismatch")
    return Polytope.from_halfspaces(d, halfspaces)


# ---------------------------------------------------------------------------
# construction internals
# ---------------------------------------------------------------------------

def _check_bounded(dim, halfspaces):
    normals = [h.normal for h in halfspaces]
    candidates = []
    if dim == 1:
        candidates = [(1,), (-1,)]
    elif dim == 2:
        for n in normals:
            candidates.append((-n[1], n[0]))
            candidates.append((n[1], -n[0]))
    else:
        rows, pivots = rref([[Fraction(x) for x in n] for n in normals])
        if len(pivots) < 3:
            raise UnboundedError("normals do not span the space")
        for a, b in combinations(normals, 2):
            c = _cross(a, b)
            if any(c):
                candidates.append(tuple(c))
                candidates.append(tuple(-x for x in c))
    if dim == 2:
        rows, pivots = rref([[Fraction(x) for x in n] for n in normals])
        if len(pivots) < 2:
            raise UnboundedError("normals do not span the space")
    for ray in candidates:
        if all(sum(n * r for n, r in zip(h.normal, ray)) <= 0 for h in halfspaces):
            raise UnboundedError(f"recession direction {ray}")


def _cross(a, b):
    return [a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0]]


def _enumerate_vertices(dim, halfspaces):
    seen = {}
    constraints = [(h.normal, h.offset) for h in halfspaces]
    for combo in combinations(range(len(halfspaces)), dim):
        rows = [list(halfspaces[i].normal) for i in combo]
        rhs = [halfspaces[i].offset for i in combo]
        point = _cramer_solve(rows, rhs)
        if point is None:
            continue
        if all(sum(n * x for n, x in zip(normal, point)) <= offset
               for normal, offset in constraints):
            seen.setdefault(point, None)
    return sorted(seen)


def _cramer_solve(rows, rhs):
    det = _det_frac(rows)
    if det == 0:
        return None
    d = len(rows)
    out = []
    for j in range(d):
        replaced = [[rhs[i] if k == j else rows[i][k] for k in range(d)]
                    for i in range(d)]
        out.append(_det_frac(replaced) / det)
    return tuple(out)


def _affine_rank(points):
    base = points[0]
    rows = [[Fraction(x) - Fraction(b) for x, b in zip(p, base)] for p in points[1:]]
    if not rows:
        return 0
    _, pivots = rref(rows)
    return len(pivots)


def _facet_cycles(dim, halfspaces, vertices):
    cycles = []
    for f, h in enumerate(halfspaces):
        incident = [i for i, v in enumerate(vertices) if h.value(v) == h.offset]
        if dim == 1:
            if len(incident) != 1:
                raise DegenerateError(f"facet {f} does not support a point")
            cycles.append((incident[0],))
            continue
        if dim == 2:
            if len(incident) != 2:
                raise DegenerateError(f"facet {f} does not support an edge")
            cycles.append(tuple(incident))
            continue
        if len(incident) < 3 or _affine_rank([vertices[i] for i in incident]) != 2:
            raise DegenerateError(f"facet {f} does not support a 2-face")
        cycles.append(_order_polygon(h.normal, [(i, vertices[i]) for i in incident]))
    return cycles


def _order_polygon(normal, labelled):
    """Cyclic order of a convex facet polygon, exact angular sort around the
    centroid in plane coordinates."""
    k = len(labelled)
    centroid = tuple(sum(Fraction(p[i]) for _, p in labelled) / k for i in range(3))
    b1 = tuple(Fraction(labelled[0][1][i]) - centroid[i] for i in range(3))
    b2 = tuple(Fraction(x) for x in _cross(normal, b1))
    planar = []
    for idx, p in labelled:
        d = tuple(Fraction(p[i]) - centroid[i] for i in range(3))
        planar.append((idx, _plane_coords(d, b1, b2)))

    def half(q):
        return 0 if (q[1] > 0 or (q[1] == 0 and q[0] > 0)) else 1

    def compare(a, b):
        qa, qb = a[1], b[1]
        ha, hb = half(qa), half(qb)
        if ha != hb:
            return -1 if ha < hb else 1
        cross = qa[0] * qb[1] - qa[1] * qb[0]
        if cross == 0:
            raise DegenerateError("repeated direction on facet polygon")
        return -1 if cross > 0 else 1

    ordered = sorted(planar, key=cmp_to_key(compare))
    return tuple(idx for idx, _ in ordered)


def _plane_coords(d, b1, b2):
    for i, j in ((0, 1), (0, 2), (1, 2)):
        det = b1[i] * b2[j] - b1[j] * b2[i]
        if det != 0:
            alpha = (d[i] * b2[j] - d[j] * b2[i]) / det
            beta = (b1[i] * d[j] - b1[j] * d[i]) / det
            return (alpha, beta)
    raise DegenerateError("degenerate plane basis")


def _inverse_transpose_int(u):
    d = len(u)
    det = _det_int(u)
    if abs(det) != 1:
        raise ToricError("matrix is not unimodular")
    adj = [[_cofactor(u, j, i) for j in range(d)] for i in range(d)]  # adjugate
    inv = [[Fraction(adj[i][j], det) for j in range(d)] for i in range(d)]
    return [[int(inv[j][i]) for j in range(d)] for i in range(d)]  # transpose


def _det_int(u):
    d = len(u)
    if d == 0:
        return 1
    if d == 1:
        return u[0][0]
    if d == 2:
        return u[0][0] * u[1][1] - u[0][1] * u[1][0]
    total = 0
    for j in range(d):
        total += (-1) ** j * u[0][j] * _det_int(_minor(u, 0, j))
    return total


def _minor(u, i, j):
    return [[u[r][c] for c in range(len(u)) if c != j] for r in range(len(u)) if r != i]


def _cofactor(u, i, j):
    return (-1) ** (i + j) * _det_int(_minor(u, i, j))


# ---------------------------------------------------------------------------
# exact integrals
# ---------------------------------------------------------------------------

def _primitive_direction(delta):
    denom = 1
    for x in delta:
        denom = denom * x.denominator // gcd(denom, x.denominator)
    ints = [int(x * denom) for x in delta]
    g = 0
    for n in ints:
        g = gcd(g, abs(n))
    return tuple(n // g for n in ints)


def _edge_sigma(v, w):
    """Lattice length of an edge: the factor L with w - v = L * primitive."""
    delta = [Fraction(b) - Fraction(a) for a, b in zip(v, w)]
    t = _primitive_direction(delta)
    for x, ti in zip(delta, t):
        if ti != 0:
            return abs(x / ti)
    raise ToricError("zero-length edge")


def _triangle_sigma(normal, a, b, c):
    """Lattice area of a facet triangle: |k|/2 with (b-a)x(c-a) = k * normal."""
    e1 = [Fraction(x) - Fraction(y) for x, y in zip(b, a)]
    e2 = [Fraction(x) - Fraction(y) for x, y in zip(c, a)]
    cr = _cross(e1, e2)
    for ci, ni in zip(cr, normal):
        if ni != 0:
            return abs(ci / Fraction(ni))
    raise ToricError("degenerate facet triangle")


def _facet_measures_fan(p, f, origin_mode):
    """(sigma mass, sigma moment) of facet f; origin_mode picks the fan apex
    ('vertex' route vs 'centroid' route)."""
    cached = p._cache.get(("facet", f, origin_mode))
    if cached is not None:
        return cached
    verts = p.facet_vertices(f)
    d = p.dim
    if d == 1:
        v = verts[0]
        result = (Fraction(1), [Fraction(x) for x in v])
    elif d == 2:
        v, w = verts
        sigma = _edge_sigma(v, w)
        mid = [(Fraction(a) + Fraction(b)) / 2 for a, b in zip(v, w)]
        result = (sigma, [sigma * x for x in mid])
    else:
        normal = p.halfspaces[f].normal
        k = len(verts)
        if origin_mode == "vertex":
            apex = verts[0]
            fan = [(verts[i], verts[i + 1]) for i in range(1, k - 1)]
        else:
            apex = tuple(sum(Fraction(v[i]) for v in verts) / k for i in range(3))
            fan = [(verts[i], verts[(i + 1) % k]) for i in range(k)]
        mass = Fraction(0)
        moment = [Fraction(0)] * 3
        for b, c in fan:
            area = _triangle_sigma(normal, apex, b, c) / 2
            if area == 0:
                continue
            centroid = [(Fraction(apex[i]) + Fraction(b[i]) + Fraction(c[i])) / 3
                        for i in range(3)]
            mass += area
            for i in range(3):
                moment[i] += area * centroid[i]
        result = (mass, moment)
    p._cache[("facet", f, origin_mode)] = result
    return result


def _boundary_route(p, origin_mode):
    mass = Fraction(0)
    moment = [Fraction(0)] * p.dim
    for f in range(len(p.halfspaces)):
        m, mom = _facet_measures_fan(p, f, origin_mode)
        mass += m
        for i in range(p.dim):
            moment[i] += mom[i]
    return mass, tuple(moment)


def _solid_route_triangulation(p):
    d = p.dim
    base = p.vertices[0]
    vol = Fraction(0)
    moment = [Fraction(0)] * d
    if d == 1:
        a, b = p.vertices[0][0], p.vertices[-1][0]
        vol = abs(b - a)
        mid = (a + b) / 2
        return vol, (vol * mid,)
    for f, h in enumerate(p.halfspaces):
        if h.value(base) == h.offset:
            continue
        verts = p.facet_vertices(f)
        if d == 2:
            simplices = [(verts[0], verts[1])]
        else:
            simplices = [(verts[0], verts[i], verts[i + 1]) for i in range(1, len(verts) - 1)]
        for simplex in simplices:
            rows = [[Fraction(x) - Fraction(bx) for x, bx in zip(v, base)] for v in simplex]
            det = _det_frac(rows)
            v = abs(det) / _factorial(d)
            if v == 0:
                continue
            pts = [base] + list(simplex)
            centroid = [sum(Fraction(pt[i]) for pt in pts) / (d + 1) for i in range(d)]
            vol += v
            for i in range(d):
                moment[i] += v * centroid[i]
    return vol, tuple(moment)


def _solid_route_divergence(p):
    d = p.dim
    vol = Fraction(0)
    moment = [Fraction(0)] * d
    for f, h in enumerate(p.halfspaces):
        m, mom = _facet_measures_fan(p, f, "centroid" if d == 3 else "vertex")
        vol += h.offset * m
        for i in range(d):
            moment[i] += h.offset * mom[i]
    return vol / d, tuple(x / (d + 1) for x in moment)


def _det_frac(rows):
    d = len(rows)
    if d == 1:
        return rows[0][0]
    if d == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    total = Fraction(0)
    for j in range(d):
        total += (-1) ** j * rows[0][j] * _det_frac([r[:j] + r[j + 1:] for r in rows[1:]])
    return total


def _factorial(n):
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def _integral_data(p):
    """All exact integrals, each evaluated along both routes; cached."""
    data = p._cache.get("integrals")
    if data is None:
        tri = _solid_route_triangulation(p)
        div = _solid_route_divergence(p)
        if tri != div:
            raise ToricError(f"solid integral routes disagree: {tri} vs {div}")
        bv = _boundary_route(p, "vertex")
        bc = _boundary_route(p, "centroid")
        if bv != bc:
            raise ToricError(f"boundary routes disagree: {bv} vs {bc}")
        data = (tri[0], tri[1], bv[0], bv[1])
        p._cache["integrals"] = data
    return data


def volume(p):
    """Exact Lebesgue volume; triangulation and divergence routes must agree."""
    return _integral_data(p)[0]


def moment(p):
    """Exact first moment vector (integral of x over P)."""
    return _integral_data(p)[1]


def boundary_integral(p):
    """(sigma mass of the boundary, sigma moment vector), lattice measure."""
    data = _integral_data(p)
    return data[2], data[3]


def donaldson_L(p, affine):
    """L(f) = int_dP f dsigma - (sigma mass / volume) int_P f dmu for the
    affine function f(x) = affine[0] + sum affine[1:][i] x_i.  L(1) = 0 by
    construction."""
    const = Fraction(affine[0])
    grad = [Fraction(a) for a in affine[1:]]
    if len(grad) != p.dim:
        raise ToricError("affine function has the wrong dimension")
    vol, mom, mass, smoment = _integral_data(p)
    boundary_part = const * mass + sum(g * m for g, m in zip(grad, smoment))
    solid_part = const * vol + sum(g * m for g, m in zip(grad, mom))
    return boundary_part - (mass / vol) * solid_part


@dataclass(frozen=True)
class FutakiVector:
    """Sigma barycenter of the boundary minus mu barycenter of the solid;
    zero exactly when the toric Futaki character vanishes."""

    components: tuple

    def is_zero(self):
        return all(c == 0 for c in self.components)

    def render(self):
        return "(" + ", ".join(_frac_text(c) for c in self.components) + ")"


def _frac_text(c):
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def futaki_vector(p):
    vol, mom, mass, smoment = _integral_data(p)
    return FutakiVector(tuple(sm / mass - m / vol for sm, m in zip(smoment, mom)))


def product_polytope(p, q):
    d = p.dim + q.dim
    hs = [Halfspace(h.normal + (0,) * q.dim, h.offset) for h in p.halfspaces]
    hs += [Halfspace((0,) * p.dim + h.normal, h.offset) for h in q.halfspaces]
    return Polytope.from_halfspaces(d, hs)


# ---------------------------------------------------------------------------
# catalog polytope builders
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ToricFamily:
    name: str
    param_names: tuple
    facet_count: int
    anticanonical: dict
    builder: object
    scan_upper: dict        # exclusive upper grid bound per scanned parameter
    fixed_for_scan: dict    # parameters pinned during scans

    def build(self, **params):
        missing = [n for n in self.param_names if n not in params]
        if missing:
            raise ToricError(f"missing parameters {missing} for family {self.name}")
        extra = [n for n in params if n not in self.param_names]
        if extra:
            raise ToricError(f"unknown parameters {extra} for family {self.name}")
        values = {n: Fraction(params[n]) for n in self.param_names}
        try:
            polytope = self.builder(**values)
        except (DegenerateError, UnboundedError) as exc:
            raise KahlerRegionError(
                f"parameters outside the Kähler region for {self.name}: {exc}") from exc
        if len(polytope.halfspaces) != self.facet_count:
            raise KahlerRegionError(
                f"parameters outside the Kähler region for {self.name}: "
                f"expected {self.facet_count} facets")
        return polytope


def _hs(*rows):
    return [Halfspace(tuple(r[:-1]), r[-1]) for r in rows]


def _build_p1(a):
    return Polytope.from_halfspaces(1, _hs((-1, 0), (1, a)))


def _build_p2(h):
    return Polytope.from_halfspaces(2, _hs((-1, 0, 0), (0, -1, 0), (1, 1, h)))


def _build_p1xp1(a, b):
    return Polytope.from_halfspaces(2, _hs((-1, 0, 0), (1, 0, a), (0, -1, 0), (0, 1, b)))


def _build_p1xp2(a, h):
    return product_polytope(_build_p1(a), _build_p2(h))


def _build_p1cubed(a, b, c):
    return product_polytope(_build_p1xp1(a, b), _build_p1(c))


def _build_s6(a, b, c):
    return Polytope.from_halfspaces(2, _hs(
        (-1, 0, 0), (0, -1, 0), (1, 1, 3), (-1, -1, -a), (1, 0, 3 - b), (0, 1, 3 - c)))


def _build_p1xs6(t, a, b, c):
    return product_polytope(_build_p1(t), _build_s6(a, b, c))


def _build_bl2lines(h, a, b):
    return Polytope.from_halfspaces(3, _hs(
        (-1, 0, 0, 0), (0, -1, 0, 0), (0, 0, -1, 0),
        (1, 1, 1, h), (0, 1, 1, h - a), (0, -1, -1, -b)))


FAMILIES = {
    "p1": ToricFamily("p1", ("a",), 2, {"a": Fraction(2)}, _build_p1,
                      {"a": Fraction(3)}, {}),
    "p2": ToricFamily("p2", ("h",), 3, {"h": Fraction(3)}, _build_p2,
                      {"h": Fraction(3)}, {}),
    "p1xp1": ToricFamily("p1xp1", ("a", "b"), 4, {"a": Fraction(2), "b": Fraction(2)},
                         _build_p1xp1, {"a": Fraction(3), "b": Fraction(3)}, {}),
    "p1xp2": ToricFamily("p1xp2", ("a", "h"), 5, {"a": Fraction(2), "h": Fraction(3)},
                         _build_p1xp2, {"a": Fraction(3), "h": Fraction(3)}, {}),
    "p1cubed": ToricFamily("p1cubed", ("a", "b", "c"),
                           6, {"a": Fraction(2), "b": Fraction(2), "c": Fraction(2)},
                           _build_p1cubed, {"a": Fraction(3), "b": Fraction(3),
                                            "c": Fraction(3)}, {}),
    "s6": ToricFamily("s6", ("a", "b", "c"),
                      6, {"a": Fraction(1), "b": Fraction(1), "c": Fraction(1)},
                      _build_s6, {"a": Fraction(3), "b": Fraction(3), "c": Fraction(3)}, {}),
    "p1xs6": ToricFamily("p1xs6", ("t", "a", "b", "c"),
                         8, {"t": Fraction(2), "a": Fraction(1), "b": Fraction(1),
                             "c": Fraction(1)},
                         _build_p1xs6, {"a": Fraction(3), "b": Fraction(3), "c": Fraction(3)},
                         {"t": Fraction(2)}),
    "bl2lines-p3": ToricFamily("bl2lines-p3", ("h", "a", "b"),
                               6, {"h": Fraction(4), "a": Fraction(1), "b": Fraction(1)},
                               _build_bl2lines, {"a": Fraction(4), "b": Fraction(4)},
                               {"h": Fraction(4)}),
}


def class_to_polytope(family, **params):
    if family not in FAMILIES:
        raise ToricError(f"unknown toric family {family!r}")
    return FAMILIES[family].build(**params)


def anticanonical_parameters(family):
    if family not in FAMILIES:
        raise ToricError(f"unknown toric family {family!r}")
    return dict(FAMILIES[family].anticanonical)


# ---------------------------------------------------------------------------
# zero-locus scans
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ScanPoint:
    values: tuple   # (name, Fraction) pairs in scan order
    zero: bool


@dataclass(frozen=True)
class LocusFit:
    equation: str
    on_locus_all_zero: bool
    points_on_locus: int


@dataclass(frozen=True)
class ScanReport:
    family: str
    step: Fraction
    points: tuple
    skipped: int
    loci: tuple              # LocusFit per candidate equation
    covered: bool            # every zero point lies on some candidate locus
    zero_everywhere: bool

    def zero_points(self):
        return [p for p in self.points if p.zero]


def zero_locus_scan(family, step, loci=(), fixed=None):
    """Exact zero test of the Futaki vector over a rational grid.

    Out-of-region grid points are skipped and counted.  Candidate linear
    equations (catalog data) are fitted against the computed zero set.
    """
    fam = FAMILIES.get(family)
    if fam is None:
        raise ToricError(f"unknown toric family {family!r}")
    step = Fraction(step)
    if step <= 0:
        raise ToricError("grid step must be positive")
    pinned = dict(fam.fixed_for_scan)
    if fixed:
        pinned.update({k: Fraction(v) for k, v in fixed.items()})
    scan_names = [n for n in fam.param_names if n not in pinned]
    grids = []
    for n in scan_names:
        upper = fam.scan_upper[n]
        k = 1
        values = []
        while k * step < upper:
            values.append(k * step)
            k += 1
        grids.append(values)
    points = []
    skipped = 0
    for combo in _lex_product(grids):
        params = dict(pinned)
        params.update({n: v for n, v in zip(scan_names, combo)})
        try:
            polytope = fam.build(**params)
        except KahlerRegionError:
            skipped += 1
            continue
        vec = futaki_vector(polytope)
        points.append(ScanPoint(tuple((n, params[n]) for n in scan_names), vec.is_zero()))
    fits = []
    on_some_locus = [False] * len(points)
    for eq in loci:
        on_count = 0
        all_zero = True
        for i, pt in enumerate(points):
            values = dict(pt.values)
            values.update(pinned)
            if _locus_holds(eq, values):
                on_count += 1
                on_some_locus[i] = True
                if not pt.zero:
                    all_zero = False
        fits.append(LocusFit(eq, all_zero, on_count))
    covered = (all(on_some_locus[i] for i, pt in enumerate(points) if pt.zero)
               if loci else True)
    zero_everywhere = bool(points) and all(pt.zero for pt in points)
    return ScanReport(family, step, tuple(points), skipped, tuple(fits), covered,
                      zero_everywhere)


def _lex_product(grids):
    if not grids:
        yield ()
        return
    for head in grids[0]:
        for tail in _lex_product(grids[1:]):
            yield (head,) + tail


def _locus_holds(equation, values):
    sides = equation.split("=")
    if len(sides) < 2:
        raise ToricError(f"bad locus equation {equation!r}")
    evaluated = [_eval_linear(side, values) for side in sides]
    return all(v == evaluated[0] for v in evaluated[1:])


def _eval_linear(text, values):
    tokens = _linear_tokens(text)
    pos = [0]

    def expr():
        value = term()
        while pos[0] < len(tokens) and tokens[pos[0]] in "+-":
            op = tokens[pos[0]]
            pos[0] += 1
            rhs = term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term():
        value = atom()
        while pos[0] < len(tokens) and tokens[pos[0]] in "*/":
            op = tokens[pos[0]]
            pos[0] += 1
            rhs = atom()
            value = value * rhs if op == "*" else value / rhs
        return value

    def atom():
        tok = tokens[pos[0]]
        if tok == "-":
            pos[0] += 1
            return -atom()
        if tok == "(":
            pos[0] += 1
            value = expr()
            if tokens[pos[0]] != ")":
                raise ToricError(f"unbalanced parenthesis in {text!r}")
            pos[0] += 1
            return value
        pos[0] += 1
        if tok.replace("/", "").isdigit():
            return Fraction(tok)
        if tok in values:
            return Fraction(values[tok])
        raise ToricError(f"unknown symbol {tok!r} in locus equation")

    value = expr()
    if pos[0] != len(tokens):
        raise ToricError(f"trailing input in locus equation {text!r}")
    return value


def _linear_tokens(text):
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in "+-*/()":
            tokens.append(ch)
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(text) and (text[j].isdigit() or text[j] == "/"):
                j += 1
            tokens.append(text[i:j])
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(text[i:j])
            i = j
        else:
            raise ToricError(f"bad character {ch!r} in locus equation")
    return tokens
