"""Declarative case records: loader, validator, canonical printer.

Line-oriented UTF-8: ``[case "ID"]`` headers, ``key = value`` pairs with
repeated keys for lists (``center``, ``torus``, ``finite``, ...), polynomial
values in the shared surface syntax, maps as ``map(expr, ...)`` listing the
image of every coordinate in ambient order with an explicit
``factors = (permutation)`` clause.  ``param a excludes -1, 1`` declares a
parameter.  The shipped catalog is stored canonically, so print(load(path))
round-trips byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

from .polyring import AmbientSpace, ParamField, PolyError, parse_poly
from .ratlinalg import QMatrix
from .symmetry import (MonomialAutomorphism, ParamCurve,
                       SubvarietyPresentation, SymmetryError, TorusGenerator,
                       torus_eigencheck)

FAMILY_LIST = (
    "2.20", "2.21", "2.22", "2.24", "2.27", "2.29", "2.32", "2.34",
    "3.5", "3.8", "3.9", "3.10", "3.12", "3.13", "3.15", "3.17",
    "3.19", "3.20", "3.25", "3.27", "4.2", "4.3", "4.4", "4.6",
    "4.7", "4.13", "5.1", "5.3", "6.1", "7.1", "8.1", "9.1", "10.1",
)

EXCEPTION_FAMILIES = ("3.9", "3.13", "3.19", "3.20", "4.2", "4.4", "4.7", "5.3")

KINDS = ("polynomial", "abstract", "product", "semisimple_full", "toric-crosscheck")


class CatalogError(ValueError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


@dataclass(frozen=True)
class Center:
    stage: int
    presentation: SubvarietyPresentation


@dataclass(frozen=True)
class ProductFactorSpec:
    name: str
    verdict_tag: str          # full_cone | families
    rank: int
    family_dims: tuple = ()
    toric_family: str = ""
    anticanonical_in_families: bool = True


@dataclass
class CaseRecord:
    id: str
    kind: str
    theorem: int
    expected: tuple                    # ("full_cone",) | ("subcone", d) | ("see_toric",)
    aut: str = ""
    notes: tuple = ()
    provenance: tuple = ()
    ambient: AmbientSpace = None
    params: ParamField = None
    variety: tuple = ()
    centers: tuple = ()
    torus: tuple = ()
    finite: tuple = ()                 # (name, order, MonomialAutomorphism)
    semisimple: str = ""
    h11_labels: tuple = ()
    anticanonical: tuple = None
    torus_rank: int = None             # abstract records
    adjoints: tuple = ()               # (name, QMatrix)
    fixed_dim: int = None
    anticanonical_in_fixed: bool = None
    product_factors: tuple = ()
    loci: tuple = ()
    toric_family: str = ""
    anticanonical_params: dict = field(default_factory=dict)
    expected_adjoint: str = ""
    expected_toric: str = ""
    entries: tuple = ()                # raw (key, value) pairs in file order

    @property
    def family(self):
        return self.id.split("-")[0]

    def finite_by_name(self, name):
        for entry in self.finite:
            if entry[0] == name:
                return entry
        raise KeyError(name)


@dataclass
class Catalog:
    version: int
    records: tuple
    segments: tuple                    # render stream

    def by_id(self, case_id):
        for r in self.records:
            if r.id == case_id:
                return r
        raise KeyError(case_id)

    def families(self):
        return tuple(dict.fromkeys(r.family for r in self.records))

    def render(self):
        out = []
        for seg in self.segments:
            tag = seg[0]
            if tag == "comment":
                out.append(seg[1])
            elif tag == "blank":
                out.append("")
            elif tag == "version":
                out.append(f"version = {seg[1]}")
            elif tag == "header":
                out.append(f'[case "{seg[1]}"]')
            else:
                out.append(f"{seg[1]} = {seg[2]}")
        return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# loading
# ---------------------------------------------------------------------------

def default_catalog_text():
    return resources.files("futakizero.data").joinpath("catalog.cat").read_text("utf-8")


def load_catalog(path=None, text=None):
    """Parse and fully resolve a catalog; grammar errors carry line numbers."""
    if text is None:
        if path is None:
            text = default_catalog_text()
        else:
            with open(path, "r", encoding="utf-8") as fh:
                text = fh.read()
    segments = []
    version = None
    raw_records = []   # (id, line, [(key, value, line)])
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip("\n")
        stripped = line.strip()
        if not stripped:
            segments.append(("blank",))
            continue
        if stripped.startswith("#"):
            segments.append(("comment", line))
            continue
        if stripped.startswith("[case"):
            if not (stripped.startswith('[case "') and stripped.endswith('"]')):
                raise CatalogError('malformed header, expected [case "ID"]', lineno)
            case_id = stripped[len('[case "'):-2]
            if any(r[0] == case_id for r in raw_records):
                raise CatalogError(f"duplicate id {case_id!r}", lineno)
            current = (case_id, lineno, [])
            raw_records.append(current)
            segments.append(("header", case_id))
            continue
        if "=" not in stripped:
            raise CatalogError(f"expected key = value, got {stripped!r}", lineno)
        key, _, value = stripped.partition("=")
        key = key.strip()
        value = value.strip()
        if current is None:
            if key == "version":
                version = int(value)
                segments.append(("version", version))
                continue
            raise CatalogError(f"key {key!r} outside any record", lineno)
        current[2].append((key, value, lineno))
        segments.append(("kv", key, value))
    if version is None:
        raise CatalogError("missing version line (empty catalog?)")
    if not raw_records:
        raise CatalogError("catalog has no records")
    records = tuple(_build_record(case_id, header_line, entries)
                    for case_id, header_line, entries in raw_records)
    return Catalog(version, records, tuple(segments))


def _build_record(case_id, header_line, entries):
    def all_of(key):
        return [(v, ln) for k, v, ln in entries if k == key]

    def one_of(key, default=None):
        hits = all_of(key)
        if not hits:
            if default is None:
                raise CatalogError(f"record {case_id}: missing key {key!r}", header_line)
            return default, header_line
        if len(hits) > 1:
            raise CatalogError(f"record {case_id}: repeated key {key!r}", hits[1][1])
        return hits[0]

    known = {"kind", "theorem", "expected", "aut", "note", "provenance", "ambient",
             "param", "variety", "center", "torus", "finite", "semisimple", "h11",
             "anticanonical", "torus_rank", "adjoint", "fixed_dim",
             "anticanonical_in_fixed", "factor", "locus", "toric_family",
             "anticanonical_params", "expected_adjoint", "expected_toric"}
    for k, _, ln in entries:
        if k not in known:
            raise CatalogError(f"record {case_id}: unknown key {k!r}", ln)

    kind, ln = one_of("kind")
    if kind not in KINDS:
        raise CatalogError(f"record {case_id}: unknown kind {kind!r}", ln)
    theorem = int(one_of("theorem")[0])
    expected = _parse_expected(*one_of("expected"), case_id)
    aut = one_of("aut", default="")[0]
    notes = tuple(v for v, _ in all_of("note"))
    provenance = tuple(v for v, _ in all_of("provenance"))
    semisimple = one_of("semisimple", default="")[0]

    params = _parse_params(all_of("param"), case_id)
    ambient = None
    ambient_hits = all_of("ambient")
    if ambient_hits:
        ambient = _parse_ambient(*ambient_hits[0], case_id, params)

    variety = tuple(_parse_value(parse_poly, v, ln, case_id, ambient, params)
                    for v, ln in all_of("variety"))
    centers = tuple(_parse_center(v, ln, case_id, ambient, params)
                    for v, ln in all_of("center"))
    torus = tuple(_parse_torus(v, ln, case_id, ambient)
                  for v, ln in all_of("torus"))
    finite = tuple(_parse_finite(v, ln, case_id, ambient, params)
                   for v, ln in all_of("finite"))

    h11 = ()
    h11_hits = all_of("h11")
    if h11_hits:
        h11 = tuple(x.strip() for x in h11_hits[0][0].split(","))
    anticanonical = None
    anti_hits = all_of("anticanonical")
    if anti_hits:
        anticanonical = tuple(Fraction(x.strip()) for x in anti_hits[0][0].split(","))

    torus_rank = None
    tr_hits = all_of("torus_rank")
    if tr_hits:
        torus_rank = int(tr_hits[0][0])
    adjoints = tuple(_parse_adjoint(v, ln, case_id) for v, ln in all_of("adjoint"))
    fixed_dim = None
    fd_hits = all_of("fixed_dim")
    if fd_hits:
        fixed_dim = int(fd_hits[0][0])
    aif = None
    aif_hits = all_of("anticanonical_in_fixed")
    if aif_hits:
        aif = _parse_bool(aif_hits[0][0], aif_hits[0][1])

    factors = tuple(_parse_factor(v, ln, case_id) for v, ln in all_of("factor"))
    loci = tuple(v for v, _ in all_of("locus"))
    toric_family = one_of("toric_family", default="")[0]
    anticanonical_params = {}
    ap_hits = all_of("anticanonical_params")
    if ap_hits:
        anticanonical_params = _parse_param_values(ap_hits[0][0], ap_hits[0][1])
    expected_adjoint = one_of("expected_adjoint", default="")[0]
    expected_toric = one_of("expected_toric", default="")[0]

    return CaseRecord(
        id=case_id, kind=kind, theorem=theorem, expected=expected, aut=aut,
        notes=notes, provenance=provenance, ambient=ambient, params=params,
        variety=variety, centers=centers, torus=torus, finite=finite,
        semisimple=semisimple, h11_labels=h11, anticanonical=anticanonical,
        torus_rank=torus_rank, adjoints=adjoints, fixed_dim=fixed_dim,
        anticanonical_in_fixed=aif, product_factors=factors, loci=loci,
        toric_family=toric_family, anticanonical_params=anticanonical_params,
        expected_adjoint=expected_adjoint, expected_toric=expected_toric,
        entries=tuple((k, v) for k, v, _ in entries))


def _parse_expected(value, line, case_id):
    if value == "full_cone":
        return ("full_cone",)
    if value == "see_toric":
        return ("see_toric",)
    if value.startswith("subcone(") and value.endswith(")"):
        return ("subcone", int(value[len("subcone("):-1]))
    raise CatalogError(f"record {case_id}: bad expected verdict {value!r}", line)


def _parse_params(hits, case_id):
    names = []
    excluded = {}
    for value, line in hits:
        head, _, tail = value.partition(" excludes ")
        name = head.strip()
        if not name.isidentifier():
            raise CatalogError(f"record {case_id}: bad parameter name {name!r}", line)
        names.append(name)
        if tail:
            excluded[name] = tuple(Fraction(x.strip()) for x in tail.split(","))
    return ParamField(tuple(names), excluded)


def _parse_ambient(value, line, case_id, params):
    factors = []
    for chunk in value.split("|"):
        names = tuple(chunk.split())
        if len(names) < 2:
            raise CatalogError(f"record {case_id}: ambient factor needs >= 2 coordinates",
                               line)
        factors.append(names)
    try:
        ambient = AmbientSpace.product(*factors)
    except PolyError as exc:
        raise CatalogError(f"record {case_id}: {exc}", line) from exc
    clash = set(ambient.coords) & set(params.names)
    if clash:
        raise CatalogError(f"record {case_id}: names {sorted(clash)} are both "
                           f"coordinates and parameters", line)
    return ambient


def _parse_value(fn, value, line, case_id, ambient, params):
    if ambient is None:
        raise CatalogError(f"record {case_id}: polynomial data without an ambient", line)
    try:
        return fn(value, ambient, params)
    except PolyError as exc:
        raise CatalogError(f"record {case_id}: {exc}", line) from exc


def _split_args(body):
    parts = []
    depth = 0
    start = 0
    for i, ch in enumerate(body):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            parts.append(body[start:i].strip())
            start = i + 1
    tail = body[start:].strip()
    if tail:
        parts.append(tail)
    return parts


def _take_call(text, name):
    """Extract the argument body of ``name(...)`` from the front of text;
    returns (body, rest)."""
    text = text.strip()
    if not text.startswith(name + "("):
        return None, text
    depth = 0
    for i in range(len(name), len(text)):
        if text[i] == "(":
            depth += 1
        elif text[i] == ")":
            depth -= 1
            if depth == 0:
                return text[len(name) + 1:i], text[i + 1:].strip()
    raise CatalogError(f"unbalanced parentheses in {text!r}")


def _parse_center(value, line, case_id, ambient, params):
    stage = 1
    rest = value.strip()
    if rest.startswith("stage "):
        head, _, rest = rest.partition(":")
        stage = int(head.strip()[len("stage "):])
        rest = rest.strip()
    curve = None
    ideal = ()
    if rest.startswith("curve("):
        body, rest = _take_call(rest, "curve")
        texts = _split_args(body)
        try:
            curve = ParamCurve.from_texts(texts, ambient, params)
        except (PolyError, SymmetryError) as exc:
            raise CatalogError(f"record {case_id}: {exc}", line) from exc
        if rest.startswith("with "):
            rest = rest[len("with "):]
    if rest.startswith("ideal("):
        body, rest = _take_call(rest, "ideal")
        ideal = tuple(_parse_value(parse_poly, t, line, case_id, ambient, params)
                      for t in _split_args(body))
    if rest:
        raise CatalogError(f"record {case_id}: trailing center data {rest!r}", line)
    if curve is None and not ideal:
        raise CatalogError(f"record {case_id}: empty center", line)
    return Center(stage, SubvarietyPresentation(ideal=ideal, curve=curve))


def _parse_torus(value, line, case_id, ambient):
    body, rest = _take_call(value, "weights")
    if body is None or rest:
        raise CatalogError(f"record {case_id}: torus must be weights(...)", line)
    weights = tuple(int(x.strip()) for x in _split_args(body))
    if ambient is None:
        raise CatalogError(f"record {case_id}: torus without an ambient", line)
    if len(weights) != len(ambient.coords):
        raise CatalogError(
            f"record {case_id}: torus weight length {len(weights)} != "
            f"{len(ambient.coords)} coordinates", line)
    return TorusGenerator(ambient, weights)


def _parse_finite(value, line, case_id, ambient, params):
    parts = [p.strip() for p in value.split(" : ")]
    if len(parts) != 4:
        raise CatalogError(
            f"record {case_id}: finite symmetry needs name : order : factors : map",
            line)
    name = parts[0]
    if not parts[1].startswith("order "):
        raise CatalogError(f"record {case_id}: expected order clause", line)
    order = int(parts[1][len("order "):])
    if not (parts[2].startswith("factors = (") and parts[2].endswith(")")):
        raise CatalogError(f"record {case_id}: expected factors = (...) clause", line)
    declared = tuple(int(x) for x in parts[2][len("factors = ("):-1].split())
    body, rest = _take_call(parts[3], "map")
    if body is None or rest:
        raise CatalogError(f"record {case_id}: expected map(...) clause", line)
    images = _split_args(body)
    try:
        tau = MonomialAutomorphism.from_images(images, ambient, params)
    except (PolyError, SymmetryError) as exc:
        raise CatalogError(f"record {case_id}: {exc}", line) from exc
    computed = tuple(f + 1 for f in tau.factor_map)
    if computed != declared:
        raise CatalogError(
            f"record {case_id}: declared factors {declared} != computed {computed}",
            line)
    return (name, order, tau)


def _parse_adjoint(value, line, case_id):
    name, _, rest = value.partition(" : ")
    body, tail = _take_call(rest.strip(), "matrix")
    if body is None or tail:
        raise CatalogError(f"record {case_id}: adjoint must be name : matrix(...)", line)
    rows = [r.strip() for r in body.split(";")]
    entries = [[Fraction(x) for x in row.split()] for row in rows]
    return (name.strip(), QMatrix.from_rows(entries))


def _parse_factor(value, line, case_id):
    parts = [p.strip() for p in value.split(" : ")]
    if len(parts) < 3:
        raise CatalogError(f"record {case_id}: factor needs name : verdict : rank", line)
    name = parts[0]
    rank = None
    toric = ""
    dims = ()
    anticanonical_in_families = True
    tag = None
    for part in parts[1:]:
        if part == "full_cone":
            tag = "full_cone"
        elif part.startswith("families "):
            tag = "families"
            dims = tuple(int(x.strip()) for x in part[len("families "):].split(","))
        elif part.startswith("rank "):
            rank = int(part[len("rank "):])
        elif part.startswith("toric "):
            toric = part[len("toric "):]
        elif part.startswith("anticanonical_in_families "):
            anticanonical_in_families = _parse_bool(
                part[len("anticanonical_in_families "):], line)
        else:
            raise CatalogError(f"record {case_id}: bad factor clause {part!r}", line)
    if tag is None or rank is None:
        raise CatalogError(f"record {case_id}: factor needs a verdict and a rank", line)
    return ProductFactorSpec(name, tag, rank, dims, toric, anticanonical_in_families)


def _parse_param_values(value, line):
    out = {}
    for chunk in value.split(","):
        key, _, v = chunk.partition("=")
        if not v:
            raise CatalogError(f"bad parameter assignment {chunk!r}", line)
        out[key.strip()] = Fraction(v.strip())
    return out


def _parse_bool(value, line):
    if value == "yes":
        return True
    if value == "no":
        return False
    raise CatalogError(f"expected yes/no, got {value!r}", line)


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

def validate_case(record):
    """Consistency findings for one record; empty list = valid."""
    findings = []
    if record.kind in ("polynomial", "toric-crosscheck"):
        findings.extend(_validate_polynomialish(record))
    elif record.kind == "abstract":
        findings.extend(_validate_abstract(record))
    elif record.kind == "product":
        findings.extend(_validate_product(record))
    if record.kind in ("polynomial", "toric-crosscheck"):
        expected_labels = record.ambient.nfactors + len(record.centers)
        if len(record.h11_labels) != expected_labels:
            findings.append(
                f"h11 label count {len(record.h11_labels)} != factors+centers "
                f"{expected_labels}")
        if record.anticanonical is not None and \
                len(record.anticanonical) != len(record.h11_labels):
            findings.append("anticanonical vector length mismatch")
    return findings


def _validate_polynomialish(record):
    from .symmetry import check_variety_invariant

    findings = []
    for v_index, v in enumerate(record.torus):
        for g_index, g in enumerate(record.variety):
            res = torus_eigencheck([g], v)
            if not res.ok:
                findings.append(f"torus {v_index} vs variety generator {g_index}: "
                                f"{res.detail}")
        for c_index, center in enumerate(record.centers):
            pres = center.presentation
            if pres.ideal:
                res = torus_eigencheck(list(pres.ideal), v)
                if not res.ok:
                    findings.append(f"torus {v_index} vs center {c_index} ideal: "
                                    f"{res.detail}")
            if pres.curve is not None:
                res = torus_eigencheck(pres.curve, v)
                if not res.ok:
                    findings.append(f"torus {v_index} vs center {c_index} curve: "
                                    f"{res.detail}")
    for c_index, center in enumerate(record.centers):
        pres = center.presentation
        if pres.curve is not None:
            for g_index, g in enumerate(pres.ideal):
                if not pres.curve.substituted(g).is_zero():
                    findings.append(f"center {c_index}: curve does not satisfy its own "
                                    f"ideal generator {g_index}")
            for g_index, g in enumerate(record.variety):
                if not pres.curve.substituted(g).is_zero():
                    findings.append(f"center {c_index}: curve leaves the variety "
                                    f"(generator {g_index})")
    for name, order, tau in record.finite:
        if not tau.order_divides(order):
            findings.append(f"symmetry {name} does not have declared order {order}")
        if record.variety:
            inv = check_variety_invariant(record.variety, tau)
            if inv.invariant:
                uncovered = [r for r in inv.denominator_roots
                             if not _root_excluded(record.params, r)]
                if uncovered:
                    findings.append(f"symmetry {name}: span-solve denominators vanish "
                                    f"at non-excluded values {uncovered}")
    return findings


def _root_excluded(params, root):
    return any(not params.admits(n, root) for n in params.names)


def _validate_abstract(record):
    findings = []
    if record.torus_rank is None or record.fixed_dim is None:
        findings.append("abstract record needs torus_rank and fixed_dim")
        return findings
    for name, m in record.adjoints:
        if m.rows != record.torus_rank or m.cols != record.torus_rank:
            findings.append(f"adjoint {name} is not {record.torus_rank}x"
                            f"{record.torus_rank}")
    if record.h11_labels and record.fixed_dim > len(record.h11_labels):
        findings.append("fixed_dim exceeds the class-lattice rank")
    if not record.provenance:
        findings.append("abstract record without provenance notes")
    return findings


def _validate_product(record):
    findings = []
    if not record.product_factors:
        findings.append("product record without factors")
    for f in record.product_factors:
        if f.verdict_tag == "families" and not f.family_dims:
            findings.append(f"factor {f.name}: families verdict without dimensions")
    return findings


def validate_catalog(catalog):
    """Catalog-level findings: §-list coverage and the theorem partition."""
    findings = []
    for record in catalog.records:
        for finding in validate_case(record):
            findings.append(f"{record.id}: {finding}")
    families = set(catalog.families())
    expected = set(FAMILY_LIST)
    missing = sorted(expected - families)
    extra = sorted(families - expected)
    if missing:
        findings.append(f"families missing from the inventory: {missing}")
    if extra:
        findings.append(f"families outside the inventory: {extra}")
    for record in catalog.records:
        should_be_exception = record.family in EXCEPTION_FAMILIES
        if should_be_exception != (record.theorem == 2):
            findings.append(f"{record.id}: theorem tag does not match the partition")
        if record.theorem == 1 and record.expected[0] == "subcone":
            findings.append(f"{record.id}: theorem 1 record expects a subcone")
        if record.theorem == 2 and record.expected[0] == "full_cone":
            findings.append(f"{record.id}: theorem 2 record expects the full cone")
    return findings
