"""Futaki-character constraint systems and vanishing verdicts.

Per case: the H^{1,1} action of each finite symmetry (hyperplane labels
permuted by the factor bijection, exceptional labels by the center
permutation), the adjoint matrices on the torus generators, and the verdict
logic: for a subset S of symmetries fixing a class subspace Fix(S), the
character restricted to the torus lies in K_S = intersection of
ker(A_tau^T - I); K_S = 0 forces vanishing on Fix(S) inside the Kähler cone.
Semisimple summands contribute no unknowns (a character kills the derived
ideal).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .ratlinalg import QMatrix, in_column_span, intersect_kernels
from .symmetry import CenterMatchError, adjoint_matrix, AdjointUnsolvable, match_centers


class CharacterError(ValueError):
    pass


@dataclass(frozen=True)
class H11Basis:
    """One hyperplane class per ambient factor, then one exceptional class
    per blow-up center, in catalog order."""

    labels: tuple

    @property
    def picard_rank(self):
        return len(self.labels)


@dataclass(frozen=True)
class SymmetryConstraint:
    name: str
    adjoint: object          # QMatrix, AdjointUnsolvable, or None (rank 0)
    h11_matrix: object       # QMatrix permutation or None (abstract records)

    def usable(self):
        return not isinstance(self.adjoint, AdjointUnsolvable)


@dataclass(frozen=True)
class ConstraintSystem:
    torus_rank: int
    semisimple: str
    h11: H11Basis
    constraints: tuple       # SymmetryConstraint per finite symmetry

    def __post_init__(self):
        for c in self.constraints:
            if isinstance(c.adjoint, QMatrix) and (
                    c.adjoint.rows != self.torus_rank or c.adjoint.cols != self.torus_rank):
                raise CharacterError(f"adjoint matrix of {c.name} has the wrong size")
            if c.h11_matrix is not None and not _is_permutation(c.h11_matrix):
                raise CharacterError(f"H11 action of {c.name} is not a permutation matrix")


def _is_permutation(m):
    if m.rows != m.cols:
        return False
    for i in range(m.rows):
        if sorted(m.row(i)) != [Fraction(0)] * (m.cols - 1) + [Fraction(1)]:
            return False
    for j in range(m.cols):
        col = [m.entry(i, j) for i in range(m.rows)]
        if sorted(col) != [Fraction(0)] * (m.rows - 1) + [Fraction(1)]:
            return False
    return True


def h11_action(tau, centers, stages=None):
    """Permutation matrix of tau^* on the H11 basis, plus the center
    permutation; raises CenterMatchError if the centers are not permuted."""
    rho = match_centers([c for c in centers], tau, stages)
    nf = tau.ambient.nfactors
    nc = len(centers)
    size = nf + nc
    entries = [[Fraction(0)] * size for _ in range(size)]
    delta = tau.factor_map
    for g in range(nf):
        entries[delta[g]][g] = Fraction(1)      # tau^* h_g = h_{delta(g)}
    for i in range(nc):
        entries[nf + i][nf + rho[i]] = Fraction(1)   # tau^* E_{rho(i)} = E_i
    return QMatrix.from_rows(entries), rho


@dataclass(frozen=True)
class FixedFamily:
    """A class subspace on which the character provably vanishes."""

    dim: int
    basis: tuple             # vectors in the H11 basis; () for product records
    subset: tuple            # symmetry names used
    description: str = ""


@dataclass(frozen=True)
class Verdict:
    tag: str                     # full_cone | subcone | inconclusive
    fixed_dim: int = None
    families: tuple = ()
    certificate: tuple = None
    diagnostics: tuple = ()
    anticanonical_in_fixed: bool = None

    def is_full_cone(self):
        return self.tag == "full_cone"


def full_cone(certificate, diagnostics=()):
    return Verdict("full_cone", fixed_dim=None, families=(),
                   certificate=tuple(certificate), diagnostics=tuple(diagnostics),
                   anticanonical_in_fixed=True)


def vanishing_verdict(system, anticanonical=None, semisimple_full=False):
    """Verdict over all subsets of the case's finite symmetries.

    FullCone when some subset fixes all of H^{1,1} with trivial character
    kernel; otherwise the maximal vanishing subspaces; otherwise inconclusive
    with diagnostics.  semisimple_full short-circuits.
    """
    if semisimple_full:
        return full_cone(("semisimple",))
    diagnostics = [c.name + ": " + c.adjoint.describe()
                   for c in system.constraints if not c.usable()]
    usable = [c for c in system.constraints if c.usable()]
    rank = system.torus_rank
    picard = system.h11.picard_rank
    vanishing = []
    names = [c.name for c in usable]
    for size in range(len(usable) + 1):
        for subset in combinations(range(len(usable)), size):
            chosen = [usable[i] for i in subset]
            if not _kernel_trivial(chosen, rank):
                continue
            fix_basis = _fixed_classes(chosen, picard)
            vanishing.append(FixedFamily(
                dim=len(fix_basis),
                basis=tuple(tuple(v) for v in fix_basis),
                subset=tuple(names[i] for i in subset)))
    if not vanishing:
        diagnostics.append("no symmetry subset kills the torus characters")
        return Verdict("inconclusive", diagnostics=tuple(diagnostics))
    best = max(f.dim for f in vanishing)
    maximal = _dedupe_families([f for f in vanishing if f.dim == best])
    if best == picard:
        certificate = min((f.subset for f in maximal), key=lambda s: (len(s), s))
        return Verdict("full_cone", fixed_dim=picard, families=tuple(maximal),
                       certificate=certificate, diagnostics=tuple(diagnostics),
                       anticanonical_in_fixed=True)
    contained = None
    if anticanonical is not None:
        contained = all(
            in_column_span([list(b) for b in f.basis], list(anticanonical)) is not None
            for f in maximal)
    certificate = min((f.subset for f in maximal), key=lambda s: (len(s), s))
    return Verdict("subcone", fixed_dim=best, families=tuple(maximal),
                   certificate=certificate, diagnostics=tuple(diagnostics),
                   anticanonical_in_fixed=contained)


def _kernel_trivial(chosen, rank):
    if rank == 0:
        return True
    if not chosen:
        return False
    stacked = [c.adjoint.transpose() - QMatrix.identity(rank) for c in chosen]
    return len(intersect_kernels(stacked)) == 0


def _fixed_classes(chosen, picard):
    with_action = [c for c in chosen if c.h11_matrix is not None]
    if not with_action:
        return [tuple(Fraction(int(i == j)) for j in range(picard)) for i in range(picard)]
    stacked = [c.h11_matrix - QMatrix.identity(picard) for c in with_action]
    basis = intersect_kernels(stacked)
    return [tuple(v) for v in basis]


def _dedupe_families(families):
    seen = []
    out = []
    for f in sorted(families, key=lambda f: (len(f.subset), f.subset)):
        key = frozenset(f.basis)
        if key in seen:
            continue
        seen.append(key)
        out.append(f)
    return out


def subsets_monotone(system):
    """Check Fix and K monotonicity over nested subsets (test support)."""
    usable = [c for c in system.constraints if c.usable()]
    rank = system.torus_rank
    picard = system.h11.picard_rank
    results = {}
    for size in range(len(usable) + 1):
        for subset in combinations(range(len(usable)), size):
            chosen = [usable[i] for i in subset]
            fix = _fixed_classes(chosen, picard)
            if rank == 0:
                kdim = 0
            elif not chosen:
                kdim = rank
            else:
                stacked = [c.adjoint.transpose() - QMatrix.identity(rank) for c in chosen]
                kdim = len(intersect_kernels(stacked))
            results[subset] = (len(fix), kdim)
    ok = True
    for small in results:
        for big in results:
            if set(small) <= set(big):
                fs, ks = results[small]
                fb, kb = results[big]
                ok = ok and fb <= fs and kb <= ks
    return ok


# ---------------------------------------------------------------------------
# abstract records and products
# ---------------------------------------------------------------------------

def abstract_verdict(torus_rank, adjoints, fixed_dim, picard_rank,
                     anticanonical_in_fixed):
    """Kernel step only; the fixed-class data is transcribed record data."""
    if not adjoints:
        return Verdict("inconclusive", diagnostics=("no adjoint data",))
    stacked = [m.transpose() - QMatrix.identity(torus_rank) for _, m in adjoints]
    if len(intersect_kernels(stacked)) != 0:
        return Verdict("inconclusive",
                       diagnostics=("recorded adjoints leave a character direction free",))
    names = tuple(n for n, _ in adjoints)
    if fixed_dim == picard_rank:
        return full_cone(names)
    family = FixedFamily(dim=fixed_dim, basis=(), subset=names,
                         description="fixed-class dimension transcribed, not recomputed")
    return Verdict("subcone", fixed_dim=fixed_dim, families=(family,),
                   certificate=names, anticanonical_in_fixed=anticanonical_in_fixed)


@dataclass(frozen=True)
class ProductFactor:
    name: str
    verdict_tag: str         # full_cone | families
    rank: int
    family_dims: tuple = ()
    anticanonical_in_families: bool = True


def product_verdict(factors):
    """Vanishing locus of a product = product of the factor loci inside the
    direct-sum class space; FullCone iff every factor is FullCone."""
    if not factors:
        raise CharacterError("empty product")
    if all(f.verdict_tag == "full_cone" for f in factors):
        return full_cone(tuple(f.name for f in factors))
    option_dims = []
    for f in factors:
        if f.verdict_tag == "full_cone":
            option_dims.append((("all", f.rank),))
        else:
            option_dims.append(tuple((f"family{i}", d) for i, d in enumerate(f.family_dims)))
    combos = [()]
    for options in option_dims:
        combos = [c + (o,) for c in combos for o in options]
    families = []
    for combo in combos:
        dim = sum(d for _, d in combo)
        description = " x ".join(
            f"{f.name}:{tag}({d})" for f, (tag, d) in zip(factors, combo))
        families.append(FixedFamily(dim=dim, basis=(), subset=(), description=description))
    best = max(f.dim for f in families)
    maximal = tuple(f for f in families if f.dim == best)
    contained = all(f.anticanonical_in_families for f in factors)
    return Verdict("subcone", fixed_dim=best, families=maximal,
                   certificate=("product",), anticanonical_in_fixed=contained)


# ---------------------------------------------------------------------------
# per-case analysis driver
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SymmetryAnalysis:
    name: str
    variety_invariant: object     # InvarianceResult or None
    center_permutation: tuple     # rho or None
    h11_matrix: object
    adjoint: object
    notes: tuple = ()


@dataclass(frozen=True)
class CaseAnalysis:
    case_id: str
    system: ConstraintSystem
    verdict: Verdict
    symmetries: tuple
    diagnostics: tuple


def analyze_polynomial_case(record):
    """Run the invariance machinery and the verdict for a polynomial-style
    record (also used by the toric-crosscheck kind)."""
    from .symmetry import check_variety_invariant  # local to avoid import cycle noise

    diagnostics = []
    analyses = []
    constraints = []
    stages = [c.stage for c in record.centers]
    presentations = [c.presentation for c in record.centers]
    for name, order, tau in record.finite:
        notes = []
        inv = None
        if record.variety:
            inv = check_variety_invariant(record.variety, tau)
            if not inv.invariant:
                notes.append(f"variety check inconclusive: {inv.describe()}")
        rho = None
        h11_matrix = None
        try:
            h11_matrix, rho = h11_action(tau, presentations, stages)
        except CenterMatchError as exc:
            notes.append(f"center matching failed at index {exc.index}")
        adjoint = adjoint_matrix(tau, list(record.torus)) if record.torus else None
        analyses.append(SymmetryAnalysis(name, inv, rho, h11_matrix, adjoint,
                                         tuple(notes)))
        if notes:
            diagnostics.extend(f"{name}: {n}" for n in notes)
            continue
        constraints.append(SymmetryConstraint(name, adjoint, h11_matrix))
    system = ConstraintSystem(
        torus_rank=len(record.torus),
        semisimple=record.semisimple or "",
        h11=H11Basis(tuple(record.h11_labels)),
        constraints=tuple(constraints))
    verdict = vanishing_verdict(system, anticanonical=record.anticanonical)
    verdict = Verdict(verdict.tag, verdict.fixed_dim, verdict.families,
                      verdict.certificate,
                      tuple(diagnostics) + verdict.diagnostics,
                      verdict.anticanonical_in_fixed)
    return CaseAnalysis(record.id, system, verdict, tuple(analyses), tuple(diagnostics))


def replay_certificate(record, certificate):
    """Re-run the cited checks and kernel computations from scratch; returns
    the reproduced verdict tag (FullCone certificates must replay)."""
    from .symmetry import check_variety_invariant

    stages = [c.stage for c in record.centers]
    presentations = [c.presentation for c in record.centers]
    chosen = [entry for entry in record.finite if entry[0] in certificate]
    constraints = []
    for name, order, tau in chosen:
        if record.variety:
            inv = check_variety_invariant(record.variety, tau)
            if not inv.invariant:
                return "inconclusive"
        h11_matrix, _ = h11_action(tau, presentations, stages)
        adjoint = adjoint_matrix(tau, list(record.torus)) if record.torus else None
        if isinstance(adjoint, AdjointUnsolvable):
            return "inconclusive"
        constraints.append(SymmetryConstraint(name, adjoint, h11_matrix))
    system = ConstraintSystem(
        torus_rank=len(record.torus), semisimple=record.semisimple or "",
        h11=H11Basis(tuple(record.h11_labels)), constraints=tuple(constraints))
    return vanishing_verdict(system, anticanonical=record.anticanonical).tag


# ---------------------------------------------------------------------------
# verdict serialization (line records and JSON-lines)
# ---------------------------------------------------------------------------

def verdict_line(case_id, verdict, audit=None):
    dim = "-" if verdict.fixed_dim is None else str(verdict.fixed_dim)
    cert = "+".join(verdict.certificate) if verdict.certificate else "-"
    line = f"case={case_id} verdict={verdict.tag} fixed_dim={dim} certificate={cert}"
    if audit:
        line += f" audit={audit}"
    return line


def verdict_json_fields(case_id, verdict, audit=None):
    """Stable key order for the JSON-lines stream."""
    return [
        ("case", case_id),
        ("verdict", verdict.tag),
        ("fixed_dim", verdict.fixed_dim),
        ("certificate", list(verdict.certificate) if verdict.certificate else None),
        ("families", [{"dim": f.dim, "subset": list(f.subset),
                       "description": f.description} for f in verdict.families]),
        ("anticanonical_in_fixed", verdict.anticanonical_in_fixed),
        ("diagnostics", list(verdict.diagnostics)),
        ("audit", audit),
    ]
