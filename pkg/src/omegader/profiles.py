"""Invariant profiles, parametric sweeps, and degeneration obstructions.

A profile collects the fixed space dimensions of an algebra together with
three one-parameter families: triples with A + tB + (t-1)C = 0 (family "T"),
operators with t*D mu = mu(D.,.) + mu(.,D.) (family "D_t11"), and operators
with t*D mu = mu(D.,.) (family "D_t10").  Each family is analyzed exactly:
generic dimension over Q(t), plus every parameter value (rational or given by
an irreducible quadratic/cubic) where the dimension strictly jumps.

Dimensions can only grow under degeneration, so any invariant with
dim(source) > dim(target) certifies that the source cannot degenerate to the
target.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .algebras import Algebra, center, derived_span
from .errors import PreconditionError
from .linalg import ExactMatrix, nullspace, parametric_elimination, rank, rank_at
from .scalars import Poly, format_poly, format_rational
from .spaces import (
    abc_rows,
    derivation_rows,
    is_abc_derivation,
    named_dimension,
    named_space,
)

FAMILIES = ("T", "D_t11", "D_t10")

FIXED_SPECS = (
    ("QC", "qc"),
    ("C", "c"),
    ("Der", "der"),
    ("D(0,1,1)", "d:0,1,1"),
    ("D(2,1,1)", "d:2,1,1"),
    ("D(0,1,0)", "d:0,1,0"),
    ("NDer", "nder"),
    ("QDer", "qder"),
    ("P", "p"),
    ("Der0", "der0"),
)
FIXED_KEYS = tuple(key for key, _ in FIXED_SPECS)


@dataclass(frozen=True)
class SpecialPoint:
    """Parameter value where the family dimension strictly exceeds generic.

    Either a rational ``value`` or an irreducible ``modulus`` standing for all
    of its (irrational) roots.
    """

    dimension: int
    value: Fraction | None = None
    modulus: Poly | None = None

    def __post_init__(self):
        if (self.value is None) == (self.modulus is None):
            raise ValueError("exactly one of value/modulus must be set")

    def describe(self) -> str:
        if self.value is not None:
            return f"t={format_rational(self.value)}"
        return f"t^: {format_poly(self.modulus)}=0"


@dataclass(frozen=True)
class ParametricReport:
    family: str
    generic: int
    specials: tuple[SpecialPoint, ...]
    unresolved: tuple[Poly, ...]


@dataclass(frozen=True)
class InvariantProfile:
    name: str
    dim: int
    fixed: tuple[tuple[str, int], ...]
    parametric: tuple[tuple[str, ParametricReport], ...]

    def fixed_dims(self) -> dict[str, int]:
        return dict(self.fixed)

    def family(self, kind: str) -> ParametricReport:
        return dict(self.parametric)[kind]

    def invariant_record(self):
        """The isomorphism-invariant content: fixed dims, generic dims, and
        special point sets with their jumped dims.  Unresolved factors are
        excluded: they are artifacts of pivot choices, not invariants."""
        return (
            self.dim,
            self.fixed,
            tuple((kind, rep.generic, rep.specials) for kind, rep in self.parametric),
        )

    def same_invariants(self, other: "InvariantProfile") -> bool:
        return self.invariant_record() == other.invariant_record()


# ---------------------------------------------------------------------------
# Family systems
# ---------------------------------------------------------------------------

def family_matrix(a: Algebra, kind: str) -> ExactMatrix:
    """Degree <= 1 polynomial system whose nullity at t is the family dimension."""
    tvar = Poly.variable()
    n = a.dim
    N = n * n
    if kind == "T":
        rows: list[list] = []
        zero = Poly()
        for pos in range(N):
            row = [zero] * (3 * N)
            row[pos] = Poly(1)
            row[N + pos] = tvar
            row[2 * N + pos] = tvar - 1
            rows.append(row)
        for crow in derivation_rows(a):
            rows.append([Poly(x) for x in crow])
        return ExactMatrix(rows)
    if kind in ("D_t11", "D_t10"):
        ga = Fraction(1) if kind == "D_t11" else Fraction(0)
        rows = []
        for i in range(n):
            for j in range(n):
                cij = a.structure[i][j]
                for k in range(n):
                    row = [Poly()] * N
                    for m in range(n):
                        v = cij[m]
                        if v:
                            row[k * n + m] = row[k * n + m] + tvar * v
                        v = a.structure[m][j][k]
                        if v:
                            row[m * n + i] = row[m * n + i] - v
                        if ga:
                            v = a.structure[i][m][k]
                            if v:
                                row[m * n + j] = row[m * n + j] - ga * v
                    rows.append(row)
        return ExactMatrix(rows)
    raise ValueError(f"unknown family {kind!r}; expected one of {FAMILIES}")


@dataclass(frozen=True)
class _FamilyData:
    """Compressed family system: dimension at any parameter value tau equals
    kernel_dim - rank(composed at tau)."""

    kernel_dim: int
    composed: ExactMatrix | None


def _compose_row(row: list[Fraction], kern) -> list[Fraction]:
    support = [(c, x) for c, x in enumerate(row) if x]
    return [sum((x * v[c] for c, x in support), Fraction(0)) for v in kern]


def _separate_pencil(pencil, width: int):
    """Split degree-1 rows (w + t*u) by invertible constant row operations into
    rows with independent u parts plus purely constant leftovers.

    Forward elimination over the u columns only (augmented [u | w] integer
    rows, content-stripped); rows left without a u pivot end up with u = 0.
    """
    from .linalg import _integerize_rows

    work = [row for row in _integerize_rows([list(u) + list(w) for (w, u) in pencil]) if any(row)]
    top = 0
    for col in range(width):
        if top == len(work):
            break
        best = -1
        best_abs = 0
        for i in range(top, len(work)):
            v = work[i][col]
            if v:
                av = abs(v)
                if best < 0 or av < best_abs:
                    best, best_abs = i, av
                    if av == 1:
                        break
        if best < 0:
            continue
        work[top], work[best] = work[best], work[top]
        prow = work[top]
        piv = prow[col]
        for i in range(top + 1, len(work)):
            ri = work[i]
            f = ri[col]
            if f:
                new = [piv * x - f * y for x, y in zip(ri, prow)]
                new[col] = 0
                g = 0
                for v in new:
                    if v:
                        g = math.gcd(g, abs(v))
                        if g == 1:
                            break
                if g > 1:
                    new = [v // g for v in new]
                work[i] = new
        top += 1
    consts: list[list[Fraction]] = []
    new_pencil = []
    for row in work:
        u, w = row[:width], row[width:]
        if any(u):
            new_pencil.append(([Fraction(x) for x in w], [Fraction(x) for x in u]))
        elif any(w):
            consts.append([Fraction(x) for x in w])
    return consts, new_pencil


@lru_cache(maxsize=None)
def _family_data(a: Algebra, kind: str) -> _FamilyData:
    """Compress the family system exactly before the fraction-free sweep.

    Two reductions are iterated, both preserving the solution set at every
    parameter value: composing the parametric rows with an exact kernel basis
    of the parameter-free rows, and invertible constant row operations that
    turn rationally dependent parametric rows into parameter-free ones.
    """
    m = family_matrix(a, kind)
    d = m.cols
    const_rows: list[list[Fraction]] = []
    pencil: list[tuple[list[Fraction], list[Fraction]]] = []
    zero = Fraction(0)
    for row in m.entries:
        w = [p.coeffs[0] if p.coeffs else zero for p in row]
        u = [p.coeffs[1] if p.degree >= 1 else zero for p in row]
        if any(u):
            pencil.append((w, u))
        elif any(w):
            const_rows.append(w)
    while True:
        if const_rows:
            kern = nullspace(ExactMatrix(const_rows))
            if not kern:
                return _FamilyData(0, None)
            d = len(kern)
            const_rows = []
            new_pencil = []
            for (w, u) in pencil:
                w2 = _compose_row(w, kern)
                u2 = _compose_row(u, kern)
                if any(u2):
                    new_pencil.append((w2, u2))
                elif any(w2):
                    const_rows.append(w2)
            pencil = new_pencil
            if const_rows:
                continue
        if not pencil:
            return _FamilyData(d, None)
        consts, pencil = _separate_pencil(pencil, d)
        if consts:
            const_rows = consts
            continue
        break
    composed = ExactMatrix(
        [[Poly((wc, uc)) for wc, uc in zip(w, u)] for (w, u) in pencil]
    )
    return _FamilyData(d, composed)


def _point_sort_key(sp: SpecialPoint):
    if sp.value is not None:
        return (0, sp.value, ())
    return (1, sp.modulus.degree, sp.modulus.coeffs)


@lru_cache(maxsize=None)
def sweep(a: Algebra, kind: str) -> ParametricReport:
    """Generic dimension of a family plus its verified special parameter values."""
    data = _family_data(a, kind)
    if data.composed is None:
        return ParametricReport(kind, data.kernel_dim, (), ())
    pe = parametric_elimination(data.composed)
    generic = data.kernel_dim - pe.generic_rank
    specials = []
    for cand in pe.candidates:
        if cand.degree == 1:
            val = -cand.coeffs[0]  # monic t - root
            dim = data.kernel_dim - rank_at(data.composed, val)
            if dim > generic:
                specials.append(SpecialPoint(dim, value=val))
        else:
            dim = data.kernel_dim - rank_at(data.composed, cand)
            if dim > generic:
                specials.append(SpecialPoint(dim, modulus=cand))
    specials.sort(key=_point_sort_key)
    return ParametricReport(kind, generic, tuple(specials), pe.unresolved)


def evaluate_at(a: Algebra, kind: str, point) -> int:
    """Exact family dimension at a rational point or over Q[t]/(modulus)."""
    data = _family_data(a, kind)
    if data.composed is None:
        return data.kernel_dim
    return data.kernel_dim - rank_at(data.composed, point)


# ---------------------------------------------------------------------------
# Profiles
# ---------------------------------------------------------------------------

def profile(a: Algebra) -> InvariantProfile:
    """All fixed dimensions plus the three parametric family reports."""
    fixed = tuple((key, named_dimension(a, spec)) for key, spec in FIXED_SPECS)
    dims = dict(fixed)
    if dims["Der0"] != dims["NDer"] + dims["QC"]:
        raise AssertionError("decomposition identity violated: Der0 != NDer + QC")
    parametric = tuple((kind, sweep(a, kind)) for kind in FAMILIES)
    return InvariantProfile(a.name, a.dim, fixed, parametric)


@dataclass(frozen=True)
class HypothesisReport:
    check: str
    passed: bool
    details: str = ""


def hypothesis_check(a: Algebra, which: str) -> HypothesisReport:
    """Structural hypotheses used by the sum formulas for T(t), NDer, P, D(t,1,1)."""
    if which == "qc_eq_c":
        qc = named_space(a, "qc")
        c_dim = named_dimension(a, "c")
        if qc.dimension != c_dim:
            return HypothesisReport(which, False, f"dim QC = {qc.dimension} != dim C = {c_dim}")
        for op in qc.basis:
            if not is_abc_derivation(a, 1, 1, 0, op):
                return HypothesisReport(which, False, "a quasicentroid element is not in the centroid")
        return HypothesisReport(which, True, f"QC = C, dimension {c_dim}")
    if which == "qder_splits":
        qder = named_dimension(a, "qder")
        der = named_dimension(a, "der")
        cdim = named_dimension(a, "c")
        inter = ExactMatrix(
            list(abc_rows(a, 1, 1, 1).entries) + list(abc_rows(a, 1, 1, 0).entries)
        )
        inter_dim = inter.cols - rank(inter)
        ok = qder == der + cdim and inter_dim == 0
        return HypothesisReport(
            which, ok,
            f"dim QDer = {qder}, dim Der + dim C = {der}+{cdim}, dim(Der∩C) = {inter_dim}",
        )
    if which == "perfect":
        span, is_perfect = derived_span(a)
        return HypothesisReport(which, is_perfect, f"derived span has dimension {span} of {a.dim}")
    if which == "centerless":
        cdim, _ = center(a)
        return HypothesisReport(which, cdim == 0, f"center has dimension {cdim}")
    raise ValueError(f"unknown hypothesis {which!r}")


# ---------------------------------------------------------------------------
# Degeneration obstructions
# ---------------------------------------------------------------------------

GENERIC = "generic"


@dataclass(frozen=True)
class Witness:
    """First invariant found with dim(source) > dim(target)."""

    invariant: str
    at: object  # None for fixed dims; "generic", Fraction, or Poly for families
    source_dim: int
    target_dim: int


@dataclass(frozen=True)
class ObstructionVerdict:
    source: str
    target: str
    outcome: str  # "excluded" | "inconclusive"
    witness: Witness | None
    warnings: tuple[str, ...] = ()


def _dim_at(a: Algebra, kind: str, report: ParametricReport, value=None, modulus=None) -> int:
    for sp in report.specials:
        if value is not None and sp.value == value:
            return sp.dimension
        if modulus is not None and sp.modulus == modulus:
            return sp.dimension
    return evaluate_at(a, kind, value if value is not None else modulus)


def _family_witness(src: Algebra, tgt: Algebra, kind: str, warnings: list[str]) -> Witness | None:
    sr = sweep(src, kind)
    tr = sweep(tgt, kind)
    for rep, side in ((sr, "source"), (tr, "target")):
        if rep.unresolved:
            warnings.append(
                f"{kind} family of the {side} has unresolved degree>=4 factors "
                f"({', '.join(format_poly(p) for p in rep.unresolved)}); "
                "special-value comparison may be incomplete"
            )
    if sr.generic > tr.generic:
        return Witness(kind, GENERIC, sr.generic, tr.generic)
    values = sorted({sp.value for sp in sr.specials + tr.specials if sp.value is not None})
    moduli = sorted(
        {sp.modulus for sp in sr.specials + tr.specials if sp.modulus is not None},
        key=lambda p: (p.degree, p.coeffs),
    )
    for val in values:
        ds = _dim_at(src, kind, sr, value=val)
        dt = _dim_at(tgt, kind, tr, value=val)
        if ds > dt:
            return Witness(kind, val, ds, dt)
    for mod in moduli:
        ds = _dim_at(src, kind, sr, modulus=mod)
        dt = _dim_at(tgt, kind, tr, modulus=mod)
        if ds > dt:
            return Witness(kind, mod, ds, dt)
    return None


def obstruct(source: Algebra, target: Algebra) -> ObstructionVerdict:
    """Search the invariant catalog for a witness excluding degeneration.

    Catalog order (fixed so verdicts are deterministic): the T family first —
    generic dimensions, then the union of both sides' special points, rational
    values ascending before moduli — then the fixed dimensions in profile
    order, then the D_t11 and D_t10 families.  An "excluded" verdict carries
    the first witness with dim(source) > dim(target); "inconclusive" never
    asserts that a degeneration exists.
    """
    if source.dim != target.dim:
        raise PreconditionError(
            f"dimension mismatch: {source.dim} vs {target.dim} (degeneration preserves dimension)"
        )
    warnings: list[str] = []

    w = _family_witness(source, target, "T", warnings)
    if w:
        return ObstructionVerdict(source.name, target.name, "excluded", w, tuple(warnings))
    for key, spec in FIXED_SPECS:
        ds = named_dimension(source, spec)
        dt = named_dimension(target, spec)
        if ds > dt:
            return ObstructionVerdict(
                source.name, target.name, "excluded", Witness(key, None, ds, dt), tuple(warnings)
            )
    for kind in ("D_t11", "D_t10"):
        w = _family_witness(source, target, kind, warnings)
        if w:
            return ObstructionVerdict(source.name, target.name, "excluded", w, tuple(warnings))
    return ObstructionVerdict(source.name, target.name, "inconclusive", None, tuple(warnings))
