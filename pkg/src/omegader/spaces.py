"""Extended-derivation spaces of an algebra.

A constraint matrix is a 2x3 grid (a1 a2 a3 / a4 a5 a6); the associated space
consists of operator triples (A, B, C) with

    a1*A + a2*B + a3*C = 0,   a4*A + a5*B + a6*C = 0,
    A mu(X, Y) = mu(BX, Y) + mu(X, CY)   for all X, Y.

Everything reduces to exact nullspaces of structure-constant systems.  The
unknown vector is the concatenation A-block, B-block, C-block, each matrix
flattened row-major by (output index, input index); this fixes solved bases
bit-exactly.

``canonical_class`` sends a constraint matrix to one of the eleven canonical
space shapes (by row-reducing its image under the column transform that
separates the nearly-derivation and quasicentroid components), and
``decompose``/``recompose``/``embed`` realize the structural maps between the
shapes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .algebras import ANTI, COMM, Algebra
from .errors import PreconditionError
from .linalg import ExactMatrix, nullspace, rank, rref
from .scalars import format_rational, parse_rational


@dataclass(frozen=True)
class OmegaSpec:
    """2x3 exact constraint-coefficient matrix."""

    top: tuple[Fraction, Fraction, Fraction]
    bottom: tuple[Fraction, Fraction, Fraction]

    @classmethod
    def of(cls, a1, a2, a3, a4, a5, a6) -> "OmegaSpec":
        return cls(
            (Fraction(a1), Fraction(a2), Fraction(a3)),
            (Fraction(a4), Fraction(a5), Fraction(a6)),
        )

    @classmethod
    def zero(cls) -> "OmegaSpec":
        return cls.of(0, 0, 0, 0, 0, 0)

    @property
    def rows(self) -> tuple[tuple[Fraction, ...], ...]:
        return (self.top, self.bottom)

    def flat(self) -> tuple[Fraction, ...]:
        return self.top + self.bottom


@dataclass(frozen=True)
class DerivationTriple:
    A: ExactMatrix
    B: ExactMatrix
    C: ExactMatrix


@dataclass(frozen=True)
class NQPair:
    """Decomposition image of a triple: nearly-derivation pair (P, Q) plus
    quasicentroid component R."""

    P: ExactMatrix
    Q: ExactMatrix
    R: ExactMatrix


@dataclass(frozen=True)
class OperatorPair:
    first: ExactMatrix
    second: ExactMatrix


@dataclass(frozen=True)
class TripleSpace:
    algebra: Algebra
    spec: str
    dimension: int
    basis: tuple[DerivationTriple, ...]


@dataclass(frozen=True)
class OperatorSpace:
    algebra: Algebra
    spec: str
    dimension: int
    basis: tuple[ExactMatrix, ...]


@dataclass(frozen=True)
class PairSpace:
    algebra: Algebra
    spec: str
    dimension: int
    basis: tuple[OperatorPair, ...]


# ---------------------------------------------------------------------------
# System builders
# ---------------------------------------------------------------------------

def derivation_rows(a: Algebra) -> list[list[Fraction]]:
    """One row per (i, j, k): the k-th coordinate of
    A mu(e_i,e_j) - mu(Be_i,e_j) - mu(e_i,Ce_j), over all ordered pairs."""
    n = a.dim
    N = n * n
    zero = Fraction(0)
    rows = []
    for i in range(n):
        for j in range(n):
            cij = a.structure[i][j]
            for k in range(n):
                row = [zero] * (3 * N)
                for m in range(n):
                    v = cij[m]
                    if v:
                        row[k * n + m] += v
                    v = a.structure[m][j][k]
                    if v:
                        row[N + m * n + i] -= v
                    v = a.structure[i][m][k]
                    if v:
                        row[2 * N + m * n + j] -= v
                rows.append(row)
    return rows


def build_system(a: Algebra, omega: OmegaSpec) -> ExactMatrix:
    """Full homogeneous system: 2n^2 constraint rows plus n^3 derivation rows
    over 3n^2 unknowns; its nullspace is the solved space."""
    n = a.dim
    N = n * n
    zero = Fraction(0)
    rows = []
    for pos in range(N):
        for (c1, c2, c3) in omega.rows:
            row = [zero] * (3 * N)
            row[pos], row[N + pos], row[2 * N + pos] = c1, c2, c3
            rows.append(row)
    rows.extend(derivation_rows(a))
    return ExactMatrix(rows)


def t_family_rows(a: Algebra, s: Fraction) -> ExactMatrix:
    """System for triples with A + s*B + (s-1)*C = 0: n^2 single constraint
    rows plus the n^3 derivation rows."""
    n = a.dim
    N = n * n
    s = Fraction(s)
    zero = Fraction(0)
    rows = []
    for pos in range(N):
        row = [zero] * (3 * N)
        row[pos], row[N + pos], row[2 * N + pos] = Fraction(1), s, s - 1
        rows.append(row)
    rows.extend(derivation_rows(a))
    return ExactMatrix(rows)


def abc_rows(a: Algebra, al: Fraction, be: Fraction, ga: Fraction) -> ExactMatrix:
    """System for single operators with al*D mu(X,Y) = be*mu(DX,Y) + ga*mu(X,DY)."""
    n = a.dim
    al, be, ga = Fraction(al), Fraction(be), Fraction(ga)
    zero = Fraction(0)
    rows = []
    for i in range(n):
        for j in range(n):
            cij = a.structure[i][j]
            for k in range(n):
                row = [zero] * (n * n)
                for m in range(n):
                    v = cij[m]
                    if v:
                        row[k * n + m] += al * v
                    v = a.structure[m][j][k]
                    if v:
                        row[m * n + i] -= be * v
                    v = a.structure[i][m][k]
                    if v:
                        row[m * n + j] -= ga * v
                rows.append(row)
    return ExactMatrix(rows)


def nearly_rows(a: Algebra) -> ExactMatrix:
    """System for pairs (P, Q) with P mu(X,Y) = mu(QX,Y) + mu(X,QY)."""
    n = a.dim
    N = n * n
    zero = Fraction(0)
    rows = []
    for i in range(n):
        for j in range(n):
            cij = a.structure[i][j]
            for k in range(n):
                row = [zero] * (2 * N)
                for m in range(n):
                    v = cij[m]
                    if v:
                        row[k * n + m] += v
                    v = a.structure[m][j][k]
                    if v:
                        row[N + m * n + i] -= v
                    v = a.structure[i][m][k]
                    if v:
                        row[N + m * n + j] -= v
                rows.append(row)
    return ExactMatrix(rows)


def pair_rows(a: Algebra) -> ExactMatrix:
    """System for pairs (A, B) with A mu(X,Y) = mu(BX,Y)."""
    n = a.dim
    N = n * n
    zero = Fraction(0)
    rows = []
    for i in range(n):
        for j in range(n):
            cij = a.structure[i][j]
            for k in range(n):
                row = [zero] * (2 * N)
                for m in range(n):
                    v = cij[m]
                    if v:
                        row[k * n + m] += v
                    v = a.structure[m][j][k]
                    if v:
                        row[N + m * n + i] -= v
                rows.append(row)
    return ExactMatrix(rows)


# ---------------------------------------------------------------------------
# Solving
# ---------------------------------------------------------------------------

def _unflatten(a: Algebra, vec, blocks: int):
    n = a.dim
    N = n * n
    mats = []
    for b in range(blocks):
        mats.append(ExactMatrix([[vec[b * N + k * n + l] for l in range(n)] for k in range(n)]))
    return mats


@lru_cache(maxsize=None)
def _derivation_kernel(a: Algebra) -> tuple[tuple[Fraction, ...], ...]:
    """Exact kernel of the derivation rows alone (the unconstrained space)."""
    return tuple(nullspace(ExactMatrix(derivation_rows(a))))


def omega_dimension(a: Algebra, omega: OmegaSpec) -> int:
    """dim of the solved space, via the cached derivation kernel.

    The constraint rows only see the kernel of the (constraint-free)
    derivation rows, so the dimension equals the nullity of the composed
    system; this is an exact identity, not an approximation.  Row-equivalent
    constraint matrices define the same space, so the 2x3 grid is row-reduced
    first.
    """
    kern = _derivation_kernel(a)
    if not kern:
        return 0
    reduced, _, rnk = rref(ExactMatrix(omega.rows))
    if rnk == 0:
        return len(kern)
    n = a.dim
    N = n * n
    rows = []
    for (c1, c2, c3) in reduced.entries[:rnk]:
        for pos in range(N):
            rows.append([c1 * v[pos] + c2 * v[N + pos] + c3 * v[2 * N + pos] for v in kern])
    return len(kern) - rank(ExactMatrix(rows))


def omega_space(a: Algebra, omega: OmegaSpec) -> TripleSpace:
    """Solve the full system and return dimension plus a verified triple basis."""
    basis_vecs = nullspace(build_system(a, omega))
    triples = []
    for vec in basis_vecs:
        A, B, C = _unflatten(a, vec, 3)
        t = DerivationTriple(A, B, C)
        if not is_omega_derivation(a, omega, t):
            raise AssertionError("solved basis triple fails its defining equations")
        triples.append(t)
    spec = "omega:" + ",".join(format_rational(x) for x in omega.flat())
    return TripleSpace(a, spec, len(triples), tuple(triples))


def _t_space(a: Algebra, s: Fraction) -> TripleSpace:
    basis_vecs = nullspace(t_family_rows(a, s))
    triples = []
    for vec in basis_vecs:
        A, B, C = _unflatten(a, vec, 3)
        t = DerivationTriple(A, B, C)
        if not is_in_t_space(a, s, t):
            raise AssertionError("solved basis triple fails its defining equations")
        triples.append(t)
    return TripleSpace(a, f"t:{format_rational(s)}", len(triples), tuple(triples))


_NAMED_ABC = {
    "der": (1, 1, 1),
    "qc": (0, 1, -1),
    "c": (1, 1, 0),
}


def parse_space_spec(spec: str) -> tuple:
    """Normalize a space spec string: der|qc|c|nder|qder|p|der0|d:a,b,c|t:s."""
    s = spec.strip().lower()
    if s in _NAMED_ABC:
        al, be, ga = _NAMED_ABC[s]
        return ("d", Fraction(al), Fraction(be), Fraction(ga))
    if s in ("nder", "qder", "p", "der0"):
        return (s,)
    if s.startswith("d:"):
        parts = s[2:].split(",")
        if len(parts) != 3:
            raise ValueError(f"space spec {spec!r}: d: needs three rationals a,b,c")
        return ("d",) + tuple(parse_rational(p) for p in parts)
    if s.startswith("t:"):
        return ("t", parse_rational(s[2:]))
    raise ValueError(f"unknown space spec {spec!r}")


def named_space(a: Algebra, spec: str):
    """Solve a named space; returns an operator, pair, or triple space."""
    parsed = parse_space_spec(spec)
    kind = parsed[0]
    if kind == "d":
        _, al, be, ga = parsed
        vecs = nullspace(abc_rows(a, al, be, ga))
        ops = []
        for vec in vecs:
            (D,) = _unflatten(a, vec, 1)
            if not is_abc_derivation(a, al, be, ga, D):
                raise AssertionError("solved operator fails its defining equation")
            ops.append(D)
        label = f"d:{format_rational(al)},{format_rational(be)},{format_rational(ga)}"
        return OperatorSpace(a, label, len(ops), tuple(ops))
    if kind == "t":
        return _t_space(a, parsed[1])
    if kind == "der0":
        space = omega_space(a, OmegaSpec.zero())
        return TripleSpace(a, "der0", space.dimension, space.basis)
    if kind == "nder":
        vecs = nullspace(nearly_rows(a))
        pairs = []
        for vec in vecs:
            P, Q = _unflatten(a, vec, 2)
            if not is_nearly_pair(a, P, Q):
                raise AssertionError("solved pair fails its defining equation")
            pairs.append(OperatorPair(P, Q))
        return PairSpace(a, "nder", len(pairs), tuple(pairs))
    if kind == "p":
        vecs = nullspace(pair_rows(a))
        pairs = []
        for vec in vecs:
            A, B = _unflatten(a, vec, 2)
            if not is_p_pair(a, A, B):
                raise AssertionError("solved pair fails its defining equation")
            pairs.append(OperatorPair(A, B))
        return PairSpace(a, "p", len(pairs), tuple(pairs))
    if kind == "qder":
        nder = named_space(a, "nder")
        kept: list[ExactMatrix] = []
        rows: list[list[Fraction]] = []
        for pair in nder.basis:
            candidate = list(pair.second.flatten())
            rows.append(candidate)
            if rank(ExactMatrix(rows)) == len(kept) + 1:
                kept.append(pair.second)
            else:
                rows.pop()
        return OperatorSpace(a, "qder", len(kept), tuple(kept))
    raise AssertionError(f"unhandled spec {parsed}")


@lru_cache(maxsize=None)
def named_dimension(a: Algebra, spec: str) -> int:
    """Dimension of a named space (cached, basis not materialized)."""
    parsed = parse_space_spec(spec)
    kind = parsed[0]
    if kind == "d":
        _, al, be, ga = parsed
        m = abc_rows(a, al, be, ga)
        return m.cols - rank(m)
    if kind == "t":
        s = parsed[1]
        return omega_dimension(a, OmegaSpec.of(1, s, s - 1, 0, 0, 0))
    if kind == "der0":
        return len(_derivation_kernel(a))
    if kind == "nder":
        m = nearly_rows(a)
        return m.cols - rank(m)
    if kind == "p":
        m = pair_rows(a)
        return m.cols - rank(m)
    if kind == "qder":
        n = a.dim
        N = n * n
        kern = nullspace(nearly_rows(a))
        if not kern:
            return 0
        return rank(ExactMatrix([v[N:] for v in kern]))
    raise AssertionError(f"unhandled spec {parsed}")


# ---------------------------------------------------------------------------
# Defining-equation checks (exact residuals)
# ---------------------------------------------------------------------------

def _col(M: ExactMatrix, i: int) -> list[Fraction]:
    return [M.entries[m][i] for m in range(M.rows)]


def _mu_left(a: Algebra, col, j: int) -> list[Fraction]:
    """mu(M e_i, e_j) given col = M e_i."""
    n = a.dim
    out = [Fraction(0)] * n
    for m, w in enumerate(col):
        if w:
            cmj = a.structure[m][j]
            for k in range(n):
                if cmj[k]:
                    out[k] += w * cmj[k]
    return out


def _mu_right(a: Algebra, i: int, col) -> list[Fraction]:
    """mu(e_i, M e_j) given col = M e_j."""
    n = a.dim
    out = [Fraction(0)] * n
    for m, w in enumerate(col):
        if w:
            cim = a.structure[i][m]
            for k in range(n):
                if cim[k]:
                    out[k] += w * cim[k]
    return out


def is_derivation_triple(a: Algebra, A: ExactMatrix, B: ExactMatrix, C: ExactMatrix) -> bool:
    """A mu(X,Y) = mu(BX,Y) + mu(X,CY) on all basis pairs, exactly."""
    n = a.dim
    bcols = [_col(B, i) for i in range(n)]
    ccols = [_col(C, j) for j in range(n)]
    for i in range(n):
        for j in range(n):
            lhs = A.apply(a.mul_basis(i, j))
            left = _mu_left(a, bcols[i], j)
            right = _mu_right(a, i, ccols[j])
            if any(l != u + v for l, u, v in zip(lhs, left, right)):
                return False
    return True


def is_omega_derivation(a: Algebra, omega: OmegaSpec, t: DerivationTriple) -> bool:
    for (c1, c2, c3) in omega.rows:
        if c1 or c2 or c3:
            combo = t.A.scale(c1) + t.B.scale(c2) + t.C.scale(c3)
            if not combo.is_zero():
                return False
    return is_derivation_triple(a, t.A, t.B, t.C)


def is_in_t_space(a: Algebra, s: Fraction, t: DerivationTriple) -> bool:
    s = Fraction(s)
    combo = t.A + t.B.scale(s) + t.C.scale(s - 1)
    return combo.is_zero() and is_derivation_triple(a, t.A, t.B, t.C)


def is_nearly_pair(a: Algebra, P: ExactMatrix, Q: ExactMatrix) -> bool:
    return is_derivation_triple(a, P, Q, Q)


def is_quasicentroid(a: Algebra, R: ExactMatrix) -> bool:
    return is_abc_derivation(a, Fraction(0), Fraction(1), Fraction(-1), R)


def is_abc_derivation(a: Algebra, al, be, ga, D: ExactMatrix) -> bool:
    """al*D mu(X,Y) = be*mu(DX,Y) + ga*mu(X,DY) on all basis pairs."""
    n = a.dim
    al, be, ga = Fraction(al), Fraction(be), Fraction(ga)
    cols = [_col(D, i) for i in range(n)]
    for i in range(n):
        for j in range(n):
            lhs = D.apply(a.mul_basis(i, j))
            left = _mu_left(a, cols[i], j)
            right = _mu_right(a, i, cols[j])
            if any(al * l != be * u + ga * v for l, u, v in zip(lhs, left, right)):
                return False
    return True


def is_p_pair(a: Algebra, A: ExactMatrix, B: ExactMatrix) -> bool:
    """A mu(X,Y) = mu(BX,Y) on all basis pairs."""
    n = a.dim
    bcols = [_col(B, i) for i in range(n)]
    for i in range(n):
        for j in range(n):
            lhs = A.apply(a.mul_basis(i, j))
            left = _mu_left(a, bcols[i], j)
            if any(l != u for l, u in zip(lhs, left)):
                return False
    return True


# ---------------------------------------------------------------------------
# Column transforms and canonical classification
# ---------------------------------------------------------------------------

def transform_omega(omega: OmegaSpec, direction: str) -> OmegaSpec:
    """Column transforms between the triple form and the (pair, quasicentroid)
    form: to_tilde maps (a1,a2,a3) -> (a1, a2+a3, a2-a3) per row, from_mho is
    its inverse (b1, (b2+b3)/2, (b2-b3)/2)."""
    if direction == "to_tilde":
        f = lambda r: (r[0], r[1] + r[2], r[1] - r[2])
    elif direction == "from_mho":
        f = lambda r: (r[0], (r[1] + r[2]) / 2, (r[1] - r[2]) / 2)
    else:
        raise ValueError(f"direction must be to_tilde or from_mho, got {direction!r}")
    return OmegaSpec(f(omega.top), f(omega.bottom))


CLASS_LABELS = (
    "D100", "QC", "D11m1", "DT10", "DT11", "DT11xQC", "D100xQC", "T", "P", "NDER", "NDERxQC",
)
_PARAMETRIC_LABELS = {"DT10", "DT11", "DT11xQC", "T"}


@dataclass(frozen=True)
class CanonicalClass:
    label: str
    parameter: Fraction | None = None

    def __post_init__(self):
        if self.label not in CLASS_LABELS:
            raise ValueError(f"unknown class label {self.label!r}")
        if (self.parameter is not None) != (self.label in _PARAMETRIC_LABELS):
            raise ValueError(f"class {self.label} parameter mismatch")

    def __str__(self):
        if self.parameter is None:
            return self.label
        return f"{self.label}({format_rational(self.parameter)})"


def canonical_class(omega: OmegaSpec) -> CanonicalClass:
    """Classify a constraint matrix into one of the eleven canonical classes.

    Branches on the reduced row echelon form of the transformed matrix, whose
    three columns constrain the nearly-derivation components (P, Q) and the
    quasicentroid component R.
    """
    tilde = transform_omega(omega, "to_tilde")
    red, pivots, _ = rref(ExactMatrix(tilde.rows))
    e = red.entries
    if pivots == (0, 1):
        av, bv = e[0][2], e[1][2]
        if av == 0 and bv == 0:
            return CanonicalClass("QC")
        if bv == 0:
            return CanonicalClass("D11m1")
        return CanonicalClass("DT10", av / (2 * bv))
    if pivots == (0, 2):
        return CanonicalClass("DT11", -e[0][1])
    if pivots == (0,):
        av, bv = e[0][1], e[0][2]
        if bv == 0:
            return CanonicalClass("DT11xQC", -av)
        return CanonicalClass("T", (av + 1) / 2)
    if pivots == (1, 2):
        return CanonicalClass("D100")
    if pivots == (1,):
        if e[0][2] == 0:
            return CanonicalClass("D100xQC")
        return CanonicalClass("P")
    if pivots == (2,):
        return CanonicalClass("NDER")
    return CanonicalClass("NDERxQC")


def class_dimension(a: Algebra, cls: CanonicalClass) -> int:
    """Dimension of the canonical class's space (products: sum of factors)."""
    t = cls.parameter
    if cls.label == "D100":
        return named_dimension(a, "d:1,0,0")
    if cls.label == "QC":
        return named_dimension(a, "qc")
    if cls.label == "D11m1":
        return named_dimension(a, "d:1,1,-1")
    if cls.label == "DT10":
        return named_dimension(a, f"d:{format_rational(t)},1,0")
    if cls.label == "DT11":
        return named_dimension(a, f"d:{format_rational(t)},1,1")
    if cls.label == "DT11xQC":
        return named_dimension(a, f"d:{format_rational(t)},1,1") + named_dimension(a, "qc")
    if cls.label == "D100xQC":
        return named_dimension(a, "d:1,0,0") + named_dimension(a, "qc")
    if cls.label == "T":
        return named_dimension(a, f"t:{format_rational(t)}")
    if cls.label == "P":
        return named_dimension(a, "p")
    if cls.label == "NDER":
        return named_dimension(a, "nder")
    if cls.label == "NDERxQC":
        return named_dimension(a, "nder") + named_dimension(a, "qc")
    raise AssertionError(cls.label)


# ---------------------------------------------------------------------------
# Decomposition and embeddings
# ---------------------------------------------------------------------------

def decompose(a: Algebra, t: DerivationTriple) -> NQPair:
    """Split an unconstrained triple into ((P, Q), R) with P = A,
    Q = (B+C)/2, R = (B-C)/2."""
    if a.law not in (ANTI, COMM):
        raise PreconditionError("decomposition needs an anti-commutative or commutative algebra")
    if not is_derivation_triple(a, t.A, t.B, t.C):
        raise PreconditionError("triple does not satisfy the derivation equation")
    half = Fraction(1, 2)
    P = t.A
    Q = (t.B + t.C).scale(half)
    R = (t.B - t.C).scale(half)
    return NQPair(P, Q, R)


def recompose(a: Algebra, p: NQPair) -> DerivationTriple:
    """Inverse of decompose: ((P, Q), R) -> (P, Q+R, Q-R)."""
    if not is_nearly_pair(a, p.P, p.Q):
        raise PreconditionError("(P, Q) does not satisfy the nearly-derivation equation")
    if not is_quasicentroid(a, p.R):
        raise PreconditionError("R does not satisfy the quasicentroid equation")
    return DerivationTriple(p.P, p.Q + p.R, p.Q - p.R)


def embed(map_id: str, *operands, s=None, t=None, u=None):
    """Structural embeddings phi1..phi8 between the canonical spaces.

    phi1(D) = ((1-2s)D, D, D)          D(1-2s,1,1) -> T(s)
    phi2(D) = (D, -D, D)               D(1,-1,1)   -> T(s), any s
    phi3(M) = (uM, (1-u-s)M, (u+s)M)   D(u,1,0)    -> T(s)
    phi4(M) = (uM, M)                  D(u,1,0)    -> P
    phi5(A,B) = (A, B/2)               P           -> NDer
    phi6(A,B,C) = (A, (B+C)/2)         T(s)/Der0   -> NDer
    phi7(D,M) = phi1(D) + phi3(M)      needs 1 != 2(s+u)
    phi8(D,M) = (tD + uM, D + M/2)     needs t != 2u

    (In the source for phi7's inverse description one symbol reads R where M
    is meant; the map is implemented with M.)
    """
    half = Fraction(1, 2)

    def need(**params):
        out = []
        for name, val in params.items():
            if val is None:
                raise PreconditionError(f"{map_id} needs parameter {name}")
            out.append(Fraction(val))
        return out

    if map_id == "phi1":
        (D,) = operands
        (sv,) = need(s=s)
        return DerivationTriple(D.scale(1 - 2 * sv), D, D)
    if map_id == "phi2":
        (D,) = operands
        return DerivationTriple(D, -D, D)
    if map_id == "phi3":
        (M,) = operands
        sv, uv = need(s=s, u=u)
        return DerivationTriple(M.scale(uv), M.scale(1 - uv - sv), M.scale(uv + sv))
    if map_id == "phi4":
        (M,) = operands
        (uv,) = need(u=u)
        return OperatorPair(M.scale(uv), M)
    if map_id == "phi5":
        A, B = operands
        return OperatorPair(A, B.scale(half))
    if map_id == "phi6":
        A, B, C = operands
        return OperatorPair(A, (B + C).scale(half))
    if map_id == "phi7":
        D, M = operands
        sv, uv = need(s=s, u=u)
        if 1 == 2 * (sv + uv):
            raise PreconditionError("phi7 requires 1 != 2(s+u)")
        t1 = embed("phi1", D, s=sv)
        t2 = embed("phi3", M, s=sv, u=uv)
        return DerivationTriple(t1.A + t2.A, t1.B + t2.B, t1.C + t2.C)
    if map_id == "phi8":
        D, M = operands
        tv, uv = need(t=t, u=u)
        if tv == 2 * uv:
            raise PreconditionError("phi8 requires t != 2u")
        return OperatorPair(D.scale(tv) + M.scale(uv), D + M.scale(half))
    raise ValueError(f"unknown embedding {map_id!r}")
