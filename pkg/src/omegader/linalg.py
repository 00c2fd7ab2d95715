"""Exact linear algebra over Q, Q[t], and number fields Q[t]/(p).

One generic reduced-row-echelon core serves the two field kinds (rationals and
number-field elements).  Polynomial matrices go through a fraction-free
Bareiss elimination with minimal-degree row pivoting; its pivot polynomials
are the only places the rank can drop, which is what makes the special-value
candidate set complete.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .scalars import (
    NumberField,
    NumberFieldElem,
    Poly,
    ReducibleModulusError,
    irreducibility_verdict,
    poly_gcd,
    rational_roots,
    squarefree_part,
)

RATIONAL = "rational"
POLY = "poly"
NUMBERFIELD = "numberfield"


class ExactMatrix:
    """Immutable dense matrix with one scalar kind (rational, poly, numberfield)."""

    __slots__ = ("rows", "cols", "entries", "kind", "field")

    def __init__(self, entries):
        grid = [list(row) for row in entries]
        if not grid:
            raise ValueError("matrix needs at least one row")
        ncols = len(grid[0])
        if any(len(r) != ncols for r in grid):
            raise ValueError("ragged rows")
        has_poly = False
        field = None
        for row in grid:
            for x in row:
                if isinstance(x, Poly):
                    has_poly = True
                elif isinstance(x, NumberFieldElem):
                    if field is None:
                        field = x.field
                    elif field != x.field:
                        raise ValueError("mixed number fields in one matrix")
        if has_poly and field is not None:
            raise TypeError("cannot mix Poly and NumberFieldElem entries")
        if field is not None:
            kind = NUMBERFIELD
            grid = [[field.elem(x) for x in row] for row in grid]
        elif has_poly:
            kind = POLY
            grid = [[x if isinstance(x, Poly) else Poly(x) for x in row] for row in grid]
        else:
            kind = RATIONAL
            grid = [[Fraction(x) for x in row] for row in grid]
        object.__setattr__(self, "rows", len(grid))
        object.__setattr__(self, "cols", ncols)
        object.__setattr__(self, "entries", tuple(tuple(row) for row in grid))
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "field", field)

    def __setattr__(self, name, value):
        raise AttributeError("ExactMatrix is immutable")

    @classmethod
    def identity(cls, n: int) -> "ExactMatrix":
        return cls([[Fraction(int(i == j)) for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "ExactMatrix":
        return cls([[Fraction(0)] * cols for _ in range(rows)])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self):
        return hash((self.shape, self.entries))

    def __repr__(self):
        return f"ExactMatrix({self.rows}x{self.cols} {self.kind})"

    def is_zero(self) -> bool:
        return all(not x for row in self.entries for x in row)

    def __add__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return ExactMatrix(
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)]
        )

    def __sub__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return ExactMatrix(
            [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)]
        )

    def __neg__(self):
        return ExactMatrix([[-x for x in row] for row in self.entries])

    def scale(self, c) -> "ExactMatrix":
        return ExactMatrix([[c * x for x in row] for row in self.entries])

    def __matmul__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        cols = list(zip(*other.entries))
        return ExactMatrix(
            [[sum(a * b for a, b in zip(row, col)) for col in cols] for row in self.entries]
        )

    def apply(self, vec) -> tuple:
        if len(vec) != self.cols:
            raise ValueError("length mismatch")
        return tuple(sum(a * b for a, b in zip(row, vec)) for row in self.entries)

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(list(zip(*self.entries)))

    def flatten(self) -> tuple:
        """Row-major flattening."""
        return tuple(x for row in self.entries for x in row)


def _field_constants(m: ExactMatrix):
    if m.kind == RATIONAL:
        return Fraction(0), Fraction(1)
    if m.kind == NUMBERFIELD:
        return m.field.zero(), m.field.one()
    raise TypeError("operation needs a field scalar kind (rational or numberfield), got poly")


def _rref_core(rows, zero, one):
    """In-place RREF on a list of row lists; returns (pivot_cols, pivot_rows).

    Works for any exact field scalar supporting +, -, *, / and truthiness.
    """
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    pivot_cols: list[int] = []
    pivot_rows: list[list] = []
    rank = 0
    for col in range(ncols):
        piv = None
        for i in range(rank, nrows):
            if rows[i][col]:
                piv = i
                break
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        prow = rows[rank]
        pv = prow[col]
        if pv != one:
            inv = one / pv
            for j in range(col, ncols):
                if prow[j]:
                    prow[j] = prow[j] * inv
        nz = [(j, prow[j]) for j in range(col + 1, ncols) if prow[j]]
        for i in range(rank + 1, nrows):
            f = rows[i][col]
            if f:
                ri = rows[i]
                ri[col] = zero
                for j, b in nz:
                    ri[j] = ri[j] - f * b
        pivot_cols.append(col)
        pivot_rows.append(prow)
        rank += 1
    # back-substitution: clear entries above each pivot
    for r in range(rank - 1, 0, -1):
        col = pivot_cols[r]
        prow = pivot_rows[r]
        nz = [(j, prow[j]) for j in range(col + 1, ncols) if prow[j]]
        for i in range(r):
            f = pivot_rows[i][col]
            if f:
                ri = pivot_rows[i]
                ri[col] = zero
                for j, b in nz:
                    ri[j] = ri[j] - f * b
    return pivot_cols, pivot_rows


def rref(m: ExactMatrix) -> tuple[ExactMatrix, tuple[int, ...], int]:
    """Reduced row echelon form, pivot columns, rank (field kinds only)."""
    zero, one = _field_constants(m)
    rows = [list(r) for r in m.entries]
    pivot_cols, pivot_rows = _rref_core(rows, zero, one)
    out = list(pivot_rows) + [[zero] * m.cols for _ in range(m.rows - len(pivot_rows))]
    return ExactMatrix(out), tuple(pivot_cols), len(pivot_cols)


def rank(m: ExactMatrix) -> int:
    if m.kind == POLY:
        return parametric_elimination(m).generic_rank
    if m.kind == RATIONAL:
        pivot_cols, _ = _solve_rational([list(r) for r in m.entries], m.cols)
        return len(pivot_cols)
    zero, one = _field_constants(m)
    rows = [list(r) for r in m.entries]
    pivot_cols, _ = _rref_core(rows, zero, one)
    return len(pivot_cols)


def nullspace(m: ExactMatrix) -> list[tuple]:
    """Kernel basis, one vector per free column with that coordinate set to 1."""
    if m.kind == RATIONAL:
        _, kernel = _solve_rational([list(r) for r in m.entries], m.cols)
        return kernel
    zero, one = _field_constants(m)
    rows = [list(r) for r in m.entries]
    pivot_cols, pivot_rows = _rref_core(rows, zero, one)
    return _nullspace_from_rref(pivot_cols, pivot_rows, m.cols, zero, one)


def _nullspace_from_rref(pivot_cols, pivot_rows, ncols, zero, one):
    pivset = set(pivot_cols)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = [zero] * ncols
        v[free] = one
        for r, pc in enumerate(pivot_cols):
            coef = pivot_rows[r][free]
            if coef:
                v[pc] = -coef
        basis.append(tuple(v))
    return basis


def nullity(m: ExactMatrix) -> int:
    return m.cols - rank(m)


# ---------------------------------------------------------------------------
# Fast exact path for rational matrices
# ---------------------------------------------------------------------------
# For large systems, elimination modulo a word-size prime selects candidate
# pivot rows; the exact fraction-free elimination then runs on those rows
# only, and every omitted row is verified (exactly) to be orthogonal to the
# computed kernel.  Orthogonality to the kernel is equivalent to lying in the
# row space, so a successful verification certifies the result; a failure
# (unlucky prime) falls back to the full exact elimination.

_PRIMES = (2147483647, 2147483629)
_FAST_THRESHOLD = 4000  # rows * cols


def _integerize_rows(rows) -> list[list[int]]:
    out = []
    for row in rows:
        den = 1
        for x in row:
            d = x.denominator
            if d != 1:
                den = den * d // math.gcd(den, d)
        ints = [int(x * den) for x in row]
        g = 0
        for v in ints:
            if v:
                g = math.gcd(g, v)
                if g == 1:
                    break
        if g > 1:
            ints = [v // g for v in ints]
        out.append(ints)
    return out


def _modp_pivot_rows(int_rows: list[list[int]], ncols: int, p: int) -> list[int]:
    """Indices of rows that carry pivots in an elimination modulo p."""
    import numpy as np

    arr = np.array([[x % p for x in row] for row in int_rows], dtype=np.int64)
    orig = list(range(len(int_rows)))
    r = 0
    selected: list[int] = []
    nrows = arr.shape[0]
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.nonzero(arr[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            arr[[r, i]] = arr[[i, r]]
            orig[r], orig[i] = orig[i], orig[r]
        inv = pow(int(arr[r, c]), p - 2, p)
        arr[r, c:] = (arr[r, c:] * inv) % p
        below = np.nonzero(arr[r + 1:, c])[0]
        if below.size:
            idx = r + 1 + below
            factors = arr[idx, c][:, None]
            arr[idx, c:] = (arr[idx, c:] - factors * arr[r, c:][None, :]) % p
        selected.append(orig[r])
        r += 1
    return selected


def _divex(a: int, d: int) -> int:
    if d == 1:
        return a
    q, r = divmod(a, d)
    if r:
        raise ArithmeticError("non-exact division in fraction-free elimination")
    return q


def _int_bareiss_ref(rows: list[list[int]], ncols: int) -> tuple[list[int], list[list[int]]]:
    """Fraction-free row echelon form on integer rows (classical one-step
    division scheme); returns (pivot columns, echelon rows, one per pivot)."""
    work = [row for row in rows if any(row)]
    pivot_cols: list[int] = []
    prev = 1
    top = 0
    for col in range(ncols):
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
        survivors = work[: top + 1]
        for i in range(top + 1, len(work)):
            ri = work[i]
            f = ri[col]
            if f:
                new = [_divex(piv * a - f * b, prev) for a, b in zip(ri, prow)]
                new[col] = 0
            else:
                new = [_divex(piv * a, prev) if a else 0 for a in ri]
            if any(new):
                survivors.append(new)
        work = survivors
        prev = piv
        pivot_cols.append(col)
        top += 1
    return pivot_cols, work[: len(pivot_cols)]


def _kernel_from_int_ref(pivot_cols, ref_rows, ncols) -> list[tuple[Fraction, ...]]:
    """Back-solve one kernel vector per free column (that coordinate = 1)."""
    pivset = set(pivot_cols)
    supports = [
        [(j, row[j]) for j in range(pc + 1, ncols) if row[j]]
        for pc, row in zip(pivot_cols, ref_rows)
    ]
    kernel = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for r in range(len(pivot_cols) - 1, -1, -1):
            pc = pivot_cols[r]
            if pc > free:
                continue
            s = Fraction(0)
            for j, coef in supports[r]:
                if coef and v[j]:
                    s += coef * v[j]
            if s:
                v[pc] = -s / ref_rows[r][pc]
        kernel.append(tuple(v))
    return kernel


def _verify_kernel(int_rows, skip: set[int], kernel) -> bool:
    """Exact check that every non-selected row annihilates every kernel vector."""
    int_kernel = _integerize_rows(kernel)
    for idx, row in enumerate(int_rows):
        if idx in skip:
            continue
        support = [(j, c) for j, c in enumerate(row) if c]
        for v in int_kernel:
            s = 0
            for j, c in support:
                if v[j]:
                    s += c * v[j]
            if s:
                return False
    return True


def _solve_rational(rows, ncols) -> tuple[list[int], list[tuple[Fraction, ...]]]:
    """(pivot columns, kernel basis) for rational rows, certified exact."""
    if not rows or ncols == 0:
        return [], []
    if len(rows) * ncols < _FAST_THRESHOLD:
        work = [list(r) for r in rows]
        pivot_cols, pivot_rows = _rref_core(work, Fraction(0), Fraction(1))
        return pivot_cols, _nullspace_from_rref(
            pivot_cols, pivot_rows, ncols, Fraction(0), Fraction(1)
        )
    int_rows = _integerize_rows(rows)
    for p in _PRIMES:
        selected = _modp_pivot_rows(int_rows, ncols, p)
        pivot_cols, ref_rows = _int_bareiss_ref([int_rows[i] for i in selected], ncols)
        if len(pivot_cols) != len(selected):
            continue  # cannot happen mathematically; guard against misuse
        kernel = _kernel_from_int_ref(pivot_cols, ref_rows, ncols)
        if _verify_kernel(int_rows, set(selected), kernel):
            return pivot_cols, kernel
    pivot_cols, ref_rows = _int_bareiss_ref(int_rows, ncols)
    return pivot_cols, _kernel_from_int_ref(pivot_cols, ref_rows, ncols)


# ---------------------------------------------------------------------------
# Fraction-free elimination over Q[t]
# ---------------------------------------------------------------------------
# Integer coefficient tuples, lowest degree first, () for zero.

def _pt_trim(cs: list[int]) -> tuple[int, ...]:
    while cs and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


def _pt_mul(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    if not a or not b:
        return ()
    if len(a) == 1 and len(b) == 1:
        return (a[0] * b[0],)
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                out[i + j] += ca * cb
    return _pt_trim(out)


def _pt_sub(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    if not b:
        return a
    if not a:
        return tuple(-c for c in b)
    if len(a) < len(b):
        a = a + (0,) * (len(b) - len(a))
    out = list(a)
    for i, c in enumerate(b):
        out[i] -= c
    return _pt_trim(out)


def _pt_divexact(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    """Exact division in Z[t]; Bareiss guarantees divisibility."""
    if not a:
        return ()
    if len(b) == 1:
        d = b[0]
        if d == 1:
            return a
        if d == -1:
            return tuple(-c for c in a)
        out = []
        for c in a:
            q, r = divmod(c, d)
            if r:
                raise ArithmeticError("non-exact division in fraction-free elimination")
            out.append(q)
        return tuple(out)
    rem = list(a)
    lead = b[-1]
    db = len(b) - 1
    quo = [0] * (len(a) - db)
    for i in range(len(rem) - 1, db - 1, -1):
        c = rem[i]
        if c:
            q, r = divmod(c, lead)
            if r:
                raise ArithmeticError("non-exact division in fraction-free elimination")
            quo[i - db] = q
            for j in range(db + 1):
                rem[i - db + j] -= q * b[j]
    if any(rem):
        raise ArithmeticError("non-exact division in fraction-free elimination")
    return _pt_trim(quo)


def _poly_to_int_tuple(p: Poly) -> tuple[tuple[int, ...], int]:
    """(integer coefficients, common denominator) with num/den = p."""
    if p.is_zero():
        return (), 1
    den = math.lcm(*(c.denominator for c in p.coeffs))
    return tuple(int(c * den) for c in p.coeffs), den


def _int_rows_from_poly(m: ExactMatrix) -> list[list[tuple[int, ...]]]:
    out = []
    for row in m.entries:
        den = 1
        for p in row:
            for c in p.coeffs:
                den = den * c.denominator // math.gcd(den, c.denominator)
        irow = [
            _pt_trim([int(c * den) for c in p.coeffs]) if not p.is_zero() else ()
            for p in row
        ]
        g = 0
        for e in irow:
            for c in e:
                g = math.gcd(g, c)
        if g > 1:
            irow = [tuple(c // g for c in e) for e in irow]
        out.append(irow)
    return out


def _bareiss(rows: list[list[tuple[int, ...]]], ncols: int):
    """Fraction-free elimination with minimal-degree row pivoting.

    Returns (rank, pivot polynomials as integer tuples).  Row pivot choice:
    among candidate rows the one whose entry in the current column has minimal
    degree, ties broken by smallest row index.
    """
    rows = [r for r in rows if any(r)]
    prev: tuple[int, ...] = (1,)
    pivots: list[tuple[int, ...]] = []
    top = 0
    for col in range(ncols):
        best_i = -1
        best_deg = -1
        for i in range(top, len(rows)):
            e = rows[i][col]
            if e:
                d = len(e) - 1
                if best_i < 0 or d < best_deg:
                    best_i, best_deg = i, d
                    if d == 0:
                        break
        if best_i < 0:
            continue
        rows[top], rows[best_i] = rows[best_i], rows[top]
        prow = rows[top]
        piv = prow[col]
        pivots.append(piv)
        survivors = [rows[i] for i in range(top + 1)]
        for i in range(top + 1, len(rows)):
            ri = rows[i]
            f = ri[col]
            if f:
                new = [
                    _pt_divexact(_pt_sub(_pt_mul(piv, ri[j]), _pt_mul(f, prow[j])), prev)
                    if (ri[j] or prow[j])
                    else ()
                    for j in range(ncols)
                ]
                new[col] = ()
            else:
                new = [_pt_divexact(_pt_mul(piv, e), prev) if e else () for e in ri]
            if any(new):
                survivors.append(new)
        rows = survivors
        prev = piv
        top += 1
        if top == len(rows):
            break
    return len(pivots), pivots


@dataclass(frozen=True)
class ParametricElimination:
    """Generic rank over Q(t) plus the special-value candidate factors.

    ``candidates`` are monic irreducible polynomials; the rank at any point
    that is not a root of a candidate (or of an unresolved factor) equals
    ``generic_rank``.  ``unresolved`` holds squarefree degree >= 4 residuals
    whose irreducible factors were not extracted.
    """

    generic_rank: int
    candidates: tuple[Poly, ...]
    unresolved: tuple[Poly, ...]


def _candidate_factors(pivots: list[tuple[int, ...]]) -> tuple[list[Poly], list[Poly]]:
    candidates: list[Poly] = []
    unresolved: list[Poly] = []
    seen: set[tuple] = set()

    def add(p: Poly, bucket: list[Poly]):
        p = p.monic()
        if p.coeffs not in seen:
            seen.add(p.coeffs)
            bucket.append(p)

    tvar = Poly.variable()
    for piv in pivots:
        if len(piv) <= 1:
            continue
        f = squarefree_part(Poly([Fraction(c) for c in piv]))
        for root in sorted(rational_roots(f)):
            add(tvar - root, candidates)
            f = f // (tvar - root)
        f = f.monic()
        if f.degree <= 0:
            continue
        verdict = irreducibility_verdict(f)
        if verdict:
            add(f, candidates)
        elif verdict is None:
            add(f, unresolved)
        else:
            # cannot happen for degree 2/3 with rational roots split off
            raise ArithmeticError(f"unexpected reducible residual {f}")
    return candidates, unresolved


def parametric_elimination(m: ExactMatrix) -> ParametricElimination:
    """Generic rank over Q(t) and candidate special-value polynomials."""
    if m.kind != POLY:
        raise TypeError("parametric_elimination needs polynomial entries")
    rows = _int_rows_from_poly(m)
    rnk, pivots = _bareiss(rows, m.cols)
    candidates, unresolved = _candidate_factors(pivots)
    key = lambda p: (p.degree, p.coeffs)
    return ParametricElimination(rnk, tuple(sorted(candidates, key=key)), tuple(sorted(unresolved, key=key)))


def substitute(m: ExactMatrix, value: Fraction) -> ExactMatrix:
    """Evaluate a polynomial matrix at a rational parameter value."""
    if m.kind != POLY:
        raise TypeError("substitute needs polynomial entries")
    value = Fraction(value)
    return ExactMatrix([[p(value) for p in row] for row in m.entries])


def reduce_mod(m: ExactMatrix, field: NumberField) -> ExactMatrix:
    """Map a polynomial matrix into Q[t]/(modulus)."""
    if m.kind != POLY:
        raise TypeError("reduce_mod needs polynomial entries")
    return ExactMatrix([[field.elem(p) for p in row] for row in m.entries])


def checked_modulus(point: Poly) -> NumberField:
    """Validate a squarefree, verifiably irreducible modulus and build its field."""
    p = point.monic()
    if p.degree < 1:
        raise ReducibleModulusError("modulus must have degree >= 1")
    if p.degree == 1:
        raise ReducibleModulusError("degree-1 modulus is a rational point; substitute it instead")
    if poly_gcd(p, p.derivative()).degree > 0:
        raise ReducibleModulusError(f"modulus {p} is not squarefree; refine the point")
    verdict = irreducibility_verdict(p)
    if verdict is None:
        raise ReducibleModulusError(
            f"cannot verify irreducibility of degree-{p.degree} modulus {p}; refine the point"
        )
    if not verdict:
        raise ReducibleModulusError(f"modulus {p} is reducible over Q; refine the point")
    return NumberField(p)


def rank_at(m: ExactMatrix, point) -> int:
    """Rank of a polynomial matrix at a rational point or over Q[t]/(point)."""
    if m.kind != POLY:
        raise TypeError("rank_at needs polynomial entries")
    if isinstance(point, (int, Fraction)):
        return rank(substitute(m, point))
    if isinstance(point, Poly):
        if point.degree == 1:
            c0, c1 = point.coeffs
            return rank(substitute(m, -c0 / c1))
        field = checked_modulus(point)
        return rank(reduce_mod(m, field))
    raise TypeError(f"point must be rational or Poly, got {type(point).__name__}")
