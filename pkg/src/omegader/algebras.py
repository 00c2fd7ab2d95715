"""Algebras given by structure constants.

An algebra is a dimension n plus exact rational structure constants c[i][j][k]
meaning mu(e_i, e_j) = sum_k c[i][j][k] e_k on the fixed basis, together with
a declared product symmetry.  Documents describe algebras (possibly with one
formal parameter) in a JSON file format; the built-in corpus contains the
7-dimensional nilpotent family g_I(alpha), its member g_G = g_I(0), sl2,
the 3-dimensional Heisenberg algebra, and abelian algebras.
"""

from __future__ import annotations

import json
import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .errors import DocumentError, PreconditionError
from .linalg import ExactMatrix, nullspace, rank, rref
from .scalars import Poly, format_poly, format_rational

ANTI = "anti-commutative"
COMM = "commutative"
NONE = "none"
LAWS = (ANTI, COMM, NONE)


@dataclass(frozen=True)
class Algebra:
    """Finite-dimensional algebra over Q on a fixed basis, immutable."""

    name: str = field(compare=False)
    dim: int = 0
    structure: tuple = ()
    law: str = ANTI

    def mul_basis(self, i: int, j: int) -> tuple[Fraction, ...]:
        """Coordinates of mu(e_i, e_j), 0-indexed."""
        return self.structure[i][j]

    def __repr__(self):
        return f"Algebra({self.name!r}, dim={self.dim}, law={self.law!r})"


def _structure_tuple(c) -> tuple:
    return tuple(tuple(tuple(Fraction(v) for v in row) for row in plane) for plane in c)


def make_algebra(name: str, dim: int, entries, law: str = ANTI) -> Algebra:
    """Build an Algebra from sparse entries {(i, j, k): coeff}, 1-indexed.

    For the symmetric laws only pairs i < j need to be given; mirrors and the
    zero diagonal are synthesized.
    """
    if law not in LAWS:
        raise DocumentError(f"unknown law {law!r}")
    c = [[[Fraction(0)] * dim for _ in range(dim)] for _ in range(dim)]
    for (i, j, k), v in entries.items():
        if not (1 <= i <= dim and 1 <= j <= dim and 1 <= k <= dim):
            raise DocumentError(f"bracket index out of range: ({i},{j},{k}) with dim {dim}")
        v = Fraction(v)
        c[i - 1][j - 1][k - 1] = v
        if law == ANTI and i != j:
            c[j - 1][i - 1][k - 1] = -v
        elif law == COMM and i != j:
            c[j - 1][i - 1][k - 1] = v
    return Algebra(name, dim, _structure_tuple(c), law)


# ---------------------------------------------------------------------------
# Core operations
# ---------------------------------------------------------------------------

def bracket(a: Algebra, x, y) -> tuple[Fraction, ...]:
    """mu(x, y) for coefficient vectors x, y of length dim."""
    n = a.dim
    if len(x) != n or len(y) != n:
        raise ValueError(f"vectors must have length {n}")
    out = [Fraction(0)] * n
    for i, xi in enumerate(x):
        if xi:
            plane = a.structure[i]
            for j, yj in enumerate(y):
                if yj:
                    coef = xi * yj
                    for k, ck in enumerate(plane[j]):
                        if ck:
                            out[k] += coef * ck
    return tuple(out)


@dataclass(frozen=True)
class ValidationReport:
    check: str
    passed: bool
    violation: tuple | None = None
    message: str = ""


def validate(a: Algebra, check: str) -> ValidationReport:
    """Check anti-commutativity, commutativity, or the Jacobi identity.

    Failures are report content, not exceptions; the first violating index
    triple is recorded.
    """
    check = check.replace("anticommutative", ANTI)
    n = a.dim
    if check in (ANTI, COMM):
        sign = -1 if check == ANTI else 1
        for i in range(n):
            for j in range(i, n):
                for k in range(n):
                    lhs = a.structure[i][j][k]
                    rhs = sign * a.structure[j][i][k]
                    if lhs != rhs:
                        return ValidationReport(
                            check, False, (i + 1, j + 1, k + 1),
                            f"c^{k+1}_{{{i+1}{j+1}}} = {format_rational(lhs)} but "
                            f"{'-' if sign < 0 else ''}c^{k+1}_{{{j+1}{i+1}}} = {format_rational(rhs)}",
                        )
        return ValidationReport(check, True)
    if check == "jacobi":
        basis = [tuple(Fraction(int(r == s)) for s in range(n)) for r in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                for k in range(j + 1, n):
                    acc = [Fraction(0)] * n
                    for (p, q, r) in ((i, j, k), (j, k, i), (k, i, j)):
                        inner = a.mul_basis(p, q)
                        term = bracket(a, inner, basis[r])
                        acc = [u + v for u, v in zip(acc, term)]
                    if any(acc):
                        return ValidationReport(
                            "jacobi", False, (i + 1, j + 1, k + 1),
                            f"Jacobi sum at (e_{i+1}, e_{j+1}, e_{k+1}) is nonzero",
                        )
        return ValidationReport("jacobi", True)
    raise ValueError(f"unknown check {check!r}")


def _matrix_inverse(g: ExactMatrix) -> ExactMatrix:
    n = g.rows
    if g.cols != n:
        raise PreconditionError("basis change must be square")
    aug = ExactMatrix([list(g.entries[i]) + [Fraction(int(i == j)) for j in range(n)] for i in range(n)])
    red, pivots, rnk = rref(aug)
    if rnk < n or any(p >= n for p in pivots):
        raise PreconditionError("singular basis change")
    return ExactMatrix([row[n:] for row in red.entries])


def change_basis(a: Algebra, g: ExactMatrix) -> Algebra:
    """Structure constants of g.mu, where (g.mu)(x, y) = g mu(g^-1 x, g^-1 y)."""
    n = a.dim
    if g.shape != (n, n):
        raise PreconditionError(f"basis change must be {n}x{n}")
    h = _matrix_inverse(g)
    hcols = list(zip(*h.entries))
    c = []
    for i in range(n):
        plane = []
        for j in range(n):
            w = bracket(a, hcols[i], hcols[j])
            plane.append(g.apply(w))
        c.append(tuple(plane))
    return Algebra(a.name, n, tuple(c), a.law)


def center(a: Algebra) -> tuple[int, list[tuple[Fraction, ...]]]:
    """{X : mu(X, e_j) = 0 for all j}; two-sided when no symmetry is declared."""
    n = a.dim
    rows = []
    for j in range(n):
        for k in range(n):
            rows.append([a.structure[i][j][k] for i in range(n)])
    if a.law == NONE:
        for j in range(n):
            for k in range(n):
                rows.append([a.structure[j][i][k] for i in range(n)])
    basis = nullspace(ExactMatrix(rows))
    return len(basis), basis


def derived_span(a: Algebra) -> tuple[int, bool]:
    """Dimension of span mu(A, A) and whether the algebra is perfect."""
    rows = [list(a.structure[i][j]) for i in range(a.dim) for j in range(a.dim)]
    r = rank(ExactMatrix(rows))
    return r, r == a.dim


def random_basis_change(n: int, seed: int) -> ExactMatrix:
    """Seeded invertible matrix with entries in [-3, 3] (rejection sampled)."""
    rng = random.Random(seed)
    while True:
        g = ExactMatrix([[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)])
        if rank(g) == n:
            return g


# ---------------------------------------------------------------------------
# Coefficient expressions
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|([()+\-*^/]))")


def _tokenize(text: str) -> list[tuple[str, str]]:
    tokens = []
    pos = 0
    text = text.replace("−", "-").rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"bad character at position {pos} in {text!r}")
        pos = m.end()
        if m.group(1):
            tokens.append(("int", m.group(1)))
        elif m.group(2):
            tokens.append(("name", m.group(2)))
        else:
            tokens.append(("op", m.group(3)))
    return tokens


def parse_coefficient(text: str, parameters: tuple[str, ...]) -> Poly:
    """Parse an expression over integers, + - * ^, rational literals p/q, and
    the (single) parameter name into a Poly in that parameter.

    The slash appears only inside rational literals, between two integers.
    """
    tokens = _tokenize(text)
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else ("end", "")

    def take():
        nonlocal pos
        tok = peek()
        pos += 1
        return tok

    def atom() -> Poly:
        kind, val = take()
        if kind == "int":
            num = int(val)
            if peek() == ("op", "/"):
                take()
                dkind, dval = take()
                if dkind != "int":
                    raise ValueError("denominator of a rational literal must be an integer")
                return Poly(Fraction(num, int(dval)))
            return Poly(Fraction(num))
        if kind == "name":
            if val not in parameters:
                raise ValueError(f"unknown name {val!r} (parameters: {list(parameters)})")
            return Poly.variable()
        if (kind, val) == ("op", "("):
            e = expr()
            if take() != ("op", ")"):
                raise ValueError("missing ')'")
            return e
        if (kind, val) == ("op", "-"):
            return -power()
        raise ValueError(f"unexpected token {val!r} in {text!r}")

    def power() -> Poly:
        base = atom()
        if peek() == ("op", "^"):
            take()
            kind, val = take()
            if kind != "int":
                raise ValueError("exponent must be a nonnegative integer")
            result = Poly(1)
            for _ in range(int(val)):
                result = result * base
            return result
        return base

    def term() -> Poly:
        result = power()
        while peek() == ("op", "*"):
            take()
            result = result * power()
        return result

    def expr() -> Poly:
        result = term()
        while peek()[0] == "op" and peek()[1] in "+-":
            _, op = take()
            nxt = term()
            result = result + nxt if op == "+" else result - nxt
        return result

    result = expr()
    if pos != len(tokens):
        raise ValueError(f"trailing tokens in {text!r}")
    return result


# ---------------------------------------------------------------------------
# Algebra documents
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BracketEntry:
    left: int
    right: int
    out: tuple  # ((index, Poly), ...) sorted by index


@dataclass(frozen=True)
class AlgebraDocument:
    """Parametric description of an algebra; at most one formal parameter."""

    name: str
    dim: int
    law: str
    parameters: tuple[str, ...]
    brackets: tuple[BracketEntry, ...]


def _check_document(doc: AlgebraDocument) -> None:
    if doc.dim < 1:
        raise DocumentError(f"field 'dim': must be a positive integer, got {doc.dim}")
    if doc.law not in LAWS:
        raise DocumentError(f"field 'law': must be one of {LAWS}, got {doc.law!r}")
    if len(doc.parameters) > 1:
        raise DocumentError("field 'parameters': at most one parameter is supported")
    seen = set()
    for b in doc.brackets:
        if not (1 <= b.left <= doc.dim and 1 <= b.right <= doc.dim):
            raise DocumentError(
                f"field 'brackets': pair ({b.left},{b.right}) out of range for dim {doc.dim}"
            )
        if doc.law in (ANTI, COMM) and not b.left < b.right:
            raise DocumentError(
                f"field 'brackets': list only left < right pairs under {doc.law} law, got ({b.left},{b.right})"
            )
        if (b.left, b.right) in seen:
            raise DocumentError(f"field 'brackets': duplicate pair ({b.left},{b.right})")
        seen.add((b.left, b.right))
        for k, _ in b.out:
            if not 1 <= k <= doc.dim:
                raise DocumentError(f"field 'brackets': output index {k} out of range")


def load_algebra(doc: AlgebraDocument, bindings: dict[str, Fraction] | None = None) -> Algebra:
    """Evaluate a document at parameter bindings; synthesizes mirror constants.

    Binding names not declared by the document are ignored, so one binding map
    can serve several documents; every declared parameter must be bound.
    """
    _check_document(doc)
    bindings = bindings or {}
    values = []
    for p in doc.parameters:
        if p not in bindings:
            raise DocumentError(f"unbound parameter {p!r} for algebra {doc.name!r}")
        values.append(Fraction(bindings[p]))
    entries = {}
    for b in doc.brackets:
        for k, poly in b.out:
            val = poly(values[0]) if doc.parameters else poly.constant_value()
            if val:
                entries[(b.left, b.right, k)] = val
    a = make_algebra(doc.name, doc.dim, entries, doc.law)
    if a.law in (ANTI, COMM):
        report = validate(a, a.law)
        if not report.passed:
            raise DocumentError(f"law violation after synthesis at {report.violation}")
    return a


def document_from_algebra(a: Algebra) -> AlgebraDocument:
    """Parameter-free document listing the nonzero brackets of an algebra."""
    brackets = []
    n = a.dim
    for i in range(n):
        jstart = i + 1 if a.law in (ANTI, COMM) else 0
        for j in range(jstart, n):
            out = tuple(
                (k + 1, Poly(a.structure[i][j][k])) for k in range(n) if a.structure[i][j][k]
            )
            if out:
                brackets.append(BracketEntry(i + 1, j + 1, out))
    return AlgebraDocument(a.name, n, a.law, (), tuple(brackets))


def document_to_json(doc: AlgebraDocument) -> dict:
    var = doc.parameters[0] if doc.parameters else "t"
    return {
        "name": doc.name,
        "dim": doc.dim,
        "law": doc.law,
        "parameters": list(doc.parameters),
        "brackets": [
            {
                "left": b.left,
                "right": b.right,
                "out": {str(k): format_poly(p, var) for k, p in b.out},
            }
            for b in doc.brackets
        ],
    }


def document_from_json(data: dict) -> AlgebraDocument:
    try:
        name = data["name"]
        dim = data["dim"]
        law = data["law"]
        parameters = tuple(data.get("parameters", []))
        brackets = []
        for rec in data["brackets"]:
            out = []
            for key, expr in rec["out"].items():
                try:
                    poly = parse_coefficient(expr, parameters)
                except ValueError as exc:
                    raise DocumentError(f"field 'brackets': bad coefficient {expr!r}: {exc}") from exc
                out.append((int(key), poly))
            out.sort()
            brackets.append(BracketEntry(int(rec["left"]), int(rec["right"]), tuple(out)))
    except KeyError as exc:
        raise DocumentError(f"missing field {exc.args[0]!r} in algebra document") from exc
    except (TypeError, ValueError) as exc:
        raise DocumentError(f"malformed algebra document: {exc}") from exc
    doc = AlgebraDocument(name, int(dim), law, parameters, tuple(brackets))
    _check_document(doc)
    return doc


def load_document(path: str | Path) -> AlgebraDocument:
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise DocumentError(f"cannot read algebra document {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DocumentError(f"algebra document {path} is not valid JSON: {exc}") from exc
    return document_from_json(data)


def save_document(doc: AlgebraDocument, path: str | Path) -> None:
    Path(path).write_text(json.dumps(document_to_json(doc), indent=2) + "\n")


# ---------------------------------------------------------------------------
# Built-in corpus
# ---------------------------------------------------------------------------

def _doc(name, dim, law, parameters, rows) -> AlgebraDocument:
    brackets = []
    for left, right, out in rows:
        entry = tuple(
            sorted((k, parse_coefficient(expr, parameters)) for k, expr in out.items())
        )
        brackets.append(BracketEntry(left, right, entry))
    return AlgebraDocument(name, dim, law, parameters, tuple(brackets))


_G_I_ROWS = [
    (1, 2, {3: "1"}),
    (1, 3, {4: "1"}),
    (1, 4, {5: "1"}),
    (1, 5, {6: "1"}),
    (1, 6, {7: "1"}),
    (2, 3, {5: "1"}),
    (2, 4, {6: "1"}),
    (2, 5, {7: "1 - alpha"}),
    (3, 4, {7: "alpha"}),
]

_CORPUS_DOCS = {
    "g_I": _doc("g_I", 7, ANTI, ("alpha",), _G_I_ROWS),
    "g_G": _doc(
        "g_G", 7, ANTI, (),
        [(l, r, out) for (l, r, out) in _G_I_ROWS[:7]] + [(2, 5, {7: "1"})],
    ),
    "sl2": _doc("sl2", 3, ANTI, (), [(1, 2, {2: "2"}), (1, 3, {3: "-2"}), (2, 3, {1: "1"})]),
    "heisenberg3": _doc("heisenberg3", 3, ANTI, (), [(1, 2, {3: "1"})]),
}

_ABELIAN = re.compile(r"abelian\((\d+)\)$")


def corpus_names() -> list[str]:
    return ["g_I", "g_G", "sl2", "heisenberg3", "abelian(n)"]


def corpus_document(name: str) -> AlgebraDocument:
    m = _ABELIAN.match(name)
    if m:
        n = int(m.group(1))
        if n < 1:
            raise DocumentError("abelian(n) needs n >= 1")
        return AlgebraDocument(name, n, ANTI, (), ())
    if name in _CORPUS_DOCS:
        return _CORPUS_DOCS[name]
    raise DocumentError(f"unknown corpus algebra {name!r}; known: {', '.join(corpus_names())}")


def corpus(name: str, bindings: dict[str, Fraction] | None = None) -> Algebra:
    """Built-in algebra by name: g_I (needs alpha), g_G, sl2, heisenberg3, abelian(n)."""
    return load_algebra(corpus_document(name), bindings)
