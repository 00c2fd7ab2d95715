"""Report records and their text / JSON renderings.

Machine-readable reports use schema "omega-der/1": rationals cross the
boundary as "p/q" strings, polynomials as coefficient lists lowest degree
first.  Rendering is deterministic: the same report always produces the same
bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .algebras import AlgebraDocument, ValidationReport, document_to_json
from .profiles import (
    GENERIC,
    InvariantProfile,
    ObstructionVerdict,
    ParametricReport,
    SpecialPoint,
    Witness,
)
from .scalars import Poly, format_poly, format_rational
from .spaces import CanonicalClass, OmegaSpec

SCHEMA = "omega-der/1"


@dataclass(frozen=True)
class Report:
    command: str
    payload: dict
    warnings: tuple[str, ...] = ()


def poly_to_strings(p: Poly) -> list[str]:
    return [format_rational(c) for c in p.coeffs]


def strings_to_poly(coeffs) -> Poly:
    return Poly([Fraction(c) for c in coeffs])


# ---------------------------------------------------------------------------
# Payload builders
# ---------------------------------------------------------------------------

def special_to_json(sp: SpecialPoint) -> dict:
    if sp.value is not None:
        return {"at": format_rational(sp.value), "dimension": sp.dimension}
    return {"modulus": poly_to_strings(sp.modulus), "dimension": sp.dimension}


def parametric_to_json(rep: ParametricReport) -> dict:
    return {
        "family": rep.family,
        "generic": rep.generic,
        "specials": [special_to_json(sp) for sp in rep.specials],
        "unresolved": [poly_to_strings(p) for p in rep.unresolved],
    }


def profile_to_json(p: InvariantProfile) -> dict:
    return {
        "algebra": p.name,
        "dim": p.dim,
        "fixed": {key: d for key, d in p.fixed},
        "parametric": {kind: parametric_to_json(rep) for kind, rep in p.parametric},
    }


def witness_to_json(w: Witness) -> dict:
    if w.at is None:
        at = None
    elif w.at == GENERIC:
        at = GENERIC
    elif isinstance(w.at, Poly):
        at = {"modulus": poly_to_strings(w.at)}
    else:
        at = format_rational(w.at)
    return {
        "family": w.invariant,
        "at": at,
        "source_dim": w.source_dim,
        "target_dim": w.target_dim,
    }


def verdict_to_json(v: ObstructionVerdict) -> dict:
    return {
        "source": v.source,
        "target": v.target,
        "outcome": v.outcome,
        "witness": witness_to_json(v.witness) if v.witness else None,
    }


def validation_to_json(algebra: str, law: str, reports: list[ValidationReport]) -> dict:
    return {
        "algebra": algebra,
        "law": law,
        "checks": [
            {
                "check": r.check,
                "passed": r.passed,
                "violation": list(r.violation) if r.violation else None,
                "message": r.message,
            }
            for r in reports
        ],
    }


def space_to_json(algebra: str, spec: str, dimension: int, flat_basis: list[tuple]) -> dict:
    return {
        "algebra": algebra,
        "space": spec,
        "dimension": dimension,
        "basis": [[format_rational(x) for x in vec] for vec in flat_basis],
    }


def classify_to_json(omega: OmegaSpec, cls: CanonicalClass) -> dict:
    return {
        "omega": [format_rational(x) for x in omega.flat()],
        "label": cls.label,
        "parameter": format_rational(cls.parameter) if cls.parameter is not None else None,
    }


def corpus_list_to_json(names: list[str]) -> dict:
    return {"names": names}


def document_payload(doc: AlgebraDocument) -> dict:
    return {"document": document_to_json(doc)}


def evaluation_to_json(algebra: str, kind: str, at, dimension: int) -> dict:
    if isinstance(at, Poly):
        where: object = {"modulus": poly_to_strings(at)}
    else:
        where = format_rational(at)
    return {"algebra": algebra, "family": kind, "at": where, "dimension": dimension}


# ---------------------------------------------------------------------------
# Rendering
# ---------------------------------------------------------------------------

def render_json(report: Report) -> str:
    doc = {
        "schema": SCHEMA,
        "command": report.command,
        "payload": report.payload,
        "warnings": list(report.warnings),
    }
    return json.dumps(doc, indent=2) + "\n"


_FAMILY_HEADERS = {"T": "T(t)", "D_t11": "D(1-2t,1,1)", "D_t10": "D(t,1,0)"}


def _special_text(kind: str, sp: dict) -> str:
    dim = sp["dimension"]
    if "at" in sp:
        if kind == "D_t11":
            return f"D({sp['at']},1,1) -> {dim}"
        if kind == "D_t10":
            return f"D({sp['at']},1,0) -> {dim}"
        return f"t={sp['at']} -> {dim}"
    mod = format_poly(strings_to_poly(sp["modulus"]), "s" if kind == "D_t11" else "t")
    if kind == "D_t11":
        return f"D(s,1,1), {mod} = 0 -> {dim}"
    if kind == "D_t10":
        return f"D(s,1,0), {mod} = 0 -> {dim}"
    return f"{mod} = 0 -> {dim}"


def _family_line(kind: str, rep: dict) -> str:
    specials = ", ".join(_special_text(kind, sp) for sp in rep["specials"]) or "-"
    return f"{_FAMILY_HEADERS[kind]} | generic {rep['generic']} | {specials}"


def render_text(report: Report) -> str:
    p = report.payload
    cmd = report.command
    lines: list[str] = []
    if cmd == "profile":
        lines.append(f"profile: {p['algebra']} (dim {p['dim']})")
        width = max(len(k) for k in p["fixed"])
        for key, dim in p["fixed"].items():
            lines.append(f"{key.ljust(width)} | {dim}")
        for kind in ("T", "D_t11", "D_t10"):
            lines.append(_family_line(kind, p["parametric"][kind]))
    elif cmd == "sweep":
        if "generic" in p["report"]:
            lines.append(f"sweep: {p['algebra']}")
            lines.append(_family_line(p["report"]["family"], p["report"]))
        else:
            r = p["report"]
            at = r["at"] if isinstance(r["at"], str) else format_poly(strings_to_poly(r["at"]["modulus"]))
            lines.append(f"evaluate: {p['algebra']} family {r['family']} at {at} -> {r['dimension']}")
    elif cmd == "space":
        lines.append(f"space: {p['space']} of {p['algebra']}")
        lines.append(f"dimension: {p['dimension']}")
        for vec in p["basis"]:
            lines.append("  [" + ", ".join(vec) + "]")
    elif cmd == "classify":
        label = p["label"] + (f"({p['parameter']})" if p["parameter"] is not None else "")
        lines.append(f"omega: {', '.join(p['omega'])}")
        lines.append(f"class: {label}")
    elif cmd == "obstruct":
        lines.append(f"obstruct: {p['source']} -> {p['target']}")
        if p["outcome"] == "excluded":
            w = p["witness"]
            if w["at"] is None:
                where = w["family"]
            elif w["at"] == GENERIC:
                where = f"{w['family']} generically"
            elif isinstance(w["at"], dict):
                where = f"{w['family']} at roots of {format_poly(strings_to_poly(w['at']['modulus']))}"
            else:
                where = f"{w['family']} at t={w['at']}"
            lines.append("outcome: excluded")
            lines.append(f"witness: {where}: {w['source_dim']} > {w['target_dim']}")
        else:
            lines.append("outcome: inconclusive (no obstruction found)")
    elif cmd == "validate":
        lines.append(f"validate: {p['algebra']} (law {p['law']})")
        for chk in p["checks"]:
            status = "pass" if chk["passed"] else "FAIL"
            extra = "" if chk["passed"] else f" at {tuple(chk['violation'])}: {chk['message']}"
            lines.append(f"{chk['check']}: {status}{extra}")
    elif cmd == "corpus":
        if "names" in p:
            lines.append("corpus algebras:")
            lines.extend(f"  {name}" for name in p["names"])
        else:
            return json.dumps(p["document"], indent=2) + "\n"
    else:
        raise ValueError(f"no text renderer for command {cmd!r}")
    for w in report.warnings:
        lines.append(f"warning: {w}")
    return "\n".join(lines) + "\n"


def render(report: Report, fmt: str) -> str:
    if fmt == "json":
        return render_json(report)
    if fmt == "text":
        return render_text(report)
    raise ValueError(f"unknown format {fmt!r}")
