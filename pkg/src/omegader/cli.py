"""Command-line interface.

Commands: validate, profile, space, sweep, classify, obstruct, corpus.
Algebras are referenced as ``corpus:NAME`` or as paths to algebra document
files.  Exit codes: 0 success (inconclusive obstructions included), 1
validation failure or precondition error, 2 usage / IO / document error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import report as rp
from .algebras import (
    ANTI,
    COMM,
    Algebra,
    corpus,
    corpus_document,
    corpus_names,
    document_from_algebra,
    load_algebra,
    load_document,
    validate,
)
from .errors import DocumentError, PreconditionError
from .profiles import evaluate_at, obstruct, profile, sweep
from .scalars import Poly, ReducibleModulusError, parse_rational
from .spaces import (
    OmegaSpec,
    OperatorSpace,
    PairSpace,
    TripleSpace,
    canonical_class,
    named_space,
    omega_space,
)

_FAMILY_FLAG = {"t": "T", "d11": "D_t11", "d10": "D_t10"}


@dataclass(frozen=True)
class Invocation:
    command: str
    inputs: tuple[str, ...]
    params: tuple[tuple[str, Fraction], ...] = ()
    space: str | None = None
    omega: OmegaSpec | None = None
    family: str | None = None
    at: Fraction | None = None
    at_modulus: Poly | None = None
    fmt: str = "text"
    seed: int | None = None
    jacobi: bool = False


def _param(text: str) -> tuple[str, Fraction]:
    name, sep, value = text.partition("=")
    if not sep or not name:
        raise argparse.ArgumentTypeError(f"--param wants name=p/q, got {text!r}")
    try:
        return name.strip(), parse_rational(value)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _omega(text: str) -> OmegaSpec:
    parts = text.split(",")
    if len(parts) != 6:
        raise argparse.ArgumentTypeError("--omega wants six rationals a1,a2,a3,a4,a5,a6")
    try:
        return OmegaSpec.of(*(parse_rational(p) for p in parts))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _modulus(text: str) -> Poly:
    try:
        return Poly([parse_rational(p) for p in text.split(",")])
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="omegader",
        description="Spaces of extended derivations, their classification, and degeneration obstructions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, inputs=0, names=()):
        for name in names:
            p.add_argument(name)
        p.add_argument("--param", action="append", type=_param, default=[],
                       help="parameter binding name=p/q (repeatable)")
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--seed", type=int, default=None)
        return p

    p = common(sub.add_parser("validate", help="check product laws"), names=("algebra",))
    p.add_argument("--jacobi", action="store_true", help="also check the Jacobi identity")

    common(sub.add_parser("profile", help="full invariant profile"), names=("algebra",))

    p = common(sub.add_parser("space", help="solve one derivation space"), names=("algebra",))
    p.add_argument("--space", help="der|qc|c|nder|qder|p|der0|d:a,b,c|t:s")
    p.add_argument("--omega", type=_omega, help="six rationals a1,...,a6 row-major")

    p = common(sub.add_parser("sweep", help="parametric family analysis"), names=("algebra",))
    p.add_argument("--family", choices=sorted(_FAMILY_FLAG), required=True)
    p.add_argument("--at", type=parse_rational, help="evaluate at a rational point instead")
    p.add_argument("--at-modulus", type=_modulus,
                   help="evaluate over Q[t]/(p), coefficients lowest-first")

    p = common(sub.add_parser("classify", help="canonical class of a constraint matrix"))
    p.add_argument("--omega", type=_omega, required=True)

    common(sub.add_parser("obstruct", help="degeneration obstruction search"),
           names=("source", "target"))

    common(sub.add_parser("corpus", help="list built-ins or emit one as a document")
           ).add_argument("name", nargs="?")

    return parser


def parse_invocation(argv: list[str]) -> Invocation:
    """Parse argv into an Invocation; exits with code 2 on usage errors."""
    args = _build_parser().parse_args(argv)
    inputs: tuple[str, ...] = ()
    if args.command in ("validate", "profile", "space", "sweep"):
        inputs = (args.algebra,)
    elif args.command == "obstruct":
        inputs = (args.source, args.target)
    elif args.command == "corpus" and args.name:
        inputs = (args.name,)
    return Invocation(
        command=args.command,
        inputs=inputs,
        params=tuple(args.param),
        space=getattr(args, "space", None),
        omega=getattr(args, "omega", None),
        family=_FAMILY_FLAG[args.family] if getattr(args, "family", None) else None,
        at=getattr(args, "at", None),
        at_modulus=getattr(args, "at_modulus", None),
        fmt=args.format,
        seed=args.seed,
        jacobi=getattr(args, "jacobi", False),
    )


def _load(ref: str, params: dict[str, Fraction]) -> Algebra:
    if ref.startswith("corpus:"):
        return corpus(ref[len("corpus:"):], params)
    return load_algebra(load_document(ref), params)


def _flatten_space(space) -> list[tuple]:
    if isinstance(space, TripleSpace):
        return [t.A.flatten() + t.B.flatten() + t.C.flatten() for t in space.basis]
    if isinstance(space, PairSpace):
        return [p.first.flatten() + p.second.flatten() for p in space.basis]
    if isinstance(space, OperatorSpace):
        return [op.flatten() for op in space.basis]
    raise AssertionError(type(space))


def run(inv: Invocation) -> tuple[rp.Report, int]:
    """Execute an invocation; returns the report and the exit code."""
    params = dict(inv.params)
    try:
        if inv.command == "validate":
            a = _load(inv.inputs[0], params)
            checks = []
            if a.law in (ANTI, COMM):
                checks.append(validate(a, a.law))
            if inv.jacobi:
                checks.append(validate(a, "jacobi"))
            payload = rp.validation_to_json(a.name, a.law, checks)
            code = 0 if all(c.passed for c in checks) else 1
            return rp.Report("validate", payload), code

        if inv.command == "profile":
            a = _load(inv.inputs[0], params)
            prof = profile(a)
            warnings = tuple(
                f"{kind}: unresolved factor {', '.join(str(u) for u in rep.unresolved)}"
                for kind, rep in prof.parametric
                if rep.unresolved
            )
            return rp.Report("profile", rp.profile_to_json(prof), warnings), 0

        if inv.command == "space":
            a = _load(inv.inputs[0], params)
            if (inv.space is None) == (inv.omega is None):
                raise DocumentError("space needs exactly one of --space or --omega")
            if inv.omega is not None:
                space = omega_space(a, inv.omega)
            else:
                try:
                    space = named_space(a, inv.space)
                except ValueError as exc:
                    raise DocumentError(str(exc)) from exc
            payload = rp.space_to_json(a.name, space.spec, space.dimension, _flatten_space(space))
            return rp.Report("space", payload), 0

        if inv.command == "sweep":
            a = _load(inv.inputs[0], params)
            if inv.at is not None and inv.at_modulus is not None:
                raise DocumentError("sweep takes at most one of --at / --at-modulus")
            if inv.at is not None or inv.at_modulus is not None:
                point = inv.at if inv.at is not None else inv.at_modulus
                dim = evaluate_at(a, inv.family, point)
                payload = {"algebra": a.name,
                           "report": rp.evaluation_to_json(a.name, inv.family, point, dim)}
                return rp.Report("sweep", payload), 0
            rep = sweep(a, inv.family)
            warnings = tuple(
                f"{inv.family}: unresolved factor {u}" for u in rep.unresolved
            )
            payload = {"algebra": a.name, "report": rp.parametric_to_json(rep)}
            return rp.Report("sweep", payload, warnings), 0

        if inv.command == "classify":
            cls = canonical_class(inv.omega)
            return rp.Report("classify", rp.classify_to_json(inv.omega, cls)), 0

        if inv.command == "obstruct":
            src = _load(inv.inputs[0], params)
            tgt = _load(inv.inputs[1], params)
            verdict = obstruct(src, tgt)
            return rp.Report("obstruct", rp.verdict_to_json(verdict), verdict.warnings), 0

        if inv.command == "corpus":
            if not inv.inputs:
                return rp.Report("corpus", rp.corpus_list_to_json(corpus_names())), 0
            name = inv.inputs[0]
            doc = corpus_document(name)
            if params:
                doc = document_from_algebra(load_algebra(doc, params))
            return rp.Report("corpus", rp.document_payload(doc)), 0

        raise AssertionError(inv.command)
    except DocumentError as exc:
        return rp.Report(inv.command, {"error": str(exc)}), 2
    except (PreconditionError, ReducibleModulusError) as exc:
        return rp.Report(inv.command, {"error": str(exc)}), 1


def main(argv: list[str] | None = None) -> int:
    inv = parse_invocation(sys.argv[1:] if argv is None else argv)
    report, code = run(inv)
    if "error" in report.payload:
        print(f"error: {report.payload['error']}", file=sys.stderr)
    else:
        sys.stdout.write(rp.render(report, inv.fmt))
    return code


if __name__ == "__main__":
    sys.exit(main())
