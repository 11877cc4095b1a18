"""Command-line surface.

Construct observables, analyze POVM files for (pure-state) informational
completeness, inspect groups, and print the embedded minimal-outcome tables.
Machine-readable reports go to stdout as JSON; one-line human summaries go to
stderr.  Exit codes: 0 the command ran to completion (verdicts live in the
report), 2 invalid input or violated construction condition, 3 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, field

import numpy as np

from . import __version__
from . import constructions as cx
from . import group as grp
from . import povm as pv
from . import rep as rp
from .errors import CovPovmError, UnknownDimensionError


@dataclass
class Report:
    command: str
    inputs: dict
    verdicts: dict
    provenance: dict = field(default_factory=dict)
    tool_version: str = __version__


def _emit(report: Report, summary: str) -> None:
    print(json.dumps(asdict(report), indent=2))
    print(summary, file=sys.stderr)


def _complex_pair(z: complex) -> list:
    return [float(np.real(z)), float(np.imag(z))]


def _vector_pairs(v) -> list:
    return [_complex_pair(z) for z in np.asarray(v)]


def _parse_floats(text: str, n: int, what: str) -> list:
    parts = [p for p in text.split(",") if p != ""]
    if len(parts) != n:
        raise CovPovmError(f"{what} needs {n} comma-separated numbers, got {text!r}")
    try:
        return [float(p) for p in parts]
    except ValueError as exc:
        raise CovPovmError(f"{what}: {exc}") from exc


def _verdict_dict(verdict: pv.PicVerdict) -> dict:
    out = {
        "status": verdict.status,
        "complement_dim": verdict.complement_dim,
        "residual": verdict.residual,
    }
    if verdict.witness is not None:
        psi, phi = verdict.witness
        out["witness"] = {"psi": _vector_pairs(psi), "phi": _vector_pairs(phi)}
    else:
        out["witness"] = None
    return out


def _validation_dict(report: pv.PovmValidation) -> dict:
    return {
        "hermiticity_defect": report.hermiticity_defect,
        "min_eigenvalue": report.min_eigenvalue,
        "normalization_defect": report.normalization_defect,
        "passed": report.passed,
    }


def _write_povm(povm: pv.Povm, path: str) -> None:
    try:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(pv.povm_to_json(povm), fh, indent=2)
            fh.write("\n")
    except OSError as exc:
        raise _IoFailure(f"cannot write {path}: {exc}") from exc


class _IoFailure(Exception):
    pass


# --- construct -----------------------------------------------------------------

def _cmd_construct(args) -> int:
    inputs: dict = {"kind": args.kind, "out": args.out}
    if args.kind == "wh":
        if args.dim is None:
            raise CovPovmError("construct wh needs --dim")
        inputs.update(dim=args.dim, rng_seed=args.rng_seed, mixed=args.mixed)
        if args.mixed:
            seed = np.eye(args.dim, dtype=complex) / args.dim ** 2
        else:
            seed = cx.default_wh_seed(args.dim, args.rng_seed)
        povm, _rep = cx.build_weyl_heisenberg(
            cx.WhParams(args.dim, seed, require_ic=not args.mixed)
        )
        provenance = {"construction": "weyl-heisenberg", "parameters": dict(inputs)}
    elif args.kind in ("quat3", "dihedral3"):
        choice = "quaternion" if args.kind == "quat3" else "dihedral"
        params = cx.default_pic3_params(choice)
        if args.lam is not None:
            params.lam = args.lam
        if args.alpha is not None:
            params.alpha = tuple(_parse_floats(args.alpha, 3, "--alpha"))
        if args.v is not None:
            re1, im1, re2, im2 = _parse_floats(args.v, 4, "--v")
            params.v = (complex(re1, im1), complex(re2, im2))
        inputs.update(
            lam=params.lam,
            alpha=list(params.alpha),
            v=[_complex_pair(params.v[0]), _complex_pair(params.v[1])],
            bypass_conditions=args.bypass_conditions,
        )
        povm, _rep, _t = cx.build_pic3(
            params, enforce_conditions=not args.bypass_conditions
        )
        provenance = {"construction": args.kind, "parameters": dict(inputs)}
    elif args.kind == "rank1":
        alpha = (
            tuple(_parse_floats(args.alpha, 3, "--alpha"))
            if args.alpha is not None
            else (1 / np.sqrt(192),) * 3
        )
        inputs.update(gamma=args.gamma, alpha=list(alpha))
        povm = cx.build_rank1_pic3(args.gamma, alpha)
        provenance = {"construction": "rank1", "parameters": dict(inputs)}
    else:
        raise CovPovmError(f"unknown construction kind {args.kind!r}")

    _write_povm(povm, args.out)
    validation = pv.validate(povm)
    span = pv.operator_span(povm)
    report = Report(
        command="construct",
        inputs=inputs,
        verdicts={
            "outcomes": len(povm),
            "dim": povm.dim,
            "span_dim": span.dim,
            "validation": _validation_dict(validation),
        },
        provenance=provenance,
    )
    _emit(report, f"wrote {len(povm)}-outcome observable to {args.out}")
    return 0


# --- analyze -------------------------------------------------------------------

def _cmd_analyze(args) -> int:
    try:
        with open(args.file, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise _IoFailure(f"cannot read {args.file}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise CovPovmError(
            f"{args.file} is not valid JSON: line {exc.lineno}, column {exc.colno}"
        ) from exc
    povm = pv.povm_from_json(doc)
    span = pv.operator_span(povm)
    verdicts: dict = {
        "dim": povm.dim,
        "outcomes": len(povm),
        "span_dim": span.dim,
        "complement_dim": povm.dim ** 2 - span.dim,
        "validation": _validation_dict(pv.validate(povm)),
        "ic": pv.is_ic(povm),
    }
    summary = f"{args.file}: span {span.dim}/{povm.dim ** 2}, ic={verdicts['ic']}"
    if args.pic:
        settings = pv.FalsifierSettings(
            restarts=args.falsifier_restarts, rng_seed=args.rng_seed
        )
        verdict = pv.check_pic(povm, settings)
        verdicts["pic"] = _verdict_dict(verdict)
        summary += f", pic={verdict.status}"
    report = Report(
        command="analyze",
        inputs={
            "file": args.file,
            "pic": args.pic,
            "ic": args.ic,
            "rng_seed": args.rng_seed,
            "falsifier_restarts": args.falsifier_restarts,
            "jobs": args.jobs,
        },
        verdicts=verdicts,
        provenance={"source": args.file},
    )
    _emit(report, summary)
    return 0


# --- group ---------------------------------------------------------------------

def _cmd_group(args) -> int:
    group = grp.build_group(args.kind)
    verdicts: dict = {
        "order": group.order,
        "abelian": group.is_abelian(),
        "names": list(group.names),
        "order_census": {str(k): v for k, v in sorted(group.order_census().items())},
    }
    try:
        dual = rp.irreps_of(group)
        verdicts["irreps"] = [
            {
                "name": irr.name,
                "dim": irr.dim,
                "character": _vector_pairs(irr.character),
            }
            for irr in dual
        ]
    except NotImplementedError:
        verdicts["irreps"] = None
    summary = f"{args.kind}: order {group.order}, abelian={group.is_abelian()}"
    exit_code = 0
    if args.cosets is not None:
        members = [group.index_of(name.strip()) for name in args.cosets.split(",")]
        sub = grp.subgroup_generated(group, members)
        cosets = grp.coset_space(group, sub)
        verdicts["subgroup"] = list(sub.names())
        verdicts["coset_count"] = cosets.size
        summary += f", {cosets.size} cosets"
        if args.obstruction:
            try:
                report = cx.prime_index_obstruction(group, sub)
                verdicts["obstruction"] = asdict(report)
                summary += f", obstruction generator {report.generator_name}"
            except CovPovmError as exc:
                scan = grp.find_cyclic_transitive_subgroup(group, sub)
                found = None if scan is None else list(scan.names())
                verdicts["obstruction"] = {
                    "error": str(exc),
                    "cyclic_transitive_subgroup": found,
                }
                index = group.order // sub.order
                summary += f"; index {index} not prime"
                if scan is None:
                    summary += "; no cyclic transitive subgroup"
                exit_code = 2
    elif args.obstruction:
        raise CovPovmError("--obstruction needs --cosets to fix the subgroup")
    report = Report(
        command="group",
        inputs={"kind": args.kind, "cosets": args.cosets, "obstruction": args.obstruction},
        verdicts=verdicts,
        provenance={"construction": "group-table"},
    )
    _emit(report, summary)
    return exit_code


# --- tables ----------------------------------------------------------------------

def _cmd_tables(args) -> int:
    if args.dim is not None:
        try:
            rec = cx.minimal_pic_outcomes(args.dim)
            verdicts = {"record": asdict(rec), "known": True}
            summary = f"dim {args.dim}: minimal outcomes {rec.min_outcomes}"
        except UnknownDimensionError as exc:
            low, high = exc.bound
            verdicts = {
                "record": None,
                "known": False,
                "general_bound": [low, high],
            }
            summary = f"dim {args.dim}: not tabulated, bound [{low}, {high}]"
    else:
        verdicts = {
            "min_outcomes": {
                str(d): list(v) if isinstance(v, tuple) else v
                for d, v in sorted(cx.MIN_OUTCOMES_BY_DIM.items())
            },
            "prime_dimensions": {
                str(d): v for d, v in sorted(cx.PRIME_MIN_OUTCOMES_BY_DIM.items())
            },
        }
        summary = (
            f"{len(cx.MIN_OUTCOMES_BY_DIM)} tabulated dimensions, "
            f"{len(cx.PRIME_MIN_OUTCOMES_BY_DIM)} with prime minima"
        )
    report = Report(
        command="tables",
        inputs={"dim": args.dim},
        verdicts=verdicts,
        provenance={"construction": "embedded-tables"},
    )
    _emit(report, summary)
    return 0


# --- entry point -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="covpovm",
        description="construct and analyze finite-group-covariant quantum observables",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("construct", help="build an observable and write it to a file")
    c.add_argument("kind", choices=["wh", "quat3", "dihedral3", "rank1"])
    c.add_argument("-o", "--out", required=True, help="output POVM JSON path")
    c.add_argument("--default", action="store_true", help="use default parameters")
    c.add_argument("--dim", type=int, default=None, help="dimension (wh only)")
    c.add_argument("--rng-seed", type=int, default=0)
    c.add_argument("--mixed", action="store_true",
                   help="use the maximally mixed seed (wh only; not IC)")
    c.add_argument("--lambda", dest="lam", type=float, default=None,
                   help="scale of the complement generator (quat3/dihedral3)")
    c.add_argument("--alpha", default=None, help="comma-separated alpha components")
    c.add_argument("--v", default=None, help="v as re1,im1,re2,im2 (quat3/dihedral3)")
    c.add_argument("--gamma", type=float, default=0.0, help="phase (rank1 only)")
    c.add_argument("--bypass-conditions", action="store_true",
                   help="skip the parameter preconditions (quat3/dihedral3)")
    c.set_defaults(func=_cmd_construct)

    a = sub.add_parser("analyze", help="analyze a POVM file")
    a.add_argument("file")
    a.add_argument("--pic", action="store_true", help="run the pure-state analysis")
    a.add_argument("--ic", action="store_true", help="report informational completeness")
    a.add_argument("--rng-seed", type=int, default=0)
    a.add_argument("--falsifier-restarts", type=int, default=64)
    a.add_argument("--jobs", type=int, default=1,
                   help="accepted for compatibility; restarts run sequentially")
    a.set_defaults(func=_cmd_analyze)

    g = sub.add_parser("group", help="inspect a group and its representations")
    g.add_argument("kind", help="cyclic:N, quaternion, dihedral8, or product(A,B)")
    g.add_argument("--cosets", default=None,
                   help="comma-separated element names generating the subgroup")
    g.add_argument("--obstruction", action="store_true",
                   help="run the prime-index obstruction for the chosen subgroup")
    g.set_defaults(func=_cmd_group)

    t = sub.add_parser("tables", help="print the minimal-outcome tables")
    t.add_argument("--dim", type=int, default=None)
    t.set_defaults(func=_cmd_tables)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _IoFailure as exc:
        print(str(exc), file=sys.stderr)
        print(json.dumps({"command": args.command, "error": str(exc)}, indent=2))
        return 3
    except (CovPovmError, NotImplementedError) as exc:
        print(str(exc), file=sys.stderr)
        print(json.dumps({"command": args.command, "error": str(exc)}, indent=2))
        return 2


if __name__ == "__main__":
    sys.exit(main())
