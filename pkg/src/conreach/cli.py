"""Command-line front end: parse system files, run analyses, emit reports.

Exit codes: 0 decided (or plain success), 2 inconclusive, 1 error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from conreach import decide
from conreach import polyhedra as ph
from conreach import setmaps as sm
from conreach.exactla import RationalFormatError
from conreach.geomctrl import Sigma, dual_system, kl_subspaces
from conreach.polyhedra import Polyhedron

EXIT_DECIDED = 0
EXIT_ERROR = 1
EXIT_INCONCLUSIVE = 2

MAP_TAGS = ("F", "Fcon", "Frec", "Fpolar", "Fminus", "Fb")


class SystemFileError(ValueError):
    """Raised with file/field context when a system file cannot be parsed."""


def parse_system(path: str) -> tuple[Sigma, Polyhedron, dict]:
    """Load and dimension-check a system file.

    The file holds {"sigma": {...}, "constraint": {...}, "options": {...}};
    rationals are canonical "p/q" strings.  Defaults: cap 25, tol 1e-9.
    """
    try:
        with open(path, "r", encoding="utf-8") as handle:
            raw = handle.read()
    except OSError as err:
        raise SystemFileError(f"{path}: {err.strerror or err}") from err
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as err:
        raise SystemFileError(f"{path}: malformed JSON at line {err.lineno}, "
                              f"column {err.colno}: {err.msg}") from err
    if not isinstance(data, dict) or "sigma" not in data or "constraint" not in data:
        raise SystemFileError(f"{path}: expected top-level keys 'sigma' and 'constraint'")
    try:
        sigma = Sigma.from_dict(data["sigma"])
    except RationalFormatError as err:
        raise SystemFileError(f"{path}: sigma: {err}") from err
    except (KeyError, ValueError, TypeError) as err:
        raise SystemFileError(f"{path}: sigma: {err}") from err
    try:
        constraint = Polyhedron.from_dict(data["constraint"])
    except RationalFormatError as err:
        raise SystemFileError(f"{path}: constraint: {err}") from err
    except (KeyError, ValueError, TypeError) as err:
        raise SystemFileError(f"{path}: constraint: {err}") from err
    if constraint.dim != sigma.s:
        raise SystemFileError(f"{path}: constraint dimension {constraint.dim} differs "
                              f"from the output dimension {sigma.s}")
    options = dict(data.get("options") or {})
    options.setdefault("cap", _default_cap())
    options.setdefault("tol", 1e-9)
    try:
        options["cap"] = int(options["cap"])
        options["tol"] = float(options["tol"])
    except (TypeError, ValueError) as err:
        raise SystemFileError(f"{path}: options: {err}") from err
    if options["cap"] <= 0:
        raise SystemFileError(f"{path}: options.cap must be positive")
    return sigma, constraint, options


def system_to_dict(sigma: Sigma, constraint: Polyhedron, options: dict) -> dict:
    return {"sigma": sigma.to_dict(), "constraint": constraint.to_dict(),
            "options": {"cap": options["cap"], "tol": options["tol"]}}


def _default_cap() -> int:
    env = os.environ.get("CONREACH_CAP")
    if env is not None:
        try:
            value = int(env)
            if value > 0:
                return value
        except ValueError:
            pass
    return decide.DEFAULT_CAP


def _build_map(sigma: Sigma, constraint: Polyhedron, tag: str) -> sm.ConstrainedMap:
    if tag in sm.PRIMAL_TAGS:
        return sm.build_primal(sigma, constraint, tag)
    if tag in sm.DUAL_TAGS:
        return sm.build_dual(sigma, constraint, tag)
    raise ValueError(f"unknown map tag {tag!r}")


def run_command(cmd: str, sigma: Sigma, constraint: Polyhedron, options: dict,
                steps: int | None = None, map_tag: str = "F") -> tuple[dict, int]:
    """Execute one subcommand; returns (report dict, exit code)."""
    cap = options["cap"]
    tol = options["tol"]
    if cmd == "analyze":
        report = decide.analyze(sigma, constraint, cap=cap, tol=tol)
        status = report.verdict.status
        code = EXIT_INCONCLUSIVE if status == decide.INCONCLUSIVE else EXIT_DECIDED
        return report.to_dict(), code
    if cmd == "classify":
        tag = decide.classify(sigma, constraint)
        return {"case": tag.to_dict()}, EXIT_DECIDED
    if cmd == "subspaces":
        return {"subspaces": kl_subspaces(sigma).to_dict()}, EXIT_DECIDED
    if cmd == "check-conditions":
        conditions = decide.check_conditions(sigma, constraint, tol=tol)
        return {"conditions": {k: v.to_dict() for k, v in conditions.items()}}, EXIT_DECIDED
    if cmd == "oracle-compare":
        report = decide.oracle_compare(sigma, constraint, cap=cap, tol=tol)
        code = EXIT_DECIDED if report.consistent else EXIT_ERROR
        return report.to_dict(), code
    if cmd in ("reach-set", "feasible-set"):
        if steps is None or steps < 1:
            raise ValueError("--steps must be a positive horizon")
        if map_tag not in MAP_TAGS:
            raise ValueError(f"unknown map tag {map_tag!r}")
        mapping = _build_map(sigma, constraint, map_tag)
        mode = "R" if cmd == "reach-set" else "X"
        sequence = sm.reach_feas(mapping, steps, mode, method="iterate")
        final = sequence[-1]
        return {"map": map_tag, "mode": mode, "steps": steps,
                "set": final.to_dict(include_vrep=True),
                "sequence": [p.to_dict() for p in sequence]}, EXIT_DECIDED
    raise ValueError(f"unknown command {cmd!r}")


def emit_report(report: dict, fmt: str = "text") -> str:
    if fmt == "json":
        return json.dumps(report, indent=2)
    if fmt == "text":
        return _render_text(report)
    raise ValueError(f"unknown format {fmt!r}")


def _render_text(report: dict) -> str:
    lines: list[str] = []
    if "case" in report and "verdict" not in report:
        lines.append(f"case: {report['case']['variant']}")
        lines.append(f"evidence: {json.dumps(report['case']['evidence'])}")
    if "verdict" in report:
        verdict = report["verdict"]
        lines.append(f"verdict: {verdict['status']}")
        lines.append(f"route: {verdict['route']}")
        lines.append(f"case: {report['case']['variant']}")
        for key, cond in report.get("conditions", {}).items():
            lines.append(f"condition {key}: {'holds' if cond['holds'] else 'fails'}")
        for cert in verdict.get("certificates", []):
            lines.append(f"certificate: lambda={cert['lambda']} q={cert['q']} "
                         f"u={cert['u']} cone={cert['cone']} exact={cert['exact']}")
        if verdict.get("witness"):
            lines.append(f"witness: {json.dumps(verdict['witness'])}")
        for mode, prof in report.get("sequences", {}).items():
            stab = prof.get("stabilized_at")
            tagline = f"stabilized at {stab}" if stab else "not stabilized"
            if prof.get("contracting"):
                tagline += " (strictly contracting)"
            lines.append(f"sequence {mode}: {tagline}")
        for note in report.get("meta", {}).get("notes", []):
            lines.append(f"note: {note}")
    elif "conditions" in report:
        for key, cond in report["conditions"].items():
            lines.append(f"condition {key}: {'holds' if cond['holds'] else 'fails'}")
    elif "subspaces" in report:
        subs = report["subspaces"]
        for key in ("vstar", "tstar", "rstar", "ksub", "lsub"):
            lines.append(f"{key}: dim {len(subs[key][0]) if subs[key] else 0} "
                         f"basis {json.dumps(subs[key])}")
        lines.append(f"right_invertible: {subs['right_invertible']}")
        lines.append(f"left_invertible: {subs['left_invertible']}")
    elif "set" in report:
        lines.append(f"map: {report['map']}  mode: {report['mode']}  steps: {report['steps']}")
        lines.append(json.dumps(report["set"], indent=2))
    elif "consistent" in report:
        lines.append(f"consistent: {report['consistent']}")
        lines.append(f"spectral: {report['spectral_status']}")
        lines.append(f"direct: {report['direct_status']}")
        lines.append(f"duality_ok: {report['duality_ok']}")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="conreach",
        description="Reachability certification for discrete-time linear systems "
                    "with polyhedral output constraints.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("analyze", "classify", "subspaces", "check-conditions", "oracle-compare"):
        p = sub.add_parser(name)
        _common_args(p)
    for name in ("reach-set", "feasible-set"):
        p = sub.add_parser(name)
        _common_args(p)
        p.add_argument("--steps", type=int, required=True, help="iteration horizon")
        p.add_argument("--map", dest="map_tag", default="F", choices=MAP_TAGS)
    return parser


def _common_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("system", help="path to a system JSON file")
    p.add_argument("--cap", type=int, default=None, help="iteration cap")
    p.add_argument("--tol", type=float, default=None, help="floating tolerance")
    p.add_argument("--format", dest="fmt", default="text", choices=("json", "text"))


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        sigma, constraint, options = parse_system(args.system)
        if args.cap is not None:
            if args.cap <= 0:
                raise ValueError("--cap must be positive")
            options["cap"] = args.cap
        if args.tol is not None:
            options["tol"] = args.tol
        report, code = run_command(args.command, sigma, constraint, options,
                                   steps=getattr(args, "steps", None),
                                   map_tag=getattr(args, "map_tag", "F"))
    except (SystemFileError, decide.ValidationError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_ERROR
    sys.stdout.write(emit_report(report, args.fmt))
    return code


if __name__ == "__main__":
    sys.exit(main())
