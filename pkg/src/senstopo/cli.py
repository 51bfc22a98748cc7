"""``senstopo`` command line.

Every command prints one JSON report on stdout::

    {"command": [...], "inputs": {path: sha256}, "result": {...}, "warnings": [...]}

Exit status: 0 success / property holds, 1 property fails, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
import time
import warnings
from pathlib import Path

from . import dynamic, geometry, scan
from .evaluate import EvaluationError, valid
from .formats import (
    dynamic_from_dict, model_from_dict, model_to_dict, readings_from_dict, scene_from_dict,
)
from .geometry import GeometryError
from .model import ModelError
from .parser import ParseError, parse
from .syntax import SortError, free_vars, is_temporal, typecheck

log = logging.getLogger("senstopo")

DEFAULT_BUDGET = 10_000


class UsageError(Exception):
    pass


class _Run:
    """Collects the pieces of a run report."""

    def __init__(self, argv):
        self.argv = list(argv)
        self.inputs: dict[str, str] = {}
        self.warnings: list[str] = []

    def load(self, path: str):
        p = Path(path)
        try:
            raw = p.read_bytes()
        except OSError as exc:
            raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
        self.inputs[path] = hashlib.sha256(raw).hexdigest()
        try:
            return json.loads(raw)
        except json.JSONDecodeError as exc:
            raise UsageError(f"{path}: invalid JSON ({exc})") from exc

    def model(self, path: str):
        return model_from_dict(self.load(path))

    def report(self, result) -> dict:
        return {"command": self.argv, "inputs": self.inputs, "result": result, "warnings": self.warnings}


def _policy(args) -> scan.Policy:
    return scan.make_policy(args.policy, args.seed)


def _formula_text(args, run: _Run) -> str:
    if args.formula_file:
        p = Path(args.formula_file)
        try:
            raw = p.read_bytes()
        except OSError as exc:
            raise UsageError(f"cannot read {p}: {exc.strerror}") from exc
        run.inputs[args.formula_file] = hashlib.sha256(raw).hexdigest()
        return raw.decode().strip()
    if args.formula is None:
        raise UsageError("give a formula or --formula-file")
    return args.formula


def _closed(f, sensors, text):
    fv = free_vars(f)
    if fv:
        raise UsageError(f"formula has free variable(s) {', '.join(sorted(fv))}: {text}")
    typecheck(f, sensors)


# -- commands -------------------------------------------------------------------------


def cmd_validate(args, run):
    data = run.load(args.model)
    try:
        model_from_dict(data)
    except ModelError as exc:
        return {"ok": False, "violations": str(exc).split("; ")}, 1
    return {"ok": True, "violations": []}, 0


def cmd_check(args, run):
    m = run.model(args.model)
    text = _formula_text(args, run)
    f = parse(text)
    if is_temporal(f):
        raise UsageError("temporal formulas need a dynamic model; use 'dyn check'")
    _closed(f, m.sensors, text)
    holds = valid(m, f)
    return {"holds": holds}, 0 if holds else 1


def cmd_reduce(args, run):
    m = run.model(args.model)
    if m.is_empty:
        raise UsageError("cannot reduce the empty model")
    policy = _policy(args)
    if args.mode == "destructive":
        trace = []
        out = m
        for s, out in scan.reduction_steps(m, policy):
            trace.append({"removed": s})
    else:
        if m.is_marked:
            raise UsageError("marking mode expects a model without marks")
        trace = []
        final = m
        for s, final in scan.marking_steps(m, policy):
            trace.append({"unnecessary": s})
        out = final.with_marks(final.sensors - final.unnecessary, final.unnecessary)
    return {"mode": args.mode, "policy": args.policy, "model": model_to_dict(out), "trace": trace}, 0


def cmd_overlap(args, run):
    m = run.model(args.model)
    if m.is_empty:
        raise UsageError("overlap degree of the empty model is undefined")
    return {"m": scan.max_overlap(m), "marked": m.is_marked}, 0


def cmd_estimate(args, run):
    m = run.model(args.model)
    counts = readings_from_dict(run.load(args.readings))
    unknown = sorted(set(counts) - m.sensors)
    if unknown:
        raise UsageError(f"readings for unknown sensor(s) {', '.join(unknown)}")
    if m.is_empty:
        raise UsageError("cannot estimate over the empty model")
    if args.all_irreducibles:
        found = scan.explore_irreducibles(m.unmarked(), args.budget)
        if found.truncated:
            run.warnings.append(f"enumeration stopped after {found.nodes} nodes")
        estimates = []
        for r in found.models:
            e = scan.estimate(counts, r).as_dict()
            e["sensors"] = r.sorted_sensors()
            estimates.append(e)
        return {"estimates": estimates, "truncated": found.truncated}, 0
    if args.mode == "marking" and m.is_marked:
        reduced = m
    else:
        reduced, _ = scan.scan(counts, m, args.mode, _policy(args))
    result = scan.estimate(counts, reduced).as_dict()
    result["retained"] = sorted(scan.retained_sensors(reduced))
    return result, 0


def cmd_irreducibles(args, run):
    m = run.model(args.model)
    if m.is_empty:
        raise UsageError("cannot reduce the empty model")
    found = scan.explore_irreducibles(m.unmarked(), args.budget)
    if found.truncated:
        run.warnings.append(f"enumeration stopped after {found.nodes} nodes")
    return {
        "count": len(found.models),
        "models": [model_to_dict(r) for r in found.models],
        "truncated": found.truncated,
    }, 0


def _scene(args, run):
    try:
        return scene_from_dict(run.load(args.scene))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, (GeometryError, UsageError)):
            raise
        raise UsageError(f"{args.scene}: malformed scene ({exc})") from exc


def cmd_ingest(args, run):
    scene = _scene(args, run)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", geometry.TangencyWarning)
        m = geometry.extract_topology(scene, args.resolution, args.epsilon)
        check = geometry.verify_resolution(scene, args.resolution, args.epsilon) if args.verify_resolution else None
    seen = []
    for w in caught:
        if str(w.message) not in seen:
            seen.append(str(w.message))
    run.warnings.extend(seen)
    result = {"model": model_to_dict(m)}
    if check is not None:
        result["verification"] = check
    return result, 0


def cmd_targets(args, run):
    scene = _scene(args, run)
    counts = geometry.count_targets(scene)
    return {"counts": {s: counts[s] for s in sorted(counts)}, "targets": len(scene.targets)}, 0


def cmd_dyn(args, run):
    data = run.load(args.model)
    d = dynamic_from_dict(data, Path(args.model).parent)
    if args.action == "validate-axioms":
        violations = dynamic.validate_axioms(d)
        return {"ok": not violations, "violations": [v.as_dict() for v in violations]}, 0 if not violations else 1
    if args.action == "remark":
        marked = dynamic.remark_worlds(d, _policy(args))
        return {"worlds": {w: model_to_dict(m) for w, m in marked.items()}}, 0
    text = _formula_text(args, run)
    f = parse(text)
    _closed(f, d.sensors, text)
    world = args.world if args.world is not None else d.worlds[0]
    if world not in d.assign:
        raise UsageError(f"unknown world {world!r}")
    verdict = dynamic.check_state(d, world, f, engine=args.engine, budget=args.budget)
    if verdict.truncated:
        run.warnings.append("lasso enumeration hit its node budget; the answer may be wrong")
    result = {"world": world, **verdict.as_dict()}
    return result, 0 if verdict.holds else 1


# -- argument parsing --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    def global_opts(q, suppress):
        # subcommands repeat the global flags; their defaults must not clobber the top-level ones
        dflt = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
        q.add_argument("--seed", type=int, default=dflt(0), help="seed for the seeded-random policy")
        q.add_argument("--format", choices=["json"], default=dflt("json"))
        q.add_argument("--timing", action="store_true", default=dflt(False), help="add elapsed milliseconds")
        return q

    common = global_opts(argparse.ArgumentParser(add_help=False), suppress=True)
    p = global_opts(argparse.ArgumentParser(prog="senstopo", description=__doc__.splitlines()[0]), suppress=False)
    sub = p.add_subparsers(dest="command", required=True)

    def policy_opts(q):
        q.add_argument("--mode", choices=["destructive", "marking"], default="destructive")
        q.add_argument("--policy", choices=scan.POLICIES, default="lexicographic-first")

    q = sub.add_parser("validate", parents=[common], help="check a model file for well-formedness")
    q.add_argument("model")
    q.set_defaults(func=cmd_validate)

    q = sub.add_parser("check", parents=[common], help="model-check a closed formula")
    q.add_argument("model")
    q.add_argument("formula", nargs="?")
    q.add_argument("--formula-file")
    q.set_defaults(func=cmd_check)

    q = sub.add_parser("reduce", parents=[common], help="reduce a model to an irreducible one")
    q.add_argument("model")
    policy_opts(q)
    q.set_defaults(func=cmd_reduce)

    q = sub.add_parser("overlap", parents=[common], help="maximum overlap degree")
    q.add_argument("model")
    q.set_defaults(func=cmd_overlap)

    q = sub.add_parser("estimate", parents=[common], help="SCAN estimate and bounds")
    q.add_argument("model")
    q.add_argument("readings")
    policy_opts(q)
    q.add_argument("--all-irreducibles", action="store_true")
    q.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    q.set_defaults(func=cmd_estimate)

    q = sub.add_parser("irreducibles", parents=[common], help="every irreducible model reachable by reduction")
    q.add_argument("model")
    q.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    q.set_defaults(func=cmd_irreducibles)

    q = sub.add_parser("ingest", parents=[common], help="zone model of a geometric scene")
    q.add_argument("scene")
    q.add_argument("--resolution", type=float)
    q.add_argument("--epsilon", type=float)
    q.add_argument("--verify-resolution", action="store_true")
    q.set_defaults(func=cmd_ingest)

    q = sub.add_parser("targets", parents=[common], help="ideal target counts of a scene")
    q.add_argument("scene")
    q.set_defaults(func=cmd_targets)

    q = sub.add_parser("dyn", parents=[common], help="dynamic models")
    q.add_argument("model")
    q.add_argument("action", choices=["check", "validate-axioms", "remark"])
    q.add_argument("formula", nargs="?")
    q.add_argument("--formula-file")
    q.add_argument("--world")
    q.add_argument("--engine", choices=dynamic.ENGINES, default="auto")
    q.add_argument("--budget", type=int, default=1_000_000, help="node budget of the lasso engine")
    q.add_argument("--policy", choices=scan.POLICIES, default="lexicographic-first")
    q.set_defaults(func=cmd_dyn)
    return p


INPUT_ERRORS = (
    UsageError, ParseError, SortError, ModelError, GeometryError, scan.ScanError, EvaluationError, ValueError, KeyError,
)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    logging.basicConfig(level=logging.WARNING, stream=sys.stderr, format="senstopo: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    run = _Run(argv)
    start = time.perf_counter()
    try:
        result, code = args.func(args, run)
    except INPUT_ERRORS as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"senstopo: {msg}", file=sys.stderr)
        return 2
    elapsed = (time.perf_counter() - start) * 1000
    log.info("%s took %.1f ms", args.command, elapsed)
    report = run.report(result)
    if args.timing:
        report["timing_ms"] = round(elapsed, 3)
    json.dump(report, sys.stdout, sort_keys=False)
    sys.stdout.write("\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
