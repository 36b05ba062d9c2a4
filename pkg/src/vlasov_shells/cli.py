"""``shellctl``: solve, rescale, validate and sweep static shells from the command line.

Exit codes: 0 success, 1 usage/domain, 2 infeasible center, 3 no finite
support, 4 horizon formation, 5 validation failure, 6 numerical failure,
7 unreadable input.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from pathlib import Path

from . import io, pipeline
from .config import DEFAULT_SUMMARY_CHECKS, load_config
from .errors import VALIDATION_FAILURE_EXIT, ShellError, UsageError
from .verify import parse_checks, validate
from .verify.trend import trend_report

log = logging.getLogger("shellctl")


def _emit_solution(solution, out_dir, checks) -> dict:
    report = validate(solution, checks)
    rec = io.write_solution(solution, out_dir, report, checks)
    for w in solution.warnings:
        log.warning("%s", w)
    print(f"R_i={solution.R_i:.17g} R_0={solution.R_0:.17g} M={solution.M:.17g}")
    return rec


def _solve_config(cfg):
    sol = pipeline.solve(cfg.params, cfg.center, cfg.solver)
    t = cfg.targets
    if t.arity:
        sol = pipeline.apply_targets(sol, t.M, t.R0, t.Ri)
    return sol


def _out_dir(args, cfg=None) -> Path:
    out = args.out or (cfg.out_dir if cfg is not None else None)
    if out is None:
        raise UsageError("no output directory: pass --out or set outputs.dir")
    return Path(out)


def cmd_solve(args) -> int:
    out = Path(args.out) if args.out else None
    try:
        cfg = load_config(args.config)
        out = _out_dir(args, cfg)
        sol = _solve_config(cfg)
    except ShellError as exc:
        if out is not None:
            io.write_error(exc, out)
        raise
    _emit_solution(sol, out, list(cfg.checks))
    return 0


def cmd_rescale(args) -> int:
    if args.input is None:
        raise UsageError("rescale needs --input")
    sol = io.read_solution(args.input)
    out = _out_dir(args)
    rescaled = pipeline.rescale(sol, args.scale_lambda, args.scale_gamma, args.scale_a)
    summary = io.read_summary(args.input)
    checks = summary.get("validation", {}).get("checks") or list(DEFAULT_SUMMARY_CHECKS)
    _emit_solution(rescaled, out, checks)
    return 0


def cmd_validate(args) -> int:
    if args.input is None:
        raise UsageError("validate needs --input")
    checks = parse_checks(args.checks)
    sol = io.read_solution(args.input)
    report = validate(sol, checks)
    src = Path(args.input)
    out = Path(args.out) if args.out else (src if src.is_dir() else src.parent)
    out.mkdir(parents=True, exist_ok=True)
    io.write_report(report, out / io.REPORT_NAME, {"checks_run": checks})
    for line in report.summary_lines():
        print(line)
    for name in report.failures():
        locs = ", ".join(f"{r:.17g}" for r in report[name].locations) or "n/a"
        print(f"offending radii for {name}: {locs}")
    return 0 if report.passed else VALIDATION_FAILURE_EXIT


def cmd_sweep(args) -> int:
    cfg = load_config(args.config)
    if cfg.sweep is None:
        raise UsageError("sweep needs a 'sweep' block in the config")
    if cfg.targets.arity:
        raise UsageError("targets are not supported in a sweep: members share (k, l, c0, E0, center)")
    out = _out_dir(args, cfg)
    out.mkdir(parents=True, exist_ok=True)
    checks = list(cfg.checks)
    raw = {}
    members = []
    for i, L0 in enumerate(cfg.sweep):
        member_dir = out / f"member_{i:03d}"
        entry = {"index": i, "L0": L0, "dir": member_dir.name}
        try:
            sol = pipeline.solve(cfg.params.replace(L0=L0), cfg.center, cfg.solver, normalize=False)
        except ShellError as exc:
            raw[L0] = exc
            entry.update(io.write_error(exc, member_dir))
            log.warning("L0=%g: %s", L0, exc)
        else:
            raw[L0] = sol
            rec = _emit_solution(pipeline.normalize(sol), member_dir, checks)
            entry.update(R_i=rec["R_i"], R_0=rec["R_0"], M=rec["M"], validation_pass=rec["validation"]["pass"])
        members.append(entry)

    index = {"schema_version": io.SCHEMA_VERSION, "regime": cfg.regime, "center": cfg.center,
             "params": cfg.params.to_dict(), "members": members}
    positive = [x for x in cfg.sweep if x > 0]
    decreasing = bool(positive) and all(b < a for a, b in zip(positive, positive[1:]))
    code = 0
    if decreasing:
        base = raw.get(0.0)
        if base is None:
            try:
                base = pipeline.solve(cfg.params.replace(L0=0.0), cfg.center, cfg.solver, normalize=False)
            except ShellError as exc:
                base = exc
        if isinstance(base, ShellError):
            index["trend"] = {"error": base.error_class, "message": str(base)}
            code = base.exit_code
        else:
            report, rows = trend_report(cfg.params, cfg.center, positive, base, [raw[x] for x in positive])
            rows = [{k: (None if isinstance(v, float) and not math.isfinite(v) else v) for k, v in row.items()}
                    for row in rows]
            io.write_report(report, out / "trend.json", {"rows": rows})
            index["trend"] = {"pass": report.passed, "file": "trend.json"}
            for line in report.summary_lines():
                print(line)
            code = 0 if report.passed else VALIDATION_FAILURE_EXIT
    else:
        index["trend"] = None
        errors = [raw[x] for x in cfg.sweep if isinstance(raw[x], ShellError)]
        code = errors[0].exit_code if errors else 0
    io.dump_json(index, out / "sweep.json")
    return code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="shellctl", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log solver diagnostics to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve one configuration")
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("rescale", help="apply the closed-form scaling to a written solution")
    p.add_argument("--input", required=True, help="output directory of a previous solve")
    p.add_argument("--out", required=True)
    p.add_argument("--scale-lambda", type=float)
    p.add_argument("--scale-gamma", type=float)
    p.add_argument("--scale-a", type=float)
    p.set_defaults(func=cmd_rescale)

    p = sub.add_parser("validate", help="run checks on a written solution")
    p.add_argument("--input", required=True)
    p.add_argument("--checks", default="all", help="comma-separated check groups or 'all'")
    p.add_argument("--out", help="directory for report.json (default: the input directory)")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("sweep", help="solve an L0 family and report its trend")
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else UsageError.exit_code
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except ShellError as exc:
        print(f"error ({exc.error_class}): {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
