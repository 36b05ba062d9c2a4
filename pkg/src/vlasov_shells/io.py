"""Profile tables, summary records and error records on disk.

Profiles are comma-separated text with one header line and 17 significant
digits, so every binary64 value survives a write/read cycle unchanged.
Summaries and reports are JSON with sorted keys.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .errors import InputError, ShellError
from .kernels import NEWTONIAN, AnsatzParams
from .profiles import EinsteinProfile, NewtonProfile, ShellSolution

SCHEMA_VERSION = 1
PROFILE_NAME = "profile.csv"
SUMMARY_NAME = "summary.json"
REPORT_NAME = "report.json"
ERROR_NAME = "error.json"


def dump_json(obj, path: Path) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n")


def _finite_or_none(x):
    return None if x is None or not math.isfinite(x) else float(x)


def write_profile(solution: ShellSolution, path) -> Path:
    path = Path(path)
    prof = solution.profile
    np.savetxt(path, prof.table(), fmt="%.17g", delimiter=",", header=",".join(prof.columns), comments="")
    return path


def read_profile(path, regime: str):
    path = Path(path)
    try:
        with path.open() as fh:
            header = fh.readline().strip().split(",")
        table = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    except (OSError, ValueError) as exc:
        raise InputError(f"cannot read profile {path}: {exc}") from exc
    cls = NewtonProfile if regime == NEWTONIAN else EinsteinProfile
    if tuple(header) != cls.columns or table.shape[1] != len(cls.columns):
        raise InputError(f"{path}: expected columns {','.join(cls.columns)}, got {','.join(header)}")
    return cls.from_table(table)


def summary_record(solution: ShellSolution, report=None, checks=None) -> dict:
    """JSON-compatible summary of a solution and, optionally, its validation report."""
    rec = {
        "schema_version": SCHEMA_VERSION,
        "regime": solution.regime,
        "params": solution.params.to_dict(),
        "R_i": float(solution.R_i),
        "R_0": float(solution.R_0),
        "M": float(solution.M),
        "center_value": float(solution.center_value),
        "potential_at_infinity": float(solution.potential_at_infinity),
        "plateau_radius": float(solution.plateau_radius),
        "vacuum": bool(solution.vacuum),
        "flags": {
            "single_shell": solution.single_shell,
            "exterior_reignition": solution.exterior_reignition,
        },
        "compactness": _finite_or_none(solution.compactness),
        "warnings": list(solution.warnings),
        "profile": PROFILE_NAME,
    }
    if report is not None:
        rec["validation"] = {
            "checks": list(checks or []),
            "pass": report.passed,
            "failures": report.failures(),
            "digest": report.digest(),
        }
    return rec


def write_solution(solution: ShellSolution, out_dir, report=None, checks=None) -> dict:
    """Write ``profile.csv`` and ``summary.json`` into ``out_dir``; returns the summary record."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_profile(solution, out / PROFILE_NAME)
    rec = summary_record(solution, report, checks)
    dump_json(rec, out / SUMMARY_NAME)
    return rec


def _summary_path(path) -> Path:
    path = Path(path)
    return path / SUMMARY_NAME if path.is_dir() else path


def read_summary(path) -> dict:
    """Load the summary record of an output directory (or of a summary file)."""
    summary_path = _summary_path(path)
    try:
        return json.loads(summary_path.read_text())
    except (OSError, ValueError) as exc:
        raise InputError(f"cannot read summary {summary_path}: {exc}") from exc


def read_solution(path) -> ShellSolution:
    """Rebuild a solution from an output directory (or the path of its summary file)."""
    summary_path = _summary_path(path)
    rec = read_summary(summary_path)
    if rec.get("schema_version") != SCHEMA_VERSION:
        raise InputError(f"{summary_path}: unsupported schema_version {rec.get('schema_version')!r}")
    try:
        params = AnsatzParams(**rec["params"])
        profile = read_profile(summary_path.parent / rec.get("profile", PROFILE_NAME), params.regime)
        profile.vacuum = bool(rec["vacuum"])
        profile.plateau_radius = float(rec["plateau_radius"])
        flags = rec.get("flags", {})
        return ShellSolution(profile, params, R_i=rec["R_i"], R_0=rec["R_0"], M=rec["M"],
                             plateau_radius=rec["plateau_radius"], center_value=rec["center_value"],
                             potential_at_infinity=rec["potential_at_infinity"], vacuum=rec["vacuum"],
                             single_shell=flags.get("single_shell"),
                             exterior_reignition=flags.get("exterior_reignition"),
                             compactness=rec.get("compactness"), warnings=list(rec.get("warnings", [])))
    except (KeyError, TypeError) as exc:
        raise InputError(f"{summary_path}: malformed summary ({exc})") from exc


def write_report(report, path, extra: dict | None = None) -> dict:
    rec = {"schema_version": SCHEMA_VERSION, "pass": report.passed, "failures": report.failures(),
           "digest": report.digest(), "checks": report.to_dict()}
    if extra:
        rec.update(extra)
    dump_json(rec, Path(path))
    return rec


def error_record(exc: BaseException) -> dict:
    code = exc.exit_code if isinstance(exc, ShellError) else 1
    kind = exc.error_class if isinstance(exc, ShellError) else "usage"
    rec = {"schema_version": SCHEMA_VERSION, "error": kind, "exit_code": code, "message": str(exc)}
    achieved = getattr(exc, "achieved", None)
    if achieved is not None:
        rec["achieved"] = achieved
    return rec


def write_error(exc: BaseException, out_dir) -> dict:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rec = error_record(exc)
    dump_json(rec, out / ERROR_NAME)
    return rec
