"""Run configuration read from YAML or JSON.

Example::

    regime: newtonian
    ansatz: {k: 0, l: 0, c0: 1, E0: -1, L0: 0.01}
    center: -1.5            # U(0), or mu(0) in the relativistic regime
    solver: {rel_tol: 1.0e-10, output_grid_size: 4001}
    targets: {M: 1, R0: 1}  # optional
    sweep: {L0: [0.1, 0.01, 0.001, 0.0001]}   # optional, used by `sweep`
    outputs: {dir: out, checks: [field_residuals, boundary_conditions, shell_structure]}
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np
import yaml

from .errors import DomainError, InputError, UsageError
from .kernels import NEWTONIAN, REGIMES, AnsatzParams
from .profiles import SolverConfig
from .verify import parse_checks

#: Checks recorded in every summary; orbit integration is left to `validate`.
DEFAULT_SUMMARY_CHECKS = ("field_residuals", "boundary_conditions", "shell_structure")

_TOP = {"regime", "ansatz", "center", "solver", "targets", "sweep", "outputs"}
_ANSATZ = {"k", "l", "c0", "E0", "L0"}
_TARGETS = {"M", "R0", "Ri"}
_OUTPUTS = {"dir", "checks"}


@dataclass(frozen=True)
class Targets:
    M: Optional[float] = None
    R0: Optional[float] = None
    Ri: Optional[float] = None

    @property
    def arity(self) -> int:
        return sum(v is not None for v in (self.M, self.R0, self.Ri))


@dataclass(frozen=True)
class RunConfig:
    params: AnsatzParams
    center: float
    solver: SolverConfig = field(default_factory=SolverConfig)
    targets: Targets = field(default_factory=Targets)
    sweep: Optional[tuple] = None
    out_dir: Optional[str] = None
    checks: tuple = DEFAULT_SUMMARY_CHECKS

    @property
    def regime(self) -> str:
        return self.params.regime

    def __post_init__(self):
        t = self.targets
        if self.regime == NEWTONIAN:
            if t.arity not in (0, 2) or (t.arity == 2 and (t.M is None or (t.R0 is None) == (t.Ri is None))):
                raise UsageError("newtonian targets: give M together with exactly one of R0 and Ri")
        elif t.arity > 1:
            raise UsageError("relativistic targets: give at most one of M, R0 and Ri")
        for name in ("M", "R0", "Ri"):
            v = getattr(t, name)
            if v is not None and not v > 0:
                raise DomainError(f"target {name} must be positive")


def _check_keys(block, allowed, where):
    if not isinstance(block, dict):
        raise UsageError(f"{where} must be a mapping")
    unknown = set(block) - allowed
    if unknown:
        raise UsageError(f"unknown key(s) in {where}: {', '.join(sorted(unknown))}")


def _sweep_values(block) -> tuple:
    _check_keys(block, {"L0", "range"}, "sweep")
    if ("L0" in block) == ("range" in block):
        raise UsageError("sweep needs exactly one of 'L0' (a list) and 'range'")
    if "L0" in block:
        values = [float(x) for x in block["L0"]]
    else:
        rng = block["range"]
        _check_keys(rng, {"start", "stop", "num", "log"}, "sweep.range")
        start, stop, num = float(rng["start"]), float(rng["stop"]), int(rng["num"])
        if rng.get("log", False):
            values = np.geomspace(start, stop, num).tolist()
        else:
            values = np.linspace(start, stop, num).tolist()
    if not values:
        raise UsageError("sweep list is empty")
    return tuple(values)


def config_from_dict(data: dict) -> RunConfig:
    _check_keys(data, _TOP, "config")
    for key in ("regime", "ansatz", "center"):
        if key not in data:
            raise UsageError(f"config is missing '{key}'")
    regime = data["regime"]
    if regime not in REGIMES:
        raise UsageError(f"regime must be one of {', '.join(REGIMES)}")
    ansatz = data["ansatz"]
    _check_keys(ansatz, _ANSATZ, "ansatz")
    missing = {"k", "l", "c0", "E0"} - set(ansatz)
    if missing:
        raise UsageError(f"ansatz is missing {', '.join(sorted(missing))}")
    params = AnsatzParams(**{k: float(v) for k, v in ansatz.items()}, regime=regime)

    solver_block = data.get("solver") or {}
    names = {f.name for f in dataclasses.fields(SolverConfig)}
    _check_keys(solver_block, names, "solver")
    try:
        solver = SolverConfig(**solver_block)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"solver: {exc}") from exc

    targets_block = data.get("targets") or {}
    _check_keys(targets_block, _TARGETS, "targets")
    targets = Targets(**{k: float(v) for k, v in targets_block.items() if v is not None})

    outputs = data.get("outputs") or {}
    _check_keys(outputs, _OUTPUTS, "outputs")
    checks = tuple(parse_checks(outputs["checks"])) if "checks" in outputs else DEFAULT_SUMMARY_CHECKS
    sweep = _sweep_values(data["sweep"]) if data.get("sweep") is not None else None
    return RunConfig(params, float(data["center"]), solver, targets, sweep, outputs.get("dir"), checks)


def load_config(path) -> RunConfig:
    """Read a YAML (or JSON, which is valid YAML) configuration file."""
    path = Path(path)
    try:
        data = yaml.safe_load(path.read_text())
    except OSError as exc:
        raise InputError(f"cannot read config {path}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise UsageError(f"config {path} is not valid YAML/JSON: {exc}") from exc
    if data is None:
        raise UsageError(f"config {path} is empty")
    return config_from_dict(data)
