from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

import numpy as np


@dataclass
class CheckResult:
    """Outcome of one check: passes iff ``max_residual <= tolerance``."""

    max_residual: float
    tolerance: float
    locations: list = field(default_factory=list)
    note: str = ""

    @property
    def passed(self) -> bool:
        return bool(self.max_residual <= self.tolerance)

    def to_dict(self) -> dict:
        out = {
            "max_residual": float(self.max_residual),
            "tolerance": float(self.tolerance),
            "pass": self.passed,
            "locations": [float(x) for x in self.locations],
        }
        if self.note:
            out["note"] = self.note
        return out


class ValidationReport(dict):
    """Mapping of check name to `CheckResult`."""

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.values())

    def failures(self) -> list:
        return [name for name, c in self.items() if not c.passed]

    def to_dict(self) -> dict:
        return {name: self[name].to_dict() for name in sorted(self)}

    def digest(self) -> str:
        blob = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def summary_lines(self) -> list:
        return [
            f"{'PASS' if c.passed else 'FAIL'} {name}: {c.max_residual:.3e} <= {c.tolerance:.1e}"
            for name, c in sorted(self.items())
        ]


def worst(residual: np.ndarray, radii: np.ndarray, count: int = 3) -> tuple:
    """Largest entry of ``residual`` and the radii of the ``count`` worst nodes."""
    residual = np.asarray(residual, dtype=float)
    if residual.size == 0:
        return 0.0, []
    bad = np.where(np.isfinite(residual), residual, np.inf)
    order = np.argsort(-bad, kind="stable")[:count]
    order = [i for i in order if bad[i] > 0]
    return float(bad.max()), [float(radii[i]) for i in order]


def check_from(residual, radii, tolerance: float, note: str = "") -> CheckResult:
    value, locations = worst(residual, radii)
    return CheckResult(value, tolerance, locations, note)
