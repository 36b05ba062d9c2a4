"""Independent oracles and property checks for shell solutions."""

from __future__ import annotations

from ..errors import UsageError
from .orbits import characteristic_drift
from .report import CheckResult, ValidationReport
from .residuals import boundary_conditions, field_residuals, shell_structure_check
from .trend import l0_family_trend

#: Check groups run by `validate`, in report order. ``characteristic_drift``
#: integrates orbits and is by far the slowest.
CHECKS = {
    "field_residuals": field_residuals,
    "boundary_conditions": boundary_conditions,
    "shell_structure": shell_structure_check,
    "characteristic_drift": characteristic_drift,
}


def parse_checks(selection) -> list:
    """Normalize a comma-separated string or iterable of check names; ``None``/``"all"`` means every check."""
    if selection is None:
        return list(CHECKS)
    if isinstance(selection, str):
        selection = [s.strip() for s in selection.split(",") if s.strip()]
    names = list(selection)
    if not names or names == ["all"]:
        return list(CHECKS)
    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise UsageError(f"unknown check(s) {', '.join(unknown)}; choose from {', '.join(CHECKS)}")
    return [n for n in CHECKS if n in names]


def validate(solution, checks=None) -> ValidationReport:
    """Run the selected check groups and merge them into one report."""
    report = ValidationReport()
    for name in parse_checks(checks):
        report.update(CHECKS[name](solution))
    return ValidationReport(sorted(report.items()))


__all__ = [
    "CHECKS",
    "CheckResult",
    "ValidationReport",
    "boundary_conditions",
    "characteristic_drift",
    "field_residuals",
    "l0_family_trend",
    "parse_checks",
    "shell_structure_check",
    "validate",
]
