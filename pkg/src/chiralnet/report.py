"""Named pass/fail records shared by every check in the package."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

SCHEMA_VERSION = 1


@dataclass
class CheckReport:
    """Outcome of one verification.

    ``measured`` is whatever the check computed (a residual, a count, a
    mismatch description); ``tolerance`` is 0 for exact checks.  ``anchor``
    names the identity being verified so a failure says what broke.
    """

    name: str
    passed: bool
    measured: float | int | str
    tolerance: float = 0.0
    anchor: str = ""
    detail: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        measured = self.measured
        if isinstance(measured, float) and measured != measured:
            measured = "nan"
        out = {
            "name": self.name,
            "pass": bool(self.passed),
            "measured": measured,
            "tolerance": self.tolerance,
            "anchor": self.anchor,
        }
        if self.detail:
            out["detail"] = self.detail
        return out

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}: measured={self.measured} tol={self.tolerance}"

    def __bool__(self) -> bool:
        return bool(self.passed)


def all_passed(reports) -> bool:
    return all(r.passed for r in reports)
