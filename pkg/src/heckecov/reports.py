"""Verdict records shared by every checker."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class CheckReport:
    name: str
    passed: bool
    probes: int = 0
    witness: dict | None = None
    details: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.passed

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"name": self.name, "passed": self.passed, "probes": self.probes}
        if self.witness is not None:
            out["witness"] = _plain(self.witness)
        if self.details:
            out["details"] = _plain(self.details)
        return out


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, CheckReport):
        return obj.to_dict()
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    return str(obj)


def merge(name: str, reports: list[CheckReport], **details) -> CheckReport:
    """Combine sub-reports; the first failing one supplies the witness."""
    failed = next((r for r in reports if not r.passed), None)
    return CheckReport(
        name=name,
        passed=failed is None,
        probes=sum(r.probes for r in reports),
        witness=None if failed is None else {"check": failed.name, **(failed.witness or {})},
        details={**details, "parts": {r.name: r.passed for r in reports}} if details or reports else {},
    )
