"""Localized findings and error reports emitted by the linter and grader.

A finding pins one defect to a document location, with the expected and
actual values and the tolerance that separated them.  Reports are plain
data: identical inputs must serialize to byte-identical JSON and text.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field

SCHEMA_VERSION = 1

# severity classes are this tool's own construction (see report footer)
class Severity(str, enum.Enum):
    FATAL = "fatal"  # wrong final values, false optimality claims
    MAJOR = "major"  # arithmetic slips in intermediate quantities
    MINOR = "minor"  # convention slips that normalize cleanly

    @property
    def rank(self) -> int:
        return {"fatal": 0, "major": 1, "minor": 2}[self.value]


_FOOTER = (
    "severity classes (fatal/major/minor) are defined by this tool, "
    "not by any published rubric"
)


@dataclass(frozen=True)
class Finding:
    """One localized defect: what was checked, where, and how far off."""

    code: str
    location: str
    expected: object = None
    actual: object = None
    tolerance: float | None = None
    severity: Severity = Severity.MAJOR
    message: str = ""
    citation: str | None = None

    def to_dict(self) -> dict:
        d = {
            "code": self.code,
            "location": self.location,
            "expected": self.expected,
            "actual": self.actual,
            "tolerance": self.tolerance,
            "severity": self.severity.value,
            "message": self.message,
        }
        if self.citation is not None:
            d["citation"] = self.citation
        return d

    def to_line(self) -> str:
        exp = _compact(self.expected)
        act = _compact(self.actual)
        return f"{self.code} {self.location} expected={exp} actual={act}"


def _compact(value: object) -> str:
    if value is None:
        return "-"
    if isinstance(value, float):
        return f"{value:.6g}"
    if isinstance(value, str):
        return value if value and " " not in value else json.dumps(value)
    return json.dumps(value, sort_keys=True, separators=(",", ":"), default=str)


@dataclass(frozen=True)
class ErrorReport:
    """All findings for one candidate, plus a severity summary."""

    kind: str
    provenance: str
    findings: tuple[Finding, ...] = ()
    optimality_gap: float | None = None

    @property
    def clean(self) -> bool:
        return not self.findings

    def count(self, severity: Severity) -> int:
        return sum(1 for f in self.findings if f.severity is severity)

    @property
    def codes(self) -> tuple[str, ...]:
        return tuple(f.code for f in self.findings)

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": self.kind,
            "provenance": self.provenance,
            "findings": [f.to_dict() for f in self.findings],
            "summary": {
                "n_fatal": self.count(Severity.FATAL),
                "n_major": self.count(Severity.MAJOR),
                "n_minor": self.count(Severity.MINOR),
            },
            "optimality_gap": self.optimality_gap,
            "note": _FOOTER,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def to_text(self) -> str:
        lines = [f"candidate: {self.provenance} ({self.kind})"]
        if self.findings:
            lines += [f.to_line() for f in self.findings]
        else:
            lines.append("clean: no findings")
        lines.append(
            f"summary: fatal={self.count(Severity.FATAL)} "
            f"major={self.count(Severity.MAJOR)} minor={self.count(Severity.MINOR)}"
        )
        if self.optimality_gap is not None:
            lines.append(f"optimality_gap: {self.optimality_gap:.6g}")
        lines.append(f"# {_FOOTER}")
        return "\n".join(lines) + "\n"


def sort_findings(findings: list[Finding]) -> tuple[Finding, ...]:
    """Stable order: severity rank first, then original discovery order."""
    return tuple(
        sorted(enumerate(findings), key=lambda t: (t[1].severity.rank, t[0]))[i][1]
        for i in range(len(findings))
    )
