"""Verification reports shared by the suites and the CLI."""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass
class Check:
    label: str
    ok: bool
    detail: str = ""


@dataclass
class Report:
    name: str
    checks: list = field(default_factory=list)

    def add(self, label: str, ok: bool, detail: str = "") -> bool:
        self.checks.append(Check(label, bool(ok), detail))
        return bool(ok)

    def extend(self, other: "Report") -> None:
        for c in other.checks:
            self.checks.append(Check(f"{other.name}: {c.label}", c.ok, c.detail))

    @property
    def passed(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> list:
        return [c for c in self.checks if not c.ok]

    def json_lines(self) -> list:
        return [
            json.dumps({"suite": self.name, "check": c.label, "ok": c.ok, "detail": c.detail})
            for c in self.checks
        ]

    def summary(self) -> str:
        bad = self.failures()
        head = f"{self.name}: {len(self.checks) - len(bad)}/{len(self.checks)} checks passed"
        return "\n".join([head] + [f"  FAILED {c.label} {c.detail}".rstrip() for c in bad])
