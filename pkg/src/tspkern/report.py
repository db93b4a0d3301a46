"""Kernelization reports: what fired, what was marked, and how the output
measures against the applicable size bound."""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass
class KernelReport:
    pipeline: str
    decided: str | None = None  # "yes" | "no" | None
    rule_firings: dict = field(default_factory=dict)
    marks: dict = field(default_factory=dict)
    promoted_waypoints: list = field(default_factory=list)
    budget_delta: int = 0
    stats: dict = field(default_factory=dict)
    log: list = field(default_factory=list)

    def fire(self, rule: str, entry: str = ""):
        self.rule_firings[rule] = self.rule_firings.get(rule, 0) + 1
        if entry:
            self.log.append(entry)

    def add_marks(self, color: str, count: int):
        self.marks[color] = self.marks.get(color, 0) + count

    def to_json(self) -> str:
        payload = {
            "pipeline": self.pipeline,
            "decided": self.decided,
            "rule_firings": self.rule_firings,
            "marks": self.marks,
            "promoted_waypoints": [v + 1 for v in self.promoted_waypoints],
            "budget_delta": self.budget_delta,
            "stats": self.stats,
            "log": self.log,
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"

    def to_text(self) -> str:
        lines = [f"pipeline: {self.pipeline}"]
        if self.decided is not None:
            lines.append(f"DECIDED {self.decided}")
        for rule in sorted(self.rule_firings):
            lines.append(f"fired {rule}: {self.rule_firings[rule]}")
        for color in sorted(self.marks):
            lines.append(f"marked {color}: {self.marks[color]}")
        if self.promoted_waypoints:
            ids = " ".join(str(v + 1) for v in sorted(self.promoted_waypoints))
            lines.append(f"promoted waypoints: {ids}")
        lines.append(f"budget delta: {self.budget_delta}")
        for key in sorted(self.stats):
            lines.append(f"{key}: {self.stats[key]}")
        for entry in self.log:
            lines.append(f"  {entry}")
        return "\n".join(lines) + "\n"
