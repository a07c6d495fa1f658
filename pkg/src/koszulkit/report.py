"""Report rendering: a schema-versioned JSON document and a text summary.

The JSON carries no timings so that repeated runs are byte-identical; the
text rendering adds per-check wall time.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .scenario import Scenario
from .suites import CheckResult

SCHEMA = "koszulkit-report/1"


@dataclass
class Report:
    scenario: Scenario
    checks: list[CheckResult]

    @property
    def counts(self) -> dict:
        out = {"pass": 0, "fail": 0, "inconclusive": 0}
        for c in self.checks:
            out[c.verdict] += 1
        return out

    @property
    def exit_code(self) -> int:
        return 1 if self.counts["fail"] else 0

    def to_dict(self) -> dict:
        sc = self.scenario
        return {"schema": SCHEMA, "scenario": sc.name, "kind": sc.kind, "parameters": sc.parameters(),
                "checks": [c.record() for c in self.checks], "summary": self.counts}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=True) + "\n"

    def to_text(self) -> str:
        sc = self.scenario
        p = sc.parameters()
        lines = [f"{sc.name} ({sc.kind})  window {p['window']}  cap {p['length_cap']}  trunc {p['poly_trunc']}"]
        width = max((len(c.id) for c in self.checks), default=0)
        for c in self.checks:
            win = f"  window {c.window}" if c.window else ""
            lines.append(f"  {c.verdict.upper():<12} {c.id:<{width}}  {c.seconds:7.2f}s{win}")
            if c.witness:
                lines.append(f"  {'':<12} witness: {c.witness}")
        n = self.counts
        lines.append(f"{n['pass']} pass, {n['fail']} fail, {n['inconclusive']} inconclusive")
        return "\n".join(lines) + "\n"
