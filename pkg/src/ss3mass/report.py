"""Machine-readable run reports with a claim-by-claim check ledger.

Reports are deterministic functions of (inputs, seed, version): no wall-clock
data goes into the body (the CLI prints timings to stderr instead), so equal
invocations produce byte-identical output at any thread count.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional

SCHEMA = "ss3/1"


@dataclass
class CheckRow:
    claim_ref: str
    expected: Any
    observed: Any
    match: bool
    flag: Optional[str] = None

    def to_dict(self) -> dict:
        out = {
            "claim_ref": self.claim_ref,
            "expected": _plain(self.expected),
            "observed": _plain(self.observed),
            "match": self.match,
        }
        if self.flag:
            out["flag"] = self.flag
        return out


def _plain(v):
    if isinstance(v, Fraction):
        return {"num": v.numerator, "den": v.denominator}
    if isinstance(v, dict):
        return {k: _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, bool) or v is None or isinstance(v, (int, str, float)):
        return v
    return str(v)


@dataclass
class Report:
    command: str
    inputs: Dict[str, Any] = field(default_factory=dict)
    results: Dict[str, Any] = field(default_factory=dict)
    checks: List[CheckRow] = field(default_factory=list)
    versions: Dict[str, str] = field(default_factory=dict)

    def check(self, claim_ref: str, expected, observed, flag: Optional[str] = None,
              match: Optional[bool] = None) -> bool:
        ok = (expected == observed) if match is None else match
        self.checks.append(CheckRow(claim_ref, expected, observed, ok, flag))
        return ok

    @property
    def all_match(self) -> bool:
        return all(c.match for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "command": self.command,
            "inputs": _plain(self.inputs),
            "results": _plain(self.results),
            "checks": [c.to_dict() for c in self.checks],
            "all_match": self.all_match,
            "versions": self.versions,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":")) + "\n"

    def to_csv(self) -> str:
        """Frozen columns: the check ledger, one row per check."""
        buf = io.StringIO()
        buf.write("claim_ref,expected,observed,match,flag\n")
        for c in self.checks:
            exp = json.dumps(_plain(c.expected), sort_keys=True)
            obs = json.dumps(_plain(c.observed), sort_keys=True)
            buf.write(
                f"\"{c.claim_ref}\",\"{_csv_escape(exp)}\",\"{_csv_escape(obs)}\","
                f"{str(c.match).lower()},{c.flag or ''}\n"
            )
        return buf.getvalue()

    def to_table(self) -> str:
        lines = [f"# {self.command}"]
        for key, val in self.results.items():
            lines.append(f"{key}: {json.dumps(_plain(val), sort_keys=True)}")
        if self.checks:
            lines.append("")
            lines.append(f"{'claim':<28} {'match':<6} expected / observed")
            for c in self.checks:
                exp = json.dumps(_plain(c.expected), sort_keys=True)
                obs = json.dumps(_plain(c.observed), sort_keys=True)
                mark = "ok" if c.match else "FAIL"
                flag = f" [{c.flag}]" if c.flag else ""
                lines.append(f"{c.claim_ref:<28} {mark:<6} {exp} / {obs}{flag}")
        lines.append("")
        lines.append(f"all_match: {str(self.all_match).lower()}")
        return "\n".join(lines) + "\n"

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return self.to_json()
        if fmt == "csv":
            return self.to_csv()
        if fmt == "table":
            return self.to_table()
        raise ValueError(f"unknown format {fmt!r}")


def _csv_escape(s: str) -> str:
    return s.replace('"', '""')
