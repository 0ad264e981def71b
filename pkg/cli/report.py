"""
Report emission.

Text reports are line records

    # prodcert check product "double exponential"
    CHECK h1 verified 1.2e+3+/-4.1e-15 2.9e+3+/-1.1e-14
    CHECK conclusion certified-conditional - -

with space-free Balls ("mid+/-rad") and "-" for a missing side.
Structured reports carry the same records plus per-command details
under a schema version. `parse_report` reads either back into the
verdict set.
"""

import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from algebra.ball import Ball
from utils.config import get_config
from utils.io_utils import dump_json

RECORD = "CHECK"


@dataclass
class Record:
    check_id: str
    verdict: str
    lhs: Optional[Ball] = None
    rhs: Optional[Ball] = None


@dataclass
class Report:
    command: str
    kind: str
    name: str = ""
    records: List[Record] = field(default_factory=list)
    details: List[Dict[str, Any]] = field(default_factory=list)

    def add(self, check_id: str, verdict: str, lhs: Optional[Ball] = None, rhs: Optional[Ball] = None) -> None:
        self.records.append(Record(check_id, verdict, lhs, rhs))

    def verdicts(self) -> Dict[str, str]:
        return {r.check_id: r.verdict for r in self.records}

    def to_dict(self, digits: int = 20) -> dict:
        return {
            "schema_version": get_config().report.schema_version,
            "command": self.command,
            "kind": self.kind,
            "name": self.name,
            "results": [
                {"id": r.check_id, "verdict": r.verdict, "lhs": compact(r.lhs, digits), "rhs": compact(r.rhs, digits)}
                for r in self.records
            ],
            "details": self.details,
        }


def compact(ball: Optional[Ball], digits: int = 20) -> str:
    if ball is None:
        return "-"
    rad = ball.rad.str(3, radius=False)
    re = ball.real.mid().str(digits, radius=False)
    if ball.is_real:
        return f"{re}+/-{rad}"
    im = ball.imag.mid().str(digits, radius=False)
    sign = "" if im.startswith("-") else "+"
    return f"{re}{sign}{im}i+/-{rad}"


def render_text(report: Report, digits: Optional[int] = None) -> str:
    digits = digits or get_config().report.digits
    title = f' "{report.name}"' if report.name else ""
    lines = [f"# prodcert {report.command} {report.kind}{title}"]
    for r in report.records:
        lines.append(f"{RECORD} {r.check_id} {r.verdict} {compact(r.lhs, digits)} {compact(r.rhs, digits)}")
    return "\n".join(lines) + "\n"


def render_structured(report: Report, digits: Optional[int] = None) -> str:
    return dump_json(report.to_dict(digits or get_config().report.digits))


def render(report: Report, fmt: Optional[str] = None, digits: Optional[int] = None) -> str:
    fmt = fmt or get_config().report.format
    if fmt == "structured":
        return render_structured(report, digits)
    if fmt == "text":
        return render_text(report, digits)
    raise ValueError(f"Unknown report format: {fmt}. Must be 'text' or 'structured'")


def parse_report(text: str) -> Dict[str, str]:
    """Verdict per record id from a text or structured report."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        data = json.loads(stripped)
        return {item["id"]: item["verdict"] for item in data["results"]}
    verdicts = {}
    for number, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 5 or parts[0] != RECORD:
            raise ValueError(f"malformed report line {number}: {line}")
        verdicts[parts[1]] = parts[2]
    return verdicts
