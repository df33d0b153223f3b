"""Run reports: text and machine (JSON) renderings."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

from . import __version__


@dataclass
class RunReport:
    command: str
    input_digest: str
    algebra: str
    bounds: dict
    results: list = field(default_factory=list)  # AxiomReport | VerifierReport
    tool_version: str = __version__

    @property
    def passed(self) -> bool:
        return all(_ok(r) for r in self.results)

    def to_dict(self) -> dict:
        return {
            "tool": "lcsk",
            "tool_version": self.tool_version,
            "command": self.command,
            "input_digest": self.input_digest,
            "algebra": self.algebra,
            "bounds": self.bounds,
            "overall": "pass" if self.passed else "fail",
            "results": [r.to_dict() for r in self.results],
        }


def _ok(result) -> bool:
    ok = getattr(result, "ok", None)
    return ok if ok is not None else result.passed


def digest(text: str) -> str:
    return "sha256:" + hashlib.sha256(text.encode()).hexdigest()


def render_report(report: RunReport, fmt: str = "text") -> bytes:
    if fmt == "machine":
        return (json.dumps(report.to_dict(), indent=2, sort_keys=True, default=str) + "\n").encode()
    if fmt != "text":
        raise ValueError(f"unknown report format {fmt!r}")
    bounds = ", ".join(f"{k}={v}" for k, v in sorted(report.bounds.items()))
    lines = [
        f"lcsk {report.tool_version}  {report.command}  {report.algebra}",
        f"input {report.input_digest}",
        f"bounds {bounds or '-'}",
        "",
    ]
    for r in report.results:
        lines.append(r.render())
    lines += ["", f"OVERALL: {'PASS' if report.passed else 'FAIL'}"]
    return ("\n".join(lines) + "\n").encode()
