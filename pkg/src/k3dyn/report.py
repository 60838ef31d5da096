"""Canonical JSON and plain-text rendering of reports."""

from __future__ import annotations

import json
from datetime import datetime, timezone
from fractions import Fraction
from typing import Any, Optional

from .io import FORMAT_VERSION
from .poly import Poly


def jsonable(x: Any) -> Any:
    """Numbers become strings ("p/q" for rationals); containers recurse."""
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, Poly):
        return [jsonable(c) for c in x.coeffs]
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    raise TypeError(f"cannot serialize {type(x).__name__}")


def canonical_json(obj: Any) -> bytes:
    return (json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def report_payload(kind: str, name: str, sections: dict, checks: list) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "kind": kind,
        "name": name,
        **jsonable(sections),
        "checks": jsonable(checks),
        "failures": [c["claim"] for c in checks if not c["passed"]],
        "provenance": sorted({c["anchor"] for c in checks if c["passed"]}),
    }


def emit_report(report, fmt: str = "json", stamp: Optional[str] = None) -> bytes:
    """Render a ScenarioReport.  JSON output is byte-identical across runs;
    a stamp, when requested, sits in its own top-level key."""
    if fmt == "json":
        payload = report_payload("scenario", report.name, report.sections, report.checks)
        if stamp is not None:
            payload = {"report": payload, "stamp": stamp}
        return canonical_json(payload)
    if fmt == "text":
        lines = [f"scenario: {report.name}", *report.lines]
        passed = sum(c["passed"] for c in report.checks)
        lines.append(f"checks: {passed} passed, {len(report.checks) - passed} failed")
        for c in report.checks:
            lines.append(f"  [{'ok' if c['passed'] else 'FAIL'}] {c['claim']}")
        if stamp is not None:
            lines.append(f"generated: {stamp}")
        return ("\n".join(lines) + "\n").encode("utf-8")
    raise ValueError(f"unknown report format {fmt!r}")


def utc_stamp() -> str:
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")
