"""Run reports and their JSON / CSV serialization.

Field order is insertion order throughout. Exact counts are stored as decimal
strings, rationals as ``"p/q"`` strings and floats with 15 significant digits,
so emitting a parsed report reproduces it byte for byte.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone
from fractions import Fraction

import numpy as np

from .core import GENERATOR_NAME, ResidueSet

SCHEMA = "largespec.report/1"


def fmt_float(x: float):
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return float(f"{x:.15g}")


def fmt_rational(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def count(n) -> str:
    return str(int(n))


def jsonable(value):
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, Fraction):
        return fmt_rational(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return fmt_float(float(value))
    if isinstance(value, ResidueSet):
        return list(value.elements)
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [jsonable(v) for v in value]
    if isinstance(value, complex):
        return [fmt_float(value.real), fmt_float(value.imag)]
    return str(value)


def _version():
    from . import __version__

    return __version__


@dataclass
class RunReport:
    command: str
    config: dict = field(default_factory=dict)
    records: list = field(default_factory=list)
    seed: int | None = None
    timestamp: str | None = None

    def add(self, record: dict):
        self.records.append(record)

    def sort(self):
        self.records.sort(key=lambda r: json.dumps(jsonable(r.get("key", [])), sort_keys=True))

    @property
    def failures(self):
        return [r for r in self.records if r.get("verdict") == "fail"]

    def aggregate(self):
        verdicts = [r.get("verdict") for r in self.records]
        ratios = [r["ratio"] for r in self.records
                  if isinstance(r.get("ratio"), float) and math.isfinite(r["ratio"])]
        rudin = [r["rudin_constant"] for r in self.records if "rudin_constant" in r]
        return {
            "records": len(self.records),
            "asserted": sum(v in ("pass", "fail") for v in verdicts),
            "passed": verdicts.count("pass"),
            "failed": verdicts.count("fail"),
            "min_ratio": min(ratios) if ratios else None,
            "max_rudin_constant": max(rudin) if rudin else None,
            "slack_warnings": sum(len(r.get("warnings", [])) for r in self.records),
        }

    def to_dict(self):
        return {
            "schema": SCHEMA,
            "command": self.command,
            "config": self.config,
            "provenance": {
                "version": _version(),
                "generator": GENERATOR_NAME,
                "seed": self.seed,
                "timestamp": self.timestamp or datetime.now(timezone.utc).isoformat(timespec="seconds"),
            },
            "aggregate": self.aggregate(),
            "records": self.records,
        }


def emit_json(doc) -> str:
    if isinstance(doc, RunReport):
        doc = doc.to_dict()
    return json.dumps(jsonable(doc), indent=2, ensure_ascii=False) + "\n"


def parse_json(text: str) -> dict:
    return json.loads(text)


def _flatten(prefix, value, out):
    if isinstance(value, dict):
        for k, v in value.items():
            _flatten(f"{prefix}.{k}" if prefix else str(k), v, out)
    elif isinstance(value, list):
        out[prefix] = " ".join(json.dumps(v) if isinstance(v, (dict, list)) else str(v)
                               for v in value)
    elif value is None:
        out[prefix] = ""
    else:
        out[prefix] = value


def emit_csv(doc) -> str:
    """One row per record; nested fields are dotted, lists space-separated."""
    if isinstance(doc, RunReport):
        doc = doc.to_dict()
    rows = []
    columns = {}
    for record in jsonable(doc)["records"]:
        flat = {}
        _flatten("", record, flat)
        rows.append(flat)
        for c in flat:
            columns.setdefault(c, None)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def emit_report(report, fmt="json") -> bytes:
    if fmt == "json":
        return emit_json(report).encode()
    if fmt == "csv":
        return emit_csv(report).encode()
    raise ValueError(f"unknown report format {fmt!r}")
