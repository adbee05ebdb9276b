"""Rendering of command reports as JSON, CSV or plain text."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Any

from .config import RunConfig


@dataclass
class Report:
    command: str
    config: RunConfig
    result: Any
    ok: bool = True
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"command": self.command, "config": self.config.to_json(),
                "ok": self.ok, "result": self.result}


def _flatten(value: Any, prefix: str = ""):
    if isinstance(value, dict):
        for key, item in value.items():
            yield from _flatten(item, f"{prefix}.{key}" if prefix else str(key))
    elif isinstance(value, list):
        for i, item in enumerate(value):
            yield from _flatten(item, f"{prefix}[{i}]")
    else:
        yield prefix, value


def render(report: Report, fmt: str = "json") -> str:
    data = report.to_json()
    if fmt == "json":
        return json.dumps(data, indent=2) + "\n"
    rows = list(_flatten(data))
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["key", "value"])
        for key, value in rows:
            writer.writerow([key, "" if value is None else value])
        return buf.getvalue()
    width = max(len(k) for k, _ in rows)
    return "".join(f"{k.ljust(width)}  {v}\n" for k, v in rows)
