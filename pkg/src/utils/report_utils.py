"""Report type and JSON / CSV / text emitters."""

import csv
import io
import json
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List

import numpy as np

from ..core.errors import ParameterError

REPORT_FORMATS = ('json', 'csv', 'text')


@dataclass
class Report:
    """{command, params, results: [...], provenance, version}."""

    command: str
    params: Dict[str, Any]
    results: List[Dict[str, Any]] = field(default_factory=list)
    provenance: str = "computed"
    version: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return {
            "command": self.command,
            "params": self.params,
            "results": self.results,
            "provenance": self.provenance,
            "version": self.version,
        }


def normalize(value: Any) -> Any:
    """Reduce a value to JSON-friendly scalars, keeping Fractions exact."""
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    if isinstance(value, dict):
        return {str(k): normalize(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [normalize(v) for v in value]
    return str(value)


def make_report(command: str, params: Dict[str, Any], results: List[Dict[str, Any]],
                provenance: str = "computed", version: str = "") -> Report:
    return Report(
        command=command,
        params=normalize(params),
        results=[normalize(row) for row in results],
        provenance=provenance,
        version=version,
    )


def fraction_text(value: Fraction) -> str:
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


class _ReportEncoder(json.JSONEncoder):
    def default(self, o):
        if isinstance(o, Fraction):
            return {"fraction": fraction_text(o), "float": float(o)}
        return super().default(o)


def _decode_object(obj: Dict[str, Any]) -> Any:
    if set(obj) == {"fraction", "float"}:
        return Fraction(obj["fraction"])
    return obj


def to_json(report: Report) -> str:
    return json.dumps(report.to_dict(), cls=_ReportEncoder, indent=2) + "\n"


def from_json(text: str) -> Report:
    try:
        data = json.loads(text, object_hook=_decode_object)
        return Report(
            command=data["command"],
            params=data["params"],
            results=data["results"],
            provenance=data["provenance"],
            version=data["version"],
        )
    except (ValueError, KeyError, TypeError) as e:
        raise ParameterError(f"not a report: {e}")


def _cell(value: Any) -> str:
    if isinstance(value, Fraction):
        return fraction_text(value)
    if isinstance(value, list):
        return " ".join(_cell(v) for v in value)
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _flatten(row: Dict[str, Any]) -> Dict[str, str]:
    """Exact-rational columns get a companion <name>_float column."""
    out: Dict[str, str] = {}
    for key, value in row.items():
        out[key] = _cell(value)
        if isinstance(value, Fraction):
            out[f"{key}_float"] = repr(float(value))
    return out


def to_csv(report: Report) -> str:
    rows = [_flatten(row) for row in report.results]
    header: List[str] = []
    for row in rows:
        for key in row:
            if key not in header:
                header.append(key)
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=header, restval="", lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buffer.getvalue()


def to_text(report: Report) -> str:
    lines = [f"{report.command} ({report.provenance})"]
    for key, value in report.params.items():
        lines.append(f"  {key}: {_cell(value)}")
    if report.results:
        rows = [{k: _cell(v) for k, v in row.items()} for row in report.results]
        header: List[str] = []
        for row in rows:
            for key in row:
                if key not in header:
                    header.append(key)
        widths = {key: max([len(key)] + [len(row.get(key, "")) for row in rows]) for key in header}
        lines.append("")
        lines.append("  ".join(key.ljust(widths[key]) for key in header).rstrip())
        for row in rows:
            lines.append("  ".join(row.get(key, "").ljust(widths[key]) for key in header).rstrip())
    return "\n".join(lines) + "\n"


def render(report: Report, fmt: str) -> str:
    if fmt == 'json':
        return to_json(report)
    if fmt == 'csv':
        return to_csv(report)
    if fmt == 'text':
        return to_text(report)
    raise ParameterError(f"unsupported format '{fmt}', expected one of {', '.join(REPORT_FORMATS)}")
