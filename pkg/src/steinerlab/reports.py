"""Canonical JSON, report export and run manifests."""

from __future__ import annotations

import csv
import hashlib
import io
import json
from dataclasses import dataclass, field as dc_field
from pathlib import Path
from typing import Any, Optional

from . import __version__

FORMATS = ("json", "csv", "markdown")


def canonical_json(obj: Any) -> str:
    """Sorted keys, two-space indent, UTF-8 text, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def to_jsonable(obj: Any) -> Any:
    if hasattr(obj, "to_json"):
        return obj.to_json()
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x) for x in obj]
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    return obj


def write_json(path, obj: Any) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(canonical_json(to_jsonable(obj)), encoding="utf-8")
    return path


def read_json(path) -> Any:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def file_digest(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 16), b""):
            h.update(chunk)
    return "sha256:" + h.hexdigest()


@dataclass
class RunManifest:
    command: str
    inputs: list = dc_field(default_factory=list)  # [[name, digest], ...]
    seed: int = 0
    tool_version: str = __version__
    outputs: list = dc_field(default_factory=list)

    def add_input(self, path, name: Optional[str] = None):
        self.inputs.append([name or Path(path).name, file_digest(path)])

    def add_output(self, path, root=None):
        path = Path(path)
        name = path.relative_to(root).as_posix() if root else path.name
        self.outputs.append([name, file_digest(path)])

    def to_json(self) -> dict:
        return {"command": self.command, "inputs": sorted(self.inputs), "seed": str(self.seed),
                "tool_version": self.tool_version, "outputs": sorted(self.outputs)}

    @classmethod
    def from_json(cls, obj: dict) -> "RunManifest":
        return cls(obj["command"], [list(x) for x in obj["inputs"]], int(obj["seed"]),
                   obj["tool_version"], [list(x) for x in obj["outputs"]])


# -- tabular views ----------------------------------------------------------

def _rows(report) -> tuple:
    """(header, rows) summary view of a report object or a list of summary dicts."""
    from .jumping import DimensionEstimate, LocusReport
    from .tangent import ClassificationVerdict, TangentReport

    if isinstance(report, LocusReport):
        header = ["label", "q", "fiber_dim", "sigma_count", "jumping"]
        rows = [[report.label, report.q, d, c, d >= report.f0] for d, c in report.strata]
        return header, rows
    if isinstance(report, ClassificationVerdict):
        header = ["key", "value"]
        rows = [["case", report.case]]
        for k in sorted(report.evidence):
            v = report.evidence[k]
            rows.append([k, json.dumps(v, sort_keys=True) if isinstance(v, (dict, list)) else v])
        return header, rows
    if isinstance(report, TangentReport):
        header = ["s0", "gamma_dim", "ambient_dim", "tangent_dim", "upper_bound"]
        return header, [[" ".join(str(x) for x in report.pair.s0), report.pair.gamma.dim,
                         report.ambient_dim, report.tangent_dim, report.upper_bound]]
    if isinstance(report, DimensionEstimate):
        header = ["q", "jtilde_count"]
        return header, [[q, c] for q, c in report.per_q]
    if isinstance(report, (list, tuple)) and all(isinstance(r, dict) for r in report):
        header = list(report[0]) if report else []
        return header, [[r.get(h, "") for h in header] for r in report]
    raise TypeError(f"no tabular view for {type(report).__name__}")


def _cell(x) -> str:
    if isinstance(x, bool):
        return "yes" if x else "no"
    return "" if x is None else str(x)


def render_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_cell(x) for x in r])
    return buf.getvalue()


def render_markdown(header, rows) -> str:
    def esc(x):
        return _cell(x).replace("|", "\\|")
    out = ["| " + " | ".join(header) + " |", "|" + "|".join("---" for _ in header) + "|"]
    out += ["| " + " | ".join(esc(x) for x in r) + " |" for r in rows]
    return "\n".join(out) + "\n"


def export_report(report, fmt: str = "json", path=None) -> str:
    """Render a report; json is lossless, csv and markdown keep summary fields.

    Writes to ``path`` when given and returns the text either way.
    """
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}; choose from {', '.join(FORMATS)}")
    if fmt == "json":
        text = canonical_json(to_jsonable(report))
    else:
        header, rows = _rows(report)
        text = render_csv(header, rows) if fmt == "csv" else render_markdown(header, rows)
    if path is not None:
        p = Path(path)
        p.parent.mkdir(parents=True, exist_ok=True)
        p.write_text(text, encoding="utf-8")
    return text
