"""Reading and writing table documents (JSON and CSV)."""
from __future__ import annotations

import csv
import json
import math
import os
import tempfile
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .tables import COUNTS, PROBABILITIES, TOL, Labels, Table2, Table3


class TableFormatError(ValueError):
    pass


@dataclass(frozen=True)
class TableDocument:
    """A table plus the labels and level coding it was recorded with.

    ``level_labels[m][0]`` names the category coded as index 0 on axis ``m``.
    ``cells`` are flat, in row-major order with the first axis slowest.
    """

    dims: int
    axis_labels: tuple[str, ...]
    level_labels: tuple[tuple[str, str], ...]
    cells: tuple[float, ...]
    kind: str = COUNTS
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.dims not in (2, 3):
            raise TableFormatError(f"dims must be 2 or 3, got {self.dims!r}")
        n = 2**self.dims
        if len(self.cells) != n:
            raise TableFormatError(f"expected {n} cells, found {len(self.cells)}")
        if len(self.axis_labels) != self.dims or len(self.level_labels) != self.dims:
            raise TableFormatError(f"labels must describe exactly {self.dims} axes")
        if any(len(lv) != 2 for lv in self.level_labels):
            raise TableFormatError("every axis needs exactly two level names")
        for pos, v in enumerate(self.cells):
            if not math.isfinite(v):
                raise TableFormatError(f"cells[{pos}]: value {v!r} is not finite")
            if v < 0:
                raise TableFormatError(f"cells[{pos}]: negative value {v!r}")
        if self.kind not in (COUNTS, PROBABILITIES):
            raise TableFormatError(f"kind must be 'counts' or 'probabilities', got {self.kind!r}")
        if self.kind == PROBABILITIES and abs(sum(self.cells) - 1) > TOL.sum:
            raise TableFormatError(f"probabilities sum to {sum(self.cells)!r}, not 1")

    @property
    def labels(self) -> Labels:
        return Labels(tuple(self.axis_labels), tuple(tuple(lv) for lv in self.level_labels))

    def to_table(self) -> Table2 | Table3:
        cls = Table2 if self.dims == 2 else Table3
        return cls(list(self.cells), kind=self.kind, labels=self.labels)

    @classmethod
    def from_table(cls, t, meta=None) -> "TableDocument":
        labels = t.labels or Labels.default(t.ndim)
        return cls(
            dims=t.ndim,
            axis_labels=tuple(labels.axes),
            level_labels=tuple(tuple(lv) for lv in labels.levels),
            cells=tuple(float(v) for v in t.flat),
            kind=t.kind,
            meta=dict(meta or {}),
        )

    def to_json_dict(self) -> dict:
        d = {
            "dims": self.dims,
            "kind": self.kind,
            "axis_labels": list(self.axis_labels),
            "level_labels": [list(lv) for lv in self.level_labels],
            "cells": list(self.cells),
        }
        d.update(self.meta)
        return d


_KNOWN_KEYS = {"dims", "kind", "axis_labels", "level_labels", "cells"}


def _from_json_text(text: str, where: str) -> TableDocument:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TableFormatError(f"{where}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(raw, dict):
        raise TableFormatError(f"{where}: top level must be an object")
    if "cells" not in raw:
        raise TableFormatError(f"{where}: missing field 'cells'")
    cells = raw["cells"]
    if not isinstance(cells, list):
        raise TableFormatError(f"{where}: field 'cells' must be a list")
    for pos, v in enumerate(cells):
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise TableFormatError(f"{where}: cells[{pos}]: expected a number, got {v!r}")
    dims = raw.get("dims", {4: 2, 8: 3}.get(len(cells), 3))
    if dims not in (2, 3):
        raise TableFormatError(f"{where}: field 'dims' must be 2 or 3, got {dims!r}")
    if len(cells) != 2**dims:
        raise TableFormatError(f"{where}: expected {2**dims} cells, found {len(cells)}")
    default = Labels.default(dims)
    axis_labels = raw.get("axis_labels", list(default.axes))
    level_labels = raw.get("level_labels", [list(lv) for lv in default.levels])
    meta = {k: v for k, v in raw.items() if k not in _KNOWN_KEYS}
    try:
        return TableDocument(
            dims=dims,
            axis_labels=tuple(str(a) for a in axis_labels),
            level_labels=tuple(tuple(str(x) for x in lv) for lv in level_labels),
            cells=tuple(float(v) for v in cells),
            kind=raw.get("kind", COUNTS),
            meta=meta,
        )
    except TableFormatError as exc:
        raise TableFormatError(f"{where}: {exc}") from None


def _from_csv_text(text: str, where: str) -> TableDocument:
    rows = list(csv.reader(text.splitlines()))
    rows = [(n, r) for n, r in enumerate(rows, start=1) if r and any(x.strip() for x in r)]
    if not rows:
        raise TableFormatError(f"{where}: empty file")
    header_line, header = rows[0]
    header = [h.strip() for h in header]
    if header not in (["i", "j", "value"], ["i", "j", "k", "value"]):
        raise TableFormatError(f"{where}: line {header_line}: header must be 'i,j,value' or 'i,j,k,value'")
    dims = len(header) - 1
    values: dict[tuple[int, ...], float] = {}
    for line, row in rows[1:]:
        if len(row) != len(header):
            raise TableFormatError(f"{where}: line {line}: expected {len(header)} fields, found {len(row)}")
        try:
            idx = tuple(int(x) for x in row[:dims])
        except ValueError:
            raise TableFormatError(f"{where}: line {line}: indices must be 0 or 1") from None
        if any(i not in (0, 1) for i in idx):
            raise TableFormatError(f"{where}: line {line}: indices must be 0 or 1")
        try:
            v = float(row[dims])
        except ValueError:
            raise TableFormatError(f"{where}: line {line}: field 'value': not a number: {row[dims]!r}") from None
        if not math.isfinite(v) or v < 0:
            raise TableFormatError(f"{where}: line {line}: field 'value': must be a nonnegative number")
        if idx in values:
            raise TableFormatError(f"{where}: line {line}: duplicate cell {idx}")
        values[idx] = v
    n = 2**dims
    if len(values) != n:
        raise TableFormatError(f"{where}: expected {n} cells, found {len(values)}")
    order = sorted(values)
    cells = tuple(values[i] for i in order)
    kind = PROBABILITIES if abs(sum(cells) - 1) <= TOL.sum else COUNTS
    default = Labels.default(dims)
    return TableDocument(dims, default.axes, default.levels, cells, kind)


def load_table(path, format: str = "auto") -> TableDocument:
    """Load a table document from JSON or CSV.

    With ``format="auto"`` the suffix decides: ``.csv`` is CSV, anything else JSON.
    """
    path = Path(path)
    if format == "auto":
        format = "csv" if path.suffix.lower() == ".csv" else "json"
    if format not in ("json", "csv"):
        raise TableFormatError(f"unknown format {format!r}")
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise TableFormatError(f"{path}: {exc.strerror}") from None
    if format == "json":
        return _from_json_text(text, str(path))
    return _from_csv_text(text, str(path))


def atomic_write_text(path, text: str):
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def dump_json(doc: TableDocument) -> str:
    # float repr is the shortest string that reads back to the same double
    return json.dumps(doc.to_json_dict(), indent=2) + "\n"


def save_table(doc: TableDocument, path, format: str = "auto"):
    path = Path(path)
    if format == "auto":
        format = "csv" if path.suffix.lower() == ".csv" else "json"
    if format == "json":
        atomic_write_text(path, dump_json(doc))
    elif format == "csv":
        cols = ["i", "j", "k"][: doc.dims] + ["value"]
        lines = [",".join(cols)]
        for pos, v in enumerate(doc.cells):
            idx = [(pos >> (doc.dims - 1 - m)) & 1 for m in range(doc.dims)]
            lines.append(",".join(str(i) for i in idx) + "," + repr(float(v)))
        atomic_write_text(path, "\n".join(lines) + "\n")
    else:
        raise TableFormatError(f"unknown format {format!r}")


def fixture_path(name: str) -> Path:
    """Path of a bundled fixture, e.g. ``fixture_path("yule")``."""
    if not name.endswith(".json"):
        name += ".json"
    return Path(str(resources.files("unimargin") / "data" / name))


def load_fixture(name: str) -> TableDocument:
    return load_table(fixture_path(name))
