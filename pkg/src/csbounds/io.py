"""CSV ingestion and result-document serialization."""

from __future__ import annotations

import csv
import json
import math
import os
from pathlib import Path

import numpy as np

from . import __version__
from .bounds import GroupedSample
from .stepdist import StepCdf, from_samples

__all__ = [
    "InputError",
    "ingest",
    "read_records",
    "SCHEMA",
    "OUTPUT_DIR_ENV",
    "new_document",
    "dumps",
    "write_document",
    "write_step_csv",
    "step_json",
]

SCHEMA = "csbounds.result/1"
OUTPUT_DIR_ENV = "CSBOUNDS_OUTPUT_DIR"
CELL_KEYS = {(0, 0): "g0", (0, 1): "g1", (1, 0): "h0", (1, 1): "h1"}
CELL_NAMES = {"g0": "d=0, t=0", "g1": "d=0, t=1", "h0": "d=1, t=0", "h1": "d=1, t=1"}


class InputError(ValueError):
    """Malformed input data; the message carries the offending line."""


def _number(text: str, col: str, lineno: int) -> float:
    try:
        val = float(text)
    except ValueError:
        raise InputError(f"line {lineno}: column {col!r}: cannot parse {text!r}") from None
    if not math.isfinite(val):
        raise InputError(f"line {lineno}: column {col!r}: value must be finite")
    return val


def _binary(text: str, col: str, lineno: int) -> int:
    val = _number(text, col, lineno)
    if val not in (0.0, 1.0):
        raise InputError(f"line {lineno}: column {col!r} must be 0 or 1, got {text!r}")
    return int(val)


def read_records(path, delimiter: str = ","):
    """Rows of (y, d, t, w) with validation; w defaults to 1."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh, delimiter=delimiter)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise InputError(f"{path}: empty file") from None
        for col in ("y", "d", "t"):
            if col not in header:
                raise InputError(f"{path}: missing required column {col!r}")
        idx = {c: header.index(c) for c in ("y", "d", "t")}
        wi = header.index("w") if "w" in header else None
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(header):
                raise InputError(f"line {lineno}: expected {len(header)} fields, got {len(row)}")
            y = _number(row[idx["y"]].strip(), "y", lineno)
            d = _binary(row[idx["d"]].strip(), "d", lineno)
            t = _binary(row[idx["t"]].strip(), "t", lineno)
            w = 1.0
            if wi is not None:
                w = _number(row[wi].strip(), "w", lineno)
                if w <= 0:
                    raise InputError(f"line {lineno}: column 'w' must be positive")
            rows.append((y, d, t, w))
    if not rows:
        raise InputError(f"{path}: no data rows")
    return rows


def ingest(path, delimiter: str = ",", panel: bool = False) -> GroupedSample:
    """Build the four cells from a y,d,t[,w] file.

    The treated share pools both periods for repeated cross-sections; for a
    panel it is taken over the t = 0 rows, one row per unit.
    """
    rows = read_records(path, delimiter)
    arr = np.array(rows, dtype=float)
    y, d, t, w = arr.T
    cells, counts = {}, {}
    for (dv, tv), key in CELL_KEYS.items():
        m = (d == dv) & (t == tv)
        if not m.any():
            raise InputError(f"{path}: empty cell {key} ({CELL_NAMES[key]})")
        cells[key] = from_samples(y[m], w[m])
        counts[key] = int(m.sum())
    base = t == 0 if panel else np.ones_like(d, dtype=bool)
    p = math.fsum(w[base & (d == 1)]) / math.fsum(w[base])
    return GroupedSample(cells["g0"], cells["g1"], cells["h0"], p=p, h1=cells["h1"],
                         counts=counts)


def new_document(command: str, config: dict) -> dict:
    return {"schema": SCHEMA, "metadata": {"command": command, "version": __version__,
                                           "config": config}}


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_clean(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, float)):
        val = float(obj)
        if not math.isfinite(val):
            raise ValueError("non-finite value in result document")
        return val
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def dumps(doc: dict) -> str:
    """Deterministic JSON; floats use the shortest round-trip repr."""
    return json.dumps(_clean(doc), indent=2, allow_nan=False) + "\n"


def write_document(doc: dict, out: str | None, command: str) -> str | None:
    """Write to ``out``, else to $CSBOUNDS_OUTPUT_DIR/<command>.json, else return the text."""
    text = dumps(doc)
    if out is None:
        base = os.environ.get(OUTPUT_DIR_ENV)
        if not base:
            return text
        out = str(Path(base) / f"{command}.json")
    Path(out).parent.mkdir(parents=True, exist_ok=True)
    Path(out).write_text(text, encoding="utf-8")
    return None


def step_json(F: StepCdf) -> dict:
    return {"points": F.points, "cumprobs": F.cumprobs}


def write_step_csv(F: StepCdf, path) -> None:
    """Jump points of a step CDF as y,value rows."""
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        wr = csv.writer(fh)
        wr.writerow(["y", "value"])
        for x, c in zip(F.points, F.cumprobs):
            wr.writerow([repr(float(x)), repr(float(c))])
