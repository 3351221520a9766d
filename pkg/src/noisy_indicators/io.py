"""Readers and writers for solution, reference and weight files.

Solution sets: CSV with header ``id,t1..tD,r1..rD`` or JSON
``{"dimension": D, "solutions": [{"id", "true", "estimated"}]}``.
Reference sets: CSV with header ``a1..aD``. Weights: CSV with ``l1..lD``.
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .core import ReferenceSet, SolutionSet
from .utility import WeightSampleSet


class ParseError(ValueError):
    def __init__(self, path, row: int | None, message: str):
        self.path = str(path)
        self.row = row
        where = f"{path}, row {row}" if row is not None else str(path)
        super().__init__(f"{where}: {message}")


def _numbered_columns(header: list[str], prefix: str, start: int, D: int, path) -> None:
    want = [f"{prefix}{k}" for k in range(1, D + 1)]
    got = header[start : start + D]
    if got != want:
        raise ParseError(path, 1, f"expected columns {','.join(want)}, got {','.join(got)}")


def _read_rows(path) -> tuple[list[str], list[tuple[int, list[str]]]]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh, skipinitialspace=True)
        rows = [(i, [c.strip() for c in row]) for i, row in enumerate(reader, start=1) if row]
    if not rows:
        raise ParseError(path, None, "empty file")
    return rows[0][1], rows[1:]


def _floats(path, lineno: int, cells: list[str]) -> list[float]:
    try:
        vals = [float(c) for c in cells]
    except ValueError as exc:
        raise ParseError(path, lineno, str(exc)) from None
    if not all(np.isfinite(vals)):
        raise ParseError(path, lineno, "non-finite value")
    return vals


def _read_solution_csv(path) -> SolutionSet:
    header, rows = _read_rows(path)
    if len(header) < 3 or (len(header) - 1) % 2 or header[0] != "id":
        raise ParseError(path, 1, "header must be id,t1..tD,r1..rD")
    D = (len(header) - 1) // 2
    _numbered_columns(header, "t", 1, D, path)
    _numbered_columns(header, "r", 1 + D, D, path)
    if not rows:
        raise ParseError(path, None, "no solutions")
    ids, T, R = [], [], []
    for lineno, cells in rows:
        if len(cells) != 1 + 2 * D:
            raise ParseError(path, lineno, f"expected {1 + 2 * D} columns, got {len(cells)}")
        vals = _floats(path, lineno, cells[1:])
        ids.append(cells[0])
        T.append(vals[:D])
        R.append(vals[D:])
    if len(set(ids)) != len(ids):
        dup = next(i for i in ids if ids.count(i) > 1)
        raise ParseError(path, None, f"duplicate id {dup!r}")
    return SolutionSet(T, R, ids)


def _read_solution_json(path) -> SolutionSet:
    try:
        doc = json.loads(Path(path).read_text())
        D = int(doc["dimension"])
        sols = doc["solutions"]
    except (ValueError, KeyError, TypeError) as exc:
        raise ParseError(path, None, f"invalid solution JSON: {exc}") from None
    if not sols:
        raise ParseError(path, None, "no solutions")
    ids, T, R = [], [], []
    for k, sol in enumerate(sols, start=1):
        try:
            t = [float(x) for x in sol["true"]]
            r = [float(x) for x in sol["estimated"]]
            sid = str(sol.get("id", f"s{k - 1}"))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(path, k, f"bad solution entry: {exc}") from None
        if len(t) != D or len(r) != D:
            raise ParseError(path, k, f"expected {D} values in true/estimated")
        if not all(np.isfinite(t + r)):
            raise ParseError(path, k, "non-finite value")
        ids.append(sid)
        T.append(t)
        R.append(r)
    if len(set(ids)) != len(ids):
        raise ParseError(path, None, "duplicate ids")
    return SolutionSet(T, R, ids)


def read_solution_set(path) -> SolutionSet:
    path = Path(path)
    if path.suffix.lower() == ".json":
        return _read_solution_json(path)
    return _read_solution_csv(path)


def _read_matrix(path, prefix: str) -> np.ndarray:
    header, rows = _read_rows(path)
    D = len(header)
    if D == 0:
        raise ParseError(path, 1, "empty header")
    _numbered_columns(header, prefix, 0, D, path)
    if not rows:
        raise ParseError(path, None, "no data rows")
    out = []
    for lineno, cells in rows:
        if len(cells) != D:
            raise ParseError(path, lineno, f"expected {D} columns, got {len(cells)}")
        out.append(_floats(path, lineno, cells))
    return np.array(out, dtype=float)


def read_reference_set(path) -> ReferenceSet:
    return ReferenceSet(_read_matrix(path, "a"))


def read_weights(path) -> WeightSampleSet:
    W = _read_matrix(path, "l")
    try:
        return WeightSampleSet(W, 0)
    except ValueError as exc:
        raise ParseError(path, None, str(exc)) from None


def _csv_text(header: list[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([repr(float(x)) if isinstance(x, (float, np.floating)) else x for x in row])
    return buf.getvalue()


def write_atomic(path, text: str) -> None:
    """Write ``text`` to ``path`` via a temp file in the same directory plus rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(path, header: list[str], rows) -> None:
    write_atomic(path, _csv_text(header, rows))


def solution_set_csv(S: SolutionSet) -> str:
    D = S.dimension
    header = ["id"] + [f"t{k}" for k in range(1, D + 1)] + [f"r{k}" for k in range(1, D + 1)]
    rows = ([sid, *map(float, t), *map(float, r)] for sid, t, r in zip(S.ids, S.true_values, S.estimated_values))
    return _csv_text(header, rows)


def write_solution_set(path, S: SolutionSet) -> None:
    write_atomic(path, solution_set_csv(S))


def write_reference_set(path, A: ReferenceSet) -> None:
    write_csv(path, [f"a{k}" for k in range(1, A.dimension + 1)], (map(float, a) for a in A.targets))


def write_weights(path, weights: WeightSampleSet) -> None:
    write_csv(path, [f"l{k}" for k in range(1, weights.dimension + 1)], (map(float, w) for w in weights.samples))
