"""File formats used by the command line tools.

Points travel as CSV with header x0,...,x{d-1},colour.  Filtrations and
triangulations travel as JSON with simplices in canonical order and
values printed with 17 significant digits, so writing is deterministic
and reading recovers every double exactly.
"""
from __future__ import annotations

import json
from typing import List, Tuple

import numpy as np

from .core import SimplicialComplex
from .delaunay import Triangulation
from .errors import ParseError
from .filtrations import FilteredComplex


def parse_points_csv(text: str) -> Tuple[np.ndarray, List[int]]:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ParseError("empty points file")
    header = [h.strip() for h in lines[0].split(",")]
    d = len(header) - 1
    if d < 1 or header[-1] != "colour" or \
            header[:-1] != [f"x{i}" for i in range(d)]:
        raise ParseError(
            "points CSV header must be x0,...,x{d-1},colour")
    points, colours = [], []
    for ln in lines[1:]:
        parts = [p.strip() for p in ln.split(",")]
        if len(parts) != d + 1:
            raise ParseError(f"bad points row: {ln!r}")
        try:
            points.append([float(p) for p in parts[:-1]])
            colours.append(int(parts[-1]))
        except ValueError as exc:
            raise ParseError(f"bad points row: {ln!r}") from exc
    if not points:
        raise ParseError("points file has no data rows")
    return np.array(points, float), colours


def points_to_csv(points, colours) -> str:
    pts = np.asarray(points, float)
    d = pts.shape[1]
    lines = [",".join([f"x{i}" for i in range(d)] + ["colour"])]
    for row, c in zip(pts, colours):
        lines.append(",".join("%.17g" % x for x in row) + ",%d" % int(c))
    return "\n".join(lines) + "\n"


def filtration_to_json(fc: FilteredComplex) -> str:
    entries = []
    for sig, val in fc.sorted_simplices():
        entries.append('{"v": [%s], "value": %s}'
                       % (", ".join(str(v) for v in sig), "%.17g" % val))
    return ('{"d": %d, "s": %d, "kind": %s, "simplices": [%s]}\n'
            % (fc.d, fc.s, json.dumps(fc.kind), ", ".join(entries)))


def filtration_from_json(text: str) -> FilteredComplex:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad filtration JSON: {exc}") from exc
    if not isinstance(obj, dict) or \
            not {"d", "s", "kind", "simplices"} <= set(obj):
        raise ParseError("filtration JSON needs d, s, kind, simplices")
    values = {}
    try:
        for entry in obj["simplices"]:
            sig = tuple(sorted(int(v) for v in entry["v"]))
            values[sig] = float(entry["value"])
    except (TypeError, KeyError, ValueError) as exc:
        raise ParseError(f"bad simplex entry: {exc}") from exc
    return FilteredComplex(SimplicialComplex(values, check=True), values,
                           int(obj["d"]), int(obj["s"]), str(obj["kind"]))


def triangulation_to_json(tri: Triangulation, d: int, s: int) -> str:
    sims = sorted(tri.complex, key=lambda t: (len(t), t))
    entries = ('{"v": [%s]}' % ", ".join(str(v) for v in sig)
               for sig in sims)
    return ('{"d": %d, "s": %d, "top_dimension": %d, "simplices": [%s]}\n'
            % (d, s, tri.top_dimension, ", ".join(entries)))
