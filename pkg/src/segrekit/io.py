"""JSON point-set files and reports.

A point-set file looks like::

    {"schema": "segrekit/pointset/v1",
     "field": {"kind": "prime", "p": 5},
     "shape": [1, 1],
     "points": [[[0, 1], [1, 1]], ...]}

Each point is a list of per-factor homogeneous coordinates.  Over GF(p) the
integers are reduced mod p on load; over Q they may be any integers and are
written with denominators cleared.
"""

from __future__ import annotations

import datetime as _dt
import json
import sys
from typing import Any, Optional

from . import __version__
from .errors import DuplicatePointError, FormatError, SegreError
from .field import FieldSpec
from .projective import ProjPoint
from .segre import MPoint, PointSet, Shape, point_to_json

POINTSET_SCHEMA = "segrekit/pointset/v1"
REPORT_SCHEMA = "segrekit/report/v1"


def point_set_to_json(S: PointSet) -> dict:
    return {
        "schema": POINTSET_SCHEMA,
        "field": S.field.to_json(),
        "shape": list(S.shape.dims),
        "points": [point_to_json(pt) for pt in S],
    }


def point_set_from_json(obj: Any) -> PointSet:
    """Parse a point-set document; errors name the offending location."""
    if not isinstance(obj, dict):
        raise FormatError("top level: expected an object")
    for name in ("field", "shape", "points"):
        if name not in obj:
            raise FormatError(f"top level: missing key {name!r}")
    try:
        field = FieldSpec.from_json(obj["field"])
    except (SegreError, ValueError, TypeError, AttributeError) as exc:
        raise FormatError(f"field: {exc}") from None
    dims = obj["shape"]
    if not isinstance(dims, list) or not dims or not all(isinstance(n, int) and n >= 1 for n in dims):
        raise FormatError("shape: expected a nonempty list of positive integers")
    shape = Shape(tuple(dims))
    pts = obj["points"]
    if not isinstance(pts, list):
        raise FormatError("points: expected a list")
    out = []
    for j, raw in enumerate(pts):
        if not isinstance(raw, list) or len(raw) != shape.k:
            raise FormatError(f"points[{j}]: expected {shape.k} factors")
        facs = []
        for i, (n, coords) in enumerate(zip(shape.dims, raw)):
            where = f"points[{j}][{i}]"
            if not isinstance(coords, list) or len(coords) != n + 1:
                raise FormatError(f"{where}: expected {n + 1} coordinates")
            if not all(isinstance(c, int) and not isinstance(c, bool) for c in coords):
                raise FormatError(f"{where}: coordinates must be integers")
            vals = [field.canon(c) for c in coords]
            if not any(vals):
                raise FormatError(f"{where}: zero vector is not a projective point")
            facs.append(ProjPoint.make(vals, field))
        out.append(MPoint(tuple(facs)))
    try:
        return PointSet(shape, field, out)
    except DuplicatePointError as exc:
        raise DuplicatePointError(f"points: {exc}") from None


def load_point_set(path: str) -> PointSet:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return point_set_from_json(obj)


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def make_report(kind: str, inputs: dict, results: Any, elapsed: Optional[float] = None,
                timestamp: bool = True) -> dict:
    """Wrap results in the versioned report envelope."""
    rep = {
        "schema": REPORT_SCHEMA,
        "kind": kind,
        "tool_version": __version__,
        "inputs": inputs,
        "results": results,
    }
    if timestamp:
        rep["timestamp"] = _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")
        if elapsed is not None:
            rep["elapsed"] = round(elapsed, 3)
    return rep


def write_text(text: str, path: Optional[str]):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
