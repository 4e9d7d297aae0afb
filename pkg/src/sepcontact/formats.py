"""JSON and CSV serialisation for packings, contact graphs and certificates.

Floats are written with 17 significant digits so every value round-trips
bit-exactly; keys are sorted so identical inputs give identical bytes.
"""

from __future__ import annotations

import json
import math
from fractions import Fraction
from typing import Any

import numpy as np

from .geometry import CONTINUOUS, LATTICE, ContactGraph, Hyperplane, PackingConfig
from .separability import SeparationCertificate


def _fmt_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        return json.dumps(str(x))
    text = format(x, ".17g")
    if text.lstrip("-").isdigit():
        text += ".0"
    return text


def dumps(obj: Any) -> str:
    """Compact, key-sorted JSON with 17-significant-digit floats."""
    if obj is None or isinstance(obj, (bool, np.bool_)):
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, Fraction):
        return json.dumps(f"{obj.numerator}/{obj.denominator}")
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        items = sorted((str(k), v) for k, v in obj.items())
        return "{" + ",".join(f"{json.dumps(k)}:{dumps(v)}" for k, v in items) + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ",".join(dumps(v) for v in obj) + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def csv_value(x: Any) -> str:
    if isinstance(x, (float, np.floating)):
        return _fmt_float(float(x))
    if isinstance(x, bool):
        return "true" if x else "false"
    return "" if x is None else str(x)


def packing_to_dict(p: PackingConfig) -> dict:
    if p.mode == LATTICE:
        centers = [[int(v) for v in row] for row in p.centers]
    else:
        centers = [[float(v) for v in row] for row in p.centers]
    return {"dimension": p.dimension, "radius": float(p.radius), "mode": p.mode, "centers": centers}


def packing_from_dict(data: dict) -> PackingConfig:
    for key in ("dimension", "radius", "centers"):
        if key not in data:
            raise ValueError(f"packing JSON lacks {key!r}")
    mode = data.get("mode", CONTINUOUS)
    centers = np.asarray(data["centers"], dtype=np.int64 if mode == LATTICE else np.float64)
    return PackingConfig(int(data["dimension"]), float(data["radius"]), centers, mode)


def graph_to_dict(g: ContactGraph) -> dict:
    return {"n": g.n, "edges": [list(e) for e in sorted(g.edges)]}


def certificate_to_dict(cert: SeparationCertificate) -> dict:
    return {"pairs": [{"i": i, "j": j, "normal": [float(v) for v in h.normal], "offset": float(h.offset)}
                      for (i, j), h in cert.planes.items()]}


def certificate_from_dict(data: dict) -> SeparationCertificate:
    planes = {}
    for entry in data["pairs"]:
        planes[(int(entry["i"]), int(entry["j"]))] = Hyperplane.through(entry["normal"], entry["offset"])
    return SeparationCertificate(planes)
