"""Representation files and JSON reports.

Floats are written as decimal strings with 17 significant digits, which
round-trips every IEEE double exactly.  All documents carry ``"schema": 1``.
"""

from __future__ import annotations

import hashlib
import json
import math
from pathlib import Path

import numpy as np

from . import surface
from .errors import NonHyperbolicSurface, ParseError, SchemaError
from .invariants import Representation, check_representation

SCHEMA = 1


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def parse_number(s) -> float:
    if isinstance(s, bool):
        raise SchemaError("booleans are not numbers")
    if isinstance(s, (int, float)):
        return float(s)
    if not isinstance(s, str):
        raise SchemaError(f"expected a decimal string, got {type(s).__name__}")
    try:
        return float(s)
    except ValueError:
        raise ParseError(f"not a decimal number: {s!r}") from None


def representation_to_dict(rho: Representation, metadata: dict | None = None) -> dict:
    p = rho.presentation
    meta = {"label": rho.label}
    meta.update(metadata or {})
    return {
        "schema": SCHEMA,
        "surface": {"genus": p.genus, "boundary": p.boundary_count},
        "target": {"kind": rho.target, "n": rho.n},
        "generators": [[[fmt(x) for x in row] for row in m] for m in rho.images],
        "metadata": meta,
    }


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def save_representation(rho: Representation, path, metadata: dict | None = None) -> None:
    Path(path).write_text(dumps(representation_to_dict(rho, metadata)))


def _field(doc, key, kind):
    if not isinstance(doc, dict) or key not in doc:
        raise SchemaError(f"missing field {key!r}")
    val = doc[key]
    if kind is int and (isinstance(val, bool) or not isinstance(val, int)):
        raise SchemaError(f"field {key!r} must be an integer")
    if kind is not int and not isinstance(val, kind):
        raise SchemaError(f"field {key!r} has the wrong type")
    return val


def representation_from_dict(doc: dict, tol: float = 1e-8) -> Representation:
    if _field(doc, "schema", int) != SCHEMA:
        raise SchemaError(f"unsupported schema {doc['schema']!r}")
    surf = _field(doc, "surface", dict)
    genus, boundary = _field(surf, "genus", int), _field(surf, "boundary", int)
    target = _field(doc, "target", dict)
    kind, n = _field(target, "kind", str), _field(target, "n", int)
    if kind not in ("psl2", "sp") or n < 1 or (kind == "psl2" and n != 1):
        raise SchemaError(f"bad target {kind!r} with n = {n}")
    try:
        p = surface.presentation(genus, boundary)
    except (NonHyperbolicSurface, ValueError) as exc:
        raise SchemaError(str(exc)) from None
    gens = _field(doc, "generators", list)
    if len(gens) != p.rank:
        raise SchemaError(f"{len(gens)} generators for rank {p.rank}")
    size = 2 * n
    images = []
    for g in gens:
        if not isinstance(g, list) or len(g) != size or any(
                not isinstance(r, list) or len(r) != size for r in g):
            raise SchemaError(f"each generator must be a {size}x{size} array")
        M = np.array([[parse_number(x) for x in row] for row in g])
        if not np.all(np.isfinite(M)):
            raise SchemaError("generator entries must be finite")
        images.append(M)
    label = doc.get("metadata", {}).get("label", "") if isinstance(doc.get("metadata"), dict) else ""
    rho = Representation(p, kind, tuple(images), str(label))
    check_representation(rho, tol)
    return rho


def loads_representation(text: str, tol: float = 1e-8) -> Representation:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    return representation_from_dict(doc, tol)


def load_representation(path, tol: float = 1e-8) -> Representation:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None
    return loads_representation(text, tol)


def digest(*paths) -> str:
    h = hashlib.sha256()
    for p in paths:
        h.update(Path(p).read_bytes())
    return h.hexdigest()


def encode(value):
    """Report encoding: exact integers stay integers, floats become strings."""
    if isinstance(value, dict):
        return {str(k): encode(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [encode(v) for v in value]
    if isinstance(value, (bool, str)) or value is None:
        return value
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        x = float(value)
        if math.isfinite(x) and x == round(x) and abs(x) < 2 ** 53:
            return int(round(x))
        return fmt(x)
    if isinstance(value, np.ndarray):
        return encode(value.tolist())
    return str(value)
