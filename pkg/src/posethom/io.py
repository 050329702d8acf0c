"""JSON formats for posets, maps, functors and matrices."""

from __future__ import annotations

import json
from pathlib import Path

from .abelian import FpAbGroup, as_matrix, matrix_to_json, parse_group, zeros
from .errors import ParseError, ValidationError
from .functor import CoeffFunctor, constant_functor
from .poset import MonotoneMap, Poset


def read_json(source):
    """Parse a path, a JSON string or pass a dict through."""
    if isinstance(source, (dict, list)):
        return source
    try:
        p = Path(source)
        text = p.read_text() if p.exists() else str(source)
    except OSError:
        text = str(source)
    if not text.lstrip().startswith(("{", "[")) and not Path(str(source)).exists():
        raise ParseError(f"{source}: no such file")
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON ({e.msg} at line {e.lineno})") from None


def _require(data, key, where):
    if not isinstance(data, dict) or key not in data:
        raise ParseError(f"{where}: missing key {key!r}")
    return data[key]


def load_poset(source) -> Poset:
    data = read_json(source)
    elements = _require(data, "elements", "poset")
    covers = data.get("covers", [])
    if not isinstance(elements, list) or not isinstance(covers, list):
        raise ParseError("poset: 'elements' and 'covers' must be lists")
    for c in covers:
        if not isinstance(c, list) or len(c) != 2:
            raise ParseError(f"poset: cover {c!r} is not a pair")
    return Poset(elements, covers)


def poset_to_json(X: Poset) -> dict:
    return X.to_json()


def load_map(source, X: Poset, Y: Poset) -> MonotoneMap:
    data = read_json(source)
    assignment = _require(data, "assignment", "map")
    if not isinstance(assignment, dict):
        raise ParseError("map: 'assignment' must be an object")
    return MonotoneMap(X, Y, assignment)


def load_matrix(source):
    data = read_json(source)
    rows = _require(data, "rows", "matrix")
    cols = _require(data, "cols", "matrix")
    return _matrix(data.get("entries", []), rows, cols, "matrix")


def matrix_json(A) -> dict:
    return {"rows": A.shape[0], "cols": A.shape[1], "entries": matrix_to_json(A)}


def _matrix(entries, rows, cols, where):
    if rows * cols == 0:
        # any spelling of an empty matrix ([], [[]], [[ ]] ...) is accepted
        if any(len(r) for r in entries if isinstance(r, list)):
            raise ValidationError(f"{where}: expected an empty {rows}x{cols} matrix")
        return zeros(rows, cols)
    try:
        return as_matrix(entries, rows, cols)
    except (TypeError, ValueError) as e:
        if isinstance(e, ValidationError):
            raise ValidationError(f"{where}: {e}") from None
        raise ParseError(f"{where}: entries must be integers") from None


def _group(entry, x) -> FpAbGroup:
    if isinstance(entry, str):
        return parse_group(entry)
    gens = _require(entry, "gens", f"value at {x!r}")
    rels = entry.get("rels", [])
    if not isinstance(gens, int) or gens < 0:
        raise ParseError(f"value at {x!r}: 'gens' must be a non-negative integer")
    rels = [r for r in rels if not (isinstance(r, list) and not r and gens)]
    if any(not isinstance(r, list) or len(r) != gens for r in rels):
        raise ValidationError(f"value at {x!r}: each relation needs {gens} entries")
    R = zeros(gens, 0) if not rels else as_matrix(rels).T.copy()
    return FpAbGroup(gens, R)


def load_functor(source, X: Poset) -> CoeffFunctor:
    data = read_json(source)
    values = _require(data, "values", "functor")
    maps = data.get("maps", {})
    groups = {}
    for x in X.elements:
        if x not in values:
            raise ValidationError(f"functor has no value at {x!r}")
        groups[x] = _group(values[x], x)
    mats = {}
    for key, entries in maps.items():
        if key.count("|") != 1:
            raise ParseError(f"map key {key!r} is not of the form 'x|y'")
        x, y = key.split("|")
        if x not in groups or y not in groups:
            raise ValidationError(f"map key {key!r} names unknown elements")
        mats[(x, y)] = _matrix(entries, groups[y].ngens, groups[x].ngens,
                               f"map {key}")
    return CoeffFunctor(X, groups, mats)


def functor_to_json(F: CoeffFunctor) -> dict:
    values = {}
    for x, G in F.values.items():
        values[x] = {"gens": G.ngens,
                     "rels": [list(map(int, col)) for col in G.relations.T.tolist()]}
    maps = {f"{x}|{y}": matrix_to_json(m) for (x, y), m in sorted(
        F.edge_maps.items(), key=lambda kv: (F.base.index[kv[0][0]], F.base.index[kv[0][1]]))}
    return {"values": values, "maps": maps}


def constant_or_file(X: Poset, functor=None, constant=None) -> CoeffFunctor:
    if functor is not None:
        return load_functor(functor, X)
    try:
        G = parse_group(constant or "Z")
    except ValueError as e:
        raise ParseError(str(e)) from None
    return constant_functor(X, G)
