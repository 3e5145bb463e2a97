"""Workspace files: UTF-8 JSON documents for spaces, sheaves, complexes.

Every document has a ``kind`` and a ``format_version``. Groups are written
``{"gens": n, "rels": [[...], ...]}`` (relations as rows) and maps as
lists of rows, one row per target generator. Restrictions are keyed
``"p:q"`` for the map stalk(p) → stalk(q), q ⪯ p; double-complex cells
and maps are keyed ``"p,q"``.

A file is canonical when it is self-contained (spaces inline) and equal
to ``dump_workspace`` of what it loads to.
"""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Mapping, Optional

from sheafwork.core.errors import AmbientMismatch, ParseError, SchemaError, UnknownName
from sheafwork.exactalg import FpGroup, GroupHom, IntMatrix
from sheafwork.finspace import FiniteSpace, build_space
from sheafwork.godement import Resolution
from sheafwork.sheaves import Sheaf, SheafHom, build_sheaf
from sheafwork.spectral import DoubleComplex, SheafComplex
from sheafwork.utils.json_io import dump_json

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1
KINDS = ("space", "sheaf", "sheaf_complex", "double_complex")

# (kind, name, space) -> object, for references by name inside documents
Resolver = Callable[[str, str, Optional[FiniteSpace]], Any]


@dataclass(frozen=True, eq=False)
class WorkspaceFile:
    kind: str
    name: str
    value: Any
    resolution: Optional[Resolution] = None
    format_version: int = FORMAT_VERSION

    def payload(self) -> dict:
        payload = to_payload(self.resolution or self.value)
        if self.resolution is not None:
            payload["name"] = self.name
        return payload

    def dumps(self) -> str:
        return dump_json(self.payload(), pretty=True)

    @property
    def digest(self) -> str:
        return hashlib.sha256(self.dumps().encode("utf-8")).hexdigest()


# reading


def _fail(message: str, path: str) -> SchemaError:
    return SchemaError(message, path=path)


def _mapping(data: Any, path: str) -> Mapping[str, Any]:
    if not isinstance(data, dict):
        raise _fail("Expected an object", path)
    return data


def _list(data: Any, path: str) -> list:
    if not isinstance(data, list):
        raise _fail("Expected an array", path)
    return data


def _int(data: Any, path: str) -> int:
    if isinstance(data, bool) or not isinstance(data, int):
        raise _fail(f"Expected an integer, got {json.dumps(data)}", path)
    return data


def _str(data: Any, path: str) -> str:
    if not isinstance(data, str) or not data:
        raise _fail("Expected a non-empty string", path)
    return data


def _rows(data: Any, path: str) -> list[list[int]]:
    rows = _list(data, path)
    parsed = []
    for i, row in enumerate(rows):
        row = _list(row, f"{path}[{i}]")
        parsed.append([_int(v, f"{path}[{i}][{j}]") for j, v in enumerate(row)])
    return parsed


def _matrix(data: Any, shape: tuple[int, int], path: str, what: str) -> IntMatrix:
    rows = _rows(data, path)
    n_rows, n_cols = shape
    actual_cols = {len(r) for r in rows}
    if len(rows) != n_rows or (rows and actual_cols != {n_cols}):
        got = f"{len(rows)}x{'/'.join(str(c) for c in sorted(actual_cols)) or 0}"
        raise _fail(f"{what} has shape {got}, expected {n_rows}x{n_cols}", path)
    return IntMatrix.from_rows(rows, cols=n_cols)


def _group(data: Any, path: str) -> FpGroup:
    data = _mapping(data, path)
    gens = _int(data.get("gens"), f"{path}.gens")
    if gens < 0:
        raise _fail("Generator count must be non-negative", f"{path}.gens")
    rels = _rows(data.get("rels", []), f"{path}.rels")
    for i, row in enumerate(rels):
        if len(row) != gens:
            raise _fail(f"Relation has {len(row)} entries for {gens} generators", f"{path}.rels[{i}]")
    return FpGroup(gens, IntMatrix.from_rows(rels, cols=gens))


def _hom(source: FpGroup, target: FpGroup, data: Any, path: str, what: str) -> GroupHom:
    matrix = _matrix(data, (target.generators, source.generators), path, what)
    return GroupHom(source, target, matrix)


def _space(data: Any, path: str, resolver: Optional[Resolver]) -> FiniteSpace:
    if isinstance(data, str):
        return _resolve(resolver, "space", data, None, path)
    data = _mapping(data, path)
    points = [_str(p, f"{path}.points[{i}]") for i, p in enumerate(_list(data.get("points"), f"{path}.points"))]
    leq = []
    for i, pair in enumerate(_list(data.get("leq", []), f"{path}.leq")):
        pair = _list(pair, f"{path}.leq[{i}]")
        if len(pair) != 2:
            raise _fail("An order pair has exactly two points", f"{path}.leq[{i}]")
        leq.append((_str(pair[0], f"{path}.leq[{i}][0]"), _str(pair[1], f"{path}.leq[{i}][1]")))
    return build_space(points, leq, name=data.get("name", "space"))


def _sheaf(
    data: Any, path: str, resolver: Optional[Resolver], space: Optional[FiniteSpace] = None
) -> Sheaf:
    if isinstance(data, str):
        if space is None:
            raise _fail("A sheaf named by reference needs a space", path)
        return _resolve(resolver, "sheaf", data, space, path)
    data = _mapping(data, path)
    if "space" in data:
        declared = _space(data["space"], f"{path}.space", resolver)
        if space is not None and declared != space:
            raise AmbientMismatch(f"Sheaf at {path} lives on '{declared.name}', not '{space.name}'")
        space = declared
    if space is None:
        raise _fail("Missing 'space'", f"{path}.space")

    stalk_data = _mapping(data.get("stalks"), f"{path}.stalks")
    stalks = {p: _group(g, f"{path}.stalks.{p}") for p, g in stalk_data.items()}
    for p in stalks:
        space.check_point(p)
    restrictions = {}
    for key, matrix in _mapping(data.get("restrictions", {}), f"{path}.restrictions").items():
        where = f"{path}.restrictions.{key}"
        parts = key.split(":")
        if len(parts) != 2:
            raise _fail(f"Restriction key '{key}' is not of the form 'p:q'", where)
        p, q = parts
        for point in (p, q):
            if point not in stalks:
                raise _fail(f"Restriction '{key}' names a point without a stalk", where)
        restrictions[(p, q)] = _hom(stalks[p], stalks[q], matrix, where, f"Restriction '{key}'")
    return build_sheaf(space, stalks, restrictions, name=data.get("name", "sheaf"))


def _sheaf_hom(source: Sheaf, target: Sheaf, data: Any, path: str) -> SheafHom:
    data = _mapping(data, path)
    maps = {}
    for p in source.space.points:
        if p not in data:
            raise _fail(f"No stalk map at point '{p}'", path)
        maps[p] = _hom(source.stalk(p), target.stalk(p), data[p], f"{path}.{p}", f"Stalk map at '{p}'")
    for p in data:
        source.space.check_point(p)
    return SheafHom(source, target, maps)


def _sheaf_complex(
    data: Mapping[str, Any], resolver: Optional[Resolver]
) -> tuple[SheafComplex, Optional[Resolution]]:
    space = _space(data.get("space"), "$.space", resolver)
    terms = [
        _sheaf(term, f"$.terms[{k}]", resolver, space)
        for k, term in enumerate(_list(data.get("terms"), "$.terms"))
    ]
    if not terms:
        raise _fail("A complex needs at least one term", "$.terms")
    raw = _list(data.get("differentials", []), "$.differentials")
    if len(raw) != len(terms) - 1:
        raise _fail(f"{len(terms)} terms need {len(terms) - 1} differentials", "$.differentials")
    differentials = [
        _sheaf_hom(terms[k], terms[k + 1], d, f"$.differentials[{k}]") for k, d in enumerate(raw)
    ]
    name = data.get("name", "complex")
    complex_ = SheafComplex(terms=tuple(terms), differentials=tuple(differentials), name=name)

    if "augmentation" not in data and "base" not in data:
        return complex_, None
    if "base" not in data or "augmentation" not in data:
        raise _fail("A resolution needs both 'base' and 'augmentation'", "$")
    base = _sheaf(data["base"], "$.base", resolver, space)
    augmentation = _sheaf_hom(base, terms[0], data["augmentation"], "$.augmentation")
    complete = data.get("complete", False)
    if not isinstance(complete, bool):
        raise _fail("Expected true or false", "$.complete")
    resolution = Resolution.build(base, augmentation, differentials, complete=complete)
    return complex_, resolution


def _cell_key(key: str, path: str) -> tuple[int, int]:
    try:
        p, q = (int(x) for x in key.split(","))
    except ValueError:
        raise _fail(f"Cell key '{key}' is not of the form 'p,q'", path) from None
    return p, q


def _double_complex(data: Mapping[str, Any]) -> DoubleComplex:
    bounds = _list(data.get("bounds"), "$.bounds")
    if len(bounds) != 2:
        raise _fail("Bounds are [pmax, qmax]", "$.bounds")
    pmax, qmax = _int(bounds[0], "$.bounds[0]"), _int(bounds[1], "$.bounds[1]")
    cells = {}
    for key, group in _mapping(data.get("cells", {}), "$.cells").items():
        cells[_cell_key(key, f"$.cells.{key}")] = _group(group, f"$.cells.{key}")
    trivial = FpGroup.trivial()

    def maps(label: str, step: tuple[int, int]) -> dict:
        result = {}
        for key, matrix in _mapping(data.get(label, {}), f"$.{label}").items():
            where = f"$.{label}.{key}"
            p, q = _cell_key(key, where)
            target = (p + step[0], q + step[1])
            result[(p, q)] = _hom(
                cells.get((p, q), trivial),
                cells.get(target, trivial),
                matrix,
                where,
                f"{label.capitalize()} map at ({p},{q})",
            )
        return result

    return DoubleComplex(
        pmax=pmax,
        qmax=qmax,
        cells=cells,
        vertical=maps("vertical", (0, 1)),
        horizontal=maps("horizontal", (1, 0)),
        name=data.get("name", "double"),
    )


def _resolve(resolver: Optional[Resolver], kind: str, name: str, space, path: str):
    if resolver is None:
        raise _fail(f"Cannot resolve {kind} '{name}' by name here", path)
    try:
        return resolver(kind, name, space)
    except UnknownName as e:
        raise _fail(e.message, path) from e


def from_payload(data: Any, resolver: Optional[Resolver] = None) -> WorkspaceFile:
    """Validate a decoded document and build what it describes."""
    data = _mapping(data, "$")
    version = data.get("format_version", FORMAT_VERSION)
    if version != FORMAT_VERSION:
        raise _fail(f"Unsupported format_version {version!r}", "$.format_version")
    kind = data.get("kind")
    if kind not in KINDS:
        raise _fail(f"Unknown kind {kind!r}; expected one of {', '.join(KINDS)}", "$.kind")
    name = data.get("name", kind)

    resolution = None
    if kind == "space":
        value = _space(data, "$", resolver)
    elif kind == "sheaf":
        value = _sheaf(data, "$", resolver)
    elif kind == "sheaf_complex":
        value, resolution = _sheaf_complex(data, resolver)
    else:
        value = _double_complex(data)
    logger.debug(f"Loaded {kind} '{name}'")
    return WorkspaceFile(kind=kind, name=name, value=value, resolution=resolution)


def parse_workspace(text: str, resolver: Optional[Resolver] = None) -> WorkspaceFile:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(e.msg, e.lineno, e.colno) from e
    return from_payload(data, resolver)


def load_workspace(path: Path, resolver: Optional[Resolver] = None) -> WorkspaceFile:
    """Read, parse and validate a workspace file."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise ParseError(f"File is not UTF-8: {e.reason}", 1, e.start + 1) from e
    return parse_workspace(text, resolver)


# writing


def group_payload(group: FpGroup) -> dict:
    return {"gens": group.generators, "rels": group.relations.to_rows()}


def space_payload(space: FiniteSpace) -> dict:
    return {
        "name": space.name,
        "points": list(space.points),
        "leq": [[q, p] for q, p in space.covering_pairs],
    }


def _sheaf_body(F: Sheaf) -> dict:
    return {
        "name": F.name,
        "stalks": {p: group_payload(F.stalk(p)) for p in F.space.points},
        "restrictions": {
            f"{p}:{q}": F.restrict(p, q).matrix.to_rows() for q, p in F.space.covering_pairs
        },
    }


def _stalk_maps(phi: SheafHom) -> dict:
    return {p: phi.at(p).matrix.to_rows() for p in phi.source.space.points}


def to_payload(value: Any) -> dict:
    """Canonical document for a space, sheaf, complex, resolution or double complex."""
    header = {"format_version": FORMAT_VERSION}
    if isinstance(value, FiniteSpace):
        return {**header, "kind": "space", **space_payload(value)}
    if isinstance(value, Sheaf):
        return {**header, "kind": "sheaf", "space": space_payload(value.space), **_sheaf_body(value)}
    if isinstance(value, Resolution):
        complex_ = SheafComplex(
            terms=value.terms, differentials=value.differentials, name=f"res({value.base.name})"
        )
        payload = to_payload(complex_)
        payload["base"] = _sheaf_body(value.base)
        payload["augmentation"] = _stalk_maps(value.augmentation)
        payload["complete"] = value.complete
        return payload
    if isinstance(value, SheafComplex):
        return {
            **header,
            "kind": "sheaf_complex",
            "name": value.name,
            "space": space_payload(value.space),
            "terms": [_sheaf_body(L) for L in value.terms],
            "differentials": [_stalk_maps(d) for d in value.differentials],
        }
    if isinstance(value, DoubleComplex):
        return {
            **header,
            "kind": "double_complex",
            "name": value.name,
            "bounds": [value.pmax, value.qmax],
            "cells": {f"{p},{q}": group_payload(g) for (p, q), g in value.cells.items()},
            "vertical": {f"{p},{q}": d.matrix.to_rows() for (p, q), d in value.vertical.items()},
            "horizontal": {
                f"{p},{q}": d.matrix.to_rows() for (p, q), d in value.horizontal.items()
            },
        }
    raise TypeError(f"Cannot serialise {type(value).__name__}")


def dump_workspace(value: Any) -> str:
    if isinstance(value, WorkspaceFile):
        return value.dumps()
    return dump_json(to_payload(value), pretty=True)


def digest(value: Any) -> str:
    """sha256 of the canonical serialisation."""
    return hashlib.sha256(dump_workspace(value).encode("utf-8")).hexdigest()
