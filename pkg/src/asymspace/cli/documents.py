"""JSON task and space documents with exact rational fields.

Rationals are written as strings ("3", "-1/2", "−1/2"); JSON integers are
accepted too.  Decimal numbers are refused wherever they appear so a
document never loses exactness on the way in.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from ..geometry import InvalidNormError, PolyAsymNorm
from ..ratlp import to_rat

TASKS = (
    "norm-check",
    "ball-intersect",
    "bip-check",
    "op-norm",
    "extend",
    "embed",
    "project",
    "necessity-demo",
)


class DocumentError(ValueError):
    """Malformed document; ``where`` is a field path or a line/column."""

    def __init__(self, where: str, message: str):
        super().__init__(f"{where}: {message}")
        self.where = where
        self.message = message


class _Decimal:
    """Placeholder for a decimal literal, reported once its field path is known."""

    def __init__(self, text: str):
        self.text = text


def _loads(text: str, source: str):
    try:
        return json.loads(text, parse_float=_Decimal, parse_constant=_Decimal)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{source}:{exc.lineno}:{exc.colno}", exc.msg) from None


# ---------------------------------------------------------------- field readers
def _rat(value, path: str) -> Fraction:
    if isinstance(value, _Decimal):
        raise DocumentError(path, f"decimal literal {value.text} is not allowed; write it as a rational string")
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise DocumentError(path, f"expected a rational string, got {type(value).__name__}")
    try:
        return to_rat(value)
    except (ValueError, TypeError, ZeroDivisionError):
        raise DocumentError(path, f"not an exact rational: {value!r}") from None


def _int(value, path: str, minimum: int = 0) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise DocumentError(path, "expected an integer")
    if value < minimum:
        raise DocumentError(path, f"must be at least {minimum}")
    return value


def _list(value, path: str) -> list:
    if not isinstance(value, list):
        raise DocumentError(path, "expected a list")
    return value


def _obj(value, path: str) -> dict:
    if not isinstance(value, dict):
        raise DocumentError(path, "expected an object")
    return value


def _vec(value, path: str, dim: int | None = None) -> tuple:
    items = _list(value, path)
    vec = tuple(_rat(v, f"{path}[{i}]") for i, v in enumerate(items))
    if dim is not None and len(vec) != dim:
        raise DocumentError(path, f"expected {dim} entries, got {len(vec)}")
    return vec


def _vecs(value, path: str, dim: int | None = None) -> tuple:
    return tuple(_vec(v, f"{path}[{i}]", dim) for i, v in enumerate(_list(value, path)))


def _require(doc: dict, key: str, path: str):
    if key not in doc:
        raise DocumentError(f"{path}.{key}", "missing field")
    return doc[key]


def _no_extra(doc: dict, allowed: set, path: str) -> None:
    extra = sorted(set(doc) - allowed)
    if extra:
        raise DocumentError(f"{path}.{extra[0]}", "unknown field")


def render(value: Any):
    """Replace every Fraction by its canonical string, recursively."""
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, dict):
        return {k: render(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [render(v) for v in value]
    return value


# ---------------------------------------------------------------- spaces
@dataclass(frozen=True)
class SpaceDocument:
    dimension: int
    generators: tuple
    name: str | None = None
    ref: str | None = None  # relative path it was loaded from, if any

    def norm(self, path: str = "$") -> PolyAsymNorm:
        try:
            return PolyAsymNorm(self.generators, name=self.name)
        except InvalidNormError as exc:
            raise DocumentError(f"{path}.generators", str(exc)) from None

    def to_json(self) -> dict:
        out = {"dimension": self.dimension, "generators": render(self.generators)}
        if self.name is not None:
            out["name"] = self.name
        return out


def parse_space(doc, path: str = "$") -> SpaceDocument:
    doc = _obj(doc, path)
    _no_extra(doc, {"dimension", "generators", "name"}, path)
    dim = _int(_require(doc, "dimension", path), f"{path}.dimension", minimum=1)
    gens = _vecs(_require(doc, "generators", path), f"{path}.generators", dim)
    if not gens:
        raise DocumentError(f"{path}.generators", "at least one generator is required")
    name = doc.get("name")
    if name is not None and not isinstance(name, str):
        raise DocumentError(f"{path}.name", "expected a string")
    return SpaceDocument(dim, gens, name)


def load_space(text: str, source: str = "<space>") -> SpaceDocument:
    return parse_space(_loads(text, source))


def _space_field(value, path: str, base_dir: str) -> SpaceDocument:
    if isinstance(value, str):
        full = os.path.join(base_dir, value)
        try:
            with open(full, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise DocumentError(path, f"cannot read space file {value!r}: {exc.strerror}") from None
        sd = parse_space(_loads(text, value), f"{value}$")
        return SpaceDocument(sd.dimension, sd.generators, sd.name, ref=value)
    return parse_space(value, path)


# ---------------------------------------------------------------- tasks
def _ball_entry(value, path: str, dim: int) -> dict:
    e = _obj(value, path)
    _no_extra(e, {"center", "radius", "orientation"}, path)
    out = {"center": _vec(_require(e, "center", path), f"{path}.center", dim)}
    out["radius"] = _rat(_require(e, "radius", path), f"{path}.radius")
    if out["radius"] < 0:
        raise DocumentError(f"{path}.radius", "radius must be nonnegative")
    if "orientation" in e:
        if e["orientation"] not in ("forward", "backward"):
            raise DocumentError(f"{path}.orientation", "expected 'forward' or 'backward'")
        out["orientation"] = e["orientation"]
    return out


def _family_entry(value, path: str, dim: int) -> dict:
    e = _obj(value, path)
    _no_extra(e, {"center", "radius", "r", "s"}, path)
    out = {"center": _vec(_require(e, "center", path), f"{path}.center", dim)}
    if "radius" in e:
        if "r" in e or "s" in e:
            raise DocumentError(path, "give either 'radius' or both 'r' and 's'")
        out["radius"] = _rat(e["radius"], f"{path}.radius")
        keys = ("radius",)
    else:
        out["r"] = _rat(_require(e, "r", path), f"{path}.r")
        out["s"] = _rat(_require(e, "s", path), f"{path}.s")
        keys = ("r", "s")
    for k in keys:
        if out[k] <= 0:
            raise DocumentError(f"{path}.{k}", "family radii must be positive")
    return out


def _operator_fields(doc: dict, path: str, n: int, m: int) -> dict:
    out = {}
    if "matrix" in doc:
        if "domain" in doc or "images" in doc:
            raise DocumentError(path, "give either 'matrix' or 'domain' with 'images'")
        rows = _vecs(doc["matrix"], f"{path}.matrix", n)
        if len(rows) != m:
            raise DocumentError(f"{path}.matrix", f"expected {m} rows (target dimension), got {len(rows)}")
        out["matrix"] = rows
    else:
        out["domain"] = _vecs(_require(doc, "domain", path), f"{path}.domain", n)
        out["images"] = _vecs(_require(doc, "images", path), f"{path}.images", m)
        if len(out["images"]) != len(out["domain"]):
            raise DocumentError(f"{path}.images", "need one image per domain basis vector")
    return out


@dataclass
class TaskDocument:
    task: str
    space: SpaceDocument
    fields: dict = field(default_factory=dict)
    target: SpaceDocument | None = None

    def to_json(self) -> dict:
        out: dict = {"task": self.task}
        out["space"] = self.space.ref if self.space.ref else self.space.to_json()
        if self.target is not None:
            out["target"] = self.target.ref if self.target.ref else self.target.to_json()
        out.update(render(self.fields))
        return out


_TASK_FIELDS = {
    "norm-check": {"points"},
    "ball-intersect": {"balls"},
    "bip-check": {"family"},
    "op-norm": {"target", "matrix", "domain", "images"},
    "extend": {"target", "matrix", "domain", "images", "beta", "engine"},
    "embed": {"points"},
    "project": {"subspace"},
    "necessity-demo": {"family"},
}


def parse_task(doc, base_dir: str = ".") -> TaskDocument:
    doc = _obj(doc, "$")
    task = _require(doc, "task", "$")
    if task not in TASKS:
        raise DocumentError("$.task", f"unknown task {task!r}; expected one of {', '.join(TASKS)}")
    _no_extra(doc, {"task", "space"} | _TASK_FIELDS[task], "$")
    space = _space_field(_require(doc, "space", "$"), "$.space", base_dir)
    n = space.dimension
    fields: dict = {}
    target = None
    if task in ("norm-check", "embed") and "points" in doc:
        fields["points"] = _vecs(doc["points"], "$.points", n)
    elif task == "ball-intersect":
        balls = _list(_require(doc, "balls", "$"), "$.balls")
        if not balls:
            raise DocumentError("$.balls", "at least one ball is required")
        fields["balls"] = [_ball_entry(b, f"$.balls[{i}]", n) for i, b in enumerate(balls)]
    elif task in ("bip-check", "necessity-demo"):
        fam = _list(_require(doc, "family", "$"), "$.family")
        if not fam:
            raise DocumentError("$.family", "at least one entry is required")
        fields["family"] = [_family_entry(e, f"$.family[{i}]", n) for i, e in enumerate(fam)]
    elif task in ("op-norm", "extend"):
        target = _space_field(_require(doc, "target", "$"), "$.target", base_dir)
        fields.update(_operator_fields(doc, "$", n, target.dimension))
        if task == "extend":
            if "matrix" in fields:
                raise DocumentError("$.matrix", "extend needs a partial operator given by 'domain' and 'images'")
            if "beta" in doc:
                fields["beta"] = _rat(doc["beta"], "$.beta")
                if fields["beta"] < 0:
                    raise DocumentError("$.beta", "bound must be nonnegative")
            if "engine" in doc:
                if doc["engine"] not in ("lp", "coordinatewise"):
                    raise DocumentError("$.engine", "expected 'lp' or 'coordinatewise'")
                fields["engine"] = doc["engine"]
    elif task == "project":
        fields["subspace"] = _vecs(_require(doc, "subspace", "$"), "$.subspace", n)
    return TaskDocument(task, space, fields, target)


def load_task(path: str) -> TaskDocument:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise DocumentError(path, f"cannot read task file: {exc.strerror}") from None
    return parse_task(_loads(text, path), os.path.dirname(os.path.abspath(path)))


def dumps(doc) -> str:
    data = doc.to_json() if hasattr(doc, "to_json") else render(doc)
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"
