"""Space spec files, the space shorthand grammar and vector literals.

Everything here faces the user, so index lists are 1-based.
"""
from __future__ import annotations

import json
import math
import re
from pathlib import Path
from typing import Annotated, Literal, Union

import numpy as np
from pydantic import BaseModel, Field, ValidationError

from .exceptions import SpecParseError
from .logger import get_logger
from .records import one_based, zero_based
from .settings import get_settings
from .space import (
    DualOf,
    Lp,
    PolyhedralAbs,
    PolyhedralLinear,
    SpaceSpec,
    WeightedL1,
    as_vector,
    dual_space,
    example_space,
    linear_space,
    lp_space,
    polyhedral_space,
    summing_space,
    weighted_space,
)

logger = get_logger("greedybases.specfile")


# -------------------------------
# File models
# -------------------------------


class LpNorm(BaseModel):
    kind: Literal["lp"] = "lp"
    p: Union[Literal["inf"], float]

    model_config = {"extra": "forbid"}


class WeightedL1Norm(BaseModel):
    kind: Literal["weighted_l1"] = "weighted_l1"
    weights: list[float] = Field(min_length=1)

    model_config = {"extra": "forbid"}


class PolyhedralAbsNorm(BaseModel):
    kind: Literal["polyhedral_abs"] = "polyhedral_abs"
    family: list[list[Annotated[int, Field(ge=1)]]] = Field(min_length=1)

    model_config = {"extra": "forbid"}


class PolyhedralLinearNorm(BaseModel):
    kind: Literal["polyhedral_linear"] = "polyhedral_linear"
    rows: list[list[float]] = Field(min_length=1)

    model_config = {"extra": "forbid"}


class ExampleNorm(BaseModel):
    kind: Literal["example"] = "example"
    n: int = Field(ge=2)

    model_config = {"extra": "forbid"}


class DualOfNorm(BaseModel):
    kind: Literal["dual_of"] = "dual_of"
    inner: SpaceFile

    model_config = {"extra": "forbid"}


NormModel = Annotated[
    Union[LpNorm, WeightedL1Norm, PolyhedralAbsNorm, PolyhedralLinearNorm, ExampleNorm, DualOfNorm],
    Field(discriminator="kind"),
]


class SpaceFile(BaseModel):
    dim: int = Field(ge=1)
    norm: NormModel

    model_config = {"extra": "forbid"}


DualOfNorm.model_rebuild()
SpaceFile.model_rebuild()


def _to_model(space: SpaceSpec) -> SpaceFile:
    norm = space.norm
    if space.example is not None:
        model = ExampleNorm(n=space.example.n)
    elif isinstance(norm, Lp):
        model = LpNorm(p="inf" if math.isinf(norm.p) else norm.p)
    elif isinstance(norm, WeightedL1):
        model = WeightedL1Norm(weights=list(norm.weights))
    elif isinstance(norm, PolyhedralAbs):
        model = PolyhedralAbsNorm(family=[one_based(row) for row in norm.family])
    elif isinstance(norm, PolyhedralLinear):
        model = PolyhedralLinearNorm(rows=[list(r) for r in norm.rows])
    else:
        model = DualOfNorm(inner=_to_model(norm.inner))
    return SpaceFile(dim=space.dim, norm=model)


def _from_model(model: SpaceFile) -> SpaceSpec:
    norm = model.norm
    if isinstance(norm, LpNorm):
        space = lp_space(model.dim, float(norm.p))
    elif isinstance(norm, WeightedL1Norm):
        space = weighted_space(norm.weights)
    elif isinstance(norm, PolyhedralAbsNorm):
        space = polyhedral_space(model.dim, [zero_based(row) for row in norm.family])
    elif isinstance(norm, PolyhedralLinearNorm):
        space = linear_space(norm.rows)
    elif isinstance(norm, ExampleNorm):
        space = example_space(norm.n)
    else:
        space = dual_space(_from_model(norm.inner))
    if space.dim != model.dim:
        raise SpecParseError(f"Spec file declares dim {model.dim} but its norm has dimension {space.dim}")
    return space


def space_to_dict(space: SpaceSpec) -> dict:
    return _to_model(space).model_dump(mode="json")


def space_from_dict(data: dict) -> SpaceSpec:
    try:
        model = SpaceFile.model_validate(data)
    except ValidationError as exc:
        raise SpecParseError(f"Invalid space spec: {exc}") from exc
    return _from_model(model)


def save_space(space: SpaceSpec, path: str | Path) -> Path:
    path = Path(path).expanduser()
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(space_to_dict(space), indent=2))
    return path


def load_space(path: str | Path) -> SpaceSpec:
    path = Path(path).expanduser()
    try:
        data = json.loads(path.read_text())
    except FileNotFoundError as exc:
        raise SpecParseError(f"Spec file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise SpecParseError(f"Spec file {path} is not valid JSON: {exc}") from exc
    return space_from_dict(data)


# -------------------------------
# Shorthand grammar
# -------------------------------


def _number(text: str, what: str) -> float:
    try:
        value = float(text)
    except ValueError as exc:
        raise SpecParseError(f"Bad {what} {text!r}") from exc
    return value


def _integer(text: str, what: str) -> int:
    try:
        return int(text)
    except ValueError as exc:
        raise SpecParseError(f"Bad {what} {text!r}") from exc


def parse_space(text: str, dim: int | None = None) -> SpaceSpec:
    """
    lp:<p>[:<d>] | weighted:<w1,...> | example:<n> | summing:<d> | dual(<spec>) | file:<path>.
    An lp shorthand without d takes `dim`, falling back to the default dimension.
    """
    text = text.strip()
    if text.startswith("dual(") and text.endswith(")"):
        return dual_space(parse_space(text[5:-1], dim))
    kind, sep, rest = text.partition(":")
    if not sep or not rest:
        raise SpecParseError(f"Unknown space {text!r}; expected lp:, weighted:, example:, summing:, dual(...) or file:")

    if kind == "file":
        return load_space(rest)
    if kind == "lp":
        p_text, _, d_text = rest.partition(":")
        p = math.inf if p_text.lower() == "inf" else _number(p_text, "exponent")
        if d_text:
            d = _integer(d_text, "dimension")
        else:
            d = dim if dim is not None else get_settings().default_dim
        return lp_space(d, p)
    if kind == "weighted":
        return weighted_space([_number(w, "weight") for w in rest.split(",")])
    if kind == "example":
        return example_space(_integer(rest, "example size"))
    if kind == "summing":
        return summing_space(_integer(rest, "dimension"))
    raise SpecParseError(f"Unknown space kind {kind!r}")


# -------------------------------
# Vector literals
# -------------------------------

_NUMBER = r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"
_TERM = re.compile(
    r"\s*(?P<sign>[+-])?\s*(?:"
    rf"(?P<coef>{_NUMBER})?x\[(?P<a>\d+)\.\.(?P<b>\d+)\]"
    r"|e(?P<i>\d+)"
    r")\s*"
)


def _terms(text: str) -> list[tuple[float, int, int]]:
    """(coefficient, first, last) triples, 1-based and inclusive."""
    terms = []
    pos = 0
    while pos < len(text):
        match = _TERM.match(text, pos)
        if match is None or match.end() == pos:
            raise SpecParseError(f"Cannot parse vector literal {text!r} at position {pos}")
        if terms and match.group("sign") is None:
            raise SpecParseError(f"Missing '+' between terms in {text!r}")
        sign = -1.0 if match.group("sign") == "-" else 1.0
        if match.group("i") is not None:
            first = last = int(match.group("i"))
            coef = 1.0
        else:
            first, last = int(match.group("a")), int(match.group("b"))
            coef = float(match.group("coef") or 1.0)
            if last < first:
                raise SpecParseError(f"Empty interval [{first}..{last}] in {text!r}")
        if first < 1:
            raise SpecParseError(f"Indices are 1-based, got {first} in {text!r}")
        terms.append((sign * coef, first, last))
        pos = match.end()
    if not terms:
        raise SpecParseError("Empty vector literal")
    return terms


def _comma_list(text: str) -> list[float] | None:
    parts = [p.strip() for p in text.split(",")]
    try:
        return [float(p) for p in parts]
    except ValueError:
        return None


def vector_extent(text: str) -> int | None:
    """The smallest dimension a literal fits in; None for file literals."""
    text = text.strip()
    if text.startswith("file:"):
        return None
    values = _comma_list(text)
    if values is not None:
        return len(values)
    return max(last for _, _, last in _terms(text))


def parse_vector(text: str, dim: int | None = None) -> np.ndarray:
    """
    Comma list of coefficients, file:<path> holding a JSON array, or a sum of
    e<i> and <c>x[a..b] terms, e.g. "1x[1..6] - e8 + 0.5x[9..10]".
    """
    text = text.strip()
    if text.startswith("file:"):
        path = Path(text[5:]).expanduser()
        try:
            values = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise SpecParseError(f"Cannot read vector file {path}: {exc}") from exc
        return as_vector(values, dim)

    values = _comma_list(text)
    if values is not None:
        return as_vector(values, dim)

    terms = _terms(text)
    extent = max(last for _, _, last in terms)
    size = dim if dim is not None else extent
    if extent > size:
        raise SpecParseError(f"Vector literal {text!r} reaches index {extent}, space has dimension {size}")
    x = np.zeros(size)
    for coef, first, last in terms:
        x[first - 1:last] += coef
    return x
