"""JSON configuration: schemas, validation and object construction.

A run config is one JSON object. Every command accepts ``space`` (inline
object or a path to a space file) plus its own keys; anything else is
rejected before computation starts.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import jsonschema

from .axioms import AXIOMS, STRATEGIES
from .errors import UsageError
from .norms import CANDIDATES, KERNELS, TCONORM_NAMES, TNORM_NAMES, NormPair
from .sequences import FAMILIES, GENERATORS, FunctionSequence, NestedFamily, PointSequence
from .space import METRICS, FiniteUniverse, NaturalsUniverse, RealUniverse, naturals_example, standard_from_metric, tabulated

SCHEMA_VERSION = 1

_num = {"type": "number"}
_pos = {"type": "number", "exclusiveMinimum": 0}
_unit = {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1}
_count = {"type": "integer", "minimum": 1}
_grid = {"type": "array", "items": _pos, "minItems": 1}
_unit_grid = {"type": "array", "items": _unit, "minItems": 1}
_point = {"type": ["string", "number", "array"]}
_points = {"type": "array", "items": _point, "minItems": 1}

UNIVERSE_SCHEMA = {
    "type": "object",
    "required": ["kind"],
    "properties": {"kind": {"enum": ["finite_labeled", "real_vector", "naturals"]}},
    "allOf": [
        {
            "if": {"properties": {"kind": {"const": "finite_labeled"}}},
            "then": {
                "properties": {
                    "kind": True,
                    "labels": {"type": "array", "items": {"type": ["string", "number"]}, "minItems": 1},
                    "distances": {"type": "array", "items": {"type": "array", "items": _num}},
                    "points": {"type": "array", "items": {"type": ["number", "array"]}, "minItems": 1},
                    "metric": {"enum": list(METRICS)},
                },
                "additionalProperties": False,
                "anyOf": [{"required": ["labels"]}, {"required": ["points"]}],
            },
        },
        {
            "if": {"properties": {"kind": {"const": "real_vector"}}},
            "then": {
                "properties": {
                    "kind": True,
                    "dimension": _count,
                    "metric": {"enum": list(METRICS)},
                    "box": {"type": "array", "items": _num, "minItems": 2, "maxItems": 2},
                },
                "additionalProperties": False,
            },
        },
        {
            "if": {"properties": {"kind": {"const": "naturals"}}},
            "then": {
                "properties": {"kind": True, "bound": {"type": "integer", "minimum": 2}},
                "required": ["bound"],
                "additionalProperties": False,
            },
        },
    ],
}

SPACE_SCHEMA = {
    "type": "object",
    "required": ["universe", "construction"],
    "properties": {
        "universe": UNIVERSE_SCHEMA,
        "construction": {"enum": ["standard", "naturals", "tabulated"]},
        "tnorm": {"enum": list(TNORM_NAMES)},
        "tconorm": {"enum": list(TCONORM_NAMES)},
        "lambda_knots": _grid,
        "table": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["a", "b", "degrees"],
                "properties": {
                    "a": {"type": ["string", "number"]},
                    "b": {"type": ["string", "number"]},
                    "degrees": {"type": "array", "items": {"type": "array", "items": _num, "minItems": 3, "maxItems": 3}},
                },
                "additionalProperties": False,
            },
        },
    },
    "additionalProperties": False,
}

_space_ref = {"type": ["object", "string"]}

_common = {
    "space": _space_ref,
    "seed": {"type": "integer", "minimum": 0},
    "samples": _count,
    "lambda_grid": _grid,
    "epsilon_grid": _unit_grid,
    "tol": {"type": "number", "minimum": 0},
}

COMMAND_SCHEMAS: dict[str, dict] = {
    "check-axioms": {
        "type": "object",
        "properties": {
            **_common,
            "slope_bound": _pos,
            "limit_tol": _pos,
            "lambda_max": _pos,
            "max_witnesses": _count,
            "axioms": {"type": "array", "items": {"enum": list(AXIOMS)}, "minItems": 1},
            "search": {
                "type": "object",
                "properties": {
                    "axioms": {"type": "array", "items": {"enum": list(AXIOMS)}, "minItems": 1},
                    "budget": _count,
                    "strategy": {"enum": list(STRATEGIES)},
                },
                "additionalProperties": False,
            },
        },
        "required": ["space"],
        "additionalProperties": False,
    },
    "topology": {
        "type": "object",
        "properties": {
            **_common,
            "task": {"enum": ["ball", "hausdorff", "nb", "closure-lemma", "finite-topology", "baire", "base"]},
            "center": _point,
            "point": _point,
            "a": _point,
            "b": _point,
            "epsilon": _unit,
            "epsilon1": _unit,
            "epsilon2": _unit,
            "lambda": _pos,
            "subset": _points,
            "centers": _points,
            "dense_points": _points,
            "depth": _count,
            "exact": {"type": "boolean"},
        },
        "required": ["space", "task"],
        "additionalProperties": False,
    },
    "sequence": {
        "type": "object",
        "properties": {
            **_common,
            "task": {"enum": ["converge", "cauchy", "ndz", "completeness", "uniform"]},
            "sequence": {
                "type": "object",
                "properties": {
                    "generator": {"enum": list(GENERATORS)},
                    "params": {"type": "object", "additionalProperties": _point},
                    "terms": _points,
                    "n_max": _count,
                },
                "oneOf": [{"required": ["generator"]}, {"required": ["terms"]}],
                "additionalProperties": False,
            },
            "limit": _point,
            "epsilon": _unit,
            "n_max": {"type": "integer", "minimum": 2},
            "family": {
                "type": "object",
                "properties": {
                    "sets": {"type": "array", "items": _points, "minItems": 1},
                    "shrinking_intervals": _count,
                },
                "oneOf": [{"required": ["sets"]}, {"required": ["shrinking_intervals"]}],
                "additionalProperties": False,
            },
            "function": {
                "type": "object",
                "properties": {
                    "family": {"enum": list(FAMILIES)},
                    "params": {"type": "object", "additionalProperties": _num},
                    "domain": {"type": "array", "items": _num, "minItems": 1},
                },
                "required": ["family"],
                "additionalProperties": False,
            },
            "continuity": {
                "type": "object",
                "properties": {
                    "points": {"type": "array", "items": _num, "minItems": 1},
                    "delta_grid": _grid,
                },
                "additionalProperties": False,
            },
            "trials": _count,
        },
        "required": ["space", "task"],
        "additionalProperties": False,
    },
    "norms": {
        "type": "object",
        "properties": {
            "seed": {"type": "integer", "minimum": 0},
            "samples": _count,
            "tol": {"type": "number", "minimum": 0},
            "slope_bound": _pos,
            "task": {"enum": ["verify", "residual", "diagonal"]},
            "kernel": {"enum": sorted(set(KERNELS) | set(CANDIDATES))},
            "kind": {"enum": ["tnorm", "tconorm"]},
            "tnorm": {"enum": list(TNORM_NAMES)},
            "tconorm": {"enum": list(TCONORM_NAMES)},
            "epsilon1": _unit,
            "epsilon2": {"type": "number", "minimum": 0, "exclusiveMaximum": 1},
            "epsilon5": _unit,
        },
        "required": ["task"],
        "additionalProperties": False,
    },
}


def _where(err: jsonschema.ValidationError) -> str:
    path = "/".join(str(p) for p in err.absolute_path)
    return path or "<root>"


def validate(instance: Any, schema: dict, what: str) -> None:
    """Raise UsageError naming the first offending key."""
    validator = jsonschema.Draft202012Validator(schema)
    errors = sorted(validator.iter_errors(instance), key=lambda e: (list(e.absolute_path), e.message))
    if errors:
        err = jsonschema.exceptions.best_match(errors)
        raise UsageError(f"invalid {what} at {_where(err)}: {err.message}")


def load_json(path: str | Path) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise UsageError(f"file not found: {path}") from None
    except json.JSONDecodeError as e:
        raise UsageError(f"{path} is not valid JSON: {e}") from None


def resolve_space(ref: Any, base: Path | None = None) -> dict:
    if isinstance(ref, str):
        p = Path(ref)
        if base is not None and not p.is_absolute():
            p = base / p
        ref = load_json(p)
    validate(ref, SPACE_SCHEMA, "space description")
    return ref


def _universe(d: dict):
    kind = d["kind"]
    if kind == "naturals":
        return NaturalsUniverse(d["bound"])
    if kind == "real_vector":
        return RealUniverse(d.get("dimension", 1), d.get("metric", "euclidean"), tuple(d.get("box", (0.0, 1.0))))
    if "points" in d:
        if "distances" in d:
            raise UsageError("finite_labeled universe: give either points or distances, not both")
        return FiniteUniverse.from_points(d["points"], d.get("labels"), d.get("metric", "euclidean"))
    return FiniteUniverse(d["labels"], d.get("distances"))


def build_space(desc: dict):
    """Construct an NmsSpace from a validated description."""
    validate(desc, SPACE_SCHEMA, "space description")
    U = _universe(desc["universe"])
    construction = desc["construction"]
    default = ("lukasiewicz", "probsum") if construction == "naturals" else ("min", "max")
    norms = NormPair.named(desc.get("tnorm", default[0]), desc.get("tconorm", default[1]))
    extra = {"lambda_knots", "table"} & set(desc)
    if construction != "tabulated" and extra:
        raise UsageError(f"keys {sorted(extra)} only apply to the tabulated construction")
    if construction == "standard":
        return standard_from_metric(U, norms)
    if construction == "naturals":
        if not isinstance(U, NaturalsUniverse):
            raise UsageError("the naturals construction needs a naturals universe")
        return naturals_example(U.bound, norms)
    if not isinstance(U, FiniteUniverse):
        raise UsageError("the tabulated construction needs a finite_labeled universe")
    if "lambda_knots" not in desc or "table" not in desc:
        raise UsageError("the tabulated construction needs lambda_knots and table")
    table = {(str(e["a"]), str(e["b"])): e["degrees"] for e in desc["table"]}
    return tabulated(U, desc["lambda_knots"], table, norms)


def validate_run(command: str, cfg: Any) -> None:
    validate(cfg, COMMAND_SCHEMAS[command], f"{command} config")


def build_sequence(d: dict) -> PointSequence:
    if "terms" in d:
        if "generator" in d or "params" in d:
            raise UsageError("sequence: terms cannot be combined with generator/params")
        return PointSequence.from_list(d["terms"])
    kw = {"n_max": d["n_max"]} if "n_max" in d else {}
    return PointSequence.named(d["generator"], **kw, **d.get("params", {}))


def build_family(d: dict) -> NestedFamily:
    if "sets" in d:
        return NestedFamily(d["sets"])
    return NestedFamily.shrinking_intervals(d["shrinking_intervals"])


def build_function(d: dict) -> FunctionSequence:
    return FunctionSequence.named(d["family"], d.get("domain"), **d.get("params", {}))
