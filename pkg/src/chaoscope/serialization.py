"""
JSON encoding of operator specs, vectors and reports.

Every document is checked against the bundled JSON Schema before it is
decoded, so unknown fields and malformed values are rejected up front;
semantic checks (zone overlaps, declared limits, block layout) are then done
by the operator constructors themselves.
"""

from __future__ import annotations

import json
import math
from functools import lru_cache
from importlib import resources

import jsonschema

from .operators import (
    BilateralShift,
    Block,
    Const,
    Diagonal,
    DirectSum,
    FiniteMatrix,
    FiniteRankPerturbation,
    OperatorSpec,
    Rational,
    ScalarShift,
    Scale,
    SparseVector,
    SpecError,
    Term,
    UnilateralShift,
    WeightRule,
    Zone,
)

__all__ = [
    "schema",
    "validate",
    "spec_to_dict",
    "spec_from_dict",
    "parse_spec",
    "to_json",
    "vector_to_dict",
    "vector_from_dict",
    "parse_vector",
    "canonical",
    "dumps",
]


@lru_cache(maxsize=1)
def schema() -> dict:
    text = resources.files("chaoscope").joinpath("schemas/chaoscope.schema.json").read_text()
    return json.loads(text)


@lru_cache(maxsize=None)
def _validator(kind: str):
    root = schema()
    if kind not in root["$defs"]:
        raise KeyError(f"no schema named {kind!r}")
    doc = dict(root, **{"$ref": f"#/$defs/{kind}"})
    return jsonschema.Draft202012Validator(doc)


def validate(doc, kind: str) -> None:
    """Raise SpecError when ``doc`` does not match the schema ``kind``."""
    err = jsonschema.exceptions.best_match(_validator(kind).iter_errors(doc))
    if err is not None:
        path = "/".join(str(p) for p in err.absolute_path) or "<root>"
        raise SpecError(f"{kind} document invalid at {path}: {err.message}")


# ---------------------------------------------------------------------------
# numbers


def _cx_out(z: complex) -> list[float]:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def _cx_in(v) -> complex:
    if isinstance(v, list):
        return complex(float(v[0]), float(v[1]))
    return complex(float(v))


def canonical(obj):
    """Replace non-finite floats by strings so the output is strict JSON."""
    if isinstance(obj, float):
        if math.isnan(obj):
            return "nan"
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        return obj
    if isinstance(obj, dict):
        return {str(k): canonical(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [canonical(v) for v in obj]
    if isinstance(obj, complex):
        return _cx_out(obj)
    if hasattr(obj, "item"):  # numpy scalars
        return canonical(obj.item())
    return obj


def dumps(obj, pretty: bool = False) -> str:
    """Deterministic JSON text: sorted keys, fixed separators."""
    if pretty:
        return json.dumps(canonical(obj), sort_keys=True, indent=2, allow_nan=False)
    return json.dumps(canonical(obj), sort_keys=True, separators=(",", ":"), allow_nan=False)


# ---------------------------------------------------------------------------
# vectors


def vector_to_dict(v: SparseVector) -> dict:
    return {"entries": {str(i): _cx_out(z) for i, z in v.items()}}


def vector_from_dict(d) -> SparseVector:
    validate(d, "vector")
    return SparseVector({int(i): _cx_in(z) for i, z in d["entries"].items()})


def parse_vector(text: str) -> SparseVector:
    return vector_from_dict(_loads(text))


# ---------------------------------------------------------------------------
# weight rules


def _formula_to_dict(f) -> dict:
    if isinstance(f, Const):
        return {"const": f.value}
    return {"rational": {"num": list(f.num), "den": list(f.den), "limit": f.limit}}


def _formula_from_dict(d):
    if "const" in d:
        return Const(float(d["const"]))
    r = d["rational"]
    return Rational(tuple(map(float, r["num"])), tuple(map(float, r["den"])), float(r["limit"]))


def _weights_to_dict(w: WeightRule) -> dict:
    out = {
        "zones": [
            {
                "from": "-inf" if z.lo is None else z.lo,
                "to": "+inf" if z.hi is None else z.hi,
                "formula": _formula_to_dict(z.formula),
            }
            for z in w.zones
        ]
    }
    if w.exceptions:
        out["exceptions"] = {str(i): x for i, x in w.exceptions}
    return out


def _weights_from_dict(d: dict, domain: str) -> WeightRule:
    zones = tuple(
        Zone(
            None if z["from"] == "-inf" else int(z["from"]),
            None if z["to"] == "+inf" else int(z["to"]),
            _formula_from_dict(z["formula"]),
        )
        for z in d["zones"]
    )
    exc = tuple((int(i), float(x)) for i, x in d.get("exceptions", {}).items())
    return WeightRule(zones, exc, domain)


# ---------------------------------------------------------------------------
# operators


def spec_to_dict(op: OperatorSpec) -> dict:
    if isinstance(op, BilateralShift):
        return {"kind": "bilateral_shift", "direction": op.direction, "weights": _weights_to_dict(op.weights)}
    if isinstance(op, UnilateralShift):
        return {"kind": "unilateral_shift", "direction": op.direction, "weights": _weights_to_dict(op.weights)}
    if isinstance(op, FiniteMatrix):
        return {"kind": "finite_matrix", "entries": [[_cx_out(z) for z in row] for row in op.matrix]}
    if isinstance(op, Diagonal):
        return {"kind": "diagonal", "head": [_cx_out(z) for z in op.head], "tail": [_cx_out(z) for z in op.tail]}
    if isinstance(op, Scale):
        return {"kind": "scale", "c": _cx_out(op.c), "inner": spec_to_dict(op.inner)}
    if isinstance(op, ScalarShift):
        return {"kind": "scalar_shift", "lambda": _cx_out(op.lam), "inner": spec_to_dict(op.inner)}
    if isinstance(op, DirectSum):
        return {
            "kind": "direct_sum",
            "blocks": [
                {"offset": b.offset, "reflect": b.reflect, "stride": b.stride, "op": spec_to_dict(b.op)}
                for b in op.blocks
            ],
        }
    if isinstance(op, FiniteRankPerturbation):
        return {
            "kind": "finite_rank",
            "inner": spec_to_dict(op.inner),
            "terms": [
                {"u": vector_to_dict(t.u), "v": vector_to_dict(t.v), "c": _cx_out(t.c)} for t in op.terms
            ],
        }
    raise TypeError(f"cannot serialize {type(op).__name__}")


def _build(d: dict) -> OperatorSpec:
    kind = d["kind"]
    if kind == "bilateral_shift":
        return BilateralShift(d["direction"], _weights_from_dict(d["weights"], "Z"))
    if kind == "unilateral_shift":
        return UnilateralShift(d["direction"], _weights_from_dict(d["weights"], "N"))
    if kind == "finite_matrix":
        rows = [[_cx_in(z) for z in row] for row in d["entries"]]
        if any(len(r) != len(rows) for r in rows):
            raise SpecError("finite matrix must be square")
        return FiniteMatrix(rows)
    if kind == "diagonal":
        return Diagonal(tuple(map(_cx_in, d.get("head", []))), tuple(map(_cx_in, d.get("tail", []))))
    if kind == "scale":
        return Scale(_cx_in(d["c"]), _build(d["inner"]))
    if kind == "scalar_shift":
        return ScalarShift(_cx_in(d["lambda"]), _build(d["inner"]))
    if kind == "direct_sum":
        return DirectSum(
            tuple(
                Block(int(b["offset"]), _build(b["op"]), bool(b.get("reflect", False)), int(b.get("stride", 1)))
                for b in d["blocks"]
            )
        )
    if kind == "finite_rank":
        terms = tuple(
            Term(
                SparseVector({int(i): _cx_in(z) for i, z in t["u"]["entries"].items()}),
                SparseVector({int(i): _cx_in(z) for i, z in t["v"]["entries"].items()}),
                _cx_in(t.get("c", 1.0)),
            )
            for t in d["terms"]
        )
        return FiniteRankPerturbation(_build(d["inner"]), terms)
    raise SpecError(f"unknown operator kind {kind!r}")


def spec_from_dict(d) -> OperatorSpec:
    validate(d, "operator")
    try:
        return _build(d)
    except SpecError:
        raise
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise SpecError(str(exc)) from exc


def _loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"malformed JSON: {exc}") from exc


def parse_spec(text: str) -> OperatorSpec:
    """Decode and validate an operator spec from JSON text."""
    return spec_from_dict(_loads(text))


def to_json(op: OperatorSpec) -> str:
    """Canonical JSON text; ``parse_spec(to_json(op))`` reproduces it byte for byte."""
    return dumps(spec_to_dict(op))
