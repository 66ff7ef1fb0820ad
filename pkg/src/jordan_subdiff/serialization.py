"""JSON codecs for elements, vectors and function ids.

Element documents look like::

    {"algebra": [{"kind": "sym", "n": 2}, {"kind": "spin", "n": 3}],
     "parts": [[[2, 0], [0, 1]], {"x0": 1, "xbar": [1, 0]}]}

Sym parts are full row-major matrices, spin parts are ``{"x0", "xbar"}``
objects and diag parts are plain arrays. Output documents are written on one
line with every float at 17 significant digits, so equal inputs give equal bytes.
"""

from __future__ import annotations

import json
import math
from typing import Any, TextIO

import numpy as np

from .algebra import AlgebraDescriptor, Element, Factor, FactorKind
from .errors import SchemaError
from .functions import SubdiffKind, SymmetricFunctionId

MAX_ASYMMETRY = 1e-12


def algebra_from_json(doc: Any) -> AlgebraDescriptor:
    """Parse and validate an algebra descriptor document."""
    if not isinstance(doc, list) or not doc:
        raise SchemaError("'algebra' must be a nonempty list of {kind, n} objects")
    factors = []
    for entry in doc:
        if not isinstance(entry, dict) or set(entry) != {"kind", "n"}:
            raise SchemaError(f"Bad factor entry {entry!r}; expected {{'kind', 'n'}}")
        try:
            kind = FactorKind(entry["kind"])
        except ValueError:
            raise SchemaError(f"Unknown factor kind {entry['kind']!r}") from None
        if not isinstance(entry["n"], int) or isinstance(entry["n"], bool):
            raise SchemaError(f"Factor size must be an integer, got {entry['n']!r}")
        factors.append(Factor(kind, entry["n"]))
    return AlgebraDescriptor(tuple(factors))


def _finite_array(value: Any, what: str) -> np.ndarray:
    try:
        arr = np.array(value, dtype=np.float64)
    except (TypeError, ValueError):
        raise SchemaError(f"{what} must be numeric, got {value!r}") from None
    if not np.all(np.isfinite(arr)):
        raise SchemaError(f"{what} has non-finite entries")
    return arr


def _part_from_json(factor: Factor, part: Any, index: int) -> np.ndarray:
    what = f"part {index} ({factor.kind.value}({factor.n}))"
    if factor.kind is FactorKind.SPIN:
        if not isinstance(part, dict) or set(part) != {"x0", "xbar"}:
            raise SchemaError(f"{what} must be an object with keys 'x0' and 'xbar'")
        x0 = _finite_array(part["x0"], what)
        xbar = _finite_array(part["xbar"], what)
        if x0.shape != () or xbar.shape != (factor.n - 1,):
            raise SchemaError(f"{what} needs a scalar x0 and an xbar of length {factor.n - 1}")
        return np.concatenate([[float(x0)], xbar])
    arr = _finite_array(part, what)
    if arr.shape != factor.shape:
        raise SchemaError(f"{what} must have shape {factor.shape}, got {arr.shape}")
    if factor.kind is FactorKind.SYM:
        asym = float(np.max(np.abs(arr - arr.T)))
        if asym > MAX_ASYMMETRY:
            raise SchemaError(f"{what} is not symmetric (max asymmetry {asym:.3e})")
    return arr


def element_from_json(doc: Any) -> Element:
    """Parse and validate an element document."""
    if not isinstance(doc, dict) or "algebra" not in doc or "parts" not in doc:
        raise SchemaError("An element must be an object with 'algebra' and 'parts'")
    algebra = algebra_from_json(doc["algebra"])
    parts = doc["parts"]
    if not isinstance(parts, list) or len(parts) != len(algebra.factors):
        raise SchemaError(f"'parts' must be a list of {len(algebra.factors)} entries")
    return Element(algebra, tuple(_part_from_json(f, p, i) for i, (f, p) in enumerate(zip(algebra.factors, parts))))


def element_to_json(x: Element) -> dict:
    """Serialize an element; spin parts become ``{"x0", "xbar"}`` objects."""
    parts: list[Any] = []
    for factor, part in zip(x.algebra.factors, x.parts):
        if factor.kind is FactorKind.SPIN:
            parts.append({"x0": float(part[0]), "xbar": part[1:].tolist()})
        else:
            parts.append(part.tolist())
    return {"algebra": x.algebra.to_dict(), "parts": parts}


def vector_from_json(value: Any, name: str) -> np.ndarray:
    """Parse a nonempty finite numeric vector stored under ``name``."""
    arr = _finite_array(value, f"'{name}'")
    if arr.ndim != 1 or arr.size == 0:
        raise SchemaError(f"'{name}' must be a nonempty list of numbers")
    return arr


def function_id_from_json(value: Any) -> SymmetricFunctionId:
    """Parse a function id such as ``kth_largest:k=2``."""
    if not isinstance(value, str):
        raise SchemaError(f"A function id must be a string like 'kth_largest:k=2', got {value!r}")
    return SymmetricFunctionId.parse(value)


def kind_from_json(value: Any) -> SubdiffKind:
    """Parse a subdifferential kind name."""
    if not isinstance(value, str):
        raise SchemaError(f"A subdifferential kind must be a string, got {value!r}")
    return SubdiffKind.parse(value)


def _encode(value: Any) -> str:
    if value is None:
        return "null"
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        v = float(value)
        # JSON has no inf/nan
        return format(v + 0.0, ".17g") if math.isfinite(v) else "null"
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_encode(v)}" for k, v in value.items()) + "}"
    if isinstance(value, np.ndarray):
        return _encode(value.tolist())
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_encode(v) for v in value) + "]"
    raise TypeError(f"Cannot encode {type(value).__name__} as JSON")


def dumps(doc: Any) -> str:
    """Serialize a document on one line, floats at 17 significant digits."""
    return _encode(doc) + "\n"


def dump(doc: Any, stream: TextIO) -> None:
    """Write ``dumps(doc)`` to ``stream``."""
    stream.write(dumps(doc))


def load(stream: TextIO) -> Any:
    """Read a JSON document, mapping decode errors to SchemaError."""
    try:
        return json.load(stream)
    except json.JSONDecodeError as e:
        raise SchemaError(f"Input is not valid JSON: {e}") from None
