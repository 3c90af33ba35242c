"""System-spec JSON: building fields and systems from declarative files.

Schema (all indices 1-based, polynomials as exponent-key coefficient maps
``{"e1,e2,...": coefficient}``):

    {
      "n": 3,
      "poisson": {"kind": "rigid_body"}
                 | {"kind": "constant", "matrix": [[...], ...]}
                 | {"kind": "matrix_poly", "upper": {"1,2": {coeff map}}},
      "tensor":  {"kind": "zero"}
                 | {"kind": "constant", "tensor": {n, index_base, entries}}
                 | {"kind": "simple", "weight": 1.0, "poisson": {...}}
                 | {"kind": "simple", "weight_poly": {coeff map}, "poisson": {...}}
                 | {"kind": "sum", "components": [{simple spec}, ...]},
      "fields":  {"h": {coeff map}, "s": {coeff map}, ...},
      "hamiltonian": "h",
      "entropy": "s",
      "noninteraction": "weak" | "strong",
      "default_x0": [..],            # optional
      "name": "..."                  # optional
    }
"""

from __future__ import annotations

import json

import numpy as np

from .dynamics import SystemSpec
from .fields import Polynomial, SkewField, TensorField
from .serialize import tensor_from_obj


class SpecFormatError(ValueError):
    """Malformed system-spec document."""


def _need(obj: dict, key: str, where: str):
    if key not in obj:
        raise SpecFormatError(f"missing key {key!r} in {where}")
    return obj[key]


def parse_polynomial(n: int, data: dict) -> Polynomial:
    coeff_map = data.get("coeffs", data) if isinstance(data, dict) else None
    if coeff_map is None:
        raise SpecFormatError(f"polynomial must be a coefficient map, got {type(data)}")
    try:
        return Polynomial.from_coeff_map(n, coeff_map)
    except (ValueError, TypeError) as exc:
        raise SpecFormatError(f"bad polynomial coefficient map: {exc}") from exc


def parse_poisson(n: int, obj: dict) -> SkewField:
    kind = _need(obj, "kind", "poisson spec")
    if kind == "constant":
        mat = np.asarray(_need(obj, "matrix", "constant poisson spec"), dtype=float)
        if mat.shape != (n, n):
            raise SpecFormatError(f"poisson matrix shape {mat.shape} != ({n},{n})")
        try:
            return SkewField.constant(mat)
        except ValueError as exc:
            raise SpecFormatError(str(exc)) from exc
    if kind == "rigid_body":
        if n != 3:
            raise SpecFormatError("rigid_body poisson structure requires n = 3")
        return SkewField.rigid_body()
    if kind == "matrix_poly":
        upper_raw = _need(obj, "upper", "matrix_poly poisson spec")
        upper = {}
        for key, coeff_map in upper_raw.items():
            parts = str(key).split(",")
            if len(parts) != 2:
                raise SpecFormatError(f"matrix_poly key {key!r} must be 'i,k'")
            i, k = int(parts[0]), int(parts[1])
            upper[(i, k)] = parse_polynomial(n, coeff_map)
        return SkewField.from_polynomials(n, upper)
    raise SpecFormatError(f"unknown poisson kind {kind!r}")


def parse_tensor(n: int, obj: dict) -> TensorField:
    kind = _need(obj, "kind", "tensor spec")
    if kind == "zero":
        return TensorField.zero(n)
    if kind == "constant":
        t = tensor_from_obj(_need(obj, "tensor", "constant tensor spec"))
        if t.n != n:
            raise SpecFormatError(f"tensor dimension {t.n} != system dimension {n}")
        return TensorField.constant(t)
    if kind == "simple":
        skew = parse_poisson(n, _need(obj, "poisson", "simple tensor spec"))
        if "weight_poly" in obj:
            weight = parse_polynomial(n, obj["weight_poly"])
        else:
            weight = float(obj.get("weight", 1.0))
        return TensorField.simple(skew, weight)
    if kind == "sum":
        parts = [parse_tensor(n, comp) for comp in _need(obj, "components", "sum spec")]
        return TensorField.total(parts, n=n)
    raise SpecFormatError(f"unknown tensor kind {kind!r}")


def parse_fields(n: int, obj: dict) -> dict[str, Polynomial]:
    return {name: parse_polynomial(n, coeff_map) for name, coeff_map in obj.items()}


def system_from_obj(obj: dict) -> SystemSpec:
    n = int(_need(obj, "n", "system spec"))
    poisson = parse_poisson(n, _need(obj, "poisson", "system spec"))
    eps = parse_tensor(n, _need(obj, "tensor", "system spec"))
    fields = parse_fields(n, _need(obj, "fields", "system spec"))
    h_name = _need(obj, "hamiltonian", "system spec")
    s_name = _need(obj, "entropy", "system spec")
    for name in (h_name, s_name):
        if name not in fields:
            raise SpecFormatError(f"field {name!r} is not defined under 'fields'")
    x0 = obj.get("default_x0")
    return SystemSpec(
        n=n, poisson=poisson, eps=eps,
        entropy=fields[s_name], hamiltonian=fields[h_name],
        noninteraction=_need(obj, "noninteraction", "system spec"),
        name=str(obj.get("name", "")),
        default_x0=None if x0 is None else np.asarray(x0, dtype=float),
    )


def load_system(path) -> SystemSpec:
    with open(path, "r", encoding="utf-8") as fh:
        return system_from_obj(json.load(fh))
