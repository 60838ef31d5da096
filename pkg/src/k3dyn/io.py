"""JSON input formats: curve configurations, divisors, fibration lists and
polynomials.  Every object format accepts an optional ``format_version``
key, which must be 1."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Optional

from .curveconf import CurveConfig, Divisor, make_config
from .errors import K3DynError, ParseError, ValidationError
from .poly import Poly

FORMAT_VERSION = 1

CONFIG_KEYS = {"name", "curves", "self", "edges", "coincidences", "format_version"}
DIVISOR_KEYS = {"fiber", "zero_section", "section", "label", "format_version"}
FIBRATIONS_KEYS = {"fibrations", "inertia_curve", "format_version"}


def read_json(path: "str | Path") -> Any:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None


def _check_keys(obj: Any, allowed: set, what: str) -> None:
    if not isinstance(obj, dict):
        raise ValidationError(f"{what} must be a JSON object")
    extra = sorted(set(obj) - allowed)
    if extra:
        raise ValidationError(f"{what}: unknown key(s) {', '.join(extra)}")
    if obj.get("format_version", FORMAT_VERSION) != FORMAT_VERSION:
        raise ValidationError(f"{what}: unsupported format_version {obj['format_version']!r}")


def _is_int(x: Any) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def config_from_json(obj: Any) -> CurveConfig:
    _check_keys(obj, CONFIG_KEYS, "config")
    for key in ("name", "curves"):
        if key not in obj:
            raise ValidationError(f"config: missing field {key!r}")
    name, curves = obj["name"], obj["curves"]
    if not isinstance(name, str):
        raise ValidationError("config.name must be a string")
    if not isinstance(curves, list) or not curves or not all(isinstance(c, str) for c in curves):
        raise ValidationError("config.curves must be a nonempty list of strings")
    self_int = obj.get("self", -2)
    if not _is_int(self_int):
        raise ValidationError("config.self must be an integer")
    edges = obj.get("edges", [])
    if not isinstance(edges, list):
        raise ValidationError("config.edges must be a list")
    for k, e in enumerate(edges):
        ok = (isinstance(e, list) and len(e) in (2, 3) and all(isinstance(c, str) for c in e[:2])
              and (len(e) == 2 or (_is_int(e[2]) and e[2] >= 0)))
        if not ok:
            raise ValidationError(f"config.edges[{k}] must be [curve, curve] or [curve, curve, n>=0]")
    coinc = obj.get("coincidences", [])
    if not isinstance(coinc, list) or not all(
            isinstance(t, list) and len(t) == 3 and all(isinstance(c, str) for c in t) for t in coinc):
        raise ValidationError("config.coincidences must be a list of [curve, curve, curve]")
    return make_config(name, curves, edges, self_intersection=self_int, coincidences=coinc)


def config_to_json(cfg: CurveConfig) -> dict:
    edges = []
    for i, a in enumerate(cfg.names):
        for b in cfg.names[i + 1:]:
            m = cfg.meet(a, b)
            if m:
                edges.append([a, b] if m == 1 else [a, b, m])
    selfs = {cfg.self_int(c) for c in cfg.names}
    if len(selfs) != 1:
        raise ValidationError("the JSON format holds a single self-intersection number")
    out = {"format_version": FORMAT_VERSION, "name": cfg.name, "curves": list(cfg.names),
           "self": selfs.pop(), "edges": edges}
    if cfg.coincidences:
        out["coincidences"] = [list(t) for t in cfg.coincidences]
    return out


def load_config(path: "str | Path") -> CurveConfig:
    obj = read_json(path)
    try:
        return config_from_json(obj)
    except K3DynError as exc:
        raise type(exc)(f"{path}: {exc}") from None


@dataclass(frozen=True)
class FibrationSpec:
    divisor: Divisor
    zero_section: Optional[str] = None
    section: Optional[str] = None
    label: Optional[str] = None


def fibration_from_json(obj: Any, where: str = "divisor") -> FibrationSpec:
    _check_keys(obj, DIVISOR_KEYS, where)
    fiber = obj.get("fiber")
    if not isinstance(fiber, dict) or not fiber:
        raise ValidationError(f"{where}.fiber must be a nonempty object of curve multiplicities")
    for c, m in fiber.items():
        if not _is_int(m) or m < 0:
            raise ValidationError(f"{where}.fiber[{c!r}] must be a nonnegative integer")
    for key in ("zero_section", "section", "label"):
        if key in obj and not isinstance(obj[key], str):
            raise ValidationError(f"{where}.{key} must be a string")
    return FibrationSpec(Divisor(fiber), obj.get("zero_section"), obj.get("section"), obj.get("label"))


def load_fibration(path: "str | Path") -> FibrationSpec:
    return fibration_from_json(read_json(path), str(path))


def load_fibrations(path: "str | Path") -> tuple[list[FibrationSpec], Optional[str]]:
    """A list of divisor objects, or {"fibrations": [...], "inertia_curve": name}."""
    obj = read_json(path)
    curve = None
    if isinstance(obj, dict):
        _check_keys(obj, FIBRATIONS_KEYS, str(path))
        curve = obj.get("inertia_curve")
        if curve is not None and not isinstance(curve, str):
            raise ValidationError(f"{path}: inertia_curve must be a string")
        obj = obj.get("fibrations")
    if not isinstance(obj, list) or not obj:
        raise ValidationError(f"{path}: expected a nonempty list of fibrations")
    specs = [fibration_from_json(o, f"{path}[{k}]") for k, o in enumerate(obj)]
    for k, s in enumerate(specs):
        if s.zero_section is None or s.section is None:
            raise ValidationError(f"{path}[{k}]: zero_section and section are required")
    return specs, curve


def poly_from_json(obj: Any) -> Poly:
    """Integer list, constant term first (optionally wrapped as {"coeffs": [...]})."""
    if isinstance(obj, dict):
        _check_keys(obj, {"coeffs", "format_version"}, "polynomial")
        obj = obj.get("coeffs")
    if not isinstance(obj, list) or not obj or not all(_is_int(c) for c in obj):
        raise ValidationError("polynomial must be a nonempty list of integers, constant term first")
    p = Poly(obj)
    if p.is_zero():
        raise ValidationError("polynomial is zero")
    return p


def load_poly(path: "str | Path") -> Poly:
    return poly_from_json(read_json(path))
