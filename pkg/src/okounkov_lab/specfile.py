"""Series definition files (TOML).

A file describes one series::

    name = "floor57"
    dim = 2
    mode = "rule"            # complete | generated | rule | explicit | sum | product

    [rule]
    name = "floor_ratio"
    num = 5
    den = 7
    coord = 1

    [flag]                   # optional
    dehomogenizing_index = 0
    permutation = [1, 2]

    [caps]                   # optional defaults for the CLI
    mmax = 140

Mode tables: ``[complete] vertices = [[...], ...]`` (entries may be "p/q"
strings), ``[generated] gens = [[e_1, ..., e_d, degree], ...]``,
``[explicit] degrees = {"1" = [[...]], ...}``.  ``sum`` and ``product``
take an array of inline series tables under ``[[parts]]``; each part has
its own ``mode`` and mode table.
"""

from __future__ import annotations

import hashlib
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

import tomli_w

from .geometry import GeometryError, hull
from .series import (
    RULES,
    CompleteSeries,
    ExplicitSeries,
    Flag,
    GeneratedSeries,
    GradedSeries,
    MultiGradedSeries,
    MultiplicativityError,
    ProductMultiSeries,
    RuleSeries,
    SeriesError,
    audit,
    sum_series,
)

MODES = ("complete", "generated", "rule", "explicit", "sum", "product")
DEFAULT_AUDIT_DEGREE = 6


class SpecError(ValueError):
    """Schema errors, each as (line or None, message)."""

    def __init__(self, errors: list[tuple[int | None, str]]):
        self.errors = errors
        text = "; ".join(f"line {ln}: {msg}" if ln else msg for ln, msg in errors)
        super().__init__(text)


@dataclass
class SeriesSpec:
    name: str
    dim: int
    mode: str
    payload: dict
    flag: dict = field(default_factory=dict)
    caps: dict = field(default_factory=dict)
    bound: int | None = None
    source_sha256: str | None = None

    def to_dict(self) -> dict:
        out: dict[str, Any] = {"name": self.name, "dim": self.dim, "mode": self.mode}
        if self.bound is not None:
            out["bound"] = self.bound
        out.update(_payload_to_toml(self.mode, self.payload))
        if self.flag:
            out["flag"] = dict(self.flag)
        if self.caps:
            out["caps"] = dict(self.caps)
        return out


def _line_of(text: str, key: str) -> int | None:
    pat = re.compile(rf"^\s*(\[+\s*{re.escape(key)}\s*[\].]|{re.escape(key)}\s*=)")
    for i, line in enumerate(text.splitlines(), 1):
        if pat.search(line):
            return i
    return None


def _rational(x):
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise ValueError("floats are not accepted; write rationals as \"p/q\" strings")
    return Fraction(x)


def _rational_text(x: Fraction):
    x = Fraction(x)
    return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _payload_to_toml(mode: str, payload: dict) -> dict:
    if mode == "complete":
        return {"complete": {"vertices": [[_rational_text(x) for x in v] for v in payload["vertices"]]}}
    if mode == "generated":
        return {"generated": {"gens": [list(g) + [k] for g, k in payload["gens"]]}}
    if mode == "rule":
        return {"rule": dict(payload)}
    if mode == "explicit":
        return {"explicit": {"degrees": {str(k): [list(a) for a in v] for k, v in sorted(payload["degrees"].items())}}}
    if mode in ("sum", "product"):
        parts = []
        for part in payload["parts"]:
            entry = {"mode": part["mode"]}
            if part.get("bound") is not None:
                entry["bound"] = part["bound"]
            entry.update(_payload_to_toml(part["mode"], part["payload"]))
            parts.append(entry)
        return {"parts": parts}
    raise SpecError([(None, f"unknown mode {mode!r}")])


def _parse_payload(data: dict, mode: str, dim: int, text: str, errors: list, where: str = "") -> dict | None:
    def err(key, msg):
        errors.append((_line_of(text, key), f"{where}{msg}"))

    if mode not in MODES:
        err("mode", f"unknown mode {mode!r}; expected one of {', '.join(MODES)}")
        return None
    if mode in ("sum", "product"):
        parts = data.get("parts")
        if not isinstance(parts, list) or not parts:
            err("parts", f"mode {mode!r} needs a non-empty [[parts]] array")
            return None
        out = []
        for i, part in enumerate(parts):
            sub_mode = part.get("mode")
            if sub_mode in ("sum", "product"):
                err("parts", f"part {i + 1}: nested {sub_mode!r} is not supported")
                continue
            payload = _parse_payload(part, sub_mode, dim, text, errors, where=f"part {i + 1}: ")
            if payload is not None:
                out.append({"mode": sub_mode, "payload": payload, "bound": part.get("bound")})
        return {"parts": out}
    table = data.get(mode)
    if not isinstance(table, dict):
        err("mode", f"mode {mode!r} needs a [{mode}] table")
        return None
    try:
        if mode == "complete":
            verts = [tuple(_rational(x) for x in v) for v in table["vertices"]]
            if not verts or any(len(v) != dim for v in verts):
                err("vertices", f"vertices must be non-empty points of length {dim}")
                return None
            return {"vertices": verts}
        if mode == "generated":
            gens = []
            for g in table["gens"]:
                if len(g) != dim + 1:
                    err("gens", f"generator {g} must list {dim} exponents and a degree")
                    return None
                gens.append((tuple(int(x) for x in g[:-1]), int(g[-1])))
            return {"gens": gens}
        if mode == "rule":
            name = table.get("name")
            if name not in RULES:
                err("name", f"unknown rule {name!r}; known: {', '.join(sorted(RULES))}")
                return None
            params = {k: (tuple(v) if isinstance(v, list) else v) for k, v in table.items()}
            return params
        if mode == "explicit":
            degs = {int(k): [tuple(int(x) for x in a) for a in v] for k, v in table["degrees"].items()}
            return {"degrees": degs}
    except KeyError as exc:
        err(exc.args[0], f"[{mode}] is missing key {exc.args[0]!r}")
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        err(mode, f"[{mode}]: {exc}")
    return None


def _check_flag(flag: dict, dim: int, text: str, errors: list):
    allowed = {"dehomogenizing_index", "permutation", "matrix"}
    for k in flag:
        if k not in allowed:
            errors.append((_line_of(text, k), f"unknown flag key {k!r}"))
    idx = flag.get("dehomogenizing_index", 0)
    if not isinstance(idx, int) or not 0 <= idx <= dim:
        errors.append((_line_of(text, "dehomogenizing_index"), f"dehomogenizing_index must be in 0..{dim}"))
    perm = flag.get("permutation")
    if perm is not None and sorted(perm) != list(range(1, dim + 1)):
        errors.append((_line_of(text, "permutation"), f"permutation must be a permutation of 1..{dim}"))


def parse_spec_text(text: str, audit_degree: int | None = None) -> SeriesSpec:
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        m = re.search(r"line (\d+)", str(exc))
        raise SpecError([(int(m.group(1)) if m else None, f"syntax error: {exc}")]) from None
    errors: list[tuple[int | None, str]] = []
    for key in ("name", "dim", "mode"):
        if key not in data:
            errors.append((None, f"missing top-level key {key!r}"))
    if errors:
        raise SpecError(errors)
    dim = data["dim"]
    if not isinstance(dim, int) or dim < 0:
        raise SpecError([(_line_of(text, "dim"), "dim must be a nonnegative integer")])
    payload = _parse_payload(data, data["mode"], dim, text, errors)
    flag = data.get("flag", {})
    _check_flag(flag, dim, text, errors)
    if errors:
        raise SpecError(errors)
    spec = SeriesSpec(str(data["name"]), dim, data["mode"], payload, dict(flag), dict(data.get("caps", {})),
                      data.get("bound"), hashlib.sha256(text.encode()).hexdigest())
    # build and audit so that invalid series are rejected here
    try:
        series = build_series(spec)
    except (SeriesError, GeometryError) as exc:
        raise SpecError([((_line_of(text, data["mode"]) or _line_of(text, "mode")), str(exc))]) from None
    if isinstance(series, GradedSeries):
        deg = audit_degree if audit_degree is not None else spec.caps.get("audit", DEFAULT_AUDIT_DEGREE)
        if isinstance(series, ExplicitSeries):
            deg = min(deg, max(spec.payload["degrees"], default=0))
        try:
            audit(series, deg)
        except MultiplicativityError as exc:
            raise SpecError([((_line_of(text, data["mode"]) or _line_of(text, "mode")),
                              f"multiplicativity fails: (k, l, exponent) = ({exc.k}, {exc.l}, {exc.exponent})")]) from None
        except SeriesError as exc:
            raise SpecError([((_line_of(text, data["mode"]) or _line_of(text, "mode")), str(exc))]) from None
    return spec


def parse_spec(path, audit_degree: int | None = None) -> SeriesSpec:
    text = Path(path).read_text()
    return parse_spec_text(text, audit_degree)


def dump_spec(spec: SeriesSpec) -> str:
    return tomli_w.dumps(spec.to_dict())


def _build_single(mode: str, payload: dict, dim: int, bound) -> GradedSeries:
    if mode == "complete":
        return CompleteSeries(hull(payload["vertices"]), bound=bound)
    if mode == "generated":
        return GeneratedSeries(payload["gens"], dim=dim, bound=bound)
    if mode == "rule":
        params = {k: v for k, v in payload.items() if k != "name"}
        return RuleSeries(payload["name"], dim, bound or 1, **params)
    if mode == "explicit":
        if bound is None:
            bound = max((-(-sum(a) // k) for k, v in payload["degrees"].items() for a in v if k), default=1)
        return ExplicitSeries(payload["degrees"], dim, bound)
    raise SeriesError(f"mode {mode!r} is not a single series")


def build_series(spec: SeriesSpec) -> GradedSeries | MultiGradedSeries:
    if spec.mode in ("sum", "product"):
        parts = [_build_single(p["mode"], p["payload"], spec.dim, p.get("bound")) for p in spec.payload["parts"]]
        if spec.mode == "product":
            return ProductMultiSeries(parts)
        out = parts[0]
        for p in parts[1:]:
            out = sum_series(out, p)
        return out
    return _build_single(spec.mode, spec.payload, spec.dim, spec.bound)


def build_flag(spec: SeriesSpec) -> Flag:
    f = spec.flag
    perm = tuple(f["permutation"]) if f.get("permutation") else None
    matrix = tuple(tuple(r) for r in f["matrix"]) if f.get("matrix") else None
    return Flag(f.get("dehomogenizing_index", 0), perm, matrix)
