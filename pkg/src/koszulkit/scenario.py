"""Scenario files: JSON documents describing one verification run.

Every file has ``kind`` (one of :data:`KINDS`) and optional ``name``,
``window`` (``[lo, hi]``), ``length_cap`` and ``poly_trunc``.  Scalars are
integers or strings such as ``"-3/2"``; floats are rejected.  See the README
for the per-kind fields.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

from .equivariant import ActionScenario
from .graded import DegreeWindow, StructuralError
from .koszul import KoszulScenario
from .pbw import Generator, PBWAlgebra

KINDS = ("koszul-classical", "koszul-twisted", "bar-suite", "equivariant")
DEFAULT_WINDOW = (-8, 8)
DEFAULT_CAP = 6
DEFAULT_TRUNC = 3


class ScenarioError(ValueError):
    def __init__(self, where: str, message: str):
        super().__init__(f"{where}: {message}")
        self.where = where


@dataclass
class Scenario:
    kind: str
    name: str
    window: DegreeWindow
    cap: int
    trunc: int
    data: dict
    koszul: KoszulScenario | None = None
    action: ActionScenario | None = None
    algebras: list = field(default_factory=list)      # bar-suite: (label, PBWAlgebra)
    m_degrees: list = field(default_factory=list)     # koszul-classical
    end_window: DegreeWindow = DegreeWindow(-2, 2)

    def parameters(self) -> dict:
        return {"window": self.window.as_list(), "length_cap": self.cap, "poly_trunc": self.trunc}


def _scalar(v: Any, where: str) -> Fraction:
    if isinstance(v, bool) or isinstance(v, float):
        raise ScenarioError(where, "scalars must be integers or fraction strings")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        try:
            return Fraction(v)
        except (ValueError, ZeroDivisionError):
            raise ScenarioError(where, f"cannot read {v!r} as a rational number") from None
    raise ScenarioError(where, f"expected a number, got {type(v).__name__}")


def _int(v: Any, where: str) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise ScenarioError(where, "expected an integer")
    return v


def _list(v: Any, where: str) -> list:
    if not isinstance(v, list):
        raise ScenarioError(where, "expected a list")
    return v


def _window(v: Any, where: str) -> DegreeWindow:
    v = _list(v, where)
    if len(v) != 2:
        raise ScenarioError(where, "expected [lo, hi]")
    lo, hi = _int(v[0], where), _int(v[1], where)
    if lo > hi:
        raise ScenarioError(where, "lo exceeds hi")
    return DegreeWindow(lo, hi)


def _coefficient(v: Any, where: str, base: list[str]):
    """Scalar, or ``{monomial: scalar}`` over the base generator names."""
    if isinstance(v, dict):
        out = {}
        for mono, c in v.items():
            if mono not in ("1", ""):
                for part in mono.split("*"):
                    name = part.partition("^")[0].strip()
                    if name not in base:
                        raise ScenarioError(where, f"unknown base generator {name!r}")
            out[mono] = _scalar(c, f"{where}[{mono!r}]")
        return out
    return _scalar(v, where)


def _matrix(v: Any, rows: int, cols: int, where: str, base: list[str]) -> list:
    v = _list(v, where)
    if len(v) != rows or any(not isinstance(r, list) or len(r) != cols for r in v):
        raise ScenarioError(where, f"expected a {rows}x{cols} matrix")
    return [[_coefficient(x, f"{where}[{i}][{j}]", base) for j, x in enumerate(r)] for i, r in enumerate(v)]


def _degrees(v: Any, where: str) -> list[int]:
    out = []
    names = set()
    for i, g in enumerate(_list(v, where)):
        w = f"{where}[{i}]"
        if isinstance(g, int) and not isinstance(g, bool):
            out.append(g)
            continue
        if not isinstance(g, dict) or "degree" not in g:
            raise ScenarioError(w, "expected an integer or an object with 'degree'")
        d = _int(g["degree"], f"{w}.degree")
        if "parity" in g and g["parity"] not in ("even", "odd"):
            raise ScenarioError(f"{w}.parity", "expected 'even' or 'odd'")
        if "parity" in g and (g["parity"] == "odd") != (d % 2 == 1):
            raise ScenarioError(f"{w}.parity", "parity disagrees with degree")
        if "name" in g:
            if g["name"] in names:
                raise ScenarioError(f"{w}.name", "duplicate name")
            names.add(g["name"])
        out.append(d)
    return out


def _algebra(v: Any, where: str) -> tuple[str, PBWAlgebra]:
    if not isinstance(v, dict):
        raise ScenarioError(where, "expected an object")
    gens = []
    for i, g in enumerate(_list(v.get("generators"), f"{where}.generators")):
        w = f"{where}.generators[{i}]"
        if not isinstance(g, dict) or "name" not in g or "degree" not in g:
            raise ScenarioError(w, "expected an object with 'name' and 'degree'")
        d = _int(g["degree"], f"{w}.degree")
        if "parity" in g and (g["parity"] == "odd") != (d % 2 == 1):
            raise ScenarioError(f"{w}.parity", "parity disagrees with degree")
        gens.append(Generator(str(g["name"]), d, _int(g.get("weight", 1), f"{w}.weight")))
    names = [g.name for g in gens]
    if len(set(names)) != len(names):
        raise ScenarioError(f"{where}.generators", "duplicate generator names")

    def element(x, w):
        if not isinstance(x, dict):
            raise ScenarioError(w, "expected {monomial: coefficient}")
        out = {}
        for mono, c in x.items():
            if mono not in ("1", ""):
                for part in mono.split("*"):
                    if part.partition("^")[0].strip() not in names:
                        raise ScenarioError(w, f"unknown generator in {mono!r}")
            out[mono] = _scalar(c, f"{w}[{mono!r}]")
        return out

    diff = {}
    for gname, val in (v.get("diff") or {}).items():
        if gname not in names:
            raise ScenarioError(f"{where}.diff", f"unknown generator {gname!r}")
        diff[gname] = element(val, f"{where}.diff[{gname!r}]")
    omega = {}
    for i, rel in enumerate(v.get("commutators") or []):
        w = f"{where}.commutators[{i}]"
        rel = _list(rel, w)
        if len(rel) != 3 or rel[0] not in names or rel[1] not in names:
            raise ScenarioError(w, "expected [generator, generator, value]")
        val = rel[2] if isinstance(rel[2], dict) else {"1": rel[2]}
        omega[(rel[0], rel[1])] = element(val, w)
    label = str(v.get("name", "A"))
    try:
        return label, PBWAlgebra(gens, omega, diff, name=label)
    except StructuralError as exc:
        raise ScenarioError(where, str(exc)) from None


def parse(data: Any, window: tuple | None = None, cap: int | None = None,
          trunc: int | None = None) -> Scenario:
    """Validate a decoded JSON document; flags override file values."""
    if not isinstance(data, dict):
        raise ScenarioError("<root>", "expected a JSON object")
    kind = data.get("kind")
    if kind not in KINDS:
        raise ScenarioError("kind", f"expected one of {', '.join(KINDS)}")
    name = str(data.get("name", kind))
    if window is not None:
        win = DegreeWindow(*window)
    elif "window" in data:
        win = _window(data["window"], "window")
    else:
        win = DegreeWindow(*DEFAULT_WINDOW)
    c = cap if cap is not None else _int(data.get("length_cap", DEFAULT_CAP), "length_cap")
    if c < 1:
        raise ScenarioError("length_cap", "must be positive")
    t = trunc if trunc is not None else _int(data.get("poly_trunc", DEFAULT_TRUNC), "poly_trunc")
    if t < 0:
        raise ScenarioError("poly_trunc", "must be non-negative")
    sc = Scenario(kind, name, win, c, t, data)
    if "end_window" in data:
        sc.end_window = _window(data["end_window"], "end_window")
    if kind == "koszul-twisted":
        m = _degrees(data.get("M", []), "M")
        for i, d in enumerate(m):
            if d % 2:
                # M[1] would have an even generator of weight -1: infinite in every degree
                raise ScenarioError(f"M[{i}]", "odd degrees are not supported (K would be degreewise infinite)")
        n = _degrees(data.get("N", []), "N")
        base = [str(b) for b in _list(data.get("base", []), "base")]
        phi = _matrix(data.get("phi", [[0] * len(m) for _ in n]), len(n), len(m), "phi", base)
        try:
            sc.koszul = KoszulScenario(m, n, phi, base, t if base else None, name,
                                       stems=dict(data.get("stems", {})))
        except StructuralError as exc:
            raise ScenarioError("phi", str(exc)) from None
    elif kind == "koszul-classical":
        sc.m_degrees = _degrees(data.get("M", []), "M")
    elif kind == "bar-suite":
        algs = _list(data.get("algebras"), "algebras")
        if not algs:
            raise ScenarioError("algebras", "at least one algebra is required")
        sc.algebras = [_algebra(a, f"algebras[{i}]") for i, a in enumerate(algs)]
    elif kind == "equivariant":
        g = _int(data.get("g_dim"), "g_dim")
        v = _int(data.get("v_dim"), "v_dim")
        rho_raw = _list(data.get("rho"), "rho")
        if len(rho_raw) != g:
            raise ScenarioError("rho", f"expected {g} matrices")
        rho = [_matrix(r, v, v, f"rho[{a}]", []) for a, r in enumerate(rho_raw)]
        bracket = {}
        for i, b in enumerate(_list(data.get("bracket", []), "bracket")):
            b = _list(b, f"bracket[{i}]")
            if len(b) != 3 or not isinstance(b[2], dict):
                raise ScenarioError(f"bracket[{i}]", "expected [a, b, {c: coeff}]")
            a1, a2 = _int(b[0], f"bracket[{i}][0]"), _int(b[1], f"bracket[{i}][1]")
            if not (0 <= a1 < g and 0 <= a2 < g):
                raise ScenarioError(f"bracket[{i}]", "basis index out of range")
            bracket[(a1, a2)] = {int(k): _scalar(x, f"bracket[{i}][2]") for k, x in b[2].items()}
        try:
            sc.action = ActionScenario(g, v, rho, t, bracket, name)
        except StructuralError as exc:
            raise ScenarioError("rho", str(exc)) from None
    return sc


def load(path: str | Path, **flags) -> Scenario:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ScenarioError(str(path), f"cannot read file ({exc.strerror})") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"line {exc.lineno}, column {exc.colno}", exc.msg) from None
    return parse(data, **flags)


def shipped(name: str) -> Path:
    """Path of a scenario file shipped with the package."""
    return Path(__file__).parent / "scenarios" / name
