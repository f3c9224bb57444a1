"""Scenario files and builtin scenarios.

A scenario bundles a model (explicit relation, shift, or PL interval
map), named covers, and analysis parameters.  Scenario files are strict
JSON: unknown fields are rejected with the offending path in the error
message, and every point reference is validated.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .errors import ScenarioError
from .models import Cover, Model, PLIntervalSpec, discretize_interval_map
from .nerve import SimplicialComplex, raw_complex

_DIGITS = "0123456789"


@dataclass(frozen=True)
class Analysis:
    """Knobs shared by the pipeline operations."""

    n_max: int = 5
    window: int = 3
    exact_limit: int = 20
    tolerance: float = 1e-6

    def __post_init__(self):
        if self.n_max < 2:
            raise ScenarioError("analysis.n_max must be >= 2")
        if self.window < 0:
            raise ScenarioError("analysis.window must be >= 0")
        if self.exact_limit < 1:
            raise ScenarioError("analysis.exact_limit must be >= 1")
        if self.tolerance <= 0:
            raise ScenarioError("analysis.tolerance must be positive")


@dataclass(frozen=True)
class Scenario:
    name: str
    model: Model
    covers: tuple  # (name, Cover), at least one entry
    analysis: Analysis
    complex: SimplicialComplex | None = None

    @property
    def primary_cover(self) -> Cover:
        return self.covers[0][1]


def _require_keys(data: dict, allowed: set, path: str):
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise ScenarioError(f"{path}: unknown field(s) {unknown}")


def shift_model(k: int, depth: int) -> Model:
    """One-sided shift truncated to words of a fixed length."""
    if not 2 <= k <= 10:
        raise ScenarioError("shift.k must be between 2 and 10")
    if not 1 <= depth <= 8:
        raise ScenarioError("shift.depth must be between 1 and 8")
    digits = _DIGITS[:k]
    words = tuple("".join(w) for w in itertools.product(digits, repeat=depth))
    trans = {w: {w[1:] + d for d in digits} for w in words}
    return Model(points=words, transition=trans, label=f"shift k={k} depth={depth}")


def cylinder_cover(m: Model, depth: int) -> Cover:
    """Cylinders of the given prefix length over a shift model."""
    word_len = len(m.points[0])
    if not 1 <= depth <= word_len:
        raise ScenarioError(f"cylinder depth must be between 1 and {word_len}")
    prefixes = sorted({w[:depth] for w in m.points})
    elements = tuple(
        (f"[{p}]", frozenset(w for w in m.points if w.startswith(p))) for p in prefixes
    )
    return Cover(m, elements)


def _parse_fraction(value, path: str) -> Fraction:
    try:
        if isinstance(value, str):
            return Fraction(value)
        if isinstance(value, bool):
            raise TypeError
        return Fraction(value)
    except (ValueError, TypeError, ZeroDivisionError):
        raise ScenarioError(f"{path}: not a rational number: {value!r}") from None


def _parse_model(data, path: str):
    """Returns (model, window_cover_or_None)."""
    if not isinstance(data, dict):
        raise ScenarioError(f"{path}: must be an object")
    kinds = [k for k in ("points", "shift", "interval") if k in data]
    if "points" in data:
        _require_keys(data, {"points", "map"}, path)
        points = data.get("points")
        if not isinstance(points, list) or not points:
            raise ScenarioError(f"{path}.points: need a nonempty list")
        pointset = set()
        for i, p in enumerate(points):
            if not isinstance(p, (int, str)):
                raise ScenarioError(f"{path}.points[{i}]: points are ints or strings")
            if p in pointset:
                raise ScenarioError(f"{path}.points[{i}]: duplicate point {p!r}")
            pointset.add(p)
        trans = {p: set() for p in points}
        for i, pair in enumerate(data.get("map", [])):
            if not (isinstance(pair, list) and len(pair) == 2 and isinstance(pair[1], list)):
                raise ScenarioError(f"{path}.map[{i}]: expected [from, [to, ...]]")
            src, dsts = pair
            if src not in pointset:
                raise ScenarioError(f"{path}.map[{i}]: unknown point {src!r}")
            for j, d in enumerate(dsts):
                if d not in pointset:
                    raise ScenarioError(f"{path}.map[{i}][1][{j}]: unknown point {d!r}")
                trans[src].add(d)
        return Model(points=tuple(points), transition=trans, label="explicit"), None
    if "shift" in data:
        _require_keys(data, {"shift"}, path)
        sub = data["shift"]
        if not isinstance(sub, dict):
            raise ScenarioError(f"{path}.shift: must be an object")
        _require_keys(sub, {"k", "depth"}, f"{path}.shift")
        return shift_model(int(sub.get("k", 2)), int(sub.get("depth", 4))), None
    if "interval" in data:
        _require_keys(data, {"interval"}, path)
        sub = data["interval"]
        if not isinstance(sub, dict):
            raise ScenarioError(f"{path}.interval: must be an object")
        _require_keys(sub, {"pieces", "breakpoints", "resolution"}, f"{path}.interval")
        pieces = sub.get("pieces")
        if not isinstance(pieces, list) or not pieces:
            raise ScenarioError(f"{path}.interval.pieces: need a nonempty list")
        slopes, intercepts = [], []
        for i, piece in enumerate(pieces):
            if not (isinstance(piece, list) and len(piece) == 2):
                raise ScenarioError(
                    f"{path}.interval.pieces[{i}]: expected [slope, intercept]"
                )
            slopes.append(_parse_fraction(piece[0], f"{path}.interval.pieces[{i}][0]"))
            intercepts.append(_parse_fraction(piece[1], f"{path}.interval.pieces[{i}][1]"))
        if "breakpoints" in sub:
            bps = [
                _parse_fraction(b, f"{path}.interval.breakpoints[{i}]")
                for i, b in enumerate(sub["breakpoints"])
            ]
        else:
            n = len(pieces)
            bps = [Fraction(i, n) for i in range(n + 1)]
        resolution = sub.get("resolution", 16)
        if not isinstance(resolution, int):
            raise ScenarioError(f"{path}.interval.resolution: must be an integer")
        spec = PLIntervalSpec(
            breakpoints=tuple(bps),
            slopes=tuple(slopes),
            intercepts=tuple(intercepts),
            resolution=resolution,
        )
        return discretize_interval_map(spec)
    raise ScenarioError(
        f"{path}: need exactly one of points/map, shift, interval (got {kinds or 'none'})"
    )


def _parse_covers(data, m: Model, windows: Cover | None, path: str):
    if not isinstance(data, dict) or not data:
        raise ScenarioError(f"{path}: need at least one named cover")
    out = []
    pointset = m.point_set
    for cname, body in data.items():
        cpath = f"{path}.{cname}"
        if isinstance(body, str):
            if body.startswith("cylinders:"):
                try:
                    depth = int(body.split(":", 1)[1])
                except ValueError:
                    raise ScenarioError(f"{cpath}: malformed cylinder spec {body!r}") from None
                if not m.label.startswith("shift"):
                    raise ScenarioError(f"{cpath}: cylinders need a shift model")
                out.append((cname, cylinder_cover(m, depth)))
            elif body == "windows":
                if windows is None:
                    raise ScenarioError(f"{cpath}: windows need an interval model")
                out.append((cname, windows))
            else:
                raise ScenarioError(f"{cpath}: unknown cover shorthand {body!r}")
            continue
        if not isinstance(body, list) or not body:
            raise ScenarioError(f"{cpath}: expected a list of point lists")
        elements = []
        for i, sub in enumerate(body):
            if not isinstance(sub, list) or not sub:
                raise ScenarioError(f"{cpath}[{i}]: expected a nonempty point list")
            for j, p in enumerate(sub):
                if p not in pointset:
                    raise ScenarioError(f"{cpath}[{i}][{j}]: unknown point {p!r}")
            elements.append((f"{cname}{i}", frozenset(sub)))
        try:
            out.append((cname, Cover(m, tuple(elements))))
        except ValueError as exc:
            raise ScenarioError(f"{cpath}: {exc}") from None
    return tuple(out)


def _parse_complex(data, path: str) -> SimplicialComplex:
    if not isinstance(data, list) or not data:
        raise ScenarioError(f"{path}: expected a nonempty list of maximal simplices")
    labels = sorted({v for simplex in data for v in simplex}, key=repr)
    index = {v: i for i, v in enumerate(labels)}
    maximal = []
    for i, simplex in enumerate(data):
        if not isinstance(simplex, list) or not simplex:
            raise ScenarioError(f"{path}[{i}]: expected a nonempty vertex list")
        maximal.append([index[v] for v in simplex])
    return raw_complex(maximal)


def parse_scenario(data: dict, name: str = "scenario") -> Scenario:
    if not isinstance(data, dict):
        raise ScenarioError("scenario: top level must be an object")
    _require_keys(data, {"name", "model", "covers", "analysis", "complex"}, "scenario")
    if "model" not in data:
        raise ScenarioError("scenario.model: required")
    if "covers" not in data:
        raise ScenarioError("scenario.covers: required")
    model, windows = _parse_model(data["model"], "model")
    covers = _parse_covers(data["covers"], model, windows, "covers")
    analysis_data = data.get("analysis", {})
    if not isinstance(analysis_data, dict):
        raise ScenarioError("analysis: must be an object")
    _require_keys(analysis_data, {"n_max", "window", "exact_limit", "tolerance"}, "analysis")
    try:
        analysis = Analysis(**analysis_data)
    except TypeError as exc:
        raise ScenarioError(f"analysis: {exc}") from None
    cx = _parse_complex(data["complex"], "complex") if "complex" in data else None
    return Scenario(
        name=str(data.get("name", name)),
        model=model,
        covers=covers,
        analysis=analysis,
        complex=cx,
    )


def load_scenario(path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ScenarioError(f"cannot read {path}: {exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    return parse_scenario(data, name=path.stem)


# ---------------------------------------------------------------------------
# builtin scenarios


def _circle_model(size: int, multiplier: int, offset: int, label: str) -> Model:
    trans = {p: {(multiplier * p + offset) % size} for p in range(size)}
    return Model(points=tuple(range(size)), transition=trans, label=label)


def _arc_cover(m: Model, count: int, length: int) -> Cover:
    size = len(m.points)
    step = size // count
    elements = tuple(
        (f"A{j}", frozenset((step * j + i) % size for i in range(length)))
        for j in range(count)
    )
    return Cover(m, elements)


def _builtin_identity() -> Scenario:
    m = _circle_model(8, 1, 0, "identity circle")
    arcs = _arc_cover(m, 4, 3)
    return Scenario(
        name="identity",
        model=m,
        covers=(("arcs", arcs),),
        analysis=Analysis(n_max=6, window=3, exact_limit=64),
    )


def _builtin_shift(k: int, depth: int) -> Scenario:
    m = shift_model(k, depth)
    return Scenario(
        name=f"shift k={k}",
        model=m,
        covers=(("cylinders", cylinder_cover(m, 1)),),
        analysis=Analysis(n_max=depth, window=2, exact_limit=10000),
    )


def _builtin_exercise1(k: int) -> Scenario:
    points = tuple(range(1, k + 1))
    m = Model(points=points, transition={p: set(points) for p in points}, label="exercise1")
    singles = Cover(m, tuple((f"e{p}", frozenset({p})) for p in points))
    return Scenario(
        name=f"exercise1 k={k}",
        model=m,
        covers=(("singletons", singles),),
        analysis=Analysis(n_max=5, window=2, exact_limit=16),
    )


def _builtin_exercise2(k: int) -> Scenario:
    points = tuple(range(1, k + 1))
    m = Model(points=points, transition={p: {1} for p in points}, label="exercise2")
    singles = Cover(m, tuple((f"e{p}", frozenset({p})) for p in points))
    return Scenario(
        name=f"exercise2 k={k}",
        model=m,
        covers=(("singletons", singles),),
        analysis=Analysis(n_max=5, window=2, exact_limit=16),
    )


def _builtin_contraction(slope: Fraction, resolution: int) -> Scenario:
    if not 0 < slope < 1:
        raise ScenarioError("contraction slope must lie in (0, 1)")
    spec = PLIntervalSpec(
        breakpoints=(0, 1), slopes=(slope,), intercepts=(0,), resolution=resolution
    )
    m, windows = discretize_interval_map(spec)
    return Scenario(
        name=f"contraction k={slope}",
        model=m,
        covers=(("windows", windows),),
        analysis=Analysis(n_max=8, window=2, exact_limit=max(128, resolution * 2)),
    )


def _builtin_circle(degree: int) -> Scenario:
    if degree == 1:
        m = _circle_model(16, 1, 1, "circle rotation")
        arcs = _arc_cover(m, 4, 5)
        analysis = Analysis(n_max=18, window=2, exact_limit=64)
    elif degree == 2:
        m = _circle_model(16, 2, 0, "circle degree 2")
        arcs = _arc_cover(m, 4, 5)
        analysis = Analysis(n_max=4, window=2, exact_limit=64)
    elif degree == 3:
        # six arcs: the image of an arc spans half the circle, so no
        # single arc catches both of its ends and joins stay arcs
        m = _circle_model(36, 3, 0, "circle degree 3")
        arcs = _arc_cover(m, 6, 7)
        analysis = Analysis(n_max=4, window=2, exact_limit=128)
    else:
        raise ScenarioError("circle degree must be 1, 2 or 3")
    return Scenario(
        name=f"circle-degree-{degree}",
        model=m,
        covers=(("arcs", arcs),),
        analysis=analysis,
    )


def _parse_builtin_params(text: str) -> dict:
    params = {}
    if text:
        for chunk in text.split(","):
            if "=" not in chunk:
                raise ScenarioError(f"builtin parameter {chunk!r} is not key=value")
            key, value = chunk.split("=", 1)
            params[key.strip()] = value.strip()
    return params


def builtin_names() -> tuple[str, ...]:
    return (
        "identity",
        "shift",
        "exercise1",
        "exercise2",
        "contraction",
        "circle",
    )


def builtin_scenario(spec: str) -> Scenario:
    """Builtins: identity | shift[:k=,depth=] | exercise1[:k=] |
    exercise2[:k=] | contraction[:k=,resolution=] | circle[:d=].

    Aliases of the form circle-degree-2 are accepted.
    """
    spec = spec.strip()
    if spec.startswith("circle-degree-"):
        spec = f"circle:d={spec.removeprefix('circle-degree-')}"
    name, _, rest = spec.partition(":")
    params = _parse_builtin_params(rest)

    def intp(key, default):
        try:
            return int(params.pop(key, default))
        except ValueError:
            raise ScenarioError(f"builtin parameter {key} must be an integer") from None

    if name == "identity":
        out = _builtin_identity()
    elif name == "shift":
        out = _builtin_shift(intp("k", 2), intp("depth", 4))
    elif name == "exercise1":
        out = _builtin_exercise1(intp("k", 2))
    elif name == "exercise2":
        out = _builtin_exercise2(intp("k", 2))
    elif name == "contraction":
        slope = _parse_fraction(params.pop("k", "1/2"), "builtin contraction k")
        out = _builtin_contraction(slope, intp("resolution", 16))
    elif name == "circle":
        out = _builtin_circle(intp("d", 1))
    else:
        raise ScenarioError(
            f"unknown builtin {name!r}; available: {', '.join(builtin_names())}"
        )
    if params:
        raise ScenarioError(f"builtin {name}: unknown parameter(s) {sorted(params)}")
    return out


def all_builtin_scenarios() -> tuple[Scenario, ...]:
    """The full acceptance roster of builtin scenarios."""
    specs = (
        "identity",
        "shift:k=2",
        "shift:k=3",
        "exercise1:k=2",
        "exercise1:k=3",
        "exercise2:k=2",
        "exercise2:k=3",
        "contraction:k=1/2",
        "contraction:k=1/4",
        "circle:d=1",
        "circle:d=2",
        "circle:d=3",
    )
    return tuple(builtin_scenario(s) for s in specs)
