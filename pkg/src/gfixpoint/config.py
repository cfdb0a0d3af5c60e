"""Problem configuration files (YAML).

One document per problem.  Recognised keys::

    name: contractive            # used for the output directory
    scheme: single               # single | pair | triple | chain
    seed: [0.0, 0.0]             # starting tuple; its length is the arity n
    space:
      kind: max_abs_diff         # max_abs_diff | max_value | discrete | custom_expr
      lower: 0.0                 # interval carrier; omitted means -inf (0 for max_value)
      upper: 1.0                 # omitted means +inf
      closed_upper: true
      box: [[0, 1], [0, 1]]      # max_abs_diff on a vector box instead of an interval
      elements: [0, 1, 2]        # discrete only
      expr: "abs(x-y)"           # custom_expr only; free variables x, y, z
    phi: linear(2)               # linear(a) or an expression in x
    maps:
      F: "(x1+x2)/4 + 1/2"       # expression in x1..xn or builtin
      selfmaps: [linear(5)]      # pair: [g]; triple: [G, H]; chain: [G_2, ..., G_r]
      chain: [linear(5), linear(4), linear(3)]   # list checked by check-chain
    solver: {eps: 1e-9, max_iter: 1000, phi_cap: 1e9, cauchy_window: 8,
             stop_on_violation: false}
    checks: {tol: 1e-12, isotone: false, dual: false, max_witnesses: 5}
    samples: {lower: 0.0, upper: 2.0, count: 21, include_upper: true,
              tuples: 500, rng_seed: 0}

Builtin maps: ``sine_perturbed(n)``, ``linear(k)``, ``paper_f3``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any

import yaml

from .errors import ConfigError, GFixpointError
from .fixpoint import SolverConfig
from .gmetric import (Box, GMetricSpace, Interval, custom_expr, discrete, max_abs_diff,
                      max_value)
from .maps import NTupleMap, SelfMap, parse_map
from .order import PhiOrder, phi_from_spec
from .sampling import box_grid, grid, random_tuples

SCHEMES = ("single", "pair", "triple", "chain")
SPACE_KINDS = ("max_abs_diff", "max_value", "discrete", "custom_expr")

_ALLOWED = {
    "": {"name", "scheme", "seed", "space", "phi", "maps", "solver", "checks", "samples"},
    "space": {"kind", "lower", "upper", "closed_lower", "closed_upper", "box", "elements", "expr"},
    "maps": {"F", "selfmaps", "chain"},
    "solver": {"eps", "max_iter", "phi_cap", "cauchy_window", "stop_on_violation"},
    "checks": {"tol", "isotone", "dual", "max_witnesses"},
    "samples": {"lower", "upper", "count", "include_upper", "tuples", "rng_seed"},
}


@dataclass
class ProblemConfig:
    name: str
    scheme: str
    seed: tuple
    space: dict[str, Any]
    phi: str
    maps: dict[str, Any] = field(default_factory=dict)
    solver: SolverConfig = field(default_factory=SolverConfig)
    checks: dict[str, Any] = field(default_factory=dict)
    samples: dict[str, Any] = field(default_factory=dict)
    source: str = "<memory>"
    lines: dict[str, int] = field(default_factory=dict, repr=False)

    @property
    def arity(self) -> int:
        return len(self.seed)

    @property
    def tol(self) -> float:
        return float(self.checks.get("tol", 1e-12))

    @property
    def max_witnesses(self) -> int:
        return int(self.checks.get("max_witnesses", 5))

    def where(self, key: str) -> str:
        line = self.lines.get(key)
        return f"{self.source}:{line}" if line else self.source

    def error(self, key: str, message: str) -> ConfigError:
        return ConfigError(f"{self.where(key)}: {key}: {message}")

    def with_overrides(self, eps=None, max_iter=None, seed=None) -> "ProblemConfig":
        solver = self.solver
        if eps is not None:
            solver = replace(solver, eps=eps)
        if max_iter is not None:
            solver = replace(solver, max_iter=max_iter)
        samples = dict(self.samples)
        if seed is not None:
            samples["rng_seed"] = seed
        return replace(self, solver=solver, samples=samples)

    # ---- builders ---------------------------------------------------------

    def build_space(self) -> GMetricSpace:
        s = self.space
        kind = s.get("kind")
        try:
            if kind == "discrete":
                if "elements" not in s:
                    raise self.error("space.elements", "discrete spaces need an element list")
                return discrete(tuple(s["elements"]))
            if kind == "max_abs_diff" and "box" in s:
                sides = tuple(Interval(float(lo), float(hi)) for lo, hi in s["box"])
                return max_abs_diff(Box(sides))
            default_lower = 0.0 if kind == "max_value" else -math.inf
            carrier = Interval(float(s.get("lower", default_lower)), float(s.get("upper", math.inf)),
                               bool(s.get("closed_lower", True)), bool(s.get("closed_upper", True)))
            if kind == "max_abs_diff":
                return max_abs_diff(carrier)
            if kind == "max_value":
                return max_value(carrier)
            if kind == "custom_expr":
                if "expr" not in s:
                    raise self.error("space.expr", "custom_expr spaces need an expression")
                return custom_expr(str(s["expr"]), carrier)
        except ConfigError:
            raise
        except (GFixpointError, ValueError, TypeError) as exc:
            raise self.error("space", str(exc)) from exc
        raise self.error("space.kind", f"unknown space {kind!r}; expected one of {SPACE_KINDS}")

    def build_order(self, space: GMetricSpace | None = None) -> PhiOrder:
        space = space or self.build_space()
        try:
            return phi_from_spec(space, self.phi, self.tol)
        except GFixpointError as exc:
            raise self.error("phi", str(exc)) from exc

    def build_F(self) -> NTupleMap:
        if "F" not in self.maps:
            raise self.error("maps.F", "missing map F")
        try:
            return parse_map(str(self.maps["F"]), self.arity, name="F")
        except GFixpointError as exc:
            raise self.error("maps.F", str(exc)) from exc

    def _self_maps(self, key: str) -> list[SelfMap]:
        out = []
        for k, spec in enumerate(self.maps.get(key, [])):
            try:
                out.append(parse_map(str(spec), 1, name=str(spec)))
            except GFixpointError as exc:
                raise self.error(f"maps.{key}", f"entry {k}: {exc}") from exc
        return out

    def build_selfmaps(self) -> list[SelfMap]:
        return self._self_maps("selfmaps")

    def build_chain(self) -> list[SelfMap]:
        return self._self_maps("chain")

    def sample_points(self, space: GMetricSpace | None = None) -> list:
        space = space or self.build_space()
        carrier = space.carrier
        if hasattr(carrier, "elements"):
            return list(carrier.elements)
        count = int(self.samples.get("count", 21))
        if isinstance(carrier, Box):
            return box_grid([(side.lower, side.upper) for side in carrier.sides], count)
        lower, upper = self._sample_bounds(carrier)
        return grid(lower, upper, count, bool(self.samples.get("include_upper", True)))

    def sample_tuples(self, space: GMetricSpace | None = None) -> list[tuple]:
        space = space or self.build_space()
        count = int(self.samples.get("tuples", 500))
        seed = int(self.samples.get("rng_seed", 0))
        if hasattr(space.carrier, "elements"):
            rng = random.Random(seed)
            elements = list(space.carrier.elements)
            return [tuple(rng.choice(elements) for _ in range(self.arity)) for _ in range(count)]
        lower, upper = self._sample_bounds(space.carrier)
        return random_tuples(lower, upper, self.arity, count, seed,
                             bool(self.samples.get("include_upper", True)))

    def _sample_bounds(self, carrier) -> tuple[float, float]:
        if not isinstance(carrier, Interval):
            raise self.error("samples", "tuple sampling needs a scalar interval carrier")
        lower = float(self.samples.get("lower", carrier.lower))
        upper = float(self.samples.get("upper", carrier.upper))
        if not (math.isfinite(lower) and math.isfinite(upper)):
            raise self.error("samples", "finite samples.lower and samples.upper are required "
                                        "for unbounded carriers")
        return lower, upper


def _key_lines(text: str) -> dict[str, int]:
    """Map dotted key paths to 1-based line numbers."""
    lines: dict[str, int] = {}

    def walk(node, prefix):
        if isinstance(node, yaml.MappingNode):
            for key_node, value_node in node.value:
                path = f"{prefix}.{key_node.value}" if prefix else str(key_node.value)
                lines[path] = key_node.start_mark.line + 1
                walk(value_node, path)

    try:
        walk(yaml.compose(text), "")
    except yaml.YAMLError:
        pass
    return lines


def parse_config(text: str, source: str = "<memory>") -> ProblemConfig:
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f"{source}:{mark.line + 1}:{mark.column + 1}" if mark else source
        problem = getattr(exc, "problem", None) or str(exc)
        raise ConfigError(f"{where}: YAML parse error: {problem}") from exc
    if not isinstance(doc, dict):
        raise ConfigError(f"{source}: a config must be a mapping")
    lines = _key_lines(text)

    def err(key, message):
        line = lines.get(key)
        return ConfigError(f"{source}:{line}: {key}: {message}" if line else f"{source}: {key}: {message}")

    for section, allowed in _ALLOWED.items():
        block = doc if not section else doc.get(section, {})
        if block is None:
            continue
        if not isinstance(block, dict):
            raise err(section, "must be a mapping")
        for key in block:
            if key not in allowed:
                path = f"{section}.{key}" if section else str(key)
                raise err(path, "unknown key")

    for key in ("name", "scheme", "seed", "space", "phi"):
        if key not in doc:
            raise ConfigError(f"{source}: missing required key {key!r}")
    scheme = doc["scheme"]
    if scheme not in SCHEMES:
        raise err("scheme", f"unknown scheme {scheme!r}; expected one of {SCHEMES}")
    seed = doc["seed"]
    if not isinstance(seed, list) or not seed:
        raise err("seed", "must be a nonempty list")
    if len(seed) < 2:
        raise err("seed", "n-tuple problems need n >= 2")
    seed = tuple(float(v) if isinstance(v, (int, float)) and not isinstance(v, bool) else v
                 for v in seed)

    maps = doc.get("maps") or {}
    n_self = len(maps.get("selfmaps", []) or [])
    need = {"single": (0, 0), "pair": (1, 1), "triple": (2, 2), "chain": (1, None)}[scheme]
    if n_self < need[0] or (need[1] is not None and n_self > need[1]):
        raise err("maps.selfmaps" if "maps.selfmaps" in lines else "scheme",
                  f"scheme {scheme} needs {need[0]}{'' if need[1] == need[0] else '+'} self-maps, "
                  f"got {n_self}")

    solver_doc = doc.get("solver") or {}
    try:
        solver = SolverConfig(
            eps=float(solver_doc.get("eps", 1e-9)),
            max_iter=int(solver_doc.get("max_iter", 1000)),
            phi_cap=None if solver_doc.get("phi_cap", 1e9) is None else float(solver_doc.get("phi_cap", 1e9)),
            cauchy_window=int(solver_doc.get("cauchy_window", 8)),
            stop_on_violation=bool(solver_doc.get("stop_on_violation", False)),
        )
    except (TypeError, ValueError) as exc:
        raise err("solver", str(exc)) from exc

    config = ProblemConfig(
        name=str(doc["name"]),
        scheme=scheme,
        seed=seed,
        space=dict(doc["space"]),
        phi=str(doc["phi"]),
        maps=dict(maps),
        solver=solver,
        checks=dict(doc.get("checks") or {}),
        samples=dict(doc.get("samples") or {}),
        source=source,
        lines=lines,
    )
    # Fail early on unknown builtins and arity mismatches.
    config.build_order()
    if "F" in config.maps:
        config.build_F()
    config.build_selfmaps()
    config.build_chain()
    return config


def load_config(path: str | Path) -> ProblemConfig:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text, str(path))
