"""Carriers, ternary distance functions and the G-metric axiom checker."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from numbers import Real
from typing import Any, Callable, Hashable, Iterable, Sequence

from .errors import DomainError, EvaluationError
from .maps import evaluate, parse_expr

Point = Hashable
DEFAULT_TOL = 1e-12
DEFAULT_WITNESS_CAP = 5
AXIOMS = ("G1", "G2", "G3", "G4", "G5")


# --------------------------------------------------------------------------
# Carriers

def _is_real(v: Any) -> bool:
    return isinstance(v, Real) and not isinstance(v, bool)


@dataclass(frozen=True)
class Interval:
    """Real interval; infinite endpoints are always open."""

    lower: float = -math.inf
    upper: float = math.inf
    closed_lower: bool = True
    closed_upper: bool = True

    def __post_init__(self):
        if math.isnan(self.lower) or math.isnan(self.upper) or self.lower > self.upper:
            raise ValueError(f"invalid interval bounds [{self.lower}, {self.upper}]")

    def contains(self, p: Any) -> bool:
        if not _is_real(p) or not math.isfinite(p):
            return False
        above = p >= self.lower if self.closed_lower else p > self.lower
        below = p <= self.upper if self.closed_upper else p < self.upper
        return above and below

    def __str__(self) -> str:
        left = "[" if self.closed_lower and math.isfinite(self.lower) else "("
        right = "]" if self.closed_upper and math.isfinite(self.upper) else ")"
        return f"{left}{self.lower:g}, {self.upper:g}{right}"


@dataclass(frozen=True)
class Box:
    """Product of intervals; points are tuples of floats."""

    sides: tuple[Interval, ...]

    @property
    def dim(self) -> int:
        return len(self.sides)

    def contains(self, p: Any) -> bool:
        return (isinstance(p, tuple) and len(p) == self.dim
                and all(side.contains(c) for side, c in zip(self.sides, p)))

    def __str__(self) -> str:
        return " x ".join(str(s) for s in self.sides)


@dataclass(frozen=True)
class FiniteSet:
    elements: tuple

    def __post_init__(self):
        if len(set(self.elements)) != len(self.elements):
            raise ValueError("finite carrier elements must be distinct")

    def contains(self, p: Any) -> bool:
        try:
            return p in self.elements
        except TypeError:
            return False

    def __str__(self) -> str:
        return "{" + ", ".join(map(str, self.elements)) + "}"


Carrier = Interval | Box | FiniteSet


# --------------------------------------------------------------------------
# Spaces

@dataclass(frozen=True)
class GMetricSpace:
    name: str
    carrier: Carrier
    g_fn: Callable[[Point, Point, Point], float] = field(compare=False)

    def __call__(self, x: Point, y: Point, z: Point) -> float:
        return eval_g(self, x, y, z)

    def check_point(self, p: Point) -> None:
        if not self.carrier.contains(p):
            raise DomainError(f"{p!r} is not in the carrier {self.carrier} of {self.name}")


def eval_g(space: GMetricSpace, x: Point, y: Point, z: Point) -> float:
    for p in (x, y, z):
        space.check_point(p)
    try:
        value = space.g_fn(x, y, z)
    except DomainError:
        raise
    except (ZeroDivisionError, OverflowError, ValueError) as exc:
        raise EvaluationError(f"G{(x, y, z)!r} on {space.name}: {exc}") from exc
    value = float(value)
    if not math.isfinite(value):
        raise EvaluationError(f"G{(x, y, z)!r} on {space.name} is not finite")
    if value < 0:
        raise EvaluationError(f"G{(x, y, z)!r} on {space.name} is negative ({value!r})")
    return value


def derived_dg(space: GMetricSpace, x: Point, y: Point) -> float:
    """Binary metric d_G(x, y) = G(x, y, y) + G(x, x, y)."""
    return eval_g(space, x, y, y) + eval_g(space, x, x, y)


def _sup_dist(a, b) -> float:
    if isinstance(a, tuple):
        return max(abs(u - v) for u, v in zip(a, b))
    return abs(a - b)


def max_abs_diff(carrier: Interval | Box = Interval(), name: str = "max_abs_diff") -> GMetricSpace:
    """G(x, y, z) = max{|x-y|, |x-z|, |y-z|} with the sup norm on boxes."""
    return GMetricSpace(
        name, carrier, lambda x, y, z: max(_sup_dist(x, y), _sup_dist(x, z), _sup_dist(y, z))
    )


def max_value(carrier: Interval = Interval(0.0), name: str = "max_value") -> GMetricSpace:
    """G(x, y, z) = max{x, y, z} on a subset of [0, inf)."""
    if carrier.lower < 0:
        raise ValueError("max_value needs a carrier inside [0, inf)")
    return GMetricSpace(name, carrier, lambda x, y, z: max(x, y, z))


def discrete(elements: Iterable[Point], name: str = "discrete") -> GMetricSpace:
    return GMetricSpace(name, FiniteSet(tuple(elements)),
                        lambda x, y, z: 0.0 if x == y == z else 1.0)


def custom_expr(text: str, carrier: Interval, name: str = "custom_expr") -> GMetricSpace:
    """G given as a DSL expression in the free variables x, y, z."""
    expr = parse_expr(text, 3, ("x", "y", "z"))
    return GMetricSpace(name, carrier, lambda x, y, z: evaluate(expr, (x, y, z)))


def table_space(table: dict[tuple, float], name: str = "table") -> GMetricSpace:
    """Space on a finite carrier with G given by an explicit lookup table."""
    elements = tuple(sorted({p for key in table for p in key}))
    return GMetricSpace(name, FiniteSet(elements), lambda x, y, z: table[(x, y, z)])


# --------------------------------------------------------------------------
# Axiom checking

@dataclass(frozen=True)
class Witness:
    """Points violating an inequality, with both sides of it."""

    points: tuple
    lhs: float
    rhs: float
    relation: str

    def __str__(self) -> str:
        pts = ", ".join(repr(p) for p in self.points)
        return f"({pts}): {self.lhs!r} {self.relation} {self.rhs!r} fails"


@dataclass
class CheckResult:
    """Outcome of one universally quantified property over a sample set."""

    name: str
    passed: bool = True
    checked: int = 0
    violations: int = 0
    witnesses: list[Witness] = field(default_factory=list)

    def record(self, witness: Witness, cap: int) -> None:
        self.passed = False
        self.violations += 1
        if len(self.witnesses) < cap:
            self.witnesses.append(witness)

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "checked": self.checked,
            "violations": self.violations,
            "witnesses": [
                {"points": list(w.points), "lhs": w.lhs, "rhs": w.rhs, "relation": w.relation}
                for w in self.witnesses
            ],
        }


@dataclass
class AxiomReport:
    space: str
    samples: int
    tol: float
    results: dict[str, CheckResult]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results.values())

    def __getitem__(self, axiom: str) -> CheckResult:
        return self.results[axiom]

    def failed(self) -> list[str]:
        return [name for name, r in self.results.items() if not r.passed]

    def to_dict(self) -> dict:
        return {
            "space": self.space,
            "samples": self.samples,
            "tol": self.tol,
            "passed": self.passed,
            "axioms": {name: r.to_dict() for name, r in self.results.items()},
        }

    def summary(self) -> str:
        lines = [f"G-metric axioms on {self.space} ({self.samples} samples, tol={self.tol:g})"]
        for name, r in self.results.items():
            verdict = "pass" if r.passed else f"FAIL ({r.violations} violations)"
            lines.append(f"  {name}: {verdict}  [{r.checked} cases]")
            lines.extend(f"      witness {w}" for w in r.witnesses)
        return "\n".join(lines)


def _validated_samples(space: GMetricSpace, samples: Sequence[Point]) -> list[Point]:
    samples = list(samples)
    if not samples:
        raise ValueError("sample set is empty")
    for p in samples:
        space.check_point(p)
    return samples


def check_axioms(space: GMetricSpace, samples: Sequence[Point], tol: float = DEFAULT_TOL,
                 max_witnesses: int = DEFAULT_WITNESS_CAP) -> AxiomReport:
    """Exhaustively test G1..G5 over all tuples drawn from ``samples``.

    Inequalities pass when satisfied within ``tol``.  G2's strict positivity
    is tested exactly.  Distinctness conditions use ``!=`` on the points.
    """
    if tol < 0:
        raise ValueError("tol must be nonnegative")
    S = _validated_samples(space, samples)
    res = {a: CheckResult(a) for a in AXIOMS}

    # Pre-evaluate every triple once; eval_g raises on malformed values.
    table = {t: eval_g(space, *t) for t in itertools.product(S, repeat=3)}

    for x in S:
        res["G1"].checked += 1
        v = table[(x, x, x)]
        if v > tol:
            res["G1"].record(Witness((x, x, x), v, 0.0, "=="), max_witnesses)

    for x, y in itertools.product(S, repeat=2):
        if x == y:
            continue
        res["G2"].checked += 1
        v = table[(x, x, y)]
        if not v > 0:
            res["G2"].record(Witness((x, x, y), v, 0.0, ">"), max_witnesses)

    for x, y, z in itertools.product(S, repeat=3):
        v = table[(x, y, z)]
        if z != y:
            res["G3"].checked += 1
            lhs = table[(x, x, y)]
            if lhs > v + tol:
                res["G3"].record(Witness((x, y, z), lhs, v, "<="), max_witnesses)
        res["G4"].checked += 1
        for perm in itertools.permutations((x, y, z)):
            other = table[perm]
            if abs(other - v) > tol:
                res["G4"].record(Witness((x, y, z) + perm, v, other, "=="), max_witnesses)
                break

    for x, y, z, a in itertools.product(S, repeat=4):
        res["G5"].checked += 1
        lhs = table[(x, y, z)]
        rhs = table[(x, a, a)] + table[(a, y, z)]
        if lhs > rhs + tol:
            res["G5"].record(Witness((x, y, z, a), lhs, rhs, "<="), max_witnesses)

    return AxiomReport(space.name, len(S), tol, res)


def is_symmetric(space: GMetricSpace, samples: Sequence[Point],
                 tol: float = DEFAULT_TOL) -> tuple[bool, Witness | None]:
    """True iff G(x, y, y) == G(y, x, x) within tol for all sample pairs."""
    S = _validated_samples(space, samples)
    for x, y in itertools.combinations(S, 2):
        a = eval_g(space, x, y, y)
        b = eval_g(space, y, x, x)
        if abs(a - b) > tol:
            return False, Witness((x, y), a, b, "==")
    return True, None


def cauchy_residual(space: GMetricSpace, window: Sequence[Point]) -> float:
    """max over ordered pairs (n, m) of the window of G(x_n, x_m, x_m)."""
    if len(window) < 2:
        raise ValueError("Cauchy window needs at least two points")
    return max(eval_g(space, a, b, b) for a, b in itertools.product(window, repeat=2))
