"""Preorder induced by a potential phi on a G-metric space.

x <= y  iff  G(x, y, y) <= phi(y) - phi(x)  (plus an additive slack ``tol``).
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .errors import ArityError, EvaluationError
from .gmetric import (DEFAULT_TOL, CheckResult, GMetricSpace, Point, Witness,
                      _validated_samples, eval_g, is_symmetric)
from .maps import NTupleMap, parse_map

MAX_PREORDER_SAMPLES = 200


@dataclass(frozen=True)
class PhiOrder:
    space: GMetricSpace
    phi: Callable[[Point], float] = field(compare=False)
    tol: float = DEFAULT_TOL
    name: str = "phi"

    def __post_init__(self):
        if self.tol < 0:
            raise ValueError("tol must be nonnegative")

    def potential(self, x: Point) -> float:
        self.space.check_point(x)
        value = float(self.phi(x))
        if not math.isfinite(value):
            raise EvaluationError(f"{self.name}({x!r}) is not finite")
        return value

    def sides(self, x: Point, y: Point) -> tuple[float, float]:
        """Both sides of the defining inequality: (G(x, y, y), phi(y) - phi(x))."""
        return eval_g(self.space, x, y, y), self.potential(y) - self.potential(x)

    def leq(self, x: Point, y: Point, tol: float | None = None) -> bool:
        dist, gap = self.sides(x, y)
        return dist <= gap + (self.tol if tol is None else tol)


def leq(order: PhiOrder, x: Point, y: Point) -> bool:
    return order.leq(x, y)


def phi_from_spec(space: GMetricSpace, spec: str, tol: float = DEFAULT_TOL) -> PhiOrder:
    """Order from ``linear(a)`` or a DSL expression in ``x``."""
    return PhiOrder(space, parse_map(spec, 1, name=spec), tol, spec)


# --------------------------------------------------------------------------
# Relation reports (shared with the checkers module)

@dataclass(frozen=True)
class RelationWitness:
    """A failed test ``left <= right``, with the sample that produced it."""

    inputs: tuple
    left: Point
    right: Point
    distance: float  # G(left, right, right)
    gap: float       # phi(right) - phi(left)
    label: str = ""

    def to_dict(self) -> dict:
        return {"inputs": list(self.inputs), "left": self.left, "right": self.right,
                "distance": self.distance, "gap": self.gap, "label": self.label}

    def __str__(self) -> str:
        where = f" [{self.label}]" if self.label else ""
        return (f"input {self.inputs!r}{where}: {self.left!r} <= {self.right!r} fails "
                f"(G={self.distance!r} > phi gap {self.gap!r})")


@dataclass
class RelationReport:
    condition: str
    passed: bool = True
    checked: int = 0
    violations: int = 0
    witnesses: list[RelationWitness] = field(default_factory=list)
    pair_index: int | None = None  # first failing consecutive pair, for chains
    parts: list["RelationReport"] = field(default_factory=list)

    def record(self, witness: RelationWitness, cap: int) -> None:
        self.passed = False
        self.violations += 1
        if len(self.witnesses) < cap:
            self.witnesses.append(witness)

    def to_dict(self) -> dict:
        return {
            "condition": self.condition,
            "passed": self.passed,
            "checked": self.checked,
            "violations": self.violations,
            "pair_index": self.pair_index,
            "witnesses": [w.to_dict() for w in self.witnesses],
            "parts": [p.to_dict() for p in self.parts],
        }

    def summary(self, indent: str = "") -> str:
        verdict = "pass" if self.passed else f"FAIL ({self.violations} violations)"
        lines = [f"{indent}{self.condition}: {verdict}  [{self.checked} cases]"]
        if self.pair_index is not None:
            lines.append(f"{indent}  first failing pair index: {self.pair_index}")
        lines.extend(f"{indent}    witness {w}" for w in self.witnesses)
        for part in self.parts:
            lines.append(part.summary(indent + "  "))
        return "\n".join(lines)


def tally_leq(order: PhiOrder, left: Point, right: Point, inputs: tuple,
              report: RelationReport, cap: int, label: str = "") -> bool:
    """Count one ``left <= right`` test in ``report``; record a witness on failure."""
    report.checked += 1
    dist, gap = order.sides(left, right)
    if dist <= gap + order.tol:
        return True
    report.record(RelationWitness(inputs, left, right, dist, gap, label), cap)
    return False


# --------------------------------------------------------------------------
# Preorder laws

@dataclass
class OrderReport:
    order: str
    samples: int
    tol: float
    reflexive: CheckResult
    transitive: CheckResult
    antisymmetric: CheckResult | None = None  # only checked when G is symmetric

    @property
    def passed(self) -> bool:
        checks = [self.reflexive, self.transitive]
        if self.antisymmetric is not None:
            checks.append(self.antisymmetric)
        return all(c.passed for c in checks)

    @property
    def is_preorder(self) -> bool:
        return self.reflexive.passed and self.transitive.passed

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "samples": self.samples,
            "tol": self.tol,
            "passed": self.passed,
            "reflexive": self.reflexive.to_dict(),
            "transitive": self.transitive.to_dict(),
            "antisymmetric": None if self.antisymmetric is None else self.antisymmetric.to_dict(),
        }

    def summary(self) -> str:
        lines = [f"Preorder induced by {self.order} ({self.samples} samples, tol={self.tol:g})"]
        for label, r in (("reflexive", self.reflexive), ("transitive", self.transitive),
                         ("antisymmetric", self.antisymmetric)):
            if r is None:
                lines.append(f"  {label}: not checked (G is not symmetric on the samples)")
                continue
            verdict = "pass" if r.passed else f"FAIL ({r.violations} violations)"
            lines.append(f"  {label}: {verdict}  [{r.checked} cases]")
            lines.extend(f"      witness {w}" for w in r.witnesses)
        return "\n".join(lines)


def check_preorder(order: PhiOrder, samples: Sequence[Point], tol: float | None = None,
                   max_witnesses: int = 5, seed: int = 0) -> OrderReport:
    """Check reflexivity and transitivity of the induced relation on ``samples``.

    Transitivity is asserted with slack ``2 * tol`` since it chains two
    inequalities.  Sample sets above 200 points are subsampled with ``seed``.
    """
    tol = order.tol if tol is None else tol
    S = _validated_samples(order.space, samples)
    if len(S) > MAX_PREORDER_SAMPLES:
        S = random.Random(seed).sample(S, MAX_PREORDER_SAMPLES)
    n = len(S)
    sides = {(i, j): order.sides(S[i], S[j]) for i in range(n) for j in range(n)}
    related = {k: d <= g + tol for k, (d, g) in sides.items()}

    refl = CheckResult("reflexive")
    for i in range(n):
        refl.checked += 1
        if not related[(i, i)]:
            d, g = sides[(i, i)]
            refl.record(Witness((S[i], S[i]), d, g + tol, "<="), max_witnesses)

    trans = CheckResult("transitive")
    for i, j in itertools.product(range(n), repeat=2):
        if not related[(i, j)]:
            continue
        for k in range(n):
            if not related[(j, k)]:
                continue
            trans.checked += 1
            d, g = sides[(i, k)]
            if d > g + 2 * tol:
                trans.record(Witness((S[i], S[j], S[k]), d, g + 2 * tol, "<="), max_witnesses)

    antisym = None
    symmetric, _ = is_symmetric(order.space, S, tol)
    if symmetric:
        antisym = CheckResult("antisymmetric")
        for i, j in itertools.combinations(range(n), 2):
            antisym.checked += 1
            if related[(i, j)] and related[(j, i)] and S[i] != S[j]:
                d, g = sides[(i, j)]
                antisym.record(Witness((S[i], S[j]), d, g + tol, "<="), max_witnesses)

    return OrderReport(order.name, n, tol, refl, trans, antisym)


def check_isotone(F: NTupleMap, order: PhiOrder, sample_pairs: Sequence[tuple[tuple, tuple]],
                  max_witnesses: int = 5) -> RelationReport:
    """For each (X, Z) with x_i <= z_i for all i, test F(X) <= F(Z)."""
    report = RelationReport(f"isotone({F.name})")
    for X, Z in sample_pairs:
        if len(X) != F.arity or len(Z) != F.arity:
            raise ArityError(f"{F.name} has arity {F.arity}; got pair of sizes {len(X)}, {len(Z)}")
        if all(order.leq(x, z) for x, z in zip(X, Z)):
            tally_leq(order, F(*X), F(*Z), (tuple(X), tuple(Z)), report, max_witnesses)
    return report
