"""Constructive n-tuple fixed point iterations with inline hypothesis monitors.

Four schedules are provided:

* single: x_{l+1} = cyclic F-step of x_l
* pair:   F-step, g-step, F-step, g-step, ...
* triple: H-step, F-step, G-step per cycle
* chain:  G_r, G_{r-1}, ..., G_3, F, G_2 per cycle

Self-map steps act componentwise.  A run is declared converged when the
per-component Cauchy residual over the trailing window is below ``eps`` and
the definition-level residual (fixed point or common fixed point) at the
current tuple is at most ``eps``.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Callable, Sequence

from .checkers import check_n_embedded_chain, check_weakly_related
from .errors import ArityError
from .gmetric import GMetricSpace, Point, cauchy_residual, eval_g
from .maps import NTupleMap, SelfMap, cyclic_apply, rotate_left
from .order import PhiOrder, RelationReport


class Status(str, Enum):
    CONVERGED = "converged"
    MAX_ITER_EXCEEDED = "max_iter_exceeded"
    HYPOTHESIS_VIOLATED = "hypothesis_violated"
    DIVERGED = "diverged(phi_cap)"


@dataclass(frozen=True)
class SolverConfig:
    eps: float = 1e-9
    max_iter: int = 1000
    phi_cap: float | None = 1e9
    cauchy_window: int = 8
    stop_on_violation: bool = False
    monitor_relations: bool = True

    def __post_init__(self):
        if not self.eps > 0:
            raise ValueError("eps must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        if self.cauchy_window < 2:
            raise ValueError("cauchy_window must be at least 2")


# --------------------------------------------------------------------------
# Verification residuals

def _check_tuple(F: NTupleMap, X: Sequence[Point]) -> tuple:
    if len(X) != F.arity:
        raise ArityError(f"{F.name} has arity {F.arity}, tuple has {len(X)} components")
    return tuple(X)


def verify_ntuple_fixed_point(F: NTupleMap, X: Sequence[Point], space: GMetricSpace) -> float:
    """max_i G(F(rot_i X), x^i, x^i); zero exactly at n-tuple fixed points."""
    X = _check_tuple(F, X)
    images = cyclic_apply(F, X)
    return max(eval_g(space, fx, x, x) for fx, x in zip(images, X))


def verify_common_fixed_point(F: NTupleMap, selfmaps: Sequence[SelfMap], X: Sequence[Point],
                              space: GMetricSpace) -> float:
    residual = verify_ntuple_fixed_point(F, X, space)
    for h in selfmaps:
        for x in X:
            residual = max(residual, eval_g(space, h(x), x, x))
    return residual


def verify_coincidence(F: NTupleMap, selfmaps: Sequence[SelfMap], X: Sequence[Point],
                       space: GMetricSpace) -> float:
    """Largest pairwise G-residual among F(rot_i X) and the h(x^i), over i."""
    if not selfmaps:
        raise ValueError("coincidence needs at least one self-map")
    X = _check_tuple(F, X)
    residual = 0.0
    for i, x in enumerate(X):
        values = [F(*rotate_left(X, i))] + [h(x) for h in selfmaps]
        for a, b in itertools.permutations(values, 2):
            residual = max(residual, eval_g(space, a, b, b))
    return residual


# --------------------------------------------------------------------------
# Trace and report

@dataclass(frozen=True)
class Step:
    l: int
    label: str                      # map that produced this tuple; "seed" at l=0
    point: tuple
    phi: tuple[float, ...]
    cauchy: tuple[float, ...] | None  # per component, over the trailing window


TRACE_FIELDS = ("l", "i", "x", "phi", "producing_map", "cauchy_residual")


@dataclass
class OrbitTrace:
    steps: list[Step] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.steps)

    def points(self) -> list[tuple]:
        return [s.point for s in self.steps]

    def component(self, i: int) -> list[Point]:
        return [s.point[i] for s in self.steps]

    def labels(self) -> list[str]:
        return [s.label for s in self.steps]

    def rows(self):
        for s in self.steps:
            for i, (x, phi) in enumerate(zip(s.point, s.phi)):
                cauchy = None if s.cauchy is None else s.cauchy[i]
                yield {"l": s.l, "i": i + 1, "x": x, "phi": phi,
                       "producing_map": s.label, "cauchy_residual": cauchy}

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=TRACE_FIELDS, lineterminator="\n")
        writer.writeheader()
        for row in self.rows():
            row = {k: ("" if v is None else repr(v) if isinstance(v, float) else v)
                   for k, v in row.items()}
            writer.writerow(row)
        return buf.getvalue()

    def to_jsonl(self) -> str:
        return "".join(json.dumps(row) + "\n" for row in self.rows())


@dataclass
class Monitors:
    seed_condition: bool
    preorder_chain: bool = True
    phi_monotone: bool = True
    phi_bounded: bool = True
    first_chain_violation: int | None = None
    first_monotone_violation: int | None = None
    relations: list[RelationReport] = field(default_factory=list)

    @property
    def relations_hold(self) -> bool:
        return all(r.passed for r in self.relations)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["relations"] = [r.to_dict() for r in self.relations]
        return d


@dataclass
class FixpointReport:
    scheme: str
    status: Status
    candidate: tuple
    iterations: int
    converged_at: int | None
    residuals: dict[str, float]
    monitors: Monitors
    trace: OrbitTrace
    config: SolverConfig

    @property
    def converged(self) -> bool:
        return self.status is Status.CONVERGED

    def to_dict(self) -> dict:
        return {
            "scheme": self.scheme,
            "status": self.status.value,
            "candidate": list(self.candidate),
            "iterations": self.iterations,
            "converged_at": self.converged_at,
            "residuals": dict(self.residuals),
            "monitors": self.monitors.to_dict(),
            "config": asdict(self.config),
        }

    def summary(self) -> str:
        m = self.monitors
        lines = [
            f"scheme: {self.scheme}",
            f"status: {self.status.value}",
            f"candidate: {self.candidate!r}",
            f"steps taken: {self.iterations}"
            + ("" if self.converged_at is None else f" (stable from l={self.converged_at})"),
        ]
        lines += [f"residual {k}: {v!r}" for k, v in self.residuals.items()]
        lines += [
            f"monitor seed_condition: {'held' if m.seed_condition else 'VIOLATED'}",
            f"monitor preorder_chain: {'green' if m.preorder_chain else f'RED from l={m.first_chain_violation}'}",
            f"monitor phi_monotone: {'green' if m.phi_monotone else f'RED from l={m.first_monotone_violation}'}",
            f"monitor phi_bounded: {'green' if m.phi_bounded else 'RED (phi_cap exceeded)'}",
        ]
        for r in m.relations:
            lines.append("monitor " + r.summary())
        return "\n".join(lines)


# --------------------------------------------------------------------------
# Iteration engine

Stepper = tuple[str, Callable[[tuple], tuple]]


def _f_step(F: NTupleMap) -> Callable[[tuple], tuple]:
    return lambda X: cyclic_apply(F, X)


def _self_step(h: SelfMap) -> Callable[[tuple], tuple]:
    return lambda X: tuple(h(x) for x in X)


def _stable_from(space: GMetricSpace, points: list[tuple], eps: float) -> int:
    """Smallest k such that every component of points[k:] has Cauchy residual < eps."""
    n = len(points[0])
    k = len(points) - 1
    worst = 0.0
    while k > 0:
        p = points[k - 1]
        for q in points[k:]:
            for i in range(n):
                worst = max(worst, eval_g(space, p[i], q[i], q[i]), eval_g(space, q[i], p[i], p[i]))
        if worst >= eps:
            break
        k -= 1
    return k


def _run(scheme: str, schedule: list[Stepper], F: NTupleMap, selfmaps: list[SelfMap],
         x0: Sequence[Point], order: PhiOrder, cfg: SolverConfig,
         relations: list[tuple[NTupleMap, SelfMap]], chain_precheck: list[SelfMap] | None = None
         ) -> FixpointReport:
    space = order.space
    if F.arity < 2:
        raise ArityError("n-tuple schemes need arity n >= 2")
    x = _check_tuple(F, x0)
    for p in x:
        space.check_point(p)

    def residual(X: tuple) -> float:
        if selfmaps:
            return verify_common_fixed_point(F, selfmaps, X, space)
        return verify_ntuple_fixed_point(F, X, space)

    seed_images = cyclic_apply(F, x)
    monitors = Monitors(seed_condition=all(order.leq(a, b) for a, b in zip(x, seed_images)))
    relation_reports = []
    if cfg.monitor_relations:
        relation_reports = [RelationReport(f"weakly_related({F.name}, {h.name}) along orbit")
                            for _, h in relations]
        monitors.relations.extend(relation_reports)
        if chain_precheck and len(chain_precheck) >= 2:
            monitors.relations.append(check_n_embedded_chain(chain_precheck, order, list(x)))

    phi = tuple(order.potential(p) for p in x)
    trace = OrbitTrace([Step(0, "seed", x, phi, None)])
    status = None
    for l in range(1, cfg.max_iter + 1):
        label, step = schedule[(l - 1) % len(schedule)]
        if cfg.monitor_relations and label == "F":
            for report, (_, h) in zip(relation_reports, relations):
                part = check_weakly_related(F, h, order, [x], max_witnesses=1)
                report.checked += part.checked
                if not part.passed:
                    report.passed = False
                    report.violations += part.violations
                    if len(report.witnesses) < 5:
                        report.witnesses.extend(part.witnesses)
        new = step(x)
        for p in new:
            space.check_point(p)
        new_phi = tuple(order.potential(p) for p in new)

        if monitors.preorder_chain and not all(order.leq(a, b) for a, b in zip(x, new)):
            monitors.preorder_chain = False
            monitors.first_chain_violation = l
        if monitors.phi_monotone and any(b < a - order.tol for a, b in zip(phi, new_phi)):
            monitors.phi_monotone = False
            monitors.first_monotone_violation = l

        window = [s.point for s in trace.steps[-(cfg.cauchy_window - 1):]] + [new]
        cauchy = tuple(cauchy_residual(space, [w[i] for w in window]) for i in range(len(new)))
        trace.steps.append(Step(l, label, new, new_phi, cauchy))
        x, phi = new, new_phi

        if cfg.phi_cap is not None and max(phi) > cfg.phi_cap:
            monitors.phi_bounded = False
            status = Status.DIVERGED
            break
        if cfg.stop_on_violation and not (monitors.preorder_chain and monitors.phi_monotone):
            status = Status.HYPOTHESIS_VIOLATED
            break
        if max(cauchy) < cfg.eps and residual(x) <= cfg.eps:
            status = Status.CONVERGED
            break
    else:
        hypotheses_ok = monitors.preorder_chain and monitors.phi_monotone
        status = Status.MAX_ITER_EXCEEDED if hypotheses_ok else Status.HYPOTHESIS_VIOLATED

    residuals = {"ntuple_fixed_point": verify_ntuple_fixed_point(F, x, space)}
    if selfmaps:
        residuals["common_fixed_point"] = verify_common_fixed_point(F, selfmaps, x, space)
    residuals["cauchy"] = max(trace.steps[-1].cauchy)
    converged_at = _stable_from(space, trace.points(), cfg.eps) if status is Status.CONVERGED else None
    return FixpointReport(scheme, status, x, len(trace) - 1, converged_at, residuals,
                          monitors, trace, cfg)


def iterate_single(F: NTupleMap, x0: Sequence[Point], order: PhiOrder,
                   cfg: SolverConfig = SolverConfig()) -> FixpointReport:
    return _run("single", [("F", _f_step(F))], F, [], x0, order, cfg, [])


def iterate_pair(F: NTupleMap, g: SelfMap, x0: Sequence[Point], order: PhiOrder,
                 cfg: SolverConfig = SolverConfig()) -> FixpointReport:
    schedule = [("F", _f_step(F)), ("g", _self_step(g))]
    return _run("pair", schedule, F, [g], x0, order, cfg, [(F, g)])


def iterate_triple(F: NTupleMap, G: SelfMap, H: SelfMap, x0: Sequence[Point], order: PhiOrder,
                   cfg: SolverConfig = SolverConfig()) -> FixpointReport:
    schedule = [("H", _self_step(H)), ("F", _f_step(F)), ("G", _self_step(G))]
    return _run("triple", schedule, F, [G, H], x0, order, cfg, [(F, G), (F, H)])


def iterate_chain(F: NTupleMap, chain: Sequence[SelfMap], x0: Sequence[Point], order: PhiOrder,
                  cfg: SolverConfig = SolverConfig()) -> FixpointReport:
    """``chain`` lists G_2, ..., G_r in increasing index order."""
    chain = list(chain)
    if len(chain) < 1:
        raise ValueError("chain needs at least one self-map")
    r = len(chain) + 1
    if r == 2:
        schedule = [("F", _f_step(F)), ("G_2", _self_step(chain[0]))]
        return _run("chain", schedule, F, chain, x0, order, cfg, [(F, chain[0])])
    descending = [(f"G_{k}", _self_step(chain[k - 2])) for k in range(r, 2, -1)]
    schedule = descending + [("F", _f_step(F)), ("G_2", _self_step(chain[0]))]
    # {F, G_2} and {F, G_3} must be weakly related; G_r, ..., G_3 an embedded chain.
    precheck = [chain[k - 2] for k in range(r, 2, -1)]
    return _run("chain", schedule, F, chain, x0, order, cfg,
                [(F, chain[0]), (F, chain[1])], precheck)
