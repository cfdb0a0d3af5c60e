"""Sample-based deciders for the relational hypotheses of the common fixed point iterations.

Every checker raises :class:`DomainError` when a map carries a sample out of
the carrier; such a case is malformed input, not a failed condition.
"""

from __future__ import annotations

from typing import Sequence

from .gmetric import Point
from .maps import NTupleMap, SelfMap, rotate_left
from .order import PhiOrder, RelationReport, tally_leq

DEFAULT_WITNESS_CAP = 5


def check_weakly_related(F: NTupleMap, g: SelfMap, order: PhiOrder,
                         sample_tuples: Sequence[Sequence[Point]],
                         max_witnesses: int = DEFAULT_WITNESS_CAP) -> RelationReport:
    """Weak relatedness of {F, g}, tested on every rotation of every sample tuple.

    For X and each i: F(rot_i X) <= g(F(rot_i X)) and g(x^i) <= F(rot_i(gX)).
    """
    report = RelationReport(f"weakly_related({F.name}, {g.name})")
    space = order.space
    for X in sample_tuples:
        X = tuple(X)
        if len(X) != F.arity:
            raise ValueError(f"sample {X!r} does not have arity {F.arity}")
        for p in X:
            space.check_point(p)
        gX = tuple(g(p) for p in X)
        for i in range(F.arity):
            fx = F(*rotate_left(X, i))
            tally_leq(order, fx, g(fx), X, report, max_witnesses, f"F <= gF, i={i + 1}")
            tally_leq(order, gX[i], F(*rotate_left(gX, i)), X, report, max_witnesses,
                      f"g x <= F(g x), i={i + 1}")
    return report


def check_embedded_pair(g: SelfMap, f: SelfMap, order: PhiOrder, samples: Sequence[Point],
                        max_witnesses: int = DEFAULT_WITNESS_CAP) -> RelationReport:
    """g(x) <= f(g(x)) for every sample x."""
    report = RelationReport(f"embedded_pair({g.name}, {f.name})")
    for x in samples:
        order.space.check_point(x)
        gx = g(x)
        tally_leq(order, gx, f(gx), (x,), report, max_witnesses)
    return report


def check_n_embedded_chain(maps: Sequence[SelfMap], order: PhiOrder, samples: Sequence[Point],
                           max_witnesses: int = DEFAULT_WITNESS_CAP) -> RelationReport:
    """Each consecutive pair (G_i, G_{i+1}) must be an embedded pair."""
    if len(maps) < 2:
        raise ValueError("an embedded chain needs at least two maps")
    if len(maps) == 2:
        return check_embedded_pair(maps[0], maps[1], order, samples, max_witnesses)
    names = ", ".join(m.name for m in maps)
    report = RelationReport(f"{len(maps)}-embedded_chain({names})")
    for k, (g, f) in enumerate(zip(maps, maps[1:])):
        part = check_embedded_pair(g, f, order, samples, max_witnesses)
        report.parts.append(part)
        report.checked += part.checked
        report.violations += part.violations
        if not part.passed:
            report.passed = False
            if report.pair_index is None:
                report.pair_index = k
            room = max_witnesses - len(report.witnesses)
            report.witnesses.extend(part.witnesses[:max(room, 0)])
    return report


def check_dual_chain(maps: Sequence[SelfMap], order: PhiOrder, samples: Sequence[Point],
                     max_witnesses: int = DEFAULT_WITNESS_CAP) -> RelationReport:
    if len(maps) < 2:
        raise ValueError("a dual embedded chain needs at least two maps")
    forward = check_n_embedded_chain(maps, order, samples, max_witnesses)
    backward = check_n_embedded_chain(list(reversed(maps)), order, samples, max_witnesses)
    names = ", ".join(m.name for m in maps)
    report = RelationReport(f"dual_{len(maps)}-embedded_chain({names})",
                            passed=forward.passed and backward.passed,
                            checked=forward.checked + backward.checked,
                            violations=forward.violations + backward.violations,
                            parts=[forward, backward])
    report.witnesses = (forward.witnesses + backward.witnesses)[:max_witnesses]
    return report
