import math

import pytest
from hypothesis import given, settings, strategies as st

from gfixpoint.checkers import (check_dual_chain, check_embedded_pair, check_n_embedded_chain,
                                check_weakly_related)
from gfixpoint.errors import DomainError
from gfixpoint.gmetric import Interval, max_abs_diff
from gfixpoint.maps import NTupleMap, SelfMap, linear, parse_expr, parse_map, sine_perturbed
from gfixpoint.order import PhiOrder
from gfixpoint.sampling import grid, random_tuples


def usual(a=2.0, carrier=Interval(0.0)):
    return PhiOrder(max_abs_diff(carrier), linear(a), name=f"linear({a:g})")


HALF_OPEN = grid(2.0, math.pi, 50, include_upper=False)
SIN1 = parse_map("sin(x) + 1", 1, "sin(x)+1")
SQUARE = parse_map("x^2", 1, "x^2")


def test_weakly_related_sine_pair_grid():
    pts = grid(0.0, 2.0, 9)
    tuples = [(a, b) for a in pts for b in pts]
    rep = check_weakly_related(sine_perturbed(2), linear(5), usual(1.0), tuples)
    assert rep.passed and rep.checked == 81 * 2 * 2


def test_weakly_related_fails_below_one():
    tuples = random_tuples(0.0, 2.0, 3, 50, seed=0)
    rep = check_weakly_related(sine_perturbed(3), linear(5), usual(0.5), tuples)
    assert not rep.passed and rep.witnesses
    w = rep.witnesses[0]
    assert w.distance > w.gap


def test_zero_map_with_identity():
    F = NTupleMap(2, parse_expr("0", 2))
    ident = SelfMap(parse_expr("x", 1), "id")
    tuples = [(0.0, 1.0), (2.0, 3.0)]
    rep = check_weakly_related(F, ident, usual(), tuples)
    # F <= gF holds trivially; g x <= F(g x) = 0 fails for every nonzero component.
    failing = {(w.inputs, w.label) for w in rep.witnesses}
    assert rep.violations == 3
    assert ((0.0, 1.0), "g x <= F(g x), i=2") in failing


def test_weakly_related_rejects_bad_samples():
    with pytest.raises(ValueError):
        check_weakly_related(sine_perturbed(2), linear(5), usual(), [(1.0,)])
    with pytest.raises(DomainError):
        check_weakly_related(sine_perturbed(2), linear(5), usual(), [(-1.0, 0.0)])


def test_embedded_pairs_on_half_open_interval():
    order = usual()
    assert check_embedded_pair(linear(3), linear(5), order, HALF_OPEN).passed
    assert check_embedded_pair(linear(5), linear(3), order, HALF_OPEN).passed
    assert check_embedded_pair(SIN1, SQUARE, order, HALF_OPEN).passed


def test_reverse_embedded_pair_fails_at_two():
    rep = check_embedded_pair(SQUARE, SIN1, usual(), HALF_OPEN)
    assert not rep.passed and rep.violations == len(HALF_OPEN)
    w = rep.witnesses[0]
    assert w.inputs == (2.0,)
    assert w.left == 4.0
    assert abs(w.right - (math.sin(4.0) + 1)) <= 1e-12


def test_chain_family():
    descending = [linear(k) for k in (5, 4, 3)]
    rep = check_n_embedded_chain(descending, usual(1.0), grid(0.0, 3.0, 31))
    assert rep.passed and len(rep.parts) == 2


def test_chain_reports_first_failing_pair():
    rep = check_n_embedded_chain([linear(3), SQUARE, SIN1], usual(), HALF_OPEN)
    assert not rep.passed and rep.pair_index == 1
    assert rep.parts[0].passed and not rep.parts[1].passed


def test_two_map_chain_matches_pair():
    a = check_n_embedded_chain([SQUARE, SIN1], usual(), HALF_OPEN)
    b = check_embedded_pair(SQUARE, SIN1, usual(), HALF_OPEN)
    assert a.to_dict() == b.to_dict()


def test_dual_chains():
    order = usual()
    assert check_dual_chain([linear(3), linear(5)], order, HALF_OPEN).passed
    rep = check_dual_chain([SIN1, SQUARE], order, HALF_OPEN)
    assert not rep.passed
    forward, backward = rep.parts
    assert forward.passed and not backward.passed


def test_single_map_lists_rejected():
    with pytest.raises(ValueError):
        check_n_embedded_chain([linear(2)], usual(), [1.0])
    with pytest.raises(ValueError):
        check_dual_chain([linear(2)], usual(), [1.0])


# --------------------------------------------------------------------------
# Properties

coeffs = st.lists(st.sampled_from([-1.0, 0.5, 1.0, 2.0, 3.0]), min_size=2, max_size=4)


@settings(max_examples=50, deadline=None)
@given(coeffs)
def test_dual_is_conjunction(ks):
    order = usual(carrier=Interval())
    maps = [linear(k) for k in ks]
    pts = grid(-1.0, 1.0, 9)
    dual = check_dual_chain(maps, order, pts).passed
    fwd = check_n_embedded_chain(maps, order, pts).passed
    bwd = check_n_embedded_chain(maps[::-1], order, pts).passed
    assert dual == (fwd and bwd)


@settings(max_examples=50, deadline=None)
@given(coeffs, st.lists(st.floats(-1, 1, allow_nan=False), min_size=1, max_size=8))
def test_passing_on_superset_implies_passing_on_subset(ks, pts):
    order = usual(carrier=Interval())
    maps = [linear(k) for k in ks]
    if check_n_embedded_chain(maps, order, pts).passed:
        assert check_n_embedded_chain(maps, order, pts[: len(pts) // 2 + 1]).passed
