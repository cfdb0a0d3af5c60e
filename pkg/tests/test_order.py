import itertools

import pytest
from hypothesis import given, strategies as st

from gfixpoint.errors import ArityError, DomainError
from gfixpoint.gmetric import GMetricSpace, Interval, custom_expr, discrete, max_abs_diff, max_value
from gfixpoint.maps import NTupleMap, linear, parse_expr
from gfixpoint.order import PhiOrder, check_isotone, check_preorder, leq, phi_from_spec
from gfixpoint.sampling import grid

from oracles import axiom_failures


def max_value_order():
    return PhiOrder(max_value(), linear(2), tol=0.0)


def test_max_value_comparisons():
    order = max_value_order()
    assert leq(order, 2.0, 4.0)
    assert not leq(order, 3.0, 2.0)
    assert not leq(order, 2.0, 3.0)
    assert order.sides(2.0, 4.0) == (4.0, 4.0)


def test_max_abs_diff_reflexive_everywhere():
    order = PhiOrder(max_abs_diff(), linear(2), tol=0.0)
    assert all(leq(order, x, x) for x in grid(-5.0, 5.0, 41))


def test_preorder_on_grid():
    order = PhiOrder(max_abs_diff(), linear(2), tol=0.0)
    report = check_preorder(order, grid(0.0, 3.0, 31))
    assert report.is_preorder and report.passed
    assert not report.reflexive.witnesses and not report.transitive.witnesses
    assert report.antisymmetric is not None and report.antisymmetric.passed


def test_preorder_not_reflexive_on_max_value():
    # G(x, x, x) = x, so only 0 is related to itself.
    report = check_preorder(max_value_order(), [0.0, 1.0, 2.0])
    assert not report.reflexive.passed
    assert [w.points for w in report.reflexive.witnesses] == [(1.0, 1.0), (2.0, 2.0)]


def test_discrete_space_preorder_exact():
    phi = {"a": 0.0, "b": 1.0, "c": 3.0}
    order = PhiOrder(discrete("abc"), phi.__getitem__, tol=0.0)
    report = check_preorder(order, list("abc"))
    assert report.is_preorder
    related = {(x, y) for x, y in itertools.product("abc", repeat=2) if order.leq(x, y)}
    assert related == {(x, y) for x in "abc" for y in "abc" if x == y or phi[y] - phi[x] >= 1}


def test_antisymmetry_skipped_for_asymmetric_g():
    space = custom_expr("abs(x-y) + abs(x-z) + abs(y-z) + x", Interval(0.0))
    report = check_preorder(PhiOrder(space, linear(10), tol=0.0), [0.0, 1.0, 2.0])
    assert report.antisymmetric is None
    assert "not checked" in report.summary()


def test_large_sample_sets_are_subsampled():
    order = PhiOrder(max_abs_diff(), linear(2))
    a = check_preorder(order, grid(0.0, 1.0, 300), seed=3)
    b = check_preorder(order, grid(0.0, 1.0, 300), seed=3)
    assert a.samples == 200 and a.to_dict() == b.to_dict()


def test_domain_error_for_points_outside_carrier():
    with pytest.raises(DomainError):
        max_value_order().leq(-1.0, 2.0)


def test_phi_from_expression():
    order = phi_from_spec(max_abs_diff(), "x^3")
    assert order.potential(2.0) == 8.0
    assert phi_from_spec(max_abs_diff(), "linear(2)").potential(1.5) == 3.0


@pytest.mark.parametrize("a", [1.0, 2.0, 3.5])
def test_linear_potential_at_least_one_gives_usual_order(a):
    order = PhiOrder(max_abs_diff(), linear(a), tol=0.0)
    pts = grid(0.0, 2.0, 21)
    assert all(order.leq(x, y) == (x <= y) for x, y in itertools.product(pts, repeat=2))


@pytest.mark.parametrize("a", [0.25, 0.5, 0.9])
def test_linear_potential_below_one_gives_equality(a):
    order = PhiOrder(max_abs_diff(), linear(a), tol=0.0)
    pts = grid(0.0, 2.0, 21)
    assert all(order.leq(x, y) == (x == y) for x, y in itertools.product(pts, repeat=2))


# --------------------------------------------------------------------------
# Isotone maps

def test_contractive_map_is_isotone():
    order = PhiOrder(max_abs_diff(Interval(0.0, 1.0)), linear(2), tol=0.0)
    F = NTupleMap(2, parse_expr("(x1+x2)/4 + 1/2", 2))
    pts = grid(0.0, 1.0, 6)
    pairs = [((a, b), (c, d)) for a, b, c, d in itertools.product(pts, repeat=4)]
    report = check_isotone(F, order, pairs)
    assert report.passed and report.checked == 21 * 21


def test_negation_is_not_isotone():
    order = PhiOrder(max_abs_diff(), linear(2), tol=0.0)
    F = NTupleMap(2, parse_expr("-x1", 2))
    report = check_isotone(F, order, [((0.0, 0.0), (1.0, 0.0))])
    assert not report.passed
    w = report.witnesses[0]
    assert (w.left, w.right) == (0.0, -1.0)


def test_isotone_arity_mismatch():
    order = PhiOrder(max_abs_diff(), linear(2))
    with pytest.raises(ArityError):
        check_isotone(NTupleMap(2, parse_expr("x1", 2)), order, [((0.0,), (1.0,))])


# --------------------------------------------------------------------------
# Properties

unit = st.floats(0, 10, allow_nan=False)


@given(unit, unit)
def test_related_points_have_ordered_potential(x, y):
    order = PhiOrder(max_abs_diff(), linear(2))
    if order.leq(x, y):
        assert order.potential(x) <= order.potential(y) + order.tol


@given(st.integers(0, 2 ** 30))
def test_exact_g1_and_g5_give_exact_preorder(seed):
    import random
    rng = random.Random(seed)
    elements = [0, 1, 2, 3]
    base = {(x, y): 0 if x == y else rng.randint(1, 3) for x in elements for y in elements}
    g = lambda x, y, z: float(max(base[(min(x, y), max(x, y))], base[(min(x, z), max(x, z))],
                                  base[(min(y, z), max(y, z))]))
    space = GMetricSpace("rand", discrete(elements).carrier, g)
    phi = {e: float(rng.randint(0, 6)) for e in elements}
    report = check_preorder(PhiOrder(space, phi.__getitem__, tol=0.0), elements)
    failed = axiom_failures(g, elements)
    if "G1" not in failed:
        assert report.reflexive.passed
    if "G5" not in failed:
        assert report.transitive.passed
