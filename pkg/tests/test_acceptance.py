"""Acceptance criteria 1-10; the terminal summary prints one verdict line per criterion."""

import itertools
import math
import random
import time
from pathlib import Path

import pytest

from gfixpoint.checkers import check_dual_chain, check_n_embedded_chain, check_weakly_related
from gfixpoint.cli import main, solve
from gfixpoint.config import load_config
from gfixpoint.fixpoint import (SolverConfig, Status, iterate_chain, iterate_pair, iterate_single,
                                iterate_triple, verify_common_fixed_point,
                                verify_ntuple_fixed_point)
from gfixpoint.gmetric import GMetricSpace, Interval, check_axioms, max_abs_diff, max_value, table_space
from gfixpoint.maps import (NTupleMap, cyclic_apply, linear, paper_f3, parse_expr, parse_map,
                            sine_perturbed, table_map)
from gfixpoint.order import PhiOrder, check_preorder, leq
from gfixpoint.sampling import grid, random_tuples

from oracles import axiom_failures, fixed_tuples, max_abs

CONFIGS = Path(__file__).resolve().parent.parent / "configs"
NONNEG = max_abs_diff(Interval(0.0))
crit = pytest.mark.criterion


@crit(1, "3-tuple fixed point of x(1+y)(2+z) at the origin; seed values 2, 0, 0")
def test_c1_paper_f3_fixed_point():
    F = paper_f3()
    start = time.perf_counter()
    residual = verify_ntuple_fixed_point(F, (0.0, 0.0, 0.0), NONNEG)
    elapsed = time.perf_counter() - start
    assert residual == 0.0
    assert cyclic_apply(F, (1.0, 0.0, 0.0)) == (2.0, 0.0, 0.0)
    assert elapsed < 1e-3


@crit(2, "common fixed point and weak relation of {F, 5x}; fails with witness for a = 1/2")
def test_c2_sine_pair():
    start = time.perf_counter()
    g = linear(5)
    for n in (2, 3, 5):
        assert verify_common_fixed_point(sine_perturbed(n), [g], (0.0,) * n, NONNEG) == 0.0
    F = sine_perturbed(3)
    tuples = random_tuples(0.0, 2.0, 3, 500, seed=0)
    ok = check_weakly_related(F, g, PhiOrder(NONNEG, linear(1)), tuples)
    bad = check_weakly_related(F, g, PhiOrder(NONNEG, linear(0.5)), tuples)
    elapsed = time.perf_counter() - start
    assert ok.passed and ok.checked == 500 * 3 * 2
    assert not bad.passed and bad.witnesses
    w = bad.witnesses[0]
    assert w.distance > w.gap + PhiOrder(NONNEG, linear(0.5)).tol
    assert elapsed < 1.0


@crit(3, "triple and chain runs converge at the origin; {G_5, G_4, G_3} is an embedded chain")
def test_c3_triple_and_chain():
    order = PhiOrder(NONNEG, linear(1))
    for n in (2, 3, 5):
        zero = (0.0,) * n
        tri = iterate_triple(sine_perturbed(n), linear(5), linear(6), zero, order)
        ch = iterate_chain(sine_perturbed(n), [linear(k) for k in range(2, 6)], zero, order)
        for run in (tri, ch):
            assert run.status is Status.CONVERGED and run.converged_at == 0
            assert run.candidate == zero
            assert run.residuals["common_fixed_point"] == 0.0
    rep = check_n_embedded_chain([linear(5), linear(4), linear(3)], order, grid(0.0, 3.0, 31))
    assert rep.passed


@crit(4, "{3x, 5x} dual chain; {sin x + 1, x^2} forward only, reverse witness 4 vs sin(4)+1")
def test_c4_embedded_chains():
    order = PhiOrder(NONNEG, linear(2))
    samples = grid(2.0, math.pi, 50, include_upper=False)
    assert check_dual_chain([linear(3), linear(5)], order, samples).passed
    g1, g2 = parse_map("sin(x) + 1", 1), parse_map("x^2", 1)
    assert check_n_embedded_chain([g1, g2], order, samples).passed
    rev = check_n_embedded_chain([g2, g1], order, samples)
    assert not rev.passed
    w = rev.witnesses[0]
    assert w.inputs == (2.0,)
    assert abs(w.left - 4.0) <= 1e-12
    assert abs(w.right - (math.sin(4.0) + 1.0)) <= 1e-12


@crit(5, "induced order is a preorder on a 21-point grid and coincides with <= on 441 pairs")
def test_c5_preorder_suite():
    order = PhiOrder(NONNEG, linear(2), tol=0.0)
    pts = grid(0.0, 2.0, 21)
    rep = check_preorder(order, pts, tol=0.0)
    assert rep.reflexive.passed and rep.transitive.passed
    assert not rep.reflexive.witnesses and not rep.transitive.witnesses
    pairs = list(itertools.product(pts, repeat=2))
    assert len(pairs) == 441
    assert all(leq(order, x, y) == (x <= y) for x, y in pairs)


@crit(6, "axiom checker passes max-abs-diff (oracle agrees) and flags G1 for the max-value space")
def test_c6_axiom_sensitivity():
    pts = grid(0.0, 2.0, 9)
    rep = check_axioms(NONNEG, pts, tol=0.0)
    assert rep.passed
    assert axiom_failures(max_abs, pts) == set()
    bad = check_axioms(max_value(), pts, tol=0.0)
    assert "G1" in bad.failed() and bad["G1"].witnesses
    x = bad["G1"].witnesses[0].points[0]
    assert bad["G1"].witnesses[0].lhs == max(x, x, x) > 0
    assert "G1" in axiom_failures(lambda a, b, c: max(a, b, c), pts)


@crit(7, "contractive map converges to (1, 1) within 60 steps; error halves every step")
def test_c7_contractive():
    F = NTupleMap(2, parse_expr("(x1+x2)/4 + 1/2", 2))
    order = PhiOrder(max_abs_diff(Interval(0.0, 1.0)), linear(2))
    run = iterate_single(F, (0.0, 0.0), order, SolverConfig(eps=1e-9, max_iter=60))
    assert run.status is Status.CONVERGED and run.iterations <= 60
    assert run.residuals["ntuple_fixed_point"] < 1e-9
    assert max(abs(c - 1.0) for c in run.candidate) < 1e-9
    for i in range(2):
        err = [abs(x - 1.0) for x in run.trace.component(i)]
        assert all(b <= 0.5 * a + 1e-12 for a, b in zip(err, err[1:]))


@crit(8, "unit seeds diverge at phi_cap 1e6 with seed condition held and chain monitor green")
def test_c8_divergence_monitors():
    cfg = SolverConfig(phi_cap=1e6)
    runs = [iterate_single(paper_f3(), (1.0, 0.0, 0.0), PhiOrder(NONNEG, linear(2)), cfg)]
    for n in (2, 3, 5):
        runs.append(iterate_pair(sine_perturbed(n), linear(5), (1.0,) + (0.0,) * (n - 1),
                                 PhiOrder(NONNEG, linear(1)), cfg))
    for run in runs:
        assert run.status is Status.DIVERGED
        assert run.status.value == "diverged(phi_cap)"
        assert run.monitors.seed_condition
        assert run.monitors.preorder_chain and run.monitors.first_chain_violation is None
        assert not run.monitors.phi_bounded


def _random_g_metric(rng, elements):
    # max of pairwise distances from a random metric with values in [k, 2k]
    k = rng.randint(1, 5)
    d = {}
    for a, b in itertools.combinations(elements, 2):
        d[(a, b)] = d[(b, a)] = rng.randint(k, 2 * k)
    for a in elements:
        d[(a, a)] = 0
    return {t: float(max(d[(t[0], t[1])], d[(t[0], t[2])], d[(t[1], t[2])]))
            for t in itertools.product(elements, repeat=3)}


@crit(9, "fixed tuples of random table maps equal the exhaustive oracle over 20 trials")
def test_c9_brute_force_oracle():
    elements = [0, 1, 2, 3, 4]
    for trial in range(20):
        rng = random.Random(trial)
        table = _random_g_metric(rng, elements)
        space = table_space(table, f"random{trial}")
        assert check_axioms(space, elements, tol=0.0).passed
        fmap = {X: rng.choice(elements) for X in itertools.product(elements, repeat=2)}
        if trial % 4 == 0:
            a = rng.choice(elements)
            fmap[(a, a)] = a  # ensure some trials have a fixed tuple
        F = table_map(fmap, 2)
        found = {X for X in itertools.product(elements, repeat=2)
                 if verify_ntuple_fixed_point(F, X, space) == 0}
        assert found == fixed_tuples(lambda *a: fmap[a], elements, 2)


@crit(10, "two solves of the same config write byte-identical trace files")
def test_c10_determinism(tmp_path, capsys):
    for config in ("contractive", "sine_chain", "paper_f3"):
        outputs = []
        for k in range(2):
            root = tmp_path / f"run{k}"
            main(["solve", "--config", str(CONFIGS / f"{config}.yaml"), "--out", str(root)])
            d = root / load_config(CONFIGS / f"{config}.yaml").name
            outputs.append(((d / "trace.csv").read_bytes(), (d / "trace.jsonl").read_bytes()))
        assert outputs[0] == outputs[1]
        assert outputs[0][0].count(b"\n") > 1
    capsys.readouterr()
    a = solve(load_config(CONFIGS / "contractive.yaml"))
    b = solve(load_config(CONFIGS / "contractive.yaml"))
    assert a.trace.to_csv().encode() == b.trace.to_csv().encode()
