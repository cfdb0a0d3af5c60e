"""Command line front-end.

Exit status: 0 when every requested check passes (or the solve converges),
2 when a check fails or a run does not converge, 1 on usage, config or
evaluation errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .checkers import check_dual_chain, check_n_embedded_chain, check_weakly_related
from .config import ProblemConfig, load_config
from .errors import GFixpointError
from .fixpoint import (iterate_chain, iterate_pair, iterate_single, iterate_triple,
                       verify_coincidence, verify_common_fixed_point, verify_ntuple_fixed_point)
from .fixtures import format_table, reproduce_all
from .gmetric import check_axioms
from .order import check_isotone, check_preorder

OUT_ENV = "GFIXPOINT_OUT"
EXIT_OK, EXIT_ERROR, EXIT_FAILED = 0, 1, 2


class Emitter:
    """Writes the text report to stdout and, when an output root is set, to files."""

    def __init__(self, out_root: str | None, name: str):
        self.dir = Path(out_root) / name if out_root else None
        if self.dir:
            self.dir.mkdir(parents=True, exist_ok=True)

    def report(self, text: str, record: dict) -> None:
        print(text)
        if self.dir:
            (self.dir / "report.txt").write_text(text + "\n")
            (self.dir / "report.json").write_text(json.dumps(record, indent=2, sort_keys=True) + "\n")

    def trace(self, csv_text: str, jsonl_text: str) -> None:
        if self.dir:
            (self.dir / "trace.csv").write_text(csv_text)
            (self.dir / "trace.jsonl").write_text(jsonl_text)


def _status(passed: bool) -> int:
    return EXIT_OK if passed else EXIT_FAILED


def cmd_check_axioms(cfg: ProblemConfig, out: Emitter) -> int:
    space = cfg.build_space()
    report = check_axioms(space, cfg.sample_points(space), cfg.tol, cfg.max_witnesses)
    out.report(report.summary(), report.to_dict())
    return _status(report.passed)


def cmd_check_order(cfg: ProblemConfig, out: Emitter) -> int:
    order = cfg.build_order()
    report = check_preorder(order, cfg.sample_points(order.space), cfg.tol, cfg.max_witnesses,
                            seed=int(cfg.samples.get("rng_seed", 0)))
    text, record, passed = report.summary(), {"preorder": report.to_dict()}, report.is_preorder
    if cfg.checks.get("isotone") and "F" in cfg.maps:
        tuples = cfg.sample_tuples(order.space)
        pairs = [(tuple(map(min, a, b)), tuple(map(max, a, b)))
                 for a, b in zip(tuples[::2], tuples[1::2])]
        iso = check_isotone(cfg.build_F(), order, pairs, cfg.max_witnesses)
        text += "\n" + iso.summary()
        record["isotone"] = iso.to_dict()
        passed = passed and iso.passed
    out.report(text, record)
    return _status(passed)


def _relation_pairs(cfg: ProblemConfig) -> list:
    selfmaps = cfg.build_selfmaps()
    if cfg.scheme == "chain":
        return selfmaps[:2]
    return selfmaps


def cmd_check_pair(cfg: ProblemConfig, out: Emitter) -> int:
    order = cfg.build_order()
    F = cfg.build_F()
    selfmaps = _relation_pairs(cfg)
    if not selfmaps:
        raise cfg.error("maps.selfmaps", "check-pair needs at least one self-map")
    tuples = cfg.sample_tuples(order.space)
    reports = [check_weakly_related(F, g, order, tuples, cfg.max_witnesses) for g in selfmaps]
    out.report("\n".join(r.summary() for r in reports), {"reports": [r.to_dict() for r in reports]})
    return _status(all(r.passed for r in reports))


def cmd_check_chain(cfg: ProblemConfig, out: Emitter) -> int:
    order = cfg.build_order()
    chain = cfg.build_chain()
    if not chain and cfg.scheme == "chain":
        # G_r, ..., G_3 from the solver's self-map list G_2, ..., G_r.
        chain = list(reversed(cfg.build_selfmaps()[1:]))
    if len(chain) < 2:
        raise cfg.error("maps.chain", "check-chain needs at least two maps")
    samples = cfg.sample_points(order.space)
    check = check_dual_chain if cfg.checks.get("dual") else check_n_embedded_chain
    report = check(chain, order, samples, cfg.max_witnesses)
    out.report(report.summary(), report.to_dict())
    return _status(report.passed)


def solve(cfg: ProblemConfig):
    order = cfg.build_order()
    F = cfg.build_F()
    selfmaps = cfg.build_selfmaps()
    if cfg.scheme == "single":
        return iterate_single(F, cfg.seed, order, cfg.solver)
    if cfg.scheme == "pair":
        return iterate_pair(F, selfmaps[0], cfg.seed, order, cfg.solver)
    if cfg.scheme == "triple":
        return iterate_triple(F, selfmaps[0], selfmaps[1], cfg.seed, order, cfg.solver)
    return iterate_chain(F, selfmaps, cfg.seed, order, cfg.solver)


def cmd_solve(cfg: ProblemConfig, out: Emitter) -> int:
    report = solve(cfg)
    out.report(report.summary(), report.to_dict())
    out.trace(report.trace.to_csv(), report.trace.to_jsonl())
    return _status(report.converged)


def cmd_verify(cfg: ProblemConfig, out: Emitter) -> int:
    space = cfg.build_space()
    F = cfg.build_F()
    selfmaps = cfg.build_selfmaps()
    residuals = {"ntuple_fixed_point": verify_ntuple_fixed_point(F, cfg.seed, space)}
    if selfmaps:
        residuals["common_fixed_point"] = verify_common_fixed_point(F, selfmaps, cfg.seed, space)
        residuals["coincidence"] = verify_coincidence(F, selfmaps, cfg.seed, space)
    key = "common_fixed_point" if selfmaps else "ntuple_fixed_point"
    passed = residuals[key] <= cfg.solver.eps
    lines = [f"tuple: {cfg.seed!r}"] + [f"residual {k}: {v!r}" for k, v in residuals.items()]
    lines.append(f"{key}: {'yes' if passed else 'no'} (eps={cfg.solver.eps:g})")
    out.report("\n".join(lines), {"tuple": list(cfg.seed), "residuals": residuals,
                                  "eps": cfg.solver.eps, "passed": passed})
    return _status(passed)


def cmd_reproduce(out: Emitter) -> int:
    findings = reproduce_all()
    unexpected = [f for f in findings if f.verdict == "UNEXPECTED"]
    text = format_table(findings)
    text += f"\n\n{len(findings)} claims: {sum(f.agrees for f in findings)} confirmed, " \
            f"{len(findings) - sum(f.agrees for f in findings) - len(unexpected)} documented " \
            f"discrepancies, {len(unexpected)} unexpected"
    out.report(text, {"findings": [f.to_dict() for f in findings]})
    return _status(not unexpected)


COMMANDS = {
    "check-axioms": cmd_check_axioms,
    "check-order": cmd_check_order,
    "check-pair": cmd_check_pair,
    "check-chain": cmd_check_chain,
    "solve": cmd_solve,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gfixpoint", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="problem config (YAML)")
        p.add_argument("--out", help=f"output root directory (default: ${OUT_ENV})")
        p.add_argument("--eps", type=float)
        p.add_argument("--max-iter", type=int)
        p.add_argument("--seed", type=int, help="RNG seed for sampled tuples")
    p = sub.add_parser("reproduce-paper", help="re-run every worked example")
    p.add_argument("--out", help=f"output root directory (default: ${OUT_ENV})")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_ERROR
    out_root = args.out or os.environ.get(OUT_ENV)
    try:
        if args.command == "reproduce-paper":
            return cmd_reproduce(Emitter(out_root, "reproduce-paper"))
        cfg = load_config(args.config).with_overrides(args.eps, args.max_iter, args.seed)
        return COMMANDS[args.command](cfg, Emitter(out_root, cfg.name))
    except (GFixpointError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
