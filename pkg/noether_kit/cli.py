"""Command line: noether-kit <invariance|noether|classify|demo>.

Exit codes: 0 success, 1 error, 2 not invariant, 3 corpus expectations not met.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional

import polars as pl

from noether_kit.classifier import analyze
from noether_kit.demo import run_corpus
from noether_kit.errors import ExpectationMismatchError, NoetherKitError
from noether_kit.expr import to_source
from noether_kit.log import configure_logging
from noether_kit.problem import Problem, open_problem
from noether_kit.report import render_table, to_dict
from noether_kit.symmetry import (
    InvarianceVerdict,
    check_classical_invariance,
    check_quasi_invariance,
    classical_noether_quantity,
    default_test_arcs,
    noether_quantity,
    reduces_to_classical,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NOT_INVARIANT = 2
EXIT_MISMATCH = 3


class _Parser(argparse.ArgumentParser):
    """argparse reports usage errors with exit 2, which is reserved here."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _common_flags() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--tol", type=float, help="pass/fail tolerance (default 1e-6)")
    common.add_argument("--seed", type=int, help="seed for every randomized step (default 0)")
    common.add_argument("--samples", type=int, help="interior samples per segment (default 17)")
    common.add_argument("--probe-bound", type=float, help="Weierstrass probe box half-width")
    common.add_argument("--json", metavar="PATH", help="also write the machine report; '-' for stdout")
    common.add_argument("--log-level", default="WARNING", help="diagnostics level on stderr")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_flags()
    parser = _Parser(prog="noether-kit", description="Noether symmetry and extremal analysis")
    commands = parser.add_subparsers(dest="command", required=True)

    invariance = commands.add_parser("invariance", parents=[common], help="decide quasi-invariance")
    invariance.add_argument("problem", type=Path)
    invariance.add_argument("--classical", action="store_true", help="also check finite-s invariance")

    noether = commands.add_parser("noether", parents=[common], help="print the conserved quantity")
    noether.add_argument("problem", type=Path)
    noether.add_argument("--classical", action="store_true", help="also print the classical form")

    classify = commands.add_parser("classify", parents=[common], help="classify one trajectory")
    classify.add_argument("problem", type=Path)
    classify.add_argument("trajectory")

    demo = commands.add_parser("demo", parents=[common], help="run the bundled corpus")
    demo.add_argument("--filter", dest="name_filter", help="only problems whose name contains this")
    demo.add_argument("--corpus", type=Path, help="directory of problem files to run instead")
    return parser


def _overrides(args: argparse.Namespace) -> Dict[str, object]:
    return {"tol": args.tol, "seed": args.seed, "samples": args.samples, "probe_bound": args.probe_bound}


def _emit_json(target: Optional[str], payload: dict) -> None:
    if target is None:
        return
    text = json.dumps(payload, indent=2)
    if target == "-":
        print(text)
    else:
        Path(target).write_text(text + "\n", encoding="utf-8")


def _verdict_dict(verdict: InvarianceVerdict) -> dict:
    entry = {"status": verdict.status.value, "max_residual": verdict.max_residual}
    if verdict.witness is not None:
        entry["witness"] = verdict.witness
    return entry


def _classical_arcs(problem: Problem) -> List:
    arcs = [problem.trajectory(name) for name in problem.trajectory_names]
    smooth = [arc for arc in arcs if arc.segment_count == 1]
    return smooth or default_test_arcs(problem.spec.n, problem.spec.interval)


def cmd_invariance(args: argparse.Namespace) -> int:
    problem = open_problem(args.problem, _overrides(args))
    verdict = check_quasi_invariance(problem.system, problem.family, problem.config)
    payload = {"invariance": _verdict_dict(verdict), "residual": to_source(verdict.residual)}
    line = f"{problem.name}: {verdict.status.value} (max residual {verdict.max_residual:.3g})"
    if not verdict.is_invariant:
        line += f"\n  residual {to_source(verdict.residual)}\n  witness {verdict.witness}"
    print(line)
    invariant = verdict.is_invariant

    if args.classical:
        classical = check_classical_invariance(
            problem.system,
            problem.family,
            problem.config.s_samples,
            _classical_arcs(problem),
            problem.config.plan,
            problem.config.classical_tol,
        )
        payload["classical"] = _verdict_dict(classical)
        detail = f" on arc {classical.detail}" if classical.detail else ""
        print(f"{problem.name}: classical {classical.status.value} (max gap {classical.max_residual:.3g}){detail}")
        invariant = invariant and classical.is_invariant

    _emit_json(args.json, payload)
    return EXIT_OK if invariant else EXIT_NOT_INVARIANT


def cmd_noether(args: argparse.Namespace) -> int:
    problem = open_problem(args.problem, _overrides(args))
    quantity = noether_quantity(problem.system, problem.family)
    print(to_source(quantity))
    payload = {"noether": to_source(quantity)}
    if args.classical:
        classical = classical_noether_quantity(problem.system, problem.family)
        print(f"classical: {to_source(classical)}")
        payload["classical"] = to_source(classical)
        if not reduces_to_classical(problem.system, problem.family, problem.config).is_zero:
            raise NoetherKitError(f"classical form {to_source(classical)} differs from {to_source(quantity)}")
    _emit_json(args.json, payload)
    return EXIT_OK


def cmd_classify(args: argparse.Namespace) -> int:
    problem = open_problem(args.problem, _overrides(args))
    traj = problem.trajectory(args.trajectory)
    report = analyze(problem.system, problem.family, traj, problem.config, problem.boundary)
    print(render_table(report))
    _emit_json(args.json, to_dict(report))
    return EXIT_OK


def cmd_demo(args: argparse.Namespace) -> int:
    result = run_corpus(args.corpus, args.name_filter, _overrides(args))
    with pl.Config(tbl_hide_dataframe_shape=True, tbl_rows=-1, tbl_cols=-1):
        print(result.summary)
    _emit_json(args.json, {"cases": result.summary.to_dicts(), "mismatches": result.mismatches})
    if not result.ok:
        raise ExpectationMismatchError(result.mismatches)
    print(f"{result.summary.height} cases, 0 mismatches")
    return EXIT_OK


COMMANDS = {
    "invariance": cmd_invariance,
    "noether": cmd_noether,
    "classify": cmd_classify,
    "demo": cmd_demo,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        configure_logging(args.log_level)
        return COMMANDS[args.command](args)
    except ExpectationMismatchError as exc:
        print(exc, file=sys.stderr)
        return EXIT_MISMATCH
    except (NoetherKitError, ValueError, OSError) as exc:
        logger.debug("command failed", exc_info=True)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
