"""The bundled corpus: run every problem/trajectory pair and compare with its expectations."""

import logging
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Dict, List, Optional, Union

import polars as pl

from noether_kit.classifier import AnalysisReport, analyze
from noether_kit.expr import is_identically_zero, parse, to_source
from noether_kit.problem import Problem, TrajectoryExpectation, open_problem

logger = logging.getLogger(__name__)

SUMMARY_SCHEMA = {
    "problem": pl.Utf8,
    "trajectory": pl.Utf8,
    "invariance": pl.Utf8,
    "euler_lagrange": pl.Utf8,
    "dubois_reymond": pl.Utf8,
    "weierstrass": pl.Utf8,
    "pontryagin": pl.Boolean,
    "theorem4": pl.Boolean,
    "conserved": pl.Boolean,
    "deviation": pl.Float64,
    "scale": pl.Float64,
    "findings": pl.Int64,
}


def bundled_corpus() -> Path:
    return Path(str(resources.files("noether_kit") / "corpus"))


def corpus_paths(directory: Optional[Union[str, Path]] = None, name_filter: Optional[str] = None) -> List[Path]:
    root = Path(directory) if directory is not None else bundled_corpus()
    paths = sorted(root.glob("*.json"))
    if name_filter:
        paths = [p for p in paths if name_filter in p.stem]
    return paths


@dataclass
class DemoResult:
    summary: pl.DataFrame
    mismatches: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


def _summary_row(problem: Problem, report: AnalysisReport) -> Dict[str, object]:
    return {
        "problem": problem.name,
        "trajectory": report.trajectory,
        "invariance": report.invariance.status.value,
        "euler_lagrange": report.euler_lagrange.status.value,
        "dubois_reymond": report.dubois_reymond.status.value,
        "weierstrass": report.weierstrass.status.value,
        "pontryagin": report.pontryagin_class,
        "theorem4": report.theorem4_class,
        "conserved": report.conservation.conserved,
        "deviation": report.conservation.deviation,
        "scale": float(abs(report.conservation.values).max()),
        "findings": len(report.findings),
    }


def _compare_trajectory(label: str, report: AnalysisReport, expected: TrajectoryExpectation) -> List[str]:
    diff = []
    for check in ("euler_lagrange", "dubois_reymond", "weierstrass"):
        want = getattr(expected, check)
        got = getattr(report, check).status.value
        if want is not None and want != got:
            diff.append(f"{label}: {check} expected {want}, got {got}")
    if expected.conserved is not None and expected.conserved != report.conservation.conserved:
        diff.append(f"{label}: conserved expected {expected.conserved}, got {report.conservation.conserved}")
    if expected.deviation is not None:
        gap = abs(report.conservation.deviation - expected.deviation)
        if gap > expected.deviation_tol * (1.0 + abs(expected.deviation)):
            diff.append(f"{label}: deviation expected {expected.deviation}, got {report.conservation.deviation!r}")
    diff.extend(f"{label}: finding: {finding}" for finding in report.findings)
    return diff


def run_problem(problem: Problem) -> DemoResult:
    rows = []
    diff: List[str] = []
    expect = problem.spec.expect
    reports = {
        name: analyze(problem.system, problem.family, problem.trajectory(name), problem.config, problem.boundary)
        for name in problem.trajectory_names
    }
    for name, report in reports.items():
        rows.append(_summary_row(problem, report))
        label = f"{problem.name}/{name}"
        if expect is not None and name in expect.trajectories:
            diff.extend(_compare_trajectory(label, report, expect.trajectories[name]))
        elif report.findings:
            diff.extend(f"{label}: finding: {finding}" for finding in report.findings)

    if expect is not None and reports:
        first = next(iter(reports.values()))
        if expect.invariance is not None and expect.invariance != first.invariance.status.value:
            diff.append(f"{problem.name}: invariance expected {expect.invariance}, got {first.invariance.status.value}")
        if expect.noether is not None:
            wanted = parse(expect.noether, problem.spec.n)
            box = problem.config.box(problem.spec.n, problem.spec.interval)
            if not is_identically_zero(first.noether - wanted, box, problem.config.identity).is_zero:
                diff.append(f"{problem.name}: noether expected {expect.noether}, got {to_source(first.noether)}")
    return DemoResult(pl.DataFrame(rows, schema=SUMMARY_SCHEMA), diff)


def run_corpus(
    directory: Optional[Union[str, Path]] = None,
    name_filter: Optional[str] = None,
    overrides: Optional[Dict[str, object]] = None,
) -> DemoResult:
    frames = []
    mismatches: List[str] = []
    for path in corpus_paths(directory, name_filter):
        logger.info("running %s", path.name)
        result = run_problem(open_problem(path, overrides))
        frames.append(result.summary)
        mismatches.extend(result.mismatches)
    summary = pl.concat(frames) if frames else pl.DataFrame(schema=SUMMARY_SCHEMA)
    return DemoResult(summary, mismatches)


def theorem4_violations(summary: pl.DataFrame, tol: float = 1e-6) -> pl.DataFrame:
    """Invariant EL-and-DBR extremals whose Noether quantity drifts."""
    return summary.filter(
        (pl.col("invariance") == "invariant")
        & (pl.col("euler_lagrange") == "pass")
        & (pl.col("dubois_reymond") == "pass")
        & (pl.col("deviation") > tol * (1.0 + pl.col("scale")))
    )
