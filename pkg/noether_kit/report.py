"""Machine (JSON) and human (table) renderings of an AnalysisReport."""

import json
import math
from typing import Any, Dict, List, Literal, Optional

import polars as pl
from pydantic import BaseModel, ConfigDict, Field

from noether_kit.classifier import AnalysisReport, ConditionVerdict
from noether_kit.expr import to_source

CONDITIONS = ("euler_lagrange", "dubois_reymond", "weierstrass")


class _Model(BaseModel):
    model_config = ConfigDict(extra="forbid")


class InvarianceModel(_Model):
    status: Literal["invariant", "not_invariant"]
    max_residual: float = Field(ge=0)
    witness: Optional[Dict[str, float]] = None


class WitnessModel(_Model):
    t: float
    detail: Dict[str, Any] = Field(default_factory=dict)


class ConditionModel(_Model):
    status: Literal["pass", "fail"]
    residual: float = Field(ge=0)
    witness: Optional[WitnessModel] = None


class ClassesModel(_Model):
    pontryagin: bool
    theorem4: bool


class ConservationModel(_Model):
    deviation: float = Field(ge=0)
    status: Literal["conserved", "not_conserved"]
    mean: Optional[float] = None


class BoundaryModel(_Model):
    alpha: List[float]
    beta: List[float]
    start: List[float]
    end: List[float]
    satisfied: bool


class ReportModel(_Model):
    """Published report schema; the last four keys are optional additions."""

    invariance: InvarianceModel
    noether: str
    conditions: Dict[Literal["euler_lagrange", "dubois_reymond", "weierstrass"], ConditionModel]
    classes: ClassesModel
    conservation: ConservationModel
    trajectory: Optional[str] = None
    functional: Optional[float] = None
    boundary: Optional[BoundaryModel] = None
    findings: List[str] = Field(default_factory=list)


def _condition(verdict: ConditionVerdict) -> Dict[str, Any]:
    entry: Dict[str, Any] = {"status": verdict.status.value, "residual": verdict.residual}
    if verdict.witness is not None:
        entry["witness"] = {"t": verdict.witness.t, "detail": dict(verdict.witness.detail)}
    return entry


def to_dict(report: AnalysisReport) -> Dict[str, Any]:
    invariance: Dict[str, Any] = {
        "status": report.invariance.status.value,
        "max_residual": report.invariance.max_residual,
    }
    if report.invariance.witness is not None:
        invariance["witness"] = dict(report.invariance.witness)
    payload: Dict[str, Any] = {
        "invariance": invariance,
        "noether": to_source(report.noether),
        "conditions": {name: _condition(getattr(report, name)) for name in CONDITIONS},
        "classes": {"pontryagin": report.pontryagin_class, "theorem4": report.theorem4_class},
        "conservation": {
            "deviation": report.conservation.deviation,
            "status": report.conservation.status,
            "mean": report.conservation.mean,
        },
        "trajectory": report.trajectory or None,
        "findings": list(report.findings),
    }
    if report.functional is not None and math.isfinite(report.functional):
        payload["functional"] = report.functional
    if report.boundary is not None:
        b = report.boundary
        payload["boundary"] = {
            "alpha": list(b.alpha),
            "beta": list(b.beta),
            "start": list(b.start),
            "end": list(b.end),
            "satisfied": b.satisfied,
        }
    return ReportModel.model_validate(payload).model_dump(exclude_none=True)


def to_json(report: AnalysisReport) -> str:
    return json.dumps(to_dict(report), indent=2)


def parse_report(text: str) -> ReportModel:
    return ReportModel.model_validate_json(text)


def summary_frame(report: AnalysisReport) -> pl.DataFrame:
    """One row per check: name, status, residual and where it failed."""
    rows = [
        {
            "check": "invariance",
            "status": report.invariance.status.value,
            "residual": report.invariance.max_residual,
            "where": "" if report.invariance.witness is None else json.dumps(report.invariance.witness),
        }
    ]
    for name in CONDITIONS:
        verdict: ConditionVerdict = getattr(report, name)
        rows.append(
            {
                "check": name,
                "status": verdict.status.value,
                "residual": verdict.residual,
                "where": "" if verdict.witness is None else f"t={verdict.witness.t:.6g}",
            }
        )
    rows.append(
        {
            "check": "conservation",
            "status": report.conservation.status,
            "residual": report.conservation.deviation,
            "where": f"mean={report.conservation.mean:.6g}",
        }
    )
    return pl.DataFrame(rows, schema={"check": pl.Utf8, "status": pl.Utf8, "residual": pl.Float64, "where": pl.Utf8})


def render_table(report: AnalysisReport) -> str:
    lines = [
        f"trajectory: {report.trajectory or '-'}",
        f"noether: {to_source(report.noether)}",
        f"pontryagin class: {report.pontryagin_class}  theorem4 class: {report.theorem4_class}",
    ]
    if report.functional is not None:
        lines.append(f"functional: {report.functional:.12g}")
    if report.boundary is not None:
        lines.append(f"boundary conditions satisfied: {report.boundary.satisfied}")
    with pl.Config(tbl_hide_dataframe_shape=True, tbl_rows=-1, fmt_str_lengths=80):
        lines.append(str(summary_frame(report)))
    lines.extend(f"FINDING: {finding}" for finding in report.findings)
    return "\n".join(lines)
