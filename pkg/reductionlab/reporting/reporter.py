"""
Reporter utilities for producing human-readable and machine-readable outputs.

Percentages are rounded half-up to an integer percent. Machine-readable forms
keep the exact rationals next to the rounded ones so they parse back losslessly.
"""

from __future__ import annotations

import csv
import io
import json
import math
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, Sequence

from ..errors import FormatError
from ..models import AuditFlag, AuditRow, AuditSummary, EvaluationMode, PairCheck, RiskReport, VerificationSession

AUDIT_FORMATS = ("markdown", "csv")
RISK_FORMATS = ("text", "csv", "json")
SESSION_FORMATS = ("markdown", "json")

AUDIT_CSV_HEADER = (
    "dataset",
    "defense",
    "norm",
    "eps",
    "claimed",
    "implied_eps",
    "sota",
    "flag",
    "claimed_exact",
    "sota_exact",
)
RISK_CSV_HEADER = (
    "model_kind",
    "metric",
    "eps",
    "mode",
    "examples",
    "risk",
    "robust_risk",
    "robust_risk_det",
    "union_bound",
    "clean_errors",
    "clean_rejections",
    "adversarial_errors",
)
LATTICE_NOTE = "perturbations range over lattice points of the domain only"


def format_percent(value: Fraction) -> str:
    """Integer percent, rounded half-up: ``Fraction(1, 200)`` renders as ``1%``."""

    return f"{math.floor(Fraction(value) * 100 + Fraction(1, 2))}%"


def format_rational(value: Optional[Fraction]) -> str:
    return "" if value is None else str(Fraction(value))


def _parse_rational(text: str, line: int, name: str) -> Optional[Fraction]:
    if not text:
        return None
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise FormatError(f"{text!r} is not a rational", source="report", line=line, field=name) from None


def _require_rows(rows: Sequence[Any]) -> None:
    if not rows:
        raise ValueError("nothing to render: no rows")


def _csv_text(header: Sequence[str], records: Iterable[Sequence[str]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(records)
    return buffer.getvalue()


# --- audit tables -----------------------------------------------------------


def _audit_markdown(rows: Sequence[AuditRow]) -> str:
    lines = [
        "| Dataset | Defense | Norm | eps | Claimed robust acc. (det) | eps/2 | SOTA robust acc. | Flag |",
        "|---|---|---|---|---|---|---|---|",
    ]
    for row in rows:
        s = row.summary()
        sota = format_percent(s.sota) if s.sota is not None else "-"
        flag = f"**{s.flag.value}**" if s.flag is AuditFlag.EXCEEDS_SOTA else s.flag.value
        lines.append(
            f"| {s.dataset} | {s.defense} | {s.norm} | {format_rational(s.eps)} | "
            f">={format_percent(s.claimed)} | {format_rational(s.eps_half)} | {sota} | {flag} |"
        )
    return "\n".join(lines) + "\n"


def _audit_csv(rows: Sequence[AuditRow]) -> str:
    records = []
    for row in rows:
        s = row.summary()
        records.append(
            (
                s.dataset,
                s.defense,
                s.norm,
                format_rational(s.eps),
                format_percent(s.claimed),
                format_rational(s.eps_half),
                format_percent(s.sota) if s.sota is not None else "",
                s.flag.value,
                format_rational(s.claimed),
                format_rational(s.sota),
            )
        )
    return _csv_text(AUDIT_CSV_HEADER, records)


def render_report(rows: Sequence[AuditRow], fmt: str = "markdown") -> str:
    """Audit table in input order, one line per row."""

    if fmt not in AUDIT_FORMATS:
        raise ValueError(f"unknown report format {fmt!r}; expected one of {AUDIT_FORMATS}")
    _require_rows(rows)
    return _audit_markdown(rows) if fmt == "markdown" else _audit_csv(rows)


def parse_report_csv(text: str) -> List[AuditSummary]:
    """Recover the audit rows written by ``render_report(rows, "csv")``."""

    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != AUDIT_CSV_HEADER:
        raise FormatError(f"expected header {','.join(AUDIT_CSV_HEADER)}", source="report", line=1)
    summaries: List[AuditSummary] = []
    for row in reader:
        line = reader.line_num
        try:
            flag = AuditFlag(row["flag"])
        except ValueError:
            raise FormatError(f"unknown flag {row['flag']!r}", source="report", line=line, field="flag") from None
        summaries.append(
            AuditSummary(
                dataset=row["dataset"],
                defense=row["defense"],
                norm=row["norm"],
                eps=_parse_rational(row["eps"], line, "eps"),
                claimed=_parse_rational(row["claimed_exact"], line, "claimed_exact"),
                eps_half=_parse_rational(row["implied_eps"], line, "implied_eps"),
                sota=_parse_rational(row["sota_exact"], line, "sota_exact"),
                flag=flag,
            )
        )
    return summaries


def render_defense_summary(verdicts: Dict[str, AuditFlag]) -> str:
    flagged = sum(flag is AuditFlag.EXCEEDS_SOTA for flag in verdicts.values())
    return f"{flagged} of {len(verdicts)} defenses imply robust classifiers beyond the state of the art\n"


def render_pair_checks(checks: Sequence[PairCheck], fmt: str = "markdown") -> str:
    if fmt not in AUDIT_FORMATS:
        raise ValueError(f"unknown report format {fmt!r}; expected one of {AUDIT_FORMATS}")
    _require_rows(checks)
    if fmt == "csv":
        return _csv_text(
            ("clf_eps", "clf_acc", "det_eps", "det_acc", "gap", "band", "within_band"),
            (
                (
                    format_rational(c.clf_eps),
                    format_rational(c.clf_acc),
                    format_rational(c.det_eps),
                    format_rational(c.det_acc),
                    format_rational(c.gap),
                    format_rational(c.band),
                    str(c.within_band).lower(),
                )
                for c in checks
            ),
        )
    lines = [
        "| eps/2 | Certified clf acc. | eps | Certified det acc. | Gap | Within band |",
        "|---|---|---|---|---|---|",
    ]
    for c in checks:
        lines.append(
            f"| {format_rational(c.clf_eps)} | {format_percent(c.clf_acc)} | {format_rational(c.det_eps)} | "
            f"{format_percent(c.det_acc)} | {format_percent(c.gap)} | "
            f"{'yes' if c.within_band else 'no'} (+/-{format_percent(c.band)}) |"
        )
    return "\n".join(lines) + "\n"


# --- risk reports -----------------------------------------------------------


def risk_report_row(report: RiskReport) -> List[str]:
    return [
        report.model_kind,
        report.metric,
        format_rational(report.eps),
        report.mode.value,
        str(report.examples),
        format_rational(report.risk),
        format_rational(report.robust_risk),
        format_rational(report.robust_risk_det),
        format_rational(report.union_bound),
        str(report.clean_errors),
        str(report.clean_rejections),
        str(report.adversarial_errors),
    ]


def risk_report_payload(report: RiskReport) -> Dict[str, Any]:
    row = risk_report_row(report)
    payload: Dict[str, Any] = dict(zip(RISK_CSV_HEADER, row))
    for name in ("examples", "clean_errors", "clean_rejections", "adversarial_errors"):
        payload[name] = int(payload[name])
    for name in ("robust_risk", "robust_risk_det", "union_bound"):
        payload[name] = payload[name] or None
    return payload


def _risk_text(report: RiskReport) -> str:
    bound_word = "lower bound on " if report.mode is EvaluationMode.LOWER_BOUND else ""
    lines = [
        f"model: {report.model_kind}",
        f"metric: {report.metric}  eps: {format_rational(report.eps)}  examples: {report.examples}",
        f"risk: {format_rational(report.risk)} ({format_percent(report.risk)})",
    ]
    if report.robust_risk is not None:
        lines.append(
            f"{bound_word}robust risk: {format_rational(report.robust_risk)} ({format_percent(report.robust_risk)})"
        )
    if report.robust_risk_det is not None:
        lines.append(
            f"{bound_word}robust risk with detection: {format_rational(report.robust_risk_det)} "
            f"({format_percent(report.robust_risk_det)})"
        )
    if report.union_bound is not None:
        lines.append(f"union bound (fpr + fnr + risk): {format_rational(report.union_bound)}")
    lines.append(
        f"clean errors: {report.clean_errors}  clean rejections: {report.clean_rejections}  "
        f"adversarial errors: {report.adversarial_errors}"
    )
    lines.append(f"note: {LATTICE_NOTE}")
    return "\n".join(lines) + "\n"


def render_risk_report(report: RiskReport, fmt: str = "text") -> str:
    if fmt not in RISK_FORMATS:
        raise ValueError(f"unknown report format {fmt!r}; expected one of {RISK_FORMATS}")
    if fmt == "csv":
        return _csv_text(RISK_CSV_HEADER, [risk_report_row(report)])
    if fmt == "json":
        return json.dumps(risk_report_payload(report), indent=2, sort_keys=True) + "\n"
    return _risk_text(report)


def parse_risk_report_csv(text: str) -> List[RiskReport]:
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != RISK_CSV_HEADER:
        raise FormatError(f"expected header {','.join(RISK_CSV_HEADER)}", source="risk report", line=1)
    reports = []
    for row in reader:
        line = reader.line_num
        reports.append(
            RiskReport(
                model_kind=row["model_kind"],
                metric=row["metric"],
                examples=int(row["examples"]),
                risk=_parse_rational(row["risk"], line, "risk"),
                eps=_parse_rational(row["eps"], line, "eps"),
                robust_risk=_parse_rational(row["robust_risk"], line, "robust_risk"),
                robust_risk_det=_parse_rational(row["robust_risk_det"], line, "robust_risk_det"),
                mode=EvaluationMode(row["mode"]),
                clean_errors=int(row["clean_errors"]),
                clean_rejections=int(row["clean_rejections"]),
                adversarial_errors=int(row["adversarial_errors"]),
                union_bound=_parse_rational(row["union_bound"], line, "union_bound"),
            )
        )
    return reports


# --- verification sessions --------------------------------------------------


def render_markdown(session: VerificationSession, include_timing: bool = True) -> str:
    lines: List[str] = []
    lines.append(f"# Property suite `{session.profile}` (seed {session.seed})")
    lines.append("")
    lines.append("## Execution Summary")
    lines.append(f"- Instances: {session.execution.instances}")
    lines.append(f"- Checks: {session.execution.checks}")
    if include_timing:
        lines.append(f"- Started At: {session.execution.started_at.isoformat()}")
        lines.append(f"- Finished At: {session.execution.finished_at.isoformat()}")
        lines.append(f"- Duration (s): {session.execution.seconds:.3f}")
    for name in sorted(session.stats):
        lines.append(f"- {name}: {session.stats[name]}")
    lines.append("")

    if include_timing and session.artifacts:
        lines.append("## Resources")
        for artifact in session.artifacts:
            lines.append(f"- {artifact.monitor}: {artifact.metrics}")
        lines.append("")

    lines.append("## Violations")
    if not session.violations:
        lines.append("- None: every checked inequality held under exact comparison.")
    for violation in session.violations:
        lines.append(
            f"- **{violation.prop}** on instance {violation.instance_index} (seed {violation.instance_seed})"
        )
        lines.append(f"  - Evidence: {violation.evidence}")
        if violation.reproducer:
            lines.append(f"  - Reproducer: {violation.reproducer}")
    return "\n".join(lines) + "\n"


def render_session_json(session: VerificationSession, include_timing: bool = True) -> str:
    execution: Dict[str, Any] = {
        "instances": session.execution.instances,
        "checks": session.execution.checks,
    }
    if include_timing:
        execution["started_at"] = session.execution.started_at.isoformat()
        execution["finished_at"] = session.execution.finished_at.isoformat()
    payload = {
        "profile": session.profile,
        "seed": session.seed,
        "passed": session.passed,
        "execution": execution,
        "stats": session.stats,
        "artifacts": [
            {"monitor": a.monitor, "timestamp": a.timestamp, "metrics": a.metrics}
            for a in (session.artifacts if include_timing else [])
        ],
        "violations": [
            {
                "instance_index": v.instance_index,
                "instance_seed": v.instance_seed,
                "property": v.prop,
                "evidence": v.evidence,
                "reproducer": v.reproducer,
            }
            for v in session.violations
        ],
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def render_session(session: VerificationSession, fmt: str = "markdown", include_timing: bool = True) -> str:
    if fmt not in SESSION_FORMATS:
        raise ValueError(f"unknown report format {fmt!r}; expected one of {SESSION_FORMATS}")
    if fmt == "json":
        return render_session_json(session, include_timing)
    return render_markdown(session, include_timing)
