from .reporter import (
    format_percent,
    format_rational,
    parse_report_csv,
    parse_risk_report_csv,
    render_defense_summary,
    render_markdown,
    render_pair_checks,
    render_report,
    render_risk_report,
    render_session,
    render_session_json,
)

__all__ = [
    "format_percent",
    "format_rational",
    "parse_report_csv",
    "parse_risk_report_csv",
    "render_defense_summary",
    "render_markdown",
    "render_pair_checks",
    "render_report",
    "render_risk_report",
    "render_session",
    "render_session_json",
]
