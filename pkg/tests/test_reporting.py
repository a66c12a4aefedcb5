from __future__ import annotations

import json
import unittest
from datetime import datetime, timedelta, timezone
from fractions import Fraction

from reductionlab.errors import FormatError
from reductionlab.models import (
    EvaluationMode,
    ResourceArtifact,
    RiskReport,
    SuiteExecution,
    VerificationSession,
    Violation,
)
from reductionlab.reporting import (
    format_percent,
    parse_risk_report_csv,
    render_pair_checks,
    render_report,
    render_risk_report,
    render_session,
)
from reductionlab.survey import certified_pair_check


def detector_report() -> RiskReport:
    return RiskReport(
        model_kind="lookup_detector",
        metric="linf",
        examples=3,
        risk=Fraction(1, 3),
        eps=Fraction(2),
        robust_risk_det=Fraction(2, 3),
        clean_errors=1,
        clean_rejections=1,
        adversarial_errors=1,
        union_bound=Fraction(1),
    )


def session(violations=()) -> VerificationSession:
    start = datetime(2024, 1, 1, tzinfo=timezone.utc)
    return VerificationSession(
        profile="smoke",
        seed=7,
        execution=SuiteExecution(instances=2, checks=10, started_at=start, finished_at=start + timedelta(seconds=3)),
        artifacts=[ResourceArtifact("psutil", start.isoformat(), {"sample_count": 4.0})],
        violations=list(violations),
        stats={"violations": len(violations)},
    )


class PercentTest(unittest.TestCase):
    def test_rounds_half_up(self) -> None:
        self.assertEqual(format_percent(Fraction(56, 100)), "56%")
        self.assertEqual(format_percent(Fraction(89, 200)), "45%")
        self.assertEqual(format_percent(Fraction(1, 200)), "1%")
        self.assertEqual(format_percent(Fraction(0)), "0%")

    def test_negative_gaps(self) -> None:
        self.assertEqual(format_percent(Fraction(-2, 100)), "-2%")
        self.assertEqual(format_percent(Fraction(-1, 100)), "-1%")


class RiskReportRenderingTest(unittest.TestCase):
    def test_text(self) -> None:
        text = render_risk_report(detector_report(), "text")
        self.assertIn("risk: 1/3 (33%)", text)
        self.assertIn("robust risk with detection: 2/3 (67%)", text)
        self.assertIn("lattice points of the domain only", text)
        self.assertNotIn("lower bound", text)

    def test_lower_bound_is_labelled(self) -> None:
        report = RiskReport(
            model_kind="linear",
            metric="l1",
            examples=2,
            risk=Fraction(0),
            eps=Fraction(3),
            robust_risk=Fraction(1, 2),
            mode=EvaluationMode.LOWER_BOUND,
        )
        self.assertIn("lower bound on robust risk: 1/2 (50%)", render_risk_report(report, "text"))

    def test_csv_parses_back(self) -> None:
        report = detector_report()
        text = render_risk_report(report, "csv")
        self.assertEqual(len(text.splitlines()), 2)
        self.assertEqual(parse_risk_report_csv(text), [report])

    def test_json(self) -> None:
        payload = json.loads(render_risk_report(detector_report(), "json"))
        self.assertEqual(payload["robust_risk_det"], "2/3")
        self.assertIsNone(payload["robust_risk"])
        self.assertEqual(payload["examples"], 3)

    def test_unknown_format(self) -> None:
        with self.assertRaises(ValueError):
            render_risk_report(detector_report(), "xml")
        with self.assertRaises(ValueError):
            render_report([], "html")

    def test_foreign_csv_header(self) -> None:
        with self.assertRaises(FormatError):
            parse_risk_report_csv("a,b\n1,2\n")


class PairCheckRenderingTest(unittest.TestCase):
    def test_markdown(self) -> None:
        check = certified_pair_check(
            Fraction(39, 100), Fraction(37, 100), clf_eps=Fraction(4, 255), det_eps=Fraction(8, 255)
        )
        text = render_pair_checks([check])
        self.assertIn("| 4/255 | 39% | 8/255 | 37% | -2% | yes (+/-2%) |", text)

    def test_csv(self) -> None:
        text = render_pair_checks([certified_pair_check(Fraction(1, 2), Fraction(1, 2))], "csv")
        self.assertEqual(text.splitlines()[1], ",1/2,,1/2,0,1/50,true")


class SessionRenderingTest(unittest.TestCase):
    def test_passing_session(self) -> None:
        text = render_session(session(), "markdown")
        self.assertIn("# Property suite `smoke` (seed 7)", text)
        self.assertIn("- Duration (s): 3.000", text)
        self.assertIn("- None: every checked inequality held", text)
        self.assertIn("## Resources", text)

    def test_without_timing_the_output_is_reproducible(self) -> None:
        text = render_session(session(), "markdown", include_timing=False)
        self.assertNotIn("Started At", text)
        self.assertNotIn("## Resources", text)
        payload = json.loads(render_session(session(), "json", include_timing=False))
        self.assertNotIn("started_at", payload["execution"])
        self.assertEqual(payload["artifacts"], [])
        self.assertTrue(payload["passed"])

    def test_violations_are_listed(self) -> None:
        found = Violation(3, 99, "det_to_clf.robust", {"classifier_robust_risk": "1/2"}, reproducer="r.json")
        text = render_session(session([found]), "markdown")
        self.assertIn("- **det_to_clf.robust** on instance 3 (seed 99)", text)
        self.assertIn("  - Reproducer: r.json", text)
        payload = json.loads(render_session(session([found]), "json"))
        self.assertFalse(payload["passed"])
        self.assertEqual(payload["violations"][0]["property"], "det_to_clf.robust")


if __name__ == "__main__":
    unittest.main()
