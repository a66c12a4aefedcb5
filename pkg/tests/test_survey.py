from __future__ import annotations

import tempfile
import unittest
from fractions import Fraction
from pathlib import Path

from reductionlab.errors import FormatError, NotDerivableError
from reductionlab.models import AuditFlag, ClaimRecord, SotaRecord
from reductionlab.reporting import parse_report_csv, render_defense_summary, render_report
from reductionlab.survey import (
    ClaimAuditor,
    certified_pair_check,
    compare_to_sota,
    derive_claim_bound,
    load_claims,
    load_manifest,
    load_sota,
    summarize_defenses,
)
from reductionlab.survey.loader import CLAIMS_HEADER, SOTA_HEADER

CIFAR_SOTA = [
    SotaRecord("CIFAR-10", "l2", Fraction(29, 20), Fraction(30, 100)),
    SotaRecord("CIFAR-10", "linf", Fraction(4, 255), Fraction(79, 100)),
]


def claim(defense="d", dataset="CIFAR-10", norm="l2", eps=Fraction(29, 10), **numbers) -> ClaimRecord:
    return ClaimRecord(defense, dataset, norm, eps, **numbers)


class _TempFiles(unittest.TestCase):
    def setUp(self) -> None:
        self._tmp = tempfile.TemporaryDirectory()
        self.root = Path(self._tmp.name)

    def tearDown(self) -> None:
        self._tmp.cleanup()

    def write(self, name: str, text: str) -> Path:
        path = self.root / name
        path.write_text(text, encoding="utf-8")
        return path


class LoadClaimsTest(_TempFiles):
    def test_bundled_claims(self) -> None:
        claims = load_claims(load_manifest().claims_path)
        self.assertEqual(len(claims), 16)
        self.assertEqual(len({c.defense for c in claims}), 14)
        triple = [c for c in claims if c.has_triple]
        self.assertEqual([(c.defense, c.dataset) for c in triple], [("raghuram2021", "CIFAR-10")])

    def test_empty_file(self) -> None:
        self.assertEqual(load_claims(self.write("claims.csv", "")), [])

    def test_rate_outside_the_unit_interval(self) -> None:
        path = self.write(
            "claims.csv",
            ",".join(CLAIMS_HEADER) + "\nx,MNIST,linf,1,10,1.2,0.1,0.1,,\n",
        )
        with self.assertRaises(FormatError) as ctx:
            load_claims(path)
        self.assertEqual(ctx.exception.line, 2)
        self.assertEqual(ctx.exception.field, "fpr")
        self.assertIn("claims.csv:2:", str(ctx.exception))

    def test_both_forms_at_once(self) -> None:
        path = self.write(
            "claims.csv",
            ",".join(CLAIMS_HEADER) + "\nx,MNIST,linf,1,10,0.1,0.1,0.1,0.5,\n",
        )
        with self.assertRaises(FormatError):
            load_claims(path)

    def test_duplicate_rows(self) -> None:
        row = "x,MNIST,linf,1,10,,,,0.5,\n"
        path = self.write("claims.csv", ",".join(CLAIMS_HEADER) + "\n" + row + row)
        with self.assertRaises(FormatError) as ctx:
            load_claims(path)
        self.assertEqual(ctx.exception.line, 3)

    def test_not_derivable_rows_are_kept(self) -> None:
        path = self.write("claims.csv", ",".join(CLAIMS_HEADER) + "\nauc-only,MNIST,linf,1,10,,,,n/a,AUC only\n")
        (record,) = load_claims(path)
        self.assertFalse(record.derivable)

    def test_unknown_norm(self) -> None:
        path = self.write("claims.csv", ",".join(CLAIMS_HEADER) + "\nx,MNIST,l3,1,10,,,,0.5,\n")
        with self.assertRaises(FormatError) as ctx:
            load_claims(path)
        self.assertEqual(ctx.exception.field, "norm")

    def test_wrong_header(self) -> None:
        with self.assertRaises(FormatError):
            load_claims(self.write("claims.csv", "a,b,c\n1,2,3\n"))


class LoadSotaTest(_TempFiles):
    def test_bundled_baselines(self) -> None:
        records = load_sota(load_manifest().sota_path)
        self.assertEqual(len(records), 15)
        self.assertIn(("CIFAR-10", "linf", Fraction(4, 255)), {r.key for r in records})

    def test_accuracy_is_required(self) -> None:
        path = self.write("sota.csv", ",".join(SOTA_HEADER) + "\nMNIST,linf,1,4,,cite\n")
        with self.assertRaises(FormatError):
            load_sota(path)

    def test_manifest_resolves_relative_paths(self) -> None:
        manifest = load_manifest()
        self.assertTrue(manifest.claims_path.is_file())
        self.assertEqual(manifest.certified_band, Fraction(2, 100))
        self.assertEqual(len(manifest.certified_pairs), 2)

    def test_manifest_requires_the_data_files(self) -> None:
        with self.assertRaises(FormatError):
            load_manifest(self.write("manifest.yaml", "version: '1'\nclaims: claims.csv\n"))


class DeriveClaimBoundTest(unittest.TestCase):
    def test_union_bound_form(self) -> None:
        c = claim(fpr=Fraction(20, 100), fnr=Fraction(19, 100), clean_risk=Fraction(5, 100))
        self.assertEqual(derive_claim_bound(c), Fraction(56, 100))

    def test_direct_form(self) -> None:
        self.assertEqual(derive_claim_bound(claim(robust_acc_det=Fraction(3, 4))), Fraction(3, 4))

    def test_perfect_detector(self) -> None:
        self.assertEqual(derive_claim_bound(claim(fpr=Fraction(0), fnr=Fraction(0), clean_risk=Fraction(0))), 1)

    def test_claims_without_numbers(self) -> None:
        for record in (claim(derivable=False), claim()):
            with self.assertRaises(NotDerivableError):
                derive_claim_bound(record)
            with self.assertRaises(NotDerivableError):
                compare_to_sota(record, CIFAR_SOTA)
        self.assertTrue(issubclass(NotDerivableError, ValueError))


class CompareToSotaTest(unittest.TestCase):
    def test_exceeds(self) -> None:
        row = compare_to_sota(claim("miller2019", robust_acc_det=Fraction(75, 100)), CIFAR_SOTA)
        self.assertIs(row.flag, AuditFlag.EXCEEDS_SOTA)
        self.assertEqual(row.implied_eps, Fraction(29, 20))

    def test_within(self) -> None:
        c = claim("roth2019", norm="linf", eps=Fraction(8, 255), robust_acc_det=Fraction(66, 100))
        self.assertIs(compare_to_sota(c, CIFAR_SOTA).flag, AuditFlag.WITHIN_SOTA)

    def test_equal_accuracy_is_not_flagged(self) -> None:
        c = claim(norm="linf", eps=Fraction(8, 255), robust_acc_det=Fraction(79, 100))
        self.assertIs(compare_to_sota(c, CIFAR_SOTA).flag, AuditFlag.WITHIN_SOTA)

    def test_no_baseline(self) -> None:
        c = claim(dataset="SVHN", robust_acc_det=Fraction(1, 2))
        row = compare_to_sota(c, CIFAR_SOTA)
        self.assertIs(row.flag, AuditFlag.NO_BASELINE)
        self.assertIsNone(row.sota)


class BundledAuditTest(unittest.TestCase):
    def setUp(self) -> None:
        manifest = load_manifest()
        self.rows = ClaimAuditor(load_sota(manifest.sota_path)).audit(load_claims(manifest.claims_path))

    def test_twelve_of_fourteen_defenses_flagged(self) -> None:
        verdicts = summarize_defenses(self.rows)
        self.assertEqual(len(verdicts), 14)
        within = sorted(d for d, flag in verdicts.items() if flag is not AuditFlag.EXCEEDS_SOTA)
        self.assertEqual(within, ["jha2019", "roth2019"])
        self.assertEqual(
            render_defense_summary(verdicts),
            "12 of 14 defenses imply robust classifiers beyond the state of the art\n",
        )

    def test_every_claim_has_a_baseline(self) -> None:
        self.assertEqual(len(self.rows), 16)
        self.assertTrue(all(row.sota is not None for row in self.rows))

    def test_worked_union_bound_row(self) -> None:
        (row,) = [r for r in self.rows if r.claim.has_triple]
        self.assertEqual(row.implied_accuracy, Fraction(56, 100))
        self.assertIs(row.flag, AuditFlag.EXCEEDS_SOTA)

    def test_markdown_table(self) -> None:
        text = render_report(self.rows, "markdown")
        self.assertEqual(len(text.splitlines()), 2 + 16)
        self.assertIn("| CIFAR-10 | miller2019 | l2 | 29/10 | >=75% | 29/20 | 30% | **ExceedsSota** |", text)

    def test_csv_parses_back(self) -> None:
        text = render_report(self.rows, "csv")
        self.assertEqual(len(text.splitlines()), 1 + 16)
        self.assertEqual(parse_report_csv(text), [row.summary() for row in self.rows])

    def test_empty_rows_are_an_error(self) -> None:
        with self.assertRaises(ValueError):
            render_report([], "csv")

    def test_not_derivable_claims_are_skipped(self) -> None:
        skipped = claim("auc-only", derivable=False)
        with self.assertLogs("reductionlab.survey.auditor", level="INFO"):
            self.assertEqual(ClaimAuditor(CIFAR_SOTA).audit([skipped]), [])


class CertifiedPairTest(unittest.TestCase):
    def test_bundled_pairs(self) -> None:
        gaps = []
        for pair in load_manifest().certified_pairs:
            check = certified_pair_check(pair.clf_acc, pair.det_acc, clf_eps=pair.clf_eps, det_eps=pair.det_eps)
            self.assertTrue(check.within_band)
            gaps.append(check.gap)
        self.assertEqual(gaps, [Fraction(-2, 100), Fraction(-1, 100)])

    def test_equal_accuracies(self) -> None:
        check = certified_pair_check(Fraction(1, 2), Fraction(1, 2))
        self.assertEqual(check.gap, 0)
        self.assertTrue(check.within_band)

    def test_outside_the_band(self) -> None:
        self.assertFalse(certified_pair_check(Fraction(40, 100), Fraction(30, 100)).within_band)

    def test_accuracy_range(self) -> None:
        with self.assertRaises(ValueError):
            certified_pair_check(Fraction(3, 2), Fraction(1, 2))


if __name__ == "__main__":
    unittest.main()
