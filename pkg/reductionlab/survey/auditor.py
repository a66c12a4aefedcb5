"""
Audit of published detector defenses against robust classification baselines.

A detector robust at radius ``eps`` yields, through the minimum distance
reduction, a classifier with the same robust accuracy at ``eps / 2``. A claim
implying a classifier better than the best published one at ``eps / 2`` is
flagged. The auditor flags implications; it does not judge the claims.
"""

from __future__ import annotations

import logging
from collections import OrderedDict
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from ..errors import NotDerivableError
from ..models import AuditFlag, AuditRow, ClaimRecord, PairCheck, SotaRecord
from ..risk.bounds import union_bound

logger = logging.getLogger(__name__)

DEFAULT_BAND = Fraction(2, 100)


def derive_claim_bound(claim: ClaimRecord) -> Fraction:
    """Robust accuracy with detection implied by a claim.

    Triple form: ``1 - min(1, fpr + fnr + clean_risk)``. Direct form: the
    reported value unchanged. Anything else raises ``NotDerivableError``.
    """

    if claim.derivable and claim.has_triple:
        return 1 - union_bound(claim.fpr, claim.fnr, claim.clean_risk)
    if not claim.derivable or claim.robust_acc_det is None:
        raise NotDerivableError(f"{claim.defense} on {claim.dataset}: no derivable robust accuracy")
    return claim.robust_acc_det


def _index(sota: Iterable[SotaRecord]) -> Dict[Tuple[str, str, Fraction], SotaRecord]:
    return {record.key: record for record in sota}


def _flag(implied: Fraction, baseline: Optional[SotaRecord]) -> AuditFlag:
    if baseline is None:
        return AuditFlag.NO_BASELINE
    if implied > baseline.robust_acc:
        return AuditFlag.EXCEEDS_SOTA
    return AuditFlag.WITHIN_SOTA


def compare_to_sota(claim: ClaimRecord, sota: Sequence[SotaRecord]) -> AuditRow:
    implied = derive_claim_bound(claim)
    baseline = _index(sota).get((claim.dataset, claim.norm, claim.eps / 2))
    return AuditRow(claim=claim, implied_accuracy=implied, sota=baseline, flag=_flag(implied, baseline))


class ClaimAuditor:
    """Matches every derivable claim against a fixed set of baselines."""

    def __init__(self, sota: Sequence[SotaRecord]) -> None:
        self.sota = list(sota)
        self._baselines = _index(self.sota)

    def audit(self, claims: Iterable[ClaimRecord]) -> List[AuditRow]:
        rows: List[AuditRow] = []
        for claim in claims:
            if not claim.derivable:
                logger.info("skipping %s on %s: no derivable bound", claim.defense, claim.dataset)
                continue
            implied = derive_claim_bound(claim)
            baseline = self._baselines.get((claim.dataset, claim.norm, claim.eps / 2))
            if baseline is None:
                logger.warning(
                    "no baseline for %s %s at eps/2=%s", claim.dataset, claim.norm, claim.eps / 2
                )
            rows.append(AuditRow(claim, implied, baseline, _flag(implied, baseline)))
        return rows


def summarize_defenses(rows: Iterable[AuditRow]) -> "OrderedDict[str, AuditFlag]":
    """Per-defense verdict: ExceedsSota if any of its rows exceeds, else
    WithinSota if any row has a baseline, else NoBaseline."""

    verdicts: "OrderedDict[str, AuditFlag]" = OrderedDict()
    rank = {AuditFlag.NO_BASELINE: 0, AuditFlag.WITHIN_SOTA: 1, AuditFlag.EXCEEDS_SOTA: 2}
    for row in rows:
        current = verdicts.get(row.claim.defense)
        if current is None or rank[row.flag] > rank[current]:
            verdicts[row.claim.defense] = row.flag
    return verdicts


def certified_pair_check(
    clf_acc: Fraction,
    det_acc: Fraction,
    band: Fraction = DEFAULT_BAND,
    clf_eps: Optional[Fraction] = None,
    det_eps: Optional[Fraction] = None,
) -> PairCheck:
    """Gap ``det_acc - clf_acc`` between a certified detector at ``eps`` and
    the certified classifier at ``eps / 2``."""

    clf_acc, det_acc, band = Fraction(clf_acc), Fraction(det_acc), Fraction(band)
    for name, value in (("clf_acc", clf_acc), ("det_acc", det_acc)):
        if not 0 <= value <= 1:
            raise ValueError(f"{name}={value} outside [0, 1]")
    if band < 0:
        raise ValueError(f"band must be nonnegative, got {band}")
    gap = det_acc - clf_acc
    return PairCheck(
        clf_acc=clf_acc,
        det_acc=det_acc,
        gap=gap,
        band=band,
        within_band=abs(gap) <= band,
        clf_eps=clf_eps,
        det_eps=det_eps,
    )
