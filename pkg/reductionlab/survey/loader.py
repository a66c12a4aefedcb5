"""
Loading of published claims, state-of-the-art baselines and the survey manifest.

Claims and baselines live in versioned data files, never in code, so the
audit can be rerun when baselines move. Every row is validated; errors name
the file, line and field.
"""

from __future__ import annotations

import csv
import logging
import pathlib
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Iterator, List, Optional, Tuple

import yaml

from ..errors import FormatError
from ..models import ClaimRecord, SotaRecord

logger = logging.getLogger(__name__)

DATA_DIR = pathlib.Path(__file__).resolve().parent / "data"
DEFAULT_MANIFEST = DATA_DIR / "manifest.yaml"

CLAIMS_HEADER = (
    "defense",
    "dataset",
    "norm",
    "eps_num",
    "eps_den",
    "fpr",
    "fnr",
    "clean_risk",
    "robust_acc_det",
    "source",
)
SOTA_HEADER = ("dataset", "norm", "eps_num", "eps_den", "robust_acc", "citation")
NORMS = ("linf", "l2")
NOT_DERIVABLE = "n/a"


@dataclass(frozen=True)
class CertifiedPair:
    dataset: str
    norm: str
    clf_eps: Fraction
    clf_acc: Fraction
    det_eps: Fraction
    det_acc: Fraction


@dataclass(frozen=True)
class SurveyManifest:
    """Bundled data set description loaded from ``manifest.yaml``."""

    version: str
    claims_path: pathlib.Path
    sota_path: pathlib.Path
    rounding: str = "half-up"
    certified_band: Fraction = Fraction(2, 100)
    certified_pairs: Tuple[CertifiedPair, ...] = field(default_factory=tuple)


class _RowReader:
    """CSV rows with their line numbers and typed field access."""

    def __init__(self, path: pathlib.Path, header: Tuple[str, ...]) -> None:
        self.path = path
        self.header = header
        self.source = path.name

    def rows(self) -> Iterator[Tuple[int, Dict[str, str]]]:
        with self.path.open("r", encoding="utf-8", newline="") as handle:
            reader = csv.DictReader(handle)
            if reader.fieldnames is None:
                return
            if tuple(name.strip() for name in reader.fieldnames) != self.header:
                raise FormatError(
                    f"expected header {','.join(self.header)}, got {','.join(reader.fieldnames)}",
                    source=self.source,
                    line=1,
                )
            for row in reader:
                if not any((value or "").strip() for value in row.values()):
                    continue
                yield reader.line_num, {k.strip(): (v or "").strip() for k, v in row.items() if k}

    def text(self, row: Dict[str, str], name: str, line: int) -> str:
        value = row.get(name, "")
        if not value:
            raise FormatError("value is required", source=self.source, line=line, field=name)
        return value

    def rational(self, row: Dict[str, str], name: str, line: int, unit: bool = True) -> Optional[Fraction]:
        value = row.get(name, "")
        if not value:
            return None
        try:
            number = Fraction(value)
        except (ValueError, ZeroDivisionError):
            raise FormatError(f"{value!r} is not a rational", source=self.source, line=line, field=name) from None
        if unit and not 0 <= number <= 1:
            raise FormatError(f"value {value} outside [0, 1]", source=self.source, line=line, field=name)
        return number

    def radius(self, row: Dict[str, str], line: int) -> Fraction:
        try:
            num = int(self.text(row, "eps_num", line))
            den = int(self.text(row, "eps_den", line))
        except ValueError:
            raise FormatError("eps_num and eps_den must be integers", source=self.source, line=line, field="eps_num") from None
        if den <= 0:
            raise FormatError(f"denominator {den} must be positive", source=self.source, line=line, field="eps_den")
        eps = Fraction(num, den)
        if eps <= 0:
            raise FormatError(f"radius {eps} must be positive", source=self.source, line=line, field="eps_num")
        return eps

    def norm(self, row: Dict[str, str], line: int) -> str:
        norm = self.text(row, "norm", line).lower()
        if norm not in NORMS:
            raise FormatError(f"norm {norm!r} not in {NORMS}", source=self.source, line=line, field="norm")
        return norm


def _claim_from_row(reader: _RowReader, row: Dict[str, str], line: int) -> ClaimRecord:
    defense = reader.text(row, "defense", line)
    dataset = reader.text(row, "dataset", line)
    norm = reader.norm(row, line)
    eps = reader.radius(row, line)
    source = row.get("source", "")
    triple = [reader.rational(row, name, line) for name in ("fpr", "fnr", "clean_risk")]
    direct_cell = row.get("robust_acc_det", "")

    if direct_cell.lower() == NOT_DERIVABLE:
        if any(v is not None for v in triple):
            raise FormatError("a not-derivable claim cannot carry rates", source=reader.source, line=line, field="robust_acc_det")
        return ClaimRecord(defense, dataset, norm, eps, source=source, derivable=False)

    direct = reader.rational(row, "robust_acc_det", line)
    present = sum(v is not None for v in triple)
    if present not in (0, 3):
        raise FormatError("fpr, fnr and clean_risk must be given together", source=reader.source, line=line, field="fpr")
    if (present == 3) == (direct is not None):
        raise FormatError(
            "give either the (fpr, fnr, clean_risk) triple or robust_acc_det",
            source=reader.source,
            line=line,
            field="robust_acc_det",
        )
    fpr, fnr, clean_risk = triple
    return ClaimRecord(defense, dataset, norm, eps, fpr, fnr, clean_risk, direct, source)


def load_claims(path: pathlib.Path) -> List[ClaimRecord]:
    """Validated claim records; duplicate (defense, dataset, norm, eps) rows are rejected."""

    reader = _RowReader(pathlib.Path(path), CLAIMS_HEADER)
    claims: List[ClaimRecord] = []
    seen: Dict[Tuple[str, str, str, Fraction], int] = {}
    for line, row in reader.rows():
        claim = _claim_from_row(reader, row, line)
        if claim.key in seen:
            raise FormatError(
                f"duplicate claim {claim.key[:3]} at eps {claim.eps}, first seen on line {seen[claim.key]}",
                source=reader.source,
                line=line,
            )
        seen[claim.key] = line
        claims.append(claim)
    logger.info("loaded %d claims from %s", len(claims), reader.path)
    return claims


def load_sota(path: pathlib.Path) -> List[SotaRecord]:
    """Validated baseline records; ``eps`` columns hold the classifier radius."""

    reader = _RowReader(pathlib.Path(path), SOTA_HEADER)
    records: List[SotaRecord] = []
    seen: Dict[Tuple[str, str, Fraction], int] = {}
    for line, row in reader.rows():
        acc = reader.rational(row, "robust_acc", line)
        if acc is None:
            raise FormatError("value is required", source=reader.source, line=line, field="robust_acc")
        record = SotaRecord(
            dataset=reader.text(row, "dataset", line),
            norm=reader.norm(row, line),
            eps_half=reader.radius(row, line),
            robust_acc=acc,
            citation=row.get("citation", ""),
        )
        if record.key in seen:
            raise FormatError(
                f"duplicate baseline for {record.key}, first seen on line {seen[record.key]}",
                source=reader.source,
                line=line,
            )
        seen[record.key] = line
        records.append(record)
    logger.info("loaded %d baselines from %s", len(records), reader.path)
    return records


def _fraction(payload: Dict[str, Any], name: str, source: str) -> Fraction:
    try:
        return Fraction(str(payload[name]))
    except (KeyError, ValueError, ZeroDivisionError):
        raise FormatError(f"missing or invalid rational {payload.get(name)!r}", source=source, field=name) from None


def load_manifest(path: pathlib.Path = DEFAULT_MANIFEST) -> SurveyManifest:
    """Survey manifest; data file names resolve relative to the manifest."""

    path = pathlib.Path(path)
    with path.open("r", encoding="utf-8") as handle:
        data = yaml.safe_load(handle) or {}
    if not isinstance(data, dict):
        raise FormatError("manifest must be a mapping", source=path.name)
    for key in ("version", "claims", "sota"):
        if key not in data:
            raise FormatError("key is required", source=path.name, field=key)
    pairs = tuple(
        CertifiedPair(
            dataset=str(entry.get("dataset", "")),
            norm=str(entry.get("norm", "")),
            clf_eps=_fraction(entry, "clf_eps", path.name),
            clf_acc=_fraction(entry, "clf_acc", path.name),
            det_eps=_fraction(entry, "det_eps", path.name),
            det_acc=_fraction(entry, "det_acc", path.name),
        )
        for entry in data.get("certified_pairs", []) or []
    )
    return SurveyManifest(
        version=str(data["version"]),
        claims_path=path.parent / str(data["claims"]),
        sota_path=path.parent / str(data["sota"]),
        rounding=str(data.get("rounding", "half-up")),
        certified_band=_fraction(data, "certified_band", path.name) if "certified_band" in data else Fraction(2, 100),
        certified_pairs=pairs,
    )
