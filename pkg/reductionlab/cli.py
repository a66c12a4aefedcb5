"""
Command-line front end: ``eval``, ``reduce``, ``verify`` and ``survey``.

Results go to standard output or ``--out``; progress and diagnostics go to
standard error. Exit codes: 0 success, 1 property violation, 2 input error,
3 enumeration budget exceeded.
"""

from __future__ import annotations

import argparse
import logging
import pathlib
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Optional, Sequence

from .classifiers.base import Classifier, Detector, Model
from .classifiers.scoring import TinyMLP
from .errors import BudgetExceededError, FormatError, ModelError, ReductionLabError
from .geometry.enumeration import DEFAULT_BUDGET
from .geometry.metrics import METRIC_TAGS, Metric, ScaledDistance, metric_from_tag
from .models import EvaluationMode, RiskReport
from .monitoring import ResourceMonitor
from .reductions.config import FallbackPolicy, ReductionConfig
from .reductions.ibp import certified_detector
from .reductions.minimum_distance import classifier_to_detector, detector_to_classifier
from .reporting.reporter import (
    render_defense_summary,
    render_pair_checks,
    render_report,
    render_risk_report,
    render_session,
)
from .risk.attack import DEFAULT_ATTACK_BUDGET, robust_risk_lower_bound
from .risk.exact import evaluate, risk
from .runner import SuiteRunner, replay
from .serialization import dumps, load_dataset, load_model, model_to_dict
from .survey.auditor import ClaimAuditor, certified_pair_check, summarize_defenses
from .survey.loader import DEFAULT_MANIFEST, load_claims, load_manifest, load_sota
from .verification.loader import DEFAULT_PROFILES, load_profile

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3

DIRECTIONS = ("det-to-clf", "clf-to-det", "certify")
FORMATS = {
    "eval": ("text", "csv", "json"),
    "reduce": ("json",),
    "verify": ("markdown", "json"),
    "survey": ("markdown", "csv"),
}


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a rational N/D, got {text!r}") from None


@dataclass(frozen=True)
class RunConfig:
    """Validated settings of one invocation."""

    command: str
    fmt: str
    seed: int = 0
    budget: int = DEFAULT_BUDGET
    attack_budget: int = DEFAULT_ATTACK_BUDGET
    workers: int = 1
    out: Optional[pathlib.Path] = None
    model: Optional[pathlib.Path] = None
    dataset: Optional[pathlib.Path] = None
    metric: str = "linf"
    eps: Fraction = Fraction(0)
    mode: str = EvaluationMode.EXACT.value
    direction: Optional[str] = None
    fallback: FallbackPolicy = FallbackPolicy.WORST_CASE
    memoize: bool = False
    profile: str = "default"
    profiles: pathlib.Path = DEFAULT_PROFILES
    instances: Optional[int] = None
    max_side: Optional[int] = None
    mutate: bool = False
    reproducer_dir: pathlib.Path = pathlib.Path("reproducers")
    replay: Optional[pathlib.Path] = None
    monitor: bool = True
    manifest: pathlib.Path = DEFAULT_MANIFEST
    claims: Optional[pathlib.Path] = None
    sota: Optional[pathlib.Path] = None

    def __post_init__(self) -> None:
        if self.eps < 0:
            raise FormatError(f"eps must be nonnegative, got {self.eps}", field="eps")
        if self.budget < 1:
            raise FormatError(f"budget must be positive, got {self.budget}", field="budget")
        if self.attack_budget < 1:
            raise FormatError(f"attack-budget must be positive, got {self.attack_budget}", field="attack_budget")
        if self.workers < 1:
            raise FormatError(f"workers must be positive, got {self.workers}", field="workers")
        if self.instances is not None and self.instances < 1:
            raise FormatError(f"instances must be positive, got {self.instances}", field="instances")
        if self.max_side is not None and self.max_side < 1:
            raise FormatError(f"max-side must be positive, got {self.max_side}", field="max_side")
        if self.fmt not in FORMATS[self.command]:
            raise FormatError(f"format {self.fmt!r} not available for {self.command}", field="format")
        for path in (self.model, self.dataset, self.claims, self.sota, self.replay):
            if path is not None and not path.is_file():
                raise FileNotFoundError(f"no such file: {path}")
        if self.command == "survey" and not self.manifest.is_file():
            raise FileNotFoundError(f"no such file: {self.manifest}")

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        values = {name: getattr(args, name) for name in cls.__dataclass_fields__ if hasattr(args, name)}
        values["fmt"] = args.format or FORMATS[args.command][0]
        if "fallback" in values:
            values["fallback"] = FallbackPolicy(values["fallback"])
        return cls(**values)

    def radius(self) -> ScaledDistance:
        return ScaledDistance(self.eps)


def _emit(text: str, out: Optional[pathlib.Path]) -> None:
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text, encoding="utf-8")
    logger.info("wrote %s", out)


def _metric(cfg: RunConfig, dims: int) -> Metric:
    return metric_from_tag(cfg.metric, dims=dims)


# --- subcommands ------------------------------------------------------------


def cmd_eval(cfg: RunConfig) -> int:
    model = load_model(cfg.model)  # type: ignore[arg-type]
    data = load_dataset(cfg.dataset)  # type: ignore[arg-type]
    metric = _metric(cfg, data.domain.dims)
    logger.info("evaluating %s on %d examples at eps=%s (%s)", model.kind, len(data), cfg.eps, metric.tag)
    if cfg.mode == EvaluationMode.LOWER_BOUND.value:
        if not isinstance(model, Classifier):
            raise ModelError("lower-bound mode attacks classifiers only")
        report = RiskReport(
            model_kind=model.kind,
            metric=metric.tag,
            examples=len(data),
            risk=risk(model, data),
            eps=cfg.eps,
            robust_risk=robust_risk_lower_bound(
                model, data, metric, cfg.radius(), cfg.attack_budget, cfg.seed, cfg.workers
            ),
            mode=EvaluationMode.LOWER_BOUND,
        )
    else:
        report = evaluate(model, data, metric, cfg.radius(), cfg.budget, cfg.workers)
    _emit(render_risk_report(report, cfg.fmt), cfg.out)
    return EXIT_OK


def _reduce(model: Model, cfg: RunConfig) -> Model:
    reduction = ReductionConfig(
        metric=_metric(cfg, model.domain.dims),
        eps=cfg.radius(),
        domain=model.domain,
        fallback_seed=cfg.seed,
        fallback_policy=cfg.fallback,
        budget=cfg.budget,
        memoize=cfg.memoize,
    )
    if cfg.direction == "det-to-clf":
        if not isinstance(model, Detector):
            raise ModelError(f"det-to-clf needs a detector, got {model.kind}")
        return detector_to_classifier(model, reduction)
    if cfg.direction == "clf-to-det":
        if not isinstance(model, Classifier):
            raise ModelError(f"clf-to-det needs a classifier, got {model.kind}")
        return classifier_to_detector(model, reduction)
    if not isinstance(model, TinyMLP):
        raise ModelError(f"certify needs a tiny_mlp, got {model.kind}")
    return certified_detector(model, reduction)


def cmd_reduce(cfg: RunConfig) -> int:
    model = load_model(cfg.model)  # type: ignore[arg-type]
    reduced = _reduce(model, cfg)
    logger.info("built %s from %s at eps=%s", reduced.kind, model.kind, cfg.eps)
    _emit(dumps(model_to_dict(reduced)), cfg.out)
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    if cfg.replay is not None:
        failures = replay(cfg.replay)
        for prop, evidence in failures:
            sys.stdout.write(f"{prop}: {evidence}\n")
        if failures:
            logger.error("reproducer %s still fails", cfg.replay)
            return EXIT_VIOLATION
        sys.stdout.write("reproducer passes\n")
        return EXIT_OK

    profile = load_profile(cfg.profile, cfg.profiles).scaled(instances=cfg.instances, max_side=cfg.max_side)
    monitors = [ResourceMonitor()] if cfg.monitor else []
    logger.info("running profile %s: %d instances, seed %d", profile.name, profile.instances, cfg.seed)
    runner = SuiteRunner(
        profile,
        cfg.seed,
        workers=cfg.workers,
        mutate=cfg.mutate,
        reproducer_dir=cfg.reproducer_dir,
        monitors=monitors,
    )
    session = runner.run()
    logger.info("finished in %.3fs", session.execution.seconds)
    for artifact in session.artifacts:
        logger.info("resources (%s): %s", artifact.monitor, artifact.metrics)
    _emit(render_session(session, cfg.fmt, include_timing=False), cfg.out)
    if not session.passed:
        logger.error("%d violations; reproducers in %s", len(session.violations), cfg.reproducer_dir)
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_survey(cfg: RunConfig) -> int:
    manifest = load_manifest(cfg.manifest)
    claims = load_claims(cfg.claims or manifest.claims_path)
    sota = load_sota(cfg.sota or manifest.sota_path)
    rows = ClaimAuditor(sota).audit(claims)
    verdicts = summarize_defenses(rows)
    summary = render_defense_summary(verdicts)
    text = render_report(rows, cfg.fmt)
    if cfg.fmt == "markdown":
        checks = [
            certified_pair_check(p.clf_acc, p.det_acc, manifest.certified_band, p.clf_eps, p.det_eps)
            for p in manifest.certified_pairs
        ]
        text += "\n" + summary
        if checks:
            text += "\n" + render_pair_checks(checks, cfg.fmt)
    else:
        logger.info(summary.strip())
    _emit(text, cfg.out)
    return EXIT_OK


COMMANDS: Dict[str, Callable[[RunConfig], int]] = {
    "eval": cmd_eval,
    "reduce": cmd_reduce,
    "verify": cmd_verify,
    "survey": cmd_survey,
}


# --- parser -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for every random draw")
    common.add_argument(
        "--budget", type=int, default=DEFAULT_BUDGET, help="maximum lattice points examined per enumeration"
    )
    common.add_argument("--workers", type=int, default=1, help="threads for per-example evaluation")
    common.add_argument("--out", type=pathlib.Path, default=None, help="write the result here instead of stdout")
    common.add_argument("--format", default=None, help="output format (first listed choice is the default)")
    common.add_argument("-v", "--verbose", action="store_true", help="log debug output to stderr")

    model_flags = argparse.ArgumentParser(add_help=False)
    model_flags.add_argument("--model", type=pathlib.Path, required=True, help="serialized model (JSON)")
    model_flags.add_argument("--metric", choices=METRIC_TAGS, default="linf", help="perturbation metric")
    model_flags.add_argument("--eps", type=_rational, required=True, help="radius as N/D (detector side for reductions)")

    parser = argparse.ArgumentParser(
        prog="reductionlab",
        description="Exact robust-risk evaluation, detector/classifier reductions and claims auditing.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    formatter = argparse.ArgumentDefaultsHelpFormatter

    p_eval = sub.add_parser("eval", parents=[common, model_flags], formatter_class=formatter, help="evaluate risks")
    p_eval.add_argument("--dataset", type=pathlib.Path, required=True, help="serialized dataset (JSON)")
    p_eval.add_argument(
        "--mode",
        choices=[m.value for m in EvaluationMode],
        default=EvaluationMode.EXACT.value,
        help="exact enumeration, or an attack-based lower bound",
    )
    p_eval.add_argument(
        "--attack-budget",
        dest="attack_budget",
        type=int,
        default=DEFAULT_ATTACK_BUDGET,
        help="model queries per example in lower-bound mode",
    )

    p_reduce = sub.add_parser(
        "reduce", parents=[common, model_flags], formatter_class=formatter, help="build a reduced model"
    )
    p_reduce.add_argument("--direction", choices=DIRECTIONS, required=True, help="which construction to apply")
    p_reduce.add_argument(
        "--fallback",
        choices=[p.value for p in FallbackPolicy],
        default=FallbackPolicy.WORST_CASE.value,
        help="answer when the whole half-radius ball is rejected",
    )
    p_reduce.add_argument("--memoize", action="store_true", help="tabulate the domain when the model is loaded")

    p_verify = sub.add_parser("verify", parents=[common], formatter_class=formatter, help="run the property suite")
    p_verify.add_argument("--profile", default="default", help="profile name in --profiles")
    p_verify.add_argument("--profiles", type=pathlib.Path, default=DEFAULT_PROFILES, help="profile file (YAML)")
    p_verify.add_argument("--instances", type=int, default=None, help="override the profile's instance count")
    p_verify.add_argument("--max-side", dest="max_side", type=int, default=None, help="override the grid side limit")
    p_verify.add_argument(
        "--reproducer-dir",
        dest="reproducer_dir",
        type=pathlib.Path,
        default=pathlib.Path("reproducers"),
        help="where failing instances are written",
    )
    p_verify.add_argument("--replay", type=pathlib.Path, default=None, help="re-check one reproducer file")
    p_verify.add_argument("--no-monitor", dest="monitor", action="store_false", help="skip resource sampling")
    p_verify.add_argument("--mutate", action="store_true", help=argparse.SUPPRESS)

    p_survey = sub.add_parser("survey", parents=[common], formatter_class=formatter, help="audit published claims")
    p_survey.add_argument("--manifest", type=pathlib.Path, default=DEFAULT_MANIFEST, help="survey manifest (YAML)")
    p_survey.add_argument("--claims", type=pathlib.Path, default=None, help="claims CSV (default: from manifest)")
    p_survey.add_argument("--sota", type=pathlib.Path, default=None, help="baselines CSV (default: from manifest)")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        cfg = RunConfig.from_args(args)
        return COMMANDS[cfg.command](cfg)
    except BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ReductionLabError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
