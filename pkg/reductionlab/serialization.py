"""
Versioned JSON encoding of models and datasets.

Every document carries ``"format"`` and ``"version"``; rationals are strings
such as ``"8/255"``. Wrapping models (reductions, thresholds, certified
detectors) store the wrapped model inline together with their configuration
and are rebuilt on load. See ``docs/model_format.md``.
"""

from __future__ import annotations

import json
import pathlib
from fractions import Fraction
from typing import Any, Callable, Dict, Union

from .classifiers.base import Model, ScoringClassifier
from .classifiers.lookup import LookupClassifier, LookupDetector
from .classifiers.prototype import NearestPrototypeClassifier
from .classifiers.scoring import DenseLayer, LinearClassifier, TinyMLP
from .classifiers.threshold import ConfidenceThresholdDetector
from .errors import FormatError, ModelError, ReductionLabError
from .geometry.domain import GridDomain
from .geometry.metrics import metric_from_dict
from .models import WeightedDataset
from .reductions.config import ReductionConfig
from .reductions.ibp import CertifiedDetector
from .reductions.minimum_distance import ReducedClassifier, ReducedDetector

MODEL_FORMAT = "reductionlab.model"
DATASET_FORMAT = "reductionlab.dataset"
FORMAT_VERSION = 1

PathLike = Union[str, pathlib.Path]


def _rational(value: Fraction) -> str:
    return str(Fraction(value))


def _fractions(values: Any) -> list:
    return [_rational(v) for v in values]


# --- encoding ---------------------------------------------------------------


def _encode_body(model: Model) -> Dict[str, Any]:
    if isinstance(model, LookupClassifier):
        return {"table": list(model.table), "num_classes": model.num_classes}
    if isinstance(model, LookupDetector):
        return {"table": list(model.table), "num_classes": model.num_classes}
    if isinstance(model, NearestPrototypeClassifier):
        return {
            "prototypes": [list(p) for p in model.prototypes],
            "labels": list(model.labels),
            "metric": model.metric.to_dict(),
            "num_classes": model.num_classes,
        }
    if isinstance(model, LinearClassifier):
        return {"weights": list(model.weights), "bias": _rational(model.bias)}
    if isinstance(model, TinyMLP):
        return {
            "layers": [
                {"weights": [_fractions(row) for row in layer.weights], "bias": _fractions(layer.bias)}
                for layer in model.layers
            ]
        }
    if isinstance(model, ConfidenceThresholdDetector):
        return {"scorer": model_to_dict(model.scorer), "tau": _rational(model.tau)}
    if isinstance(model, ReducedClassifier):
        return {"detector": model_to_dict(model.detector), "config": model.cfg.to_dict()}
    if isinstance(model, ReducedDetector):
        return {"classifier": model_to_dict(model.classifier), "config": model.cfg.to_dict()}
    if isinstance(model, CertifiedDetector):
        return {"mlp": model_to_dict(model.mlp), "config": model.cfg.to_dict()}
    raise ModelError(f"no serialized form for {type(model).__name__}")


def model_to_dict(model: Model) -> Dict[str, Any]:
    payload: Dict[str, Any] = {
        "format": MODEL_FORMAT,
        "version": FORMAT_VERSION,
        "kind": model.kind,
        "domain": model.domain.to_dict(),
    }
    payload.update(_encode_body(model))
    return payload


# --- decoding ---------------------------------------------------------------


def _label_table(payload: Dict[str, Any]) -> list:
    return [None if v is None else int(v) for v in payload["table"]]


def _check_table(domain: GridDomain, table: list, source: str) -> None:
    if len(table) != domain.size:
        raise FormatError(
            f"table has {len(table)} entries, domain has {domain.size} points", source=source, field="table"
        )


def _lookup_classifier(payload: Dict[str, Any], domain: GridDomain, source: str) -> Model:
    table = _label_table(payload)
    _check_table(domain, table, source)
    return LookupClassifier(domain, table, int(payload["num_classes"]))


def _lookup_detector(payload: Dict[str, Any], domain: GridDomain, source: str) -> Model:
    table = _label_table(payload)
    _check_table(domain, table, source)
    return LookupDetector(domain, table, int(payload["num_classes"]))


def _nearest_prototype(payload: Dict[str, Any], domain: GridDomain, source: str) -> Model:
    return NearestPrototypeClassifier(
        domain,
        [tuple(int(c) for c in p) for p in payload["prototypes"]],
        [int(y) for y in payload["labels"]],
        metric_from_dict(payload["metric"]),
        int(payload["num_classes"]),
    )


def _linear(payload: Dict[str, Any], domain: GridDomain, source: str) -> Model:
    return LinearClassifier(domain, [int(w) for w in payload["weights"]], Fraction(payload["bias"]))


def _tiny_mlp(payload: Dict[str, Any], domain: GridDomain, source: str) -> Model:
    return TinyMLP(
        domain,
        [DenseLayer(weights=layer["weights"], bias=layer["bias"]) for layer in payload["layers"]],
    )


def _inner(payload: Dict[str, Any], name: str, source: str) -> Model:
    return model_from_dict(payload[name], source=source)


def _threshold(payload: Dict[str, Any], domain: GridDomain, source: str) -> Model:
    scorer = _inner(payload, "scorer", source)
    if not isinstance(scorer, ScoringClassifier):
        raise FormatError(f"{scorer.kind} does not produce scores", source=source, field="scorer")
    return ConfidenceThresholdDetector(scorer, Fraction(payload["tau"]))


def _reduced_classifier(payload: Dict[str, Any], domain: GridDomain, source: str) -> Model:
    return ReducedClassifier(_inner(payload, "detector", source), ReductionConfig.from_dict(payload["config"]))  # type: ignore[arg-type]


def _reduced_detector(payload: Dict[str, Any], domain: GridDomain, source: str) -> Model:
    return ReducedDetector(_inner(payload, "classifier", source), ReductionConfig.from_dict(payload["config"]))  # type: ignore[arg-type]


def _certified_detector(payload: Dict[str, Any], domain: GridDomain, source: str) -> Model:
    mlp = _inner(payload, "mlp", source)
    if not isinstance(mlp, TinyMLP):
        raise FormatError(f"certified detector wraps a tiny_mlp, not {mlp.kind}", source=source, field="mlp")
    return CertifiedDetector(mlp, ReductionConfig.from_dict(payload["config"]))


_DECODERS: Dict[str, Callable[[Dict[str, Any], GridDomain, str], Model]] = {
    LookupClassifier.kind: _lookup_classifier,
    LookupDetector.kind: _lookup_detector,
    NearestPrototypeClassifier.kind: _nearest_prototype,
    LinearClassifier.kind: _linear,
    TinyMLP.kind: _tiny_mlp,
    ConfidenceThresholdDetector.kind: _threshold,
    ReducedClassifier.kind: _reduced_classifier,
    ReducedDetector.kind: _reduced_detector,
    CertifiedDetector.kind: _certified_detector,
}
MODEL_KINDS = tuple(sorted(_DECODERS))


def _check_header(payload: Any, expected: str, source: str) -> None:
    if not isinstance(payload, dict):
        raise FormatError("document must be a JSON object", source=source)
    if payload.get("format") != expected:
        raise FormatError(f"expected format {expected!r}, got {payload.get('format')!r}", source=source, field="format")
    if payload.get("version") != FORMAT_VERSION:
        raise FormatError(
            f"unsupported version {payload.get('version')!r}; this release reads version {FORMAT_VERSION}",
            source=source,
            field="version",
        )


def model_from_dict(payload: Dict[str, Any], source: str = "<model>") -> Model:
    _check_header(payload, MODEL_FORMAT, source)
    kind = payload.get("kind")
    decoder = _DECODERS.get(kind)  # type: ignore[arg-type]
    if decoder is None:
        raise FormatError(f"unknown model kind {kind!r}; expected one of {', '.join(MODEL_KINDS)}", source=source, field="kind")
    try:
        domain = GridDomain.from_dict(payload["domain"])
        model = decoder(payload, domain, source)
    except ReductionLabError:
        raise
    except KeyError as exc:
        raise FormatError("missing key", source=source, field=str(exc.args[0])) from None
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"invalid {kind} parameters: {exc}", source=source) from None
    if model.domain != domain:
        raise FormatError("wrapped model domain differs from the document domain", source=source, field="domain")
    return model


def dataset_to_dict(data: WeightedDataset) -> Dict[str, Any]:
    return {
        "format": DATASET_FORMAT,
        "version": FORMAT_VERSION,
        "domain": data.domain.to_dict(),
        "num_classes": data.num_classes,
        "entries": [
            {"point": list(e.point), "label": e.label, "weight": _rational(e.weight)} for e in data.entries
        ],
    }


def dataset_from_dict(payload: Dict[str, Any], source: str = "<dataset>") -> WeightedDataset:
    """Dataset from its document; entries without weights are weighted uniformly."""

    _check_header(payload, DATASET_FORMAT, source)
    try:
        domain = GridDomain.from_dict(payload["domain"])
        entries = payload["entries"]
        points = [tuple(int(c) for c in e["point"]) for e in entries]
        labels = [int(e["label"]) for e in entries]
        num_classes = int(payload["num_classes"])
        if any("weight" in e for e in entries):
            return WeightedDataset.weighted(domain, num_classes, points, labels, [Fraction(e["weight"]) for e in entries])
        return WeightedDataset.uniform(domain, num_classes, points, labels)
    except ReductionLabError:
        raise
    except KeyError as exc:
        raise FormatError("missing key", source=source, field=str(exc.args[0])) from None
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"invalid dataset: {exc}", source=source) from None


def dumps(payload: Dict[str, Any]) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _read_json(path: PathLike) -> Any:
    path = pathlib.Path(path)
    try:
        return json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise FormatError(exc.msg, source=path.name, line=exc.lineno) from None


def save_model(model: Model, path: PathLike) -> None:
    pathlib.Path(path).write_text(dumps(model_to_dict(model)), encoding="utf-8")


def load_model(path: PathLike) -> Model:
    return model_from_dict(_read_json(path), source=pathlib.Path(path).name)


def save_dataset(data: WeightedDataset, path: PathLike) -> None:
    pathlib.Path(path).write_text(dumps(dataset_to_dict(data)), encoding="utf-8")


def load_dataset(path: PathLike) -> WeightedDataset:
    return dataset_from_dict(_read_json(path), source=pathlib.Path(path).name)
