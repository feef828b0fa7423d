"""Segmentation scores: confusion-matrix metrics, boundary F1 and percentage increase.

Scores that reduce to 0/0 (e.g. accuracy of a class absent from the ground
truth) are reported as ``None`` and left out of every mean.

Confusion-derived ratios are formed as exact fractions and converted to
float only at the end, so they do not depend on summation order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np
from scipy import ndimage

from .raster import LabelMask, LabelSet, Size

BF_DIAGONAL_FRACTION = 0.0075


@dataclass(frozen=True, eq=False)
class ConfusionMatrix:
    """``counts[i, j]`` = pixels of ground-truth label i predicted as label j.

    Rows and columns follow ``labels.labels``. Matrices over the same label
    set add together, so per-image matrices can be accumulated in any order.
    """

    labels: LabelSet
    counts: np.ndarray

    def __post_init__(self):
        counts = np.array(self.counts, dtype=np.int64)
        k = len(self.labels)
        if counts.shape != (k, k):
            raise ValueError(f"counts must be {k}x{k}, got {counts.shape}")
        if (counts < 0).any():
            raise ValueError("negative confusion count")
        counts.setflags(write=False)
        object.__setattr__(self, "counts", counts)

    @classmethod
    def empty(cls, labels: LabelSet) -> "ConfusionMatrix":
        return cls(labels, np.zeros((len(labels), len(labels)), dtype=np.int64))

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def __add__(self, other: "ConfusionMatrix") -> "ConfusionMatrix":
        if self.labels != other.labels:
            raise ValueError("cannot merge confusion matrices over different label sets")
        return ConfusionMatrix(self.labels, self.counts + other.counts)

    def __eq__(self, other):
        if not isinstance(other, ConfusionMatrix):
            return NotImplemented
        return self.labels == other.labels and np.array_equal(self.counts, other.counts)

    __hash__ = None


@dataclass(frozen=True)
class BFTolerance:
    """Boundary match distance in pixels; ``None`` means 0.75% of the diagonal (at least 1 px)."""

    distance_threshold: float | None = None

    def __post_init__(self):
        if self.distance_threshold is not None and not self.distance_threshold > 0:
            raise ValueError(f"BF tolerance must be positive, got {self.distance_threshold}")

    def resolve(self, size: Size) -> float:
        if self.distance_threshold is not None:
            return float(self.distance_threshold)
        return max(1.0, BF_DIAGONAL_FRACTION * math.hypot(size.width, size.height))


@dataclass(frozen=True)
class MetricsReport:
    labels: tuple[int, ...]
    per_class_accuracy: dict
    per_class_iou: dict
    per_class_bf: dict
    global_accuracy: float
    mean_accuracy: float | None
    mean_iou: float | None
    weighted_iou: float | None
    mean_bf: float | None

    def aggregates(self) -> dict:
        return {
            "global_accuracy": self.global_accuracy,
            "mean_accuracy": self.mean_accuracy,
            "mean_iou": self.mean_iou,
            "weighted_iou": self.weighted_iou,
            "mean_bf": self.mean_bf,
        }


def _check_pair(pred: LabelMask, gt: LabelMask):
    if pred.size != gt.size:
        raise ValueError(f"size mismatch: pred {pred.size} vs gt {gt.size}")
    if pred.label_set != gt.label_set:
        raise ValueError(f"label set mismatch: pred {pred.label_set} vs gt {gt.label_set}")


def confusion(pred: LabelMask, gt: LabelMask) -> ConfusionMatrix:
    _check_pair(pred, gt)
    labels = gt.label_set
    k = len(labels)
    lut = np.zeros(256, dtype=np.int64)
    lut[list(labels.labels)] = np.arange(k)
    flat = lut[gt.labels.ravel()] * k + lut[pred.labels.ravel()]
    counts = np.bincount(flat, minlength=k * k).reshape(k, k)
    return ConfusionMatrix(labels, counts)


def _ratio(num: int, den: int) -> Fraction | None:
    return Fraction(num, den) if den else None


def _class_accuracy_exact(cm: ConfusionMatrix, i: int) -> Fraction | None:
    return _ratio(int(cm.counts[i, i]), int(cm.counts[i, :].sum()))


def _class_iou_exact(cm: ConfusionMatrix, i: int) -> Fraction | None:
    tp = int(cm.counts[i, i])
    return _ratio(tp, int(cm.counts[i, :].sum()) + int(cm.counts[:, i].sum()) - tp)


def _as_float(v: Fraction | None) -> float | None:
    return None if v is None else float(v)


def class_accuracy(cm: ConfusionMatrix, label: int) -> float | None:
    """Recall of ``label``: correct pixels over ground-truth pixels of that label."""
    return _as_float(_class_accuracy_exact(cm, cm.labels.index(label)))


def class_iou(cm: ConfusionMatrix, label: int) -> float | None:
    return _as_float(_class_iou_exact(cm, cm.labels.index(label)))


def _mean_exact(values: Iterable[Fraction | None]) -> Fraction | None:
    vals = [v for v in values if v is not None]
    return sum(vals, Fraction(0)) / len(vals) if vals else None


def aggregate(cm: ConfusionMatrix) -> tuple[float, float | None, float | None, float | None]:
    """``(global_accuracy, mean_accuracy, mean_iou, weighted_iou)``."""
    total = cm.total
    if total == 0:
        raise ValueError("confusion matrix is empty")
    k = len(cm.labels)
    acc = [_class_accuracy_exact(cm, i) for i in range(k)]
    iou = [_class_iou_exact(cm, i) for i in range(k)]
    glob = Fraction(int(np.trace(cm.counts)), total)
    weighted = [
        Fraction(int(cm.counts[i, :].sum()), total) * iou[i] for i in range(k) if iou[i] is not None
    ]
    weighted_iou = sum(weighted, Fraction(0)) if weighted else None
    return float(glob), _as_float(_mean_exact(acc)), _as_float(_mean_exact(iou)), _as_float(weighted_iou)


def boundary(labels: np.ndarray, label: int) -> np.ndarray:
    """Pixels of ``label`` with a 4-neighbour of another label or on the raster edge."""
    inside = labels == label
    padded = np.pad(inside, 1, mode="constant", constant_values=False)
    interior = padded[:-2, 1:-1] & padded[2:, 1:-1] & padded[1:-1, :-2] & padded[1:-1, 2:]
    return inside & ~interior


def _matched_fraction(src: np.ndarray, ref: np.ndarray, tol: float) -> Fraction:
    """Fraction of ``src`` boundary pixels within ``tol`` of some ``ref`` boundary pixel."""
    n = int(src.sum())
    if not ref.any():
        return Fraction(0)
    dist = ndimage.distance_transform_edt(~ref)
    return Fraction(int((dist[src] <= tol).sum()), n)


def bf_score(pred: LabelMask, gt: LabelMask, label: int, tol: BFTolerance = BFTolerance()) -> float | None:
    """Boundary F1 of one class: harmonic mean of boundary precision and recall."""
    if pred.size != gt.size:
        raise ValueError(f"size mismatch: pred {pred.size} vs gt {gt.size}")
    gt.label_set.index(label)
    d = tol.resolve(gt.size)
    pb = boundary(pred.labels, label)
    gb = boundary(gt.labels, label)
    if not pb.any() and not gb.any():
        return None
    if not pb.any() or not gb.any():
        return 0.0
    p = _matched_fraction(pb, gb, d)
    r = _matched_fraction(gb, pb, d)
    if p + r == 0:
        return 0.0
    return float(2 * p * r / (p + r))


def mean_bf(pred: LabelMask, gt: LabelMask, tol: BFTolerance = BFTolerance(), labels=None) -> float | None:
    """Mean of the defined per-class BF scores (all labels unless ``labels`` is given)."""
    labels = gt.label_set.labels if labels is None else labels
    scores = [s for s in (bf_score(pred, gt, l, tol) for l in labels) if s is not None]
    return sum(scores) / len(scores) if scores else None


def evaluate(pred: LabelMask, gt: LabelMask, tol: BFTolerance = BFTolerance()) -> MetricsReport:
    cm = confusion(pred, gt)
    bf = {l: bf_score(pred, gt, l, tol) for l in gt.label_set.labels}
    return report_from(cm, bf)


def report_from(cm: ConfusionMatrix, per_class_bf: dict) -> MetricsReport:
    labels = cm.labels.labels
    glob, macc, miou, wiou = aggregate(cm)
    defined = [v for v in per_class_bf.values() if v is not None]
    return MetricsReport(
        labels=labels,
        per_class_accuracy={l: class_accuracy(cm, l) for l in labels},
        per_class_iou={l: class_iou(cm, l) for l in labels},
        per_class_bf=dict(per_class_bf),
        global_accuracy=glob,
        mean_accuracy=macc,
        mean_iou=miou,
        weighted_iou=wiou,
        mean_bf=sum(defined) / len(defined) if defined else None,
    )


def percentage_increase(a: float, b: float) -> float | None:
    """Relative change of score ``a`` over baseline ``b`` in percent; ``None`` when b == 0."""
    if b == 0:
        return None
    return (a - b) / b * 100.0
