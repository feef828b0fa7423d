"""Round-trip fidelity experiment comparing mask resampling strategies.

High-resolution ground truth is NN-downsampled to the source size (the
stand-in for a low-resolution annotation) and resampled back with each
strategy; scores are taken against the original. This measures how well a
strategy reconstructs mask geometry. It does not train a network, so the
image half of an IMAGE-MASK strategy name has no effect on these scores.
"""

from __future__ import annotations

import logging
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from ..interp import ResizeSpec
from ..maskproc import MaskResizeStrategy, Strategy, mask_resize
from ..metrics import BFTolerance, ConfusionMatrix, MetricsReport, bf_score, confusion, report_from
from ..raster import LabelMask, Size
from .config import ExperimentConfig, parse_strategy
from .dataset import load_dataset, split_dataset
from .report import ComparisonReport, build_report
from .synth import ShapeBounds, draw_shapes, render

logger = logging.getLogger(__name__)

THREADS_ENV = "MASKRESIZE_THREADS"
DOWNSAMPLE = MaskResizeStrategy(Strategy.NN)


def thread_count() -> int:
    cap = os.cpu_count() or 1
    raw = os.environ.get(THREADS_ENV)
    if raw is None or not raw.strip():
        return cap
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise ValueError(f"{THREADS_ENV} must be a positive integer, got {raw!r}")
    return n


@dataclass(frozen=True)
class RoundTripScores:
    cm: ConfusionMatrix
    bf: dict


def roundtrip(gt_highres: LabelMask, source_size: Size, strategy: MaskResizeStrategy) -> LabelMask:
    low = mask_resize(gt_highres, ResizeSpec(source_size), DOWNSAMPLE)
    return mask_resize(low, ResizeSpec(gt_highres.size), strategy)


def roundtrip_scores(gt_highres, source_size, strategy, tol=BFTolerance()) -> RoundTripScores:
    pred = roundtrip(gt_highres, source_size, strategy)
    bf = {l: bf_score(pred, gt_highres, l, tol) for l in gt_highres.label_set.labels}
    return RoundTripScores(confusion(pred, gt_highres), bf)


def roundtrip_experiment(gt_highres: LabelMask, source_size: Size, target_size: Size,
                         strategy: MaskResizeStrategy, tol: BFTolerance = BFTolerance()) -> MetricsReport:
    if target_size != gt_highres.size:
        raise ValueError(f"target size {target_size} must equal ground-truth size {gt_highres.size}")
    s = roundtrip_scores(gt_highres, source_size, strategy, tol)
    return report_from(s.cm, s.bf)


def combine(scores: list[RoundTripScores]) -> MetricsReport:
    """Pool confusion counts; average each class's BF over the items where it is defined."""
    cm = scores[0].cm
    for s in scores[1:]:
        cm = cm + s.cm
    per_bf = {}
    for label in cm.labels.labels:
        vals = [s.bf[label] for s in scores if s.bf[label] is not None]
        per_bf[label] = sum(vals) / len(vals) if vals else None
    return report_from(cm, per_bf)


def _ground_truths(config: ExperimentConfig) -> dict[Size, list[LabelMask]]:
    """Test-split ground truth masks grouped by evaluation size."""
    if config.mode == "synthetic":
        shapes = draw_shapes(ShapeBounds(), config.shapes, config.seed)
        _, _, test = split_dataset(shapes, config.split, config.seed)
        return {t: [render(s, t, config.labels) for s in test] for t in config.target_sizes}
    entries = load_dataset(config.dataset, config.labels)
    _, _, test = split_dataset(entries, config.split, config.seed)
    groups: dict[Size, list[LabelMask]] = {}
    for e in test:
        groups.setdefault(e.mask.size, []).append(e.mask)
    return dict(sorted(groups.items(), key=lambda kv: (kv[0].width, kv[0].height)))


def run_comparison(config: ExperimentConfig) -> ComparisonReport:
    groups = _ground_truths(config)
    tol = config.tolerance
    workers = thread_count()
    results: dict[tuple[Size, str], MetricsReport | None] = {}
    n_items = 0
    with ThreadPoolExecutor(max_workers=workers) as pool:
        for size, gts in groups.items():
            n_items = max(n_items, len(gts))
            by_mask: dict[Strategy, MetricsReport | None] = {}
            for name in config.strategies:
                _, tag = parse_strategy(name)
                if tag not in by_mask:
                    strategy = config.mask_strategy(tag)
                    scores = list(pool.map(
                        lambda gt: roundtrip_scores(gt, config.source_size, strategy, tol), gts))
                    by_mask[tag] = combine(scores) if scores else None
                results[(size, name)] = by_mask[tag]
    logger.info("evaluated %d test item(s) per size with %d thread(s)", n_items, workers)
    return build_report(config, list(groups), results, n_items)
