"""Exit criteria for the package, one test per criterion.

Run ``pytest tests/test_acceptance.py -rA`` for a PASS/FAIL line per criterion.
"""

import os
import subprocess
import sys
import time

import numpy as np
import pytest

from maskresize.augment import AugmentSpec, augment_pair, draw_transform, pair_rng
from maskresize.harness.experiment import roundtrip_experiment
from maskresize.harness.synth import ShapeBounds, draw_shapes, render
from maskresize.interp import ResizeSpec, cubic_weight, resize_bicubic, resize_bilinear, resize_nn
from maskresize.maskproc import MaskResizeStrategy, Strategy, mask_resize
from maskresize.metrics import BFTolerance, aggregate, bf_score, class_accuracy, class_iou, confusion, mean_bf, \
    percentage_increase
from maskresize.raster import Image, LabelMask, LabelSet, Size, check_labels, mask_validate
from oracles import bf_brute, metrics_brute, replicate

pytestmark = pytest.mark.acceptance

LABELS = (255, 128, 0)


def test_ac1_kernel_oracles(record_property):
    start = time.perf_counter()
    rng = np.random.default_rng(1)
    for factor in (2, 3, 4):
        for _ in range(100):
            px = rng.integers(0, 256, size=(8, 8)).astype(float)
            out = resize_nn(Image(px), ResizeSpec(Size(8 * factor, 8 * factor)))
            assert np.array_equal(out.pixels, replicate(px.tolist(), factor))
    worst_identity = 0.0
    for _ in range(100):
        px = rng.uniform(0, 255, size=(8, 8))
        for fn in (resize_bilinear, resize_bicubic):
            worst_identity = max(worst_identity, np.abs(fn(Image(px), ResizeSpec(Size(8, 8))).pixels - px).max())
    phases = rng.uniform(0, 1, size=1000)
    pou = np.abs(sum(cubic_weight(phases - k) for k in range(-2, 3)) - 1.0).max()
    elapsed = time.perf_counter() - start
    record_property("detail", f"identity err {worst_identity:.1e}, unity err {pou:.1e}, {elapsed:.2f}s")
    assert worst_identity <= 1e-9
    assert pou <= 1e-12
    assert elapsed < 5.0


def test_ac2_extra_pixel_phenomenon(record_property):
    start = time.perf_counter()
    rng = np.random.default_rng(2)
    binary_set = LabelSet((255, 0))
    edged = 0
    for _ in range(100):
        labels = rng.choice([0, 255], size=(8, 8))
        raw = resize_bicubic(Image(labels.astype(float)), ResizeSpec(Size(16, 16))).pixels
        if len(np.unique(labels)) < 2:
            continue
        edged += 1
        assert ((raw > 0) & (raw < 255)).any()
        assert not check_labels(raw, binary_set).ok
    violations = 0
    for i in range(1000):
        h, w = rng.integers(4, 17, size=2)
        th, tw = rng.integers(4, 33, size=2)
        mask = LabelMask(rng.choice(LABELS, size=(h, w)))
        out = mask_resize(mask, ResizeSpec(Size(int(tw), int(th))), MaskResizeStrategy(Strategy.BIC_PROCESSED))
        violations += len(mask_validate(out).violations)
    elapsed = time.perf_counter() - start
    record_property("detail", f"{edged} edged masks all flagged, processed violations {violations}, {elapsed:.2f}s")
    assert edged > 0
    assert violations == 0
    assert elapsed < 30.0


def test_ac3_metric_oracle_equivalence(record_property):
    start = time.perf_counter()
    rng = np.random.default_rng(3)
    worst_bf = 0.0
    for _ in range(500):
        p, g = (rng.choice(LABELS, size=(4, 4)) for _ in range(2))
        pred, gt = LabelMask(p), LabelMask(g)
        ref = metrics_brute(p.tolist(), g.tolist(), LABELS)
        cm = confusion(pred, gt)
        for l in LABELS:
            assert class_accuracy(cm, l) == ref["accuracy"][l]
            assert class_iou(cm, l) == ref["iou"][l]
        assert aggregate(cm) == (ref["global"], ref["mean_accuracy"], ref["mean_iou"], ref["weighted_iou"])
        tol = BFTolerance()
        d = tol.resolve(gt.size)
        per = []
        for l in LABELS:
            got, want = bf_score(pred, gt, l, tol), bf_brute(p.tolist(), g.tolist(), l, d)
            assert (got is None) == (want is None)
            if want is not None:
                worst_bf = max(worst_bf, abs(got - want))
                per.append(want)
        mb = mean_bf(pred, gt, tol)
        if per:
            worst_bf = max(worst_bf, abs(mb - sum(per) / len(per)))
    elapsed = time.perf_counter() - start
    record_property("detail", f"500 pairs, worst bf err {worst_bf:.1e}, {elapsed:.2f}s")
    assert worst_bf <= 1e-12
    assert elapsed < 30.0


def test_ac4_percentage_increase(record_property):
    # ratios and figures as reported for global accuracy (256 and 384 cases)
    reported = [(1.083127, 8.3127), (1.089578, 8.9578), (1.002887, 0.2887), (1.010496, 1.0496)]
    rng = np.random.default_rng(4)
    worst = 0.0
    for ratio, pct in reported:
        for b in rng.uniform(0.05, 1.0, size=20):
            worst = max(worst, abs(percentage_increase(ratio * b, b) - pct))
    for a, b in rng.uniform(0.0, 1.0, size=(1000, 2)):
        inc = percentage_increase(a, b)
        assert (inc > 0) == (a > b) and (inc < 0) == (a < b)
        assert percentage_increase(b, b) == 0.0
    assert percentage_increase(0.4, 0.0) is None
    record_property("detail", f"worst deviation from reported figures {worst:.1e}")
    assert worst <= 1e-6


def _direction(gt_size: int):
    shapes = draw_shapes(ShapeBounds(), 50, seed=7)
    size = Size(gt_size, gt_size)
    bic, nn = [], []
    for shape in shapes:
        gt = render(shape, size)
        bic.append(roundtrip_experiment(gt, Size(128, 128), size, MaskResizeStrategy(Strategy.BIC_PROCESSED)).mean_iou)
        nn.append(roundtrip_experiment(gt, Size(128, 128), size, MaskResizeStrategy(Strategy.NN)).mean_iou)
    bic, nn = np.array(bic), np.array(nn)
    wins = float((bic >= nn).mean())
    return bic.mean(), nn.mean(), wins, percentage_increase(bic.mean(), nn.mean())


@pytest.fixture(scope="module")
def direction():
    start = time.perf_counter()
    res = {256: _direction(256), 384: _direction(384)}
    return res, time.perf_counter() - start


def test_ac5a_direction(direction, record_property):
    res, elapsed = direction
    record_property("detail", "; ".join(
        f"{n}: mIoU bic {b:.4f} nn {a:.4f} wins {w:.0%} incr {p:+.4f}%" for n, (b, a, w, p) in res.items()
    ) + f"; {elapsed:.1f}s")
    for bic, nn, wins, pct in res.values():
        assert bic >= nn
        assert wins >= 0.70
        assert pct > 0
    assert elapsed < 120.0


def test_ac5b_smaller_increase_at_384(direction, record_property):
    res, _ = direction
    inc256, inc384 = res[256][3], res[384][3]
    record_property("detail", f"increase 256 {inc256:+.4f}% vs 384 {inc384:+.4f}%")
    assert inc384 < inc256


def _compare(tmp_path, name, threads):
    out = tmp_path / name
    env = {**os.environ, "MASKRESIZE_THREADS": str(threads)}
    proc = subprocess.run(
        [sys.executable, "-m", "maskresize", "compare", "--synthetic", "--shapes", "50", "--seed", "7",
         "--out", str(out)],
        env=env, capture_output=True, text=True,
    )
    assert proc.returncode == 0, proc.stderr
    return out.read_bytes()


def test_ac6_determinism(tmp_path, record_property):
    runs = [_compare(tmp_path, "a.csv", 1), _compare(tmp_path, "b.csv", 1), _compare(tmp_path, "c.csv", 4)]
    record_property("detail", f"3 runs (threads 1, 1, 4), {len(runs[0])} bytes each")
    assert runs[0] == runs[1] == runs[2]


def test_ac7_augmentation_contract(record_property):
    h, w = 15, 16
    ys, xs = np.mgrid[0:h, 0:w]
    # value 1 + flat index, so 0 marks a vacated pixel
    probe = Image((1 + ys * w + xs).astype(float))
    rng = np.random.default_rng(5)
    spec = AugmentSpec()
    for i in range(1000):
        mask = LabelMask(rng.choice(LABELS, size=(h, w)))
        out_img, out_mask, _ = augment_pair(probe, mask, spec, pair_rng(70, i))
        assert mask_validate(out_mask).ok
        src = out_img.pixels.astype(int) - 1
        vacated = src < 0
        assert (out_mask.labels[vacated] == 0).all()
        sy, sx = np.divmod(src[~vacated], w)
        assert np.array_equal(out_mask.labels[~vacated], mask.labels[sy, sx])
    flips = sum(draw_transform(spec, pair_rng(71, i)).flip for i in range(10_000))
    rate = flips / 10_000
    record_property("detail", f"1000 probe draws paired, flip rate {rate:.4f}")
    assert 0.48 <= rate <= 0.52
