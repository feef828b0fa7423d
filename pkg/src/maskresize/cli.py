"""``maskresize`` command line: resize, compare, metrics.

Exit codes: 0 success, 2 invalid input or configuration, 3 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

from .harness.config import ExperimentConfig, load_config
from .harness.experiment import run_comparison
from .harness.io import read_image, read_mask, write_image, write_mask
from .harness.report import emit_report, render_csv, render_json
from .interp import RESAMPLERS, ResizeSpec
from .maskproc import MaskResizeStrategy, Strategy, mask_resize
from .metrics import BFTolerance, evaluate
from .raster import LabelSet, Size

EXIT_OK, EXIT_INVALID, EXIT_IO = 0, 2, 3

logger = logging.getLogger("maskresize")

MASK_STRATEGIES = {"bic-processed": Strategy.BIC_PROCESSED, "bil-processed": Strategy.BIL_PROCESSED}


def cmd_resize(args) -> int:
    spec = ResizeSpec(Size(args.width, args.height))
    if args.strategy in MASK_STRATEGIES:
        mask = read_mask(args.inp, LabelSet.parse(args.labels))
        strategy = MaskResizeStrategy(MASK_STRATEGIES[args.strategy], median_window=args.median_window,
                                      threshold_level=args.threshold)
        write_mask(args.out, mask_resize(mask, spec, strategy))
    else:
        img = read_image(args.inp)
        write_image(args.out, RESAMPLERS[args.strategy](img, spec))
    return EXIT_OK


def cmd_compare(args) -> int:
    config = load_config(args.config) if args.config else ExperimentConfig()
    overrides = {"seed": args.seed, "shapes": args.shapes, "format": args.format, "out": args.out}
    if args.synthetic:
        overrides["mode"] = "synthetic"
    if args.dataset:
        overrides.update(mode="dataset", dataset=args.dataset)
    config = config.with_overrides(**overrides)
    report = run_comparison(config)
    if config.out:
        emit_report(report, config.format, config.out)
        logger.info("wrote %s", config.out)
    else:
        sys.stdout.write(render_csv(report) if config.format == "csv" else render_json(report))
    return EXIT_OK


def cmd_metrics(args) -> int:
    labels = LabelSet.parse(args.labels)
    pred = read_mask(args.pred, labels)
    gt = read_mask(args.gt, labels)
    rep = evaluate(pred, gt, BFTolerance(args.bf_tol))
    out = {
        "labels": list(rep.labels),
        "per_class": {
            str(l): {"accuracy": rep.per_class_accuracy[l], "iou": rep.per_class_iou[l], "bf": rep.per_class_bf[l]}
            for l in rep.labels
        },
        **rep.aggregates(),
    }
    sys.stdout.write(json.dumps(out, indent=2) + "\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="maskresize", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("resize", help="resize an image or a label mask")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--width", type=int, required=True)
    p.add_argument("--height", type=int, required=True)
    p.add_argument("--strategy", choices=sorted(RESAMPLERS) + sorted(MASK_STRATEGIES), default="bicubic")
    p.add_argument("--median-window", type=int, default=3)
    p.add_argument("--threshold", type=float, default=0.5)
    p.add_argument("--labels", default="255,128,0", help="mask labels in priority order, background last")
    p.set_defaults(func=cmd_resize)

    p = sub.add_parser("compare", help="run the strategy comparison experiment")
    p.add_argument("--config")
    p.add_argument("--synthetic", action="store_true")
    p.add_argument("--dataset")
    p.add_argument("--shapes", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--out")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("metrics", help="score a predicted mask against ground truth")
    p.add_argument("--pred", required=True)
    p.add_argument("--gt", required=True)
    p.add_argument("--bf-tol", type=float, help="boundary match distance in pixels (default: 0.75%% of diagonal)")
    p.add_argument("--labels", default="255,128,0")
    p.set_defaults(func=cmd_metrics)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except OSError as exc:
        logger.error("%s", exc)
        return EXIT_IO
    except ValueError as exc:
        logger.error("%s", exc)
        return EXIT_INVALID
