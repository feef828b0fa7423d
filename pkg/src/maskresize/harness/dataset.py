"""Image/mask pair loading and seeded train/val/test splitting.

A dataset directory holds ``images/<stem>.png|.pgm`` and ``masks/<stem>.png|.pgm``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..raster import Image, LabelMask, LabelSet
from .io import SUFFIXES, read_image, read_mask

logger = logging.getLogger(__name__)


class DatasetError(ValueError):
    def __init__(self, problems: list[str]):
        self.problems = list(problems)
        super().__init__(f"{len(problems)} dataset error(s):\n" + "\n".join(f"  {p}" for p in problems))


@dataclass(frozen=True)
class DatasetEntry:
    stem: str
    image_path: Path
    mask_path: Path
    image: Image
    mask: LabelMask


def _by_stem(directory: Path) -> dict[str, Path]:
    if not directory.is_dir():
        return {}
    found = {}
    for p in sorted(directory.iterdir()):
        if p.suffix.lower() in SUFFIXES:
            found.setdefault(p.stem, p)
    return found


def load_dataset(root, label_set: LabelSet | None = None) -> list[DatasetEntry]:
    """Load every pair under ``root`` in lexicographic stem order.

    All problems are collected before failing so one run reports them all.
    """
    root = Path(root)
    if not root.is_dir():
        raise FileNotFoundError(f"dataset directory not found: {root}")
    label_set = label_set or LabelSet()
    images = _by_stem(root / "images")
    masks = _by_stem(root / "masks")
    problems = []
    for stem in sorted(set(images) ^ set(masks)):
        side = "mask" if stem in images else "image"
        problems.append(f"{stem}: no matching {side} file")
    entries = []
    for stem in sorted(set(images) & set(masks)):
        ipath, mpath = images[stem], masks[stem]
        try:
            img = read_image(ipath)
            mask = read_mask(mpath, label_set)
        except (OSError, ValueError) as exc:
            problems.append(str(exc) if str(mpath) in str(exc) or str(ipath) in str(exc) else f"{stem}: {exc}")
            continue
        if img.size != mask.size:
            problems.append(f"{stem}: image {ipath} is {img.size} but mask {mpath} is {mask.size}")
            continue
        entries.append(DatasetEntry(stem, ipath, mpath, img, mask))
    if problems:
        raise DatasetError(problems)
    if not entries:
        logger.warning("no image/mask pairs found under %s", root)
    else:
        logger.info("loaded %d pairs from %s", len(entries), root)
    return entries


def split_sizes(n: int, fractions: tuple[float, float, float]) -> tuple[int, int, int]:
    # round() guards floor against products like 0.2 * 15 = 3.0000000000000004
    n_val = math.floor(round(n * fractions[1], 9))
    n_test = math.floor(round(n * fractions[2], 9))
    return n - n_val - n_test, n_val, n_test


def split_dataset(entries, fractions=(0.6, 0.2, 0.2), seed: int = 0):
    """Seeded shuffle then contiguous cut; train takes the rounding remainder."""
    if len(fractions) != 3 or any(f <= 0 for f in fractions) or abs(sum(fractions) - 1.0) > 1e-9:
        raise ValueError(f"split fractions must be three positive numbers summing to 1, got {fractions}")
    entries = list(entries)
    n_train, n_val, _ = split_sizes(len(entries), fractions)
    order = np.random.Generator(np.random.PCG64(seed)).permutation(len(entries))
    shuffled = [entries[i] for i in order]
    return shuffled[:n_train], shuffled[n_train:n_train + n_val], shuffled[n_train + n_val:]
