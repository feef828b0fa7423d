"""8-bit grayscale PNG / binary PGM reading and writing."""

from __future__ import annotations

from pathlib import Path

import numpy as np
from PIL import Image as PILImage

from ..raster import Image, LabelMask, LabelSet

SUFFIXES = (".png", ".pgm")


class RasterFormatError(ValueError):
    """A readable file that is not an 8-bit grayscale raster."""


def read_raster(path) -> np.ndarray:
    path = Path(path)
    with PILImage.open(path) as im:
        if im.mode != "L":
            raise RasterFormatError(f"{path}: expected 8-bit grayscale, got mode {im.mode}")
        return np.array(im, dtype=np.uint8)


def write_raster(path, values: np.ndarray):
    path = Path(path)
    if path.suffix.lower() not in SUFFIXES:
        raise RasterFormatError(f"{path}: unsupported extension, use .png or .pgm")
    arr = np.asarray(values)
    if arr.dtype != np.uint8:
        arr = np.clip(np.rint(arr), 0, 255).astype(np.uint8)
    PILImage.fromarray(arr, mode="L").save(path)


def read_image(path) -> Image:
    return Image(read_raster(path).astype(np.float64))


def read_mask(path, label_set: LabelSet | None = None) -> LabelMask:
    label_set = label_set or LabelSet()
    try:
        return LabelMask(read_raster(path), label_set)
    except RasterFormatError:
        raise
    except ValueError as exc:
        raise RasterFormatError(f"{path}: {exc}") from None


def write_image(path, img: Image):
    write_raster(path, img.pixels)


def write_mask(path, mask: LabelMask):
    write_raster(path, mask.labels.astype(np.uint8))
