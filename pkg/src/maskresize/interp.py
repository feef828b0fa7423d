"""Nearest-neighbour, bilinear and bicubic resampling.

All three resamplers share one coordinate convention (half-pixel centres,
so a same-size resize is an exact identity) and one boundary policy
(clamp-to-edge). Bilinear and bicubic are evaluated separably, rows first,
by accumulating a fixed number of taps per axis in a fixed order; results do
not depend on how the work is scheduled.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .raster import Image, Size

HALF_PIXEL = "half-pixel-centers"
CLAMP_TO_EDGE = "clamp-to-edge"


@dataclass(frozen=True)
class CubicKernelParams:
    a: float = -0.5


@dataclass(frozen=True)
class ResizeSpec:
    target: Size
    mapping: str = HALF_PIXEL
    boundary: str = CLAMP_TO_EDGE
    clamp_output: bool = True
    cubic: CubicKernelParams = field(default_factory=CubicKernelParams)

    def __post_init__(self):
        if self.mapping != HALF_PIXEL:
            raise ValueError(f"unsupported coordinate mapping {self.mapping!r}")
        if self.boundary != CLAMP_TO_EDGE:
            raise ValueError(f"unsupported boundary policy {self.boundary!r}")


def map_coord(dst_index, src_extent: int, dst_extent: int):
    """Source coordinate of destination sample ``dst_index`` (half-pixel centres).

    Accepts scalars or integer arrays.
    """
    return (np.asarray(dst_index, dtype=np.float64) + 0.5) * (src_extent / dst_extent) - 0.5


def cubic_weight(t, params: CubicKernelParams = CubicKernelParams()):
    """Piecewise-cubic convolution kernel with support [-2, 2]."""
    a = params.a
    t = np.abs(np.asarray(t, dtype=np.float64))
    t2 = t * t
    t3 = t2 * t
    near = (a + 2.0) * t3 - (a + 3.0) * t2 + 1.0
    far = a * t3 - 5.0 * a * t2 + 8.0 * a * t - 4.0 * a
    out = np.where(t <= 1.0, near, np.where(t < 2.0, far, 0.0))
    return out.item() if out.ndim == 0 else out


def nn_indices(src_extent: int, dst_extent: int) -> np.ndarray:
    """Nearest source index for every destination sample.

    floor(map_coord + 0.5) reduces to ((2i + 1) * src) // (2 * dst), which is
    evaluated in integers so ties resolve upward exactly.
    """
    i = np.arange(dst_extent, dtype=np.int64)
    idx = ((2 * i + 1) * src_extent) // (2 * dst_extent)
    return np.clip(idx, 0, src_extent - 1)


def _linear_taps(src_extent: int, dst_extent: int):
    c = map_coord(np.arange(dst_extent), src_extent, dst_extent)
    base = np.floor(c)
    frac = c - base
    base = base.astype(np.int64)
    idx = np.stack([base, base + 1], axis=1)
    w = np.stack([1.0 - frac, frac], axis=1)
    return np.clip(idx, 0, src_extent - 1), w


def _cubic_taps(src_extent: int, dst_extent: int, params: CubicKernelParams):
    c = map_coord(np.arange(dst_extent), src_extent, dst_extent)
    base = np.floor(c).astype(np.int64)
    offsets = np.arange(-1, 3)
    idx = base[:, None] + offsets[None, :]
    w = cubic_weight(c[:, None] - idx, params)
    return np.clip(idx, 0, src_extent - 1), w


def _apply_taps(px: np.ndarray, idx: np.ndarray, w: np.ndarray, axis: int) -> np.ndarray:
    out = None
    for k in range(idx.shape[1]):
        if axis == 0:
            term = w[:, k, None] * px[idx[:, k], :]
        else:
            term = w[None, :, k] * px[:, idx[:, k]]
        out = term if out is None else out + term
    return out


def _finish(img: Image, px: np.ndarray, spec: ResizeSpec) -> Image:
    if spec.clamp_output:
        # clamp to the source's own range, itself inside value_range
        lo, hi = img.value_range
        lo = max(lo, float(img.pixels.min()))
        hi = min(hi, float(img.pixels.max()))
        px = np.clip(px, lo, hi)
    return Image(px, img.value_range)


def resize_nn(img: Image, spec: ResizeSpec) -> Image:
    h, w = img.pixels.shape
    rows = nn_indices(h, spec.target.height)
    cols = nn_indices(w, spec.target.width)
    return Image(img.pixels[np.ix_(rows, cols)], img.value_range)


def resize_bilinear(img: Image, spec: ResizeSpec) -> Image:
    h, w = img.pixels.shape
    ridx, rw = _linear_taps(h, spec.target.height)
    cidx, cw = _linear_taps(w, spec.target.width)
    px = _apply_taps(img.pixels, ridx, rw, axis=0)
    px = _apply_taps(px, cidx, cw, axis=1)
    return _finish(img, px, spec)


def resize_bicubic(img: Image, spec: ResizeSpec) -> Image:
    h, w = img.pixels.shape
    ridx, rw = _cubic_taps(h, spec.target.height, spec.cubic)
    cidx, cw = _cubic_taps(w, spec.target.width, spec.cubic)
    px = _apply_taps(img.pixels, ridx, rw, axis=0)
    px = _apply_taps(px, cidx, cw, axis=1)
    return _finish(img, px, spec)


RESAMPLERS = {
    "nn": resize_nn,
    "bilinear": resize_bilinear,
    "bicubic": resize_bicubic,
}


def resize(img: Image, spec: ResizeSpec, method: str = "bicubic") -> Image:
    try:
        fn = RESAMPLERS[method]
    except KeyError:
        raise ValueError(f"unknown resampler {method!r}; expected one of {sorted(RESAMPLERS)}") from None
    return fn(img, spec)
