"""Label-safe mask resampling with bicubic/bilinear interpolation, plus segmentation scoring."""

__version__ = "0.1.0"

from .interp import CubicKernelParams, ResizeSpec, cubic_weight, map_coord, resize_bicubic, resize_bilinear, resize_nn
from .maskproc import MaskResizeStrategy, Strategy, mask_resize
from .raster import Image, LabelMask, LabelSet, Size, labels_to_image, mask_validate

__all__ = [
    "CubicKernelParams",
    "Image",
    "LabelMask",
    "LabelSet",
    "MaskResizeStrategy",
    "ResizeSpec",
    "Size",
    "Strategy",
    "cubic_weight",
    "labels_to_image",
    "map_coord",
    "mask_resize",
    "mask_validate",
    "resize_bicubic",
    "resize_bilinear",
    "resize_nn",
]
