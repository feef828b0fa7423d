"""Experiment configuration and its flat ``key = value`` file format.

Recognised keys (all optional)::

    mode          synthetic | dataset
    dataset       directory with images/ and masks/      (dataset mode)
    shapes        number of synthetic shapes              (default 50)
    seed          integer                                 (default 0)
    source_size   WxH                                     (default 128x128)
    target_sizes  comma list of WxH                       (default 256x256,384x384)
    strategies    comma list of IMAGE-MASK pairs          (default NN-NN,BIC-NN,BIC-BIC)
    split         train,val,test fractions                (default 0.6,0.2,0.2)
    labels        comma list, priority order              (default 255,128,0)
    bf_tol        pixels, or "auto"                       (default auto)
    median_window odd integer >= 3                        (default 3)
    threshold     fraction in (0, 1)                      (default 0.5)
    format        csv | json                              (default csv)
    out           report path

Blank lines and lines starting with ``#`` are ignored.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field, replace
from pathlib import Path

from ..maskproc import MaskResizeStrategy, Strategy
from ..metrics import BFTolerance
from ..raster import LabelSet, Size

BASELINE = "NN-NN"
RESAMPLER_TOKENS = {"NN": "nn", "BIC": "bicubic", "BIL": "bilinear"}
MASK_TOKENS = {"NN": Strategy.NN, "BIC": Strategy.BIC_PROCESSED, "BIL": Strategy.BIL_PROCESSED}


def parse_strategy(name: str) -> tuple[str, Strategy]:
    """``"BIC-NN"`` -> (image resampler, mask strategy)."""
    parts = name.strip().upper().split("-")
    if len(parts) != 2 or parts[0] not in RESAMPLER_TOKENS or parts[1] not in MASK_TOKENS:
        raise ValueError(f"bad strategy {name!r}; expected IMAGE-MASK with tokens from {sorted(MASK_TOKENS)}")
    return RESAMPLER_TOKENS[parts[0]], MASK_TOKENS[parts[1]]


@dataclass(frozen=True)
class ExperimentConfig:
    mode: str = "synthetic"
    dataset: str | None = None
    shapes: int = 50
    seed: int = 0
    source_size: Size = Size(128, 128)
    target_sizes: tuple[Size, ...] = (Size(256, 256), Size(384, 384))
    strategies: tuple[str, ...] = ("NN-NN", "BIC-NN", "BIC-BIC")
    split: tuple[float, float, float] = (0.6, 0.2, 0.2)
    labels: LabelSet = field(default_factory=LabelSet)
    bf_tol: float | None = None
    median_window: int = 3
    threshold: float = 0.5
    format: str = "csv"
    out: str | None = None

    def __post_init__(self):
        if self.mode not in ("synthetic", "dataset"):
            raise ValueError(f"mode must be synthetic or dataset, got {self.mode!r}")
        if self.mode == "dataset" and not self.dataset:
            raise ValueError("dataset mode needs a dataset directory")
        if self.shapes < 0:
            raise ValueError(f"shapes must be >= 0, got {self.shapes}")
        if len(self.split) != 3 or any(f <= 0 for f in self.split) or abs(sum(self.split) - 1.0) > 1e-9:
            raise ValueError(f"split fractions must be three positive numbers summing to 1, got {self.split}")
        if self.format not in ("csv", "json"):
            raise ValueError(f"format must be csv or json, got {self.format!r}")
        names = tuple(s.strip().upper() for s in self.strategies)
        for s in names:
            parse_strategy(s)
        if BASELINE not in names:
            raise ValueError(f"strategies must include the {BASELINE} baseline")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate strategies in {names}")
        object.__setattr__(self, "strategies", names)
        BFTolerance(self.bf_tol)
        self.mask_strategy(Strategy.NN)

    def mask_strategy(self, tag: Strategy) -> MaskResizeStrategy:
        return MaskResizeStrategy(tag, median_window=self.median_window, threshold_level=self.threshold)

    @property
    def tolerance(self) -> BFTolerance:
        return BFTolerance(self.bf_tol)

    def canonical(self) -> str:
        """Stable text of the settings that determine report contents."""
        items = {
            "mode": self.mode,
            "dataset": self.dataset or "",
            "shapes": self.shapes,
            "seed": self.seed,
            "source_size": self.source_size,
            "target_sizes": ",".join(str(s) for s in self.target_sizes),
            "strategies": ",".join(self.strategies),
            "split": ",".join(repr(f) for f in self.split),
            "labels": self.labels,
            "bf_tol": "auto" if self.bf_tol is None else repr(self.bf_tol),
            "median_window": self.median_window,
            "threshold": repr(self.threshold),
        }
        return "\n".join(f"{k}={v}" for k, v in sorted(items.items()))

    def config_hash(self) -> str:
        return hashlib.sha256(self.canonical().encode()).hexdigest()[:16]

    def with_overrides(self, **kw) -> "ExperimentConfig":
        return replace(self, **{k: v for k, v in kw.items() if v is not None})


def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(v) for v in text.split(",") if v.strip())


_PARSERS = {
    "mode": str,
    "dataset": str,
    "shapes": int,
    "seed": int,
    "source_size": Size.parse,
    "target_sizes": lambda t: tuple(Size.parse(v) for v in t.split(",") if v.strip()),
    "strategies": lambda t: tuple(v.strip() for v in t.split(",") if v.strip()),
    "split": _floats,
    "labels": LabelSet.parse,
    "bf_tol": lambda t: None if t.lower() == "auto" else float(t),
    "median_window": int,
    "threshold": float,
    "format": lambda t: t.lower(),
    "out": str,
}


def parse_config_text(text: str, origin: str = "<config>") -> dict:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"{origin}:{lineno}: expected key = value")
        key, _, value = (s.strip() for s in line.partition("="))
        if key not in _PARSERS:
            raise ValueError(f"{origin}:{lineno}: unknown key {key!r}")
        try:
            values[key] = _PARSERS[key](value)
        except ValueError as exc:
            raise ValueError(f"{origin}:{lineno}: bad value for {key}: {exc}") from None
    return values


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    values = parse_config_text(path.read_text(), str(path))
    if "dataset" in values and "mode" not in values:
        values["mode"] = "dataset"
    return ExperimentConfig(**values)
