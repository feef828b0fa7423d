from .config import ExperimentConfig, load_config
from .dataset import DatasetEntry, DatasetError, load_dataset, split_dataset
from .experiment import roundtrip_experiment, run_comparison
from .report import ComparisonReport, emit_report
from .synth import NestedEllipses, ShapeBounds, synth_mask
