"""Convolutional feature extractor for artwork corpora: fine-tunes an
artist classifier, taps early and late blocks, and emits the corpus CSV
pair consumed by the influence-graph pipeline.
"""

__version__ = "0.1.0"

from .config import BLOCK_CHANNELS, ConfigError, ExtractionConfig
from .data import DataError, Dataset, load_dataset
from .extract import extract_features, projection_matrix, run_extraction
from .model import ConvBackbone, build_model, freeze_before
from .train import TrainingReport, finetune, load_checkpoint, save_checkpoint

__all__ = [
    "BLOCK_CHANNELS",
    "ConfigError",
    "ConvBackbone",
    "DataError",
    "Dataset",
    "ExtractionConfig",
    "TrainingReport",
    "build_model",
    "extract_features",
    "finetune",
    "freeze_before",
    "load_checkpoint",
    "load_dataset",
    "projection_matrix",
    "run_extraction",
    "save_checkpoint",
]
