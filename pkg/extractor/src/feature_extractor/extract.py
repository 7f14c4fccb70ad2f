"""Feature extraction: tap the configured blocks, pool each feature map
to its channel vector, project to the summary width with a fixed seeded
random matrix, and write the corpus CSV pair plus a manifest.

The per-block random projection stands in for a learned reduction: it is
deterministic for a given (seed, block) pair and independent of the
dataset, so re-running extraction reproduces identical features.
"""

from __future__ import annotations

import csv
import hashlib
import json
import sys
from pathlib import Path

import numpy as np
import torch

from .config import BLOCK_CHANNELS, ExtractionConfig
from .data import DataError, Dataset, image_batch, load_dataset


def projection_matrix(seed: int, block: int, channels: int, width: int) -> np.ndarray:
    """Fixed Gaussian projection (width x channels), seeded per block."""
    rng = np.random.default_rng((seed, block))
    return rng.standard_normal((width, channels)) / np.sqrt(channels)


def extract_features(
    model: torch.nn.Module,
    dataset: Dataset,
    config: ExtractionConfig,
) -> tuple[list[str], np.ndarray]:
    """Row-aligned (artwork_ids, features) sorted by artwork_id."""
    projections = {
        block: projection_matrix(config.seed, block, BLOCK_CHANNELS[block - 1], config.width)
        for block in config.blocks
    }
    items = sorted(dataset.items, key=lambda it: it.artwork_id)
    model.eval()
    rows = []
    with torch.no_grad():
        for i in range(0, len(items), config.batch_size):
            chunk = items[i : i + config.batch_size]
            activations = model.block_activations(
                image_batch(chunk, config.image_size), tuple(config.blocks)
            )
            parts = []
            for block, feature_map in zip(config.blocks, activations):
                pooled = feature_map.mean(dim=(2, 3)).numpy().astype(np.float64)
                parts.append(pooled @ projections[block].T)
            rows.append(np.concatenate(parts, axis=1))
    features = np.vstack(rows)
    if features.shape != (len(items), config.feature_dim):
        raise DataError(
            f"feature dimension drift: got {features.shape}, "
            f"expected ({len(items)}, {config.feature_dim})"
        )
    if not np.isfinite(features).all():
        raise DataError("non-finite activations during extraction")
    return [it.artwork_id for it in items], features


def write_corpus_csvs(dataset: Dataset, artwork_ids, features, out_dir) -> None:
    out = Path(out_dir)
    by_id = {it.artwork_id: it for it in dataset.items}
    with open(out / "metadata.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["artwork_id", "artist_id", "year"])
        for artwork_id in artwork_ids:
            item = by_id[artwork_id]
            writer.writerow([item.artwork_id, item.artist_id, item.year])
    with open(out / "features.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["artwork_id"] + [f"f{i}" for i in range(features.shape[1])])
        for artwork_id, row in zip(artwork_ids, features):
            writer.writerow([artwork_id] + [repr(float(v)) for v in row])


def _sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def write_manifest(config: ExtractionConfig, report, out_dir) -> None:
    manifest = {
        "config": {
            "images": config.images,
            "labels": config.labels,
            "blocks": list(config.blocks),
            "width": config.width,
            "epochs": config.epochs,
            "trainable_cutoff": config.trainable_cutoff,
            "image_size": config.image_size,
            "val_fraction": config.val_fraction,
            "seed": config.seed,
            "deterministic": config.deterministic,
            "init_weights": config.init_weights,
        },
        "labels_sha256": _sha256(config.labels),
        "feature_dim": config.feature_dim,
        "training": {
            "classes": report.classes,
            "n_images": report.n_images,
            "n_train": report.n_train,
            "n_val": report.n_val,
            "train_accuracy": report.train_accuracy,
            "val_accuracy": report.val_accuracy,
        },
        "skipped_images": report.skipped,
        "versions": {
            "torch": torch.__version__,
            "numpy": np.__version__,
            "python": ".".join(str(v) for v in sys.version_info[:3]),
        },
    }
    with open(Path(out_dir) / "extraction_manifest.json", "w", encoding="utf-8",
              newline="\n") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def run_extraction(config: ExtractionConfig) -> Path:
    """Fine-tune, extract, and write metadata.csv / features.csv /
    checkpoint / training report / manifest into the output directory."""
    from .train import finetune, save_checkpoint, write_report

    config.validate()
    out = Path(config.out)
    out.mkdir(parents=True, exist_ok=True)
    dataset = load_dataset(config.images, config.labels)
    model, report = finetune(config, dataset)
    save_checkpoint(model, dataset, config, out / "checkpoint.pt")
    write_report(report, out / "training_report.json")
    artwork_ids, features = extract_features(model, dataset, config)
    write_corpus_csvs(dataset, artwork_ids, features, out)
    write_manifest(config, report, out)
    return out
