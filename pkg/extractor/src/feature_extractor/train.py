"""Fine-tuning: train the unfrozen tail of the backbone to classify
artworks by artist, report held-out accuracy, save a checkpoint."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass

import torch
from torch import nn

from .config import ExtractionConfig
from .data import DataError, Dataset, image_batch, load_dataset, stratified_split
from .model import build_model, freeze_before


@dataclass
class TrainingReport:
    n_images: int
    n_train: int
    n_val: int
    classes: list[str]
    train_accuracy: float
    val_accuracy: float
    epochs: int
    skipped: list[tuple[str, str]]


def _apply_determinism(config: ExtractionConfig) -> None:
    if config.deterministic:
        torch.use_deterministic_algorithms(True)
        torch.set_num_threads(1)
    torch.manual_seed(config.seed)


def _accuracy(model, images, labels, batch_size) -> float:
    model.eval()
    correct = 0
    with torch.no_grad():
        for i in range(0, len(images), batch_size):
            logits = model(images[i : i + batch_size])
            correct += int((logits.argmax(dim=1) == labels[i : i + batch_size]).sum())
    return correct / len(images)


def finetune(
    config: ExtractionConfig, dataset: Dataset | None = None
) -> tuple[torch.nn.Module, TrainingReport]:
    config.validate()
    if dataset is None:
        dataset = load_dataset(config.images, config.labels)
    if len(dataset.classes) < 2:
        raise DataError(
            f"need at least 2 artists to fine-tune, got {len(dataset.classes)}"
        )
    for artist in dataset.classes:
        count = sum(1 for it in dataset.items if it.artist_id == artist)
        if count < 2:
            raise DataError(f"artist {artist!r} has {count} image(s); need >= 2")

    _apply_determinism(config)
    model = build_model(len(dataset.classes), config.seed, config.init_weights)
    freeze_before(model, config.trainable_cutoff)

    train_idx, val_idx = stratified_split(dataset, config.val_fraction, config.seed)
    train_items = [dataset.items[i] for i in train_idx]
    val_items = [dataset.items[i] for i in val_idx]
    train_images = image_batch(train_items, config.image_size)
    val_images = image_batch(val_items, config.image_size)
    train_labels = torch.tensor([dataset.class_index(it.artist_id) for it in train_items])
    val_labels = torch.tensor([dataset.class_index(it.artist_id) for it in val_items])

    trainable = [p for p in model.parameters() if p.requires_grad]
    optimizer = torch.optim.Adam(trainable, lr=config.learning_rate)
    order_rng = torch.Generator().manual_seed(config.seed)
    model.train()
    for _ in range(config.epochs):
        permutation = torch.randperm(len(train_images), generator=order_rng)
        for i in range(0, len(permutation), config.batch_size):
            batch = permutation[i : i + config.batch_size]
            optimizer.zero_grad()
            loss = nn.functional.cross_entropy(
                model(train_images[batch]), train_labels[batch]
            )
            loss.backward()
            optimizer.step()

    report = TrainingReport(
        n_images=len(dataset.items),
        n_train=len(train_items),
        n_val=len(val_items),
        classes=dataset.classes,
        train_accuracy=_accuracy(model, train_images, train_labels, config.batch_size),
        val_accuracy=_accuracy(model, val_images, val_labels, config.batch_size),
        epochs=config.epochs,
        skipped=dataset.skipped,
    )
    return model, report


def save_checkpoint(model, dataset: Dataset, config: ExtractionConfig, path) -> None:
    torch.save(
        {
            "state_dict": model.state_dict(),
            "classes": dataset.classes,
            "blocks": list(config.blocks),
            "image_size": config.image_size,
        },
        path,
    )


def load_checkpoint(path) -> tuple[torch.nn.Module, dict]:
    payload = torch.load(path, map_location="cpu", weights_only=True)
    model = build_model(len(payload["classes"]), seed=0)
    model.load_state_dict(payload["state_dict"])
    return model, payload


def write_report(report: TrainingReport, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(asdict(report), fh, indent=2, sort_keys=True)
        fh.write("\n")
