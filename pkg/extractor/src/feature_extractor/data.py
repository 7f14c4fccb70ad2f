"""Dataset loading: label CSV plus an image directory.

Images are matched to label rows by artwork_id against the file stem;
undecodable or missing images are skipped with a warning and surfaced in
the run report rather than aborting the whole run.
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import torch
from PIL import Image

IMAGE_EXTENSIONS = (".png", ".jpg", ".jpeg", ".bmp", ".webp")


class DataError(ValueError):
    pass


@dataclass(frozen=True)
class LabeledImage:
    artwork_id: str
    artist_id: str
    year: int
    path: Path


@dataclass
class Dataset:
    items: list[LabeledImage]
    skipped: list[tuple[str, str]]  # (artwork_id, reason)
    classes: list[str]

    def class_index(self, artist_id: str) -> int:
        return self.classes.index(artist_id)


def read_labels(path) -> list[tuple[str, str, int]]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["artwork_id", "artist_id", "year"]:
            raise DataError(f"{path}: bad label header {header!r}")
        rows = []
        seen = set()
        for row in reader:
            if len(row) != 3:
                raise DataError(f"{path}: expected 3 columns, got {len(row)}")
            artwork_id, artist_id, year_text = row
            if artwork_id in seen:
                raise DataError(f"{path}: duplicate artwork_id {artwork_id!r}")
            seen.add(artwork_id)
            try:
                year = int(year_text)
            except ValueError as exc:
                raise DataError(f"{path}: unparseable year {year_text!r}") from exc
            rows.append((artwork_id, artist_id, year))
    if not rows:
        raise DataError(f"{path}: no label rows")
    return rows


def _find_image(directory: Path, artwork_id: str) -> Path | None:
    for ext in IMAGE_EXTENSIONS:
        candidate = directory / f"{artwork_id}{ext}"
        if candidate.is_file():
            return candidate
    return None


def load_dataset(images_dir, labels_path) -> Dataset:
    directory = Path(images_dir)
    items: list[LabeledImage] = []
    skipped: list[tuple[str, str]] = []
    for artwork_id, artist_id, year in read_labels(labels_path):
        path = _find_image(directory, artwork_id)
        if path is None:
            warnings.warn(f"no image file for {artwork_id}, skipping")
            skipped.append((artwork_id, "image file not found"))
            continue
        try:
            with Image.open(path) as img:
                img.verify()
        except Exception as exc:
            warnings.warn(f"undecodable image {path.name}: {exc}, skipping")
            skipped.append((artwork_id, f"undecodable: {exc}"))
            continue
        items.append(LabeledImage(artwork_id, artist_id, year, path))
    if not items:
        raise DataError("no usable images")
    items.sort(key=lambda it: it.artwork_id)
    classes = sorted({it.artist_id for it in items})
    return Dataset(items, skipped, classes)


def decode_image(path, size: int) -> torch.Tensor:
    """(3, size, size) float tensor in [0, 1]."""
    with Image.open(path) as img:
        rgb = img.convert("RGB").resize((size, size), Image.BILINEAR)
    array = np.asarray(rgb, dtype=np.float32) / 255.0
    return torch.from_numpy(array).permute(2, 0, 1).contiguous()


def image_batch(items: list[LabeledImage], size: int) -> torch.Tensor:
    return torch.stack([decode_image(it.path, size) for it in items])


def stratified_split(
    dataset: Dataset, val_fraction: float, seed: int
) -> tuple[list[int], list[int]]:
    """Per-artist shuffled split; every artist keeps at least one
    training image, and validation gets at least one image overall."""
    rng = np.random.default_rng(seed)
    train: list[int] = []
    val: list[int] = []
    for artist in dataset.classes:
        indices = [i for i, it in enumerate(dataset.items) if it.artist_id == artist]
        order = rng.permutation(len(indices))
        n_val = int(round(len(indices) * val_fraction))
        n_val = min(n_val, len(indices) - 1)
        for rank, j in enumerate(order):
            (val if rank < n_val else train).append(indices[j])
    if not val:
        val.append(train.pop())
    return sorted(train), sorted(val)
