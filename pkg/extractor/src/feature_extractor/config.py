"""Extraction configuration."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

#: channel widths of the five convolutional blocks
BLOCK_CHANNELS = (16, 32, 48, 64, 64)


class ConfigError(ValueError):
    pass


@dataclass
class ExtractionConfig:
    images: str
    labels: str
    out: str
    blocks: tuple[int, ...] = (1, 2, 5)
    width: int = 100
    epochs: int = 8
    trainable_cutoff: int = 5  # blocks >= cutoff are trained, earlier ones frozen
    batch_size: int = 8
    learning_rate: float = 1e-3
    image_size: int = 64
    val_fraction: float = 0.2
    seed: int = 0
    init_weights: str | None = None  # optional pretrained state dict
    deterministic: bool = True

    def validate(self) -> None:
        problems = []
        if not Path(self.images).is_dir():
            problems.append(f"image directory not found: {self.images}")
        if not Path(self.labels).is_file():
            problems.append(f"label file not found: {self.labels}")
        if not self.blocks:
            problems.append("at least one block must be tapped")
        for b in self.blocks:
            if not 1 <= b <= len(BLOCK_CHANNELS):
                problems.append(f"block {b} does not exist in the backbone (1..5)")
        if len(set(self.blocks)) != len(self.blocks):
            problems.append("duplicate blocks")
        if self.width < 1:
            problems.append(f"summary width must be >= 1, got {self.width}")
        if self.epochs < 1:
            problems.append(f"epochs must be >= 1, got {self.epochs}")
        if not 1 <= self.trainable_cutoff <= len(BLOCK_CHANNELS):
            problems.append(f"trainable cutoff must be in 1..5, got {self.trainable_cutoff}")
        if not 0.0 < self.val_fraction < 1.0:
            problems.append(f"val_fraction must be in (0, 1), got {self.val_fraction}")
        if self.image_size < 32:
            problems.append(f"image_size must be >= 32, got {self.image_size}")
        if self.init_weights and not Path(self.init_weights).is_file():
            problems.append(f"init weights not found: {self.init_weights}")
        if problems:
            raise ConfigError("; ".join(problems))

    @property
    def feature_dim(self) -> int:
        return len(self.blocks) * self.width
