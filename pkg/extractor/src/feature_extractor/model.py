"""Compact VGG-style backbone: five tappable convolutional blocks
(stacked 3x3 convolutions, each block closed by a 2x2 max-pool) with a
small classification head on global average pooling.

There is no pretrained-weight download here; the backbone initializes
from the seed unless a state dict is supplied. Fine-tuning freezes every
block before the trainable cutoff, mirroring the usual frozen-early /
trainable-late transfer setup.
"""

from __future__ import annotations

import torch
from torch import nn

from .config import BLOCK_CHANNELS


def _block(in_channels: int, out_channels: int, convs: int) -> nn.Sequential:
    layers: list[nn.Module] = []
    for i in range(convs):
        layers.append(nn.Conv2d(in_channels if i == 0 else out_channels,
                                out_channels, 3, padding=1))
        layers.append(nn.ReLU(inplace=True))
    layers.append(nn.MaxPool2d(2))
    return nn.Sequential(*layers)


class ConvBackbone(nn.Module):
    """blocks[i] maps the previous feature map to BLOCK_CHANNELS[i]."""

    def __init__(self, n_classes: int):
        super().__init__()
        convs_per_block = (2, 2, 1, 1, 2)
        blocks = []
        in_channels = 3
        for out_channels, convs in zip(BLOCK_CHANNELS, convs_per_block):
            blocks.append(_block(in_channels, out_channels, convs))
            in_channels = out_channels
        self.blocks = nn.ModuleList(blocks)
        self.head = nn.Linear(BLOCK_CHANNELS[-1], n_classes)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        for block in self.blocks:
            x = block(x)
        pooled = x.mean(dim=(2, 3))
        return self.head(pooled)

    def block_activations(self, x: torch.Tensor, taps: tuple[int, ...]) -> list[torch.Tensor]:
        """Feature maps after each tapped block (1-based indices)."""
        wanted = set(taps)
        out: dict[int, torch.Tensor] = {}
        for number, block in enumerate(self.blocks, start=1):
            x = block(x)
            if number in wanted:
                out[number] = x
        return [out[b] for b in taps]


def build_model(n_classes: int, seed: int, init_weights: str | None = None) -> ConvBackbone:
    torch.manual_seed(seed)
    model = ConvBackbone(n_classes)
    if init_weights:
        state = torch.load(init_weights, map_location="cpu", weights_only=True)
        missing, unexpected = model.load_state_dict(state, strict=False)
        head_keys = {k for k in missing if k.startswith("head.")}
        if set(missing) - head_keys or unexpected:
            raise ValueError(
                f"checkpoint does not match the backbone: missing={missing} "
                f"unexpected={unexpected}"
            )
    return model


def freeze_before(model: ConvBackbone, cutoff: int) -> None:
    """Freeze blocks 1..cutoff-1; blocks >= cutoff and the head train."""
    for number, block in enumerate(model.blocks, start=1):
        requires = number >= cutoff
        for parameter in block.parameters():
            parameter.requires_grad_(requires)
    for parameter in model.head.parameters():
        parameter.requires_grad_(True)
