"""`extract-features` command line interface."""

from __future__ import annotations

import argparse
import sys

from .config import ConfigError, ExtractionConfig
from .data import DataError
from .extract import run_extraction


def parse_blocks(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad block list {text!r}") from exc


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="extract-features",
        description=(
            "Fine-tune a convolutional artist classifier on labeled images "
            "and export per-artwork block features as corpus CSVs."
        ),
    )
    parser.add_argument("--images", required=True, help="directory of artwork images")
    parser.add_argument("--labels", required=True,
                        help="CSV with header artwork_id,artist_id,year")
    parser.add_argument("--out", required=True, help="output directory")
    parser.add_argument("--blocks", type=parse_blocks, default=(1, 2, 5),
                        help="comma-separated backbone blocks to tap (default 1,2,5)")
    parser.add_argument("--width", type=int, default=100,
                        help="per-block summary width (default 100)")
    parser.add_argument("--epochs", type=int, default=8)
    parser.add_argument("--trainable-cutoff", type=int, default=5,
                        help="first block that stays trainable (default 5)")
    parser.add_argument("--image-size", type=int, default=64)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--init-weights", help="optional pretrained state dict (.pt)")
    parser.add_argument("--no-deterministic", action="store_true",
                        help="allow nondeterministic kernels and threading")
    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    config = ExtractionConfig(
        images=args.images,
        labels=args.labels,
        out=args.out,
        blocks=args.blocks,
        width=args.width,
        epochs=args.epochs,
        trainable_cutoff=args.trainable_cutoff,
        image_size=args.image_size,
        seed=args.seed,
        init_weights=args.init_weights,
        deterministic=not args.no_deterministic,
    )
    try:
        out = run_extraction(config)
    except (ConfigError, DataError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {out / 'metadata.csv'} and {out / 'features.csv'}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
