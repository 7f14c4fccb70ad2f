#!/usr/bin/env python3
"""Regenerate the bundled 30-artwork fixture under tests/data/fixture30/.

Three tight style blobs (plus two deliberate outliers that should fold
into the 'other' cluster), five artists, eight decades. Deterministic;
re-running must reproduce the checked-in files byte for byte.
"""

from pathlib import Path

import numpy as np

from influence_graph.corpus import ArtworkRecord, make_corpus, write_corpus

OUT = Path(__file__).resolve().parent.parent / "tests" / "data" / "fixture30"

BLOBS = {
    0: np.array([10.0, 0.0, 0.0, 1.0, 0.0, 0.0]),
    1: np.array([0.0, 10.0, 0.0, 0.0, 1.0, 0.0]),
    2: np.array([0.0, 0.0, 10.0, 0.0, 0.0, 1.0]),
}


def main() -> None:
    rng = np.random.default_rng(20240201)
    records = []
    for i in range(28):
        blob = i % 3
        artist = f"artist{i % 5}"
        year = 1800 + (i * 80) // 28  # spread over 1800-1879
        vec = BLOBS[blob] + rng.normal(0.0, 0.35, size=6)
        records.append(
            ArtworkRecord(
                f"art{i:02d}", artist, year, tuple(float(round(v, 6)) for v in vec)
            )
        )
    # two nearby outliers far from every blob: their own cluster of size
    # 2 <= min_cluster_size, destined for 'other'
    for j in range(2):
        vec = np.array([-8.0, -8.0, 8.0, -1.0, 2.0, -2.0])
        vec = vec + rng.normal(0.0, 0.25, size=6)
        records.append(
            ArtworkRecord(
                f"art{28 + j:02d}",
                f"artist{j}",
                1840 + j,
                tuple(float(round(v, 6)) for v in vec),
            )
        )
    corpus = make_corpus(records)
    OUT.mkdir(parents=True, exist_ok=True)
    write_corpus(corpus, OUT / "metadata.csv", OUT / "features.csv")
    print(f"wrote {len(corpus)} artworks to {OUT}")


if __name__ == "__main__":
    main()
