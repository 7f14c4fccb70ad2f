"""Synthetic corpora for experiments and acceptance checks.

`lineage_corpus` plants independent style lineages over a year span.
Each work blends its lineage's style with fresh per-work noise:

    work = unit(w * style + (1 - w) * idiosyncrasy)

where `w` is the copy weight (how strongly the work copies the earlier
works that defined the lineage style), either constant or ramped
linearly over the span. The style itself is the lineage base vector,
optionally tinted per era: with `fad_strength > 0`, works of the same
lineage and era share a transient fad component on top of the base, so
near-contemporaries resemble each other more than distant lineage
members. The idiosyncrasy term carries a faint lineage tint so that even
low-copy-weight works lean toward their lineage.

A rising copy-weight schedule reproduces a declining disruption
trajectory in the similarity network: late works sit ever closer to the
shared style, so their followers are increasingly also followers of
their own influencers (N4 grows against N1). A constant schedule keeps
the local structure time-invariant, which shows up as a flat decadal
disruption profile in the style network.

Production volume can ramp linearly over the span (`density_ramp`, the
fractional difference between late and early yearly output), mirroring
corpora whose output grows over time. Artist identities rotate within
each lineage per era, several artists at a time, so chronological
neighbors are usually cross-artist pairs and survive the network
builders' same-artist exclusion.
"""

from __future__ import annotations

import numpy as np

from .corpus import ArtworkRecord, Corpus, make_corpus
from .embedding import FeatureMatrix


def _unit(v: np.ndarray) -> np.ndarray:
    return v / np.linalg.norm(v)


def lineage_corpus(
    n_works: int = 2000,
    n_lineages: int = 5,
    start_year: int = 1800,
    end_year: int = 1900,
    dim: int = 128,
    copy_weight: float | tuple[float, float] = (0.2, 0.9),
    lineage_tint: float = 0.25,
    density_ramp: float = 0.4,
    fad_strength: float = 0.0,
    era_years: int = 10,
    artists_per_era: int = 4,
    seed: int = 0,
) -> tuple[Corpus, FeatureMatrix]:
    """Generate a lineage-structured corpus plus its feature matrix.

    Years fall in [start_year, end_year); copy_weight is a constant or a
    (start, end) pair ramped linearly across the span. Deterministic for
    a fixed seed.
    """
    rng = np.random.default_rng(seed)
    span = end_year - start_year
    if isinstance(copy_weight, tuple):
        w_lo, w_hi = copy_weight
    else:
        w_lo = w_hi = float(copy_weight)

    bases = np.array([_unit(rng.standard_normal(dim)) for _ in range(n_lineages)])
    fads: dict[tuple[int, int], np.ndarray] = {}
    records = []
    for i in range(n_works):
        u = (i + 0.5) / n_works
        if abs(density_ramp) > 1e-12:
            # inverse CDF of a linear density profile over [0, 1)
            a = 1.0 - density_ramp / 2.0
            tau = (-a + np.sqrt(a * a + 2.0 * density_ramp * u)) / density_ramp
        else:
            tau = u
        year = start_year + int(tau * span)
        lineage = int(rng.integers(n_lineages))
        era = (year - start_year) // era_years
        weight = w_lo + (w_hi - w_lo) * (year - start_year) / span

        style = bases[lineage]
        if fad_strength > 0.0:
            key = (lineage, era)
            if key not in fads:
                fads[key] = _unit(rng.standard_normal(dim))
            style = _unit(bases[lineage] + fad_strength * fads[key])
        idiosyncrasy = _unit(
            lineage_tint * bases[lineage] + _unit(rng.standard_normal(dim))
        )
        vector = _unit(weight * style + (1.0 - weight) * idiosyncrasy)

        artist = f"L{lineage}E{era}A{int(rng.integers(artists_per_era))}"
        records.append(
            ArtworkRecord(
                f"w{i:05d}", artist, year, tuple(float(x) for x in vector)
            )
        )
    corpus = make_corpus(records)
    return corpus, FeatureMatrix.from_corpus(corpus)


def random_corpus(
    n_works: int,
    n_artists: int = 5,
    dim: int = 8,
    start_year: int = 1700,
    end_year: int = 1900,
    seed: int = 0,
) -> tuple[Corpus, FeatureMatrix]:
    """Unstructured corpus: uniform years and artists, Gaussian features."""
    rng = np.random.default_rng(seed)
    records = []
    for i in range(n_works):
        records.append(
            ArtworkRecord(
                f"r{i:05d}",
                f"artist{int(rng.integers(n_artists))}",
                int(rng.integers(start_year, end_year + 1)),
                tuple(rng.standard_normal(dim)),
            )
        )
    corpus = make_corpus(records)
    return corpus, FeatureMatrix.from_corpus(corpus)
