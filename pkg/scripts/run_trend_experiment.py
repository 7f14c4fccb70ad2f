#!/usr/bin/env python3
"""Decadal disruption trajectories on synthetic lineage corpora.

Runs the two generator regimes (rising copy weight vs constant copy
weight), builds the similarity and style networks, and prints the
per-decade mean disruption with Spearman trend statistics. Useful for
eyeballing how generator parameters move the trajectories.
"""

import argparse

from scipy.stats import spearmanr

from influence_graph.clustering import consolidate_small, kmeans
from influence_graph.metrics import decadal_report
from influence_graph.netbuild import build_isn, build_ssn
from influence_graph.synthetic import lineage_corpus


def show(title, graph, corpus):
    bins = decadal_report(graph, corpus, "d5")
    points = [(b.decade_start, b.mean, b.count, b.undefined_count) for b in bins]
    defined = [(d, m) for d, m, _, _ in points if m is not None]
    rho = spearmanr([d for d, _ in defined], [m for _, m in defined]).statistic
    print(f"\n{title}  (edges={len(graph.edges)}, spearman rho={rho:+.3f})")
    for decade, mean, count, undefined in points:
        shown = "   --  " if mean is None else f"{mean:+.3f}"
        print(f"  {decade}: mean d5 {shown}  n={count:4d}  undefined={undefined}")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n-works", type=int, default=2000)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--stable-seed", type=int, default=4)
    parser.add_argument("--percentile", type=float, default=90.0)
    args = parser.parse_args()

    corpus, feats = lineage_corpus(
        n_works=args.n_works, copy_weight=(0.2, 0.9), seed=args.seed
    )
    show(
        "rising copy weight 0.2->0.9, similarity network",
        build_isn(corpus, feats, args.percentile),
        corpus,
    )

    corpus, feats = lineage_corpus(
        n_works=args.n_works,
        copy_weight=0.55,
        fad_strength=0.8,
        artists_per_era=6,
        seed=args.stable_seed,
    )
    assignment = consolidate_small(kmeans(feats, 30, seed=args.stable_seed), 3)
    show(
        "constant copy weight 0.55, style network",
        build_ssn(corpus, feats, assignment, args.percentile),
        corpus,
    )


if __name__ == "__main__":
    main()
