"""Acceptance suite: one test per criterion, each printing a PASS/FAIL
line (run with `pytest tests/test_acceptance.py -v -s` to see them).

Criteria are checked at fixed tolerances and time budgets; the trend
criterion uses the documented synthetic lineage generator with frozen
seeds (see influence_graph.synthetic).
"""

import functools
import time
from pathlib import Path

import numpy as np
import pytest
from scipy.stats import spearmanr

from influence_graph.clustering import OTHER, consolidate_small, kmeans
from influence_graph.embedding import FeatureMatrix, fit_pca, percentile_threshold
from influence_graph.metrics import (
    all_disruption,
    betweenness,
    decadal_report,
    disruption,
)
from influence_graph.netbuild import (
    ISN,
    GraphNode,
    InfluenceGraph,
    build_isn,
    build_ssn,
    project_to_artists,
)
from influence_graph.pipeline import PipelineConfig, run_pipeline
from influence_graph.synthetic import lineage_corpus, random_corpus

from oracles import betweenness_by_path_enumeration, disruption_by_classification

FIXTURE = Path(__file__).parent / "data" / "fixture30"


def criterion(name):
    def wrap(fn):
        @functools.wraps(fn)
        def run(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                print(f"\n[ACCEPTANCE] FAIL {name}")
                raise
            print(f"\n[ACCEPTANCE] PASS {name}")
        return run
    return wrap


def random_digraph(rng, n, p=0.3):
    nodes = [f"n{i}" for i in range(n)]
    edges = tuple(
        (nodes[i], nodes[j], 1.0)
        for i in range(n)
        for j in range(n)
        if i != j and rng.random() < p
    )
    g_nodes = tuple(GraphNode(v, "artist", v) for v in nodes)
    return InfluenceGraph("ARTIST", g_nodes, edges)


def random_dag_graph(rng, n, p=0.3):
    nodes = tuple(
        GraphNode(f"n{i}", "artwork", f"artist-{i}", 1800 + i) for i in range(n)
    )
    edges = tuple(
        (f"n{i}", f"n{j}", 1.0)
        for i in range(n)
        for j in range(i + 1, n)
        if rng.random() < p
    )
    return InfluenceGraph(ISN, nodes, edges)


@criterion("betweenness oracle equivalence (200 graphs, <10 s)")
def test_betweenness_oracle_equivalence():
    rng = np.random.default_rng(2024)
    started = time.perf_counter()
    for _ in range(200):
        g = random_digraph(rng, int(rng.integers(2, 13)))
        got = betweenness(g)
        expected = betweenness_by_path_enumeration(
            [n.node_id for n in g.nodes], [(s, d) for s, d, _ in g.edges]
        )
        for v, value in got.items():
            assert abs(value - expected[v]) <= 1e-9
    assert time.perf_counter() - started < 10.0


@criterion("disruption oracle equivalence (200 DAGs, <5 s)")
def test_disruption_oracle_equivalence():
    rng = np.random.default_rng(2025)
    started = time.perf_counter()
    for _ in range(200):
        g = random_dag_graph(rng, int(rng.integers(2, 13)))
        nodes = [n.node_id for n in g.nodes]
        edges = [(s, d) for s, d, _ in g.edges]
        bulk = all_disruption(g)
        for v in nodes:
            expected = disruption_by_classification(nodes, edges, v)
            assert bulk[v] == expected
            d5, c5 = expected
            assert c5 == g.out_degree(v)
            if d5 is not None:
                assert -1.0 <= d5 <= 1.0
    assert time.perf_counter() - started < 5.0


@criterion("worked-example fidelity (projection 1.5, diamond 0.5, triad -1)")
def test_worked_examples():
    # artist projection: influences 1 and 0.5 aggregate to exactly 1.5
    nodes = (
        GraphNode("a1", "artwork", "A", 1800),
        GraphNode("a2", "artwork", "A", 1801),
        GraphNode("b1", "artwork", "B", 1820),
        GraphNode("b2", "artwork", "B", 1821),
    )
    g = InfluenceGraph(ISN, nodes, (("a1", "b1", 1.0), ("a1", "b2", 0.5)))
    assert project_to_artists(g).edges == (("A", "B", 1.5),)

    # diamond: both middle nodes sit on one of the two shortest paths
    diamond = InfluenceGraph(
        "ARTIST",
        tuple(GraphNode(v, "artist", v) for v in "abcd"),
        (("a", "b", 1.0), ("a", "c", 1.0), ("b", "d", 1.0), ("c", "d", 1.0)),
    )
    cb = betweenness(diamond)
    assert cb["b"] == pytest.approx(0.5, abs=1e-12)
    assert cb["c"] == pytest.approx(0.5, abs=1e-12)

    # p->v, p->w, v->w: v's sole follower is shared with its influencer
    triad = InfluenceGraph(
        "ARTIST",
        tuple(GraphNode(v, "artist", v) for v in "pvw"),
        (("p", "v", 1.0), ("p", "w", 1.0), ("v", "w", 1.0)),
    )
    assert disruption(triad, "v") == (-1.0, 1)


@criterion("DAG and exclusion invariants (100 corpora, <30 s)")
def test_dag_and_exclusion_invariants():
    started = time.perf_counter()
    for seed in range(100):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(10, 201))
        corpus, feats = random_corpus(n, n_artists=5, dim=6, seed=seed + 10_000)
        assignment = consolidate_small(kmeans(feats, min(6, n), seed=seed), 3)
        isn = build_isn(corpus, feats, percentile=90.0)
        ssn = build_ssn(corpus, feats, assignment, percentile=90.0)
        artists = corpus.artist_of()
        years = corpus.year_of()
        labels = dict(zip(corpus.artwork_ids, assignment.labels))
        for g in (isn, ssn):
            # acyclic via topological consumption
            indeg = {v.node_id: len(g.predecessors[v.node_id]) for v in g.nodes}
            ready = [v for v, d in indeg.items() if d == 0]
            seen = 0
            while ready:
                v = ready.pop()
                seen += 1
                for w in g.successors[v]:
                    indeg[w] -= 1
                    if indeg[w] == 0:
                        ready.append(w)
            assert seen == len(g.nodes)
            for s, d, _ in g.edges:
                assert artists[s] != artists[d]
                assert years[s] != years[d]
        for s, d, _ in ssn.edges:
            assert labels[s] == labels[d]
            assert labels[s] != OTHER
    assert time.perf_counter() - started < 30.0


@criterion("numeric kernels (PCA orthonormal, k-means monotone, percentile)")
def test_numeric_kernels():
    rng = np.random.default_rng(7)
    for _ in range(50):
        n, d = int(rng.integers(3, 25)), int(rng.integers(2, 10))
        k = int(rng.integers(1, min(n, d) + 1))
        rows = rng.standard_normal((n, d)) * rng.uniform(0.1, 5.0)
        m = FeatureMatrix(rows, tuple(f"r{i}" for i in range(n)))
        model = fit_pca(m, k)
        gram = model.components @ model.components.T
        assert np.abs(gram - np.eye(k)).max() <= 1e-8
        assert (np.diff(model.explained_variance) <= 1e-12).all()

    rows = rng.standard_normal((80, 5))
    m = FeatureMatrix(rows, tuple(f"p{i}" for i in range(80)))
    first = kmeans(m, 6, seed=11)
    second = kmeans(m, 6, seed=11)
    assert (first.labels == second.labels).all()
    assert (first.centroids == second.centroids).all()
    history = first.inertia_history
    for i in range(1, len(history)):
        if i not in first.repaired_iterations:
            assert history[i] <= history[i - 1] + 1e-9

    values = list(rng.standard_normal(37))
    thresholds = [percentile_threshold(values, p) for p in np.linspace(1, 99, 25)]
    assert all(a <= b for a, b in zip(thresholds, thresholds[1:]))


@criterion("qualitative trend reproduction (<2 min at n=2000)")
def test_qualitative_trend_reproduction():
    started = time.perf_counter()

    def decade_rho(g, corpus):
        bins = decadal_report(g, corpus, "d5")
        points = [(b.decade_start, b.mean) for b in bins if b.mean is not None]
        decades = [p[0] for p in points]
        means = [p[1] for p in points]
        return spearmanr(decades, means).statistic

    # rising copy weight: disruption of the similarity network declines
    corpus, feats = lineage_corpus(
        n_works=2000, copy_weight=(0.2, 0.9), seed=0
    )
    declining = decade_rho(build_isn(corpus, feats, percentile=90.0), corpus)
    assert declining < -0.5, f"expected declining trend, got rho={declining:+.3f}"

    # constant copy weight: style-network disruption stays trendless
    corpus, feats = lineage_corpus(
        n_works=2000, copy_weight=0.55, fad_strength=0.8, artists_per_era=6, seed=4
    )
    assignment = consolidate_small(kmeans(feats, 30, seed=4), 3)
    stable = decade_rho(build_ssn(corpus, feats, assignment, percentile=90.0), corpus)
    assert abs(stable) < 0.5, f"expected stable trend, got rho={stable:+.3f}"

    assert time.perf_counter() - started < 120.0


@criterion("end-to-end determinism (byte-identical reruns incl. manifest)")
def test_end_to_end_determinism(tmp_path):
    def config(out):
        return PipelineConfig(
            metadata=str(FIXTURE / "metadata.csv"),
            features=str(FIXTURE / "features.csv"),
            out=str(out),
            pca_k=3,
            kmeans_k=4,
            min_cluster_size=3,
            min_works=1,
            seed=42,
        )

    first, second = tmp_path / "first", tmp_path / "second"
    run_pipeline(config(first))
    run_pipeline(config(second))
    first_files = {p.name: p.read_bytes() for p in sorted(first.iterdir())}
    second_files = {p.name: p.read_bytes() for p in sorted(second.iterdir())}
    assert first_files == second_files
    assert "manifest.json" in first_files
