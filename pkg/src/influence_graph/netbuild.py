"""Construction of the two artwork influence networks and their artist
projections.

Artwork-level edges always run old -> new between works by different
artists, so the graphs are strict DAGs; same-year pairs never get an edge
because no chronological direction exists for them. Edge weights are
cosine similarities and must be positive (non-positive similarity never
forms an influence edge).
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .clustering import OTHER, ClusterAssignment
from .corpus import Corpus
from .embedding import FeatureMatrix, percentile_threshold, unit_rows
from .errors import ComputationError, ValidationError

ISN = "ISN"
SSN = "SSN"
ARTIST = "ARTIST"

_BLOCK = 512


@dataclass(frozen=True)
class GraphNode:
    node_id: str
    kind: str  # "artwork" | "artist"
    artist_id: str
    year: int | None = None


@dataclass
class InfluenceGraph:
    """Directed weighted graph over artworks or artists.

    Edges are canonically sorted by (src, dst) and validated on
    construction: no self-edges, no duplicates, positive weights, and for
    artwork-level graphs strictly increasing years across each edge and
    distinct artists at both ends. Treat instances as immutable.
    """

    kind: str
    nodes: tuple[GraphNode, ...]
    edges: tuple[tuple[str, str, float], ...]

    def __post_init__(self):
        if self.kind not in (ISN, SSN, ARTIST):
            raise ValidationError(f"unknown graph kind {self.kind!r}")
        self.nodes = tuple(self.nodes)
        self.edges = tuple(sorted(self.edges, key=lambda e: (e[0], e[1])))
        by_id = {n.node_id: n for n in self.nodes}
        if len(by_id) != len(self.nodes):
            raise ValidationError("duplicate node ids")
        artwork_level = self.kind in (ISN, SSN)
        seen: set[tuple[str, str]] = set()
        for src, dst, weight in self.edges:
            if src == dst:
                raise ValidationError(f"self-edge at {src!r}")
            if (src, dst) in seen:
                raise ValidationError(f"duplicate edge {src!r}->{dst!r}")
            seen.add((src, dst))
            if src not in by_id or dst not in by_id:
                raise ValidationError(f"edge endpoint missing: {src!r}->{dst!r}")
            if not weight > 0.0:
                raise ValidationError(f"edge weight must be positive: {src!r}->{dst!r}")
            if artwork_level:
                a, b = by_id[src], by_id[dst]
                if weight > 1.0:
                    raise ValidationError(
                        f"artwork edge weight must be in (0,1]: {src!r}->{dst!r}"
                    )
                if a.year is None or b.year is None or a.year >= b.year:
                    raise ValidationError(f"edge not old->new: {src!r}->{dst!r}")
                if a.artist_id == b.artist_id:
                    raise ValidationError(f"same-artist edge: {src!r}->{dst!r}")

    @cached_property
    def node_by_id(self) -> dict[str, GraphNode]:
        return {n.node_id: n for n in self.nodes}

    @cached_property
    def successors(self) -> dict[str, tuple[str, ...]]:
        succ: dict[str, list[str]] = {n.node_id: [] for n in self.nodes}
        for src, dst, _ in self.edges:
            succ[src].append(dst)
        return {v: tuple(ws) for v, ws in succ.items()}

    @cached_property
    def predecessors(self) -> dict[str, tuple[str, ...]]:
        pred: dict[str, list[str]] = {n.node_id: [] for n in self.nodes}
        for src, dst, _ in self.edges:
            pred[dst].append(src)
        return {v: tuple(ws) for v, ws in pred.items()}

    def out_degree(self, node_id: str) -> int:
        return len(self.successors[node_id])


def _artwork_nodes(corpus: Corpus) -> tuple[GraphNode, ...]:
    return tuple(
        GraphNode(r.artwork_id, "artwork", r.artist_id, r.year)
        for r in corpus.records
    )


def _check_alignment(corpus: Corpus, features: FeatureMatrix) -> None:
    if features.row_ids != corpus.artwork_ids:
        raise ValidationError("feature matrix is not row-aligned with the corpus")


class _PairScan:
    """Block-parallel scan over admissible unordered pairs (i < j).

    Admissible means cross-artist and distinct-year, optionally further
    restricted to pairs sharing the same surviving cluster. Block order is
    canonical, so results are independent of the thread count.
    """

    def __init__(self, corpus: Corpus, units: np.ndarray, labels=None, threads: int = 1):
        self.units = units
        self.threads = max(1, threads)
        self.ids = corpus.artwork_ids
        self.artists = np.array([r.artist_id for r in corpus.records])
        self.years = np.array([r.year for r in corpus.records])
        self.labels = None if labels is None else np.asarray(labels)
        n = len(corpus)
        self.blocks = [(a, min(a + _BLOCK, n)) for a in range(0, n, _BLOCK)]

    def _mask(self, a: int, b: int) -> np.ndarray:
        cols = np.arange(len(self.ids))[None, :]
        rows = np.arange(a, b)[:, None]
        mask = cols > rows
        mask &= self.artists[a:b, None] != self.artists[None, :]
        mask &= self.years[a:b, None] != self.years[None, :]
        if self.labels is not None:
            mask &= self.labels[a:b, None] == self.labels[None, :]
            mask &= self.labels[a:b, None] != OTHER
        return mask

    def _map(self, fn):
        if self.threads > 1:
            with ThreadPoolExecutor(max_workers=self.threads) as pool:
                return list(pool.map(fn, self.blocks))
        return [fn(block) for block in self.blocks]

    def similarities(self) -> np.ndarray:
        def sims_for(block):
            a, b = block
            s = np.clip(self.units[a:b] @ self.units.T, -1.0, 1.0)
            return s[self._mask(a, b)]

        parts = self._map(sims_for)
        return np.concatenate(parts) if parts else np.empty(0)

    def edges(self, threshold: float | None) -> list[tuple[str, str, float]]:
        def edges_for(block):
            a, b = block
            s = np.clip(self.units[a:b] @ self.units.T, -1.0, 1.0)
            mask = self._mask(a, b)
            mask &= s > 0.0
            if threshold is not None:
                mask &= s >= threshold
            out = []
            for i_off, j in zip(*np.nonzero(mask)):
                i = a + int(i_off)
                j = int(j)
                weight = float(s[i_off, j])
                if self.years[i] < self.years[j]:
                    out.append((self.ids[i], self.ids[j], weight))
                else:
                    out.append((self.ids[j], self.ids[i], weight))
            return out

        return [e for part in self._map(edges_for) for e in part]


def _thresholded_edges(scan: _PairScan, percentile: float, apply_threshold: bool):
    threshold = None
    if apply_threshold:
        population = scan.similarities()
        if population.size:
            threshold = percentile_threshold(population, percentile)
    return scan.edges(threshold)


def build_isn(
    corpus: Corpus,
    features: FeatureMatrix,
    percentile: float = 90.0,
    threads: int = 1,
) -> InfluenceGraph:
    """Similarity network: every cross-artist, distinct-year pair whose
    cosine similarity reaches the nearest-rank percentile of exactly that
    pair population gets an edge old -> new, weighted by the similarity."""
    if not 0.0 < percentile < 100.0:
        raise ValidationError(f"percentile must be in (0, 100), got {percentile}")
    _check_alignment(corpus, features)
    if len(corpus.artist_index) < 2:
        raise ComputationError("network needs works by at least 2 artists")
    scan = _PairScan(corpus, unit_rows(features), threads=threads)
    edges = _thresholded_edges(scan, percentile, True)
    return InfluenceGraph(ISN, _artwork_nodes(corpus), tuple(edges))


def _chain_candidates(corpus: Corpus, assignment: ClusterAssignment) -> list[tuple[int, int]]:
    """Chronologically consecutive same-cluster pairs; consecutive pairs
    violating the cross-artist/distinct-year rules are dropped, not
    bridged."""
    order = sorted(
        range(len(corpus)),
        key=lambda i: (corpus.records[i].year, corpus.records[i].artwork_id),
    )
    pairs: set[tuple[int, int]] = set()
    for label in range(assignment.n_clusters):
        members = [i for i in order if assignment.labels[i] == label]
        for prev, nxt in zip(members, members[1:]):
            a, b = corpus.records[prev], corpus.records[nxt]
            if a.artist_id != b.artist_id and a.year != b.year:
                pairs.add((min(prev, nxt), max(prev, nxt)))
    return sorted(pairs)


def build_ssn(
    corpus: Corpus,
    features: FeatureMatrix,
    assignment: ClusterAssignment,
    percentile: float = 90.0,
    mode: str = "pairs",
    apply_threshold: bool = True,
    threads: int = 1,
) -> InfluenceGraph:
    """Style network: like the ISN but restricted to pairs inside the same
    surviving (non-OTHER) cluster, with the percentile threshold computed
    over that restricted pair population, pooled across clusters.

    mode="pairs" links all ordered same-cluster pairs; mode="chain" only
    chronologically consecutive ones. apply_threshold=False keeps every
    admissible pair. Artworks labeled OTHER take part in no edges.
    """
    if not 0.0 < percentile < 100.0:
        raise ValidationError(f"percentile must be in (0, 100), got {percentile}")
    if mode not in ("pairs", "chain"):
        raise ValidationError(f"ssn mode must be 'pairs' or 'chain', got {mode!r}")
    if len(assignment.labels) != len(corpus):
        raise ValidationError("cluster assignment does not cover the corpus")
    _check_alignment(corpus, features)
    if len(corpus.artist_index) < 2:
        raise ComputationError("network needs works by at least 2 artists")

    units = unit_rows(features)
    if mode == "pairs":
        scan = _PairScan(corpus, units, labels=assignment.labels, threads=threads)
        edges = _thresholded_edges(scan, percentile, apply_threshold)
        return InfluenceGraph(SSN, _artwork_nodes(corpus), tuple(edges))

    candidates = _chain_candidates(corpus, assignment)
    sims = np.array(
        [float(np.clip(units[i] @ units[j], -1.0, 1.0)) for i, j in candidates]
    )
    threshold = None
    if apply_threshold and sims.size:
        threshold = percentile_threshold(sims, percentile)
    ids = corpus.artwork_ids
    years = [r.year for r in corpus.records]
    edges = []
    for (i, j), s in zip(candidates, sims):
        if s <= 0.0 or (threshold is not None and s < threshold):
            continue
        if years[i] < years[j]:
            edges.append((ids[i], ids[j], float(s)))
        else:
            edges.append((ids[j], ids[i], float(s)))
    return InfluenceGraph(SSN, _artwork_nodes(corpus), tuple(edges))


def project_to_artists(g: InfluenceGraph) -> InfluenceGraph:
    """Collapse an artwork graph to artists, summing edge weights between
    each ordered pair of artists' bodies of work."""
    if g.kind not in (ISN, SSN):
        raise ValidationError(f"can only project artwork-level graphs, got {g.kind}")
    artists = sorted({n.artist_id for n in g.nodes})
    nodes = tuple(GraphNode(a, "artist", a, None) for a in artists)
    groups: dict[tuple[str, str], list[float]] = {}
    by_id = g.node_by_id
    for src, dst, weight in g.edges:
        key = (by_id[src].artist_id, by_id[dst].artist_id)
        groups.setdefault(key, []).append(weight)
    edges = tuple((a, b, math.fsum(ws)) for (a, b), ws in sorted(groups.items()))
    return InfluenceGraph(ARTIST, nodes, edges)
