"""Node metrics on influence graphs: betweenness centrality, the
disruption index with influence counts, modularity communities, and the
decadal / year-difference reports.

Betweenness and disruption ignore edge weights (they count paths and
neighbors); weights enter only community detection, where they act as
connection strengths with direction ignored.
"""

from __future__ import annotations

import csv
import math
from bisect import bisect_right
from collections import Counter, deque
from dataclasses import dataclass

import numpy as np

from .corpus import Corpus
from .errors import ValidationError
from .netbuild import ARTIST, InfluenceGraph

UNDEFINED = None  # disruption with empty neighborhood denominator


@dataclass(frozen=True)
class NodeMetric:
    node_id: str
    betweenness: float
    d5: float | None
    c5: int
    community: int | None = None


def betweenness(g: InfluenceGraph) -> dict[str, float]:
    """Unnormalized directed betweenness over unweighted shortest paths,
    via Brandes' accumulation: C_B(v) = sum over s != v != t of
    sigma_st(v) / sigma_st, skipping unreachable (sigma_st = 0) pairs."""
    if not g.nodes:
        raise ValidationError("betweenness of an empty graph")
    order = sorted(n.node_id for n in g.nodes)
    adj = {v: sorted(g.successors[v]) for v in order}
    cb = {v: 0.0 for v in order}
    for s in order:
        stack: list[str] = []
        preds: dict[str, list[str]] = {v: [] for v in order}
        sigma = dict.fromkeys(order, 0)
        dist = dict.fromkeys(order, -1)
        sigma[s] = 1
        dist[s] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            stack.append(v)
            for w in adj[v]:
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue.append(w)
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        delta = dict.fromkeys(order, 0.0)
        while stack:
            w = stack.pop()
            for v in preds[w]:
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w])
            if w != s:
                cb[w] += delta[w]
    return cb


def _window_filter(g: InfluenceGraph, focal: str, window: int | None):
    if window is None:
        return lambda u: True
    if g.kind == ARTIST:
        raise ValidationError("windowed disruption needs artwork-level years")
    if window < 0:
        raise ValidationError(f"window_years must be >= 0, got {window}")
    horizon = g.node_by_id[focal].year + window
    by_id = g.node_by_id
    return lambda u: by_id[u].year <= horizon


def disruption(g: InfluenceGraph, focal: str) -> tuple[float | None, int]:
    """(D5, C5) for the focal node.

    With Succ the out-neighbors, Pred the in-neighbors, and
    P* = union of Succ(p) over p in Pred(focal), minus the focal itself:
    N1 = |Succ \\ P*|, N4 = |Succ & P*|, N2 = |P* \\ Succ|,
    C5 = N1 + N4 and D5 = (N1 - N4) / (N1 + N4 + N2), UNDEFINED when the
    denominator is zero.
    """
    return disruption_windowed(g, focal, None)


def disruption_windowed(
    g: InfluenceGraph, focal: str, window_years: int | None
) -> tuple[float | None, int]:
    """Like disruption, with every successor set restricted to nodes dated
    at most year(focal) + window_years. None means unrestricted."""
    if focal not in g.node_by_id:
        raise ValidationError(f"unknown node {focal!r}")
    keep = _window_filter(g, focal, window_years)
    succ = {u for u in g.successors[focal] if keep(u)}
    pstar: set[str] = set()
    for p in g.predecessors[focal]:
        pstar.update(u for u in g.successors[p] if keep(u))
    pstar.discard(focal)
    n1 = len(succ - pstar)
    n4 = len(succ & pstar)
    n2 = len(pstar - succ)
    denominator = n1 + n4 + n2
    if denominator == 0:
        return UNDEFINED, n1 + n4
    return (n1 - n4) / denominator, n1 + n4


def all_disruption(
    g: InfluenceGraph, window_years: int | None = None
) -> dict[str, tuple[float | None, int]]:
    """(D5, C5) for every node, computed with per-node successor bitmasks
    so large graphs stay fast. Agrees exactly with disruption_windowed."""
    if window_years is not None and g.kind == ARTIST:
        raise ValidationError("windowed disruption needs artwork-level years")
    if window_years is not None and window_years < 0:
        raise ValidationError(f"window_years must be >= 0, got {window_years}")
    ids = [n.node_id for n in g.nodes]
    index = {v: i for i, v in enumerate(ids)}
    succ_mask = [0] * len(ids)
    for src, dst, _ in g.edges:
        succ_mask[index[src]] |= 1 << index[dst]

    horizon_for = None
    if window_years is not None:
        by_year = sorted(range(len(ids)), key=lambda i: g.nodes[i].year)
        years_sorted = [g.nodes[i].year for i in by_year]
        prefix = [0]
        for i in by_year:
            prefix.append(prefix[-1] | (1 << i))

        def horizon_for(year: int) -> int:
            return prefix[bisect_right(years_sorted, year + window_years)]

    out: dict[str, tuple[float | None, int]] = {}
    for i, v in enumerate(ids):
        horizon = -1 if horizon_for is None else horizon_for(g.nodes[i].year)
        succ = succ_mask[i] & horizon
        pstar = 0
        for p in g.predecessors[v]:
            pstar |= succ_mask[index[p]]
        pstar &= horizon
        pstar &= ~(1 << i)
        n1 = (succ & ~pstar).bit_count()
        n4 = (succ & pstar).bit_count()
        n2 = (pstar & ~succ).bit_count()
        denominator = n1 + n4 + n2
        d5 = UNDEFINED if denominator == 0 else (n1 - n4) / denominator
        out[v] = (d5, n1 + n4)
    return out


def _undirected_weights(g: InfluenceGraph) -> dict[str, dict[str, float]]:
    adj: dict[str, dict[str, float]] = {n.node_id: {} for n in g.nodes}
    for src, dst, weight in g.edges:
        adj[src][dst] = adj[src].get(dst, 0.0) + weight
        adj[dst][src] = adj[dst].get(src, 0.0) + weight
    return adj


def modularity(
    adj: dict[str, dict[str, float]], labels: dict[str, int]
) -> float:
    """Weighted undirected Newman modularity of a partition."""
    m2 = math.fsum(w for nbrs in adj.values() for w in nbrs.values())
    if m2 == 0.0:
        return 0.0
    degree = {u: math.fsum(nbrs.values()) for u, nbrs in adj.items()}
    q = 0.0
    for u, nbrs in adj.items():
        for v, w in nbrs.items():
            if labels[u] == labels[v]:
                q += w - degree[u] * degree[v] / m2
    return q / m2


def _local_moving(adj, degree, m2) -> tuple[dict, bool]:
    """One Louvain level: greedy moves in ascending node order until no
    node improves. Moves need a strictly positive gain (beyond a small
    epsilon), so the pass count is finite."""
    community = {u: u for u in adj}
    sigma_tot = {u: degree[u] for u in adj}
    improved = False
    moved = True
    while moved:
        moved = False
        for u in sorted(adj):
            c_old = community[u]
            sigma_tot[c_old] -= degree[u]
            links: dict = {}
            for v, w in adj[u].items():
                if v != u:
                    links[community[v]] = links.get(community[v], 0.0) + w
            stay_gain = links.get(c_old, 0.0) - sigma_tot[c_old] * degree[u] / m2
            best_c, best_gain = c_old, stay_gain
            for c in sorted(links):
                gain = links[c] - sigma_tot[c] * degree[u] / m2
                if gain > best_gain + 1e-12:
                    best_c, best_gain = c, gain
            community[u] = best_c
            sigma_tot[best_c] += degree[u]
            if best_c != c_old:
                moved = True
                improved = True
    return community, improved


def _aggregate(level_adj, community) -> tuple[dict, dict]:
    """Collapse communities into supernodes (renumbered in order of first
    appearance over ascending node order). Internal pair weights land on
    the supernode self-loop once; existing self-loops carry over whole."""
    renumber: dict = {}
    for u in sorted(level_adj):
        c = community[u]
        if c not in renumber:
            renumber[c] = len(renumber)
    new_adj: dict = {c: {} for c in range(len(renumber))}
    for u, nbrs in level_adj.items():
        cu = renumber[community[u]]
        for v, w in nbrs.items():
            cv = renumber[community[v]]
            if u == v:
                new_adj[cu][cu] = new_adj[cu].get(cu, 0.0) + w
            elif cu == cv:
                # undirected pair appears from both endpoints; halve it
                new_adj[cu][cu] = new_adj[cu].get(cu, 0.0) + w / 2.0
            else:
                new_adj[cu][cv] = new_adj[cu].get(cv, 0.0) + w
    return new_adj, renumber


def communities(g: InfluenceGraph, seed: int = 0) -> dict[str, int]:
    """Greedy modularity maximization (Louvain local moving + aggregation)
    with edge weights as strengths and direction ignored.

    Nodes are always visited in ascending node_id order, which makes the
    result fully deterministic; the seed is accepted for interface
    stability but never consulted.
    """
    del seed
    if not g.nodes:
        raise ValidationError("community detection on an empty graph")
    node_ids = sorted(n.node_id for n in g.nodes)
    adj = _undirected_weights(g)
    m2 = math.fsum(w for nbrs in adj.values() for w in nbrs.values())
    if m2 == 0.0:
        return {v: i for i, v in enumerate(node_ids)}

    membership = {v: v for v in node_ids}  # original node -> supernode
    level_adj: dict = {v: dict(adj[v]) for v in node_ids}
    while True:
        degree = {
            u: math.fsum(nbrs.values()) + nbrs.get(u, 0.0)
            for u, nbrs in level_adj.items()
        }
        community, improved = _local_moving(level_adj, degree, m2)
        if not improved:
            break
        level_adj, renumber = _aggregate(level_adj, community)
        membership = {v: renumber[community[membership[v]]] for v in node_ids}

    final: dict[str, int] = {}
    relabel: dict = {}
    for v in node_ids:
        c = membership[v]
        if c not in relabel:
            relabel[c] = len(relabel)
        final[v] = relabel[c]
    return final


@dataclass(frozen=True)
class DecadeBin:
    """Metric values of artworks created within one decade."""

    decade_start: int
    values: tuple[float, ...]
    count: int
    mean: float | None
    variance: float | None
    histogram: tuple[int, ...]
    bin_edges: tuple[float, ...]
    undefined_count: int = 0


def _decade(year: int) -> int:
    return (year // 10) * 10


def decadal_report(
    g: InfluenceGraph,
    corpus: Corpus,
    metric: str,
    d5_window: int | None = None,
) -> list[DecadeBin]:
    """Per-decade distribution of a node metric over artwork years.

    UNDEFINED d5 values are excluded from the distribution and counted
    separately. Bins cover every decade of the corpus year span, empty
    ones included. Histograms share fixed bin edges across decades:
    20 bins over [-1, 1] for d5, 20 bins over [0, max] for betweenness.
    Variance is the population variance.
    """
    if g.kind == ARTIST:
        raise ValidationError("decadal report needs an artwork-level graph")
    if metric == "betweenness":
        values = {v: (b, False) for v, b in betweenness(g).items()}
    elif metric == "d5":
        values = {
            v: (d5, d5 is UNDEFINED)
            for v, (d5, _) in all_disruption(g, d5_window).items()
        }
    else:
        raise ValidationError(f"unknown metric {metric!r}; expected betweenness or d5")

    if metric == "d5":
        edges = np.linspace(-1.0, 1.0, 21)
    else:
        top = max((v for v, und in values.values() if not und), default=0.0)
        edges = np.linspace(0.0, top if top > 0 else 1.0, 21)

    years = {r.artwork_id: r.year for r in corpus.records}
    per_decade: dict[int, list[float]] = {}
    undefined: Counter = Counter()
    for node in g.nodes:
        decade = _decade(years[node.node_id])
        value, is_undefined = values[node.node_id]
        if is_undefined:
            undefined[decade] += 1
        else:
            per_decade.setdefault(decade, []).append(value)

    first = _decade(min(years.values()))
    last = _decade(max(years.values()))
    bins = []
    for start in range(first, last + 10, 10):
        vals = sorted(per_decade.get(start, []))
        if vals:
            arr = np.array(vals)
            mean = float(arr.mean())
            variance = float(arr.var())
            histogram = tuple(int(c) for c in np.histogram(arr, bins=edges)[0])
        else:
            mean = None
            variance = None
            histogram = (0,) * (len(edges) - 1)
        bins.append(
            DecadeBin(
                decade_start=start,
                values=tuple(vals),
                count=len(vals),
                mean=mean,
                variance=variance,
                histogram=histogram,
                bin_edges=tuple(float(e) for e in edges),
                undefined_count=undefined.get(start, 0),
            )
        )
    return bins


def year_difference_distribution(g: InfluenceGraph) -> dict[int, int]:
    """1-year-bin histogram of year(dst) - year(src) over all edges; every
    difference is >= 1 because artwork graphs are strict DAGs."""
    if g.kind == ARTIST:
        raise ValidationError("year differences need an artwork-level graph")
    by_id = g.node_by_id
    counts = Counter(by_id[dst].year - by_id[src].year for src, dst, _ in g.edges)
    return dict(sorted(counts.items()))


def compute_node_metrics(
    g: InfluenceGraph, seed: int, d5_window: int | None = None
) -> list[NodeMetric]:
    """Full per-node metric table in node order; windows apply only to
    artwork-level graphs (ARTIST graphs are always unwindowed)."""
    window = None if g.kind == ARTIST else d5_window
    cb = betweenness(g)
    d5c5 = all_disruption(g, window)
    comm = communities(g, seed)
    return [
        NodeMetric(
            node_id=n.node_id,
            betweenness=cb[n.node_id],
            d5=d5c5[n.node_id][0],
            c5=d5c5[n.node_id][1],
            community=comm[n.node_id],
        )
        for n in g.nodes
    ]


def _fmt(x: float | None) -> str:
    return "" if x is None else f"{x:.9g}"


def write_metrics_csv(rows: list[NodeMetric], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["node_id", "betweenness", "d5", "c5", "community"])
        for r in rows:
            writer.writerow(
                [r.node_id, _fmt(r.betweenness), _fmt(r.d5), r.c5,
                 "" if r.community is None else r.community]
            )


def write_decade_csv(bins: list[DecadeBin], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["decade", "count", "mean", "variance", "undefined_count"])
        for b in bins:
            writer.writerow(
                [b.decade_start, b.count, _fmt(b.mean), _fmt(b.variance),
                 b.undefined_count]
            )


def write_decade_long_csv(bins: list[DecadeBin], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["decade", "value"])
        for b in bins:
            for value in b.values:
                writer.writerow([b.decade_start, _fmt(value)])


def write_year_diff_csv(histogram: dict[int, int], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["year_diff", "count"])
        for diff, count in sorted(histogram.items()):
            writer.writerow([diff, count])
