"""Style clustering: seeded k-means++ with Lloyd iterations, plus
consolidation of small clusters into the reserved OTHER bucket.

Distances are Euclidean in the (reduced) feature space. Everything is
deterministic given the seed: assignment ties break to the lowest
centroid index, and an empty cluster is repaired by reseeding its
centroid at the point currently farthest from its assigned centroid.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .embedding import FeatureMatrix
from .errors import ValidationError

#: Reserved label for artworks folded out of small clusters.
OTHER = -1


@dataclass(frozen=True)
class ClusterAssignment:
    """Per-artwork labels plus centroids of the surviving clusters.

    labels[i] is a dense cluster index >= 0 or OTHER. cluster_sse holds
    each surviving cluster's within-cluster sum of squares, so inertia
    stays consistent under consolidation without re-touching the data.
    """

    labels: np.ndarray
    centroids: np.ndarray
    inertia: float
    cluster_sse: np.ndarray
    inertia_history: tuple[float, ...] = ()
    repaired_iterations: frozenset[int] = frozenset()

    def __post_init__(self):
        labels = np.array(self.labels, dtype=np.int64)
        labels.flags.writeable = False
        object.__setattr__(self, "labels", labels)
        centroids = np.array(self.centroids, dtype=np.float64)
        centroids.flags.writeable = False
        object.__setattr__(self, "centroids", centroids)
        sse = np.array(self.cluster_sse, dtype=np.float64)
        sse.flags.writeable = False
        object.__setattr__(self, "cluster_sse", sse)

    @property
    def n_clusters(self) -> int:
        return self.centroids.shape[0]

    def sizes(self) -> dict[int, int]:
        labels, counts = np.unique(self.labels, return_counts=True)
        return {int(l): int(c) for l, c in zip(labels, counts)}


def _sq_dists(x: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    # (n, k) squared Euclidean distances, computed stably.
    diff = x[:, None, :] - centroids[None, :, :]
    return np.einsum("nkd,nkd->nk", diff, diff)


def _plusplus_init(x: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = x.shape[0]
    chosen = [int(rng.integers(n))]
    d2 = ((x - x[chosen[0]]) ** 2).sum(axis=1)
    while len(chosen) < k:
        total = float(d2.sum())
        if total > 0.0:
            idx = int(rng.choice(n, p=d2 / total))
        else:
            # all remaining mass sits on already-chosen points
            idx = next(i for i in range(n) if i not in set(chosen))
        chosen.append(idx)
        d2 = np.minimum(d2, ((x - x[idx]) ** 2).sum(axis=1))
    return x[chosen].copy()


def kmeans(
    m: FeatureMatrix,
    k: int,
    seed: int,
    max_iter: int = 300,
    tol: float = 1e-6,
) -> ClusterAssignment:
    """Lloyd iterations from seeded k-means++ start.

    Stops when the largest centroid movement drops below tol or after
    max_iter assignment/update rounds. Returned centroids are exactly the
    means of their member points under the returned labels.
    """
    if not 1 <= k <= m.n:
        raise ValidationError(f"k={k} out of range [1, {m.n}]")
    if max_iter < 1:
        raise ValidationError(f"max_iter must be >= 1, got {max_iter}")
    if tol <= 0:
        raise ValidationError(f"tol must be > 0, got {tol}")

    x = m.rows
    rng = np.random.default_rng(seed)
    centroids = _plusplus_init(x, k, rng)

    history: list[float] = []
    repaired: set[int] = set()
    labels = np.zeros(m.n, dtype=np.int64)
    for iteration in range(max_iter):
        d2 = _sq_dists(x, centroids)
        labels = np.argmin(d2, axis=1)  # ties -> lowest centroid index

        empty = [j for j in range(k) if not np.any(labels == j)]
        if empty:
            repaired.add(iteration)
            taken: dict[int, int] = {}
            for j in empty:
                assigned = d2[np.arange(m.n), labels].copy()
                assigned[list(taken)] = -np.inf
                far = int(np.argmax(assigned))
                taken[far] = j
                centroids[j] = x[far]
            d2 = _sq_dists(x, centroids)
            labels = np.argmin(d2, axis=1)
            # a duplicate point could tie back to a lower-indexed centroid
            # and leave the repaired cluster empty; pin the seed point
            for far, j in taken.items():
                labels[far] = j

        history.append(float(d2[np.arange(m.n), labels].sum()))
        new_centroids = np.stack(
            [x[labels == j].mean(axis=0) if np.any(labels == j) else centroids[j]
             for j in range(k)]
        )
        movement = float(np.sqrt(((new_centroids - centroids) ** 2).sum(axis=1)).max())
        centroids = new_centroids
        if movement < tol:
            break

    sse = np.zeros(k)
    d2 = _sq_dists(x, centroids)
    for j in range(k):
        sse[j] = float(d2[labels == j, j].sum())
    return ClusterAssignment(
        labels=labels,
        centroids=centroids,
        inertia=float(sse.sum()),
        cluster_sse=sse,
        inertia_history=tuple(history),
        repaired_iterations=frozenset(repaired),
    )


def consolidate_small(assignment: ClusterAssignment, min_size: int) -> ClusterAssignment:
    """Relabel every cluster of size <= min_size to OTHER.

    Survivors are renumbered densely in order of descending size (ties by
    incoming label); their centroids are kept, OTHER has none. Idempotent.
    """
    if min_size < 1:
        raise ValidationError(f"min_size must be >= 1, got {min_size}")
    sizes = assignment.sizes()
    survivors = sorted(
        (l for l in sizes if l != OTHER and sizes[l] > min_size),
        key=lambda l: (-sizes[l], l),
    )
    remap = {old: new for new, old in enumerate(survivors)}
    labels = np.array(
        [remap.get(int(l), OTHER) for l in assignment.labels], dtype=np.int64
    )
    centroids = (
        assignment.centroids[survivors]
        if survivors
        else np.empty((0, assignment.centroids.shape[1]))
    )
    sse = assignment.cluster_sse[survivors] if survivors else np.empty(0)
    return ClusterAssignment(
        labels=labels,
        centroids=centroids,
        inertia=float(sse.sum()),
        cluster_sse=sse,
        inertia_history=assignment.inertia_history,
        repaired_iterations=assignment.repaired_iterations,
    )


def exemplars(
    m: FeatureMatrix, assignment: ClusterAssignment, count: int = 3
) -> list[list[str]]:
    """Per surviving cluster, the `count` member artworks nearest its
    centroid, nearest first (ties by artwork_id)."""
    out: list[list[str]] = []
    for j in range(assignment.n_clusters):
        members = np.flatnonzero(assignment.labels == j)
        d2 = ((m.rows[members] - assignment.centroids[j]) ** 2).sum(axis=1)
        ranked = sorted(zip(d2, (m.row_ids[i] for i in members)))
        out.append([artwork_id for _, artwork_id in ranked[:count]])
    return out
