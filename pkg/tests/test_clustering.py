import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from influence_graph.clustering import OTHER, ClusterAssignment, consolidate_small, exemplars, kmeans
from influence_graph.embedding import FeatureMatrix
from influence_graph.errors import ValidationError

from oracles import best_two_partition_sse


def matrix(rows):
    rows = np.asarray(rows, dtype=float)
    return FeatureMatrix(rows, tuple(f"p{i}" for i in range(rows.shape[0])))


def two_blobs(n_per=20, separation=50.0, seed=0):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((n_per, 3))
    b = rng.standard_normal((n_per, 3)) + separation
    return np.vstack([a, b])


def test_two_blobs_recovered():
    rows = two_blobs()
    result = kmeans(matrix(rows), 2, seed=1)
    labels = result.labels
    assert len(set(labels[:20])) == 1
    assert len(set(labels[20:])) == 1
    assert labels[0] != labels[20]


def test_kmeans_matches_brute_force_on_subsample():
    # exhaustive search over all 2-partitions of 10 points
    rng = np.random.default_rng(8)
    rows = np.vstack(
        [rng.standard_normal((5, 2)), rng.standard_normal((5, 2)) + 30.0]
    )
    best_sse, best_side = best_two_partition_sse(rows)
    result = kmeans(matrix(rows), 2, seed=5)
    got_side = frozenset(np.flatnonzero(result.labels == result.labels[0]).tolist())
    assert got_side in (best_side, frozenset(range(10)) - best_side)
    assert result.inertia == pytest.approx(best_sse, rel=1e-9)


def test_k_equals_n_gives_zero_inertia():
    rng = np.random.default_rng(2)
    rows = rng.standard_normal((7, 3))
    result = kmeans(matrix(rows), 7, seed=3)
    assert sorted(result.labels.tolist()) == list(range(7))
    assert result.inertia == 0.0


def test_kmeans_deterministic_for_fixed_seed():
    rows = two_blobs(seed=4)
    first = kmeans(matrix(rows), 4, seed=9)
    second = kmeans(matrix(rows), 4, seed=9)
    np.testing.assert_array_equal(first.labels, second.labels)
    np.testing.assert_array_equal(first.centroids, second.centroids)
    assert first.inertia == second.inertia


def test_inertia_non_increasing_between_stable_iterations():
    rng = np.random.default_rng(12)
    rows = rng.standard_normal((60, 4))
    result = kmeans(matrix(rows), 5, seed=21)
    history = result.inertia_history
    for i in range(1, len(history)):
        if i in result.repaired_iterations:
            continue
        assert history[i] <= history[i - 1] + 1e-9


def test_centroids_equal_member_means_at_convergence():
    rows = two_blobs(n_per=15, seed=6)
    result = kmeans(matrix(rows), 3, seed=2)
    for j in range(result.n_clusters):
        members = rows[result.labels == j]
        np.testing.assert_allclose(result.centroids[j], members.mean(axis=0), atol=1e-8)


def test_kmeans_rejects_bad_arguments():
    m = matrix([[0.0], [1.0]])
    with pytest.raises(ValidationError):
        kmeans(m, 3, seed=0)
    with pytest.raises(ValidationError):
        kmeans(m, 1, seed=0, max_iter=0)
    with pytest.raises(ValidationError):
        kmeans(m, 1, seed=0, tol=0.0)


def assignment_from_labels(labels, rows=None):
    labels = np.asarray(labels, dtype=np.int64)
    k = int(labels.max()) + 1 if (labels != OTHER).any() else 0
    if rows is None:
        rows = np.zeros((len(labels), 2))
    centroids = np.stack(
        [rows[labels == j].mean(axis=0) if (labels == j).any() else np.zeros(rows.shape[1]) for j in range(k)]
    ) if k else np.empty((0, 2))
    sse = np.zeros(k)
    for j in range(k):
        sse[j] = float(((rows[labels == j] - centroids[j]) ** 2).sum())
    return ClusterAssignment(labels, centroids, float(sse.sum()), sse)


def test_consolidate_paper_sizes_example():
    labels = [0] * 5 + [1] * 2 + [2]
    out = consolidate_small(assignment_from_labels(labels), 3)
    assert out.n_clusters == 1
    assert out.labels.tolist() == [0] * 5 + [OTHER] * 3


def test_consolidate_noop_renumbers_by_size():
    labels = [0] * 4 + [1] * 6  # both survive; larger cluster becomes 0
    out = consolidate_small(assignment_from_labels(labels), 3)
    assert out.labels.tolist() == [1] * 4 + [0] * 6
    assert out.n_clusters == 2


def test_consolidate_all_small_gives_empty_clusters():
    labels = [0, 0, 1, 1, 2]
    out = consolidate_small(assignment_from_labels(labels), 3)
    assert out.n_clusters == 0
    assert (out.labels == OTHER).all()


def test_consolidate_ties_break_by_original_label():
    labels = [0] * 5 + [1] * 5 + [2] * 4
    out = consolidate_small(assignment_from_labels(labels), 3)
    assert out.labels.tolist() == [0] * 5 + [1] * 5 + [2] * 4


@given(st.lists(st.integers(0, 6), min_size=1, max_size=60), st.integers(1, 5))
def test_consolidate_idempotent_and_threshold_respected(raw_labels, min_size):
    assignment = assignment_from_labels(raw_labels)
    once = consolidate_small(assignment, min_size)
    sizes = once.sizes()
    for label, size in sizes.items():
        if label != OTHER:
            assert size > min_size
    twice = consolidate_small(once, min_size)
    assert twice.labels.tolist() == once.labels.tolist()
    np.testing.assert_array_equal(twice.centroids, once.centroids)
    # consolidation never changes how many artworks exist
    assert len(once.labels) == len(raw_labels)


def test_consolidate_keeps_inertia_of_survivors():
    rng = np.random.default_rng(3)
    rows = rng.standard_normal((12, 2))
    labels = [0] * 8 + [1] * 4
    assignment = assignment_from_labels(labels, rows)
    out = consolidate_small(assignment, 4)
    assert out.n_clusters == 1
    assert out.inertia == pytest.approx(assignment.cluster_sse[0])


def test_exemplars_nearest_three():
    rows = np.array(
        [[0.0, 0.0], [1.0, 0.0], [2.0, 0.0], [3.0, 0.0], [100.0, 0.0], [101.0, 0.0],
         [102.0, 0.0], [103.0, 0.0]]
    )
    m = matrix(rows)
    result = kmeans(m, 2, seed=0)
    ranked = exemplars(m, result, count=3)
    assert len(ranked) == 2
    for ids in ranked:
        assert len(ids) == 3
    flat = {i for ids in ranked for i in ids}
    assert len(flat) == 6


def test_empty_cluster_repair_is_recorded():
    # force k=3 on two tight far-apart pairs plus a duplicate point; some
    # seeds leave a centroid empty mid-run and must repair it
    rows = np.array([[0.0, 0.0], [0.0, 0.0], [50.0, 0.0], [50.0, 0.0]])
    result = kmeans(matrix(rows), 3, seed=13)
    assert result.inertia >= 0.0
    assert len(result.labels) == 4
