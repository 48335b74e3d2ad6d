import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import best_of_restarts_sse
from treesvm.clustering import ClusterResult, kmeans2, majority_partition, per_class_sse
from treesvm.data_io import Dataset, synth_blobs


def test_two_blobs():
    cr = kmeans2(np.array([[0.0], [0.1], [10.0], [10.1]]), seed=0)
    a = cr.assignment
    assert a[0] == a[1] and a[2] == a[3] and a[0] != a[2]
    got = sorted(cr.centroids[:, 0])
    assert got == pytest.approx([0.05, 10.05])
    assert cr.total_sse == pytest.approx(4 * 0.05**2)


def test_accepts_flat_points():
    cr = kmeans2([0.0, 0.1, 10.0, 10.1], seed=3)
    assert cr.centroids.shape == (2, 1)


def test_identical_points_error():
    with pytest.raises(ValueError, match="distinct"):
        kmeans2(np.ones((5, 2)), seed=0)
    with pytest.raises(ValueError):
        kmeans2(np.ones((1, 2)), seed=0)


@settings(max_examples=50, deadline=None)
@given(st.integers(3, 60), st.integers(1, 4), st.integers(0, 2**31))
def test_sse_monotone_and_consistent(n, d, seed):
    pts = np.random.default_rng(seed).standard_normal((n, d))
    cr = kmeans2(pts, seed)
    h = cr.sse_history
    assert all(b <= a + 1e-9 * max(1.0, a) for a, b in zip(h, h[1:]))
    direct = sum(((pts[i] - cr.centroids[cr.assignment[i]]) ** 2).sum() for i in range(n))
    assert cr.total_sse == pytest.approx(direct, rel=1e-12)
    assert set(cr.assignment.tolist()) == {0, 1}


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**31))
def test_deterministic(seed):
    pts = np.random.default_rng(seed).standard_normal((40, 3))
    a, b = kmeans2(pts, seed), kmeans2(pts, seed)
    assert np.array_equal(a.assignment, b.assignment)
    assert np.array_equal(a.centroids, b.centroids)
    assert a.sse_history == b.sse_history


@pytest.mark.parametrize("seed", range(10))
def test_near_best_of_restarts(seed):
    pts = np.random.default_rng(100 + seed).standard_normal((50, 2))
    ref = best_of_restarts_sse(pts, restarts=50, seed=seed)
    assert kmeans2(pts, seed).total_sse <= 1.05 * ref


def test_empty_cluster_repair():
    # both seeds sit with one group, the other cluster empties and must be refilled
    pts = np.array([[0.0], [0.0], [0.0], [1.0]])
    cr = kmeans2(pts, seed=0)
    assert set(cr.assignment.tolist()) == {0, 1}
    assert cr.assignment[3] != cr.assignment[0]


def _cr(assignment, centroids):
    return ClusterResult(np.asarray(centroids, dtype=float), np.asarray(assignment), 0.0)


def test_majority_rule_and_tie():
    y = np.array([7] * 10 + [8] * 10)
    X = np.zeros((20, 1))
    # label 7: 8 of 10 in cluster 0; label 8: 5/5
    assign = [0] * 8 + [1] * 2 + [0] * 5 + [1] * 5
    part = majority_partition(Dataset(X, y), _cr(assign, [[0.0], [1.0]]))
    # both want the left side; the weaker majority (label 8, 0.5) is moved right
    assert part.left_labels == (7,)
    assert part.right_labels == (8,)


def test_tie_goes_left():
    y = np.array([1, 1, 2, 2, 3, 3, 3])
    X = np.zeros((7, 1))
    assign = [0, 1, 1, 1, 1, 1, 0]  # label 1 is 1/1, labels 2, 3 go right
    part = majority_partition(Dataset(X, y), _cr(assign, [[0.0], [1.0]]))
    assert part.left_labels == (1,)
    assert set(part.right_labels) == {2, 3}


def test_one_side_repair_prefers_larger_id_on_ratio_tie():
    y = np.array([1, 1, 2, 2, 3, 3])
    X = np.zeros((6, 1))
    part = majority_partition(Dataset(X, y), _cr([0] * 6, [[0.0], [1.0]]))
    assert part.right_labels == (3,)
    assert part.left_labels == (1, 2)


def test_isolated_label():
    ds = synth_blobs(3, 20, 2, 0.05, seed=1, spacing=1.0)
    # move label 3 far away so 2-means isolates it
    X = ds.X.copy()
    X[ds.y == 3] += 20.0
    ds = Dataset(X, ds.y)
    part = majority_partition(ds, kmeans2(ds.X, 0))
    sides = [set(part.left_labels), set(part.right_labels)]
    assert {3} in sides and {1, 2} in sides


def test_sse_ordering_ascending():
    X = np.array([[0.0], [0.0], [3.0], [3.0], [1.0], [1.0], [10.0]])
    y = np.array([5, 5, 6, 6, 4, 4, 9])
    ds = Dataset(X, y)
    part = majority_partition(ds, _cr([0, 0, 0, 0, 0, 0, 1], [[0.0], [10.0]]))
    # SSE vs centroid 0: label 5 -> 0, label 4 -> 2, label 6 -> 18
    assert part.left_labels == (5, 4, 6)
    assert part.sse == {5: 0.0, 4: 2.0, 6: 18.0, 9: 0.0}


def test_sse_ties_by_label():
    X = np.array([[1.0], [-1.0], [5.0]])
    y = np.array([3, 2, 1])
    part = majority_partition(Dataset(X, y), _cr([0, 0, 1], [[0.0], [5.0]]))
    assert part.left_labels == (2, 3)


def test_per_class_sse_examples():
    ds = Dataset(np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 2.0], [4.0, 4.0]]), np.array([1, 2, 2, 3]))
    sse = per_class_sse(ds, [1, 2], [0.0, 0.0])
    assert sse[1] == 0.0
    assert sse[2] == 5.0
    with pytest.raises(ValueError):
        per_class_sse(ds, [4], [0.0, 0.0])
    with pytest.raises(ValueError):
        per_class_sse(ds, [1], [0.0])


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31))
def test_per_class_sse_sums_to_cluster_sse(seed):
    # labels are constructed so every member of a cluster has a label assigned to it
    rng = np.random.default_rng(seed)
    X = np.vstack([rng.normal(0, 0.1, (15, 2)), rng.normal(5, 0.1, (15, 2))])
    y = np.array([1] * 7 + [2] * 8 + [3] * 6 + [4] * 9)
    ds = Dataset(X, y)
    cr = kmeans2(X, seed)
    part = majority_partition(ds, cr)
    for c, side in ((0, part.left_labels), (1, part.right_labels)):
        total = sum(part.sse[lab] for lab in side)
        assert total == pytest.approx(cr.cluster_sse(X, c), rel=1e-9)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 8), st.integers(0, 2**31))
def test_partition_invariants(n_labels, seed):
    ds = synth_blobs(n_labels, 6, 2, 0.3, seed)
    part = majority_partition(ds, kmeans2(ds.X, seed))
    left, right = set(part.left_labels), set(part.right_labels)
    assert left and right and not left & right
    assert left | right == set(ds.label_alphabet)
    for side in (part.left_labels, part.right_labels):
        keys = [(part.sse[lab], lab) for lab in side]
        assert keys == sorted(keys)
