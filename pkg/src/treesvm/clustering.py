"""2-means split of the root training set and the label partition derived from it."""

from dataclasses import dataclass, field

import numpy as np


@dataclass
class ClusterResult:
    centroids: np.ndarray  # (2, d)
    assignment: np.ndarray  # (n,) in {0, 1}
    total_sse: float
    sse_history: list = field(default_factory=list)
    n_iter: int = 0

    def cluster_sse(self, points, c):
        members = np.asarray(points)[self.assignment == c]
        return float(((members - self.centroids[c]) ** 2).sum())


@dataclass
class LabelPartition:
    left_labels: tuple
    right_labels: tuple
    sse: dict


def _sq_dists(points, centroids):
    return ((points[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)


def _assign(points, centroids):
    d2 = _sq_dists(points, centroids)
    # ties go to cluster 0
    assignment = (d2[:, 1] < d2[:, 0]).astype(np.int64)
    return assignment, float(d2[np.arange(len(points)), assignment].sum())


def _sse(points, centroids, assignment):
    diff = points - centroids[assignment]
    return float((diff * diff).sum())


def _lloyd(points, first, max_iter, tol):
    far = int(np.argmax(((points - points[first]) ** 2).sum(axis=1)))
    centroids = points[[first, far]].copy()
    assignment, _ = _assign(points, centroids)
    history = []
    n_iter = 0
    for n_iter in range(1, max_iter + 1):
        new = centroids.copy()
        for c in (0, 1):
            members = points[assignment == c]
            if len(members):
                new[c] = members.mean(axis=0)
            else:
                # reseed with the point farthest from the surviving centroid
                other = new[1 - c]
                new[c] = points[np.argmax(((points - other) ** 2).sum(axis=1))]
        shift = float(np.sqrt(((new - centroids) ** 2).sum(axis=1)).max())
        centroids = new
        assignment, _ = _assign(points, centroids)
        history.append(_sse(points, centroids, assignment))
        if shift < tol:
            break

    for c in (0, 1):
        if not np.any(assignment == c):
            # both centroids collapsed onto one side; split off the farthest point
            other = centroids[1 - c]
            far = int(np.argmax(((points - other) ** 2).sum(axis=1)))
            assignment[far] = c
            centroids[c] = points[far]
    return ClusterResult(centroids, assignment, _sse(points, centroids, assignment), history, n_iter)


def kmeans2(points, seed, max_iter=100, tol=1e-6, n_init=10):
    """Lloyd's algorithm with k=2 and farthest-pair seeding.

    Each start draws a point under ``seed`` and pairs it with the point
    farthest from it; ``n_init`` distinct starts are run and the lowest
    final SSE wins (earliest start on ties). ``sse_history[t]`` is the
    winning run's SSE after iteration t.
    """
    points = np.asarray(points, dtype=np.float64)
    if points.ndim == 1:
        points = points[:, None]
    if len(points) < 2 or np.all(points == points[0]):
        raise ValueError("k-means needs at least 2 distinct points")
    rng = np.random.default_rng(seed)
    starts = rng.choice(len(points), size=min(n_init, len(points)), replace=False)
    best = None
    for first in starts:
        cr = _lloyd(points, int(first), max_iter, tol)
        if best is None or cr.total_sse < best.total_sse:
            best = cr
    return best


def per_class_sse(ds, labels_in_node, centroid):
    """SSE of each label's instances against one shared centroid."""
    centroid = np.asarray(centroid, dtype=np.float64)
    if centroid.shape != (ds.d,):
        raise ValueError(f"centroid has shape {centroid.shape}, data has {ds.d} features")
    out = {}
    for label in labels_in_node:
        members = ds.X[ds.y == label]
        if len(members) == 0:
            raise ValueError(f"label {label} has no instances")
        out[int(label)] = float(((members - centroid) ** 2).sum())
    return out


def majority_partition(ds, cr):
    """Send each label to the cluster holding the majority of its instances.

    A 50/50 split goes to cluster 0 (left). If every label lands on one side,
    the label with the weakest majority moves across. Each side is then sorted
    by per-class SSE against its own cluster centroid, ties by label id.
    """
    if len(cr.assignment) != ds.n:
        raise ValueError("cluster assignment does not align with dataset")
    labels = sorted(int(v) for v in np.unique(ds.y))
    side = {}
    ratio = {}
    for label in labels:
        a = cr.assignment[ds.y == label]
        in_right = int(a.sum())
        in_left = len(a) - in_right
        side[label] = 1 if in_right > in_left else 0
        ratio[label] = max(in_left, in_right) / len(a)
    if len(labels) >= 2 and len(set(side.values())) == 1:
        # weakest majority; among equals, the larger label id moves
        mover = min(labels, key=lambda lab: (ratio[lab], -lab))
        side[mover] = 1 - side[mover]

    sse = {}
    for c in (0, 1):
        members = [lab for lab in labels if side[lab] == c]
        sse.update(per_class_sse(ds, members, cr.centroids[c]))
    left = tuple(sorted((lab for lab in labels if side[lab] == 0), key=lambda lab: (sse[lab], lab)))
    right = tuple(sorted((lab for lab in labels if side[lab] == 1), key=lambda lab: (sse[lab], lab)))
    return LabelPartition(left, right, sse)
