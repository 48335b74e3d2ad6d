"""Multiclass decompositions: CBTS tree, one-versus-one, one-versus-all."""

import math
from dataclasses import dataclass, field

import numpy as np

from .clustering import kmeans2, majority_partition
from .svm_binary import fit_arrays

STRATEGIES = ("cbts", "ovo", "ova")


@dataclass(eq=False)
class CbtsNode:
    """Leaf when ``label`` is set; otherwise an internal node with an SVM.

    The SVM's positive side is ``left_labels``.
    """

    label: int | None = None
    model: object = None
    left: "CbtsNode | None" = None
    right: "CbtsNode | None" = None
    left_labels: tuple = ()
    right_labels: tuple = ()

    @property
    def is_leaf(self):
        return self.label is not None

    def internal_nodes(self):
        """Internal nodes in preorder."""
        if self.is_leaf:
            return []
        return [self] + self.left.internal_nodes() + self.right.internal_nodes()

    def leaves(self):
        if self.is_leaf:
            return [self.label]
        return self.left.leaves() + self.right.leaves()

    def depth(self):
        """Number of SVM evaluations on the longest root-to-leaf path."""
        if self.is_leaf:
            return 0
        return 1 + max(self.left.depth(), self.right.depth())

    def topology(self):
        if self.is_leaf:
            return str(self.label)
        return f"({self.left.topology()} {self.right.topology()})"


@dataclass(eq=False)
class MulticlassModel:
    kernel: object
    C: float
    label_alphabet: tuple

    strategy = ""

    @property
    def n_classes(self):
        return len(self.label_alphabet)

    def binary_models(self):
        raise NotImplementedError

    def predict(self, Z):
        raise NotImplementedError

    @property
    def converged(self):
        return all(m.converged for m in self.binary_models())


@dataclass(eq=False)
class CbtsModel(MulticlassModel):
    root: CbtsNode = None
    root_sse: dict = field(default_factory=dict)

    strategy = "cbts"

    def binary_models(self):
        return [node.model for node in self.root.internal_nodes()]

    def predict(self, Z, return_path_lengths=False):
        Z = _as_batch(Z, self)
        labels = np.empty(len(Z), dtype=np.int64)
        path = np.zeros(len(Z), dtype=np.int64)
        _route(self.root, Z, np.arange(len(Z)), labels, path, 0)
        if return_path_lengths:
            return labels, path
        return labels


@dataclass(eq=False)
class OvoModel(MulticlassModel):
    models: dict = field(default_factory=dict)  # (a, b) with a < b -> model, +1 means a

    strategy = "ovo"

    def binary_models(self):
        return list(self.models.values())

    def predict(self, Z):
        Z = _as_batch(Z, self)
        labels = sorted(self.label_alphabet)
        col = {lab: c for c, lab in enumerate(labels)}
        votes = np.zeros((len(Z), len(labels)), dtype=np.int64)
        margin = np.zeros((len(Z), len(labels)))
        rows = np.arange(len(Z))
        for (a, b), m in self.models.items():
            dv = m.decision_function(Z)
            winner = np.where(dv >= 0.0, col[a], col[b])
            votes[rows, winner] += 1
            margin[rows, winner] += np.abs(dv)
        # most votes, then largest margin sum, then smallest label
        best = np.empty(len(Z), dtype=np.int64)
        for r in range(len(Z)):
            top = np.flatnonzero(votes[r] == votes[r].max())
            if len(top) > 1:
                top = top[margin[r, top] == margin[r, top].max()]
            best[r] = top[0]
        return np.asarray(labels, dtype=np.int64)[best]


@dataclass(eq=False)
class OvaModel(MulticlassModel):
    models: dict = field(default_factory=dict)  # label -> model, +1 means that label

    strategy = "ova"

    def binary_models(self):
        return list(self.models.values())

    def decision_matrix(self, Z):
        Z = _as_batch(Z, self)
        labels = sorted(self.models)
        return labels, np.column_stack([self.models[lab].decision_function(Z) for lab in labels])

    def predict(self, Z):
        labels, scores = self.decision_matrix(Z)
        # argmax returns the first maximum, i.e. the smallest label
        return np.asarray(labels, dtype=np.int64)[np.argmax(scores, axis=1)]


def _as_batch(Z, model):
    Z = np.atleast_2d(np.asarray(Z, dtype=np.float64))
    d = model.binary_models()[0].d
    if Z.shape[1] != d:
        raise ValueError(f"dimension mismatch: model expects {d} features, got {Z.shape[1]}")
    return Z


def _route(node, Z, idx, labels, path, depth):
    if node.is_leaf:
        labels[idx] = node.label
        path[idx] = depth
        return
    if len(idx) == 0:
        return
    go_left = node.model.decision_function(Z[idx]) >= 0.0
    _route(node.left, Z, idx[go_left], labels, path, depth + 1)
    _route(node.right, Z, idx[~go_left], labels, path, depth + 1)


def _require_labels(train):
    labels = sorted(int(v) for v in np.unique(train.y))
    if len(labels) < 2:
        raise ValueError("multiclass training needs at least 2 labels")
    return labels


def _fit_split(train, left, right, k, cfg):
    mask = np.isin(train.y, left + right)
    y = np.where(np.isin(train.y[mask], left), 1.0, -1.0)
    return fit_arrays(train.X[mask], y, k, cfg)


def midpoint_split(seq):
    """First ceil(m/2) labels go left."""
    half = math.ceil(len(seq) / 2)
    return tuple(seq[:half]), tuple(seq[half:])


def _grow(train, seq, k, cfg):
    if len(seq) == 1:
        return CbtsNode(label=seq[0])
    left, right = midpoint_split(seq)
    return CbtsNode(
        model=_fit_split(train, left, right, k, cfg),
        left=_grow(train, left, k, cfg),
        right=_grow(train, right, k, cfg),
        left_labels=left,
        right_labels=right,
    )


def build_cbts(train, k, cfg, seed):
    """Centroid-based binary tree of SVMs.

    The root splits labels by 2-means majority, each side ordered by ascending
    per-class SSE. Every deeper node halves its parent's ordered label
    sequence without re-clustering. N labels give N-1 SVMs.
    """
    _require_labels(train)
    cr = kmeans2(train.X, seed)
    part = majority_partition(train, cr)
    return cbts_from_partition(train, part.left_labels, part.right_labels, k, cfg, root_sse=part.sse)


def cbts_from_partition(train, left, right, k, cfg, root_sse=None):
    """Build the tree from a given root label split (each side already ordered)."""
    left, right = tuple(left), tuple(right)
    if not left or not right or set(left) & set(right):
        raise ValueError("root partition sides must be nonempty and disjoint")
    root = CbtsNode(
        model=_fit_split(train, left, right, k, cfg),
        left=_grow(train, left, k, cfg),
        right=_grow(train, right, k, cfg),
        left_labels=left,
        right_labels=right,
    )
    alphabet = tuple(lab for lab in train.label_alphabet if lab in set(left + right))
    return CbtsModel(k, cfg.C, alphabet, root=root, root_sse=dict(root_sse or {}))


def predict_cbts(m, z):
    return int(m.predict(np.asarray(z)[None, :])[0])


def train_ovo(train, k, cfg):
    labels = _require_labels(train)
    models = {}
    for ia, a in enumerate(labels):
        for b in labels[ia + 1:]:
            models[(a, b)] = _fit_split(train, [a], [b], k, cfg)
    return OvoModel(k, cfg.C, tuple(train.label_alphabet), models=models)


def predict_ovo(m, z):
    return int(m.predict(np.asarray(z)[None, :])[0])


def train_ova(train, k, cfg):
    labels = _require_labels(train)
    models = {}
    for a in labels:
        y = np.where(train.y == a, 1.0, -1.0)
        models[a] = fit_arrays(train.X, y, k, cfg)
    return OvaModel(k, cfg.C, tuple(train.label_alphabet), models=models)


def predict_ova(m, z):
    return int(m.predict(np.asarray(z)[None, :])[0])


def train_model(strategy, train, k, cfg, seed=0):
    if strategy == "cbts":
        return build_cbts(train, k, cfg, seed)
    if strategy == "ovo":
        return train_ovo(train, k, cfg)
    if strategy == "ova":
        return train_ova(train, k, cfg)
    raise ValueError(f"unknown strategy {strategy!r}")


def classifier_count(strategy, N, tree=None):
    """(classifiers trained, worst-case SVM evaluations per prediction).

    For CBTS the evaluation count is the depth of ``tree`` when given, else
    ``1 + ceil(log2(ceil(N/2)))``, the depth under an even root split.
    """
    if N < 2:
        raise ValueError("need N >= 2")
    if strategy == "cbts":
        if tree is not None:
            root = tree.root if isinstance(tree, CbtsModel) else tree
            return N - 1, root.depth()
        return N - 1, 1 + math.ceil(math.log2(math.ceil(N / 2)))
    if strategy == "ovo":
        return N * (N - 1) // 2, N * (N - 1) // 2
    if strategy == "ova":
        return N, N
    raise ValueError(f"unknown strategy {strategy!r}")
