"""Kernel functions and an LRU row cache."""

import os
import threading
from collections import OrderedDict
from dataclasses import dataclass

import numpy as np

from . import _kernels

DEFAULT_CACHE_MB = 100.0


def cache_budget_bytes():
    """Kernel cache budget, from ``TREESVM_CACHE_MB`` (default 100 MB)."""
    raw = os.environ.get("TREESVM_CACHE_MB")
    mb = DEFAULT_CACHE_MB if raw is None else float(raw)
    if mb <= 0:
        raise ValueError("TREESVM_CACHE_MB must be positive")
    return int(mb * 1024 * 1024)


@dataclass(frozen=True)
class KernelParams:
    kind: str = "rbf"
    gamma: float = 1.0

    def __post_init__(self):
        if self.kind not in ("rbf", "linear"):
            raise ValueError(f"unknown kernel kind {self.kind!r}")
        if self.kind == "rbf" and not self.gamma > 0:
            raise ValueError("rbf kernel needs gamma > 0")

    @property
    def code(self):
        return _kernels.RBF if self.kind == "rbf" else _kernels.LINEAR


def kernel_eval(p, x, y):
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape:
        raise ValueError(f"dimension mismatch: {x.shape} vs {y.shape}")
    if p.kind == "linear":
        return float(np.dot(x, y))
    d2 = max(np.dot(x, x) + np.dot(y, y) - 2.0 * np.dot(x, y), 0.0)
    return float(np.exp(-p.gamma * d2))


def kernel_matrix(p, A, B):
    """K[a, b] = kernel(A[a], B[b]) for row sets A (m, d) and B (k, d)."""
    A = np.asarray(A, dtype=np.float64)
    B = np.asarray(B, dtype=np.float64)
    if A.shape[1] != B.shape[1]:
        raise ValueError(f"dimension mismatch: {A.shape[1]} vs {B.shape[1]}")
    dots = A @ B.T
    if p.kind == "linear":
        return dots
    d2 = np.einsum("ij,ij->i", A, A)[:, None] + np.einsum("ij,ij->i", B, B)[None, :] - 2.0 * dots
    np.maximum(d2, 0.0, out=d2)
    return np.exp(-p.gamma * d2)


class KernelCache:
    """LRU cache of kernel rows for one dataset under a byte budget.

    Safe to share between threads: lookups and insertions hold a lock; a row
    computed twice by racing misses is identical, so either copy may win.
    """

    def __init__(self, budget_bytes=None):
        self.budget_bytes = cache_budget_bytes() if budget_bytes is None else int(budget_bytes)
        self._rows = OrderedDict()
        self._bytes = 0
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0

    def __len__(self):
        return len(self._rows)

    def get(self, key):
        with self._lock:
            row = self._rows.get(key)
            if row is not None:
                self._rows.move_to_end(key)
                self.hits += 1
            return row

    def put(self, key, row):
        row.setflags(write=False)
        with self._lock:
            if key in self._rows:
                return self._rows[key]
            self.misses += 1
            self._rows[key] = row
            self._bytes += row.nbytes
            while self._bytes > self.budget_bytes and len(self._rows) > 1:
                _, old = self._rows.popitem(last=False)
                self._bytes -= old.nbytes
            return row


def _prepared(ds):
    X = np.ascontiguousarray(ds.X, dtype=np.float64)
    return X, np.einsum("ij,ij->i", X, X)


def kernel_row(p, ds, i, cache=None):
    """Row ``i`` of the Gram matrix of ``ds``; returned arrays are read-only."""
    if not 0 <= i < ds.n:
        raise IndexError(f"row {i} out of range for n={ds.n}")
    key = (p, i)
    if cache is not None:
        row = cache.get(key)
        if row is not None:
            return row
    X, sqn = _prepared(ds)
    row = _kernels.kernel_row(X, sqn, i, p.code, float(p.gamma))
    if cache is not None:
        return cache.put(key, row)
    row.setflags(write=False)
    return row
