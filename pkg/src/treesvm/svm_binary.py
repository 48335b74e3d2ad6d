"""Soft-margin binary C-SVC trained by SMO."""

import logging
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .kernel import KernelParams, cache_budget_bytes, kernel_matrix

logger = logging.getLogger(__name__)

FORMAT_TAG = "treesvm-binary 1"

# kernel entries materialized per prediction block
_PREDICT_BLOCK = 1 << 22


@dataclass(frozen=True)
class SolverConfig:
    """``C`` is the soft-margin penalty; ``kkt_tol`` bounds the maximal KKT violation.

    ``max_iter`` caps SMO pair updates; None means ``max(1_000_000, 100 * n)``.
    """

    C: float = 1.0
    kkt_tol: float = 1e-3
    max_iter: int | None = None

    def __post_init__(self):
        if not self.C > 0:
            raise ValueError("C must be positive")
        if not self.kkt_tol > 0:
            raise ValueError("kkt_tol must be positive")


@dataclass(eq=False)
class BinarySvmModel:
    support_vectors: np.ndarray
    coef: np.ndarray  # alpha_i * y_i
    bias: float
    kernel: KernelParams
    C: float
    converged: bool = True
    n_iter: int = 0
    objective: float = float("nan")
    support_indices: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=np.int64))

    @property
    def n_sv(self):
        return len(self.coef)

    @property
    def d(self):
        return self.support_vectors.shape[1]

    def decision_function(self, Z):
        Z = np.atleast_2d(np.asarray(Z, dtype=np.float64))
        if Z.shape[1] != self.d:
            raise ValueError(f"dimension mismatch: model expects {self.d} features, got {Z.shape[1]}")
        out = np.empty(len(Z))
        step = max(1, _PREDICT_BLOCK // max(1, self.n_sv))
        for lo in range(0, len(Z), step):
            out[lo:lo + step] = kernel_matrix(self.kernel, Z[lo:lo + step], self.support_vectors) @ self.coef
        return out + self.bias

    def predict(self, Z):
        return np.where(self.decision_function(Z) >= 0.0, 1, -1)

    def dual_objective(self):
        K = kernel_matrix(self.kernel, self.support_vectors, self.support_vectors)
        return float(np.abs(self.coef).sum() - 0.5 * self.coef @ K @ self.coef)


def _cache_slots(n):
    return int(min(n, max(2, cache_budget_bytes() // (8 * n))))


def solve_dual(X, y, k, cfg):
    """Run SMO on arrays. ``y`` holds +1/-1 floats. Returns (alpha, gradient, n_iter, converged)."""
    X = np.ascontiguousarray(X, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.float64)
    n = len(y)
    sqn = np.einsum("ij,ij->i", X, X)
    max_iter = cfg.max_iter if cfg.max_iter is not None else max(1_000_000, 100 * n)
    return _kernels.smo_solve(
        X, sqn, y, k.code, float(k.gamma), float(cfg.C), float(cfg.kkt_tol), int(max_iter), _cache_slots(n)
    )


def _bias(alpha, G, y, C):
    v = -y * G
    free = (alpha > 0.0) & (alpha < C)
    if free.any():
        return float(v[free].mean())
    pos = y > 0
    up = (pos & (alpha < C)) | (~pos & (alpha > 0.0))
    low = (pos & (alpha > 0.0)) | (~pos & (alpha < C))
    lo = v[up].max() if up.any() else None
    hi = v[low].min() if low.any() else None
    if lo is None:
        return float(hi)
    if hi is None:
        return float(lo)
    return float(0.5 * (lo + hi))


def fit_arrays(X, y, k, cfg):
    """Train on a feature matrix and a +1/-1 label vector."""
    y = np.asarray(y, dtype=np.float64)
    if len(y) < 2:
        raise ValueError("need at least 2 training instances")
    if not (np.any(y > 0) and np.any(y < 0)):
        raise ValueError("training set must contain both +1 and -1 labels")
    if not np.all(np.abs(y) == 1.0):
        raise ValueError("binary labels must be +1 or -1")
    X = np.ascontiguousarray(X, dtype=np.float64)
    alpha, G, n_iter, converged = solve_dual(X, y, k, cfg)
    # pair updates can leave a bounded alpha one ulp inside the box, which would make it look free
    snap = cfg.C * 1e-12
    alpha[alpha < snap] = 0.0
    alpha[alpha > cfg.C - snap] = cfg.C
    if not converged:
        logger.warning("SMO stopped after %d iterations without meeting kkt_tol=%g", n_iter, cfg.kkt_tol)
    sv = np.flatnonzero(alpha > 0.0)
    objective = 0.5 * alpha.sum() - 0.5 * alpha @ G
    return BinarySvmModel(
        support_vectors=X[sv].copy(),
        coef=alpha[sv] * y[sv],
        bias=_bias(alpha, G, y, cfg.C),
        kernel=k,
        C=cfg.C,
        converged=bool(converged),
        n_iter=int(n_iter),
        objective=float(objective),
        support_indices=sv,
    )


def train_binary(ds, k, cfg):
    """Train on a Dataset whose labels are +1 / -1."""
    return fit_arrays(ds.X, ds.y, k, cfg)


def decision_value(m, z):
    z = np.asarray(z, dtype=np.float64)
    if z.ndim != 1:
        raise ValueError("decision_value takes a single vector; use decision_function for batches")
    return float(m.decision_function(z[None, :])[0])


def predict_sign(m, z):
    return 1 if decision_value(m, z) >= 0.0 else -1


def dumps(m):
    lines = [
        FORMAT_TAG,
        f"kernel {m.kernel.kind}",
        f"gamma {float(m.kernel.gamma)!r}",
        f"C {float(m.C)!r}",
        f"bias {float(m.bias)!r}",
        f"dim {m.d}",
        f"converged {int(m.converged)}",
        f"n_sv {m.n_sv}",
    ]
    for c, row in zip(m.coef, m.support_vectors):
        feats = " ".join(f"{j + 1}:{float(row[j])!r}" for j in np.flatnonzero(row))
        lines.append(f"{float(c)!r} {feats}".rstrip())
    return "\n".join(lines) + "\n"


def loads(text):
    lines = text.splitlines()
    if not lines or lines[0].strip() != FORMAT_TAG:
        raise ValueError("not a treesvm binary model (bad header)")
    header = {}
    pos = 1
    while pos < len(lines) and not header.get("n_sv"):
        key, _, val = lines[pos].partition(" ")
        header[key] = val.strip()
        pos += 1
    try:
        n_sv = int(header["n_sv"])
        d = int(header["dim"])
        kernel = KernelParams(header["kernel"], float(header["gamma"]))
        C = float(header["C"])
        bias = float(header["bias"])
        converged = header.get("converged", "1") == "1"
    except KeyError as exc:
        raise ValueError(f"model header missing {exc.args[0]!r}") from None
    body = lines[pos:pos + n_sv]
    if len(body) != n_sv:
        raise ValueError(f"expected {n_sv} support vectors, found {len(body)}")
    coef = np.empty(n_sv)
    sv = np.zeros((n_sv, d))
    for r, line in enumerate(body):
        toks = line.split()
        coef[r] = float(toks[0])
        for tok in toks[1:]:
            j, _, v = tok.partition(":")
            sv[r, int(j) - 1] = float(v)
    return BinarySvmModel(sv, coef, bias, kernel, C, converged=converged)
