"""Dataset container, LIBSVM text I/O, [0,1] scaling, shuffled splits, synthetic blobs."""

import io
import itertools
import logging
import math
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

logger = logging.getLogger(__name__)


class ParseError(ValueError):
    """Malformed LIBSVM input. ``lineno`` is 1-based, or None for whole-file errors."""

    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class DegenerateSplitWarning(UserWarning):
    pass


@dataclass
class Dataset:
    """Dense features ``X`` (n, d), integer labels ``y`` (n,).

    ``label_alphabet`` lists the distinct labels in first-appearance order.
    """

    X: np.ndarray
    y: np.ndarray
    label_alphabet: tuple = ()
    name: str = ""

    def __post_init__(self):
        self.X = np.ascontiguousarray(self.X, dtype=np.float64)
        self.y = np.asarray(self.y, dtype=np.int64)
        if self.X.ndim != 2:
            raise ValueError("features must be a 2-D array")
        if len(self.X) != len(self.y) or len(self.y) == 0:
            raise ValueError("features and labels must have equal nonzero length")
        if not self.label_alphabet:
            self.label_alphabet = _first_appearance(self.y)
        else:
            self.label_alphabet = tuple(int(v) for v in self.label_alphabet)
            missing = set(np.unique(self.y).tolist()) - set(self.label_alphabet)
            if missing:
                raise ValueError(f"labels {sorted(missing)} not in label_alphabet")

    @property
    def n(self):
        return len(self.y)

    @property
    def d(self):
        return self.X.shape[1]

    @property
    def n_classes(self):
        return len(self.label_alphabet)

    def subset(self, idx, relabel_alphabet=True):
        idx = np.asarray(idx)
        y = self.y[idx]
        alphabet = _first_appearance(y) if relabel_alphabet else self.label_alphabet
        return Dataset(self.X[idx], y, alphabet, self.name)


def _first_appearance(y):
    _, first = np.unique(y, return_index=True)
    return tuple(int(y[k]) for k in sorted(first))


def _parse_label(tok, lineno):
    try:
        value = float(tok)
    except ValueError:
        raise ParseError(f"non-numeric label {tok!r}", lineno) from None
    if not math.isfinite(value) or value != int(value):
        raise ParseError(f"label {tok!r} is not an integer", lineno)
    return int(value)


def parse_libsvm(text, n_features=None, name=""):
    """Parse LIBSVM sparse text (``label idx:val ...``) into a dense Dataset.

    ``text`` may be a string or any iterable of lines. Feature indices are
    1-based and must be strictly increasing on each line. ``d`` is the largest
    index seen unless ``n_features`` is given.
    """
    if isinstance(text, str):
        text = io.StringIO(text)
    labels = []
    rows = []
    max_idx = 0
    for lineno, line in enumerate(text, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        labels.append(_parse_label(toks[0], lineno))
        idxs = []
        vals = []
        prev = 0
        for tok in toks[1:]:
            key, sep, val = tok.partition(":")
            if not sep:
                raise ParseError(f"expected idx:val, got {tok!r}", lineno)
            try:
                j = int(key)
                v = float(val)
            except ValueError:
                raise ParseError(f"non-numeric token {tok!r}", lineno) from None
            if j <= prev:
                raise ParseError(f"index {j} not strictly increasing (previous {prev})", lineno)
            prev = j
            idxs.append(j - 1)
            vals.append(v)
        max_idx = max(max_idx, prev)
        rows.append((idxs, vals))
    if not rows:
        raise ParseError("empty input")

    d = max_idx if n_features is None else n_features
    if d < max_idx:
        raise ParseError(f"index {max_idx} exceeds n_features={n_features}")
    X = np.zeros((len(rows), d))
    for r, (idxs, vals) in enumerate(rows):
        X[r, idxs] = vals
    return Dataset(X, np.array(labels, dtype=np.int64), name=name)


def load_libsvm(path, n_features=None):
    path = Path(path)
    try:
        with open(path) as fh:
            return parse_libsvm(fh, n_features=n_features, name=path.stem)
    except OSError as exc:
        raise OSError(f"cannot open {path}: {exc.strerror}") from exc


def format_libsvm(ds):
    out = []
    for label, row in zip(ds.y, ds.X):
        nz = np.flatnonzero(row)
        feats = " ".join(f"{j + 1}:{float(row[j])!r}" for j in nz)
        out.append(f"{label} {feats}".rstrip())
    return "\n".join(out) + "\n"


def save_libsvm(ds, path):
    Path(path).write_text(format_libsvm(ds))


@dataclass
class Scaler:
    min: np.ndarray
    max: np.ndarray

    @property
    def d(self):
        return len(self.min)

    def to_csv(self):
        return "\n".join(",".join(repr(float(v)) for v in row) for row in (self.min, self.max)) + "\n"

    @classmethod
    def from_csv(cls, text):
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if len(lines) != 2:
            raise ValueError("scaler CSV needs exactly two rows (min, max)")
        lo, hi = (np.array([float(v) for v in ln.split(",")]) for ln in lines)
        if lo.shape != hi.shape or np.any(lo > hi):
            raise ValueError("malformed scaler: rows differ in length or min > max")
        return cls(lo, hi)


def fit_scaler(train):
    return Scaler(train.X.min(axis=0), train.X.max(axis=0))


def apply_scaler(s, ds):
    if ds.d != s.d:
        raise ValueError(f"dimension mismatch: data has {ds.d} features, scaler {s.d}")
    span = s.max - s.min
    live = span > 0
    X = np.zeros_like(ds.X)
    X[:, live] = (ds.X[:, live] - s.min[live]) / span[live]
    np.clip(X, 0.0, 1.0, out=X)
    return Dataset(X, ds.y.copy(), ds.label_alphabet, ds.name)


@dataclass
class SplitConfig:
    train_fraction: float = 2.0 / 3.0
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.train_fraction < 1.0:
            raise ValueError("train_fraction must lie in (0, 1)")


def shuffle_split(ds, cfg=None):
    """Shuffle under ``cfg.seed`` and cut off the first ceil(fraction * n) for training.

    No stratification. A partition that ends up with fewer than two labels
    triggers a DegenerateSplitWarning.
    """
    cfg = cfg or SplitConfig()
    n = ds.n
    if n < 2:
        raise ValueError("need at least 2 instances to split")
    perm = np.random.default_rng(cfg.seed).permutation(n)
    # guard against 2/3 * n landing a hair above an integer
    n_train = math.ceil(cfg.train_fraction * n - 1e-9)
    n_train = min(max(n_train, 1), n - 1)
    train = ds.subset(perm[:n_train], relabel_alphabet=False)
    test = ds.subset(perm[n_train:], relabel_alphabet=False)
    for part, tag in ((train, "train"), (test, "test")):
        present = len(np.unique(part.y))
        if present < 2:
            msg = f"{tag} partition has {present} distinct label(s)"
            logger.warning(msg)
            warnings.warn(msg, DegenerateSplitWarning, stacklevel=2)
    train.label_alphabet = _first_appearance(train.y)
    return train, test


def lattice_centers(n_classes, d, spacing=1.0):
    side = 1
    while side**d < n_classes:
        side += 1
    pts = itertools.islice(itertools.product(range(side), repeat=d), n_classes)
    return spacing * np.array(list(pts), dtype=np.float64)


def synth_blobs(n_classes, per_class, d, spread, seed, spacing=1.0):
    """Isotropic Gaussian blobs centred on an integer lattice, labels 1..n_classes.

    Instances are interleaved by class (not grouped), so no shuffle is needed
    before splitting.
    """
    if n_classes < 2 or per_class < 1 or d < 1 or spread <= 0:
        raise ValueError("need n_classes >= 2, per_class >= 1, d >= 1, spread > 0")
    rng = np.random.default_rng(seed)
    centers = lattice_centers(n_classes, d, spacing)
    X = centers[None, :, :] + spread * rng.standard_normal((per_class, n_classes, d))
    y = np.tile(np.arange(1, n_classes + 1), per_class)
    return Dataset(X.reshape(-1, d), y, name=f"blobs{n_classes}x{per_class}")
