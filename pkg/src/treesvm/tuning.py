"""Hold-out grid search over (gamma, C) in powers of two."""

import csv
import io
import logging
import time
from dataclasses import dataclass, replace

import numpy as np

from .kernel import KernelParams
from .multiclass import STRATEGIES, train_model
from .svm_binary import SolverConfig

logger = logging.getLogger(__name__)

CSV_HEADER = ["gamma_exp", "cost_exp", "accuracy", "train_s", "test_s", "n_classifiers"]


@dataclass(frozen=True)
class GridConfig:
    """Inclusive base-2 exponent ranges walked with ``exponent_step``."""

    gamma_exponents: tuple = (-10, 4)
    cost_exponents: tuple = (-2, 12)
    exponent_step: int = 2
    strategy: str = "cbts"
    seed: int = 0

    def __post_init__(self):
        if self.exponent_step < 1:
            raise ValueError("exponent_step must be a positive integer")
        if self.strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.strategy!r}")
        for lo, hi in (self.gamma_exponents, self.cost_exponents):
            if lo > hi:
                raise ValueError("empty exponent range")

    def gamma_grid(self):
        lo, hi = self.gamma_exponents
        return list(range(lo, hi + 1, self.exponent_step))

    def cost_grid(self):
        lo, hi = self.cost_exponents
        return list(range(lo, hi + 1, self.exponent_step))


@dataclass
class GridRecord:
    gamma_exp: int
    cost_exp: int
    accuracy: float
    train_s: float
    test_s: float
    n_classifiers: int

    @property
    def gamma(self):
        return 2.0**self.gamma_exp

    @property
    def C(self):
        return 2.0**self.cost_exp


@dataclass
class GridReport:
    records: list
    best: int
    failures: list
    best_model: object = None

    @property
    def best_record(self):
        return self.records[self.best]

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in self.records:
            w.writerow([r.gamma_exp, r.cost_exp, repr(r.accuracy), repr(r.train_s), repr(r.test_s), r.n_classifiers])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text):
        rows = list(csv.DictReader(io.StringIO(text)))
        records = [
            GridRecord(
                int(r["gamma_exp"]), int(r["cost_exp"]), float(r["accuracy"]),
                float(r["train_s"]), float(r["test_s"]), int(r["n_classifiers"]),
            )
            for r in rows
        ]
        return cls(records, select_best(records), [])


def select_best(records):
    """Highest accuracy; ties go to the smallest train + test time, then grid order."""
    if not records:
        raise ValueError("no successful grid cells")
    return min(range(len(records)), key=lambda i: (-records[i].accuracy, records[i].train_s + records[i].test_s, i))


def accuracy(model, ds):
    return float(np.mean(model.predict(ds.X) == ds.y))


def evaluate_cell(train, test, strategy, kernel, solver, seed):
    """Train and score one configuration; returns (model, accuracy, train_s, test_s)."""
    t0 = time.perf_counter()
    model = train_model(strategy, train, kernel, solver, seed)
    t1 = time.perf_counter()
    pred = model.predict(test.X)
    t2 = time.perf_counter()
    return model, float(np.mean(pred == test.y)), t1 - t0, t2 - t1


def grid_search(train, test, cfg, k_kind="rbf", solver_defaults=None):
    """Score every grid cell on the hold-out set.

    Cells that raise are logged and listed in ``failures``; they never win.
    """
    if train.d != test.d:
        raise ValueError(f"train has {train.d} features, test {test.d}")
    solver_defaults = solver_defaults or SolverConfig()
    gammas = cfg.gamma_grid() if k_kind == "rbf" else [0]
    records = []
    failures = []
    best_key = None
    best_model = None
    for g in gammas:
        kernel = KernelParams(k_kind, 2.0**g)
        for c in cfg.cost_grid():
            solver = replace(solver_defaults, C=2.0**c)
            try:
                model, acc, tr, te = evaluate_cell(train, test, cfg.strategy, kernel, solver, cfg.seed)
            except Exception as exc:  # noqa: BLE001 - a failed cell must not end the sweep
                logger.warning("grid cell gamma=2^%d C=2^%d failed: %s", g, c, exc)
                failures.append((g, c, str(exc)))
                continue
            key = (-acc, tr + te, len(records))
            if best_key is None or key < best_key:
                best_key, best_model = key, model
            records.append(GridRecord(g, c, acc, tr, te, len(model.binary_models())))
            logger.debug("gamma=2^%d C=2^%d acc=%.4f train=%.3fs", g, c, acc, tr)
    return GridReport(records, select_best(records), failures, best_model)
