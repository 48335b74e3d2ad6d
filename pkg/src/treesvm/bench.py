"""Comparative benchmark rows: one per (dataset, strategy) at its chosen (gamma, C)."""

import csv
import io
import logging
from dataclasses import asdict, dataclass, fields

from .data_io import SplitConfig, apply_scaler, fit_scaler, load_libsvm, shuffle_split
from .kernel import KernelParams
from .multiclass import STRATEGIES, CbtsModel, classifier_count
from .svm_binary import SolverConfig
from .tuning import GridConfig, evaluate_cell, grid_search

logger = logging.getLogger(__name__)


@dataclass
class BenchmarkRow:
    dataset: str
    strategy: str
    gamma_exp: int
    cost_exp: int
    accuracy: float
    train_seconds: float
    test_seconds: float
    classifiers_trained: int
    worst_path_evals: int
    n_classes: int
    status: str = "ok"

    @property
    def gamma(self):
        return 2.0**self.gamma_exp

    @property
    def C(self):
        return 2.0**self.cost_exp


_COLUMNS = [f.name for f in fields(BenchmarkRow)]
_TYPES = {f.name: f.type for f in fields(BenchmarkRow)}


def prepare(train_path, test_path=None, split=None):
    """Load, split (unless a test file is given), and scale on the training part."""
    ds = load_libsvm(train_path)
    if test_path is None:
        train, test = shuffle_split(ds, split or SplitConfig())
    else:
        test = load_libsvm(test_path)
        d = max(ds.d, test.d)
        if ds.d != d:
            ds = load_libsvm(train_path, n_features=d)
        if test.d != d:
            test = load_libsvm(test_path, n_features=d)
        train = ds
    scaler = fit_scaler(train)
    return apply_scaler(scaler, train), apply_scaler(scaler, test), scaler


def _row(name, strategy, gexp, cexp, model, acc, tr, te, n_classes):
    if isinstance(model, CbtsModel):
        trained, worst = classifier_count("cbts", n_classes, tree=model)
    else:
        trained, worst = classifier_count(strategy, n_classes)
    return BenchmarkRow(name, strategy, gexp, cexp, acc, tr, te, trained, worst, n_classes)


def bench_dataset(name, train, test, strategies, seed, gamma_exp=0, cost_exp=0, grid=None, solver=None):
    """Rows for one dataset. With ``grid`` (a GridConfig template) each strategy is tuned first."""
    solver = solver or SolverConfig()
    rows = []
    n_classes = len(set(train.y.tolist()))
    for strategy in strategies:
        try:
            if grid is not None:
                cfg = GridConfig(grid.gamma_exponents, grid.cost_exponents, grid.exponent_step, strategy, seed)
                report = grid_search(train, test, cfg, solver_defaults=solver)
                rec = report.best_record
                rows.append(_row(name, strategy, rec.gamma_exp, rec.cost_exp, report.best_model,
                                 rec.accuracy, rec.train_s, rec.test_s, n_classes))
            else:
                k = KernelParams("rbf", 2.0**gamma_exp)
                cell = SolverConfig(2.0**cost_exp, solver.kkt_tol, solver.max_iter)
                model, acc, tr, te = evaluate_cell(train, test, strategy, k, cell, seed)
                rows.append(_row(name, strategy, gamma_exp, cost_exp, model, acc, tr, te, n_classes))
        except Exception as exc:  # noqa: BLE001 - one failed dataset must not stop the run
            logger.error("%s/%s failed: %s", name, strategy, exc)
            rows.append(BenchmarkRow(name, strategy, gamma_exp, cost_exp, 0.0, 0.0, 0.0, 0, 0, n_classes,
                                     status=f"error: {exc}".replace("\n", " ")))
    return rows


def run_bench(paths, strategies=STRATEGIES, seed=0, gamma_exp=0, cost_exp=0, grid=None,
              train_fraction=2.0 / 3.0, solver=None):
    rows = []
    for path in paths:
        try:
            train, test, _ = prepare(path, split=SplitConfig(train_fraction, seed))
        except (OSError, ValueError) as exc:
            logger.error("%s: %s", path, exc)
            rows.extend(
                BenchmarkRow(str(path), s, gamma_exp, cost_exp, 0.0, 0.0, 0.0, 0, 0, 0, status=f"error: {exc}")
                for s in strategies
            )
            continue
        rows.extend(bench_dataset(train.name, train, test, strategies, seed, gamma_exp, cost_exp, grid, solver))
    return rows


def rows_to_csv(rows, counts=True):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(_COLUMNS)
    for r in rows:
        w.writerow([repr(v) if isinstance(v, float) else v for v in asdict(r).values()])
    if counts:
        buf.write("# classifier counts from the formulas: trained / worst-case evaluations per prediction\n")
        buf.write("# dataset,N,cbts_train,ovo_train,ova_train,cbts_eval,ovo_eval,ova_eval\n")
        seen = set()
        for r in rows:
            if r.dataset in seen or r.n_classes < 2:
                continue
            seen.add(r.dataset)
            c = [classifier_count(s, r.n_classes) for s in STRATEGIES]
            buf.write(f"# {r.dataset},{r.n_classes},{c[0][0]},{c[1][0]},{c[2][0]},{c[0][1]},{c[1][1]},{c[2][1]}\n")
    return buf.getvalue()


def rows_from_csv(text):
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    out = []
    for rec in csv.DictReader(lines):
        out.append(BenchmarkRow(**{k: _TYPES[k](v) for k, v in rec.items()}))
    return out
