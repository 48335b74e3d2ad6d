#!/usr/bin/env python3
"""Rebuild data/*.libsvm from UCI copies bundled in PyPI wheels.

The sandbox this project was built in only reaches PyPI, so the UCI files are
taken from two wheels that ship them verbatim:

  keel-ds               Iris (iris.dat), Pendigits (penbased.dat, 10992 rows)
  imbalanced-databases  Glass (UCI glass.data, 214 rows)

Usage:
    pip download keel-ds imbalanced-databases --no-deps -d /tmp/wheels
    python scripts/build_datasets.py /tmp/wheels
"""

import sys
import zipfile
from pathlib import Path

OUT = Path(__file__).resolve().parents[1] / "data"

IRIS_LABELS = {"Iris-setosa": 1, "Iris-versicolor": 2, "Iris-virginica": 3}


def _wheel(wheel_dir, prefix):
    hits = sorted(Path(wheel_dir).glob(f"{prefix}-*.whl"))
    if not hits:
        sys.exit(f"no {prefix} wheel in {wheel_dir}")
    return zipfile.ZipFile(hits[-1])


def _keel_rows(text):
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("@"):
            yield [tok.strip() for tok in line.split(",")]


def _write(name, rows):
    path = OUT / f"{name}.libsvm"
    with open(path, "w") as fh:
        for label, values in rows:
            feats = " ".join(f"{j}:{v}" for j, v in enumerate(values, 1) if float(v) != 0.0)
            fh.write(f"{label} {feats}".rstrip() + "\n")
    print(f"wrote {path}")


def main(wheel_dir):
    OUT.mkdir(exist_ok=True)
    keel = _wheel(wheel_dir, "keel_ds")
    iris = keel.read("keel_ds/data/balanced/raw/iris.dat").decode()
    _write("iris", [(IRIS_LABELS[r[-1]], r[:-1]) for r in _keel_rows(iris)])

    pen = keel.read("keel_ds/data/balanced/raw/penbased.dat").decode()
    _write("pendigits", [(int(r[-1]), r[:-1]) for r in _keel_rows(pen)])

    imb = _wheel(wheel_dir, "imbalanced_databases")
    glass = imb.read("imbalanced_databases/data/glass/glass.data.txt").decode()
    rows = []
    for line in glass.splitlines():
        toks = line.strip().split(",")
        if len(toks) == 11:
            # column 0 is the row id, column 10 the glass type
            rows.append((int(toks[10]), toks[1:10]))
    _write("glass", rows)


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else ".")
