"""On-disk multiclass models.

A model is a directory::

    manifest.json     strategy, kernel, C, label alphabet, file list, CBTS topology
    scaler.csv        optional; min row then max row
    *.svm             one binary model per tree node / pair / label

CBTS topology is written as nested parentheses, an internal node being
``(left right)``: ``(((1 3) 7) (4 (6 2)))``. Internal-node files follow preorder.
"""

import json
from pathlib import Path

from . import svm_binary
from .data_io import Scaler
from .kernel import KernelParams
from .multiclass import CbtsModel, CbtsNode, OvaModel, OvoModel

FORMAT_TAG = "treesvm-multiclass 1"


def save_model(model, directory, scaler=None):
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    manifest = {
        "format": FORMAT_TAG,
        "strategy": model.strategy,
        "kernel": {"kind": model.kernel.kind, "gamma": model.kernel.gamma},
        "C": model.C,
        "label_alphabet": list(model.label_alphabet),
    }
    files = []
    if isinstance(model, CbtsModel):
        manifest["topology"] = model.root.topology()
        manifest["root_sse"] = {str(k): v for k, v in model.root_sse.items()}
        for pos, node in enumerate(model.root.internal_nodes()):
            name = f"node_{pos:03d}.svm"
            (directory / name).write_text(svm_binary.dumps(node.model))
            files.append(name)
    elif isinstance(model, OvoModel):
        for (a, b), m in model.models.items():
            name = f"pair_{a}_{b}.svm"
            (directory / name).write_text(svm_binary.dumps(m))
            files.append({"pair": [a, b], "file": name})
    elif isinstance(model, OvaModel):
        for a, m in model.models.items():
            name = f"ova_{a}.svm"
            (directory / name).write_text(svm_binary.dumps(m))
            files.append({"label": a, "file": name})
    else:
        raise TypeError(f"cannot save {type(model).__name__}")
    manifest["files"] = files
    if scaler is not None:
        (directory / "scaler.csv").write_text(scaler.to_csv())
        manifest["scaler"] = "scaler.csv"
    (directory / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    return directory


def parse_topology(text):
    """Parse ``(a b)`` nesting into nested 2-tuples of ints."""
    toks = text.replace("(", " ( ").replace(")", " ) ").split()
    pos = 0

    def term():
        nonlocal pos
        tok = toks[pos]
        pos += 1
        if tok == "(":
            left = term()
            right = term()
            if toks[pos] != ")":
                raise ValueError("topology: expected ')'")
            pos += 1
            return (left, right)
        return int(tok)

    tree = term()
    if pos != len(toks):
        raise ValueError("topology: trailing tokens")
    return tree


def _flatten(t):
    return [t] if isinstance(t, int) else _flatten(t[0]) + _flatten(t[1])


def _rebuild(t, models):
    if isinstance(t, int):
        return CbtsNode(label=t)
    node = CbtsNode(model=next(models), left_labels=tuple(_flatten(t[0])), right_labels=tuple(_flatten(t[1])))
    node.left = _rebuild(t[0], models)
    node.right = _rebuild(t[1], models)
    return node


def load_model(directory):
    """Return ``(model, scaler)``; scaler is None when none was saved."""
    directory = Path(directory)
    manifest = json.loads((directory / "manifest.json").read_text())
    if manifest.get("format") != FORMAT_TAG:
        raise ValueError(f"{directory}: not a treesvm model directory")
    kernel = KernelParams(manifest["kernel"]["kind"], float(manifest["kernel"]["gamma"]))
    C = float(manifest["C"])
    alphabet = tuple(manifest["label_alphabet"])

    def read(name):
        return svm_binary.loads((directory / name).read_text())

    strategy = manifest["strategy"]
    if strategy == "cbts":
        models = iter([read(name) for name in manifest["files"]])
        root = _rebuild(parse_topology(manifest["topology"]), models)
        sse = {int(k): v for k, v in manifest.get("root_sse", {}).items()}
        model = CbtsModel(kernel, C, alphabet, root=root, root_sse=sse)
    elif strategy == "ovo":
        model = OvoModel(kernel, C, alphabet, models={tuple(e["pair"]): read(e["file"]) for e in manifest["files"]})
    elif strategy == "ova":
        model = OvaModel(kernel, C, alphabet, models={e["label"]: read(e["file"]) for e in manifest["files"]})
    else:
        raise ValueError(f"unknown strategy {strategy!r} in manifest")

    scaler = None
    if manifest.get("scaler"):
        scaler = Scaler.from_csv((directory / manifest["scaler"]).read_text())
    return model, scaler
