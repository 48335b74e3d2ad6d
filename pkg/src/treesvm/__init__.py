"""Multiclass kernel SVMs: a centroid-based binary tree (CBTS), one-vs-one, one-vs-all."""

from ._accel import USE_NUMBA, backend_name
from .data_io import Dataset, Scaler, SplitConfig, apply_scaler, fit_scaler, load_libsvm, parse_libsvm, shuffle_split, synth_blobs
from .kernel import KernelParams, kernel_eval
from .multiclass import build_cbts, classifier_count, train_model, train_ova, train_ovo
from .svm_binary import BinarySvmModel, SolverConfig, train_binary
from .tuning import GridConfig, grid_search

__version__ = "0.1.0"

__all__ = [
    "USE_NUMBA", "backend_name", "Dataset", "Scaler", "SplitConfig", "apply_scaler", "fit_scaler",
    "load_libsvm", "parse_libsvm", "shuffle_split", "synth_blobs", "KernelParams", "kernel_eval",
    "build_cbts", "classifier_count", "train_model", "train_ova", "train_ovo", "BinarySvmModel",
    "SolverConfig", "train_binary", "GridConfig", "grid_search",
]
