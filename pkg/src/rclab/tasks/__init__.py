"""Diagnostic tasks: dataset generation, the CA engine and accuracy scoring."""

from .ca import ca_step, decode, encode
from .datasets import (
    KINDS,
    PatchGrid,
    Split,
    TaskDataset,
    gen_cat,
    gen_pct,
    gen_sgt,
    gen_smt,
    load_dataset,
    make_patch_grid,
    patch_grid_of,
    save_dataset,
    split_uniqueness,
)
from .scoring import classification_accuracy, exact_match_accuracy, rms_accuracy

__all__ = [
    "KINDS", "PatchGrid", "Split", "TaskDataset", "ca_step", "classification_accuracy",
    "decode", "encode", "exact_match_accuracy", "gen_cat", "gen_pct", "gen_sgt", "gen_smt",
    "load_dataset", "make_patch_grid", "patch_grid_of", "rms_accuracy", "save_dataset",
    "split_uniqueness",
]
