"""Affine readout trained with the Moore-Penrose pseudoinverse."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, NumericError


def pseudoinverse(A) -> np.ndarray:
    """Moore-Penrose pseudoinverse via a thin SVD.

    Singular values at or below ``max(A.shape) * eps * s_max`` are treated
    as zero.
    """
    A = np.asarray(A, dtype=float)
    if A.ndim != 2:
        raise ConfigError(f"pseudoinverse needs a 2-D matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise NumericError("pseudoinverse input contains non-finite entries")
    if A.size == 0:
        return np.zeros(A.shape[::-1])
    U, sv, Vt = np.linalg.svd(A, full_matrices=False)
    cutoff = max(A.shape) * np.finfo(float).eps * (sv[0] if sv.size else 0.0)
    keep = sv > cutoff
    inv = np.zeros_like(sv)
    inv[keep] = 1.0 / sv[keep]
    return (Vt.T * inv) @ U.T


@dataclass(frozen=True)
class ReadoutLayer:
    O: np.ndarray
    b_o: np.ndarray

    @property
    def K(self) -> int:
        return self.O.shape[0]

    @property
    def N(self) -> int:
        return self.O.shape[1]

    def __call__(self, y) -> np.ndarray:
        return apply_readout(self, y)

    def to_dict(self) -> dict:
        return {
            "O": {"shape": list(self.O.shape), "values": self.O.ravel().tolist()},
            "b_o": {"shape": list(self.b_o.shape), "values": self.b_o.tolist()},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ReadoutLayer":
        O = np.asarray(data["O"]["values"], dtype=float).reshape(data["O"]["shape"])
        b_o = np.asarray(data["b_o"]["values"], dtype=float).reshape(data["b_o"]["shape"])
        return cls(O=O, b_o=b_o)


def train_readout(Y, Z) -> ReadoutLayer:
    """Fit ``Z ~ Y O^T + b_o`` in the least-squares, minimum-norm sense.

    Parameters
    ----------
    Y : array, shape (R, N)
        Readout-eligible reservoir states, one per row.
    Z : array, shape (R, K)
        Targets aligned row-wise with ``Y``.
    """
    Y = np.asarray(Y, dtype=float)
    Z = np.asarray(Z, dtype=float)
    if Z.ndim == 1:
        Z = Z[:, None]
    if Y.ndim != 2 or Z.ndim != 2:
        raise ConfigError("training batch must be 2-D matrices")
    if Y.shape[0] != Z.shape[0]:
        raise ConfigError(f"row mismatch: {Y.shape[0]} states vs {Z.shape[0]} targets")
    if Y.shape[0] < 1:
        raise ConfigError("training batch is empty")
    Y_bias = np.hstack([Y, np.ones((Y.shape[0], 1))])
    W_bias = pseudoinverse(Y_bias) @ Z
    W_t = W_bias.T
    return ReadoutLayer(O=np.ascontiguousarray(W_t[:, :-1]), b_o=W_t[:, -1].copy())


def apply_readout(layer: ReadoutLayer, y) -> np.ndarray:
    """``z = b_o + O y``; ``y`` may carry leading batch dimensions."""
    y = np.asarray(y, dtype=float)
    if y.shape[-1] != layer.N:
        raise ConfigError(f"state width {y.shape[-1]} does not match readout width {layer.N}")
    return y @ layer.O.T + layer.b_o


def binarize(z) -> np.ndarray:
    """Component-wise sign with ``sgn(0) = +1``."""
    return np.where(np.asarray(z) >= 0, 1.0, -1.0)


def classify(z) -> np.ndarray:
    """Index of the largest score along the last axis; ties go to the lowest index."""
    return np.argmax(np.asarray(z), axis=-1)
