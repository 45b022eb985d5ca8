"""Accuracy measures for the diagnostic tasks."""

import numpy as np

from ..errors import ConfigError, DegenerateTargetError


def rms_accuracy(outputs, targets) -> float:
    """``1 / (1 + rms_error / std(targets))`` over every output value.

    Used for the memorization and sequence-generation tasks. The target
    spread is the population standard deviation of all target values.
    """
    outputs = np.asarray(outputs, dtype=float)
    targets = np.asarray(targets, dtype=float)
    if outputs.shape != targets.shape:
        raise ConfigError(f"shape mismatch: outputs {outputs.shape} vs targets {targets.shape}")
    spread = float(np.std(targets))
    if not spread > 0.0:
        raise DegenerateTargetError("target values have zero standard deviation")
    err = float(np.sqrt(np.mean((outputs - targets) ** 2)))
    return 1.0 / (1.0 + err / spread)


def classification_accuracy(predicted, true) -> float:
    predicted = np.asarray(predicted).ravel()
    true = np.asarray(true).ravel()
    if predicted.shape != true.shape or predicted.size == 0:
        raise ConfigError("label arrays must be non-empty and of equal length")
    return float(np.mean(predicted == true))


def exact_match_accuracy(predicted, targets) -> float:
    """Fraction of output vectors (last axis) matching the target in every component."""
    predicted = np.asarray(predicted)
    targets = np.asarray(targets)
    if predicted.shape != targets.shape or predicted.size == 0:
        raise ConfigError("prediction and target arrays must be non-empty and equal in shape")
    K = predicted.shape[-1]
    hits = np.all(predicted.reshape(-1, K) == targets.reshape(-1, K), axis=1)
    return float(np.mean(hits))
