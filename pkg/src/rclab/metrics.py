"""Dynamical measures over collections of episode traces, and PCA of states.

A trace collection is an array of shape ``(E, T, N)`` (episodes, time steps
after the reset, neurons), a list of ``(T_e, N)`` arrays, or a list of
:class:`~rclab.reservoir.EpisodeTrace`. Reset states are never included.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .errors import ConfigError


@dataclass(frozen=True)
class DynamicsReport:
    F: float
    C0: float
    C1: float
    alpha: float

    def to_dict(self) -> dict:
        return asdict(self)


def _episodes(traces) -> list[np.ndarray]:
    if isinstance(traces, np.ndarray):
        if traces.ndim == 2:
            traces = traces[None]
        if traces.ndim != 3:
            raise ConfigError(f"trace array must have shape (E, T, N), got {traces.shape}")
        eps = list(traces)
    else:
        eps = [np.asarray(getattr(t, "states", t), dtype=float) for t in traces]
    if not eps:
        raise ConfigError("empty trace collection")
    widths = {e.shape[-1] for e in eps}
    if len(widths) != 1 or any(e.ndim != 2 for e in eps):
        raise ConfigError("all traces must be (T, N) arrays of equal width")
    if any(e.shape[0] == 0 for e in eps):
        raise ConfigError("trace with no time steps")
    return eps


def fluctuation(traces) -> float:
    """Mean over neurons of the population standard deviation of each neuron's
    activations, pooled over all episodes."""
    pooled = np.concatenate(_episodes(traces), axis=0)
    return float(np.mean(np.std(pooled, axis=0)))


def correlation(traces, lag: int) -> float:
    """Uncentred, unnormalised lagged correlation averaged over all ordered
    neuron pairs (self-pairs included).

    Products only pair times within the same episode. Averaging over pairs
    factorises into the product of population means, which is what is
    computed here.
    """
    if lag < 0:
        raise ConfigError(f"lag must be >= 0, got {lag}")
    total = 0.0
    count = 0
    for ep in _episodes(traces):
        T = ep.shape[0]
        if T < lag + 1:
            raise ConfigError(f"episode of length {T} too short for lag {lag}")
        mean_n = ep.mean(axis=1)
        total += float(np.dot(mean_n[:T - lag], mean_n[lag:]))
        count += T - lag
    return total / count


def nonlinearity(traces) -> float:
    """``f_A - f_B + f_C`` over the bands [-1, -0.5), [-0.5, 0.5], (0.5, 1].

    Activations outside [-1, 1] (possible only for linear neurons) fall in
    no band.
    """
    y = np.concatenate([e.ravel() for e in _episodes(traces)])
    f_a = np.count_nonzero((y >= -1.0) & (y < -0.5))
    f_b = np.count_nonzero((y >= -0.5) & (y <= 0.5))
    f_c = np.count_nonzero((y > 0.5) & (y <= 1.0))
    return float((f_a - f_b + f_c) / y.size)


def dynamics_report(traces) -> DynamicsReport:
    """All four measures. ``C1`` is NaN when every episode has a single step."""
    eps = _episodes(traces)
    c1 = correlation(eps, 1) if all(e.shape[0] >= 2 for e in eps) else float("nan")
    return DynamicsReport(F=fluctuation(eps), C0=correlation(eps, 0), C1=c1,
                          alpha=nonlinearity(eps))


@dataclass(frozen=True)
class PCAResult:
    mean: np.ndarray
    components: np.ndarray
    explained_variance: np.ndarray
    explained_variance_ratio: np.ndarray
    projected: np.ndarray

    def transform(self, states) -> np.ndarray:
        return (np.asarray(states, dtype=float) - self.mean) @ self.components.T


def pca_project(states, k: int = 2) -> PCAResult:
    """Project mean-centred states onto their top ``k`` principal axes.

    Each axis is oriented so its largest-magnitude loading is positive.
    Variances use the population convention.
    """
    X = np.asarray(states, dtype=float)
    if X.ndim != 2:
        raise ConfigError(f"states must be a 2-D array, got shape {X.shape}")
    S, N = X.shape
    if S < 2:
        raise ConfigError("PCA needs at least two states")
    if not 1 <= k <= N:
        raise ConfigError(f"k must lie in [1, {N}], got {k}")
    mean = X.mean(axis=0)
    Xc = X - mean
    _, sv, Vt = np.linalg.svd(Xc, full_matrices=False)
    comps = np.zeros((k, N))
    r = min(k, Vt.shape[0])
    comps[:r] = Vt[:r]
    for i in range(r):
        j = np.argmax(np.abs(comps[i]))
        if comps[i, j] < 0:
            comps[i] = -comps[i]
    var_all = sv ** 2 / S
    var = np.zeros(k)
    var[:r] = var_all[:r]
    total = var_all.sum()
    ratio = var / total if total > 0 else np.zeros(k)
    return PCAResult(mean=mean, components=comps, explained_variance=var,
                     explained_variance_ratio=ratio, projected=Xc @ comps.T)
