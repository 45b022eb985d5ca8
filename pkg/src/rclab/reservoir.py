"""Random recurrent reservoirs and their deterministic state update.

The state update for neuron ``n`` is

    y_n(t) = f(s * (b_n + sum_m I_nm x_m(t-1) + sum_k W_nk y_k(t-1)))

where ``f`` is one of the supported activation kinds and ``s`` the scaling
factor. Within an episode, time ``tau = 0`` holds the reset state; the input
presented at slot ``tau - 1`` enters the state at ``tau``. Slots beyond the
input sequence are zero vectors, so the reservoir runs freely.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import rng as rngmod
from .errors import ConfigError

ACTIVATIONS = ("tanh", "linear", "gaussian", "sin", "heaviside")
TOPOLOGIES = ("standard", "autapse_only", "neural_loop")
RESET_MODES = ("zero", "uniform_random")
INPUT_VARIANTS = ("dense", "sparse")


@dataclass(frozen=True)
class ReservoirParams:
    """Generative description of a reservoir.

    ``w`` is the absolute coupling strength (standard deviation of the weight
    magnitudes); any ``1/sqrt(N)`` scaling is resolved by the caller.
    """

    N: int = 50
    d: float = 1.0
    b: float = 0.0
    w: float = 0.3 / np.sqrt(50)
    w_B: float = 0.1
    activation: str = "tanh"
    s: float = 1.0
    topology: str = "standard"
    reset_mode: str = "zero"
    seed: int = 0

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 1:
            raise ConfigError(f"N must be a positive integer, got {self.N!r}")
        if not 0.0 <= self.d <= 1.0:
            raise ConfigError(f"density d must lie in [0, 1], got {self.d}")
        if not -1.0 <= self.b <= 1.0:
            raise ConfigError(f"balance b must lie in [-1, 1], got {self.b}")
        if not self.w >= 0.0:
            raise ConfigError(f"coupling w must be >= 0, got {self.w}")
        if not self.w_B >= 0.0:
            raise ConfigError(f"bias scale w_B must be >= 0, got {self.w_B}")
        if not self.s > 0.0:
            raise ConfigError(f"scaling s must be > 0, got {self.s}")
        if self.activation not in ACTIVATIONS:
            raise ConfigError(f"unknown activation {self.activation!r}")
        if self.topology not in TOPOLOGIES:
            raise ConfigError(f"unknown topology {self.topology!r}")
        if self.reset_mode not in RESET_MODES:
            raise ConfigError(f"unknown reset mode {self.reset_mode!r}")
        object.__setattr__(self, "N", int(self.N))


@dataclass(frozen=True)
class InputMatrix:
    I: np.ndarray
    variant: str
    w_I: float

    @property
    def M(self) -> int:
        return self.I.shape[1]


@dataclass(frozen=True)
class Reservoir:
    W: np.ndarray
    bias: np.ndarray
    params: ReservoirParams

    @property
    def N(self) -> int:
        return self.W.shape[0]


@dataclass
class EpisodeTrace:
    """States of one episode.

    ``states[k]`` is the state at ``tau = k + 1``; the reset state is kept
    separately in ``initial``.
    """

    states: np.ndarray
    inputs: np.ndarray
    delay: int
    n_out: int
    initial: np.ndarray = field(repr=False, default=None)

    @property
    def readout_states(self) -> np.ndarray:
        return self.states[self.delay:self.delay + self.n_out]


def build_weight_matrix(params: ReservoirParams, rng: np.random.Generator) -> np.ndarray:
    """Draw the recurrent weight matrix.

    Magnitudes are ``|N(0, w)|``, a Bernoulli(d) mask selects nonzero entries
    and an independent sign is positive with probability ``(1 + b) / 2``.
    The three draws always happen in this order with unit-scale variates, so
    two parameter sets that differ only in ``w`` share the same structure.
    """
    N = params.N
    magnitude = np.abs(rng.standard_normal((N, N))) * params.w
    nonzero = rng.random((N, N)) < params.d
    positive = rng.random((N, N)) < (1.0 + params.b) / 2.0
    sign = np.where(positive, 1.0, -1.0)
    return magnitude * nonzero * sign


def apply_topology(W: np.ndarray, topology: str) -> np.ndarray:
    """Mask ``W`` to the requested topology.

    Rows index the receiving neuron, so the loop link ``n -> n+1`` lives at
    ``W[(n + 1) % N, n]``.
    """
    if topology == "standard":
        return W
    N = W.shape[0]
    if topology == "autapse_only":
        return np.diag(np.diag(W))
    if topology == "neural_loop":
        out = np.zeros_like(W)
        src = np.arange(N)
        dst = (src + 1) % N
        out[dst, src] = W[dst, src]
        return out
    raise ConfigError(f"unknown topology {topology!r}")


def build_biases(params: ReservoirParams, rng: np.random.Generator) -> np.ndarray:
    return rng.standard_normal(params.N) * params.w_B


def build_input_matrix(variant: str, N: int, M: int, w_I: float,
                       rng: np.random.Generator) -> InputMatrix:
    """Dense: i.i.d. ``N(0, w_I)`` entries. Sparse: ``w_I`` on the first ``M`` diagonal slots."""
    if M < 1:
        raise ConfigError(f"input width M must be >= 1, got {M}")
    if variant == "dense":
        I = rng.standard_normal((N, M)) * w_I
    elif variant == "sparse":
        if M > N:
            raise ConfigError(f"sparse input needs M <= N, got M={M}, N={N}")
        I = np.zeros((N, M))
        I[np.arange(M), np.arange(M)] = w_I
    else:
        raise ConfigError(f"unknown input variant {variant!r}")
    return InputMatrix(I=I, variant=variant, w_I=float(w_I))


def activate(kind: str, s: float, u):
    """Apply activation ``kind`` to ``s * u``. Heaviside maps 0 to 0."""
    a = s * np.asarray(u, dtype=float)
    if kind == "tanh":
        return np.tanh(a)
    if kind == "linear":
        return a
    if kind == "gaussian":
        return np.exp(-a * a)
    if kind == "sin":
        return np.sin(a)
    if kind == "heaviside":
        return (a > 0).astype(float)
    raise ConfigError(f"unknown activation {kind!r}")


def build_reservoir(params: ReservoirParams) -> Reservoir:
    """Realize ``params`` using the weight and bias streams of ``params.seed``."""
    W = build_weight_matrix(params, rngmod.stream(params.seed, "weights"))
    W = apply_topology(W, params.topology)
    bias = build_biases(params, rngmod.stream(params.seed, "biases"))
    return Reservoir(W=W, bias=bias, params=params)


def reset(params: ReservoirParams, rng: np.random.Generator) -> np.ndarray:
    """Initial state used at the start of every episode of one experiment.

    Draw it once and reuse it; the uniform mode consumes ``rng``.
    """
    if params.reset_mode == "zero":
        return np.zeros(params.N)
    return rng.uniform(-1.0, 1.0, params.N)


def step(reservoir: Reservoir, inp: InputMatrix, y_prev, x_prev) -> np.ndarray:
    """One synchronous update. Leading batch dimensions are allowed."""
    y_prev = np.asarray(y_prev, dtype=float)
    x_prev = np.asarray(x_prev, dtype=float)
    N = reservoir.N
    if inp.I.shape[0] != N:
        raise ConfigError(f"input matrix has {inp.I.shape[0]} rows, reservoir has {N} neurons")
    if y_prev.shape[-1] != N:
        raise ConfigError(f"state has width {y_prev.shape[-1]}, expected {N}")
    if x_prev.shape[-1] != inp.M:
        raise ConfigError(f"input has width {x_prev.shape[-1]}, expected {inp.M}")
    u = reservoir.bias + x_prev @ inp.I.T + y_prev @ reservoir.W.T
    p = reservoir.params
    return activate(p.activation, p.s, u)


def run_episodes(reservoir: Reservoir, inp: InputMatrix, X, T: int, initial=None) -> np.ndarray:
    """Run a batch of independent episodes.

    Parameters
    ----------
    X : array, shape (E, TI, M)
        Input sequences; slot ``k`` enters the state at ``tau = k + 1``.
    T : int
        Number of updates per episode, ``T >= TI``.
    initial : array, shape (N,), optional
        Reset state; zeros when omitted.

    Returns
    -------
    states : array, shape (E, T, N)
        ``states[:, k]`` is the state at ``tau = k + 1``.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim != 3:
        raise ConfigError(f"inputs must have shape (E, TI, M), got {X.shape}")
    E, TI, M = X.shape
    if TI > T:
        raise ConfigError(f"input length TI={TI} exceeds episode length T={T}")
    N = reservoir.N
    y = np.zeros((E, N)) if initial is None else np.broadcast_to(initial, (E, N)).astype(float)
    zero_in = np.zeros((E, M))
    states = np.empty((E, T, N))
    for k in range(T):
        y = step(reservoir, inp, y, X[:, k] if k < TI else zero_in)
        states[:, k] = y
    return states


def run_episode(reservoir: Reservoir, inp: InputMatrix, x_sequence, T: int, delay: int,
                n_out: int, initial=None) -> EpisodeTrace:
    """Run one episode and mark the states consumed by the readout.

    The readout sees ``tau = delay + 1 ... delay + n_out``.
    """
    if T < delay + n_out:
        raise ConfigError(f"episode length T={T} shorter than delay + readout length "
                          f"({delay} + {n_out})")
    x_sequence = np.atleast_2d(np.asarray(x_sequence, dtype=float))
    init = np.zeros(reservoir.N) if initial is None else np.asarray(initial, dtype=float)
    states = run_episodes(reservoir, inp, x_sequence[None], T, init)[0]
    return EpisodeTrace(states=states, inputs=x_sequence, delay=delay, n_out=n_out, initial=init)
