"""Dataset generators for the four diagnostic tasks.

Every dataset stores input sequences of shape ``(E, TI, M)`` and target
sequences of shape ``(E, TO, K)`` for a train and a test split, together with
the timing (``delay``) the readout uses. Classification targets are one-hot
rows; the integer labels are kept alongside.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigError
from . import ca

KINDS = ("SMT", "PCT", "CAT", "SGT")


@dataclass
class Split:
    inputs: np.ndarray
    targets: np.ndarray
    labels: np.ndarray | None = None

    def __len__(self) -> int:
        return self.inputs.shape[0]


@dataclass
class TaskDataset:
    kind: str
    train: Split
    test: Split
    TI: int
    TO: int
    M: int
    K: int
    delay: int
    meta: dict = field(default_factory=dict)

    @property
    def T(self) -> int:
        """Episode length needed to reach the last readout state."""
        return max(self.delay + self.TO, self.TI)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "shape": {"TI": self.TI, "TO": self.TO, "M": self.M, "K": self.K,
                      "delay": self.delay},
            "train": _split_to_dict(self.train),
            "test": _split_to_dict(self.test),
            "meta": {k: _encode(v) for k, v in self.meta.items()},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "TaskDataset":
        shape = data["shape"]
        return cls(kind=data["kind"], train=_split_from_dict(data["train"]),
                   test=_split_from_dict(data["test"]),
                   meta={k: _decode(v) for k, v in data.get("meta", {}).items()},
                   **{k: int(shape[k]) for k in ("TI", "TO", "M", "K", "delay")})


def _encode(value):
    if isinstance(value, np.ndarray):
        return {"shape": list(value.shape), "dtype": str(value.dtype),
                "values": value.ravel().tolist()}
    if isinstance(value, np.generic):
        return value.item()
    return value


def _decode(value):
    if isinstance(value, dict) and set(value) == {"shape", "dtype", "values"}:
        return np.asarray(value["values"], dtype=value["dtype"]).reshape(value["shape"])
    return value


def _split_to_dict(split: Split) -> dict:
    out = {"inputs": _encode(split.inputs), "targets": _encode(split.targets)}
    if split.labels is not None:
        out["labels"] = _encode(split.labels)
    return out


def _split_from_dict(data: dict) -> Split:
    labels = _decode(data["labels"]) if "labels" in data else None
    return Split(inputs=_decode(data["inputs"]), targets=_decode(data["targets"]), labels=labels)


def save_dataset(dataset: TaskDataset, path) -> None:
    with open(path, "w") as fh:
        json.dump(dataset.to_dict(), fh)


def load_dataset(path) -> TaskDataset:
    with open(path) as fh:
        return TaskDataset.from_dict(json.load(fh))


def _check_count(name, value, minimum=1):
    if int(value) != value or value < minimum:
        raise ConfigError(f"{name} must be an integer >= {minimum}, got {value!r}")
    return int(value)


# -- sequence memorization ---------------------------------------------------

def gen_smt(TI: int, M: int, E: int, rng: np.random.Generator, delay: int = 5,
            E_test: int | None = None) -> TaskDataset:
    """Delayed autoencoding of ``TI`` uniform random vectors in [-1, 1]^M."""
    TI = _check_count("TI", TI)
    M = _check_count("M", M)
    E = _check_count("E", E)
    E_test = E if E_test is None else _check_count("E_test", E_test)
    delay = _check_count("delay", delay, 0)

    def split(n):
        x = rng.uniform(-1.0, 1.0, (n, TI, M))
        return Split(inputs=x, targets=x.copy())

    train = split(E)
    test = split(E_test)
    return TaskDataset("SMT", train, test, TI=TI, TO=TI, M=M, K=M, delay=delay)


# -- patches classification --------------------------------------------------

@dataclass(frozen=True)
class PatchGrid:
    """``labels[i, j]`` is the class of the patch in column ``i`` (along x1)
    and row ``j`` (along x2) of the square [-1, 1]^2."""

    N_p: int
    labels: np.ndarray
    N_c: int
    d_gap: float

    @property
    def width(self) -> float:
        return 2.0 / self.N_p

    def patch_index(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.clip(np.floor((x + 1.0) / self.width).astype(int), 0, self.N_p - 1)

    def label(self, x) -> np.ndarray:
        idx = self.patch_index(x)
        return self.labels[idx[..., 0], idx[..., 1]]

    def in_gap(self, x) -> np.ndarray:
        """True where a point lies within ``d_gap / 2`` of an interior grid line."""
        x = np.asarray(x, dtype=float)
        lines = -1.0 + self.width * np.arange(1, self.N_p)
        if lines.size == 0:
            return np.zeros(x.shape[:-1], dtype=bool)
        dist = np.abs(x[..., None] - lines).min(axis=-1)
        return np.any(dist < self.d_gap / 2.0, axis=-1)


def make_patch_grid(N_p: int, N_c: int, d_gap: float, rng: np.random.Generator) -> PatchGrid:
    N_p = _check_count("N_p", N_p)
    N_c = _check_count("N_c", N_c, 2)
    if (N_p * N_p) % N_c:
        raise ConfigError(f"{N_p}x{N_p} patches cannot be split evenly into {N_c} classes")
    if not 0.0 <= d_gap < 2.0 / N_p:
        raise ConfigError(f"gap width {d_gap} must lie in [0, patch width)")
    labels = np.repeat(np.arange(N_c), N_p * N_p // N_c)
    labels = rng.permutation(labels).reshape(N_p, N_p)
    return PatchGrid(N_p=N_p, labels=labels, N_c=N_c, d_gap=float(d_gap))


def sample_patches(grid: PatchGrid, E: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform points in [-1, 1]^2 with gap points rejected."""
    out = np.empty((0, 2))
    while out.shape[0] < E:
        need = E - out.shape[0]
        x = rng.uniform(-1.0, 1.0, (2 * need + 16, 2))
        out = np.vstack([out, x[~grid.in_gap(x)]])
    return out[:E]


def gen_pct(N_p: int, N_c: int, d_gap: float, E: int, rng: np.random.Generator,
            E_test: int | None = None) -> TaskDataset:
    """Single 2-D input per episode, read out at the injection step."""
    E = _check_count("E", E)
    E_test = E if E_test is None else _check_count("E_test", E_test)
    grid = make_patch_grid(N_p, N_c, d_gap, rng)

    def split(n):
        x = sample_patches(grid, n, rng)
        labels = grid.label(x)
        onehot = np.eye(grid.N_c)[labels]
        return Split(inputs=x[:, None, :], targets=onehot[:, None, :], labels=labels)

    train = split(E)
    test = split(E_test)
    meta = {"grid_labels": grid.labels, "N_p": grid.N_p, "N_c": grid.N_c, "d_gap": grid.d_gap}
    return TaskDataset("PCT", train, test, TI=1, TO=1, M=2, K=grid.N_c, delay=0, meta=meta)


def patch_grid_of(dataset: TaskDataset) -> PatchGrid:
    m = dataset.meta
    return PatchGrid(N_p=int(m["N_p"]), labels=np.asarray(m["grid_labels"]),
                     N_c=int(m["N_c"]), d_gap=float(m["d_gap"]))


# -- cellular automaton prediction -------------------------------------------

def gen_cat(M: int, rule: int, E_train: int, E_test: int, rng: np.random.Generator,
            delay: int = 1) -> TaskDataset:
    """Map a random CA state (+-1 encoded) to its successor under ``rule``.

    States are drawn uniformly with replacement from all ``2**M``
    configurations, independently for both splits.
    """
    M = _check_count("M", M)
    if M > 62:
        raise ConfigError(f"M={M} too large for integer state encoding")
    ca._check_rule(rule)
    E_train = _check_count("E_train", E_train)
    E_test = _check_count("E_test", E_test)
    delay = _check_count("delay", delay, 0)

    def split(n):
        idx = rng.integers(0, 2 ** M, n)
        cells = ca.state_to_bits(idx, M)
        nxt = ca.ca_step(cells, rule)
        return idx, Split(inputs=ca.encode(cells)[:, None, :], targets=ca.encode(nxt)[:, None, :])

    train_idx, train = split(E_train)
    test_idx, test = split(E_test)
    meta = {"rule": int(rule), "train_states": train_idx, "test_states": test_idx}
    return TaskDataset("CAT", train, test, TI=1, TO=1, M=M, K=M, delay=delay, meta=meta)


def split_uniqueness(dataset: TaskDataset) -> dict:
    """Counts of distinct CA states found only in train, only in test, or in both."""
    if dataset.kind != "CAT":
        raise ConfigError("uniqueness accounting applies to CA datasets only")
    tr = set(np.asarray(dataset.meta["train_states"]).tolist())
    te = set(np.asarray(dataset.meta["test_states"]).tolist())
    return {"train_only": len(tr - te), "test_only": len(te - tr), "shared": len(tr & te)}


# -- sequence generation -----------------------------------------------------

def gen_sgt(N_DC: int, sigma: float, M: int, TO: int, K: int, E: int,
            rng: np.random.Generator, E_test: int | None = None) -> TaskDataset:
    """Emit a fixed class-specific sequence after one noisy prototype input."""
    N_DC = _check_count("N_DC", N_DC)
    M = _check_count("M", M)
    TO = _check_count("TO", TO)
    K = _check_count("K", K)
    E = _check_count("E", E)
    E_test = E if E_test is None else _check_count("E_test", E_test)
    if not sigma >= 0.0:
        raise ConfigError(f"sigma must be >= 0, got {sigma}")
    prototypes = rng.uniform(-1.0, 1.0, (N_DC, M))
    sequences = rng.uniform(-1.0, 1.0, (N_DC, TO, K))

    def split(n):
        c = rng.integers(0, N_DC, n)
        x = prototypes[c] + sigma * rng.standard_normal((n, M))
        return Split(inputs=x[:, None, :], targets=sequences[c], labels=c)

    train = split(E)
    test = split(E_test)
    meta = {"prototypes": prototypes, "sequences": sequences, "sigma": float(sigma)}
    return TaskDataset("SGT", train, test, TI=1, TO=TO, M=M, K=K, delay=0, meta=meta)
