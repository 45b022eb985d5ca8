"""Seeded single runs, parameter sweeps and the free-run dynamics probe."""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .. import rng as rngmod
from ..errors import ConfigError, NumericError
from ..metrics import DynamicsReport, dynamics_report, pca_project
from ..readout import ReadoutLayer, apply_readout, binarize, classify, train_readout
from ..reservoir import build_input_matrix, build_reservoir, reset, run_episodes
from ..tasks import datasets as ds
from ..tasks.scoring import classification_accuracy, exact_match_accuracy, rms_accuracy
from .config import ExperimentConfig

NAN = float("nan")


def _clean(x):
    if isinstance(x, float) and math.isnan(x):
        return None
    return x


def _unclean(x):
    return NAN if x is None else float(x)


@dataclass
class RunReport:
    accuracy: float
    dynamics: DynamicsReport
    seed: int
    config: dict
    wall_time: float = 0.0
    baseline: float = NAN
    param: str | None = None
    value: Any = None
    repeat: int = 0
    uniqueness: dict | None = None
    readout: dict | None = None
    episode_errors: list | None = None
    error: str | None = None

    def to_dict(self) -> dict:
        return {
            "accuracy": _clean(self.accuracy),
            "baseline": _clean(self.baseline),
            "dynamics": {k: _clean(v) for k, v in self.dynamics.to_dict().items()},
            "seed": self.seed,
            "param": self.param,
            "value": self.value,
            "repeat": self.repeat,
            "wall_time": self.wall_time,
            "uniqueness": self.uniqueness,
            "readout": self.readout,
            "episode_errors": self.episode_errors,
            "error": self.error,
            "config": self.config,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RunReport":
        dyn = DynamicsReport(**{k: _unclean(v) for k, v in data["dynamics"].items()})
        return cls(accuracy=_unclean(data["accuracy"]), baseline=_unclean(data.get("baseline")),
                   dynamics=dyn, seed=int(data["seed"]), config=data["config"],
                   wall_time=float(data.get("wall_time", 0.0)), param=data.get("param"),
                   value=data.get("value"), repeat=int(data.get("repeat", 0)),
                   uniqueness=data.get("uniqueness"), readout=data.get("readout"),
                   episode_errors=data.get("episode_errors"), error=data.get("error"))


@dataclass
class Outcome:
    """Everything a single run produced; ``report`` is the serializable part."""

    report: RunReport
    dataset: ds.TaskDataset
    layer: ReadoutLayer
    test_states: np.ndarray
    test_outputs: np.ndarray
    extras: dict = field(default_factory=dict)


def build_dataset(config: ExperimentConfig, rng: np.random.Generator) -> ds.TaskDataset:
    kind = config.task.kind
    p = config.task.resolved()
    if p["E_train"] + p["E_test"] > config.output.max_episodes:
        raise ConfigError(f"{p['E_train'] + p['E_test']} episodes exceed the cap "
                          f"max_episodes={config.output.max_episodes}")
    if kind == "SMT":
        return ds.gen_smt(p["TI"], p["M"], p["E_train"], rng, delay=p["delay"],
                          E_test=p["E_test"])
    if kind == "PCT":
        data = ds.gen_pct(p["N_p"], p["N_c"], p["d_gap"], p["E_train"], rng, E_test=p["E_test"])
        if "delay" in p:
            data.delay = int(p["delay"])
        return data
    if kind == "CAT":
        return ds.gen_cat(p["M"], p["rule"], p["E_train"], p["E_test"], rng, delay=p["delay"])
    if kind == "SGT":
        data = ds.gen_sgt(p["N_DC"], p["sigma"], p["M"], p["TO"], p["K"], p["E_train"], rng,
                          E_test=p["E_test"])
        if "delay" in p:
            data.delay = int(p["delay"])
        return data
    raise ConfigError(f"unknown task kind {kind!r}")


def score(dataset: ds.TaskDataset, outputs: np.ndarray, split: ds.Split) -> float:
    """Task accuracy of readout ``outputs`` (shape ``(E, TO, K)``) on ``split``."""
    if dataset.kind in ("SMT", "SGT"):
        return rms_accuracy(outputs, split.targets)
    if dataset.kind == "PCT":
        return classification_accuracy(classify(outputs[:, 0]), split.labels)
    return exact_match_accuracy(binarize(outputs), split.targets)


def episode_errors(dataset: ds.TaskDataset, outputs: np.ndarray, split: ds.Split) -> list:
    if dataset.kind in ("SMT", "SGT"):
        err = np.sqrt(np.mean((outputs - split.targets) ** 2, axis=(1, 2)))
    elif dataset.kind == "PCT":
        err = (classify(outputs[:, 0]) != split.labels).astype(float)
    else:
        err = np.sum(binarize(outputs) != split.targets, axis=(1, 2)).astype(float)
    return err.tolist()


def _data_seed(config: ExperimentConfig) -> int:
    return config.seed if config.data_seed is None else config.data_seed


def execute(config: ExperimentConfig) -> Outcome:
    """Build, train and evaluate one reservoir computer."""
    t0 = time.perf_counter()
    seed = config.seed
    params = config.reservoir.params(seed)
    reservoir = build_reservoir(params)
    dataset = build_dataset(config, rngmod.stream(_data_seed(config), "dataset"))
    variant, w_I = config.input_settings()
    inp = build_input_matrix(variant, params.N, dataset.M, w_I, rngmod.stream(seed, "input"))
    initial = reset(params, rngmod.stream(seed, "reset"))

    T = dataset.T
    window = slice(dataset.delay, dataset.delay + dataset.TO)
    with np.errstate(over="ignore", invalid="ignore"):
        train_states = run_episodes(reservoir, inp, dataset.train.inputs, T, initial)
        test_states = run_episodes(reservoir, inp, dataset.test.inputs, T, initial)
    if not (np.all(np.isfinite(train_states)) and np.all(np.isfinite(test_states))):
        raise NumericError("reservoir states diverged to non-finite values")

    N, K = params.N, dataset.K
    Y = train_states[:, window].reshape(-1, N)
    layer = train_readout(Y, dataset.train.targets.reshape(-1, K))
    outputs = apply_readout(layer, test_states[:, window])
    accuracy = score(dataset, outputs, dataset.test)

    perm = rngmod.stream(seed, "shuffle").permutation(len(dataset.train))
    shuffled = train_readout(Y, dataset.train.targets[perm].reshape(-1, K))
    baseline = score(dataset, apply_readout(shuffled, test_states[:, window]), dataset.test)

    report = RunReport(
        accuracy=float(accuracy),
        baseline=float(baseline),
        dynamics=dynamics_report(test_states),
        seed=seed,
        config=config.to_dict(),
        uniqueness=ds.split_uniqueness(dataset) if dataset.kind == "CAT" else None,
        readout=layer.to_dict(),
        episode_errors=(episode_errors(dataset, outputs, dataset.test)
                        if config.output.episode_errors else None),
    )
    report.wall_time = time.perf_counter() - t0
    return Outcome(report=report, dataset=dataset, layer=layer, test_states=test_states,
                   test_outputs=outputs)


def run_experiment(config: ExperimentConfig) -> RunReport:
    return execute(config).report


def _point_configs(config: ExperimentConfig):
    sw = config.sweep
    if sw.param is None or not sw.values:
        raise ConfigError("sweep needs a parameter name and a non-empty value list")
    out = []
    for value in sw.values:
        base = config.with_value(sw.param, value)
        for r in range(sw.repeats):
            cfg = base.with_seed(rngmod.repeat_seed(config.seed, r))
            if config.data_seed is not None:
                cfg.data_seed = rngmod.repeat_seed(config.data_seed, r)
            out.append((value, r, cfg))
    return out


def _run_point(item) -> RunReport:
    value, repeat, cfg, probe = item
    try:
        report = probe_point(cfg) if probe else run_experiment(cfg)
    except NumericError as exc:
        nan = DynamicsReport(NAN, NAN, NAN, NAN)
        report = RunReport(accuracy=NAN, dynamics=nan, seed=cfg.seed, config=cfg.to_dict(),
                           error=str(exc))
    report.param = cfg.sweep.param
    report.value = value
    report.repeat = repeat
    return report


def _map(items, jobs: int) -> list:
    if jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_run_point, items))
    return [_run_point(item) for item in items]


def run_sweep(config: ExperimentConfig) -> list[RunReport]:
    """One report per (sweep value, repeat), in sweep order.

    Repeat ``r`` uses seed ``seed + r`` at every sweep value, so points are
    compared on matched reservoirs and datasets. A point whose dynamics
    diverge is kept with NaN results and its ``error`` set.
    """
    items = [(v, r, cfg, False) for v, r, cfg in _point_configs(config)]
    return _map(items, config.jobs)


def probe_point(config: ExperimentConfig) -> RunReport:
    """Free-run probe: random inputs at slot 0, no readout, dynamics over all steps."""
    t0 = time.perf_counter()
    seed = config.seed
    params = config.reservoir.params(seed)
    reservoir = build_reservoir(params)
    dyn = config.dynamics
    if dyn.E > config.output.max_episodes:
        raise ConfigError(f"{dyn.E} episodes exceed the cap max_episodes="
                          f"{config.output.max_episodes}")
    inp = build_input_matrix(dyn.variant, params.N, dyn.M, dyn.w_I, rngmod.stream(seed, "input"))
    X = rngmod.stream(_data_seed(config), "dataset").uniform(-1.0, 1.0, (dyn.E, 1, dyn.M))
    initial = reset(params, rngmod.stream(seed, "reset"))
    with np.errstate(over="ignore", invalid="ignore"):
        states = run_episodes(reservoir, inp, X, dyn.T, initial)
    if not np.all(np.isfinite(states)):
        raise NumericError("reservoir states diverged to non-finite values")
    report = RunReport(accuracy=NAN, dynamics=dynamics_report(states), seed=seed,
                       config=config.to_dict())
    report.wall_time = time.perf_counter() - t0
    return report


def dynamics_probe(config: ExperimentConfig) -> list[RunReport]:
    """Probe reports over the sweep axis, or a single point without one."""
    if config.sweep.param is None:
        return [probe_point(config)]
    items = [(v, r, cfg, True) for v, r, cfg in _point_configs(config)]
    return _map(items, config.jobs)


def summarize(reports: list[RunReport]) -> list[dict]:
    """Per sweep value: run count, mean/min/max accuracy and mean dynamics."""
    groups: dict = {}
    order = []
    for r in reports:
        key = repr(r.value)
        if key not in groups:
            groups[key] = []
            order.append(key)
        groups[key].append(r)
    rows = []
    for key in order:
        runs = groups[key]
        acc = np.array([r.accuracy for r in runs])
        row = {"value": runs[0].value, "n": len(runs)}
        if np.all(np.isnan(acc)):
            row.update(A_mean=NAN, A_min=NAN, A_max=NAN)
        else:
            row.update(A_mean=float(np.nanmean(acc)), A_min=float(np.nanmin(acc)),
                       A_max=float(np.nanmax(acc)))
        for name in ("F", "C0", "C1", "alpha"):
            vals = np.array([getattr(r.dynamics, name) for r in runs])
            row[name + "_mean"] = float(np.nanmean(vals)) if not np.all(np.isnan(vals)) else NAN
        rows.append(row)
    return rows


def pca_rows(outcome: Outcome, episodes: int = 500) -> list[tuple]:
    """PCA scatter of test states (reset states excluded) for the first episodes.

    Rows are ``(pc1, pc2, class, episode)``; class is -1 for unlabeled tasks.
    """
    states = outcome.test_states[:episodes]
    E, T, N = states.shape
    pca = pca_project(states.reshape(-1, N), k=2)
    labels = outcome.dataset.test.labels
    rows = []
    for e in range(E):
        cls = int(labels[e]) if labels is not None else -1
        for t in range(T):
            p = pca.projected[e * T + t]
            rows.append((float(p[0]), float(p[1]), cls, e))
    return rows
