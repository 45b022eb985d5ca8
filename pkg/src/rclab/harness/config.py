"""Experiment configuration.

Config files are INI-style text: ``[section]`` headers and ``key = value``
lines. Values are parsed as JSON literals when possible (numbers, lists,
``true``/``false``, quoted strings) and kept as bare strings otherwise. The
equivalent JSON document nests the same keys under the same section names;
top-level keys live in ``[experiment]``.
"""

from __future__ import annotations

import configparser
import copy
import json
import math
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

from ..errors import ConfigError
from ..reservoir import ReservoirParams
from ..tasks.datasets import KINDS

SECTIONS = ("experiment", "reservoir", "input", "task", "sweep", "dynamics", "output")

TASK_DEFAULTS = {
    "SMT": {"TI": 4, "M": 5, "delay": 5, "E_train": 5000, "E_test": 5000},
    "PCT": {"N_p": 6, "N_c": 2, "d_gap": 0.1, "E_train": 5000, "E_test": 5000},
    "CAT": {"M": 10, "rule": 110, "delay": 1, "E_train": 512, "E_test": 512},
    "SGT": {"N_DC": 3, "sigma": 0.1, "M": 2, "TO": 10, "K": 5, "E_train": 5000,
            "E_test": 5000},
}

INPUT_DEFAULTS = {
    "SMT": {"variant": "sparse", "w_I": 1.0},
    "PCT": {"variant": "dense", "w_I": 1.0},
    "CAT": {"variant": "dense", "w_I": 0.045},
    "SGT": {"variant": "sparse", "w_I": 1.0},
}

# sweep axis name -> (section, key)
SWEEP_AXES = {
    "w": ("reservoir", "w"),
    "s": ("reservoir", "s"),
    "N": ("reservoir", "N"),
    "delay": ("task", "delay"),
    "activation": ("reservoir", "activation"),
    "topology": ("reservoir", "topology"),
    "input_variant": ("input", "variant"),
    "WRN": ("task", "rule"),
    "E_train": ("task", "E_train"),
}
SWEEP_ALIASES = {"dT": "delay", "ΔT": "delay", "rule": "WRN", "variant": "input_variant"}


@dataclass
class ReservoirSection:
    """``w`` is divided by ``sqrt(N)`` when ``scale_with_N`` is set."""

    N: int = 50
    d: float = 1.0
    b: float = 0.0
    w: float = 0.3
    scale_with_N: bool = True
    w_B: float = 0.1
    activation: str = "tanh"
    s: float = 1.0
    topology: str = "standard"
    reset_mode: str = "zero"

    def coupling(self) -> float:
        if not (isinstance(self.N, int) and self.N >= 1):
            raise ConfigError(f"N must be a positive integer, got {self.N!r}")
        return self.w / math.sqrt(self.N) if self.scale_with_N else self.w

    def params(self, seed: int) -> ReservoirParams:
        return ReservoirParams(N=self.N, d=self.d, b=self.b, w=self.coupling(), w_B=self.w_B,
                               activation=self.activation, s=self.s, topology=self.topology,
                               reset_mode=self.reset_mode, seed=seed)


@dataclass
class InputSection:
    variant: str | None = None
    w_I: float | None = None


@dataclass
class TaskSection:
    kind: str = "SMT"
    TI: int | None = None
    TO: int | None = None
    M: int | None = None
    K: int | None = None
    delay: int | None = None
    E_train: int | None = None
    E_test: int | None = None
    N_p: int | None = None
    N_c: int | None = None
    d_gap: float | None = None
    rule: int | None = None
    N_DC: int | None = None
    sigma: float | None = None

    def resolved(self) -> dict:
        """Task parameters with per-kind defaults filled in."""
        out = dict(TASK_DEFAULTS[self.kind])
        for f in fields(self):
            v = getattr(self, f.name)
            if f.name != "kind" and v is not None:
                out[f.name] = v
        return out


@dataclass
class SweepSection:
    param: str | None = None
    values: list = field(default_factory=list)
    repeats: int = 1


@dataclass
class DynamicsSection:
    """Free-run probe: ``M`` inputs injected once, then ``T`` updates per episode."""

    M: int = 10
    T: int = 11
    E: int = 1000
    variant: str = "sparse"
    w_I: float = 1.0


@dataclass
class OutputSection:
    dir: str = "results"
    formats: list = field(default_factory=lambda: ["csv", "json"])
    max_episodes: int = 50000
    pca: bool = False
    pca_episodes: int = 500
    episode_errors: bool = False


@dataclass
class ExperimentConfig:
    name: str = "experiment"
    seed: int = 0
    data_seed: int | None = None
    jobs: int = 1
    reservoir: ReservoirSection = field(default_factory=ReservoirSection)
    input: InputSection = field(default_factory=InputSection)
    task: TaskSection = field(default_factory=TaskSection)
    sweep: SweepSection = field(default_factory=SweepSection)
    dynamics: DynamicsSection = field(default_factory=DynamicsSection)
    output: OutputSection = field(default_factory=OutputSection)

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        if self.task.kind not in KINDS:
            raise ConfigError(f"unknown task kind {self.task.kind!r}; expected one of {KINDS}")
        if int(self.seed) != self.seed or self.seed < 0:
            raise ConfigError(f"seed must be a non-negative integer, got {self.seed!r}")
        if self.sweep.param is not None:
            self.sweep.param = SWEEP_ALIASES.get(self.sweep.param, self.sweep.param)
            if self.sweep.param not in SWEEP_AXES:
                raise ConfigError(f"unrecognized sweep parameter {self.sweep.param!r}; "
                                  f"expected one of {sorted(SWEEP_AXES)}")
        if int(self.sweep.repeats) != self.sweep.repeats or self.sweep.repeats < 1:
            raise ConfigError(f"repeats must be a positive integer, got {self.sweep.repeats!r}")
        self.reservoir.params(self.seed)
        variant, _ = self.input_settings()
        if variant not in ("dense", "sparse"):
            raise ConfigError(f"unknown input variant {variant!r}")

    def input_settings(self) -> tuple[str, float]:
        d = INPUT_DEFAULTS[self.task.kind]
        variant = self.input.variant if self.input.variant is not None else d["variant"]
        w_I = self.input.w_I if self.input.w_I is not None else d["w_I"]
        return variant, float(w_I)

    def to_dict(self) -> dict:
        d = asdict(self)
        exp = {k: d.pop(k) for k in ("name", "seed", "data_seed", "jobs")}
        return {"experiment": exp, **d}

    def with_value(self, param: str, value) -> "ExperimentConfig":
        """Copy of this config with one sweep axis set to ``value``."""
        param = SWEEP_ALIASES.get(param, param)
        if param not in SWEEP_AXES:
            raise ConfigError(f"unrecognized sweep parameter {param!r}")
        section, key = SWEEP_AXES[param]
        data = self.to_dict()
        data[section][key] = value
        return config_from_dict(data)

    def with_seed(self, seed: int) -> "ExperimentConfig":
        data = self.to_dict()
        data["experiment"]["seed"] = int(seed)
        return config_from_dict(data)


_SECTION_TYPES = {
    "reservoir": ReservoirSection,
    "input": InputSection,
    "task": TaskSection,
    "sweep": SweepSection,
    "dynamics": DynamicsSection,
    "output": OutputSection,
}


def config_from_dict(data: dict) -> ExperimentConfig:
    data = copy.deepcopy(data)
    unknown = set(data) - set(SECTIONS)
    if unknown:
        raise ConfigError(f"unknown config sections: {sorted(unknown)}")
    kwargs = dict(data.get("experiment", {}))
    allowed_top = {"name", "seed", "data_seed", "jobs"}
    bad = set(kwargs) - allowed_top
    if bad:
        raise ConfigError(f"unknown [experiment] keys: {sorted(bad)}")
    for name, cls in _SECTION_TYPES.items():
        values = data.get(name, {})
        known = {f.name for f in fields(cls)}
        bad = set(values) - known
        if bad:
            raise ConfigError(f"unknown [{name}] keys: {sorted(bad)}")
        try:
            kwargs[name] = cls(**values)
        except TypeError as exc:
            raise ConfigError(str(exc)) from exc
    return ExperimentConfig(**kwargs)


def parse_value(text: str):
    text = text.strip()
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        pass
    low = text.lower()
    if low in ("true", "false"):
        return low == "true"
    if low in ("none", "null", ""):
        return None
    return text


def apply_override(data: dict, assignment: str) -> dict:
    """Apply ``section.key=value`` (or ``key=value`` for ``[experiment]``) to a config dict."""
    if "=" not in assignment:
        raise ConfigError(f"override {assignment!r} is not of the form key=value")
    key, value = assignment.split("=", 1)
    key = key.strip()
    section, _, name = key.rpartition(".")
    section = section or "experiment"
    if section not in SECTIONS:
        raise ConfigError(f"unknown config section {section!r} in override {assignment!r}")
    data.setdefault(section, {})[name] = parse_value(value)
    return data


def read_config_dict(path) -> dict:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file {path} does not exist")
    if path.suffix == ".json":
        try:
            return json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    try:
        parser.read_string(path.read_text(), source=str(path))
    except configparser.Error as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    return {sec: {k: parse_value(v) for k, v in parser.items(sec)} for sec in parser.sections()}


def load_config(path, overrides=()) -> ExperimentConfig:
    data = read_config_dict(path)
    for item in overrides:
        apply_override(data, item)
    return config_from_dict(data)


def dump_config(config: ExperimentConfig) -> str:
    """Render ``config`` in the INI format accepted by :func:`load_config`."""
    lines = []
    for section, values in config.to_dict().items():
        lines.append(f"[{section}]")
        for k, v in values.items():
            if v is None:
                continue
            lines.append(f"{k} = {json.dumps(v)}")
        lines.append("")
    return "\n".join(lines)
