"""Reservoir computing laboratory.

Random recurrent reservoirs, a pseudoinverse-trained affine readout,
dynamical measures, four diagnostic tasks and a sweep harness.
"""

from .errors import ConfigError, DegenerateTargetError, NumericError
from .metrics import DynamicsReport, correlation, fluctuation, nonlinearity, pca_project
from .readout import ReadoutLayer, apply_readout, binarize, classify, pseudoinverse, train_readout
from .reservoir import (
    EpisodeTrace,
    InputMatrix,
    Reservoir,
    ReservoirParams,
    activate,
    build_input_matrix,
    build_reservoir,
    run_episode,
    run_episodes,
    step,
)

__version__ = "0.1.0"
