import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from rclab.errors import ConfigError
from rclab.metrics import (
    correlation,
    dynamics_report,
    fluctuation,
    nonlinearity,
    pca_project,
)
from rclab.reservoir import EpisodeTrace

unit = st.floats(-1.0, 1.0, allow_nan=False)


def traces_strategy(max_e=4, max_t=6, max_n=5):
    return st.tuples(st.integers(1, max_e), st.integers(2, max_t), st.integers(1, max_n)).flatmap(
        lambda s: arrays(np.float64, s, elements=unit))


def correlation_oracle(traces, lag):
    """Literal double sum over neuron pairs and within-episode times."""
    total, count = 0.0, 0
    E, T, N = traces.shape
    for e in range(E):
        for t in range(T - lag):
            for i in range(N):
                for j in range(N):
                    total += traces[e, t, i] * traces[e, t + lag, j]
            count += 1
    return total / (count * N * N)


def test_fixpoint_has_no_fluctuation():
    y = np.tile([0.2, -0.5, 0.7], (3, 8, 1))
    assert fluctuation(y) == pytest.approx(0.0, abs=1e-15)


def test_alternation():
    seq = np.array([1.0, -1.0] * 5)
    y = np.repeat(seq[None, :, None], 4, axis=2)
    rep = dynamics_report(y)
    assert rep.F == pytest.approx(1.0)
    assert rep.C0 == pytest.approx(1.0)
    assert rep.C1 == pytest.approx(-1.0)
    assert rep.alpha == pytest.approx(1.0)


def test_single_neuron_series():
    y = np.array([1.0, -1.0, 1.0, -1.0])[None, :, None]
    assert correlation(y, 0) == pytest.approx(1.0)
    assert correlation(y, 1) == pytest.approx(-1.0)
    assert correlation(y, 2) == pytest.approx(1.0)


def test_constant_state_correlation():
    y = np.full((2, 5, 3), 0.4)
    for lag in range(4):
        assert correlation(y, lag) == pytest.approx(0.16)


def test_nonlinearity_bands():
    assert nonlinearity(np.full((1, 3, 2), 0.01)) == -1.0
    assert nonlinearity(np.array([[[0.0], [1.0]]])) == 0.0
    assert nonlinearity(np.array([[[-0.5], [0.5], [-0.51], [0.51]]])) == 0.0
    # values outside [-1, 1] fall in no band
    assert nonlinearity(np.array([[[2.0], [0.0]]])) == -0.5


def test_episode_boundaries_not_crossed():
    a = np.ones((1, 3, 2))
    b = -np.ones((1, 3, 2))
    y = np.concatenate([a, b])
    assert correlation(y, 1) == pytest.approx(1.0)
    assert correlation(y, 1) == pytest.approx(correlation_oracle(y, 1))


def test_ragged_and_trace_inputs():
    rng = np.random.default_rng(0)
    eps = [rng.uniform(-1, 1, (t, 3)) for t in (2, 5, 3)]
    pooled = np.concatenate(eps)
    assert fluctuation(eps) == pytest.approx(np.mean(np.std(pooled, axis=0)))
    traces = [EpisodeTrace(states=e, inputs=np.zeros((1, 1)), delay=0, n_out=1,
                           initial=np.zeros(3)) for e in eps]
    assert dynamics_report(traces) == dynamics_report(eps)


def test_single_step_episodes_have_no_lag_one():
    rep = dynamics_report(np.zeros((5, 1, 3)))
    assert np.isnan(rep.C1)
    assert rep.C0 == 0.0


def test_errors():
    with pytest.raises(ConfigError):
        fluctuation([])
    with pytest.raises(ConfigError):
        correlation(np.zeros((1, 2, 2)), 2)
    with pytest.raises(ConfigError):
        correlation(np.zeros((1, 2, 2)), -1)
    with pytest.raises(ConfigError):
        fluctuation([np.zeros((2, 2)), np.zeros((2, 3))])
    with pytest.raises(ConfigError):
        fluctuation(np.zeros(4))


@given(traces_strategy())
@settings(max_examples=60, deadline=None)
def test_ranges_and_oracle(y):
    rep = dynamics_report(y)
    assert 0.0 <= rep.F <= 1.0 + 1e-12
    assert -1.0 <= rep.C0 <= 1.0 and -1.0 <= rep.C1 <= 1.0
    assert rep.C0 >= 0.0
    assert -1.0 <= rep.alpha <= 1.0
    assert rep.C0 == pytest.approx(correlation_oracle(y, 0), abs=1e-12)
    assert rep.C1 == pytest.approx(correlation_oracle(y, 1), abs=1e-12)


@given(traces_strategy(), st.randoms(use_true_random=False))
@settings(max_examples=40, deadline=None)
def test_permutation_invariance(y, rnd):
    neurons = list(range(y.shape[2]))
    episodes = list(range(y.shape[0]))
    rnd.shuffle(neurons)
    rnd.shuffle(episodes)
    a = dynamics_report(y)
    b = dynamics_report(y[episodes][:, :, neurons])
    for k in ("F", "C0", "C1", "alpha"):
        assert getattr(b, k) == pytest.approx(getattr(a, k), abs=1e-12)


class TestPCA:
    def test_planar_data(self):
        rng = np.random.default_rng(1)
        basis = np.linalg.qr(rng.standard_normal((6, 2)))[0].T
        X = rng.standard_normal((40, 2)) @ basis + 3.0
        pca = pca_project(X)
        assert pca.explained_variance_ratio.sum() == pytest.approx(1.0)
        np.testing.assert_allclose(pca.projected @ pca.components + pca.mean, X, atol=1e-10)

    def test_identical_states(self):
        pca = pca_project(np.ones((5, 3)))
        np.testing.assert_array_equal(pca.projected, 0.0)
        np.testing.assert_array_equal(pca.explained_variance_ratio, 0.0)

    def test_against_covariance_oracle(self):
        rng = np.random.default_rng(2)
        centres = np.array([[2.0, 0, 0, 0], [0, -2.0, 1, 0], [0, 0, 0, 3.0]])
        X = np.vstack([c + 0.1 * rng.standard_normal((30, 4)) for c in centres])
        pca = pca_project(X, k=2)
        vals, vecs = np.linalg.eigh(np.cov(X.T, bias=True))
        order = np.argsort(vals)[::-1][:2]
        np.testing.assert_allclose(pca.explained_variance, vals[order], rtol=1e-10)
        for i, j in enumerate(order):
            v = vecs[:, j] * np.sign(vecs[np.argmax(np.abs(vecs[:, j])), j])
            np.testing.assert_allclose(pca.components[i], v, atol=1e-10)
        np.testing.assert_allclose(pca.transform(X), pca.projected, atol=1e-12)

    def test_sign_convention(self):
        X = np.random.default_rng(3).standard_normal((20, 3))
        for comp in pca_project(X, k=3).components:
            assert comp[np.argmax(np.abs(comp))] > 0

    def test_errors(self):
        with pytest.raises(ConfigError):
            pca_project(np.zeros((1, 3)))
        with pytest.raises(ConfigError):
            pca_project(np.zeros((4, 3)), k=4)
        with pytest.raises(ConfigError):
            pca_project(np.zeros(4))
