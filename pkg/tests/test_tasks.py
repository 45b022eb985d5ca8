import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rclab.errors import ConfigError, DegenerateTargetError
from rclab.tasks import ca
from rclab.tasks.datasets import (
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
from rclab.tasks.scoring import classification_accuracy, exact_match_accuracy, rms_accuracy


def rng(seed=0):
    return np.random.default_rng(seed)


class TestSMT:
    def test_shapes_and_targets(self):
        data = gen_smt(4, 5, 30, rng(), delay=5, E_test=12)
        assert data.train.inputs.shape == (30, 4, 5)
        assert data.test.inputs.shape == (12, 4, 5)
        np.testing.assert_array_equal(data.train.targets, data.train.inputs)
        assert data.T == 9
        assert np.all(np.abs(data.train.inputs) <= 1.0)

    def test_short_delay_length(self):
        assert gen_smt(4, 2, 3, rng(), delay=0).T == 4

    def test_invalid(self):
        with pytest.raises(ConfigError):
            gen_smt(0, 5, 10, rng())
        with pytest.raises(ConfigError):
            gen_smt(4, 5, 10, rng(), delay=-1)


class TestPCT:
    def test_balanced_grid(self):
        grid = make_patch_grid(6, 2, 0.1, rng())
        assert sorted(np.bincount(grid.labels.ravel())) == [18, 18]

    def test_labels_follow_grid(self):
        data = gen_pct(6, 2, 0.1, 500, rng(1))
        grid = patch_grid_of(data)
        x = data.train.inputs[:, 0]
        w = 2.0 / 6
        i = np.floor((x[:, 0] + 1) / w).astype(int)
        j = np.floor((x[:, 1] + 1) / w).astype(int)
        np.testing.assert_array_equal(data.train.labels, grid.labels[i, j])
        np.testing.assert_array_equal(data.train.targets[:, 0].argmax(axis=1), data.train.labels)
        assert data.delay == 0 and data.T == 1

    def test_no_points_in_gaps(self):
        data = gen_pct(6, 2, 0.1, 2000, rng(2))
        x = data.train.inputs[:, 0]
        lines = -1 + np.arange(1, 6) / 3
        assert np.abs(x[..., None] - lines).min() >= 0.05

    def test_three_classes(self):
        data = gen_pct(6, 3, 0.05, 100, rng(3))
        assert data.K == 3
        assert np.all(data.train.targets.sum(axis=-1) == 1)

    def test_invalid(self):
        with pytest.raises(ConfigError):
            make_patch_grid(5, 2, 0.1, rng())
        with pytest.raises(ConfigError):
            make_patch_grid(6, 2, 0.5, rng())


class TestCAT:
    def test_targets_are_successors(self):
        data = gen_cat(10, 110, 200, 100, rng(4))
        cells = ca.decode(data.train.inputs[:, 0])
        np.testing.assert_array_equal(ca.decode(data.train.targets[:, 0]), ca.ca_step(cells, 110))
        np.testing.assert_array_equal(ca.bits_to_state(cells), data.meta["train_states"])
        assert set(np.unique(data.train.inputs)) <= {-1.0, 1.0}
        assert data.delay == 1 and data.T == 2

    def test_uniqueness_accounting(self):
        data = gen_cat(6, 90, 50, 50, rng(5))
        u = split_uniqueness(data)
        tr = set(data.meta["train_states"].tolist())
        te = set(data.meta["test_states"].tolist())
        assert u["shared"] + u["train_only"] == len(tr)
        assert u["shared"] + u["test_only"] == len(te)

    def test_uniqueness_rejects_other_kinds(self):
        with pytest.raises(ConfigError):
            split_uniqueness(gen_smt(1, 1, 2, rng()))


class TestSGT:
    def test_noise_free_sequences(self):
        data = gen_sgt(3, 0.0, 2, 10, 5, 60, rng(6))
        protos, seqs = data.meta["prototypes"], data.meta["sequences"]
        c = data.train.labels
        np.testing.assert_array_equal(data.train.inputs[:, 0], protos[c])
        np.testing.assert_array_equal(data.train.targets, seqs[c])
        assert data.TO == 10 and data.K == 5 and data.T == 10

    def test_noise_level(self):
        data = gen_sgt(3, 0.1, 2, 4, 2, 4000, rng(7))
        resid = data.train.inputs[:, 0] - data.meta["prototypes"][data.train.labels]
        assert np.std(resid) == pytest.approx(0.1, rel=0.05)

    def test_invalid(self):
        with pytest.raises(ConfigError):
            gen_sgt(3, -0.1, 2, 4, 2, 10, rng())


@pytest.mark.parametrize("make", [
    lambda r: gen_smt(2, 3, 4, r),
    lambda r: gen_pct(6, 2, 0.1, 4, r),
    lambda r: gen_cat(5, 110, 4, 4, r),
    lambda r: gen_sgt(3, 0.1, 2, 3, 2, 4, r),
])
def test_dataset_roundtrip(make, tmp_path):
    data = make(rng(8))
    save_dataset(data, tmp_path / "d.json")
    back = load_dataset(tmp_path / "d.json")
    assert isinstance(back, TaskDataset) and back.kind == data.kind
    for split in ("train", "test"):
        a, b = getattr(data, split), getattr(back, split)
        np.testing.assert_array_equal(a.inputs, b.inputs)
        np.testing.assert_array_equal(a.targets, b.targets)
        if a.labels is not None:
            np.testing.assert_array_equal(a.labels, b.labels)
    assert (back.TI, back.TO, back.M, back.K, back.delay) == \
        (data.TI, data.TO, data.M, data.K, data.delay)


def test_generators_are_deterministic():
    a, b = gen_cat(8, 54, 20, 20, rng(9)), gen_cat(8, 54, 20, 20, rng(9))
    np.testing.assert_array_equal(a.test.inputs, b.test.inputs)


class TestScoring:
    def test_rms_perfect_and_hand_value(self):
        z = np.array([1.0, -1.0, 1.0, -1.0])
        assert rms_accuracy(z, z) == 1.0
        # error 1 everywhere against a spread of 1 gives 1/2
        assert rms_accuracy(z + 1.0, z) == pytest.approx(0.5)

    def test_rms_degenerate(self):
        with pytest.raises(DegenerateTargetError):
            rms_accuracy(np.zeros(3), np.ones(3))

    @given(st.integers(0, 1000), st.floats(0.01, 10))
    @settings(max_examples=30)
    def test_rms_scale_invariance(self, seed, k):
        r = rng(seed)
        z, o = r.standard_normal(20), r.standard_normal(20)
        assert rms_accuracy(k * o, k * z) == pytest.approx(rms_accuracy(o, z))
        assert 0.0 < rms_accuracy(o, z) <= 1.0

    def test_classification(self):
        assert classification_accuracy([0, 1, 1, 0], [0, 1, 0, 0]) == 0.75
        with pytest.raises(ConfigError):
            classification_accuracy([0], [0, 1])

    def test_exact_match(self):
        pred = np.array([[1, -1], [1, 1], [-1, -1]])
        true = np.array([[1, -1], [1, -1], [-1, -1]])
        assert exact_match_accuracy(pred, true) == pytest.approx(2 / 3)
        with pytest.raises(ConfigError):
            exact_match_accuracy(pred, true[:2])
