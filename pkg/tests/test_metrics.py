import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sglss.metrics import (
    mean_se,
    mse,
    precision_recall_f1,
    selection_report,
)
from sglss.model import ValidationError

mask_pair = st.integers(1, 40).flatmap(
    lambda n: st.tuples(
        st.lists(st.booleans(), min_size=n, max_size=n).map(np.array),
        st.lists(st.booleans(), min_size=n, max_size=n).map(np.array),
    )
)


class TestPrecisionRecallF1:
    def test_perfect_selection(self):
        m = precision_recall_f1([True, False, True], [True, False, True])
        assert (m.precision, m.recall, m.f1) == (1.0, 1.0, 1.0)
        assert (m.tp, m.fp, m.fn, m.tn) == (2, 0, 0, 1)

    def test_empty_selection_undefined_precision(self):
        m = precision_recall_f1([False, False], [True, False])
        assert m.precision is None
        assert m.recall == 0.0
        assert m.f1 is None

    def test_counts_fixture(self):
        # tp=2, fp=1, fn=1 -> P = R = F1 = 2/3
        m = precision_recall_f1(
            [True, True, True, False, False],
            [True, True, False, True, False],
        )
        assert (m.tp, m.fp, m.fn, m.tn) == (2, 1, 1, 1)
        assert m.precision == pytest.approx(2 / 3)
        assert m.recall == pytest.approx(2 / 3)
        assert m.f1 == pytest.approx(2 / 3)

    def test_empty_truth_undefined_recall(self):
        m = precision_recall_f1([True, False], [False, False])
        assert m.recall is None
        assert m.precision == 0.0
        assert m.f1 is None

    def test_zero_precision_and_recall_gives_zero_f1(self):
        m = precision_recall_f1([True, False], [False, True])
        assert m.precision == 0.0 and m.recall == 0.0
        assert m.f1 == 0.0  # defined: both ratios exist

    def test_undefined_is_none_not_zero(self):
        m = precision_recall_f1([False], [False])
        assert m.precision is None and m.recall is None and m.f1 is None
        d = m.as_dict()
        assert d["precision"] is None and d["f1"] is None

    def test_size_mismatch_rejected(self):
        with pytest.raises(ValidationError):
            precision_recall_f1([True], [True, False])

    @settings(max_examples=300, deadline=None)
    @given(mask_pair)
    def test_counts_partition_universe(self, masks):
        sel, tru = masks
        m = precision_recall_f1(sel, tru)
        assert m.tp + m.fp + m.fn + m.tn == sel.size

    @settings(max_examples=300, deadline=None)
    @given(mask_pair)
    def test_f1_between_precision_and_recall(self, masks):
        sel, tru = masks
        m = precision_recall_f1(sel, tru)
        if m.f1 is not None and m.precision is not None and m.recall is not None:
            lo, hi = sorted([m.precision, m.recall])
            assert lo - 1e-12 <= m.f1 <= hi + 1e-12
            # harmonic-mean identity
            if m.precision + m.recall > 0:
                assert m.f1 == pytest.approx(
                    2 * m.precision * m.recall / (m.precision + m.recall)
                )


class TestMse:
    def test_identical_is_zero(self):
        a = np.arange(12.0).reshape(3, 4)
        assert mse(a, a) == 0.0

    def test_hand_fixture(self):
        assert mse([0.0, 0.0], [1.0, -1.0]) == pytest.approx(1.0)

    def test_symmetric(self):
        rng = np.random.default_rng(0)
        a, b = rng.normal(size=7), rng.normal(size=7)
        assert mse(a, b) == mse(b, a)

    def test_quadratic_scaling(self):
        rng = np.random.default_rng(1)
        t = rng.normal(size=20)
        err = rng.normal(size=20)
        base = mse(t, t + err)
        assert mse(t, t + 3 * err) == pytest.approx(9 * base)

    def test_scalar_inputs(self):
        assert mse(2.0, 3.5) == pytest.approx(2.25)

    def test_shape_mismatch_rejected(self):
        with pytest.raises(ValidationError):
            mse(np.zeros(3), np.zeros(4))


class TestSelectionReport:
    def test_local_only_for_influential(self):
        q, p = 4, 6
        truth_support = np.zeros((q, p), dtype=bool)
        truth_support[0, :3] = True
        truth_support[2, :] = True
        influential = truth_support.any(axis=1)  # covariates 1 and 3
        sel_g = np.array([True, False, True, False])
        sel_l = truth_support.copy()
        rep = selection_report(sel_g, sel_l, influential, truth_support)
        assert set(rep["local"].keys()) == {"1", "3"}
        assert rep["global"]["f1"] == 1.0
        assert rep["local"]["1"]["f1"] == 1.0
        assert rep["local_f1_mean"] == 1.0

    def test_partial_local_recovery(self):
        truth_support = np.array([[True, True, False, False]])
        sel_l = np.array([[True, False, True, False]])
        rep = selection_report(
            [True], sel_l, [True], truth_support
        )
        m = rep["local"]["1"]
        assert m["tp"] == 1 and m["fp"] == 1 and m["fn"] == 1
        assert rep["local_f1_mean"] == pytest.approx(0.5)

    def test_no_influential_covariates(self):
        rep = selection_report(
            [False, False],
            np.zeros((2, 3), dtype=bool),
            [False, False],
            np.zeros((2, 3), dtype=bool),
        )
        assert rep["local"] == {}
        assert rep["local_f1_mean"] is None


class TestMeanSe:
    def test_basic(self):
        out = mean_se([1.0, 2.0, 3.0])
        assert out["mean"] == pytest.approx(2.0)
        assert out["se"] == pytest.approx(1.0 / np.sqrt(3.0))
        assert out["n"] == 3

    def test_skips_undefined(self):
        out = mean_se([1.0, None, 3.0, float("nan")])
        assert out["mean"] == pytest.approx(2.0)
        assert out["n"] == 2

    def test_single_value_has_no_se(self):
        out = mean_se([5.0])
        assert out["mean"] == 5.0 and out["se"] is None and out["n"] == 1

    def test_all_undefined(self):
        out = mean_se([None, None])
        assert out == {"mean": None, "se": None, "n": 0}
