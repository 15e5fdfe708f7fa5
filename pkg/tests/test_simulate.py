import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sglss.model import ValidationError
from sglss.simulate import (
    GroundTruth,
    gen_scenario1,
    gen_scenario2,
    lattice_grid,
    rescale_beta,
    sample_gp,
)

finite_vec = st.lists(
    st.floats(-1e6, 1e6, allow_nan=False), min_size=1, max_size=30
).map(np.array).filter(lambda v: np.max(np.abs(v)) >= 1e-6)


@pytest.fixture(scope="module")
def s1():
    return gen_scenario1(seed=0)


class TestGrid:
    def test_unit_square_extent(self):
        g = lattice_grid(30)
        assert g.p == 900
        assert g.coords.min() == 0.0 and g.coords.max() == 1.0
        # neighboring sites sit 1/29 apart
        assert g.coords[1, 1] - g.coords[0, 1] == pytest.approx(1 / 29)

    def test_row_major_order(self):
        g = lattice_grid(3)
        expect = np.array(
            [
                [0, 0], [0, 0.5], [0, 1],
                [0.5, 0], [0.5, 0.5], [0.5, 1],
                [1, 0], [1, 0.5], [1, 1],
            ]
        )
        np.testing.assert_allclose(g.coords, expect)


class TestSampleGp:
    def test_identity_cov_unit_variance(self):
        rng = np.random.default_rng(0)
        draws = np.array([sample_gp(np.zeros(4), np.eye(4), rng) for _ in range(10)])
        # cheap shape check; the real moment check below uses one big draw
        assert draws.shape == (10, 4)
        big = np.array(
            [sample_gp(np.zeros(1), np.eye(1), rng)[0] for _ in range(10**5)]
        )
        se_var = np.sqrt(2.0 / (big.size - 1))
        assert abs(big.var(ddof=1) - 1.0) < 3 * se_var
        assert abs(big.mean()) < 3 / np.sqrt(big.size)

    def test_zero_variance_limit(self):
        rng = np.random.default_rng(1)
        mean = np.array([2.0, -3.0, 0.5])
        draw = sample_gp(mean, 1e-20 * np.eye(3), rng)
        np.testing.assert_allclose(draw, mean, atol=1e-8)

    def test_not_spd_rejected(self):
        rng = np.random.default_rng(2)
        with pytest.raises(ValidationError):
            sample_gp(np.zeros(2), np.array([[1.0, 0.0], [0.0, -1.0]]), rng)

    def test_matern_covariance_recovered(self):
        # empirical covariance of GP draws on the simulation grid matches
        # the generating kernel; entrywise z-scores behave like N(0,1)
        from sglss.kernels import build_psi
        from sglss.simulate import TRUE_KERNEL

        grid = lattice_grid(30)
        psi = build_psi(grid, TRUE_KERNEL)
        Sigma = psi.Psi - psi.jitter * np.eye(grid.p)
        rng = np.random.default_rng(3)
        N = 10**4
        E = rng.standard_normal((N, grid.p))
        Z = E @ psi.chol.T  # N zero-mean draws in one matmul
        emp = (Z.T @ Z) / N
        d = np.diag(Sigma)
        se = np.sqrt((np.outer(d, d) + Sigma**2) / N)
        z = (emp - Sigma) / se
        frac_in = np.mean(np.abs(z) < 3)
        assert frac_in > 0.99  # 3-sigma coverage, expected 0.9973
        assert np.max(np.abs(z)) < 6.5  # 810k N(0,1) variates stay below


class TestRescale:
    def test_positive_fixture(self):
        np.testing.assert_allclose(rescale_beta([1.0, 2.0]), [0.75, 1.0])

    def test_negative_fixture(self):
        np.testing.assert_allclose(rescale_beta([-2.0, 1.0]), [-1.0, -0.25])

    def test_scalar_collapses(self):
        for c in (0.1, 1.0, 37.5):
            assert rescale_beta([c]) == pytest.approx([1.0])
        assert rescale_beta([-4.0]) == pytest.approx([-1.0])

    def test_all_zero_rejected(self):
        with pytest.raises(ValidationError):
            rescale_beta(np.zeros(5))

    def test_random_fields_have_no_zeros(self):
        rng = np.random.default_rng(4)
        for _ in range(200):
            out = rescale_beta(rng.standard_normal(50))
            assert np.all(out != 0.0)

    @settings(max_examples=300, deadline=None)
    @given(finite_vec)
    def test_extreme_site_maps_to_unit(self, bt):
        out = rescale_beta(bt)
        idx = int(np.argmax(np.abs(bt)))
        assert out[idx] == np.sign(bt[idx])  # exact in floating point

    @settings(max_examples=300, deadline=None)
    @given(finite_vec)
    def test_range_matches_extreme_sign(self, bt):
        out = rescale_beta(bt)
        if bt[int(np.argmax(np.abs(bt)))] > 0:
            assert np.all(out >= 0.0) and np.all(out <= 1.0)
        else:
            assert np.all(out >= -1.0) and np.all(out <= 0.0)


class TestScenario1:
    def test_support_counts_exact(self, s1):
        _, truth = s1
        p = 900
        nonzero = truth.support_true.sum(axis=1)
        expect = {
            1: p, 2: 810, 3: 720, 4: 630, 5: 540,
            6: p, 7: 810, 8: 720,
        }
        for j, cnt in expect.items():
            assert nonzero[j - 1] == cnt, f"covariate {j}"
        assert np.all(nonzero[8:] == 0)

    def test_influential_flags(self, s1):
        _, truth = s1
        assert truth.influential_global[:8].all()
        assert not truth.influential_global[8:].any()

    def test_intercept_fully_nonzero(self, s1):
        _, truth = s1
        assert np.all(truth.beta_true[0] != 0.0)

    def test_covariate_types(self, s1):
        data, _ = s1
        for j in (6, 7, 8):
            assert set(np.unique(data.X[:, j - 1])) <= {0.0, 1.0}
        for j in (1, 2, 3, 4, 5, 9, 12, 15):
            assert np.unique(data.X[:, j - 1]).size == data.n

    def test_rescaled_fields_in_unit_band(self, s1):
        _, truth = s1
        live = truth.beta_true[1:9]
        assert np.all(np.abs(live) <= 1.0)
        # zeroing leaves the surviving sites untouched from the rescale
        assert np.max(np.abs(live)) == 1.0

    def test_noise_variance_near_one(self, s1):
        data, truth = s1
        resid = (data.Y - truth.Z_true).ravel()
        se_var = np.sqrt(2.0 / (resid.size - 1))
        assert abs(resid.var(ddof=1) - truth.sigma2_eps_true) < 3 * se_var

    def test_sigma_true_is_kernel_gram(self, s1):
        _, truth = s1
        S = truth.Sigma_true
        assert np.array_equal(S, S.T)
        np.testing.assert_allclose(np.diag(S), 1.0, atol=1e-12)

    def test_dimensions(self, s1):
        data, truth = s1
        assert data.Y.shape == (100, 900)
        assert data.X.shape == (100, 15)
        assert truth.beta_true.shape == (16, 900)
        assert truth.Z_true.shape == (100, 900)
        assert np.all(np.isfinite(data.Y))

    def test_determinism(self):
        d1, t1 = gen_scenario1(seed=7, n=5, side=8)
        d2, t2 = gen_scenario1(seed=7, n=5, side=8)
        assert np.array_equal(d1.Y, d2.Y)
        assert np.array_equal(d1.X, d2.X)
        assert np.array_equal(t1.beta_true, t2.beta_true)
        d3, _ = gen_scenario1(seed=8, n=5, side=8)
        assert not np.array_equal(d1.Y, d3.Y)

    def test_truth_invariants_validated(self, s1):
        _, truth = s1
        broken = dict(
            beta_true=truth.beta_true,
            support_true=~truth.support_true,
            influential_global=truth.influential_global,
            generator_seed=truth.generator_seed,
            scenario=truth.scenario,
            pi_target=None,
            Z_true=truth.Z_true,
            Sigma_true=truth.Sigma_true,
            sigma2_eps_true=truth.sigma2_eps_true,
        )
        with pytest.raises(ValidationError):
            GroundTruth(**broken)


class TestScenario2:
    def test_nine_percent_square(self):
        _, truth = gen_scenario2(0.09, seed=3, n=5)
        counts = truth.support_true.sum(axis=1)
        assert np.all(counts[:8] == 81)
        assert np.all(counts[8:] == 0)
        # support really is one axis-aligned 9x9 square
        for j in range(8):
            mask = truth.support_true[j].reshape(30, 30)
            rows = np.flatnonzero(mask.any(axis=1))
            cols = np.flatnonzero(mask.any(axis=0))
            assert rows.size == 9 and cols.size == 9
            assert np.all(np.diff(rows) == 1) and np.all(np.diff(cols) == 1)
            assert mask[np.ix_(rows, cols)].all()

    def test_eighteen_eight_percent_square(self):
        _, truth = gen_scenario2(0.188, seed=3, n=5)
        counts = truth.support_true.sum(axis=1)
        assert np.all(counts[:8] == 169)

    def test_ten_percent_not_square(self):
        with pytest.raises(ValidationError):
            gen_scenario2(0.10, seed=0, n=5)

    def test_oversized_square_rejected(self):
        with pytest.raises(ValidationError):
            gen_scenario2(4.0, seed=0, n=2, side=10)

    def test_placement_uniform(self):
        # 1250 seeds x 8 independent per-covariate streams = 1e4 corners
        # on a 10x10 grid with 3x3 squares: 64 feasible corners
        side, s, n_seeds = 10, 3, 1250
        cells = (side - s + 1) ** 2
        counts = np.zeros(cells, dtype=np.int64)
        for seed in range(n_seeds):
            _, truth = gen_scenario2(0.09, seed=seed, n=2, side=side)
            for j in range(8):
                mask = truth.support_true[j].reshape(side, side)
                r0 = int(mask.any(axis=1).argmax())
                c0 = int(mask.any(axis=0).argmax())
                counts[r0 * (side - s + 1) + c0] += 1
        N = n_seeds * 8
        expect = N / cells
        se = np.sqrt(N * (1 / cells) * (1 - 1 / cells))
        assert np.all(np.abs(counts - expect) < 5 * se)
        # chi-square aggregate: mean 63, sd sqrt(2*63)
        chi2 = np.sum((counts - expect) ** 2 / expect)
        assert abs(chi2 - (cells - 1)) < 5 * np.sqrt(2 * (cells - 1))

    def test_determinism(self):
        d1, t1 = gen_scenario2(0.09, seed=11, n=4, side=10)
        d2, t2 = gen_scenario2(0.09, seed=11, n=4, side=10)
        assert np.array_equal(d1.Y, d2.Y)
        assert np.array_equal(t1.beta_true, t2.beta_true)
