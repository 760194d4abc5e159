"""
Pegg-Barnett 위상 관측량 테스트
"""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from tmjcm.dynamics import SystemConfig, evolve
from tmjcm.numerics import PeriodicGrid
from tmjcm.phase import (ANALYTIC, QUADRATURE, PhaseVariances, distribution_peaks, joint_distribution,
                         marginal_distribution, phase_moments, phase_variance_series, phase_variances)
from tmjcm.analysis import detect_revivals, revival_spacing
from tmjcm.series import time_grid
from tmjcm.states import CatStateSpec

MOMENT_FIELDS = ('mean1', 'mean2', 'mean_sq1', 'mean_sq2', 'cross')


@pytest.fixture
def small_state():
    config = SystemConfig(CatStateSpec(0.7 + 0.2j, 1), CatStateSpec(0.5, 0), k1=1, k2=2,
                          varphi=0.5, phi=0.3, dim1=4, dim2=5)
    return evolve(config, 1.9)


def literal_joint(state, grid1, grid2):
    """P(Θ₁, Θ₂) = (1/4π²) Σ_± |Σ_{n1,n2} ψ_±[n1, n2] e^{-i n1 Θ₁ - i n2 Θ₂}|²"""
    rows, cols = state.shape
    values = np.zeros((grid1.count, grid2.count))
    for i, t1 in enumerate(grid1.points):
        for j, t2 in enumerate(grid2.points):
            for psi in state.branches:
                total = 0.0j
                for n1 in range(rows):
                    for n2 in range(cols):
                        total += psi[n1, n2] * np.exp(-1j * (n1 * t1 + n2 * t2))
                values[i, j] += abs(total) ** 2
    return values / (4.0 * np.pi ** 2)


class TestDistributions:
    def test_joint_matches_literal_sum(self, small_state):
        grid1, grid2 = PeriodicGrid(12), PeriodicGrid(16)
        dist = joint_distribution(small_state, grid1, grid2)
        assert_allclose(dist.values, literal_joint(small_state, grid1, grid2), atol=1e-14)

    def test_joint_is_normalized(self, small_state):
        dist = joint_distribution(small_state, PeriodicGrid(16), PeriodicGrid(16))
        assert_allclose(dist.total, small_state.total_norm, rtol=1e-12)

    @pytest.mark.parametrize("mode", [1, 2])
    def test_marginal_matches_joint(self, small_state, mode):
        grid = PeriodicGrid(32)
        joint = joint_distribution(small_state, grid, grid)
        direct = marginal_distribution(small_state, mode, grid)
        assert_allclose(direct.values, joint.marginal(mode).values, atol=1e-13)
        assert_allclose(direct.total, small_state.total_norm, rtol=1e-12)

    def test_coherent_phase_peak(self):
        config = SystemConfig(CatStateSpec(2.0 * np.exp(0.5j)), CatStateSpec(1.0))
        dist = marginal_distribution(evolve(config, 0.0), 1, PeriodicGrid(512))
        peaks = distribution_peaks(dist)
        assert len(peaks) == 1
        assert_allclose(peaks[0], 0.5, atol=2.0 * np.pi / 512)

    def test_even_cat_has_two_peaks(self):
        config = SystemConfig(CatStateSpec(2.5, 1), CatStateSpec(1.0))
        dist = marginal_distribution(evolve(config, 0.0), 1, PeriodicGrid(256))
        assert_allclose(distribution_peaks(dist), [-np.pi, 0.0], atol=1e-12)

    def test_grid_must_exceed_truncation(self):
        config = SystemConfig(CatStateSpec(1.0), CatStateSpec(1.0), dim1=11, dim2=11)
        state = evolve(config, 0.5)
        with pytest.raises(ValueError):
            marginal_distribution(state, 1, PeriodicGrid(8))
        with pytest.raises(ValueError):
            joint_distribution(state, PeriodicGrid(16), PeriodicGrid(8))

    def test_invalid_mode(self, small_state):
        with pytest.raises(ValueError):
            marginal_distribution(small_state, 3, PeriodicGrid(16))


class TestMoments:
    def test_routes_agree(self, small_state):
        analytic = phase_moments(small_state, method=ANALYTIC)
        quadrature = phase_moments(small_state, count=32, method=QUADRATURE)
        for name in MOMENT_FIELDS:
            assert_allclose(getattr(analytic, name), getattr(quadrature, name), atol=1e-12)

    def test_vacuum_is_uniform(self):
        config = SystemConfig(CatStateSpec(0.0), CatStateSpec(0.0))
        variances = phase_variances(evolve(config, 0.0))
        assert_allclose(variances.var1, np.pi ** 2 / 3.0, rtol=1e-13)
        assert_allclose(variances.h12, 0.0, atol=1e-13)
        assert_allclose(variances.var_sum, 2.0 * np.pi ** 2 / 3.0, rtol=1e-13)

    def test_quadrature_grid_too_small(self, small_state):
        with pytest.raises(ValueError):
            phase_moments(small_state, count=8, method=QUADRATURE)

    def test_unknown_method(self, small_state):
        with pytest.raises(ValueError):
            phase_moments(small_state, method='monte-carlo')

    def test_variance_combinations(self):
        variances = PhaseVariances.from_moments(phase_moments(evolve(
            SystemConfig(CatStateSpec(1.1, 1), CatStateSpec(0.8, 0), dim1=10, dim2=10), 2.0)))
        assert_allclose(variances.var_sum - variances.var_diff, 2.0 * variances.h12)


class TestVarianceSeries:
    def test_series_matches_pointwise(self):
        config = SystemConfig(CatStateSpec(1.1, 1), CatStateSpec(0.8, 0), dim1=10, dim2=10)
        times = np.linspace(0.0, 3.0, 7)
        series = phase_variance_series(config, times)
        assert set(series) == {'var1', 'var2', 'var_sum', 'var_diff', 'h12'}
        direct = phase_variances(evolve(config, times[4]))
        assert_allclose(series['var1'].values[4], direct.var1, rtol=1e-13)
        assert_allclose(series['h12'].values[4], direct.h12, atol=1e-13)


class TestRealAmplitudeSymmetry:
    @pytest.mark.parametrize("eps1, eps2, k1, k2", [(0, 0, 1, 1), (1, 1, 2, 1), (1, -1, 1, 2)])
    def test_joint_reflection(self, eps1, eps2, k1, k2):
        config = SystemConfig(CatStateSpec(2.0, eps1), CatStateSpec(1.5, eps2), k1=k1, k2=k2)
        grid = PeriodicGrid(64)
        for T in (0.0, 1.7, 5.3):
            values = joint_distribution(evolve(config, T), grid, grid).values
            # Θ → -Θ maps grid index j to (count - j) mod count
            reflected = np.roll(values[::-1, ::-1], 1, axis=(0, 1))
            assert_allclose(reflected, values, atol=1e-14)

    @pytest.mark.parametrize("T", [0.0, 2.4, 7.9])
    def test_mean_phase_vanishes(self, T):
        config = SystemConfig(CatStateSpec(2.0, 1), CatStateSpec(1.5, 0))
        moments = phase_moments(evolve(config, T))
        assert_allclose(moments.mean1, 0.0, atol=1e-12)
        assert_allclose(moments.mean2, 0.0, atol=1e-12)


@pytest.mark.slow
class TestFigurePhaseStructure:
    def test_coherent_collapse_has_two_peaks(self):
        config = SystemConfig(CatStateSpec(5.0), CatStateSpec(5.0))
        peaks = distribution_peaks(marginal_distribution(evolve(config, 4.42), 1, PeriodicGrid(512)))
        assert len(peaks) == 2
        assert_allclose(np.sort(peaks), [-2.0 * np.pi / 3.0, 2.0 * np.pi / 3.0], atol=0.3)

    def test_coherent_revival_has_edge_wings(self):
        config = SystemConfig(CatStateSpec(5.0), CatStateSpec(5.0))
        dist = marginal_distribution(evolve(config, 6.2999), 1, PeriodicGrid(512))
        assert abs(dist.grid.points[np.argmax(dist.values)]) > np.pi - 0.3

    def test_even_cat_collapse_has_four_peaks(self):
        config = SystemConfig(CatStateSpec(5.0, 1), CatStateSpec(5.0, 1))
        peaks = distribution_peaks(marginal_distribution(evolve(config, 1.8), 1, PeriodicGrid(512)))
        assert len(peaks) == 4

    def test_coherent_variance_settles_at_random_phase(self):
        config = SystemConfig(CatStateSpec(5.0), CatStateSpec(5.0))
        var1 = phase_variance_series(config, time_grid(0.0, 30.0, 3000))['var1']
        assert_allclose(np.mean(var1.values), np.pi ** 2 / 3.0, rtol=0.05)
        assert len(detect_revivals(var1).centers) >= 2

    @pytest.mark.parametrize("alpha", [5.0, 6.0])
    def test_two_photon_variance_period(self, alpha):
        config = SystemConfig(CatStateSpec(alpha, 1), CatStateSpec(alpha, 1), k1=2, k2=2)
        var1 = phase_variance_series(config, time_grid(0.0, 10.0, 2000))['var1']
        assert_allclose(revival_spacing(detect_revivals(var1)), np.pi / 2.0, rtol=0.1)
