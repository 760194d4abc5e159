"""
해석적 시간 전개 테스트
"""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from tmjcm.dynamics import (SystemConfig, atomic_inversion, evolve, evolve_many, excitation_number,
                            frozen_weight, inversion_series, photon_moments, photon_variances, rabi_frequency,
                            rabi_matrix)
from tmjcm.series import time_grid
from tmjcm.states import CatStateSpec, amplitude_table


@pytest.fixture
def mixed_config():
    return SystemConfig(CatStateSpec(1.3 + 0.4j, 1), CatStateSpec(0.9, -1), k1=2, k2=1,
                        varphi=0.6, phi=0.9, dim1=18, dim2=16)


class TestRabiFrequency:
    def test_single_photon(self):
        assert_allclose(rabi_frequency(1, 1, 0, 0), 1.0)
        assert_allclose(rabi_frequency(1, 1, 3, 8), np.sqrt(4 * 9))

    def test_two_photon(self):
        assert_allclose(rabi_frequency(2, 2, 1, 1), 6.0)

    def test_single_mode_limit(self):
        assert_allclose(rabi_frequency(0, 1, 7, 3), 2.0)

    def test_matrix_matches_scalar(self):
        table = rabi_matrix(2, 1, 5, 4)
        assert_allclose(table[3, 2], rabi_frequency(2, 1, 3, 2))

    def test_negative_argument(self):
        with pytest.raises(ValueError):
            rabi_frequency(1, 1, -1, 0)


class TestSystemConfig:
    def test_both_k_zero(self):
        with pytest.raises(ValueError):
            SystemConfig(CatStateSpec(1.0), CatStateSpec(1.0), k1=0, k2=0)

    def test_truncation_too_small(self):
        with pytest.raises(ValueError):
            SystemConfig(CatStateSpec(1.0), CatStateSpec(1.0), k1=2, k2=1, dim1=2, dim2=5)

    def test_default_truncation(self):
        config = SystemConfig(CatStateSpec(5.0), CatStateSpec(0.5), k1=1, k2=2)
        assert config.dim1 >= 25
        assert config.state_shape == (config.dim1 + 1, config.dim2 + 2)

    def test_with_truncation(self):
        config = SystemConfig.with_truncation(CatStateSpec(0.0), CatStateSpec(0.0), k1=30, k2=1)
        assert config.dim1 == 31


class TestEvolve:
    def test_initial_state_is_product(self, mixed_config):
        state = evolve(mixed_config, 0.0)
        rows, cols = mixed_config.state_shape
        c1 = np.zeros(rows, dtype=complex)
        c2 = np.zeros(cols, dtype=complex)
        c1[:18] = amplitude_table(mixed_config.mode1, 18).coeffs
        c2[:16] = amplitude_table(mixed_config.mode2, 16).coeffs
        assert_allclose(state.psi_plus, np.cos(0.6) * np.outer(c1, c2), atol=1e-15)
        assert_allclose(state.psi_minus, np.exp(0.9j) * np.sin(0.6) * np.outer(c1, c2), atol=1e-15)

    def test_norm_is_conserved(self, mixed_config):
        norm0 = evolve(mixed_config, 0.0).total_norm
        for T in (0.3, 2.7, -4.1, 55.0):
            assert_allclose(evolve(mixed_config, T).total_norm, norm0, rtol=1e-13)

    def test_negative_time_is_even_part(self, mixed_config):
        k1, k2, d1, d2 = mixed_config.k1, mixed_config.k2, mixed_config.dim1, mixed_config.dim2
        plus0 = evolve(mixed_config, 0.0).psi_plus[:d1, k2:k2 + d2]
        rabi = rabi_matrix(k1, k2, d1, d2)
        forward = evolve(mixed_config, 1.7).psi_plus[:d1, k2:k2 + d2]
        backward = evolve(mixed_config, -1.7).psi_plus[:d1, k2:k2 + d2]
        assert_allclose(forward + backward, 2.0 * plus0 * np.cos(1.7 * rabi), atol=1e-14)

    def test_single_mode_rabi_oscillation(self):
        # 바닥 원자 + 모드 2 진공: |-, n1, 0⟩ ↔ |+, n1, 1⟩, Λ = 1
        config = SystemConfig(CatStateSpec(0.0), CatStateSpec(0.0), k1=0, k2=1, varphi=np.pi / 2)
        times = np.linspace(0.0, 5.0, 41)
        assert_allclose(inversion_series(config, times).values, -np.cos(2.0 * times), atol=1e-14)

    def test_dark_state_does_not_evolve(self):
        config = SystemConfig(CatStateSpec(0.0), CatStateSpec(0.0), k1=1, k2=1)
        assert_allclose(frozen_weight(config), 1.0)
        assert_allclose(atomic_inversion(evolve(config, 3.3)), 1.0)

    def test_arrays_are_read_only(self, mixed_config):
        state = evolve(mixed_config, 1.0)
        with pytest.raises(ValueError):
            state.psi_plus[0, 0] = 1.0

    def test_rejects_non_config(self):
        with pytest.raises(ValueError):
            evolve({'k1': 1}, 1.0)

    def test_evolve_many(self, mixed_config):
        states = list(evolve_many(mixed_config, [0.0, 0.5, 1.0]))
        assert [s.T for s in states] == [0.0, 0.5, 1.0]


class TestInversion:
    def test_series_matches_states(self, mixed_config):
        times = np.linspace(0.0, 12.0, 300)
        series = inversion_series(mixed_config, times)
        direct = [atomic_inversion(evolve(mixed_config, T)) for T in times[::37]]
        assert_allclose(series.values[::37], direct, atol=1e-12)

    def test_excited_atom_starts_at_one(self):
        config = SystemConfig(CatStateSpec(2.0, 1), CatStateSpec(2.0, 1))
        assert_allclose(inversion_series(config, [0.0, 1e-9]).values[0], 1.0, atol=1e-12)


class TestPhotonStatistics:
    def test_coherent_moments(self):
        config = SystemConfig(CatStateSpec(2.0), CatStateSpec(1.5))
        moments = photon_moments(evolve(config, 0.0))
        assert_allclose(moments.mean1, 4.0, rtol=1e-10)
        assert_allclose(moments.var1, 4.0, rtol=1e-9)
        assert_allclose(moments.correlation, 0.0, atol=1e-9)

    def test_excitation_number_is_conserved(self, mixed_config):
        k1, k2 = mixed_config.k1, mixed_config.k2
        initial = excitation_number(evolve(mixed_config, 0.0), k1, k2)
        for T in (0.4, 3.9, 17.0):
            assert_allclose(excitation_number(evolve(mixed_config, T), k1, k2), initial, rtol=1e-12)

    def test_variance_combinations(self, mixed_config):
        variances = photon_variances(evolve(mixed_config, 2.2))
        assert set(variances) == {'var1', 'var2', 'var_sum', 'var_diff'}
        assert_allclose(variances['var_sum'] + variances['var_diff'],
                        2.0 * (variances['var1'] + variances['var2']), rtol=1e-12)

    def test_even_cat_variance_from_amplitudes(self):
        spec = CatStateSpec(1.3, 1)
        config = SystemConfig(spec, CatStateSpec(0.8, 1))
        p = np.abs(amplitude_table(spec, config.dim1).coeffs) ** 2
        n = np.arange(config.dim1)
        expected = np.sum(p * n ** 2) - np.sum(p * n) ** 2
        assert_allclose(photon_variances(evolve(config, 0.0))['var1'], expected, rtol=1e-10)

        intensity = 1.3 ** 2
        closed_form = intensity ** 2 + intensity * np.tanh(intensity) - (intensity * np.tanh(intensity)) ** 2
        assert_allclose(expected, closed_form, rtol=1e-10)

    def test_variances_match_explicit_sums(self):
        config = SystemConfig(CatStateSpec(1.3, 1), CatStateSpec(0.8, -1), k1=2, k2=1, varphi=0.4)
        state = evolve(config, 2.3)
        m1 = m2 = s1 = s2 = c = 0.0
        rows, cols = state.shape
        for psi in state.branches:
            for n1 in range(rows):
                for n2 in range(cols):
                    weight = abs(psi[n1, n2]) ** 2
                    m1 += weight * n1
                    m2 += weight * n2
                    s1 += weight * n1 ** 2
                    s2 += weight * n2 ** 2
                    c += weight * n1 * n2
        var1, var2, cov = s1 - m1 ** 2, s2 - m2 ** 2, c - m1 * m2
        variances = photon_variances(state)
        assert_allclose(variances['var1'], var1, rtol=1e-10)
        assert_allclose(variances['var2'], var2, rtol=1e-10)
        assert_allclose(variances['var_sum'], var1 + var2 + 2.0 * cov, rtol=1e-10)
        assert_allclose(variances['var_diff'], var1 + var2 - 2.0 * cov, rtol=1e-10)

    def test_sum_mode_variance_is_steady(self):
        config = SystemConfig(CatStateSpec(5.0, 1), CatStateSpec(5.0, 1))
        rows = [photon_variances(state) for state in evolve_many(config, time_grid(0.0, 20.0, 400))]
        var_sum = np.array([row['var_sum'] for row in rows])
        assert_allclose(var_sum, var_sum[0], rtol=1e-9)
        assert np.ptp([row['var1'] for row in rows]) > 0.1
        assert np.ptp([row['var_diff'] for row in rows]) > 0.1
