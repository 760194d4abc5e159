"""
고양이 상태 진폭 테스트
"""

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.stats import poisson

from tmjcm.states import (MIN_TRUNCATION, CatStateSpec, amplitude, amplitude_table, choose_truncation,
                          normalization, photon_mean)


class TestCatStateSpec:
    def test_rejects_unknown_epsilon(self):
        with pytest.raises(ValueError):
            CatStateSpec(1.0, 2)

    def test_rejects_vacuum_odd_cat(self):
        with pytest.raises(ValueError):
            CatStateSpec(0.0, -1)

    def test_alpha_is_complex(self):
        assert isinstance(CatStateSpec(2, 1).alpha, complex)


class TestAmplitudes:
    def test_coherent_normalization(self):
        assert_allclose(normalization(CatStateSpec(3.0, 0)), 1.0)

    def test_even_cat_normalization(self):
        alpha = 0.7
        expected = (2.0 + 2.0 * np.exp(-2.0 * alpha ** 2)) ** -0.5
        assert_allclose(normalization(CatStateSpec(alpha, 1)), expected, rtol=1e-14)

    @pytest.mark.parametrize("epsilon", [-1, 0, 1])
    def test_table_is_normalized(self, epsilon):
        spec = CatStateSpec(2.0 + 1.0j, epsilon)
        table = amplitude_table(spec, choose_truncation(spec.alpha))
        assert_allclose(table.captured_norm, 1.0, atol=1e-12)

    def test_even_cat_has_only_even_photons(self):
        coeffs = amplitude_table(CatStateSpec(1.5, 1), 20).coeffs
        assert np.all(coeffs[1::2] == 0)
        assert np.all(np.abs(coeffs[0::2]) > 0)

    def test_odd_cat_has_only_odd_photons(self):
        coeffs = amplitude_table(CatStateSpec(1.5, -1), 20).coeffs
        assert np.all(coeffs[0::2] == 0)

    def test_vacuum_even_cat_is_vacuum(self):
        assert_allclose(amplitude(CatStateSpec(0.0, 1), 0), 1.0)
        assert amplitude(CatStateSpec(0.0, 1), 3) == 0

    def test_coherent_phase(self):
        alpha = 1.2 * np.exp(0.4j)
        c3 = amplitude(CatStateSpec(alpha, 0), 3)
        assert_allclose(np.angle(c3), 1.2, atol=1e-12)

    def test_single_amplitude_matches_table(self):
        spec = CatStateSpec(1.1 - 0.3j, 1)
        table = amplitude_table(spec, 12)
        assert_allclose(amplitude(spec, 6), table.coeffs[6])

    def test_negative_photon_number(self):
        with pytest.raises(ValueError):
            amplitude(CatStateSpec(1.0), -1)


class TestTruncation:
    def test_tail_below_tolerance(self):
        dim = choose_truncation(5.0, 1e-12)
        assert dim >= 25
        assert poisson.sf(dim - 1, 25.0) < 1e-12

    def test_vacuum_minimum(self):
        assert choose_truncation(0.0) == MIN_TRUNCATION

    def test_invalid_tolerance(self):
        with pytest.raises(ValueError):
            choose_truncation(1.0, 0.0)


class TestPhotonMean:
    def test_coherent(self):
        assert_allclose(photon_mean(CatStateSpec(2.0, 0)), 4.0)

    def test_even_and_odd_cats(self):
        assert_allclose(photon_mean(CatStateSpec(1.0, 1)), np.tanh(1.0), rtol=1e-12)
        assert_allclose(photon_mean(CatStateSpec(1.0, -1)), 1.0 / np.tanh(1.0), rtol=1e-12)

    def test_matches_table(self):
        spec = CatStateSpec(1.7, 1)
        coeffs = amplitude_table(spec, 40).coeffs
        assert_allclose(photon_mean(spec), np.sum(np.arange(40) * np.abs(coeffs) ** 2), rtol=1e-10)
