"""
수치 적분 검증 모듈 테스트
"""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from oracle import (DenseStateVector, RungeKuttaIntegrator, build_hamiltonian, excitation_operator,
                    initial_vector, max_coupling, to_dense)
from oracle.hamiltonian import EXCITED, GROUND, annihilation, basis_index, product_dims
from tmjcm.dynamics import SystemConfig, evolve
from tmjcm.states import CatStateSpec


@pytest.fixture
def small_config():
    return SystemConfig(CatStateSpec(0.9, 1), CatStateSpec(0.5 + 0.3j, 0), k1=2, k2=1,
                        varphi=0.4, phi=0.3, dim1=6, dim2=6)


@pytest.fixture
def integrator():
    return RungeKuttaIntegrator()


class TestHamiltonian:
    def test_is_hermitian(self, small_config):
        h = build_hamiltonian(small_config).toarray()
        assert_allclose(h, h.conj().T, atol=0.0)

    def test_coupling_elements(self):
        config = SystemConfig(CatStateSpec(0.5), CatStateSpec(0.5), dim1=3, dim2=3)
        dims = product_dims(config)
        h = build_hamiltonian(config)
        assert_allclose(h[basis_index(EXCITED, 0, 1, dims), basis_index(GROUND, 1, 0, dims)], 1.0)
        assert_allclose(h[basis_index(EXCITED, 1, 2, dims), basis_index(GROUND, 2, 1, dims)], 2.0)
        assert h[basis_index(EXCITED, 0, 0, dims), basis_index(GROUND, 0, 0, dims)] == 0.0

    def test_max_coupling(self):
        config = SystemConfig(CatStateSpec(0.5), CatStateSpec(0.5), dim1=3, dim2=3)
        assert_allclose(max_coupling(build_hamiltonian(config)), 3.0)

    def test_annihilation_single_level(self):
        assert annihilation(1).nnz == 0

    def test_basis_index_range(self):
        with pytest.raises(ValueError):
            basis_index(EXCITED, 4, 0, (4, 4))
        with pytest.raises(ValueError):
            basis_index(2, 0, 0, (4, 4))

    def test_excitation_commutes(self, small_config):
        h = build_hamiltonian(small_config)
        n = excitation_operator(small_config)
        commutator = (h @ n - n @ h).toarray()
        assert_allclose(commutator, 0.0, atol=1e-12)


class TestDenseStateVector:
    def test_wrong_length(self):
        with pytest.raises(ValueError):
            DenseStateVector(np.zeros(7), (2, 2))

    def test_fidelity_dimension_mismatch(self):
        a = DenseStateVector(np.ones(8), (2, 2))
        b = DenseStateVector(np.ones(18), (3, 3))
        with pytest.raises(ValueError):
            a.fidelity(b)

    def test_fidelity_ignores_global_phase(self):
        amplitudes = np.arange(1.0, 9.0) + 1j
        a = DenseStateVector(amplitudes, (2, 2))
        b = DenseStateVector(np.exp(0.7j) * 3.0 * amplitudes, (2, 2))
        assert_allclose(a.fidelity(b), 1.0)

    def test_initial_vector_matches_analytic(self, small_config):
        assert_allclose(initial_vector(small_config), to_dense(evolve(small_config, 0.0)).amplitudes, atol=1e-15)

    def test_branches_round_trip(self, small_config):
        state = evolve(small_config, 0.8)
        plus, minus = to_dense(state).branches()
        assert_allclose(plus, state.psi_plus)
        assert_allclose(minus, state.psi_minus)


class TestIntegrator:
    def test_two_level_block(self, integrator):
        config = SystemConfig(CatStateSpec(0.5), CatStateSpec(0.5), dim1=3, dim2=3)
        dims = product_dims(config)
        h = build_hamiltonian(config)
        psi = np.zeros(2 * dims[0] * dims[1], dtype=complex)
        psi[basis_index(GROUND, 1, 0, dims)] = 1.0
        out = integrator.advance(h, psi, np.pi / 2, 2000)
        assert_allclose(out[basis_index(EXCITED, 0, 1, dims)], -1j, atol=1e-10)
        assert_allclose(out[basis_index(GROUND, 1, 0, dims)], 0.0, atol=1e-10)

    @pytest.mark.parametrize("T", [0.9, 4.3, -1.6])
    def test_matches_analytic(self, integrator, small_config, T):
        numeric = integrator.integrate(small_config, T)
        analytic = to_dense(evolve(small_config, T))
        assert analytic.fidelity(numeric) > 1.0 - 1e-9
        assert_allclose(numeric.amplitudes, analytic.amplitudes, atol=1e-6)

    def test_excitation_is_conserved(self, integrator, small_config):
        n = excitation_operator(small_config)
        start = DenseStateVector(initial_vector(small_config), product_dims(small_config))
        end = integrator.integrate(small_config, 2.5)
        assert_allclose(end.expectation(n), start.expectation(n), rtol=1e-9)

    def test_batched_checkpoints(self, integrator):
        configs = [SystemConfig(CatStateSpec(0.8, eps), CatStateSpec(0.6, 0), dim1=6, dim2=6)
                   for eps in (0, 1)]
        results = integrator.integrate_many(configs, [0.5, 2.0])
        assert len(results) == 2 and len(results[0]) == 2
        for t_index, T in enumerate((0.5, 2.0)):
            for config, dense in zip(configs, results[t_index]):
                assert to_dense(evolve(config, T)).fidelity(dense) > 1.0 - 1e-9

    def test_step_too_large(self, integrator, small_config):
        with pytest.raises(ValueError):
            integrator.integrate(small_config, 1.0, step=0.5)

    def test_mismatched_batch(self, integrator):
        configs = [SystemConfig(CatStateSpec(0.8), CatStateSpec(0.6), dim1=6, dim2=6),
                   SystemConfig(CatStateSpec(0.8), CatStateSpec(0.6), k1=2, dim1=6, dim2=6)]
        with pytest.raises(ValueError):
            integrator.integrate_many(configs, [1.0])

    def test_unsorted_checkpoints(self, integrator, small_config):
        with pytest.raises(ValueError):
            integrator.integrate_many([small_config], [2.0, 1.0])
