"""
고정 단계 4차 Runge-Kutta 적분기
해석적 블록 전개와 코드 경로를 공유하지 않는 독립 검증용 적분기입니다.
"""

import logging

import numpy as np
from scipy import sparse

from .base_integrator import BaseIntegrator

logger = logging.getLogger(__name__)


class RungeKuttaIntegrator(BaseIntegrator):
    """고전적 RK4 적분기"""

    def __init__(self):
        super().__init__('rk4')

    def advance(self, hamiltonian: sparse.spmatrix, states: np.ndarray, duration: float,
                n_steps: int) -> np.ndarray:
        dt = duration / n_steps
        psi = np.array(states, dtype=complex)

        def derivative(current: np.ndarray) -> np.ndarray:
            return -1j * (hamiltonian @ current)

        for _ in range(n_steps):
            k1 = derivative(psi)
            k2 = derivative(psi + 0.5 * dt * k1)
            k3 = derivative(psi + 0.5 * dt * k2)
            k4 = derivative(psi + dt * k3)
            psi = psi + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        return psi
