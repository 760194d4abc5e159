"""
수치 적분 검증 모듈 패키지
절단된 곱 공간의 해밀토니안 행렬과 Schrödinger 방정식 적분기를 포함합니다.
"""

from .base_integrator import BaseIntegrator, DenseStateVector, initial_vector, to_dense
from .hamiltonian import build_hamiltonian, excitation_operator, max_coupling
from .rk4_integrator import RungeKuttaIntegrator

__all__ = ['BaseIntegrator', 'RungeKuttaIntegrator', 'DenseStateVector', 'build_hamiltonian',
           'excitation_operator', 'max_coupling', 'initial_vector', 'to_dense']
