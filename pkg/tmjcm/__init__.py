"""
2모드 다광자 Jaynes-Cummings 모델 패키지
고양이 상태 입력에 대한 해석적 시간 전개와 원자 반전, 위상 분포/분산, 광자수 분산, Wigner 값을 계산합니다.
"""

from .dynamics import (EvolvedState, SystemConfig, atomic_inversion, evolve, evolve_many, inversion_series,
                       photon_moments, rabi_frequency)
from .phase import joint_distribution, marginal_distribution, phase_moments, phase_variances
from .series import TimeSeries, time_grid
from .states import CatStateSpec, amplitude, amplitude_table, choose_truncation, normalization
from .wigner import origin_inversion_identity, wigner_grid, wigner_origin

__all__ = ['CatStateSpec', 'SystemConfig', 'EvolvedState', 'TimeSeries', 'normalization', 'amplitude',
           'amplitude_table', 'choose_truncation', 'rabi_frequency', 'evolve', 'evolve_many',
           'atomic_inversion', 'inversion_series', 'photon_moments', 'marginal_distribution',
           'joint_distribution', 'phase_moments', 'phase_variances', 'wigner_origin', 'wigner_grid',
           'origin_inversion_identity', 'time_grid']
