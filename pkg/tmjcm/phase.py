"""
Pegg-Barnett 위상 관측량
축약된 장 상태의 결합/주변 위상 분포, 위상 모멘트, 단일/합/차 위상 분산을 계산합니다.

분포는 가지 진폭의 영-패딩 이산 푸리에 평가로 구하며, 위상 창은 [-π, π) 입니다.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np
from scipy import fft
from scipy.signal import find_peaks

from .dynamics import EvolvedState, SystemConfig, evolve_many
from .numerics import DEFAULT_GRID_COUNT, PeriodicGrid, moment_weights, periodic_integral
from .series import TimeSeries, as_grid

logger = logging.getLogger(__name__)

ANALYTIC = 'analytic'
QUADRATURE = 'quadrature'


@dataclass(frozen=True)
class PhaseDistribution1D:
    """단일 모드 위상 분포 P(Θ_j)"""

    grid: PeriodicGrid
    values: np.ndarray

    @property
    def total(self) -> float:
        return periodic_integral(self.values, self.grid)


@dataclass(frozen=True)
class PhaseDistribution2D:
    """결합 위상 분포 P(Θ₁, Θ₂). values[i, j] 는 (grid1.points[i], grid2.points[j]) 값"""

    grid1: PeriodicGrid
    grid2: PeriodicGrid
    values: np.ndarray

    @property
    def total(self) -> float:
        inner = periodic_integral(self.values, self.grid2, axis=1)
        return periodic_integral(inner, self.grid1)

    def marginal(self, mode: int) -> PhaseDistribution1D:
        """다른 축을 수치 적분해 주변 분포를 얻습니다."""
        if mode == 1:
            return PhaseDistribution1D(self.grid1, periodic_integral(self.values, self.grid2, axis=1))
        if mode == 2:
            return PhaseDistribution1D(self.grid2, periodic_integral(self.values, self.grid1, axis=0))
        raise ValueError(f"mode 는 1 또는 2 여야 합니다: {mode}")


@dataclass(frozen=True)
class PhaseMoments:
    """⟨Φ̂₁⟩, ⟨Φ̂₂⟩, ⟨Φ̂₁²⟩, ⟨Φ̂₂²⟩, ⟨Φ̂₁Φ̂₂⟩"""

    mean1: float
    mean2: float
    mean_sq1: float
    mean_sq2: float
    cross: float


@dataclass(frozen=True)
class PhaseVariances:
    """단일 모드, 합, 차 위상 분산과 상관 항 h12"""

    var1: float
    var2: float
    var_sum: float
    var_diff: float
    h12: float

    @classmethod
    def from_moments(cls, moments: PhaseMoments) -> 'PhaseVariances':
        var1 = moments.mean_sq1 - moments.mean1 ** 2
        var2 = moments.mean_sq2 - moments.mean2 ** 2
        h12 = 2.0 * (moments.cross - moments.mean1 * moments.mean2)
        return cls(var1=var1, var2=var2, var_sum=var1 + var2 + h12, var_diff=var1 + var2 - h12, h12=h12)

    def as_dict(self) -> Dict[str, float]:
        return {'var1': self.var1, 'var2': self.var2, 'var_sum': self.var_sum,
                'var_diff': self.var_diff, 'h12': self.h12}


def _check_grid(grid: PeriodicGrid, dim: int, axis_name: str):
    if grid.count <= dim:
        raise ValueError(f"{axis_name} 격자({grid.count})가 절단 차원({dim})보다 커야 합니다")


def _parity_signs(size: int) -> np.ndarray:
    # e^{-inΘ} 에서 Θ = -π 시작점이 주는 (-1)^n
    return np.where(np.arange(size) % 2 == 0, 1.0, -1.0)


def branch_phase_transform(state: EvolvedState, grid1: PeriodicGrid,
                           grid2: PeriodicGrid) -> Tuple[np.ndarray, np.ndarray]:
    """
    Φ_±(Θ₁, Θ₂) = Σ psi_±[n1, n2] e^{-i n1 Θ₁ - i n2 Θ₂} 를 격자 위에서 계산합니다.

    Args:
        state (EvolvedState): 전개된 상태
        grid1 (PeriodicGrid): 모드 1 위상 격자
        grid2 (PeriodicGrid): 모드 2 위상 격자

    Returns:
        Tuple[np.ndarray, np.ndarray]: (Φ₊, Φ₋), 각각 shape (grid1.count, grid2.count)

    Raises:
        ValueError: 격자가 절단 차원보다 성긴 경우
    """
    rows, cols = state.shape
    _check_grid(grid1, rows, '모드 1')
    _check_grid(grid2, cols, '모드 2')

    signs = np.outer(_parity_signs(rows), _parity_signs(cols))
    return tuple(fft.fft2(psi * signs, s=(grid1.count, grid2.count)) for psi in state.branches)


def joint_distribution(state: EvolvedState, grid1: PeriodicGrid, grid2: PeriodicGrid) -> PhaseDistribution2D:
    """
    결합 위상 분포 P(Θ₁, Θ₂) = (|Φ₊|² + |Φ₋|²)/4π² 를 계산합니다.

    Args:
        state (EvolvedState): 전개된 상태
        grid1 (PeriodicGrid): 모드 1 위상 격자
        grid2 (PeriodicGrid): 모드 2 위상 격자

    Returns:
        PhaseDistribution2D: 결합 분포
    """
    plus, minus = branch_phase_transform(state, grid1, grid2)
    values = (np.abs(plus) ** 2 + np.abs(minus) ** 2) / (4.0 * np.pi ** 2)
    return PhaseDistribution2D(grid1=grid1, grid2=grid2, values=np.clip(values, 0.0, None))


def marginal_distribution(state: EvolvedState, mode: int, grid: PeriodicGrid) -> PhaseDistribution1D:
    """
    단일 모드 위상 분포 P(Θ_j) 를 계산합니다.

    해당 모드 축으로만 부분 푸리에 변환한 뒤 다른 모드 인덱스와 두 가지에 대해 |·|² 를 합산합니다.

    Args:
        state (EvolvedState): 전개된 상태
        mode (int): 1 또는 2
        grid (PeriodicGrid): 위상 격자

    Returns:
        PhaseDistribution1D: 주변 분포
    """
    if mode not in (1, 2):
        raise ValueError(f"mode 는 1 또는 2 여야 합니다: {mode}")

    axis = mode - 1
    size = state.shape[axis]
    _check_grid(grid, size, f'모드 {mode}')

    signs = _parity_signs(size)
    signs = signs[:, None] if axis == 0 else signs[None, :]
    total = np.zeros(grid.count)
    for psi in state.branches:
        partial = fft.fft(psi * signs, n=grid.count, axis=axis)
        total += np.sum(np.abs(partial) ** 2, axis=1 - axis)
    return PhaseDistribution1D(grid=grid, values=np.clip(total / (2.0 * np.pi), 0.0, None))


def _first_moment_kernel(size: int) -> np.ndarray:
    """G[n, n'] = (1/2π)∫Θ e^{i(n'-n)Θ} dΘ"""
    n = np.arange(size)
    k = n[None, :] - n[:, None]
    safe_k = np.where(k == 0, 1, k)
    sign = np.where(k % 2 == 0, 1.0, -1.0)
    return np.where(k == 0, 0.0, -1j * sign / safe_k)


def _second_moment_kernel(size: int) -> np.ndarray:
    """S[n, n'] = (1/2π)∫Θ² e^{i(n'-n)Θ} dΘ"""
    n = np.arange(size)
    k = n[None, :] - n[:, None]
    safe_k = np.where(k == 0, 1, k)
    sign = np.where(k % 2 == 0, 1.0, -1.0)
    return np.where(k == 0, np.pi ** 2 / 3.0, 2.0 * sign / safe_k ** 2)


class _MomentKernels:
    """상태 모양별 해석적 모멘트 커널 캐시"""

    def __init__(self, shape: Tuple[int, int]):
        rows, cols = shape
        self.first1 = _first_moment_kernel(rows)
        self.first2 = _first_moment_kernel(cols)
        self.second1 = _second_moment_kernel(rows)
        self.second2 = _second_moment_kernel(cols)

    def moments(self, state: EvolvedState) -> PhaseMoments:
        rho1 = sum(psi @ psi.conj().T for psi in state.branches)
        rho2 = sum(psi.T @ psi.conj() for psi in state.branches)
        cross = sum(np.sum(np.conj(psi) * (self.first1.T @ psi @ self.first2)) for psi in state.branches)
        return PhaseMoments(mean1=float(np.real(np.sum(rho1 * self.first1))),
                            mean2=float(np.real(np.sum(rho2 * self.first2))),
                            mean_sq1=float(np.real(np.sum(rho1 * self.second1))),
                            mean_sq2=float(np.real(np.sum(rho2 * self.second2))),
                            cross=float(np.real(cross)))


def _quadrature_moments(state: EvolvedState, count: int) -> PhaseMoments:
    rows, cols = state.shape
    if count < 2 * max(rows, cols):
        raise ValueError(f"구적 경로에는 격자 크기 {2 * max(rows, cols)} 이상이 필요합니다: {count}")

    grid = PeriodicGrid(count)
    first = moment_weights(grid, 1)
    second = moment_weights(grid, 2)
    p1 = marginal_distribution(state, 1, grid).values
    p2 = marginal_distribution(state, 2, grid).values
    joint = joint_distribution(state, grid, grid).values
    return PhaseMoments(mean1=float(first @ p1), mean2=float(first @ p2),
                        mean_sq1=float(second @ p1), mean_sq2=float(second @ p2),
                        cross=float(first @ joint @ first))


def phase_moments(state: EvolvedState, count: int = DEFAULT_GRID_COUNT, method: str = ANALYTIC) -> PhaseMoments:
    """
    위상 모멘트를 계산합니다.

    Args:
        state (EvolvedState): 전개된 상태
        count (int): 구적 경로의 축당 격자 크기
        method (str): 'analytic' (진폭 쌍의 해석적 합) 또는 'quadrature' (분포의 격자 구적)

    Returns:
        PhaseMoments: 위상 모멘트
    """
    if method == ANALYTIC:
        return _MomentKernels(state.shape).moments(state)
    if method == QUADRATURE:
        return _quadrature_moments(state, count)
    raise ValueError(f"알 수 없는 모멘트 계산 방식: {method}")


def phase_variances(state: EvolvedState) -> PhaseVariances:
    """
    단일 모드, 합, 차 위상 분산을 계산합니다.

    Args:
        state (EvolvedState): 전개된 상태

    Returns:
        PhaseVariances: var1, var2, var_sum, var_diff, h12
    """
    return PhaseVariances.from_moments(phase_moments(state))


def phase_variance_series(config: SystemConfig, t_grid: Sequence[float]) -> Dict[str, TimeSeries]:
    """
    시간 격자에 대한 위상 분산 시계열을 계산합니다.

    Returns:
        Dict[str, TimeSeries]: 'var1', 'var2', 'var_sum', 'var_diff', 'h12' 별 시계열
    """
    times = as_grid(t_grid)
    kernels = _MomentKernels(config.state_shape)
    rows: List[Dict[str, float]] = [PhaseVariances.from_moments(kernels.moments(state)).as_dict()
                                    for state in evolve_many(config, times)]
    logger.debug(f"위상 분산 시계열 계산 완료: {times.size}개 시점")
    return {name: TimeSeries(times, np.array([row[name] for row in rows])) for name in rows[0]}


def distribution_peaks(distribution: PhaseDistribution1D, rel_prominence: float = 0.1) -> np.ndarray:
    """
    주기 경계를 고려해 위상 분포의 극대 위치를 찾습니다.

    Args:
        distribution (PhaseDistribution1D): 위상 분포
        rel_prominence (float): 최댓값 대비 최소 돌출도

    Returns:
        np.ndarray: 극대가 위치한 위상 (라디안, 오름차순)
    """
    values = distribution.values
    count = values.size
    peak_max = float(np.max(values))
    if peak_max <= 0.0:
        return np.array([])

    tiled = np.concatenate([values, values, values])
    indices, _ = find_peaks(tiled, prominence=rel_prominence * peak_max)
    middle = indices[(indices >= count) & (indices < 2 * count)] - count
    return np.sort(distribution.grid.points[middle])
