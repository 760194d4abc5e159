"""
2모드 다광자 JCM 시간 전개
블록 대각 해석해로 원자 + 두 모드 상태를 전개하고 원자 반전과 광자수 통계를 계산합니다.

결합 쌍 {|+, n, m+k2⟩, |-, n+k1, m⟩} 은 Rabi 주파수 Λ_{n,m} 으로 회전하며,
상호작용에 의해 소멸되는 (어두운) 성분은 정지 상태로 유지됩니다.
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterator, Optional, Sequence, Tuple

import numpy as np

from .numerics import log_factorial
from .series import TimeSeries, as_grid
from .states import CatStateSpec, amplitude_table, choose_truncation

logger = logging.getLogger(__name__)

DEFAULT_TAIL_TOL = 1e-12
_SERIES_CHUNK = 256


@dataclass(frozen=True)
class SystemConfig:
    """실험 정의: 두 모드의 고양이 상태, 전이 파라미터, 원자 각도, 절단 차원"""

    mode1: CatStateSpec
    mode2: CatStateSpec
    k1: int = 1
    k2: int = 1
    varphi: float = 0.0
    phi: float = 0.0
    dim1: Optional[int] = None
    dim2: Optional[int] = None

    def __post_init__(self):
        for name in ('k1', 'k2'):
            value = getattr(self, name)
            if int(value) != value or value < 0:
                raise ValueError(f"{name} 는 0 이상의 정수여야 합니다: {value}")
            object.__setattr__(self, name, int(value))
        if self.k1 + self.k2 < 1:
            raise ValueError("k1 과 k2 가 동시에 0 일 수 없습니다")

        object.__setattr__(self, 'varphi', float(self.varphi))
        object.__setattr__(self, 'phi', float(self.phi))

        if self.dim1 is None:
            object.__setattr__(self, 'dim1', choose_truncation(self.mode1.alpha, DEFAULT_TAIL_TOL))
        if self.dim2 is None:
            object.__setattr__(self, 'dim2', choose_truncation(self.mode2.alpha, DEFAULT_TAIL_TOL))
        object.__setattr__(self, 'dim1', int(self.dim1))
        object.__setattr__(self, 'dim2', int(self.dim2))
        if self.dim1 <= self.k1 or self.dim2 <= self.k2:
            raise ValueError(f"절단 차원이 너무 작습니다: dim=({self.dim1}, {self.dim2}), "
                             f"k=({self.k1}, {self.k2})")

    @classmethod
    def with_truncation(cls, mode1: CatStateSpec, mode2: CatStateSpec, k1: int = 1, k2: int = 1,
                        varphi: float = 0.0, phi: float = 0.0,
                        tail_tol: float = DEFAULT_TAIL_TOL) -> 'SystemConfig':
        """choose_truncation 으로 절단 차원을 정한 설정을 만듭니다."""
        return cls(mode1=mode1, mode2=mode2, k1=k1, k2=k2, varphi=varphi, phi=phi,
                   dim1=max(choose_truncation(mode1.alpha, tail_tol), k1 + 1),
                   dim2=max(choose_truncation(mode2.alpha, tail_tol), k2 + 1))

    @property
    def state_shape(self) -> Tuple[int, int]:
        return (self.dim1 + self.k1, self.dim2 + self.k2)


@dataclass(frozen=True)
class EvolvedState:
    """스케일 시간 T 에서의 들뜬/바닥 가지 장 진폭 psi_plus, psi_minus"""

    T: float
    psi_plus: np.ndarray
    psi_minus: np.ndarray

    def __post_init__(self):
        if self.psi_plus.shape != self.psi_minus.shape:
            raise ValueError("두 가지 진폭 배열의 모양이 다릅니다")
        for name in ('psi_plus', 'psi_minus'):
            array = np.array(getattr(self, name), dtype=complex)
            array.setflags(write=False)
            object.__setattr__(self, name, array)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.psi_plus.shape

    @property
    def branches(self) -> Tuple[np.ndarray, np.ndarray]:
        return (self.psi_plus, self.psi_minus)

    @property
    def total_norm(self) -> float:
        return float(np.sum(np.abs(self.psi_plus) ** 2) + np.sum(np.abs(self.psi_minus) ** 2))

    @property
    def populations(self) -> np.ndarray:
        """두 가지를 합친 광자수 분포 p[n1, n2]"""
        return np.abs(self.psi_plus) ** 2 + np.abs(self.psi_minus) ** 2


@dataclass(frozen=True)
class PhotonMoments:
    """⟨n̂₁⟩, ⟨n̂₂⟩, ⟨n̂₁²⟩, ⟨n̂₂²⟩, ⟨n̂₁n̂₂⟩"""

    mean1: float
    mean2: float
    mean_sq1: float
    mean_sq2: float
    cross: float

    @property
    def var1(self) -> float:
        return self.mean_sq1 - self.mean1 ** 2

    @property
    def var2(self) -> float:
        return self.mean_sq2 - self.mean2 ** 2

    @property
    def correlation(self) -> float:
        return self.cross - self.mean1 * self.mean2

    @property
    def var_sum(self) -> float:
        return self.var1 + self.var2 + 2.0 * self.correlation

    @property
    def var_diff(self) -> float:
        return self.var1 + self.var2 - 2.0 * self.correlation


@dataclass(frozen=True)
class _BlockData:
    rabi: np.ndarray
    plus0: np.ndarray
    minus0: np.ndarray
    frozen_plus: np.ndarray
    frozen_minus: np.ndarray
    shape: Tuple[int, int] = field(default=(0, 0))


def rabi_frequency(k1: int, k2: int, n: int, m: int) -> float:
    """
    Rabi 주파수 Λ_{n,m} = √[(m+k2)!(n+k1)!/(n! m!)] 를 계산합니다.

    Args:
        k1 (int): 모드 1 전이 광자수
        k2 (int): 모드 2 전이 광자수
        n (int): 모드 1 광자수
        m (int): 모드 2 광자수

    Returns:
        float: Λ_{n,m}
    """
    if min(k1, k2, n, m) < 0:
        raise ValueError(f"인자는 모두 0 이상이어야 합니다: k=({k1}, {k2}), n={n}, m={m}")
    return float(np.exp(0.5 * (log_factorial(m + k2) - log_factorial(m)
                               + log_factorial(n + k1) - log_factorial(n))))


def rabi_matrix(k1: int, k2: int, dim1: int, dim2: int) -> np.ndarray:
    """n < dim1, m < dim2 에 대한 Λ_{n,m} 표"""
    n = np.arange(dim1)[:, None]
    m = np.arange(dim2)[None, :]
    return np.exp(0.5 * (log_factorial(m + k2) - log_factorial(m)
                         + log_factorial(n + k1) - log_factorial(n)))


@lru_cache(maxsize=32)
def _block_data(config: SystemConfig) -> _BlockData:
    k1, k2 = config.k1, config.k2
    rows, cols = config.state_shape

    c1 = np.zeros(rows, dtype=complex)
    c2 = np.zeros(cols, dtype=complex)
    c1[:config.dim1] = amplitude_table(config.mode1, config.dim1).coeffs
    c2[:config.dim2] = amplitude_table(config.mode2, config.dim2).coeffs

    excited = np.cos(config.varphi)
    ground = np.exp(1j * config.phi) * np.sin(config.varphi)

    # 결합 쌍 (n, m): |+, n, m+k2⟩ 와 |-, n+k1, m⟩
    plus0 = excited * np.outer(c1[:config.dim1], c2[k2:k2 + config.dim2])
    minus0 = ground * np.outer(c1[k1:k1 + config.dim1], c2[:config.dim2])

    # 어두운 성분: 들뜬 가지 n2 < k2, 바닥 가지 n1 < k1
    frozen_plus = excited * np.outer(c1[:config.dim1], c2[:k2])
    frozen_minus = ground * np.outer(c1[:k1], c2[:config.dim2])

    data = _BlockData(rabi=rabi_matrix(k1, k2, config.dim1, config.dim2),
                      plus0=plus0, minus0=minus0,
                      frozen_plus=frozen_plus, frozen_minus=frozen_minus,
                      shape=(rows, cols))
    for array in (data.rabi, data.plus0, data.minus0, data.frozen_plus, data.frozen_minus):
        array.setflags(write=False)
    return data


def _coupled_amplitudes(plus0: np.ndarray, minus0: np.ndarray, rabi: np.ndarray,
                        T: float) -> Tuple[np.ndarray, np.ndarray]:
    """2×2 블록 회전: (F1, F2)"""
    cos_t = np.cos(T * rabi)
    sin_t = np.sin(T * rabi)
    f1 = plus0 * cos_t - 1j * minus0 * sin_t
    f2 = minus0 * cos_t - 1j * plus0 * sin_t
    return f1, f2


def evolve(config: SystemConfig, T: float) -> EvolvedState:
    """
    스케일 시간 T 의 전체 상태를 해석적으로 계산합니다.

    Args:
        config (SystemConfig): 실험 설정
        T (float): 스케일 시간 (음수면 시간 역전)

    Returns:
        EvolvedState: 두 가지의 장 진폭
    """
    if not isinstance(config, SystemConfig):
        raise ValueError(f"SystemConfig 가 필요합니다: {type(config).__name__}")

    data = _block_data(config)
    k1, k2 = config.k1, config.k2
    f1, f2 = _coupled_amplitudes(data.plus0, data.minus0, data.rabi, float(T))

    psi_plus = np.zeros(data.shape, dtype=complex)
    psi_minus = np.zeros(data.shape, dtype=complex)
    psi_plus[:config.dim1, k2:k2 + config.dim2] = f1
    psi_minus[k1:k1 + config.dim1, :config.dim2] = f2
    psi_plus[:config.dim1, :k2] = data.frozen_plus
    psi_minus[:k1, :config.dim2] = data.frozen_minus

    return EvolvedState(T=float(T), psi_plus=psi_plus, psi_minus=psi_minus)


def evolve_many(config: SystemConfig, t_grid: Sequence[float]) -> Iterator[EvolvedState]:
    """시간 격자의 각 T 에 대해 순서대로 상태를 생성합니다."""
    for T in as_grid(t_grid):
        yield evolve(config, T)


def frozen_weight(config: SystemConfig) -> float:
    """상호작용에 의해 소멸되는 성분들의 총 가중치 (T 에 무관)"""
    data = _block_data(config)
    return float(np.sum(np.abs(data.frozen_plus) ** 2) + np.sum(np.abs(data.frozen_minus) ** 2))


def atomic_inversion(state: EvolvedState) -> float:
    """
    원자 반전 ⟨σ̂_z⟩ = Σ|psi_plus|² - Σ|psi_minus|² 를 계산합니다.

    Args:
        state (EvolvedState): 전개된 상태

    Returns:
        float: [-1, 1] 범위의 반전 값
    """
    return float(np.sum(np.abs(state.psi_plus) ** 2) - np.sum(np.abs(state.psi_minus) ** 2))


def inversion_series(config: SystemConfig, t_grid: Sequence[float]) -> TimeSeries:
    """
    닫힌 형식으로 원자 반전 시계열을 계산합니다 (T 마다 상태를 만들지 않음).

    각 결합 쌍의 기여는 (|a|² - |b|²)cos(2TΛ) - 2 Im(a b*) sin(2TΛ) 입니다.

    Args:
        config (SystemConfig): 실험 설정
        t_grid (Sequence[float]): 정렬된 시간 격자

    Returns:
        TimeSeries: (T, ⟨σ̂_z⟩)
    """
    times = as_grid(t_grid)
    data = _block_data(config)

    rabi = data.rabi.ravel()
    a = data.plus0.ravel()
    b = data.minus0.ravel()
    cos_weight = np.abs(a) ** 2 - np.abs(b) ** 2
    sin_weight = -2.0 * np.imag(a * np.conj(b))
    offset = np.sum(np.abs(data.frozen_plus) ** 2) - np.sum(np.abs(data.frozen_minus) ** 2)

    values = np.empty(times.size)
    for start in range(0, times.size, _SERIES_CHUNK):
        chunk = times[start:start + _SERIES_CHUNK]
        arg = 2.0 * np.outer(chunk, rabi)
        values[start:start + _SERIES_CHUNK] = offset + np.cos(arg) @ cos_weight + np.sin(arg) @ sin_weight

    logger.debug(f"반전 시계열 계산 완료: {times.size}개 시점, 블록 {rabi.size}개")
    return TimeSeries(times=times, values=values)


def photon_moments(state: EvolvedState) -> PhotonMoments:
    """
    두 모드의 광자수 모멘트를 계산합니다.

    Args:
        state (EvolvedState): 전개된 상태

    Returns:
        PhotonMoments: 1차, 2차, 교차 모멘트
    """
    p = state.populations
    n1 = np.arange(p.shape[0])[:, None]
    n2 = np.arange(p.shape[1])[None, :]
    return PhotonMoments(mean1=float(np.sum(p * n1)),
                         mean2=float(np.sum(p * n2)),
                         mean_sq1=float(np.sum(p * n1 ** 2)),
                         mean_sq2=float(np.sum(p * n2 ** 2)),
                         cross=float(np.sum(p * n1 * n2)))


def excitation_number(state: EvolvedState, k1: int, k2: int) -> float:
    """보존량 ⟨k2·n̂₁ + k1·n̂₂⟩"""
    moments = photon_moments(state)
    return k2 * moments.mean1 + k1 * moments.mean2


def photon_variances(state: EvolvedState) -> Dict[str, float]:
    """단일 모드, 합, 차 광자수 분산"""
    moments = photon_moments(state)
    return {'var1': moments.var1, 'var2': moments.var2,
            'var_sum': moments.var_sum, 'var_diff': moments.var_diff}
