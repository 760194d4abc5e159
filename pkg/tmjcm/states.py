"""
슈뢰딩거 고양이 상태
단일 모드 고양이 상태 |α⟩ + ε|-α⟩ 의 Fock 기저 진폭표와 절단 차원을 만듭니다.
"""

import logging
from dataclasses import dataclass, field
from typing import Union

import numpy as np
from scipy.stats import poisson

from .numerics import log_factorial

logger = logging.getLogger(__name__)

MIN_TRUNCATION = 16
TRUNCATION_MARGIN = 8
ALLOWED_EPSILON = (-1, 0, 1)


@dataclass(frozen=True)
class CatStateSpec:
    """한 모드의 고양이 상태 파라미터 (진폭 α, 중첩 부호 ε)"""

    alpha: complex
    epsilon: int = 0

    def __post_init__(self):
        if self.epsilon not in ALLOWED_EPSILON:
            raise ValueError(f"epsilon 은 -1, 0, 1 중 하나여야 합니다: {self.epsilon}")
        object.__setattr__(self, 'alpha', complex(self.alpha))
        object.__setattr__(self, 'epsilon', int(self.epsilon))
        if self.alpha == 0 and self.epsilon == -1:
            raise ValueError("진공의 홀수 고양이 상태는 영벡터입니다 (alpha=0, epsilon=-1)")

    @property
    def mean_intensity(self) -> float:
        """|α|²"""
        return abs(self.alpha) ** 2


@dataclass(frozen=True)
class AmplitudeTable:
    """광자수 n = 0..dim-1 에 대한 진폭 C_n"""

    coeffs: np.ndarray
    dim: int
    captured_norm: float = field(init=False)

    def __post_init__(self):
        coeffs = np.array(self.coeffs, dtype=complex)
        coeffs.setflags(write=False)
        object.__setattr__(self, 'coeffs', coeffs)
        object.__setattr__(self, 'captured_norm', float(np.sum(np.abs(coeffs) ** 2)))


def normalization(spec: CatStateSpec) -> float:
    """
    정규화 상수 N = [1 + ε² + 2ε·exp(-2|α|²)]^{-1/2} 를 계산합니다.

    Args:
        spec (CatStateSpec): 고양이 상태 파라미터

    Returns:
        float: 양수인 정규화 상수
    """
    eps = spec.epsilon
    return float((1.0 + eps ** 2 + 2.0 * eps * np.exp(-2.0 * spec.mean_intensity)) ** -0.5)


def _amplitudes(spec: CatStateSpec, n: np.ndarray) -> np.ndarray:
    n = np.asarray(n, dtype=int)
    parity = 1.0 + np.where(n % 2 == 0, 1.0, -1.0) * spec.epsilon
    norm = normalization(spec)

    if spec.alpha == 0:
        return np.where(n == 0, norm * parity, 0.0).astype(complex)

    # 크기는 로그 공간에서
    log_mag = (np.log(norm) - 0.5 * spec.mean_intensity
               + n * np.log(abs(spec.alpha)) - 0.5 * log_factorial(n))
    phase = np.exp(1j * n * np.angle(spec.alpha))
    return np.exp(log_mag) * phase * parity


def amplitude(spec: CatStateSpec, n: int) -> complex:
    """
    Fock 진폭 C_n = N·exp(-|α|²/2)·αⁿ/√(n!)·[1 + (-1)ⁿ ε] 를 계산합니다.

    Args:
        spec (CatStateSpec): 고양이 상태 파라미터
        n (int): 광자수 (0 이상)

    Returns:
        complex: C_n
    """
    if n < 0:
        raise ValueError(f"광자수는 0 이상이어야 합니다: {n}")
    return complex(_amplitudes(spec, np.array([n]))[0])


def amplitude_table(spec: CatStateSpec, dim: int) -> AmplitudeTable:
    """
    n < dim 에 대한 진폭표를 만듭니다.

    Args:
        spec (CatStateSpec): 고양이 상태 파라미터
        dim (int): 절단 차원 (1 이상)

    Returns:
        AmplitudeTable: 진폭표와 포착된 노름
    """
    if dim < 1:
        raise ValueError(f"절단 차원은 1 이상이어야 합니다: {dim}")
    table = AmplitudeTable(coeffs=_amplitudes(spec, np.arange(dim)), dim=dim)
    logger.debug(f"진폭표 생성: alpha={spec.alpha}, eps={spec.epsilon}, dim={dim}, "
                 f"norm={table.captured_norm:.15f}")
    return table


def choose_truncation(alpha: Union[complex, float], tail_tol: float = 1e-12) -> int:
    """
    Poisson(|α|²) 꼬리가 tail_tol 보다 작아지는 최소 차원에 여유분을 더해 반환합니다.

    Args:
        alpha (complex): 코히런트 진폭
        tail_tol (float): 허용 꼬리 확률 (0과 1 사이)

    Returns:
        int: 절단 차원 (최소 16)
    """
    if not 0.0 < tail_tol < 1.0:
        raise ValueError(f"tail_tol 은 (0, 1) 범위여야 합니다: {tail_tol}")

    mu = abs(complex(alpha)) ** 2
    if mu == 0:
        return MIN_TRUNCATION

    dim = max(1, int(np.floor(mu)))
    while poisson.sf(dim - 1, mu) >= tail_tol:
        dim += 1
    return max(MIN_TRUNCATION, dim + TRUNCATION_MARGIN)


def photon_mean(spec: CatStateSpec) -> float:
    """
    고양이 상태의 평균 광자수를 계산합니다.

    짝수 고양이는 |α|² tanh|α|², 홀수 고양이는 |α|² coth|α|² 가 됩니다.
    """
    eps = spec.epsilon
    overlap = np.exp(-2.0 * spec.mean_intensity)
    return float(spec.mean_intensity * (1.0 + eps ** 2 - 2.0 * eps * overlap)
                 / (1.0 + eps ** 2 + 2.0 * eps * overlap))
