"""
Wigner 함수
위상 공간 원점에서의 단일/결합 모드 Wigner 값, 원점 값과 원자 반전 사이의 항등식 검사,
임의 지점의 Wigner 값 평가를 제공합니다.

정규화는 모드당 1/π 를 사용합니다 (진공의 원점 값이 1/π).
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .dynamics import (EvolvedState, SystemConfig, _block_data, evolve_many, frozen_weight,
                       inversion_series)
from .numerics import laguerre_sequence, log_factorial
from .series import TimeSeries, as_grid

logger = logging.getLogger(__name__)

EVEN_K = 'even_k'
EVEN_CATS_ODD_K = 'even_cats_odd_k'
MIXED_PARITY = 'mixed_parity'
ODD_K_EXCITED = 'odd_k_excited'
NO_IDENTITY = 'no identity applicable'

JOINT = 'joint'

IDENTITY_DESCRIPTIONS = {
    EVEN_K: "짝수 고양이 + 짝수 k: πW₁ = πW₂ = 1, π²W = 1",
    EVEN_CATS_ODD_K: "짝수 고양이 + 홀수 k, 들뜬 원자: πW₁ = πW₂ = ⟨σ_z⟩, π²W = 1",
    MIXED_PARITY: "짝수 고양이 + k 하나만 홀수, 들뜬 원자: 홀수 쪽 πW_j = ⟨σ_z⟩, π²W = ⟨σ_z⟩",
    ODD_K_EXCITED: "홀수 k, 들뜬 원자: W(0,T) = W₁(0,0)·W₂(0,0), πW₁ 닫힌 형식",
}


@dataclass(frozen=True)
class WignerOriginValues:
    """W₁(0,T), W₂(0,T), W(0,T)"""

    w1: float
    w2: float
    w_joint: float


@dataclass(frozen=True)
class IdentityCheck:
    """항등식 검사 결과. name 이 None 이면 적용 가능한 항등식이 없습니다."""

    name: Optional[str]
    residuals: Optional[TimeSeries]
    frozen_bound: float = 0.0

    @property
    def applicable(self) -> bool:
        return self.name is not None

    @property
    def description(self) -> str:
        if self.name is None:
            return NO_IDENTITY
        return IDENTITY_DESCRIPTIONS[self.name]

    @property
    def max_residual(self) -> float:
        if self.residuals is None:
            return 0.0
        return float(np.max(self.residuals.values))


def _parity(size: int) -> np.ndarray:
    return np.where(np.arange(size) % 2 == 0, 1.0, -1.0)


def wigner_origin(state: EvolvedState) -> WignerOriginValues:
    """
    원점의 Wigner 값을 광자수 홀짝 가중합으로 계산합니다.

    Args:
        state (EvolvedState): 전개된 상태

    Returns:
        WignerOriginValues: (1/π)⟨(-1)^{n₁}⟩, (1/π)⟨(-1)^{n₂}⟩, (1/π²)⟨(-1)^{n₁+n₂}⟩
    """
    p = state.populations
    s1 = _parity(p.shape[0])
    s2 = _parity(p.shape[1])
    return WignerOriginValues(w1=float(np.sum(p * s1[:, None])) / np.pi,
                              w2=float(np.sum(p * s2[None, :])) / np.pi,
                              w_joint=float(s1 @ p @ s2) / np.pi ** 2)


def wigner_origin_series(config: SystemConfig, t_grid: Sequence[float]) -> Dict[str, TimeSeries]:
    """시간 격자에 대한 원점 Wigner 값 시계열 ('w1', 'w2', 'w_joint')"""
    times = as_grid(t_grid)
    values = np.array([[v.w1, v.w2, v.w_joint]
                       for v in map(wigner_origin, evolve_many(config, times))])
    return {name: TimeSeries(times, values[:, i]) for i, name in enumerate(('w1', 'w2', 'w_joint'))}


def _is_excited(config: SystemConfig) -> bool:
    return math.isclose(math.sin(config.varphi), 0.0, abs_tol=1e-12)


def identity_name(config: SystemConfig) -> Optional[str]:
    """
    설정에 적용되는 원점-반전 항등식 이름을 반환합니다.

    우선순위: even_k → even_cats_odd_k → mixed_parity → odd_k_excited.
    어느 것도 해당하지 않으면 None.
    """
    even_cats = config.mode1.epsilon == 1 and config.mode2.epsilon == 1
    odd1 = config.k1 % 2 == 1
    odd2 = config.k2 % 2 == 1
    excited = _is_excited(config)

    if even_cats and not odd1 and not odd2:
        return EVEN_K
    if even_cats and excited and odd1 and odd2:
        return EVEN_CATS_ODD_K
    if even_cats and excited and odd1 != odd2:
        return MIXED_PARITY
    if excited and odd1 and odd2:
        return ODD_K_EXCITED
    return None


def _odd_k_w1_closed_form(config: SystemConfig, times: np.ndarray) -> np.ndarray:
    """πW₁(0,T) = Σ(-1)^n |a|² cos(2TΛ) + 고정 성분"""
    data = _block_data(config)
    weights = (np.abs(data.plus0) ** 2) * _parity(config.dim1)[:, None]
    offset = float(np.sum(np.abs(data.frozen_plus) ** 2 * _parity(config.dim1)[:, None]))
    return offset + np.cos(2.0 * np.outer(times, data.rabi.ravel())) @ weights.ravel()


def origin_inversion_identity(config: SystemConfig, t_grid: Sequence[float]) -> IdentityCheck:
    """
    원점 Wigner 값과 원자 반전 사이의 항등식 잔차를 계산합니다.

    잔차는 π 배율을 곱한 무차원 값입니다 (예: |πW₁(0,T) - ⟨σ_z(T)⟩|).

    Args:
        config (SystemConfig): 실험 설정
        t_grid (Sequence[float]): 시간 격자

    Returns:
        IdentityCheck: 항등식 이름과 시점별 최대 잔차 (해당 없음이면 name=None)
    """
    name = identity_name(config)
    if name is None:
        logger.info(f"적용 가능한 항등식 없음: eps=({config.mode1.epsilon}, {config.mode2.epsilon}), "
                    f"k=({config.k1}, {config.k2}), varphi={config.varphi}")
        return IdentityCheck(name=None, residuals=None)

    times = as_grid(t_grid)
    series = wigner_origin_series(config, times)
    pw1 = np.pi * series['w1'].values
    pw2 = np.pi * series['w2'].values
    pw = np.pi ** 2 * series['w_joint'].values

    if name == EVEN_K:
        parts = [np.abs(pw1 - 1.0), np.abs(pw2 - 1.0), np.abs(pw - 1.0)]
    elif name == EVEN_CATS_ODD_K:
        sigma_z = inversion_series(config, times).values
        parts = [np.abs(pw1 - sigma_z), np.abs(pw2 - sigma_z), np.abs(pw - 1.0)]
    elif name == MIXED_PARITY:
        sigma_z = inversion_series(config, times).values
        odd, even = (pw1, pw2) if config.k1 % 2 == 1 else (pw2, pw1)
        parts = [np.abs(odd - sigma_z), np.abs(even - 1.0), np.abs(pw - sigma_z)]
    else:
        initial = _initial_parity_product(config)
        parts = [np.abs(pw - initial), np.abs(pw1 - _odd_k_w1_closed_form(config, times))]

    residuals = TimeSeries(times, np.max(np.vstack(parts), axis=0))
    check = IdentityCheck(name=name, residuals=residuals, frozen_bound=frozen_weight(config))
    logger.debug(f"항등식 {name}: 최대 잔차 {check.max_residual:.3e}")
    return check


def _initial_parity_product(config: SystemConfig) -> float:
    origin = wigner_origin(next(evolve_many(config, [0.0])))
    return np.pi ** 2 * origin.w1 * origin.w2


def _wigner_kernel(size: int, chi: complex) -> np.ndarray:
    """
    K[n, n'] = ⟨n'| D(β)(-1)^N D†(β) |n⟩, β = χ/√2.

    n ≥ n' 에서 (-1)^{n'} √(n'!/n!) (√2 χ*)^{n-n'} e^{-|χ|²} L_{n'}^{n-n'}(2|χ|²),
    나머지는 에르미트 켤레로 채웁니다.
    """
    signs = _parity(size)
    radius = abs(chi)
    if radius == 0.0:
        return np.diag(signs).astype(complex)

    x = 2.0 * radius ** 2
    log_fact = log_factorial(np.arange(size))
    rotation = np.exp(-1j * np.angle(chi))
    kernel = np.zeros((size, size), dtype=complex)

    for d in range(size):
        low = np.arange(size - d)
        high = low + d
        laguerre = laguerre_sequence(size - 1 - d, d, x)
        log_mag = d * np.log(np.sqrt(2.0) * radius) + 0.5 * (log_fact[low] - log_fact[high]) - radius ** 2
        values = signs[low] * np.exp(log_mag) * rotation ** d * laguerre
        kernel[high, low] = values
        if d > 0:
            kernel[low, high] = np.conj(values)
    return kernel


def _reduced_density(state: EvolvedState, mode: int) -> np.ndarray:
    if mode == 1:
        return sum(psi @ psi.conj().T for psi in state.branches)
    return sum(psi.T @ psi.conj() for psi in state.branches)


Point = Union[complex, Tuple[complex, complex]]


def wigner_grid(state: EvolvedState, mode: Union[int, str], points: Sequence[Point]) -> np.ndarray:
    """
    임의 위상 공간 지점에서 Wigner 값을 계산합니다.

    Args:
        state (EvolvedState): 전개된 상태
        mode (int | str): 1, 2 또는 'joint'
        points (Sequence): 단일 모드는 복소수 χ 목록, 'joint' 는 (χ₁, χ₂) 쌍 목록

    Returns:
        np.ndarray: 실수 Wigner 값 (points 순서)

    Raises:
        ValueError: 지점 목록이 비었거나 mode 가 잘못된 경우
    """
    points = list(points)
    if not points:
        raise ValueError("Wigner 평가 지점 목록이 비어 있습니다")

    rows, cols = state.shape
    values: List[float] = []

    if mode in (1, 2):
        rho = _reduced_density(state, mode)
        size = rows if mode == 1 else cols
        for chi in points:
            kernel = _wigner_kernel(size, complex(chi))
            values.append(float(np.real(np.sum(rho * kernel))) / np.pi)
    elif mode == JOINT:
        for pair in points:
            chi1, chi2 = pair
            k1 = _wigner_kernel(rows, complex(chi1))
            k2 = _wigner_kernel(cols, complex(chi2))
            total = sum(np.sum(np.conj(psi) * (k1.T @ psi @ k2)) for psi in state.branches)
            values.append(float(np.real(total)) / np.pi ** 2)
    else:
        raise ValueError(f"mode 는 1, 2 또는 'joint' 여야 합니다: {mode}")

    return np.array(values)
