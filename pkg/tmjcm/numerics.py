"""
수치 기본 커널
로그 팩토리얼, 연관 라게르 다항식, 주기 격자 위의 구적법을 제공합니다.
다른 모든 모듈이 공유하는 순수 함수들입니다.
"""

import logging
from dataclasses import dataclass, field
from typing import Union

import numpy as np
from scipy.special import gammaln

logger = logging.getLogger(__name__)

ArrayLike = Union[int, float, np.ndarray]

DEFAULT_GRID_COUNT = 512
MIN_GRID_COUNT = 8


@dataclass(frozen=True)
class PeriodicGrid:
    """[-π, π) 구간의 균일 위상 격자 (끝점 제외)"""

    count: int = DEFAULT_GRID_COUNT
    points: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if int(self.count) != self.count or self.count < MIN_GRID_COUNT:
            raise ValueError(f"격자 점 개수는 {MIN_GRID_COUNT} 이상의 정수여야 합니다: {self.count}")
        points = -np.pi + 2.0 * np.pi * np.arange(self.count) / self.count
        points.setflags(write=False)
        object.__setattr__(self, 'points', points)

    @property
    def spacing(self) -> float:
        return 2.0 * np.pi / self.count


def log_factorial(n: ArrayLike) -> ArrayLike:
    """
    ln(n!)을 계산합니다.

    Args:
        n (ArrayLike): 0 이상의 정수 (스칼라 또는 배열)

    Returns:
        ArrayLike: ln(n!) 값

    Raises:
        ValueError: 음수가 포함된 경우
    """
    values = np.asarray(n)
    if np.any(values < 0):
        raise ValueError(f"음수의 팩토리얼은 정의되지 않습니다: {n}")
    result = gammaln(values + 1.0)
    if np.ndim(result) == 0:
        return float(result)
    return result


def laguerre_sequence(n_max: int, a: int, x: ArrayLike) -> np.ndarray:
    """
    L_0^a(x) .. L_{n_max}^a(x)를 한 번의 삼항 점화식으로 계산합니다.

    Args:
        n_max (int): 최고 차수
        a (int): 위 첨자 (0 이상)
        x (ArrayLike): 평가 지점

    Returns:
        np.ndarray: shape (n_max + 1,) + x.shape 인 배열
    """
    if n_max < 0 or a < 0:
        raise ValueError(f"잘못된 라게르 인덱스: n_max={n_max}, a={a}")

    x = np.asarray(x, dtype=float)
    table = np.empty((n_max + 1,) + x.shape, dtype=float)
    table[0] = 1.0
    if n_max >= 1:
        table[1] = 1.0 + a - x
    for k in range(1, n_max):
        table[k + 1] = ((2 * k + 1 + a - x) * table[k] - (k + a) * table[k - 1]) / (k + 1)
    return table


def assoc_laguerre(n: int, a: int, x: ArrayLike) -> ArrayLike:
    """
    연관 라게르 다항식 L_n^a(x)를 계산합니다.

    a < 0 이면 L_n^{-k}(x) = (-x)^k (n-k)!/n! L_{n-k}^k(x) 로 환원합니다.

    Args:
        n (int): 차수 (0 이상)
        a (int): 위 첨자
        x (ArrayLike): 평가 지점

    Returns:
        ArrayLike: L_n^a(x)

    Raises:
        ValueError: n < 0 이거나 n + a < 0 인 경우
    """
    if n < 0 or n + a < 0:
        raise ValueError(f"지원하지 않는 라게르 인덱스 조합: n={n}, a={a}")

    if a < 0:
        k = -a
        x_arr = np.asarray(x, dtype=float)
        ratio = np.exp(log_factorial(n - k) - log_factorial(n))
        value = (-x_arr) ** k * ratio * laguerre_sequence(n - k, k, x_arr)[n - k]
    else:
        value = laguerre_sequence(n, a, x)[n]

    if np.ndim(value) == 0:
        return float(value)
    return value


def periodic_integral(values: np.ndarray, grid: PeriodicGrid, axis: int = -1) -> Union[float, np.ndarray]:
    """
    주기 격자 위의 사각형 적분 (2π/count)·Σ values 를 계산합니다.

    Args:
        values (np.ndarray): 격자 위에서 샘플링된 값
        grid (PeriodicGrid): 샘플링 격자
        axis (int): 적분할 축

    Returns:
        float | np.ndarray: 적분 값

    Raises:
        ValueError: 값의 길이가 격자 크기와 다른 경우
    """
    values = np.asarray(values)
    if values.ndim == 0 or values.shape[axis] != grid.count:
        raise ValueError(f"값의 길이({np.shape(values)})가 격자 크기({grid.count})와 다릅니다")
    result = grid.spacing * np.sum(values, axis=axis)
    if np.ndim(result) == 0:
        return result.item()
    return result


def _power_integrals(k: np.ndarray, power: int) -> np.ndarray:
    """∫_{-π}^{π} Θ^power e^{ikΘ} dΘ 를 정수 k에 대해 계산합니다."""
    k = np.asarray(k)
    sign = np.where(k % 2 == 0, 1.0, -1.0)
    safe_k = np.where(k == 0, 1, k)

    if power == 0:
        return np.where(k == 0, 2.0 * np.pi, 0.0).astype(complex)
    if power == 1:
        return np.where(k == 0, 0.0, -2j * np.pi * sign / safe_k)
    if power == 2:
        return np.where(k == 0, 2.0 * np.pi ** 3 / 3.0, 4.0 * np.pi * sign / safe_k ** 2).astype(complex)
    raise ValueError(f"지원하지 않는 모멘트 차수: {power}")


def moment_weights(grid: PeriodicGrid, power: int) -> np.ndarray:
    """
    Σ_j w_j f(Θ_j) = ∫ Θ^power f(Θ) dΘ 가 되는 구적 가중치를 만듭니다.

    차수가 count/2 미만인 삼각 다항식 f 에 대해 정확합니다.

    Args:
        grid (PeriodicGrid): 위상 격자
        power (int): Θ의 거듭제곱 (0, 1, 2)

    Returns:
        np.ndarray: 길이 count 의 실수 가중치
    """
    half = (grid.count - 1) // 2
    k = np.arange(-half, half + 1)
    integrals = _power_integrals(k, power)
    phases = np.exp(-1j * np.outer(grid.points, k))
    return np.real(phases @ integrals) / grid.count
