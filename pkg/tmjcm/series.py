"""
시계열 컨테이너
스케일 시간 T 에 대해 스윕한 스칼라 관측량 (T, value) 쌍을 담습니다.
"""

from dataclasses import dataclass
from typing import Sequence

import numpy as np
import pandas as pd


@dataclass(frozen=True)
class TimeSeries:
    """(T, value) 쌍. times 는 엄격히 증가해야 합니다."""

    times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        times = np.array(self.times, dtype=float).ravel()
        values = np.array(self.values, dtype=float).ravel()
        if times.shape != values.shape:
            raise ValueError(f"times({times.size})와 values({values.size})의 길이가 다릅니다")
        if np.any(np.diff(times) <= 0):
            raise ValueError("times 는 엄격히 증가해야 합니다")
        times.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, 'times', times)
        object.__setattr__(self, 'values', values)

    def __len__(self) -> int:
        return self.times.size

    @property
    def median_step(self) -> float:
        if len(self) < 2:
            return 0.0
        return float(np.median(np.diff(self.times)))

    def to_frame(self, value_name: str = 'value') -> pd.DataFrame:
        return pd.DataFrame({'T': self.times, value_name: self.values})


def time_grid(t_min: float, t_max: float, steps: int) -> np.ndarray:
    """[t_min, t_max] 의 균일 시간 격자 (양 끝 포함)"""
    if steps < 2:
        raise ValueError(f"스윕 단계 수는 2 이상이어야 합니다: {steps}")
    if not t_max > t_min:
        raise ValueError(f"t_max({t_max})는 t_min({t_min})보다 커야 합니다")
    return np.linspace(t_min, t_max, steps)


def as_grid(t_grid: Sequence[float]) -> np.ndarray:
    grid = np.atleast_1d(np.asarray(t_grid, dtype=float))
    if grid.size == 0:
        raise ValueError("시간 격자가 비어 있습니다")
    return grid
