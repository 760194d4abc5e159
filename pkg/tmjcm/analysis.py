"""
붕괴-부활 분석
임의 시계열의 부활 패킷 검출과 부활 시간, 조화 근사 위상 분산, 부활 시간 단축 비율 예측을 제공합니다.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
import pandas as pd
from scipy.signal import find_peaks

from .dynamics import SystemConfig, rabi_frequency
from .phase import phase_variance_series
from .series import TimeSeries, time_grid
from .states import CatStateSpec, amplitude_table, photon_mean

__all__ = [
    'TimeSeries', 'RevivalReport', 'VarianceRevivalPrediction', 'ContractionResult',
    'detect_revivals', 'revival_spacing', 'restoration_time', 'predict_revival_time',
    'calibrate_revival_cycles', 'rabi_spacing_revival_time', 'harmonic_variance_approx',
    'predict_variance_revival_time', 'contraction_factor',
]

logger = logging.getLogger(__name__)

MIN_SERIES_LENGTH = 16
DEFAULT_WINDOW_FRACTION = 0.05
DEFAULT_THRESHOLD = 0.25
PEAK_PROMINENCE = 0.1
SECONDARY_CUT = 0.5
STRONG_FIELD_ALPHA = 3.0
CONTRACTION_TOLERANCE = 0.25


@dataclass(frozen=True)
class RevivalReport:
    """부활 검출 결과"""

    centers: List[float]
    envelope: TimeSeries
    collapse_intervals: List[Tuple[float, float]]
    center_levels: List[float] = field(default_factory=list)

    @property
    def revival_centers(self) -> List[float]:
        """첫 붕괴 구간이 시작된 이후의 중심"""
        if not self.collapse_intervals:
            return list(self.centers)
        start = self.collapse_intervals[0][0]
        return [t for t in self.centers if t > start]

    def _primary_level(self) -> float:
        levels = [level for t, level in zip(self.centers, self.center_levels) if t in self.revival_centers]
        return max(levels) if levels else 0.0

    @property
    def secondary_centers(self) -> List[float]:
        """주 부활 대비 포락선 높이가 절반 미만인 중심"""
        cut = SECONDARY_CUT * self._primary_level()
        revivals = self.revival_centers
        return [t for t, level in zip(self.centers, self.center_levels) if t in revivals and level < cut]

    @property
    def primary_centers(self) -> List[float]:
        secondary = self.secondary_centers
        return [t for t in self.revival_centers if t not in secondary]

    @property
    def first_revival(self) -> Optional[float]:
        primary = self.primary_centers
        return primary[0] if primary else None


@dataclass(frozen=True)
class VarianceRevivalPrediction:
    """위상 분산 부활 조건에서 얻은 두 모드/단일 모드 부활 시간"""

    two_mode: float
    single_mode: float

    @property
    def ratio(self) -> float:
        return self.two_mode / self.single_mode


@dataclass(frozen=True)
class ContractionResult:
    """측정된 부활 시간 단축 비율"""

    two_mode_time: float
    single_mode_time: float
    expected: float
    tolerance: float = CONTRACTION_TOLERANCE

    @property
    def factor(self) -> float:
        return self.single_mode_time / self.two_mode_time

    @property
    def within_tolerance(self) -> bool:
        return abs(self.factor - self.expected) <= self.tolerance * self.expected


def _runs_below(mask: np.ndarray) -> List[Tuple[int, int]]:
    runs = []
    start = None
    for i, flag in enumerate(mask):
        if flag and start is None:
            start = i
        elif not flag and start is not None:
            runs.append((start, i - 1))
            start = None
    if start is not None:
        runs.append((start, mask.size - 1))
    return runs


def detect_revivals(series: TimeSeries, window: Optional[float] = None,
                    threshold: float = DEFAULT_THRESHOLD) -> RevivalReport:
    """
    이동 RMS 포락선으로 부활 패킷의 중심을 찾습니다.

    Args:
        series (TimeSeries): 분석할 시계열
        window (float): 포락선 창 길이 (T 단위, 기본값은 스윕 길이의 5%)
        threshold (float): 최대 포락선 대비 중심/붕괴 기준 (0과 1 사이)

    Returns:
        RevivalReport: 중심, 포락선, 붕괴 구간

    Raises:
        ValueError: 시계열이 너무 짧거나 창/기준이 범위를 벗어난 경우
    """
    if len(series) < MIN_SERIES_LENGTH:
        raise ValueError(f"시계열이 너무 짧습니다: {len(series)} < {MIN_SERIES_LENGTH}")
    if not 0.0 < threshold < 1.0:
        raise ValueError(f"threshold 는 (0, 1) 범위여야 합니다: {threshold}")

    times = series.times
    step = series.median_step
    if window is None:
        window = DEFAULT_WINDOW_FRACTION * (times[-1] - times[0])
    if window <= 2.0 * step:
        raise ValueError(f"창({window})이 시간 간격의 두 배({2.0 * step})보다 커야 합니다")

    samples = max(3, int(round(window / step)))
    centered = pd.Series(series.values - np.mean(series.values))
    envelope = (centered.pow(2)
                .rolling(samples, center=True, min_periods=samples)
                .mean()
                .pow(0.5)
                .bfill()
                .ffill()
                .to_numpy())

    env_max = float(np.max(envelope))
    envelope_series = TimeSeries(times, envelope)
    if env_max <= 0.0:
        return RevivalReport(centers=[], envelope=envelope_series, collapse_intervals=[])

    level = threshold * env_max
    collapse = [(float(times[a]), float(times[b])) for a, b in _runs_below(envelope < level)]

    peaks, props = find_peaks(envelope, height=level, prominence=PEAK_PROMINENCE * env_max,
                              distance=samples, plateau_size=1)
    # 평탄한 꼭대기는 왼쪽 끝 (작은 T) 으로
    indices = props['left_edges'] if peaks.size else peaks
    centers = [float(times[i]) for i in indices]
    levels = [float(envelope[i]) for i in indices]

    logger.debug(f"부활 검출: 중심 {len(centers)}개, 붕괴 구간 {len(collapse)}개, 창 {samples}샘플")
    return RevivalReport(centers=centers, envelope=envelope_series,
                         collapse_intervals=collapse, center_levels=levels)


def revival_spacing(report: RevivalReport) -> Optional[float]:
    """주 중심 간격의 중앙값 (중심이 둘 미만이면 None)"""
    if not report.centers:
        return None
    cut = SECONDARY_CUT * max(report.center_levels)
    primary = [t for t, level in zip(report.centers, report.center_levels) if level >= cut]
    if len(primary) < 2:
        return None
    return float(np.median(np.diff(primary)))


def restoration_time(series: TimeSeries, rel_prominence: float = PEAK_PROMINENCE) -> Optional[float]:
    """
    시계열의 첫 번째 뚜렷한 극소 시점을 반환합니다.

    위상 분산이 붕괴 후 초기 값 쪽으로 되돌아오는 시점을 찾는 데 씁니다.
    """
    values = series.values
    spread = float(np.max(values) - np.min(values))
    if spread <= 0.0:
        return None
    minima, _ = find_peaks(-values, prominence=rel_prominence * spread)
    if minima.size == 0:
        return None
    return float(series.times[minima[0]])


def _require_single_photon(config: SystemConfig, what: str):
    if config.k1 != 1 or config.k2 != 1:
        raise ValueError(f"{what} 는 k1 = k2 = 1 에서만 정의됩니다: k=({config.k1}, {config.k2})")


def _warn_weak_field(config: SystemConfig):
    weakest = min(abs(config.mode1.alpha), abs(config.mode2.alpha))
    if weakest < STRONG_FIELD_ALPHA:
        logger.warning(f"강한 장 근사 범위 밖입니다: |α| = {weakest:.3f} < {STRONG_FIELD_ALPHA}")


def _both_cats(config: SystemConfig) -> bool:
    return config.mode1.epsilon != 0 and config.mode2.epsilon != 0


def predict_revival_time(config: SystemConfig, cycles: float = 1.0) -> float:
    """
    강한 장 근사의 부활 시간 π·cycles/√(n̄m̄) 을 계산합니다.

    두 모드가 모두 고양이 상태이면 결과는 절반이 됩니다. 절대 상수 cycles 는
    calibrate_revival_cycles 로 측정값에 맞춰 정합니다.

    Args:
        config (SystemConfig): k1 = k2 = 1 인 설정
        cycles (float): 부활 조건의 정수 배율

    Returns:
        float: 예측 부활 시간
    """
    _require_single_photon(config, "predict_revival_time")
    _warn_weak_field(config)

    n_bar = photon_mean(config.mode1)
    m_bar = photon_mean(config.mode2)
    if n_bar <= 0.0 or m_bar <= 0.0:
        raise ValueError("평균 광자수가 0 인 모드가 있습니다")

    base = np.pi * cycles / np.sqrt(n_bar * m_bar)
    return float(base / 2.0 if _both_cats(config) else base)


def calibrate_revival_cycles(config: SystemConfig, measured: float) -> float:
    """측정된 부활 시간에 해당하는 cycles 값"""
    if measured <= 0.0:
        raise ValueError(f"측정된 부활 시간은 양수여야 합니다: {measured}")
    return float(measured / predict_revival_time(config, 1.0))


def rabi_spacing_revival_time(config: SystemConfig) -> float:
    """
    평균 광자수 부근의 Rabi 주파수 간격으로 부활 시간 π/ΔΛ 를 계산합니다.

    모드 1 이 고양이 상태이면 광자수가 두 칸씩 건너뛰므로 간격을 2 로 잡습니다.
    """
    n = int(round(photon_mean(config.mode1)))
    m = int(round(photon_mean(config.mode2)))
    jump = 2 if config.mode1.epsilon != 0 else 1
    spacing = rabi_frequency(config.k1, config.k2, n + jump, m) - rabi_frequency(config.k1, config.k2, n, m)
    if spacing <= 0.0:
        raise ValueError(f"모드 1 이 상호작용에 참여하지 않습니다: k1={config.k1}")
    return float(np.pi / spacing)


def _require_harmonic_regime(config: SystemConfig):
    _require_single_photon(config, "harmonic_variance_approx")
    if config.mode1.epsilon != 0 or config.mode2.epsilon != 0:
        raise ValueError("조화 근사는 코히런트 입력 (ε = 0) 에서만 정의됩니다")
    if config.varphi != 0.0 or config.phi != 0.0:
        raise ValueError("조화 근사는 들뜬 원자 (varphi = phi = 0) 에서만 정의됩니다")
    if config.mode1.alpha.imag != 0.0 or config.mode2.alpha.imag != 0.0:
        raise ValueError("조화 근사는 실수 진폭에서만 정의됩니다")


def harmonic_variance_approx(config: SystemConfig, T: float, printed_argument: bool = False) -> float:
    """
    모드 2 합을 조화 근사로 처리한 모드 1 위상 분산을 계산합니다.

    π²/3 + 4 Σ_{n>n'} C_n C_{n'} (-1)^{n'-n}/(n'-n)²
        · exp[-2m̄ sin²(TZ/4√m̄)] · cos[½T√m̄ Z + m̄ sin(TZ/2√m̄) + TZ/2√m̄],
    Z = √(n+1) - √(n'+1). printed_argument=True 이면 코사인 인자로
    ½T√m̄ Z + m̄ sin(TZ/4√m̄) 를 씁니다.

    Args:
        config (SystemConfig): k=(1,1), ε=(0,0), 들뜬 원자, 실수 진폭 설정
        T (float): 스케일 시간
        printed_argument (bool): 단순화된 코사인 인자 사용 여부

    Returns:
        float: 근사 위상 분산

    Raises:
        ValueError: 전제 조건을 만족하지 않는 경우
    """
    _require_harmonic_regime(config)
    _warn_weak_field(config)

    coeffs = np.real(amplitude_table(config.mode1, config.dim1).coeffs)
    m_bar = photon_mean(config.mode2)
    root_m = np.sqrt(m_bar)

    n = np.arange(config.dim1)
    upper = n[:, None] > n[None, :]
    gap = (n[None, :] - n[:, None]).astype(float)
    gap[~upper] = 1.0
    z = np.sqrt(n[:, None] + 1.0) - np.sqrt(n[None, :] + 1.0)

    damping = np.exp(-2.0 * m_bar * np.sin(T * z / (4.0 * root_m)) ** 2)
    if printed_argument:
        argument = 0.5 * T * root_m * z + m_bar * np.sin(T * z / (4.0 * root_m))
    else:
        theta = T * z / (2.0 * root_m)
        argument = 0.5 * T * root_m * z + m_bar * np.sin(theta) + theta

    sign = np.where(gap.astype(int) % 2 == 0, 1.0, -1.0)
    terms = np.outer(coeffs, coeffs) * sign / gap ** 2 * damping * np.cos(argument)
    return float(np.pi ** 2 / 3.0 + 4.0 * np.sum(terms[upper]))


def predict_variance_revival_time(config: SystemConfig, cycles: int = 1) -> VarianceRevivalPrediction:
    """
    인접 광자수 쌍의 Z = √(n̄+2) - √(n̄+1) 로 위상 분산 부활 시간을 계산합니다.

    단일 모드 JCM 은 TZ = lπ, 두 모드 조화 근사는 TZ/(4√m̄) = lπ 조건을 씁니다.
    조건을 그대로 풀면 ratio = 4√m̄ 이고, 실제 단축 방향은 contraction_factor 로 측정합니다.
    """
    _require_single_photon(config, "predict_variance_revival_time")
    n = int(round(photon_mean(config.mode1)))
    m_bar = photon_mean(config.mode2)
    z = np.sqrt(n + 2.0) - np.sqrt(n + 1.0)
    single = cycles * np.pi / z
    return VarianceRevivalPrediction(two_mode=float(4.0 * np.sqrt(m_bar) * single), single_mode=float(single))


def contraction_factor(alpha: float = 5.0, two_mode_t_max: float = 30.0, single_mode_t_max: float = 100.0,
                       steps: int = 2000, tolerance: float = CONTRACTION_TOLERANCE) -> ContractionResult:
    """
    두 모드 (k=(1,1)) 와 단일 모드 (k1=0, k2=1) 위상 분산의 복원 시점을 비교합니다.

    기대값 4√m̄ 에서 tolerance 비율 이상 벗어나면 경고를 남기고 측정값을 그대로 반환합니다.

    Args:
        alpha (float): 두 모드 공통 코히런트 진폭
        two_mode_t_max (float): 두 모드 스윕 끝 시간
        single_mode_t_max (float): 단일 모드 스윕 끝 시간
        steps (int): 스윕 단계 수
        tolerance (float): 상대 허용 오차

    Returns:
        ContractionResult: 측정 시간과 비율
    """
    mode = CatStateSpec(alpha, 0)
    two_mode = SystemConfig(mode, mode, k1=1, k2=1)
    single_mode = SystemConfig(mode, mode, k1=0, k2=1)

    two_series = phase_variance_series(two_mode, time_grid(0.0, two_mode_t_max, steps))['var1']
    single_series = phase_variance_series(single_mode, time_grid(0.0, single_mode_t_max, steps))['var2']

    two_time = restoration_time(two_series)
    single_time = restoration_time(single_series)
    if two_time is None or single_time is None:
        raise ValueError("위상 분산의 복원 시점을 찾지 못했습니다")

    result = ContractionResult(two_mode_time=two_time, single_mode_time=single_time,
                               expected=4.0 * np.sqrt(photon_mean(mode)), tolerance=tolerance)
    if result.within_tolerance:
        logger.info(f"부활 시간 단축 비율 {result.factor:.3f} (기대 {result.expected:.3f})")
    else:
        logger.warning(f"부활 시간 단축 비율 {result.factor:.3f} 이 기대값 {result.expected:.3f} 의 "
                       f"{tolerance:.0%} 범위를 벗어났습니다")
    return result
