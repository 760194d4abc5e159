"""
시나리오 실행기
프리셋 또는 설정 파일로 정의된 시나리오의 관측량을 계산하고 CSV/요약 파일로 저장합니다.
"""

import logging
from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from .analysis import detect_revivals, predict_revival_time, rabi_spacing_revival_time, revival_spacing
from .dynamics import SystemConfig, evolve, evolve_many, inversion_series, photon_variances
from .numerics import DEFAULT_GRID_COUNT, PeriodicGrid
from .phase import joint_distribution, marginal_distribution, phase_variance_series
from .series import time_grid
from .wigner import wigner_origin_series
from utils.config_file import RunConfig, config_values
from utils.csv_export import FileSummary, ResultWriter, format_time

logger = logging.getLogger(__name__)

INVERSION = 'inversion'
PHASE_1D = 'phase1d'
PHASE_2D = 'phase2d'
PHASE_VARIANCES = 'phase_variances'
PHOTON_VARIANCES = 'photon_variances'
WIGNER_ORIGIN = 'wigner_origin'
OBSERVABLES = (INVERSION, PHASE_1D, PHASE_2D, PHASE_VARIANCES, PHOTON_VARIANCES, WIGNER_ORIGIN)
SNAPSHOT_OBSERVABLES = (PHASE_1D, PHASE_2D)

DEFAULT_GRID_2D_COUNT = 128

CONVENTIONS = {
    'time': 'scaled time T = g t',
    'phase_window': '[-pi, pi)',
    'wigner_normalization': '1/pi per mode; vacuum origin value 1/pi, joint vacuum 1/pi^2',
    'atom_basis': 'index 0 = excited (+), 1 = ground (-)',
}


@dataclass(frozen=True)
class Curve:
    """시나리오 안의 곡선 하나 (자체 스냅샷 시간이 있으면 시나리오 값을 대신함)"""

    label: str
    system: SystemConfig
    snapshots: Optional[Tuple[float, ...]] = None


@dataclass(frozen=True)
class Scenario:
    """이름 붙은 실험: 곡선들, 시간 스윕 또는 스냅샷, 계산할 관측량"""

    name: str
    curves: Tuple[Curve, ...]
    observables: Tuple[str, ...]
    t_min: float = 0.0
    t_max: float = 20.0
    steps: int = 2000
    snapshots: Tuple[float, ...] = ()
    phase_mode: int = 1
    figure: str = ''
    description: str = ''
    notes: Tuple[str, ...] = ()

    def __post_init__(self):
        if not self.name:
            raise ValueError("시나리오 이름이 비어 있습니다")
        if not self.curves:
            raise ValueError(f"[{self.name}] 곡선이 없습니다")
        unknown = [o for o in self.observables if o not in OBSERVABLES]
        if unknown:
            raise ValueError(f"[{self.name}] 알 수 없는 관측량: {unknown}")
        if self.steps < 2:
            raise ValueError(f"[{self.name}] 스윕 단계 수는 2 이상이어야 합니다: {self.steps}")
        if self.phase_mode not in (1, 2):
            raise ValueError(f"[{self.name}] phase_mode 는 1 또는 2 여야 합니다: {self.phase_mode}")

    @property
    def times(self) -> np.ndarray:
        return time_grid(self.t_min, self.t_max, self.steps)

    def with_snapshots(self, snapshots: Sequence[float]) -> 'Scenario':
        """스냅샷 시간을 바꾼 시나리오 (곡선별 스냅샷도 덮어씀)"""
        curves = tuple(replace(curve, snapshots=None) for curve in self.curves)
        return replace(self, curves=curves, snapshots=tuple(float(t) for t in snapshots))

    def curve_snapshots(self, curve: Curve) -> Tuple[float, ...]:
        return curve.snapshots if curve.snapshots is not None else self.snapshots


@dataclass
class ScenarioResult:
    """계산된 표와 요약"""

    scenario: Scenario
    frames: Dict[str, pd.DataFrame] = field(default_factory=dict)
    plot_columns: Dict[str, Tuple[str, ...]] = field(default_factory=dict)
    analysis: Dict[str, Any] = field(default_factory=dict)

    def add(self, filename: str, frame: pd.DataFrame, plot_columns: Tuple[str, ...]):
        self.frames[filename] = frame
        self.plot_columns[filename] = plot_columns


def _snapshot_name(kind: str, T: float) -> str:
    return f"{kind}_T{format_time(T)}.csv"


class ScenarioRunner:
    """시나리오 관측량 계산 및 저장 클래스"""

    def __init__(self, grid_count: int = DEFAULT_GRID_COUNT, grid_2d_count: int = DEFAULT_GRID_2D_COUNT):
        """
        실행기 초기화

        Args:
            grid_count (int): 단일 모드 위상 분포 격자 크기
            grid_2d_count (int): 결합 위상 분포의 축당 격자 크기
        """
        self.grid = PeriodicGrid(grid_count)
        self.grid_2d = PeriodicGrid(grid_2d_count)

    def run(self, scenario: Scenario) -> ScenarioResult:
        """
        시나리오의 모든 관측량을 계산합니다.

        Args:
            scenario (Scenario): 실행할 시나리오

        Returns:
            ScenarioResult: 파일 이름별 표와 분석 요약
        """
        logger.info(f"[{scenario.name}] 실행 시작: 곡선 {len(scenario.curves)}개, "
                    f"관측량 {', '.join(scenario.observables)}")
        result = ScenarioResult(scenario=scenario)
        handlers = {
            INVERSION: self._inversion,
            WIGNER_ORIGIN: self._wigner_origin,
            PHASE_VARIANCES: self._phase_variances,
            PHOTON_VARIANCES: self._photon_variances,
            PHASE_1D: self._phase_1d,
            PHASE_2D: self._phase_2d,
        }
        for observable in scenario.observables:
            handlers[observable](scenario, result)
        logger.info(f"[{scenario.name}] 실행 완료: 파일 {len(result.frames)}개")
        return result

    def _inversion(self, scenario: Scenario, result: ScenarioResult):
        frames = []
        revivals = {}
        for curve in scenario.curves:
            series = inversion_series(curve.system, scenario.times)
            frames.append(pd.DataFrame({'curve': curve.label, 'T': series.times, 'sigma_z': series.values}))
            revivals[curve.label] = self._revival_summary(curve.system, series)
        result.add('inversion.csv', pd.concat(frames, ignore_index=True), ('T', 'sigma_z'))
        result.analysis['inversion_revivals'] = revivals

    def _revival_summary(self, system: SystemConfig, series) -> Dict[str, Any]:
        summary: Dict[str, Any] = {}
        try:
            report = detect_revivals(series)
        except ValueError as e:
            logger.warning(f"부활 검출 실패: {e}")
            return summary
        summary['first_revival'] = report.first_revival
        summary['revival_centers'] = report.revival_centers
        summary['secondary_centers'] = report.secondary_centers
        try:
            summary['rabi_spacing_prediction'] = rabi_spacing_revival_time(system)
        except ValueError:
            pass
        if system.k1 == 1 and system.k2 == 1:
            summary['strong_field_prediction'] = predict_revival_time(system)
        return summary

    def _wigner_origin(self, scenario: Scenario, result: ScenarioResult):
        frames = []
        for curve in scenario.curves:
            series = wigner_origin_series(curve.system, scenario.times)
            frames.append(pd.DataFrame({'curve': curve.label, 'T': series['w1'].times,
                                        'w1': series['w1'].values, 'w2': series['w2'].values,
                                        'w_joint': series['w_joint'].values}))
        result.add('wigner_origin.csv', pd.concat(frames, ignore_index=True), ('T', 'w_joint'))

    def _phase_variances(self, scenario: Scenario, result: ScenarioResult):
        frames = []
        spacing = {}
        for curve in scenario.curves:
            series = phase_variance_series(curve.system, scenario.times)
            frame = pd.DataFrame({'curve': curve.label, 'T': series['var1'].times})
            for name, values in series.items():
                frame[name] = values.values
            frames.append(frame)
            try:
                spacing[curve.label] = revival_spacing(detect_revivals(series['var1']))
            except ValueError as e:
                logger.warning(f"[{curve.label}] 위상 분산 부활 간격 계산 실패: {e}")
                spacing[curve.label] = None
        result.add('phase_variances.csv', pd.concat(frames, ignore_index=True), ('T', 'var1'))
        result.analysis['phase_variance_revival_spacing'] = spacing

    def _photon_variances(self, scenario: Scenario, result: ScenarioResult):
        frames = []
        for curve in scenario.curves:
            rows = [photon_variances(state) for state in evolve_many(curve.system, scenario.times)]
            frame = pd.DataFrame(rows)
            frame.insert(0, 'T', scenario.times)
            frame.insert(0, 'curve', curve.label)
            frames.append(frame)
        result.add('photon_variances.csv', pd.concat(frames, ignore_index=True), ('T', 'var1'))

    def _snapshot_groups(self, scenario: Scenario) -> Dict[float, List[Curve]]:
        groups: Dict[float, List[Curve]] = {}
        for curve in scenario.curves:
            for T in scenario.curve_snapshots(curve):
                groups.setdefault(float(T), []).append(curve)
        if not groups:
            raise ValueError(f"[{scenario.name}] 스냅샷 시간이 없습니다")
        return groups

    def _phase_1d(self, scenario: Scenario, result: ScenarioResult):
        mode = scenario.phase_mode
        for T, curves in self._snapshot_groups(scenario).items():
            frames = []
            for curve in curves:
                dist = marginal_distribution(evolve(curve.system, T), mode, self.grid)
                frames.append(pd.DataFrame({'curve': curve.label, 'mode': mode,
                                            'theta': dist.grid.points, 'probability': dist.values}))
            result.add(_snapshot_name(PHASE_1D, T), pd.concat(frames, ignore_index=True),
                       ('theta', 'probability'))

    def _phase_2d(self, scenario: Scenario, result: ScenarioResult):
        for T, curves in self._snapshot_groups(scenario).items():
            frames = []
            for curve in curves:
                dist = joint_distribution(evolve(curve.system, T), self.grid_2d, self.grid_2d)
                theta1, theta2 = np.meshgrid(dist.grid1.points, dist.grid2.points, indexing='ij')
                frames.append(pd.DataFrame({'curve': curve.label, 'theta1': theta1.ravel(),
                                            'theta2': theta2.ravel(), 'probability': dist.values.ravel()}))
            result.add(_snapshot_name(PHASE_2D, T), pd.concat(frames, ignore_index=True),
                       ('theta1', 'theta2', 'probability'))

    def summary(self, result: ScenarioResult) -> Dict[str, Any]:
        """summary.json 내용"""
        scenario = result.scenario
        curves = {}
        for curve in scenario.curves:
            run = RunConfig(system=curve.system, t_min=scenario.t_min, t_max=scenario.t_max, steps=scenario.steps)
            curves[curve.label] = {'config': config_values(run),
                                   'snapshots': list(scenario.curve_snapshots(curve))}
        return {
            'scenario': scenario.name,
            'figure': scenario.figure,
            'description': scenario.description,
            'observables': list(scenario.observables),
            'phase_mode': scenario.phase_mode,
            'curves': curves,
            'conventions': CONVENTIONS,
            'notes': list(scenario.notes),
            'analysis': result.analysis,
        }

    def save(self, result: ScenarioResult, writer: ResultWriter, gnuplot: bool = False) -> List[FileSummary]:
        """
        결과 표와 summary.json 을 저장합니다.

        Args:
            result (ScenarioResult): 실행 결과
            writer (ResultWriter): 출력 디렉토리 기록기
            gnuplot (bool): gnuplot 스크립트 생성 여부

        Returns:
            List[FileSummary]: CSV 파일별 요약
        """
        summaries = []
        for filename, frame in result.frames.items():
            summaries.append(writer.write_frame(filename, frame, result.plot_columns[filename],
                                                title=f"{result.scenario.name} {filename}"))
        summary = self.summary(result)
        summary['files'] = {s.path.name: {'rows': s.rows, 'stats': s.stats} for s in summaries}
        writer.write_json('summary.json', summary)
        if gnuplot:
            writer.write_gnuplot()
        return summaries
