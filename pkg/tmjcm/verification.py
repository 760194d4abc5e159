"""
검증 스위트
수치 적분 대조 (oracle), 원점 Wigner 항등식 (wigner), 정규화/주변 분포 불변량 (invariants) 을 실행합니다.
"""

import itertools
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Union

import numpy as np

from oracle import RungeKuttaIntegrator, initial_vector, to_dense
from .dynamics import SystemConfig, evolve, excitation_number
from .numerics import PeriodicGrid
from .phase import ANALYTIC, QUADRATURE, joint_distribution, marginal_distribution, phase_moments
from .states import CatStateSpec, choose_truncation
from .wigner import (EVEN_CATS_ODD_K, EVEN_K, MIXED_PARITY, ODD_K_EXCITED, origin_inversion_identity,
                     wigner_grid, wigner_origin)

logger = logging.getLogger(__name__)

SUITES = ('oracle', 'wigner', 'invariants')
DEFAULT_TOLERANCE_DIR = Path(__file__).resolve().parent.parent / 'config' / 'tolerances'


@dataclass(frozen=True)
class CheckResult:
    """검사 하나의 결과"""

    suite: str
    name: str
    passed: bool
    value: float
    limit: float
    detail: str = ''

    def describe(self) -> str:
        status = 'PASS' if self.passed else 'FAIL'
        text = f"[{status}] {self.suite}/{self.name}: {self.value:.3e} (한계 {self.limit:.3e})"
        return f"{text} - {self.detail}" if self.detail else text


@dataclass
class VerificationReport:
    """검사 결과 모음"""

    profile: str
    checks: List[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def first_failure(self) -> Optional[CheckResult]:
        return next((check for check in self.checks if not check.passed), None)


def load_tolerance_profile(name: str, directory: Union[str, Path] = DEFAULT_TOLERANCE_DIR) -> Dict[str, Any]:
    """
    허용 오차 프로필을 로드합니다.

    Args:
        name (str): 프로필 이름 (default, quick, strict)
        directory (str | Path): 프로필 디렉토리

    Returns:
        Dict[str, Any]: 프로필 내용

    Raises:
        ValueError: 프로필이 없거나 JSON 이 잘못된 경우
    """
    path = Path(directory) / f"{name}.json"
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return json.load(f)
    except FileNotFoundError:
        logger.error(f"허용 오차 프로필을 찾을 수 없습니다: {path}")
        raise ValueError(f"알 수 없는 허용 오차 프로필: {name}") from None
    except json.JSONDecodeError as e:
        logger.error(f"허용 오차 프로필 파싱 오류: {e}")
        raise ValueError(f"잘못된 허용 오차 프로필: {name}") from e


def oracle_dim(alpha: float, k: int, factor: float, cap: int) -> int:
    """수치 적분 대조용 절단 차원: 꼬리 기준 차원의 factor 배, cap 이하, k + 1 이상"""
    return max(min(int(np.ceil(factor * choose_truncation(alpha))), cap), k + 1)


class Verifier:
    """검증 스위트 실행 클래스"""

    def __init__(self, profile: Dict[str, Any]):
        """
        검증기 초기화

        Args:
            profile (Dict[str, Any]): load_tolerance_profile 로 읽은 프로필
        """
        self.profile = profile
        self.profile_name = profile.get('profile_name', 'custom')
        self.integrator = RungeKuttaIntegrator()

    def run(self, only: Optional[str] = None) -> VerificationReport:
        """
        스위트를 실행합니다.

        Args:
            only (str): 실행할 스위트 하나 (None 이면 전부)

        Returns:
            VerificationReport: 검사 결과
        """
        if only is not None and only not in SUITES:
            raise ValueError(f"알 수 없는 스위트: {only} (가능: {', '.join(SUITES)})")

        suites: Dict[str, Callable[[], List[CheckResult]]] = {
            'oracle': self.oracle_checks,
            'wigner': self.wigner_checks,
            'invariants': self.invariant_checks,
        }
        report = VerificationReport(profile=self.profile_name)
        for name in SUITES:
            if only is not None and name != only:
                continue
            logger.info(f"검증 스위트 실행: {name} (프로필 {self.profile_name})")
            report.checks.extend(suites[name]())
        return report

    def oracle_checks(self) -> List[CheckResult]:
        """해석적 전개와 RK4 적분의 충실도 행렬"""
        spec = self.profile['oracle']
        times = [float(t) for t in spec['times']]
        checks = []

        for (k1, k2), alpha in itertools.product(spec['k_pairs'], spec['alphas']):
            configs = []
            dim1, dim2 = (oracle_dim(alpha, k, float(spec['dim_factor']), int(spec['max_dim'])) for k in (k1, k2))
            for (eps1, eps2), varphi, phi in itertools.product(spec['epsilons'], spec['varphis'], spec['phis']):
                if alpha == 0.0 and -1 in (eps1, eps2):
                    continue
                configs.append(SystemConfig(CatStateSpec(alpha, eps1), CatStateSpec(alpha, eps2),
                                            k1=k1, k2=k2, varphi=varphi, phi=phi, dim1=dim1, dim2=dim2))
            if not configs:
                continue

            numeric = self.integrator.integrate_many(configs, times)
            initial_norms = [float(np.linalg.norm(initial_vector(config))) for config in configs]
            worst, worst_label = 1.0, ''
            drift = 0.0
            for T, row in zip(times, numeric):
                for config, dense, norm0 in zip(configs, row, initial_norms):
                    fidelity = to_dense(evolve(config, T)).fidelity(dense)
                    drift = max(drift, abs(dense.norm - norm0))
                    if fidelity < worst:
                        worst = fidelity
                        worst_label = (f"eps=({config.mode1.epsilon}, {config.mode2.epsilon}), "
                                       f"varphi={config.varphi:.4f}, phi={config.phi:.4f}, T={T}")

            name = f"fidelity k=({k1},{k2}) alpha={alpha:g}"
            checks.append(CheckResult('oracle', name, worst >= spec['min_fidelity'], 1.0 - worst,
                                      1.0 - spec['min_fidelity'], worst_label))
            checks.append(CheckResult('oracle', f"norm drift k=({k1},{k2}) alpha={alpha:g}",
                                      drift <= spec['max_norm_drift'], drift, spec['max_norm_drift']))
        return checks

    def _identity_configs(self, alpha: float) -> Dict[str, SystemConfig]:
        even = CatStateSpec(alpha, 1)
        coherent = CatStateSpec(alpha, 0)
        return {
            EVEN_CATS_ODD_K: SystemConfig(even, even, k1=1, k2=1),
            EVEN_K: SystemConfig(even, even, k1=2, k2=2),
            MIXED_PARITY: SystemConfig(even, even, k1=1, k2=2),
            ODD_K_EXCITED: SystemConfig(coherent, coherent, k1=1, k2=1),
        }

    def wigner_checks(self) -> List[CheckResult]:
        """원점 Wigner 항등식 잔차와 임의 지점 평가의 일관성"""
        spec = self.profile['wigner']
        t_grid = np.linspace(0.0, float(spec['t_max']), int(spec['steps']))
        limit = float(spec['max_residual'])
        checks = []

        for expected, config in self._identity_configs(float(spec['alpha'])).items():
            identity = origin_inversion_identity(config, t_grid)
            passed = identity.name == expected and identity.max_residual < limit
            checks.append(CheckResult('wigner', f"identity {expected}", passed, identity.max_residual, limit,
                                      identity.description))

        config = self._identity_configs(float(spec['alpha']))[EVEN_CATS_ODD_K]
        for T in (0.0, float(spec['t_max']) / 3.0):
            state = evolve(config, T)
            origin = wigner_origin(state)
            points = [complex(x) for x in spec['grid_points']]
            w1 = wigner_grid(state, 1, points)
            joint = wigner_grid(state, 'joint', [(0.0, 0.0)])
            mismatch = max(abs(w1[0] - origin.w1) if points[0] == 0 else 0.0, abs(joint[0] - origin.w_joint))
            checks.append(CheckResult('wigner', f"grid origin T={T:g}", mismatch < 1e-9, mismatch, 1e-9))
            excess = float(np.max(np.abs(w1)) - 1.0 / np.pi)
            checks.append(CheckResult('wigner', f"grid bound T={T:g}", excess <= 1e-9, max(excess, 0.0), 1e-9))
        return checks

    def _preset_states(self, names: Union[str, Sequence[str]]):
        from utils.presets import load_presets

        presets = load_presets()
        selected = presets.values() if names == 'all' else [presets[name] for name in names]
        for scenario in selected:
            for curve in scenario.curves:
                times = scenario.curve_snapshots(curve) or (scenario.t_min, 0.5 * (scenario.t_min + scenario.t_max),
                                                            scenario.t_max)
                for T in times:
                    yield scenario.name, curve, evolve(curve.system, T)

    def invariant_checks(self) -> List[CheckResult]:
        """노름, 결합 분포 정규화, 주변 분포 일치, 보존량, 모멘트 경로 일치"""
        spec = self.profile['invariants']
        grid = PeriodicGrid(int(spec['grid_count']))
        grid_2d = PeriodicGrid(int(spec['grid_2d_count']))
        worst = {'norm': 0.0, 'joint': 0.0, 'marginal': 0.0, 'excitation': 0.0}
        labels = dict.fromkeys(worst, '')

        def record(key: str, value: float, label: str):
            if value > worst[key]:
                worst[key] = value
                labels[key] = label

        for name, curve, state in self._preset_states(spec['presets']):
            label = f"{name}/{curve.label} T={state.T:g}"
            record('norm', abs(state.total_norm - 1.0), label)

            joint = joint_distribution(state, grid_2d, grid_2d)
            record('joint', abs(joint.total - state.total_norm), label)
            for mode in (1, 2):
                direct = marginal_distribution(state, mode, grid_2d).values
                integrated = joint.marginal(mode).values
                record('marginal', float(np.max(np.abs(direct - integrated))), label)
            # 1차원 분포 정규화
            record('joint', abs(marginal_distribution(state, 1, grid).total - state.total_norm), label)

            system = curve.system
            initial = evolve(system, 0.0)
            drift = abs(excitation_number(state, system.k1, system.k2)
                        - excitation_number(initial, system.k1, system.k2))
            record('excitation', drift, label)

        tolerances = {'norm': spec['norm_tol'], 'joint': spec['joint_tol'],
                      'marginal': spec['marginal_tol'], 'excitation': spec['excitation_tol']}
        checks = [CheckResult('invariants', key, worst[key] <= tolerances[key], worst[key], tolerances[key],
                              labels[key]) for key in worst]
        checks.append(self._moment_route_check(int(spec['moment_dim']), float(spec['moment_tol'])))
        return checks

    def _moment_route_check(self, dim: int, tol: float) -> CheckResult:
        """작은 절단에서 해석적/구적 위상 모멘트 비교"""
        config = SystemConfig(CatStateSpec(1.2, 1), CatStateSpec(0.8 + 0.3j, 0), k1=1, k2=2,
                              varphi=0.6, phi=0.4, dim1=dim, dim2=dim)
        worst = 0.0
        for T in (0.0, 1.3, 4.7):
            state = evolve(config, T)
            a = phase_moments(state, method=ANALYTIC)
            q = phase_moments(state, count=64, method=QUADRATURE)
            worst = max(worst, max(abs(getattr(a, f) - getattr(q, f))
                                   for f in ('mean1', 'mean2', 'mean_sq1', 'mean_sq2', 'cross')))
        return CheckResult('invariants', 'moment routes', worst <= tol, worst, tol)
