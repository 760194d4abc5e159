"""
적분기 기본 클래스
모든 시간 전개 적분기가 상속받는 추상 기본 클래스와 조밀 상태 벡터를 정의합니다.
"""

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import sparse

from tmjcm.dynamics import EvolvedState, SystemConfig
from tmjcm.states import amplitude_table

from .hamiltonian import build_hamiltonian, max_coupling, product_dims

logger = logging.getLogger(__name__)

STEP_SAFETY = 0.01


@dataclass(frozen=True)
class DenseStateVector:
    """기저 |atom, n1, n2⟩ (원자 우선 순서) 위의 진폭"""

    amplitudes: np.ndarray
    dims: Tuple[int, int]

    def __post_init__(self):
        amplitudes = np.array(self.amplitudes, dtype=complex).ravel()
        d1, d2 = self.dims
        if amplitudes.size != 2 * d1 * d2:
            raise ValueError(f"진폭 길이({amplitudes.size})가 2·D1·D2({2 * d1 * d2})와 다릅니다")
        amplitudes.setflags(write=False)
        object.__setattr__(self, 'amplitudes', amplitudes)
        object.__setattr__(self, 'dims', (int(d1), int(d2)))

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def fidelity(self, other: 'DenseStateVector') -> float:
        """정규화된 겹침 |⟨a|b⟩|² / (‖a‖²‖b‖²)"""
        if self.dims != other.dims:
            raise ValueError(f"차원이 다릅니다: {self.dims} != {other.dims}")
        scale = self.norm ** 2 * other.norm ** 2
        if scale == 0.0:
            raise ValueError("영벡터의 충실도는 정의되지 않습니다")
        return float(abs(np.vdot(self.amplitudes, other.amplitudes)) ** 2 / scale)

    def expectation(self, operator: sparse.spmatrix) -> float:
        """⟨ψ|O|ψ⟩ 의 실수부"""
        return float(np.real(np.vdot(self.amplitudes, operator @ self.amplitudes)))

    def branches(self) -> Tuple[np.ndarray, np.ndarray]:
        """(psi_plus, psi_minus), 각각 shape (D1, D2)"""
        d1, d2 = self.dims
        grid = self.amplitudes.reshape(2, d1, d2)
        return grid[0], grid[1]


def to_dense(state: EvolvedState) -> DenseStateVector:
    """해석적 전개 상태를 조밀 벡터로 바꿉니다."""
    return DenseStateVector(np.concatenate([state.psi_plus.ravel(), state.psi_minus.ravel()]), state.shape)


def initial_vector(config: SystemConfig) -> np.ndarray:
    """(cos φ |+⟩ + e^{iϕ} sin φ |-⟩) ⊗ |ψ₁⟩ ⊗ |ψ₂⟩"""
    d1, d2 = product_dims(config)
    c1 = np.zeros(d1, dtype=complex)
    c2 = np.zeros(d2, dtype=complex)
    c1[:config.dim1] = amplitude_table(config.mode1, config.dim1).coeffs
    c2[:config.dim2] = amplitude_table(config.mode2, config.dim2).coeffs
    atom = np.array([np.cos(config.varphi), np.exp(1j * config.phi) * np.sin(config.varphi)])
    return np.kron(atom, np.kron(c1, c2))


class BaseIntegrator(ABC):
    """Schrödinger 방정식 i dψ/dT = (Ĥ_I/g)ψ 적분기 기본 추상 클래스"""

    def __init__(self, name: str):
        """
        기본 적분기 초기화

        Args:
            name (str): 적분기 이름 (예: 'rk4')
        """
        self.name = name
        self.logger = logging.getLogger(f"{__name__}.{name}")

    @abstractmethod
    def advance(self, hamiltonian: sparse.spmatrix, states: np.ndarray, duration: float,
                n_steps: int) -> np.ndarray:
        """
        상태 묶음을 duration 만큼 n_steps 단계로 전개합니다.

        Args:
            hamiltonian (sparse.spmatrix): Ĥ_I/g
            states (np.ndarray): shape (N,) 또는 (N, B) 의 진폭
            duration (float): 전개 시간 (음수면 역방향)
            n_steps (int): 고정 단계 수

        Returns:
            np.ndarray: 전개된 진폭
        """
        pass

    def resolve_step(self, hamiltonian: sparse.spmatrix, step: Optional[float]) -> float:
        """
        단계 크기를 정하고 안정 조건 step ≤ 0.01/Λ_max 를 검사합니다.

        Raises:
            ValueError: 단계가 너무 큰 경우
        """
        lam_max = max_coupling(hamiltonian)
        limit = STEP_SAFETY / lam_max if lam_max > 0.0 else math.inf
        if step is None:
            return limit if math.isfinite(limit) else 1.0
        if step <= 0.0:
            raise ValueError(f"단계 크기는 양수여야 합니다: {step}")
        if step > limit:
            raise ValueError(f"단계 크기 {step} 가 한계 {limit:.3e} (= {STEP_SAFETY}/Λ_max) 를 넘습니다")
        return step

    def integrate(self, config: SystemConfig, T: float, step: Optional[float] = None) -> DenseStateVector:
        """
        초기 상태에서 스케일 시간 T 까지 적분합니다.

        Args:
            config (SystemConfig): 실험 설정
            T (float): 목표 시간 (음수 허용)
            step (float): 단계 크기 (기본값 0.01/Λ_max)

        Returns:
            DenseStateVector: 시간 T 의 상태
        """
        return self.integrate_many([config], [T], step)[0][0]

    def integrate_many(self, configs: Sequence[SystemConfig], checkpoints: Sequence[float],
                       step: Optional[float] = None) -> List[List[DenseStateVector]]:
        """
        같은 해밀토니안을 공유하는 여러 초기 상태를 한 번에 적분합니다.

        Args:
            configs (Sequence[SystemConfig]): k1, k2, 절단 차원이 같은 설정들
            checkpoints (Sequence[float]): 정렬된 기록 시간 (모두 0 이상, 또는 단일 시간)
            step (float): 단계 크기

        Returns:
            List[List[DenseStateVector]]: [기록 시간][설정] 순서의 상태
        """
        configs = list(configs)
        if not configs:
            raise ValueError("적분할 설정이 없습니다")
        shapes = {(c.k1, c.k2) + product_dims(c) for c in configs}
        if len(shapes) != 1:
            raise ValueError(f"한 묶음의 설정은 k 와 절단 차원이 같아야 합니다: {sorted(shapes)}")

        times = [float(t) for t in checkpoints]
        if len(times) > 1 and (min(times) < 0.0 or any(b < a for a, b in zip(times, times[1:]))):
            raise ValueError("여러 기록 시간은 0 이상이고 정렬되어 있어야 합니다")

        hamiltonian = build_hamiltonian(configs[0])
        step = self.resolve_step(hamiltonian, step)
        dims = product_dims(configs[0])

        states = np.stack([initial_vector(c) for c in configs], axis=1)
        initial_norms = np.linalg.norm(states, axis=0)
        results: List[List[DenseStateVector]] = []
        current = 0.0
        for target in times:
            duration = target - current
            n_steps = int(math.ceil(abs(duration) / step)) if duration != 0.0 else 0
            if n_steps:
                states = self.advance(hamiltonian, states, duration, n_steps)
            current = target
            results.append([DenseStateVector(states[:, j], dims) for j in range(states.shape[1])])

        drift = float(np.max(np.abs(np.linalg.norm(states, axis=0) - initial_norms)))
        self.log_integration(len(configs), times, step, drift)
        return results

    def log_integration(self, batch: int, times: Sequence[float], step: float, drift: float):
        """적분 결과와 노름 변화를 로깅합니다."""
        self.logger.debug(f"[{self.name}] 적분 완료: 상태 {batch}개, T={times}, step={step:.3e}")
        if drift > 1e-9:
            self.logger.warning(f"[{self.name}] 노름 변화가 큽니다: {drift:.3e}")
