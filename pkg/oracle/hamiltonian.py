"""
상호작용 해밀토니안 행렬
절단된 곱 공간 |atom, n1, n2⟩ 위에서 Ĥ_I/g = σ₊ a₁^{k1} a₂†^{k2} + h.c. 를 희소 행렬로 만듭니다.

기저 순서는 원자 우선 (0 = 들뜬 상태 +, 1 = 바닥 상태 -), 그다음 n1, n2 입니다.
"""

import logging
from typing import Tuple

import numpy as np
from scipy import sparse

from tmjcm.dynamics import SystemConfig

logger = logging.getLogger(__name__)

EXCITED = 0
GROUND = 1


def product_dims(config: SystemConfig) -> Tuple[int, int]:
    """(D1, D2) = (dim1 + k1, dim2 + k2)"""
    return config.state_shape


def basis_index(atom: int, n1: int, n2: int, dims: Tuple[int, int]) -> int:
    """atom·D1·D2 + n1·D2 + n2"""
    d1, d2 = dims
    if atom not in (EXCITED, GROUND) or not (0 <= n1 < d1 and 0 <= n2 < d2):
        raise ValueError(f"기저 인덱스 범위를 벗어났습니다: atom={atom}, n1={n1}, n2={n2}, dims={dims}")
    return atom * d1 * d2 + n1 * d2 + n2


def annihilation(dim: int) -> sparse.csr_matrix:
    """절단된 소멸 연산자 a (⟨n-1|a|n⟩ = √n)"""
    if dim == 1:
        return sparse.csr_matrix((1, 1))
    return sparse.diags(np.sqrt(np.arange(1, dim, dtype=float)), offsets=1, shape=(dim, dim), format='csr')


def _power(operator: sparse.csr_matrix, exponent: int) -> sparse.csr_matrix:
    result = sparse.identity(operator.shape[0], format='csr')
    for _ in range(exponent):
        result = result @ operator
    return result


def build_hamiltonian(config: SystemConfig) -> sparse.csr_matrix:
    """
    Ĥ_I/g 희소 행렬을 만듭니다.

    결합 쌍마다 ⟨+, n, m+k2|Ĥ|-, n+k1, m⟩ = Λ_{n,m} 와 그 켤레 두 원소만 0 이 아닙니다.

    Args:
        config (SystemConfig): 실험 설정 (k1, k2, 절단 차원)

    Returns:
        sparse.csr_matrix: shape (2·D1·D2, 2·D1·D2) 의 에르미트 행렬
    """
    d1, d2 = product_dims(config)
    lower1 = _power(annihilation(d1), config.k1)
    raise2 = _power(annihilation(d2).T.tocsr(), config.k2)
    field = sparse.kron(lower1, raise2, format='csr')

    sigma_plus = sparse.csr_matrix(([1.0], ([EXCITED], [GROUND])), shape=(2, 2))
    coupling = sparse.kron(sigma_plus, field, format='csr')
    hamiltonian = (coupling + coupling.T.conj()).tocsr()
    hamiltonian.eliminate_zeros()

    logger.debug(f"해밀토니안 생성: dims=({d1}, {d2}), k=({config.k1}, {config.k2}), nnz={hamiltonian.nnz}")
    return hamiltonian


def max_coupling(hamiltonian: sparse.spmatrix) -> float:
    """가장 큰 행렬 원소의 크기 (Λ_max)"""
    if hamiltonian.nnz == 0:
        return 0.0
    return float(np.max(np.abs(hamiltonian.data)))


def excitation_operator(config: SystemConfig) -> sparse.dia_matrix:
    """보존량 k2·n̂₁ + k1·n̂₂ 의 대각 행렬"""
    d1, d2 = product_dims(config)
    n1 = np.repeat(np.arange(d1), d2)
    n2 = np.tile(np.arange(d2), d1)
    diagonal = np.tile(config.k2 * n1 + config.k1 * n2, 2).astype(float)
    return sparse.diags(diagonal)
