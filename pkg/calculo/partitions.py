"""
Combinatória exata de partições, diagramas de Young, faixas verticais e formas.

Convenções: partições têm capacidade fixa N com zeros finais explícitos;
linhas e colunas das células são indexadas a partir de 1, como nos diagramas.
"""

from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Callable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .erros import ParametroInvalidoError


@dataclass(frozen=True)
class Partition:
    """Sequência fracamente decrescente de inteiros não negativos, de comprimento exato N"""

    parts: Tuple[int, ...]

    def __post_init__(self):
        for i, p in enumerate(self.parts):
            if p < 0:
                raise ParametroInvalidoError(f"Parte negativa na posição {i + 1}: {p}")
            if i > 0 and self.parts[i - 1] < p:
                raise ParametroInvalidoError(
                    f"Partição não é fracamente decrescente: {list(self.parts)}"
                )

    @property
    def N(self) -> int:
        return len(self.parts)

    @property
    def size(self) -> int:
        return sum(self.parts)

    @property
    def first(self) -> int:
        return self.parts[0] if self.parts else 0

    def __getitem__(self, i: int) -> int:
        return self.parts[i]

    def __iter__(self):
        return iter(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def to_json(self) -> List[int]:
        return list(self.parts)

    def column_length(self, j: int) -> int:
        """λ'_j, calculado sem materializar o conjugado"""
        return sum(1 for p in self.parts if p >= j)

    def contains(self, cell: "Cell") -> bool:
        return 1 <= cell.row <= self.N and 1 <= cell.col <= self.parts[cell.row - 1]


@dataclass(frozen=True, order=True)
class Cell:
    row: int
    col: int


@dataclass(frozen=True)
class ShapeVector:
    """Vetor σ ∈ {0,…,k}^N; N_r = |{i : σ_i = r}|"""

    entries: Tuple[int, ...]

    def __post_init__(self):
        if any(e < 0 for e in self.entries):
            raise ParametroInvalidoError(f"Forma com entrada negativa: {list(self.entries)}")

    @property
    def N(self) -> int:
        return len(self.entries)

    @property
    def k(self) -> int:
        return max(self.entries, default=0)

    @property
    def multiplicities(self) -> Tuple[int, ...]:
        return tuple(sum(1 for e in self.entries if e == r) for r in range(1, self.k + 1))

    @property
    def size(self) -> int:
        return sum(self.entries)


def new_partition(parts: Sequence[int], N: int) -> Partition:
    """Valida e completa com zeros até o comprimento N"""
    parts = [int(p) for p in parts]
    if N < 0:
        raise ParametroInvalidoError(f"Capacidade N deve ser não negativa, recebido {N}")
    if len(parts) > N:
        raise ParametroInvalidoError(
            f"Partição {parts} tem {len(parts)} partes, acima da capacidade N={N}"
        )
    return Partition(tuple(parts) + (0,) * (N - len(parts)))


def conjugate(lam: Partition) -> Partition:
    """Reflexão do diagrama na diagonal; a capacidade do resultado é λ_1"""
    return Partition(tuple(lam.column_length(j) for j in range(1, lam.first + 1)))


def _check_cell(lam: Partition, s: Cell) -> None:
    if not lam.contains(s):
        raise ParametroInvalidoError(f"Célula ({s.row},{s.col}) fora do diagrama de {lam.to_json()}")


def arm(lam: Partition, s: Cell) -> int:
    _check_cell(lam, s)
    return lam[s.row - 1] - s.col


def leg(lam: Partition, s: Cell) -> int:
    _check_cell(lam, s)
    return lam.column_length(s.col) - s.row


def gap(lam: Partition) -> int:
    """min_i (λ_i − λ_{i+1}) com λ_{N+1} = 0"""
    if lam.N == 0:
        return 0
    extended = lam.parts + (0,)
    return min(extended[i] - extended[i + 1] for i in range(lam.N))


def add_scalar(lam: Partition, n: int) -> Partition:
    """λ + n: retângulo N×n anexado à esquerda"""
    if n < 0:
        raise ParametroInvalidoError(f"n deve ser não negativo, recebido {n}")
    return Partition(tuple(p + n for p in lam.parts))


def add_shape(lam: Partition, sigma: ShapeVector) -> Partition:
    """ν = λ + σ, exigindo gap(λ) ≥ k"""
    if sigma.N != lam.N:
        raise ParametroInvalidoError(
            f"Forma de altura {sigma.N} incompatível com partição de capacidade {lam.N}"
        )
    if gap(lam) < sigma.k:
        raise ParametroInvalidoError(
            f"gap({lam.to_json()}) = {gap(lam)} menor que k = {sigma.k}"
        )
    return Partition(tuple(p + s for p, s in zip(lam.parts, sigma.entries)))


def count_partitions(N: int, lambda_max: int) -> int:
    return comb(lambda_max + N, N)


def iter_partitions(N: int, lambda_max: int,
                    first_range: Optional[Tuple[int, int]] = None) -> Iterator[Partition]:
    """Itera partições com no máximo N partes e λ_1 ≤ Λ, ordenadas por (λ_1, λ_2, …).

    `first_range=(lo, hi)` restringe λ_1 a [lo, hi); intervalos disjuntos dão
    subconjuntos disjuntos, o que permite dividir o domínio entre workers.
    """
    if N < 1 or lambda_max < 0:
        raise ParametroInvalidoError(f"Domínio inválido: N={N}, Λ={lambda_max}")
    lo, hi = first_range if first_range is not None else (0, lambda_max + 1)
    hi = min(hi, lambda_max + 1)

    def _tail(rows: int, cap: int) -> Iterator[Tuple[int, ...]]:
        if rows == 0:
            yield ()
            return
        for head in range(cap + 1):
            for rest in _tail(rows - 1, head):
                yield (head,) + rest

    for first in range(max(lo, 0), hi):
        for rest in _tail(N - 1, first):
            yield Partition((first,) + rest)


def enumerate_partitions(N: int, lambda_max: int,
                         visitor: Callable[[Partition], None]) -> None:
    for lam in iter_partitions(N, lambda_max):
        visitor(lam)


def partition_array(N: int, first_lo: int, first_hi: int) -> np.ndarray:
    """Todas as partições com λ_1 ∈ [lo, hi) como matriz inteira (m, N), na mesma ordem de iter_partitions"""
    if N == 1:
        return np.arange(first_lo, first_hi, dtype=np.int64).reshape(-1, 1)
    # na ordem lexicográfica, as partições com λ_2 ≤ a formam um prefixo
    sub = partition_array(N - 1, 0, max(first_hi, 1))
    blocks = []
    for first in range(first_lo, first_hi):
        prefix = sub[:comb(first + N - 1, N - 1)]
        block = np.empty((prefix.shape[0], N), dtype=np.int64)
        block[:, 0] = first
        block[:, 1:] = prefix
        blocks.append(block)
    if not blocks:
        return np.empty((0, N), dtype=np.int64)
    return np.concatenate(blocks)


def is_vertical_strip(nu: Partition, mu: Partition) -> bool:
    """ν/μ tem no máximo uma célula por linha"""
    if nu.N != mu.N:
        return False
    return all(0 <= a - b <= 1 for a, b in zip(nu.parts, mu.parts))


def enumerate_vertical_strips(mu: Partition, p: int) -> Iterator[Partition]:
    if not 0 <= p <= mu.N:
        raise ParametroInvalidoError(f"Tamanho de faixa p={p} fora de [0, {mu.N}]")
    for rows in combinations(range(mu.N), p):
        added = set(rows)
        parts = tuple(m + (1 if i in added else 0) for i, m in enumerate(mu.parts))
        if all(parts[i] >= parts[i + 1] for i in range(mu.N - 1)):
            yield Partition(parts)


def vertical_strip_shapes(N: int, p: int) -> List[Tuple[int, ...]]:
    """Vetores σ ∈ {0,1}^N com |σ| = p; a validade depende da partição de base"""
    shapes = []
    for rows in combinations(range(N), p):
        shapes.append(tuple(1 if i in rows else 0 for i in range(N)))
    return shapes


def cells_C_minus_R(tau: Partition, mu: Partition) -> List[Cell]:
    """Células de τ nas colunas que cortam τ/μ e fora das linhas que cortam τ/μ"""
    if not is_vertical_strip(tau, mu):
        raise ParametroInvalidoError(
            f"{tau.to_json()}/{mu.to_json()} não é uma faixa vertical"
        )
    rows = {i + 1 for i in range(tau.N) if tau[i] != mu[i]}
    cols = sorted({tau[i - 1] for i in rows})
    cells = [Cell(r, j) for j in cols for r in range(1, tau.column_length(j) + 1)
             if r not in rows]
    return sorted(cells)


def enumerate_shapes(N: int, multiplicities: Sequence[int]) -> Iterator[ShapeVector]:
    """Cada (N_1,…,N_k)-forma de altura N exatamente uma vez, em ordem lexicográfica"""
    counts = [int(m) for m in multiplicities]
    if any(m < 0 for m in counts):
        raise ParametroInvalidoError(f"Multiplicidades negativas: {counts}")
    n0 = N - sum(counts)
    if n0 < 0:
        raise ParametroInvalidoError(
            f"Multiplicidades {counts} excedem a altura N={N}"
        )
    remaining = [n0] + counts

    def _build(prefix: List[int]) -> Iterator[Tuple[int, ...]]:
        if len(prefix) == N:
            yield tuple(prefix)
            return
        for value, left in enumerate(remaining):
            if left:
                remaining[value] -= 1
                prefix.append(value)
                yield from _build(prefix)
                prefix.pop()
                remaining[value] += 1

    for entries in _build([]):
        yield ShapeVector(entries)


def multinomial(counts: Sequence[int]) -> int:
    total, result = 0, 1
    for c in counts:
        total += c
        result *= comb(total, c)
    return result
