"""
Quantidades escalares dos polinômios de Jack em ponto flutuante.

Produtos de gancho, símbolos de Pochhammer generalizados, normas, valores em 1
e coeficientes de Pieri. Tudo é positivo para 0 < γ, então trabalhamos em
escala logarítmica via log-Γ e nunca materializamos os polinômios.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import special

from .erros import ChaosError, ParametroInvalidoError
from .numerics import LogValue, log_F
from .partitions import (Cell, Partition, ShapeVector, add_shape,
                         cells_C_minus_R)

logger = logging.getLogger(__name__)

TOL_NORMA = 1e-10
X_MAX_VARREDURA = 1e6


@dataclass(frozen=True)
class ChaosParams:
    """β ∈ (0, 1) e o número de partículas N; γ = β²/2 é sempre derivado"""

    beta: float
    N: int
    permitir_supercritico: bool = field(default=False, compare=False, repr=False)
    _gamma_exato: Optional[float] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if not isinstance(self.N, (int, np.integer)) or self.N < 1:
            raise ParametroInvalidoError(f"N deve ser inteiro positivo, recebido {self.N}")
        if not self.beta > 0:
            raise ParametroInvalidoError(f"β deve ser positivo, recebido {self.beta}")
        if not self.permitir_supercritico and not self.beta < 1:
            raise ParametroInvalidoError(
                f"β = {self.beta} fora da fase subcrítica imaginária 0 < β < 1"
            )

    @property
    def gamma(self) -> float:
        if self._gamma_exato is not None:
            return self._gamma_exato
        return self.beta * self.beta / 2.0

    @classmethod
    def from_gamma(cls, gamma: float, N: int,
                   permitir_supercritico: bool = False) -> "ChaosParams":
        """Construção algébrica (oráculos, testes de Pieri com γ ≥ ½)"""
        if not gamma > 0:
            raise ParametroInvalidoError(f"γ deve ser positivo, recebido {gamma}")
        return cls(math.sqrt(2.0 * gamma), N, permitir_supercritico, float(gamma))

    def exigir_subcritico(self) -> None:
        if not 0 < self.gamma < 0.5:
            raise ParametroInvalidoError(f"γ = {self.gamma} fora de (0, ½)")


def log_hook_products(parts: np.ndarray, gamma: float, primo: bool = False) -> np.ndarray:
    """log c_λ (ou log c'_λ) para cada linha de uma matriz (m, N) de partições.

    As células da linha i com perna k−i formam um bloco contíguo de braços, e o
    produto sobre o bloco é uma razão de Γ; custo O(N²) por partição.
    """
    parts = np.atleast_2d(np.asarray(parts, dtype=np.float64))
    m, N = parts.shape
    total = np.zeros(m)
    estendido = np.concatenate([parts, np.zeros((m, 1))], axis=1)
    for i in range(N):
        for k in range(i, N):
            s = gamma * (k - i) + 1.0 if primo else gamma * (k - i + 1)
            total += (special.gammaln(estendido[:, i] - estendido[:, k + 1] + s)
                      - special.gammaln(estendido[:, i] - estendido[:, k] + s))
    return total


def c_product(lam: Partition, params: ChaosParams) -> LogValue:
    if lam.N == 0:
        return LogValue(0.0)
    return LogValue(float(log_hook_products(np.array([lam.parts]), params.gamma)[0]))


def c_prime_product(lam: Partition, params: ChaosParams) -> LogValue:
    if lam.N == 0:
        return LogValue(0.0)
    return LogValue(float(log_hook_products(np.array([lam.parts]), params.gamma, primo=True)[0]))


def pochhammer_general(b: float, lam: Partition, params: ChaosParams) -> LogValue:
    """[b]_λ = Π_i Γ(b−(i−1)γ+λ_i)/Γ(b−(i−1)γ)"""
    total = 0.0
    for i, parte in enumerate(lam.parts):
        if parte == 0:
            continue
        base = b - i * params.gamma
        if base <= 0:
            raise ParametroInvalidoError(
                f"Argumento de Γ não positivo na linha {i + 1}: {base}"
            )
        total += special.gammaln(base + parte) - special.gammaln(base)
    return LogValue(float(total))


def F(x: float, params: ChaosParams) -> LogValue:
    """F(x) = Γ(x)/Γ(x+1−γ)"""
    if not x > 0:
        raise ParametroInvalidoError(f"F exige x > 0, recebido {x}")
    return LogValue(float(log_F(x, params.gamma)))


def log_K(N: int, gamma: float) -> float:
    """Constante de Dyson Γ(1+Nγ)/Γ(1+γ)^N"""
    return float(special.gammaln(1.0 + N * gamma) - N * special.gammaln(1.0 + gamma))


def log_C(N: int, gamma: float) -> float:
    return float((N - 1) * math.log(gamma) + special.gammaln(N) - special.gammaln(N * gamma))


def row_offsets(N: int, gamma: float) -> np.ndarray:
    """d_i = (N−i+1)γ para i = 1..N"""
    return gamma * np.arange(N, 0, -1, dtype=np.float64)


def norm_sq(lam: Partition, params: ChaosParams) -> LogValue:
    """‖P_λ‖²_γ na forma produto K·C·(c'/c)·Π F(d_i+λ_i), conferida contra a forma de Pochhammer"""
    N, gamma = params.N, params.gamma
    if lam.N != N:
        raise ParametroInvalidoError(f"Partição de capacidade {lam.N} com N = {N}")
    log_c = c_product(lam, params).log_magnitude
    log_cp = c_prime_product(lam, params).log_magnitude
    produto = (log_K(N, gamma) + log_C(N, gamma) + log_cp - log_c
               + float(np.sum(log_F(row_offsets(N, gamma) + np.asarray(lam.parts), gamma))))
    pochhammer = (log_K(N, gamma) + log_cp
                  - pochhammer_general(1.0 + (N - 1) * gamma, lam, params).log_magnitude
                  + pochhammer_general(N * gamma, lam, params).log_magnitude - log_c)
    limite = TOL_NORMA * max(1.0, abs(log_c) + abs(log_cp))
    if abs(produto - pochhammer) > limite:
        raise ChaosError(
            f"Formas da norma divergem para {lam.to_json()}: {produto} vs {pochhammer}",
            {"produto": produto, "pochhammer": pochhammer},
        )
    return LogValue(produto)


def value_at_one(lam: Partition, params: ChaosParams) -> LogValue:
    """P_λ(1^N) = [Nγ]_λ / c_λ"""
    return pochhammer_general(params.N * params.gamma, lam, params) / c_product(lam, params)


def rectangle_ratio_c(lam: Partition, n: int, params: ChaosParams) -> LogValue:
    """c_{λ+n}/c_λ pelo retângulo N×n anexado à esquerda"""
    if n < 0:
        raise ParametroInvalidoError(f"n deve ser não negativo, recebido {n}")
    base = row_offsets(lam.N, params.gamma) + np.asarray(lam.parts, dtype=np.float64)
    return LogValue(float(np.sum(special.gammaln(base + n) - special.gammaln(base))))


def rectangle_ratio_cprime(lam: Partition, n: int, params: ChaosParams) -> LogValue:
    if n < 0:
        raise ParametroInvalidoError(f"n deve ser não negativo, recebido {n}")
    base = (row_offsets(lam.N, params.gamma) + np.asarray(lam.parts, dtype=np.float64)
            + 1.0 - params.gamma)
    return LogValue(float(np.sum(special.gammaln(base + n) - special.gammaln(base))))


def b_cell(lam: Partition, s: Cell, params: ChaosParams) -> float:
    """b_λ(s) = (a+γl+γ)/(a+γl+1)"""
    if not lam.contains(s):
        raise ParametroInvalidoError(
            f"Célula ({s.row},{s.col}) fora do diagrama de {lam.to_json()}"
        )
    a = lam[s.row - 1] - s.col
    l = lam.column_length(s.col) - s.row
    g = params.gamma
    return (a + g * l + g) / (a + g * l + 1.0)


def pieri_psi_prime(tau: Partition, mu: Partition, params: ChaosParams) -> float:
    """ψ'_{τ/μ} = Π sobre C_{τ/μ} − R_{τ/μ} de b_τ(s)/b_μ(s)"""
    produto = 1.0
    for s in cells_C_minus_R(tau, mu):
        produto *= b_cell(tau, s, params) / b_cell(mu, s, params)
    return produto


def log_psi_prime_array(nu: np.ndarray, mu: np.ndarray, gamma: float) -> np.ndarray:
    """log ψ'_{ν/μ} vetorizado sobre linhas de matrizes (m, N) com ν/μ faixa vertical"""
    nu = np.atleast_2d(nu)
    mu = np.atleast_2d(mu)
    m, N = nu.shape
    adicionada = (nu - mu) == 1
    total = np.zeros(m)
    for i in range(1, N):
        j = nu[:, i]
        # uma mesma coluna pode receber várias células; conta a mais alta
        primeira = adicionada[:, i].copy()
        for i2 in range(i):
            primeira &= ~(adicionada[:, i2] & (nu[:, i2] == j))
        col_nu = np.sum(nu >= j[:, None], axis=1)
        col_mu = np.sum(mu >= j[:, None], axis=1)
        for r in range(i):
            mascara = primeira & ~adicionada[:, r]
            if not mascara.any():
                continue
            braco = nu[:, r] - j
            perna_nu = col_nu - (r + 1)
            perna_mu = col_mu - (r + 1)
            b_nu = (braco + gamma * perna_nu + gamma) / (braco + gamma * perna_nu + 1.0)
            b_mu = (braco + gamma * perna_mu + gamma) / (braco + gamma * perna_mu + 1.0)
            total += np.where(mascara, np.log(np.where(mascara, b_nu / b_mu, 1.0)), 0.0)
    return total


def ratio_lemma_value(lam: Partition, sigma: ShapeVector, params: ChaosParams) -> float:
    """(c'_{λ+σ}/c'_λ)·(c_λ/c_{λ+σ}); tende a 1 quando gap(λ) cresce"""
    nu = add_shape(lam, sigma)
    log_valor = (c_prime_product(nu, params).log_magnitude
                 - c_prime_product(lam, params).log_magnitude
                 + c_product(lam, params).log_magnitude
                 - c_product(nu, params).log_magnitude)
    return math.exp(log_valor)


def wendel_envelope_constant(params: ChaosParams, x_min: float) -> float:
    """W = sup_{x ≥ x_min} F(x)·x^{1−γ}.

    Varredura geométrica até 10⁶ e, além disso, a cota fechada de Wendel
    (1+(1−γ)/x)^γ, que majora a cauda.
    """
    gamma = params.gamma
    if x_min < gamma:
        raise ParametroInvalidoError(f"x_min = {x_min} abaixo de γ = {gamma}")
    x_fim = max(X_MAX_VARREDURA, 10.0 * x_min)
    grade = np.geomspace(x_min, x_fim, 20001)
    varredura = np.exp(log_F(grade, gamma) + (1.0 - gamma) * np.log(grade))
    cauda = (1.0 + (1.0 - gamma) / x_fim) ** gamma
    W = max(float(varredura.max()), cauda, 1.0) * (1.0 + 1e-12)
    logger.debug("[SERIE] envelope de Wendel γ=%.6g x_min=%.6g W=%.12g", gamma, x_min, W)
    return W
