"""
Momentos exatos e assintóticos dos coeficientes de Fourier c_n do caos imaginário.

A série S(n) = Σ_λ G_λ(n) fatora por linhas, G_λ(n) = Π_i g_i(λ_i), e é somada
por programação dinâmica sobre somas prefixadas ordenadas. Os momentos
conjuntos com k = 1 são enumerados em blocos vetorizados de partições.
"""

import logging
import math
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from enum import Enum
from functools import lru_cache
from math import comb, factorial
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import special, stats
from scipy.integrate import cumulative_trapezoid

from .erros import (CanceladoError, OrcamentoExcedidoError, ParametroInvalidoError,
                    ToleranciaNaoAtingidaError)
from .jack import (ChaosParams, c_prime_product, c_product, log_psi_prime_array,
                   norm_sq, row_offsets, wendel_envelope_constant)
from .numerics import (LogValue, compensated_cumsum, compensated_sum, F_values,
                       geometric_tail, log_F, log_gamma_step)
from .partitions import (Partition, add_scalar, count_partitions, partition_array,
                         vertical_strip_shapes)

logger = logging.getLogger(__name__)

MODO_EXTRAPOLADO = "extrapolated"
MODO_CERTIFICADO = "certified"
MODOS = (MODO_EXTRAPOLADO, MODO_CERTIFICADO)

LAMBDA_TETO_PADRAO = 2 ** 24
N_MAXIMO_INDICE = 2 ** 24
PONTOS_CAUDA = 8193
CONJUNTO_N_MAX = 3
CONJUNTO_LAMBDA_MAX = 20000
CONJUNTO_TERMOS_MAX = 200_000_000
BLOCO_PARTICOES = 2 ** 18

Progresso = Callable[[Dict[str, Any]], None]


@dataclass(frozen=True)
class MomentRequest:
    params: ChaosParams
    n: int
    tol: float = 1e-8
    lambda_max: Optional[int] = None
    mode: str = MODO_EXTRAPOLADO
    lambda_ceiling: int = LAMBDA_TETO_PADRAO

    def __post_init__(self):
        self.params.exigir_subcritico()
        if not isinstance(self.n, (int, np.integer)) or self.n < 0:
            raise ParametroInvalidoError(f"n deve ser inteiro não negativo, recebido {self.n}")
        if self.n > N_MAXIMO_INDICE:
            raise ParametroInvalidoError(f"n = {self.n} acima do limite validado 2^24")
        if not 0 < self.tol < 1:
            raise ParametroInvalidoError(f"tol deve estar em (0, 1), recebido {self.tol}")
        if self.lambda_max is not None and self.lambda_max < 0:
            raise ParametroInvalidoError(f"lambda_max negativo: {self.lambda_max}")
        if self.mode not in MODOS:
            raise ParametroInvalidoError(f"Modo desconhecido '{self.mode}', use um de {MODOS}")
        if self.lambda_ceiling < 1:
            raise ParametroInvalidoError(f"Teto de truncamento inválido: {self.lambda_ceiling}")


@dataclass
class MomentResult:
    value: float
    tail_bound: float
    lambda_max_used: int
    terms_evaluated: int
    mode: str = MODO_EXTRAPOLADO
    tail_correction: float = 0.0
    error_estimate: float = 0.0
    wall_time_ms: float = 0.0

    def scaled(self, fator: float) -> "MomentResult":
        return MomentResult(
            value=self.value * fator,
            tail_bound=self.tail_bound * fator,
            lambda_max_used=self.lambda_max_used,
            terms_evaluated=self.terms_evaluated,
            mode=self.mode,
            tail_correction=self.tail_correction * fator,
            error_estimate=self.error_estimate * fator,
            wall_time_ms=self.wall_time_ms,
        )

    def to_record(self, req: MomentRequest) -> Dict[str, Any]:
        registro = {
            "beta": req.params.beta,
            "gamma": req.params.gamma,
            "N": req.params.N,
            "n": req.n,
            "tol": req.tol,
        }
        registro.update(asdict(self))
        return registro


@dataclass(frozen=True)
class JointResult:
    value: float
    tail_estimate: Optional[float]
    lambda_max_used: int
    terms_evaluated: int
    N: int
    p: int
    n: int

    @property
    def extrapolated(self) -> float:
        return self.value + (self.tail_estimate or 0.0)


# ---------------------------------------------------------------------------
# série S(n)
# ---------------------------------------------------------------------------

def _log_prefator(N: int, gamma: float) -> float:
    """log (2π/Γ(γ))^{2N} (N!)²"""
    return (2 * N * (math.log(2 * math.pi) - float(special.gammaln(gamma)))
            + 2 * float(special.gammaln(N + 1)))


def _fatores_linha(N: int, gamma: float, n: int, lambda_max: int,
                   r: Optional[float] = None) -> List[np.ndarray]:
    """g_i(x) = F(d_i+x)·F(d_i+x+n) para x = 0..Λ, opcionalmente com peso r^{4x}"""
    x = np.arange(lambda_max + 1, dtype=np.float64)
    fatores = []
    for d in row_offsets(N, gamma):
        g = F_values(d + x, gamma) * F_values(d + x + n, gamma)
        if r is not None:
            g = g * np.power(r, 4.0 * x)
        fatores.append(g)
    return fatores


def _dp_ordenada(fatores: List[np.ndarray], pontos: Sequence[int]) -> List[List[float]]:
    """Programação dinâmica A_N(m) = Σ_{x≤m} g_N(x), A_i(m) = Σ_{x≤m} g_i(x)·A_{i+1}(x).

    Devolve, para cada m em `pontos`, a lista [A_1(m), …, A_N(m), 1].
    Só guarda um vetor A por vez.
    """
    N = len(fatores)
    valores = [[0.0] * (N + 1) for _ in pontos]
    for linha in valores:
        linha[N] = 1.0
    acumulado = None
    for i in range(N - 1, -1, -1):
        termo = fatores[i] if acumulado is None else fatores[i] * acumulado
        acumulado = compensated_cumsum(termo)
        for linha, m in zip(valores, pontos):
            linha[i] = float(acumulado[m])
    return valores


def _correcao_cauda(N: int, gamma: float, n: int, lambda_max: int,
                    restos: Sequence[float]) -> float:
    """Soma da região λ_1 > Λ, separada pelo número j de linhas acima de Λ.

    Cada parcela é (integral ordenada das j primeiras linhas acima de a = Λ+½)
    vezes a DP das linhas restantes, `restos[j] = A_{j+1}(Λ)`. Na variável
    v = (t/a)^{−(1−2γ)} o decaimento de cada linha some e o integrando fica limitado.
    """
    a = lambda_max + 0.5
    expoente = 1.0 / (1.0 - 2.0 * gamma)
    v = np.linspace(0.0, 1.0, PONTOS_CAUDA)
    with np.errstate(divide="ignore", over="ignore"):
        t = a * np.power(v, -expoente)
    finito = np.isfinite(t)
    t_seguro = np.where(finito, t, 1.0)
    escala = a ** (2.0 * gamma - 1.0) / (1.0 - 2.0 * gamma)

    parcelas = []
    acumulado = None
    for j, d in enumerate(row_offsets(N, gamma), start=1):
        with np.errstate(over="ignore", invalid="ignore"):
            log_h = (log_F(d + t_seguro, gamma) + log_F(d + t_seguro + n, gamma)
                     + (2.0 - 2.0 * gamma) * np.log(t_seguro))
        h = np.where(finito & np.isfinite(log_h), np.exp(log_h), 1.0)
        integrando = h if acumulado is None else h * acumulado
        acumulado = cumulative_trapezoid(integrando, v, initial=0.0)
        parcelas.append(escala ** j * float(acumulado[-1]) * restos[j])
    return compensated_sum(parcelas)


def _avaliar_truncamento(req: MomentRequest, lambda_max: int) -> MomentResult:
    N, gamma, n = req.params.N, req.params.gamma, req.n
    inicio = time.perf_counter()
    metade = lambda_max // 2
    fatores = _fatores_linha(N, gamma, n, lambda_max)
    em_lambda, em_metade = _dp_ordenada(fatores, [lambda_max, metade])
    parcial = em_lambda[0]
    cota = tail_bound(max(lambda_max, 1), n, N, gamma)

    if req.mode == MODO_CERTIFICADO:
        valor, correcao, erro = parcial, 0.0, 0.0
    else:
        correcao = _correcao_cauda(N, gamma, n, lambda_max, em_lambda)
        valor = parcial + correcao
        valor_metade = em_metade[0] + _correcao_cauda(N, gamma, n, metade, em_metade)
        erro = abs(valor - valor_metade)

    return MomentResult(
        value=valor,
        tail_bound=cota,
        lambda_max_used=lambda_max,
        terms_evaluated=count_partitions(N, lambda_max),
        mode=req.mode,
        tail_correction=correcao,
        error_estimate=erro,
        wall_time_ms=(time.perf_counter() - inicio) * 1000.0,
    )


def _convergiu(req: MomentRequest, resultado: MomentResult) -> bool:
    if req.mode == MODO_CERTIFICADO:
        return resultado.tail_bound <= req.tol * resultado.value
    return resultado.error_estimate <= req.tol * resultado.value


def S_series(req: MomentRequest, progresso: Optional[Progresso] = None,
             cancelar: Optional[threading.Event] = None) -> MomentResult:
    """S(n) = Σ_λ G_λ(n), dobrando Λ a partir de 64·(n+1) até atingir a tolerância"""
    inicio = time.perf_counter()
    manual = req.lambda_max is not None
    if manual:
        lambda_atual = req.lambda_max
    else:
        lambda_atual = min(max(64, 64 * (req.n + 1)), req.lambda_ceiling)

    while True:
        if cancelar is not None and cancelar.is_set():
            raise CanceladoError(f"Série cancelada em Λ = {lambda_atual}")
        resultado = _avaliar_truncamento(req, lambda_atual)
        registro = {
            "lambda_max": lambda_atual,
            "value": resultado.value,
            "tail_bound": resultado.tail_bound,
            "error_estimate": resultado.error_estimate,
        }
        logger.info("[SERIE] N=%d n=%d Λ=%d valor=%.17g cota=%.3e erro=%.3e",
                    req.params.N, req.n, lambda_atual, resultado.value,
                    resultado.tail_bound, resultado.error_estimate)
        if progresso is not None:
            progresso(registro)

        if manual or _convergiu(req, resultado):
            resultado.wall_time_ms = (time.perf_counter() - inicio) * 1000.0
            return resultado

        if lambda_atual * 2 > req.lambda_ceiling:
            medida = resultado.tail_bound if req.mode == MODO_CERTIFICADO else resultado.error_estimate
            raise ToleranciaNaoAtingidaError(
                f"Tolerância {req.tol:g} não atingida até Λ = {lambda_atual} "
                f"(erro relativo {medida / resultado.value:.3e})",
                melhor_valor=resultado.value,
                tail_bound=resultado.tail_bound,
                error_estimate=resultado.error_estimate,
                lambda_max=lambda_atual,
            )
        lambda_atual *= 2


def moment_abs(req: MomentRequest, progresso: Optional[Progresso] = None,
               cancelar: Optional[threading.Event] = None) -> MomentResult:
    """E|c_n|^{2N} = (2π/Γ(γ))^{2N}(N!)² S(n)"""
    fator = math.exp(_log_prefator(req.params.N, req.params.gamma))
    try:
        return S_series(req, progresso, cancelar).scaled(fator)
    except ToleranciaNaoAtingidaError as e:
        raise ToleranciaNaoAtingidaError(
            e.mensagem, e.melhor_valor * fator, e.tail_bound * fator,
            e.error_estimate * fator, e.lambda_max,
        ) from e


def G_term(lam: Partition, n: int, params: ChaosParams) -> LogValue:
    """G_λ(n) = Π_i F(d_i+λ_i)·F(d_i+λ_i+n)"""
    base = row_offsets(params.N, params.gamma) + np.asarray(lam.parts, dtype=np.float64)
    return LogValue(float(np.sum(log_F(base, params.gamma) + log_F(base + n, params.gamma))))


def termwise_summand(lam: Partition, n: int, params: ChaosParams) -> LogValue:
    """Um termo da série dupla de Jack: (c_λ/c'_λ)(c_{λ+n}/c'_{λ+n})(2π)^{2N}‖P_{λ+n}‖⁴"""
    mu = add_scalar(lam, n)
    log_valor = (c_product(lam, params).log_magnitude - c_prime_product(lam, params).log_magnitude
                 + c_product(mu, params).log_magnitude - c_prime_product(mu, params).log_magnitude
                 + 2 * params.N * math.log(2 * math.pi)
                 + 2 * norm_sq(mu, params).log_magnitude)
    return LogValue(log_valor)


# ---------------------------------------------------------------------------
# constantes e assintótica
# ---------------------------------------------------------------------------

def _validar_beta(beta: float) -> float:
    if not 0 < beta < 1:
        raise ParametroInvalidoError(f"β = {beta} fora de (0, 1)")
    return beta * beta / 2.0


def kappa(beta: float) -> float:
    """κ(β) = 4π Γ(1−β²) sin(πβ²/2), conferido pela fórmula de reflexão"""
    gamma = _validar_beta(beta)
    direto = 4 * math.pi * math.gamma(1 - beta * beta) * math.sin(math.pi * beta * beta / 2)
    refletido = ((2 * math.pi / math.gamma(gamma)) ** 2
                 * math.gamma(gamma) * math.gamma(1 - 2 * gamma) / math.gamma(1 - gamma))
    if abs(direto - refletido) > 1e-12 * abs(direto):
        raise ArithmeticError(f"Formas de κ divergem: {direto} vs {refletido}")
    return direto


def beta_integral_constant(gamma: float) -> float:
    """∫₀^∞ dx / (x^{1−γ}(1+x)^{1−γ}) = Γ(γ)Γ(1−2γ)/Γ(1−γ)"""
    if not 0 < gamma < 0.5:
        raise ParametroInvalidoError(f"γ = {gamma} fora de (0, ½); Γ(1−2γ) tem polo em ½")
    return math.exp(special.gammaln(gamma) + special.gammaln(1 - 2 * gamma)
                    - special.gammaln(1 - gamma))


def asymptotic_moment(n: int, N: int, beta: float) -> float:
    """N!·κ(β)^N·n^{−N(1−2γ)}"""
    gamma = _validar_beta(beta)
    if n < 1:
        raise ParametroInvalidoError(f"Assintótica exige n ≥ 1, recebido {n}")
    return factorial(N) * kappa(beta) ** N * n ** (-N * (1 - 2 * gamma))


def asymptotic_ratio(n: int, N: int, beta: float, tol: float = 1e-8) -> float:
    """R(n) = n^{N(1−2γ)}·E|c_n|^{2N} / (N!κ^N)"""
    exato = moment_abs(MomentRequest(ChaosParams(beta, N), n, tol)).value
    return exato / asymptotic_moment(n, N, beta)


def closed_form_n1(n: int, gamma: float) -> float:
    """E|c_n|² = (2π)²Γ(1−2γ)Γ(n+γ) / (Γ(1−γ)Γ(γ)Γ(n+1−γ))"""
    if not 0 < gamma < 0.5:
        raise ParametroInvalidoError(f"γ = {gamma} fora de (0, ½)")
    n = abs(int(n))
    return math.exp(2 * math.log(2 * math.pi) + special.gammaln(1 - 2 * gamma) + special.gammaln(n + gamma)
                    - special.gammaln(1 - gamma) - special.gammaln(gamma) - special.gammaln(n + 1 - gamma))


def remark_n1_constant(beta: float) -> float:
    """2π∫ e^{it}|t|^{−2γ} dt = 4πΓ(1−2γ)sin(πγ), a constante direta do caso N = 1"""
    gamma = _validar_beta(beta)
    return 4 * math.pi * math.gamma(1 - 2 * gamma) * math.sin(math.pi * gamma)


@lru_cache(maxsize=64)
def _envelope(gamma: float) -> float:
    return wendel_envelope_constant(ChaosParams.from_gamma(gamma, 1), gamma)


def tail_bound(lambda_max: int, n: int, N: int, gamma: float) -> float:
    """Majorante certificado de Σ_{λ_1 > Λ} G_λ(n).

    N·W^{2N}·D^{N−1}·(γ+Λ−1)^{2γ−1}/(1−2γ), com W o envelope de Wendel em x ≥ γ
    e D a soma unidimensional completa com o deslocamento de pior linha γ.
    """
    if lambda_max < 1:
        raise ParametroInvalidoError(f"tail_bound exige Λ ≥ 1, recebido {lambda_max}")
    if not 0 < gamma < 0.5:
        raise ParametroInvalidoError(f"γ = {gamma} fora de (0, ½)")
    W = _envelope(gamma)
    f0 = gamma ** (gamma - 1) * (gamma + n) ** (gamma - 1)
    integral = gamma ** (2 * gamma - 1) / (1 - 2 * gamma)
    if n > 0:
        integral = min(integral, n ** (2 * gamma - 1) * float(special.beta(gamma, 1 - 2 * gamma)))
    D = f0 + integral
    T = (gamma + lambda_max - 1) ** (2 * gamma - 1) / (1 - 2 * gamma)
    return N * W ** (2 * N) * D ** (N - 1) * T


def wendel_lower_bound(n: int, N: int, beta: float, termos: int = 2 ** 20) -> float:
    """Cota inferior de E|c_n|^{2N} pela desigualdade de Wendel F(x) > x^{γ−1}.

    S(n) ≥ (1/N!)·(Σ_k (Nγ+k)^{γ−1}(Nγ+k+n)^{γ−1})^N; a soma infinita é
    substituída por uma soma finita mais uma cota inferior integral da cauda.
    """
    gamma = _validar_beta(beta)
    k = np.arange(termos, dtype=np.float64)
    base = N * gamma + k
    soma = compensated_sum(np.power(base, gamma - 1) * np.power(base + n, gamma - 1))
    soma += (N * gamma + termos + n) ** (2 * gamma - 1) / (1 - 2 * gamma)
    S_inferior = soma ** N / factorial(N)
    return math.exp(_log_prefator(N, gamma)) * S_inferior


def series_fourier_dimension(beta: float, n_list: Sequence[int],
                             tol: float = 1e-8) -> Tuple[float, float]:
    """Inclinação de log E|c_n|² contra log n pela série exata; esperado −(1−β²)"""
    if len(n_list) < 2:
        raise ParametroInvalidoError("Regressão exige ao menos dois índices")
    params = ChaosParams(beta, 1)
    log_n = np.log(np.asarray(n_list, dtype=np.float64))
    log_m = np.log([moment_abs(MomentRequest(params, int(n), tol)).value for n in n_list])
    ajuste = stats.linregress(log_n, log_m)
    return float(ajuste.slope), float(ajuste.stderr)


# ---------------------------------------------------------------------------
# regularização de Abel
# ---------------------------------------------------------------------------

def abel_series(n: int, N: int, gamma: float, r: float, lambda_max: int) -> float:
    """I_r = Σ_λ (c_λ/c'_λ)(c_{λ+n}/c'_{λ+n}) r^{2(2|λ|+nN)} (2π)^{2N}‖P_{λ+n}‖⁴ truncada em λ_1 ≤ Λ"""
    if not 0 <= r < 1:
        raise ParametroInvalidoError(f"r deve estar em [0, 1), recebido {r}")
    if not 0 < gamma < 0.5:
        raise ParametroInvalidoError(f"γ = {gamma} fora de (0, ½)")
    fatores = _fatores_linha(N, gamma, n, lambda_max, r=r)
    parcial = _dp_ordenada(fatores, [lambda_max])[0][0]
    return math.exp(_log_prefator(N, gamma)) * r ** (2 * n * N) * parcial


# ---------------------------------------------------------------------------
# momentos conjuntos k = 1
# ---------------------------------------------------------------------------

def _log_gancho_passo(mu_ext: np.ndarray, sigma_ext: np.ndarray, gamma: float,
                      primo: bool) -> np.ndarray:
    """log c_{μ+σ} − log c_μ (ou c') para σ ∈ {0,1}^N, sem subtrair gammaln grandes"""
    N = mu_ext.shape[1] - 1
    total = np.zeros(mu_ext.shape[0])
    for i in range(N):
        for k in range(i, N):
            s = gamma * (k - i) + 1.0 if primo else gamma * (k - i + 1)
            total += log_gamma_step(mu_ext[:, i] - mu_ext[:, k + 1] + s,
                                    sigma_ext[i] - sigma_ext[k + 1])
            total -= log_gamma_step(mu_ext[:, i] - mu_ext[:, k] + s,
                                    sigma_ext[i] - sigma_ext[k])
    return total


def _blocos_primeira_parte(N: int, lambda_max: int) -> List[Tuple[int, int]]:
    blocos, inicio, tamanho = [], 0, 0
    for a in range(lambda_max + 1):
        tamanho += comb(a + N - 1, N - 1)
        if tamanho >= BLOCO_PARTICOES:
            blocos.append((inicio, a + 1))
            inicio, tamanho = a + 1, 0
    if inicio <= lambda_max:
        blocos.append((inicio, lambda_max + 1))
    return blocos


def joint_moment_k1_exact(n: int, N: int, p: int, beta: float, lambda_max: int,
                          threads: int = 1,
                          max_termos: int = CONJUNTO_TERMOS_MAX) -> JointResult:
    """E|c_n|^{2(N−p)}|c_{n+1}|^{2p} por enumeração de λ e das faixas verticais de tamanho p.

    Cada termo é G_λ(n)·a_σ, onde a_σ compara ν = λ+n+σ com μ = λ+n:
    razões de ganchos, ψ'² e Π F(d+ν)²/F(d+μ)². Para p = 0, a_σ = 1 exatamente.
    A cauda é uma extrapolação geométrica das somas parciais em Λ/4, Λ/2 e Λ,
    sem certificado.
    """
    params = ChaosParams(beta, N)
    params.exigir_subcritico()
    gamma = params.gamma
    if not 0 <= p <= N:
        raise ParametroInvalidoError(f"p = {p} fora de [0, {N}]")
    if n < 0 or lambda_max < 0:
        raise ParametroInvalidoError(f"n e Λ devem ser não negativos: n={n}, Λ={lambda_max}")
    if N > CONJUNTO_N_MAX:
        raise OrcamentoExcedidoError(f"Enumeração conjunta limitada a N ≤ {CONJUNTO_N_MAX}, recebido {N}")
    if lambda_max > CONJUNTO_LAMBDA_MAX:
        raise OrcamentoExcedidoError(
            f"Enumeração conjunta limitada a Λ ≤ {CONJUNTO_LAMBDA_MAX}, recebido {lambda_max}"
        )
    formas = vertical_strip_shapes(N, p)
    termos = count_partitions(N, lambda_max) * len(formas)
    if termos > max_termos:
        raise OrcamentoExcedidoError(
            f"{termos} termos excedem o orçamento de {max_termos}",
            {"termos": termos, "orcamento": max_termos},
        )

    fatores = _fatores_linha(N, gamma, n, lambda_max)
    d = row_offsets(N, gamma)

    def _bloco(intervalo: Tuple[int, int]) -> np.ndarray:
        lo, hi = intervalo
        lam = partition_array(N, lo, hi)
        G = np.ones(lam.shape[0])
        for i in range(N):
            G *= fatores[i][lam[:, i]]
        mu = lam + n
        mu_ext = np.concatenate([mu, np.zeros((mu.shape[0], 1), dtype=mu.dtype)], axis=1).astype(np.float64)
        total = np.zeros(lam.shape[0])
        for forma in formas:
            sigma = np.asarray(forma, dtype=np.int64)
            nu = mu + sigma
            valido = np.all(nu[:, :-1] >= nu[:, 1:], axis=1) if N > 1 else np.ones(nu.shape[0], bool)
            if p == 0:
                total += G
                continue
            sigma_ext = np.concatenate([sigma, [0]])
            with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
                log_a = (_log_gancho_passo(mu_ext, sigma_ext, gamma, primo=True)
                         - _log_gancho_passo(mu_ext, sigma_ext, gamma, primo=False)
                         + 2.0 * log_psi_prime_array(nu, mu, gamma))
                x = d[None, :] + mu
                log_a += 2.0 * np.sum(np.where(sigma[None, :] == 1,
                                               np.log(x / (x + 1.0 - gamma)), 0.0), axis=1)
                total += np.where(valido, G * np.exp(log_a), 0.0)
        return np.bincount(lam[:, 0] - lo, weights=total, minlength=hi - lo)

    blocos = _blocos_primeira_parte(N, lambda_max)
    with ThreadPoolExecutor(max_workers=max(1, threads)) as executor:
        cascas = np.concatenate(list(executor.map(_bloco, blocos)))

    fator = math.exp(_log_prefator(N, gamma)) / comb(N, p) ** 2
    acumulado = compensated_cumsum(cascas)
    valor = fator * compensated_sum(cascas)
    cauda = None
    if lambda_max >= 4:
        parciais = [acumulado[lambda_max // 4], acumulado[lambda_max // 2], acumulado[lambda_max]]
        extrapolada = geometric_tail(parciais)
        cauda = None if extrapolada is None else fator * extrapolada
    logger.info("[SERIE] conjunto N=%d p=%d n=%d Λ=%d valor=%.17g cauda≈%s",
                N, p, n, lambda_max, valor, cauda)
    return JointResult(valor, cauda, lambda_max, termos, N, p, n)


def joint_independence_ratio(n: int, beta: float, lambda_max: Optional[int] = None,
                             threads: int = 1, tol: float = 1e-8) -> float:
    """Q(n) = E|c_n|²|c_{n+1}|² / (E|c_n|²·E|c_{n+1}|²), com Λ = 100n por padrão"""
    lambda_max = 100 * max(n, 1) if lambda_max is None else lambda_max
    conjunto = joint_moment_k1_exact(n, 2, 1, beta, lambda_max, threads=threads)
    params = ChaosParams(beta, 1)
    m_n = moment_abs(MomentRequest(params, n, tol)).value
    m_n1 = moment_abs(MomentRequest(params, n + 1, tol)).value
    return conjunto.extrapolated / (m_n * m_n1)


def joint_moment_k1_limit(N: int, p: int, beta: float) -> float:
    """(N−p)!·p!·κ(β)^N"""
    if not 0 <= p <= N:
        raise ParametroInvalidoError(f"p = {p} fora de [0, {N}]")
    return factorial(N - p) * factorial(p) * kappa(beta) ** N


def joint_moment_limit(multiplicidades: Sequence[int], beta: float) -> float:
    """Coeficiente de n^{−N(1−β²)}: Π_j N_j!·κ(β)^N"""
    if not multiplicidades or any(m < 0 for m in multiplicidades):
        raise ParametroInvalidoError(f"Multiplicidades inválidas: {list(multiplicidades)}")
    N = sum(multiplicidades)
    produto = 1
    for m in multiplicidades:
        produto *= factorial(m)
    return produto * kappa(beta) ** N


# ---------------------------------------------------------------------------
# momentos mistos
# ---------------------------------------------------------------------------

class SelectionKind(str, Enum):
    EXACT_ZERO = "ExactZero"
    DIAGONAL_MODULUS = "DiagonalModulus"
    VANISHING_LIMIT = "VanishingLimit"


@dataclass(frozen=True)
class MixedExponents:
    """Expoentes ℓ (de c_{n+j}) e m (de c̄_{n+j}), j = 0..k"""

    l: Tuple[int, ...]
    m: Tuple[int, ...]

    def __post_init__(self):
        if len(self.l) != len(self.m) or not self.l:
            raise ParametroInvalidoError(
                f"ℓ e m precisam ter o mesmo comprimento positivo: {list(self.l)} / {list(self.m)}"
            )
        if any(x < 0 for x in self.l + self.m):
            raise ParametroInvalidoError("Expoentes devem ser não negativos")
        if not any(self.l) and not any(self.m):
            raise ParametroInvalidoError("Ao menos um expoente deve ser não nulo")

    @property
    def k(self) -> int:
        return len(self.l) - 1

    @property
    def d(self) -> Tuple[int, ...]:
        return tuple(a - b for a, b in zip(self.l, self.m))

    @property
    def N_plus(self) -> int:
        return sum(self.l)

    @property
    def N_minus(self) -> int:
        return sum(self.m)

    def S(self, n: int) -> int:
        """S_n(ℓ, m) = Σ_j (n+j)·d_j, a fase adquirida sob rotação"""
        return sum((n + j) * dj for j, dj in enumerate(self.d))


@dataclass(frozen=True)
class MixedSelection:
    kind: SelectionKind
    s_n: int
    zero_for_large_n: bool


def mixed_selection(e: MixedExponents, n: int) -> MixedSelection:
    """Regra de seleção por invariância de rotação.

    ExactZero quando S_n ≠ 0; DiagonalModulus quando ℓ = m; VanishingLimit no
    resto, inclusive quando S_n se anula só neste n (para n grande volta a ser
    não nulo e o limite renormalizado é 0).
    """
    s_n = e.S(n)
    soma_d = sum(e.d)
    soma_jd = sum(j * dj for j, dj in enumerate(e.d))
    nulo_para_n_grande = soma_d != 0 or soma_jd != 0
    if s_n != 0:
        return MixedSelection(SelectionKind.EXACT_ZERO, s_n, nulo_para_n_grande)
    if e.l == e.m:
        return MixedSelection(SelectionKind.DIAGONAL_MODULUS, s_n, False)
    return MixedSelection(SelectionKind.VANISHING_LIMIT, s_n, nulo_para_n_grande)


def mixed_limit(e: MixedExponents, beta: float) -> float:
    """0 para ExactZero e VanishingLimit; Π_j N_j!·κ^N no caso diagonal"""
    if e.l != e.m:
        return 0.0
    return joint_moment_limit(e.l, beta)
