"""
Critérios de aceitação executáveis pelo comando `verify`.

Cada critério devolve um `CriterioResultado` com o número medido e o limiar;
a suíte "fast" roda versões reduzidas, a "full" roda todos os critérios.
"""

import logging
import math
import time
from dataclasses import asdict, dataclass
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np
from scipy import stats

from .erros import ParametroInvalidoError
from .gmc_sim import (MomentPattern, SimConfig, estimate_moments, kurtosis_ratio,
                      simulate)
from .jack import (ChaosParams, norm_sq, pieri_psi_prime, ratio_lemma_value)
from .moments import (MODO_CERTIFICADO, MixedExponents, MomentRequest, SelectionKind,
                      abel_series, asymptotic_ratio, closed_form_n1,
                      joint_independence_ratio, joint_moment_k1_exact, kappa,
                      mixed_selection, moment_abs, series_fourier_dimension)
from .oracle import (dyson_norm_check, pieri_expand_oracle, quadrature_moment_N1,
                     quadrature_moment_N2)
from .partitions import (Partition, ShapeVector, add_scalar, enumerate_vertical_strips,
                         iter_partitions, new_partition, vertical_strip_shapes)

logger = logging.getLogger(__name__)

SUITES = ("fast", "full")
LIMITE_Z = 3.0


@dataclass
class CriterioResultado:
    id: int
    passed: bool
    measured: float
    threshold: float
    wall_time_ms: float = 0.0
    detalhes: Optional[Dict[str, Any]] = None
    threshold_label: str = ""

    def to_json(self) -> Dict[str, Any]:
        dados = asdict(self)
        if dados["detalhes"] is None:
            del dados["detalhes"]
        if not dados["threshold_label"]:
            del dados["threshold_label"]
        return dados


def _relativo(a: float, b: float) -> float:
    return abs(a - b) / abs(b)


# ---------------------------------------------------------------------------
# critérios
# ---------------------------------------------------------------------------

def criterio_dupla_rota_n1(rapido: bool) -> CriterioResultado:
    gammas = (0.125, 0.25) if rapido else (0.1, 0.125, 0.25, 0.4)
    indices = (0, 5, 100) if rapido else (0, 1, 2, 5, 10, 100)
    pior, onde = 0.0, None
    for gamma in gammas:
        params = ChaosParams.from_gamma(gamma, 1)
        for n in indices:
            serie = moment_abs(MomentRequest(params, n, tol=1e-9)).value
            quadratura = quadrature_moment_N1(n, gamma, tol=1e-10).value
            desvio = _relativo(serie, quadratura)
            if desvio > pior:
                pior, onde = desvio, {"gamma": gamma, "n": n}
    return CriterioResultado(1, pior <= 1e-6, pior, 1e-6, detalhes=onde)


def criterio_dupla_rota_n2(rapido: bool) -> CriterioResultado:
    gamma = 0.125
    params = ChaosParams.from_gamma(gamma, 2)
    pior = 0.0
    for n in (0, 1, 2):
        serie = moment_abs(MomentRequest(params, n, tol=1e-8)).value
        quadratura = quadrature_moment_N2(n, gamma, tol=1e-4).value
        pior = max(pior, _relativo(serie, quadratura))
    return CriterioResultado(2, pior <= 1e-3, pior, 1e-3)


def criterio_razao_assintotica(rapido: bool) -> CriterioResultado:
    pior, monotono = 0.0, True
    for N in (1, 2, 3):
        for gamma in (0.1, 0.25):
            beta = math.sqrt(2.0 * gamma)
            inicio = abs(asymptotic_ratio(2 ** 6, N, beta, tol=1e-6) - 1.0)
            fim = abs(asymptotic_ratio(2 ** 12, N, beta, tol=1e-6) - 1.0)
            monotono &= fim < inicio
            pior = max(pior, fim)
    return CriterioResultado(3, monotono and pior <= 0.1, pior, 0.1, detalhes={"monotono": monotono})


def criterio_dimensao_fourier(rapido: bool) -> CriterioResultado:
    indices = [2 ** k for k in range(6, 13)]
    pior = 0.0
    for beta2 in (0.2, 0.5, 0.8):
        inclinacao, _ = series_fourier_dimension(math.sqrt(beta2), indices)
        pior = max(pior, abs(inclinacao + (1.0 - beta2)))
    return CriterioResultado(4, pior <= 0.02, pior, 0.02)


def criterio_pieri(rapido: bool) -> CriterioResultado:
    pior, schur = 0.0, 0.0
    for N in (1, 2, 3):
        for tamanho in range(0, 6):
            for mu in iter_partitions(N, tamanho):
                if mu.size != tamanho:
                    continue
                for p in range(0, min(N, 3) + 1):
                    for gamma in (0.25, 0.5, 0.75, 1.0):
                        params = ChaosParams.from_gamma(gamma, N, permitir_supercritico=True)
                        oraculo = pieri_expand_oracle(p, mu, gamma, N)
                        for tau, coef in oraculo.items():
                            psi = pieri_psi_prime(tau, mu, params)
                            pior = max(pior, abs(psi - coef))
                            if gamma == 1.0:
                                schur = max(schur, abs(psi - 1.0))
    medido = max(pior, schur)
    return CriterioResultado(5, medido <= 1e-10, medido, 1e-10, detalhes={"psi": pior, "schur": schur})


def _painel_gap(g: int) -> Partition:
    return Partition((3 * g, 2 * g, g))


FORMAS_RAZAO = ((1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0), (1, 0, 1), (0, 1, 1), (1, 1, 1),
                (2, 1, 0), (0, 1, 2), (2, 2, 1))


def desvios_gap_grande(g: int, gamma: float) -> Dict[str, float]:
    """max |ψ'−1| e max |razão de c − 1| no painel de formas com gap g"""
    params = ChaosParams.from_gamma(gamma, 3)
    lam = _painel_gap(g)
    psi = max(abs(pieri_psi_prime(new_partition([a + b for a, b in zip(lam.parts, s)], 3), lam, params) - 1.0)
              for p in (1, 2, 3) for s in vertical_strip_shapes(3, p))
    razao = max(abs(ratio_lemma_value(lam, ShapeVector(s), params) - 1.0) for s in FORMAS_RAZAO)
    return {"psi": psi, "razao": razao}


def criterio_gap_grande(rapido: bool, limite: float, gamma: float = 0.25) -> CriterioResultado:
    gaps = [2 ** k for k in range(3, 11)]
    desvios = [desvios_gap_grande(g, gamma) for g in gaps]
    monotono = all(b["psi"] <= a["psi"] and b["razao"] <= a["razao"]
                   for a, b in zip(desvios, desvios[1:]))
    escalado = max(g * max(d.values()) for g, d in zip(gaps, desvios))

    params = ChaosParams.from_gamma(gamma, 3)
    mu = Partition((4, 2, 1))
    deslocamento = 0.0
    for tau in enumerate_vertical_strips(mu, 2):
        base = pieri_psi_prime(tau, mu, params)
        movido = pieri_psi_prime(add_scalar(tau, 7), add_scalar(mu, 7), params)
        deslocamento = max(deslocamento, abs(base - movido))
    passou = monotono and escalado <= limite and deslocamento <= 1e-12
    return CriterioResultado(6, passou, escalado, limite,
                             detalhes={"monotono": monotono, "deslocamento": deslocamento})


def criterio_independencia(rapido: bool, threads: int = 1, beta: float = 0.5) -> CriterioResultado:
    n_pequeno, n_grande = (8, 16) if rapido else (8, 64)
    q_pequeno = joint_independence_ratio(n_pequeno, beta, threads=threads)
    q_grande = joint_independence_ratio(n_grande, beta, threads=threads)

    lambda_max = 200
    params = ChaosParams(beta, 2)
    conjunto = joint_moment_k1_exact(3, 2, 0, beta, lambda_max, threads=threads).value
    direto = moment_abs(MomentRequest(params, 3, lambda_max=lambda_max, mode=MODO_CERTIFICADO)).value
    degenerado = _relativo(conjunto, direto)
    passou = abs(q_grande - 1.0) < abs(q_pequeno - 1.0) and degenerado <= 1e-12
    return CriterioResultado(7, passou, abs(q_grande - 1.0), abs(q_pequeno - 1.0),
                             detalhes={"Q": {str(n_pequeno): q_pequeno, str(n_grande): q_grande},
                                       "p0_relativo": degenerado})


def criterio_abel(rapido: bool) -> CriterioResultado:
    """S_Λ − I_r ≥ 0 decresce estritamente com r ↑ 1 e some no último raio.

    Com pesos r^w, w ≤ 4Λ+2n, o déficit relativo é no máximo (1−r)·w.
    """
    n, N, gamma, lambda_max = 2, 1, 0.25, 1000
    raios = (0.9, 0.99, 0.999, 0.9999, 1.0 - 1e-7)
    limite = 1e-4
    params = ChaosParams.from_gamma(gamma, N)
    serie = moment_abs(MomentRequest(params, n, lambda_max=lambda_max, mode=MODO_CERTIFICADO)).value
    deficits = [(serie - abel_series(n, N, gamma, r, lambda_max)) / serie for r in raios]
    decrescente = all(b < a for a, b in zip(deficits, deficits[1:]))
    passou = decrescente and deficits[-1] >= -1e-12 and deficits[-1] <= limite
    return CriterioResultado(8, passou, deficits[-1], limite,
                             detalhes={"deficits": dict(zip(map(str, raios), deficits)),
                                       "decrescente": decrescente, "serie": serie})


def criterio_certificado_cauda(rapido: bool) -> CriterioResultado:
    """Cauda verdadeira (forma fechada de N = 1 menos a soma parcial) dividida pela cota"""
    pior = 0.0
    for gamma in (0.1, 0.25, 0.4):
        params = ChaosParams.from_gamma(gamma, 1)
        for n in (0, 2, 10):
            completo = closed_form_n1(n, gamma)
            for lambda_max in (64, 256):
                parcial = moment_abs(MomentRequest(params, n, lambda_max=lambda_max,
                                                   mode=MODO_CERTIFICADO))
                cauda = completo - parcial.value
                pior = max(pior, cauda / parcial.tail_bound)
    return CriterioResultado(9, pior <= 1.0, pior, 1.0)


def criterio_monte_carlo(rapido: bool, threads: int = 1, seed: int = 20240601) -> CriterioResultado:
    beta, indices = 0.5, (32, 64, 128)
    registrados = sorted({i for n in indices for i in (n, n + 1)})
    config = SimConfig(beta, K=4096, G=2 ** 15, M=2000, seed=seed, n_list=registrados, threads=threads)
    run = simulate(config)
    alvo_kappa = kappa(beta)
    params = ChaosParams(beta, 1)
    zs: Dict[str, float] = {}
    for n in indices:
        serie = moment_abs(MomentRequest(params, n, tol=1e-8)).value * n ** (1.0 - beta * beta)
        segundo, quadrado, cruzado = estimate_moments(run, [
            MomentPattern.abs_power(n, 1), MomentPattern.square(n), MomentPattern.cross(n, n + 1)])
        razao, erro_razao = kurtosis_ratio(run, n)
        zs[f"serie_{n}"] = segundo.z_score(serie)
        zs[f"curtose_{n}"] = abs(razao - 2.0) / erro_razao
        zs[f"quadrado_{n}"] = quadrado.z_score(0.0)
        zs[f"cruzado_{n}"] = cruzado.z_score(0.0)
        zs[f"kappa_{n}"] = segundo.z_score(alvo_kappa)
    pior = max(zs.values())
    return CriterioResultado(10, pior <= LIMITE_Z, pior, LIMITE_Z, detalhes=zs)


def exponentes_aleatorios(quantidade: int, seed: int, n_max: int) -> List[tuple]:
    """(ℓ, m, n) com N_± ≤ 2 e S_n(ℓ, m) ≠ 0, sorteados de forma reprodutível"""
    rng = np.random.default_rng(seed)
    sorteados = []
    while len(sorteados) < quantidade:
        comprimento = int(rng.integers(1, 4))
        l = _composicao_limitada(rng, comprimento)
        m = _composicao_limitada(rng, comprimento)
        if not any(l) and not any(m):
            continue
        e = MixedExponents(l, m)
        n = int(rng.integers(1, n_max + 1))
        if e.S(n) != 0:
            sorteados.append((e, n))
    return sorteados


def _composicao_limitada(rng: np.random.Generator, comprimento: int) -> tuple:
    total = int(rng.integers(0, 3))
    partes = [0] * comprimento
    for _ in range(total):
        partes[int(rng.integers(0, comprimento))] += 1
    return tuple(partes)


def criterio_selecao_mista(rapido: bool, threads: int = 1, seed: int = 7) -> CriterioResultado:
    K = 1024
    casos = exponentes_aleatorios(100, seed, K // 16 - 3)
    erradas = sum(1 for e, n in casos if mixed_selection(e, n).kind != SelectionKind.EXACT_ZERO)
    if rapido:
        return CriterioResultado(11, erradas == 0, float(erradas), 0.0)

    registrados = sorted({n + j for e, n in casos for j in range(len(e.l))})
    config = SimConfig(0.5, K=K, G=8 * K, M=1000, seed=seed, n_list=registrados, threads=threads)
    run = simulate(config)
    estimativas = estimate_moments(run, [MomentPattern.from_mixed(e, n) for e, n in casos])
    pior = max(est.z_score(0.0) for est in estimativas)
    # 3 SE bilateral, com Bonferroni sobre os casos
    limiar = float(stats.norm.isf(0.0027 / (2 * len(casos))))
    return CriterioResultado(11, erradas == 0 and pior <= limiar, pior, limiar,
                             detalhes={"selecoes_erradas": erradas},
                             threshold_label=f"3 SE bilateral, Bonferroni sobre {len(casos)} casos: z = {limiar:.2f}")


def criterio_dyson(rapido: bool) -> CriterioResultado:
    pior = 0.0
    for gamma in (0.125, 0.25, 0.45):
        quadratura = dyson_norm_check(gamma)
        formula = norm_sq(new_partition([], 2), ChaosParams.from_gamma(gamma, 2)).value
        pior = max(pior, abs(quadratura - formula))
    return CriterioResultado(12, pior <= 1e-6, pior, 1e-6)


# ---------------------------------------------------------------------------
# suíte
# ---------------------------------------------------------------------------

def _tarefas(suite: str, threads: int, limite_gap: float) -> Dict[int, Callable[[bool], CriterioResultado]]:
    todas = {
        1: criterio_dupla_rota_n1,
        2: criterio_dupla_rota_n2,
        3: criterio_razao_assintotica,
        4: criterio_dimensao_fourier,
        5: criterio_pieri,
        6: lambda r: criterio_gap_grande(r, limite_gap),
        7: lambda r: criterio_independencia(r, threads),
        8: criterio_abel,
        9: criterio_certificado_cauda,
        10: lambda r: criterio_monte_carlo(r, threads),
        11: lambda r: criterio_selecao_mista(r, threads),
        12: criterio_dyson,
    }
    if suite == "full":
        return todas
    return {i: todas[i] for i in (1, 5, 6, 7, 8, 9, 11, 12)}


def executar_suite(suite: str = "fast", threads: int = 1, limite_gap: float = 20.0,
                   somente: Optional[Sequence[int]] = None) -> List[CriterioResultado]:
    if suite not in SUITES:
        raise ParametroInvalidoError(f"Suíte desconhecida '{suite}', use uma de {SUITES}")
    rapido = suite == "fast"
    resultados = []
    for ident, tarefa in _tarefas(suite, threads, limite_gap).items():
        if somente and ident not in somente:
            continue
        inicio = time.perf_counter()
        resultado = tarefa(rapido)
        resultado.wall_time_ms = (time.perf_counter() - inicio) * 1000.0
        logger.info("[VERIFY] critério %d %s medido=%.3e limiar=%.3e (%.0f ms)",
                    ident, "ok" if resultado.passed else "FALHOU", resultado.measured,
                    resultado.threshold, resultado.wall_time_ms)
        resultados.append(resultado)
    return resultados
