import math
import threading

import pytest
from scipy import special

from calculo.erros import (CanceladoError, OrcamentoExcedidoError, ParametroInvalidoError,
                           ToleranciaNaoAtingidaError)
from calculo.jack import ChaosParams, c_prime_product, c_product, norm_sq, pieri_psi_prime
from calculo.moments import (MODO_CERTIFICADO, G_term, MixedExponents, MomentRequest,
                             SelectionKind, S_series, abel_series, asymptotic_moment,
                             beta_integral_constant, closed_form_n1, joint_independence_ratio,
                             joint_moment_k1_exact, joint_moment_k1_limit,
                             joint_moment_limit, kappa, mixed_limit, mixed_selection, moment_abs,
                             remark_n1_constant, series_fourier_dimension, tail_bound,
                             termwise_summand, wendel_lower_bound)
from calculo.partitions import add_scalar, enumerate_vertical_strips, iter_partitions
from utils.file_utils import carregar_fixture

REFERENCIA = carregar_fixture("reference_values")
BETA_MEIO = math.sqrt(0.5)


def momento_fechado_n1(n, gamma):
    """(2π)² Γ(1−2γ)Γ(n+γ) / (Γ(1−γ)Γ(γ)Γ(n+1−γ))"""
    log_valor = (2 * math.log(2 * math.pi) + special.gammaln(1 - 2 * gamma) + special.gammaln(n + gamma)
                 - special.gammaln(1 - gamma) - special.gammaln(gamma) - special.gammaln(n + 1 - gamma))
    return math.exp(log_valor)


def test_constante_de_dyson_para_N1():
    req = MomentRequest(ChaosParams(BETA_MEIO, 1), 0, tol=1e-9)
    assert moment_abs(req).value == pytest.approx(REFERENCIA["dyson_N1_gamma_0_25"], rel=1e-5)
    assert moment_abs(req).value == pytest.approx(momento_fechado_n1(0, 0.25), rel=1e-7)


@pytest.mark.parametrize("gamma", [0.1, 0.25])
@pytest.mark.parametrize("n", [0, 1, 5, 20])
def test_serie_confere_com_forma_fechada_N1(gamma, n):
    resultado = moment_abs(MomentRequest(ChaosParams.from_gamma(gamma, 1), n, tol=1e-9))
    assert resultado.value == pytest.approx(momento_fechado_n1(n, gamma), rel=1e-7)
    assert resultado.error_estimate <= 1e-9 * resultado.value


@pytest.mark.parametrize("n", [0, 3, 40])
def test_forma_fechada_da_biblioteca(n):
    assert closed_form_n1(n, 0.25) == pytest.approx(momento_fechado_n1(n, 0.25), rel=1e-14)
    assert closed_form_n1(-n, 0.25) == closed_form_n1(n, 0.25)
    with pytest.raises(ParametroInvalidoError):
        closed_form_n1(n, 0.5)

@pytest.mark.slow
@pytest.mark.parametrize("n", [0, 2, 10])
def test_serie_confere_com_forma_fechada_gamma_alto(n):
    resultado = moment_abs(MomentRequest(ChaosParams.from_gamma(0.4, 1), n, tol=1e-7))
    assert resultado.value == pytest.approx(momento_fechado_n1(n, 0.4), rel=1e-6)


@pytest.mark.parametrize("gamma, n", [(0.1, 0), (0.25, 2), (0.4, 10)])
def test_modo_certificado_fica_abaixo_e_dentro_da_cota(gamma, n):
    req = MomentRequest(ChaosParams.from_gamma(gamma, 1), n, lambda_max=256, mode=MODO_CERTIFICADO)
    resultado = moment_abs(req)
    exato = momento_fechado_n1(n, gamma)
    assert resultado.value < exato
    assert exato - resultado.value <= resultado.tail_bound
    assert resultado.tail_correction == 0.0


def test_lambda_manual_nao_dobra():
    chamadas = []
    req = MomentRequest(ChaosParams(0.5, 2), 1, lambda_max=100)
    resultado = S_series(req, progresso=chamadas.append)
    assert len(chamadas) == 1
    assert resultado.lambda_max_used == 100
    assert resultado.terms_evaluated == math.comb(102, 2)


def test_progresso_registra_cada_duplicacao():
    chamadas = []
    S_series(MomentRequest(ChaosParams(0.5, 1), 3, tol=1e-10), progresso=chamadas.append)
    lambdas = [c["lambda_max"] for c in chamadas]
    assert lambdas[0] == 256
    assert all(b == 2 * a for a, b in zip(lambdas, lambdas[1:]))


def test_tolerancia_nao_atingida_carrega_melhor_valor():
    req = MomentRequest(ChaosParams(0.5, 1), 0, tol=1e-14, mode=MODO_CERTIFICADO, lambda_ceiling=64)
    with pytest.raises(ToleranciaNaoAtingidaError) as info:
        moment_abs(req)
    assert info.value.melhor_valor > 0
    assert info.value.lambda_max == 64
    assert info.value.codigo_saida == 3


def test_cancelamento_cooperativo():
    evento = threading.Event()
    evento.set()
    with pytest.raises(CanceladoError):
        S_series(MomentRequest(ChaosParams(0.5, 1), 0), cancelar=evento)


@pytest.mark.parametrize("kwargs", [
    {"n": -1},
    {"n": 2 ** 25},
    {"n": 1, "tol": 0.0},
    {"n": 1, "tol": 1.5},
    {"n": 1, "mode": "exato"},
    {"n": 1, "lambda_max": -3},
])
def test_pedido_invalido(kwargs):
    with pytest.raises(ParametroInvalidoError):
        MomentRequest(ChaosParams(0.5, 1), **kwargs)


def test_beta_supercritico_rejeitado():
    with pytest.raises(ParametroInvalidoError):
        MomentRequest(ChaosParams(1.2, 1, permitir_supercritico=True), 0)


def test_N2_positivo_e_convergente():
    resultado = moment_abs(MomentRequest(ChaosParams(0.5, 2), 1, tol=1e-8))
    assert resultado.value > 0
    assert resultado.error_estimate <= 1e-8 * resultado.value


def test_G_term_confere_com_a_dp():
    params = ChaosParams(0.5, 2)
    req = MomentRequest(params, 3, lambda_max=12, mode=MODO_CERTIFICADO)
    direto = math.fsum(G_term(lam, 3, params).value for lam in iter_partitions(2, 12))
    assert S_series(req).value == pytest.approx(direto, rel=1e-12)


def test_termo_de_jack_e_proporcional_a_G():
    params = ChaosParams(0.6, 2)
    razoes = [termwise_summand(lam, 2, params).value / G_term(lam, 2, params).value
              for lam in iter_partitions(2, 5)]
    assert max(razoes) == pytest.approx(min(razoes), rel=1e-10)


def test_kappa():
    assert kappa(BETA_MEIO) == pytest.approx(REFERENCIA["kappa_beta2_0_5"], rel=1e-6)
    assert kappa(0.5) == pytest.approx(REFERENCIA["kappa_beta_0_5"], rel=1e-5)
    assert kappa(1e-4) < 1e-6
    with pytest.raises(ParametroInvalidoError):
        kappa(1.0)


@pytest.mark.parametrize("beta", [0.3, 0.5, 0.7, 0.9])
def test_constante_da_observacao_N1_e_kappa(beta):
    assert remark_n1_constant(beta) == pytest.approx(kappa(beta), rel=1e-12)


def test_constante_da_integral_beta():
    assert beta_integral_constant(0.25) == pytest.approx(REFERENCIA["beta_integral_gamma_0_25"], rel=1e-5)
    with pytest.raises(ParametroInvalidoError):
        beta_integral_constant(0.5)


def test_momento_assintotico():
    assert asymptotic_moment(100, 1, BETA_MEIO) == pytest.approx(
        REFERENCIA["asymptotic_N1_beta2_0_5_n100"], rel=1e-6)
    assert asymptotic_moment(100, 2, BETA_MEIO) == pytest.approx(2 * kappa(BETA_MEIO) ** 2 / 100)
    with pytest.raises(ParametroInvalidoError):
        asymptotic_moment(0, 1, 0.5)


def test_razao_assintotica_se_aproxima_de_um():
    razoes = [moment_abs(MomentRequest(ChaosParams(0.5, 1), n, tol=1e-8)).value / asymptotic_moment(n, 1, 0.5)
              for n in (64, 256, 1024)]
    desvios = [abs(r - 1.0) for r in razoes]
    assert desvios == sorted(desvios, reverse=True)


def test_tail_bound():
    cotas = [tail_bound(L, 2, 2, 0.25) for L in (64, 256, 1024)]
    assert cotas == sorted(cotas, reverse=True)
    assert cotas[0] / cotas[1] == pytest.approx(4 ** 0.5, rel=0.05)
    with pytest.raises(ParametroInvalidoError):
        tail_bound(0, 2, 2, 0.25)
    with pytest.raises(ParametroInvalidoError):
        tail_bound(64, 2, 2, 0.5)


@pytest.mark.parametrize("N, n", [(1, 0), (1, 3), (2, 1)])
def test_cota_inferior_de_wendel(N, n):
    exato = moment_abs(MomentRequest(ChaosParams(0.5, N), n, tol=1e-8)).value
    cota = wendel_lower_bound(n, N, 0.5, termos=2 ** 16)
    assert 0 < cota <= exato


def test_abel_monotono_e_abaixo_da_serie():
    gamma, n, L = 0.25, 2, 1000
    valores = [abel_series(n, 1, gamma, r, L) for r in (0.9, 0.99, 0.999)]
    serie = moment_abs(MomentRequest(ChaosParams.from_gamma(gamma, 1), n, lambda_max=L,
                                     mode=MODO_CERTIFICADO)).value
    assert valores == sorted(valores)
    assert valores[-1] <= serie
    assert abel_series(n, 1, gamma, 0.0, L) == 0.0
    with pytest.raises(ParametroInvalidoError):
        abel_series(n, 1, gamma, 1.0, L)


def test_abel_em_r_zero_com_n_zero():
    gamma = 0.25
    valor = abel_series(0, 1, gamma, 0.0, 10)
    assert valor == pytest.approx((2 * math.pi) ** 2, rel=1e-12)


@pytest.mark.slow
def test_dimensao_de_fourier_pela_serie():
    inclinacao, _ = series_fourier_dimension(0.5, [2 ** k for k in range(6, 13)])
    assert inclinacao == pytest.approx(-(1 - 0.25), abs=0.02)


def test_conjunto_p0_reproduz_momento_absoluto():
    L = 150
    conjunto = joint_moment_k1_exact(3, 2, 0, 0.5, L)
    direto = moment_abs(MomentRequest(ChaosParams(0.5, 2), 3, lambda_max=L, mode=MODO_CERTIFICADO))
    assert conjunto.value == pytest.approx(direto.value, rel=1e-12)


def _conjunto_por_enumeracao(n, N, p, beta, lambda_max):
    params = ChaosParams(beta, N)
    total = 0.0
    for lam in iter_partitions(N, lambda_max):
        mu = add_scalar(lam, n)
        base = c_product(lam, params).log_magnitude - c_prime_product(lam, params).log_magnitude
        for nu in enumerate_vertical_strips(mu, p):
            total += math.exp(base + c_product(nu, params).log_magnitude
                              - c_prime_product(nu, params).log_magnitude
                              + 2 * math.log(pieri_psi_prime(nu, mu, params))
                              + 2 * norm_sq(nu, params).log_magnitude)
    return (2 * math.pi) ** (2 * N) / math.comb(N, p) ** 2 * total


@pytest.mark.parametrize("N, p", [(2, 1), (2, 2), (3, 1), (3, 2), (3, 3)])
@pytest.mark.parametrize("n", [0, 1, 2])
def test_conjunto_confere_com_enumeracao_de_jack(N, p, n):
    vetorizado = joint_moment_k1_exact(n, N, p, 0.5, 8)
    assert vetorizado.value == pytest.approx(_conjunto_por_enumeracao(n, N, p, 0.5, 8), rel=1e-10)


@pytest.mark.slow
def test_razao_de_independencia_se_aproxima_de_um():
    desvios = [abs(joint_independence_ratio(n, 0.5, threads=4) - 1.0) for n in (8, 16, 32, 64)]
    assert all(b < a for a, b in zip(desvios, desvios[1:])), desvios


def test_conjunto_independe_de_threads():
    um = joint_moment_k1_exact(4, 2, 1, 0.5, 120, threads=1)
    tres = joint_moment_k1_exact(4, 2, 1, 0.5, 120, threads=3)
    assert um.value == tres.value
    assert um.terms_evaluated == math.comb(122, 2) * 2


@pytest.mark.parametrize("kwargs, erro", [
    ({"N": 4, "p": 1, "lambda_max": 10}, OrcamentoExcedidoError),
    ({"N": 2, "p": 1, "lambda_max": 30000}, OrcamentoExcedidoError),
    ({"N": 2, "p": 1, "lambda_max": 100, "max_termos": 10}, OrcamentoExcedidoError),
    ({"N": 2, "p": 3, "lambda_max": 10}, ParametroInvalidoError),
])
def test_orcamento_do_conjunto(kwargs, erro):
    with pytest.raises(erro):
        joint_moment_k1_exact(n=2, beta=0.5, **kwargs)


def test_limites_conjuntos():
    k = kappa(BETA_MEIO)
    assert joint_moment_k1_limit(2, 1, BETA_MEIO) == pytest.approx(REFERENCIA["joint_limit_11_beta2_0_5"], rel=1e-4)
    assert joint_moment_limit([1, 1], BETA_MEIO) == pytest.approx(k ** 2)
    assert joint_moment_limit([3], 0.5) == pytest.approx(asymptotic_moment(1, 3, 0.5))


@pytest.mark.parametrize("l, m, n, tipo", [
    ((2, 0), (0, 2), 17, SelectionKind.EXACT_ZERO),
    ((1, 1), (1, 1), 5, SelectionKind.DIAGONAL_MODULUS),
    ((1, 0, 1), (0, 2, 0), 4, SelectionKind.VANISHING_LIMIT),
    ((1,), (0,), 3, SelectionKind.EXACT_ZERO),
])
def test_selecao_mista(l, m, n, tipo):
    assert mixed_selection(MixedExponents(l, m), n).kind == tipo


def test_selecao_zero_acidental():
    e = MixedExponents((2, 0), (0, 1))
    selecao = mixed_selection(e, 0)
    assert selecao.s_n == -1
    assert selecao.kind == SelectionKind.EXACT_ZERO
    acidental = mixed_selection(MixedExponents((0, 1, 0), (2, 0, 0)), 1)
    assert acidental.s_n == 0
    assert acidental.kind == SelectionKind.VANISHING_LIMIT
    assert acidental.zero_for_large_n


def test_limite_misto():
    assert mixed_limit(MixedExponents((2, 0), (0, 2)), 0.5) == 0.0
    assert mixed_limit(MixedExponents((1, 1), (1, 1)), BETA_MEIO) == pytest.approx(kappa(BETA_MEIO) ** 2)


@pytest.mark.parametrize("l, m", [((1, 0), (1,)), ((), ()), ((0, 0), (0, 0)), ((-1,), (1,))])
def test_expoentes_invalidos(l, m):
    with pytest.raises(ParametroInvalidoError):
        MixedExponents(l, m)
