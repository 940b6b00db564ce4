import math

import numpy as np
import pytest

from calculo.erros import ParametroInvalidoError
from calculo.gmc_sim import (LIMITE_EXPOENTE, MARGEM_MOLIFICACAO, FieldSample, MomentEstimate,
                             MomentPattern, SimConfig, SimulationRun, estimate_moments,
                             fourier_coeffs, fourier_dimension_estimate, isotropy_report,
                             kurtosis_ratio, measure_density, sample_field, sample_stream,
                             simulate, white_noise_marginals_test)
from calculo.moments import MixedExponents
from utils.file_utils import carregar_fixture

REFERENCIA = carregar_fixture("reference_values")
MOLIFICACAO = carregar_fixture("mollification")


def _config(**kwargs):
    padrao = dict(beta=0.5, K=64, G=512, M=120, seed=11, n_list=(1, 2, 3, 4), threads=1, batches=16)
    padrao.update(kwargs)
    return SimConfig(**padrao)


@pytest.mark.parametrize("alteracao", [
    {"G": 500},
    {"G": 256},
    {"n_list": (5,)},
    {"n_list": ()},
    {"seed": 2 ** 64},
    {"seed": -1},
    {"beta": 1.0},
    {"M": 1},
    {"threads": 0},
])
def test_sim_config_invalida(alteracao):
    with pytest.raises(ParametroInvalidoError):
        _config(**alteracao)


def test_margem_de_molificacao_da_fixture():
    assert MARGEM_MOLIFICACAO == MOLIFICACAO["margin"]
    assert LIMITE_EXPOENTE == MOLIFICACAO["max_exponent"]
    K = 64
    _config(K=K, G=MOLIFICACAO["grid_factor"] * K, n_list=(K // MOLIFICACAO["margin"],))


def test_numero_harmonico():
    config = _config(K=256, G=2048, n_list=(1,))
    assert config.H_K == pytest.approx(REFERENCIA["harmonic_256"], abs=1e-4)


def test_fluxo_reprodutivel_por_amostra():
    a = sample_stream(3, 7).standard_normal(5)
    b = sample_stream(3, 7).standard_normal(5)
    c = sample_stream(3, 8).standard_normal(5)
    np.testing.assert_array_equal(a, b)
    assert not np.array_equal(a, c)


def test_campo_e_a_soma_de_cossenos():
    config = _config(K=8, G=64, n_list=(0,))
    campo = sample_field(config, sample_stream(5, 0))
    gerador = sample_stream(5, 0)
    A, B = gerador.standard_normal(8), gerador.standard_normal(8)
    theta = 2 * np.pi * np.arange(64) / 64
    k = np.arange(1, 9)
    direto = np.sum((A[:, None] * np.cos(np.outer(k, theta)) + B[:, None] * np.sin(np.outer(k, theta)))
                    / np.sqrt(k)[:, None], axis=0)
    np.testing.assert_allclose(campo.values, direto, atol=1e-12)
    assert campo.H_K == pytest.approx(sum(1 / j for j in k))


def _escala(config):
    return 2 * math.pi * math.exp(0.5 * config.beta ** 2 * config.H_K)


def test_covariancia_empirica_segue_o_nucleo_truncado():
    config = _config(K=256, G=2048, M=10_000, n_list=(1,))
    defasagens = np.array([1, 16, 256])
    produtos = np.empty((config.M, defasagens.size))
    for i in range(config.M):
        valores = sample_field(config, sample_stream(31, i)).values
        assert abs(valores.mean()) < 1e-12
        produtos[i] = valores[0] * valores[defasagens]
    k = np.arange(1, config.K + 1)
    for coluna, L in enumerate(defasagens):
        alvo = np.sum(np.cos(k * 2 * np.pi * L / config.G) / k)
        erro = produtos[:, coluna].std(ddof=1) / math.sqrt(config.M)
        assert abs(produtos[:, coluna].mean() - alvo) <= 4 * erro, L


def test_refinamento_da_grade():
    refino = MOLIFICACAO["refinement"]
    K = refino["K"]
    grossa = _config(K=K, G=refino["grid_factor"] * K, n_list=(1, 4, 16))
    fina = _config(K=K, G=2 * refino["grid_factor"] * K, n_list=(1, 4, 16))
    pior = 0.0
    for i in range(20):
        a, b = (fourier_coeffs(measure_density(sample_field(c, sample_stream(11, i)), c.beta), c.n_list)
                for c in (grossa, fina))
        pior = max(pior, float(np.max(np.abs(a - b))) / _escala(grossa))
    assert pior < refino["tol"]


def test_deslocamento_da_grade_gira_a_fase():
    config = _config()
    n = np.array([0, 1, 3, -2, 7, 100])
    for i in range(5):
        densidade = measure_density(sample_field(config, sample_stream(2, i)), config.beta)
        c = fourier_coeffs(densidade, n)
        girado = fourier_coeffs(np.roll(densidade, 1), n)
        np.testing.assert_allclose(girado, np.exp(2j * np.pi * n / config.G) * c,
                                   rtol=0, atol=1e-12 * _escala(config))


def test_momento_estavel_ao_dobrar_K():
    indices = (1, 2, 4)
    pouco = simulate(_config(K=64, G=512, M=400, seed=21, n_list=indices))
    muito = simulate(_config(K=128, G=1024, M=400, seed=22, n_list=indices))
    for n in indices:
        (a,) = estimate_moments(pouco, [MomentPattern.abs_power(n, 1)])
        (b,) = estimate_moments(muito, [MomentPattern.abs_power(n, 1)])
        z = abs(a.value.real - b.value.real) / math.hypot(a.se_re, b.se_re)
        assert z <= MOLIFICACAO["truncation_z"], (n, z)


def test_variancia_do_campo():
    config = _config(K=32, G=256, n_list=(0,))
    valores = np.array([sample_field(config, sample_stream(1, i)).values[0] for i in range(4000)])
    assert np.var(valores) == pytest.approx(config.H_K, rel=0.1)


def test_densidade_trivial_com_beta_zero():
    config = _config(beta=0.0, K=16, G=128, n_list=(0, 1))
    densidade = measure_density(sample_field(config, sample_stream(0, 0)), 0.0)
    np.testing.assert_allclose(densidade, np.ones(128))
    c = fourier_coeffs(densidade, [0, 1, -1])
    assert abs(c[0] - 2 * math.pi) < 1e-12
    assert abs(c[1]) < 1e-12 and abs(c[2]) < 1e-12


def test_densidade_recusa_estouro():
    campo = FieldSample(np.zeros(8), H_K=2000.0)
    with pytest.raises(ParametroInvalidoError):
        measure_density(campo, 0.9)


def test_coeficientes_conferem_com_soma_direta():
    G = 64
    theta = 2 * np.pi * np.arange(G) / G
    densidade = np.exp(1j * np.cos(theta)) * (1 + 0.1 * np.sin(3 * theta))
    c = fourier_coeffs(densidade, [0, 2, 5])
    for coef, n in zip(c, (0, 2, 5)):
        direto = (2 * np.pi / G) * np.sum(np.exp(1j * n * theta) * densidade)
        assert abs(coef - direto) < 1e-12


def test_simulacao_independe_de_threads():
    uma = simulate(_config(M=24, threads=1))
    varias = simulate(_config(M=24, threads=4))
    np.testing.assert_array_equal(uma.coeffs, varias.coeffs)
    assert uma.coeffs.shape == (24, 4)


def test_sementes_diferentes_dao_amostras_diferentes():
    assert not np.array_equal(simulate(_config(M=4, seed=1)).coeffs, simulate(_config(M=4, seed=2)).coeffs)


def test_linhas_da_execucao():
    run = simulate(_config(M=3, n_list=(1, 2)))
    linhas = list(run.rows())
    assert len(linhas) == 6
    assert linhas[0][:2] == (0, 1)
    with pytest.raises(ParametroInvalidoError):
        run.column(3)


def test_reescala_de_z():
    config = _config(n_list=(2,))
    run = SimulationRun(config, np.ones((3, 1), dtype=np.complex128))
    np.testing.assert_allclose(run.rescaled(2), np.full(3, 2 ** 0.375))


def test_padroes():
    p = MomentPattern.abs_power(3, 2)
    assert p.indices == (3, 3, 3, 3)
    assert p.conj == (False, False, True, True)
    misto = MomentPattern.from_mixed(MixedExponents((1, 0), (0, 2)), 5)
    assert misto.indices == (5, 6, 6)
    assert misto.conj == (False, True, True)
    with pytest.raises(ParametroInvalidoError):
        MomentPattern("vazio", (), ())


def test_z_score():
    est = MomentEstimate("x", complex(1.0, 0.0), 0.5, 0.0, 100)
    assert est.z_score(0.0) == pytest.approx(2.0)
    assert est.z_score(1.0) == 0.0
    assert math.isinf(MomentEstimate("y", complex(0.0, 1.0), 0.5, 0.0, 100).z_score(0.0))
    assert est.to_json()["M"] == 100


def test_estimativas_exigem_amostras():
    with pytest.raises(ParametroInvalidoError):
        estimate_moments(_config(M=50), [MomentPattern.abs_power(1, 1)])


def test_curtose_de_modulo_constante():
    run = SimulationRun(_config(n_list=(1,)), np.full((64, 1), 2.0 + 0j))
    razao, erro = kurtosis_ratio(run, 1)
    assert razao == pytest.approx(1.0)
    assert erro == pytest.approx(0.0, abs=1e-12)


def test_dimensao_de_fourier_de_lei_de_potencia():
    indices = (1, 2, 4, 8, 16)
    config = _config(K=256, G=2048, n_list=indices)
    coeffs = np.array([[n ** -0.375 for n in indices]] * 8, dtype=np.complex128)
    inclinacao, erro = fourier_dimension_estimate(SimulationRun(config, coeffs))
    assert inclinacao == pytest.approx(-0.75)
    assert erro == pytest.approx(0.0, abs=1e-10)
    with pytest.raises(ParametroInvalidoError):
        fourier_dimension_estimate(SimulationRun(config, coeffs), [1, 2])


def test_ruido_branco_limita_k():
    with pytest.raises(ParametroInvalidoError):
        white_noise_marginals_test(_config(), 1, 9)


def test_relatorio_de_isotropia():
    run = simulate(_config())
    relatorio = isotropy_report(run, 1, ordens=(1, 2))
    assert set(relatorio) == {1, 2}
    assert all(est.M_effective == 120 for est in relatorio.values())


@pytest.mark.slow
def test_media_de_c0_e_2pi():
    run = simulate(_config(K=64, G=512, M=800, n_list=(0, 1), threads=4))
    c0, c1 = estimate_moments(run, [MomentPattern("c_0", (0,), (False,)), MomentPattern("c_1", (1,), (False,))])
    assert c0.z_score(2 * math.pi) <= 5.0
    assert c1.z_score(0.0) <= 5.0


@pytest.mark.slow
def test_fase_uniforme():
    run = simulate(_config(K=128, G=1024, M=800, n_list=(1, 2), threads=4))
    for est in isotropy_report(run, 2).values():
        assert est.z_score(0.0) <= 5.0
