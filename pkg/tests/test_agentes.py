import json
import math

import pytest
from scipy import special

from agentes import MixedAgent, MomentAgent, OracleAgent, SimulateAgent
from agentes.asymptotic_agent import interpretar_grade
from calculo.erros import ParametroInvalidoError
from main import criar_parser, main
from orquestrador import Orquestrador
from utils.cache_manager import CacheManager
from utils.file_utils import ler_csv


@pytest.fixture(autouse=True)
def diretorio_isolado(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("CHAOS_CONFIG", raising=False)


def _momento_n1(n, gamma):
    log_valor = (2 * math.log(2 * math.pi) + special.gammaln(1 - 2 * gamma) + special.gammaln(n + gamma)
                 - special.gammaln(1 - gamma) - special.gammaln(gamma) - special.gammaln(n + 1 - gamma))
    return math.exp(log_valor)


def test_definicoes_de_ferramenta():
    orquestrador = Orquestrador(cache=CacheManager(habilitado=False))
    assert set(orquestrador.agentes) == {"moment", "asymptotic", "joint", "mixed", "simulate",
                                         "oracle", "verify"}
    for agente in orquestrador.agentes.values():
        definicao = agente.get_tool_definition()
        assert definicao["type"] == "function"
        assert definicao["function"]["parameters"]["additionalProperties"] is False


def test_comando_desconhecido():
    resposta = Orquestrador(cache=CacheManager(habilitado=False)).executar_comando("integral", {}, {})
    assert resposta["erro"]
    assert resposta["codigo"] == 2


def test_beta_supercritico_e_bloqueado():
    resposta = Orquestrador(cache=CacheManager(habilitado=False)).executar_comando(
        "moment", {"beta": 1.2, "N": 1, "n": 0}, {})
    assert resposta["erro"]
    assert resposta["codigo"] == 2
    assert "beta_range" in resposta["detalhes"]


def test_momento_usa_cache(tmp_path):
    orquestrador = Orquestrador(cache=CacheManager(tmp_path / "moments.jsonl"))
    flags = {"beta": 0.5, "N": 1, "n": 2}
    primeira = orquestrador.executar_comando("moment", flags, {})
    segunda = orquestrador.executar_comando("moment", flags, {})
    assert not primeira["erro"] and not primeira["cache"]
    assert segunda["cache"]
    assert segunda["resultado"] == primeira["resultado"]
    assert primeira["resultado"]["value"] == pytest.approx(_momento_n1(2, 0.125), rel=1e-7)
    assert primeira["parametros"]["tol"] == 1e-8


def test_momento_tolerancia_nao_atingida():
    resposta = MomentAgent(CacheManager(habilitado=False)).processar(
        0.5, 1, 0, tol=1e-14, mode="certified", lambda_ceiling=64)
    assert resposta["erro"]
    assert resposta["codigo"] == 3
    assert resposta["detalhes"]["lambda_max"] == 64


def test_conjunto_fora_do_orcamento():
    resposta = Orquestrador(cache=CacheManager(habilitado=False)).executar_comando(
        "joint", {"beta": 0.5, "N0": 3, "N1": 1, "n": 4}, {})
    assert resposta["codigo"] == 4


def test_conjunto_degenerado_tem_q_um():
    orquestrador = Orquestrador(cache=CacheManager(habilitado=False))
    resposta = orquestrador.executar_comando(
        "joint", {"beta": 0.5, "N0": 1, "N1": 0, "n": 3, "lambda_max": 400, "threads": 2}, {})
    assert not resposta["erro"]
    assert resposta["resultado"]["Q"] == pytest.approx(1.0, rel=1e-3)


def test_misto_zero_exato():
    resposta = MixedAgent().processar([2, 0], [0, 2], beta=0.5, n=17)
    assert resposta["mensagem"] == "ExactZero 0"
    assert resposta["resultado"]["S_n"] == -2
    assert (resposta["resultado"]["N_plus"], resposta["resultado"]["N_minus"]) == (2, 2)


def test_misto_modulo_diagonal():
    resposta = MixedAgent().processar([1], [1], beta=0.5, n=3)
    assert resposta["resultado"]["kind"] == "DiagonalModulus"
    assert resposta["resultado"]["limit"] > 0


def test_oraculo_desconhecido():
    resposta = OracleAgent().processar("integral", 0.25)
    assert resposta["codigo"] == 2


def test_oraculo_n1_confere_com_serie():
    resposta = OracleAgent().processar("n1", 0.25, n=3)
    assert not resposta["erro"]
    assert resposta["resultado"]["relative_difference"] < 1e-8


def test_oraculo_pieri():
    resposta = OracleAgent().processar("pieri", 0.25, N=2, p=1, mu=[1])
    assert resposta["resultado"]["coefficients"]["[1, 1]"] == pytest.approx(1.6)


def test_simulacao_sem_estimativas():
    resposta = SimulateAgent().processar(0.5, 64, 512, 10, 5, [1, 2], estimate=False)
    assert not resposta["erro"]
    cabecalho, linhas = resposta["amostras"]
    assert len(list(linhas)) == 20
    assert "estimates" not in resposta["resultado"]


@pytest.mark.parametrize("grade, esperado", [
    ("6:8", [64, 128, 256]),
    ("64,100", [64, 100]),
])
def test_grade_assintotica(grade, esperado):
    assert interpretar_grade(grade) == esperado


@pytest.mark.parametrize("grade", ["8:6", "a:b", "0,4", ""])
def test_grade_assintotica_invalida(grade):
    with pytest.raises(ParametroInvalidoError):
        interpretar_grade(grade)


def test_parser_exige_subcomando():
    with pytest.raises(SystemExit):
        criar_parser().parse_args([])


def test_cli_beta_invalido_sai_com_2(capsys):
    assert main(["moment", "--beta", "1.2", "--N", "1", "--n", "0", "--no-cache"]) == 2
    assert "[ERRO]" in capsys.readouterr().err


def test_cli_misto(capsys):
    assert main(["mixed", "--l", "2,0", "--m", "0,2", "--n", "17"]) == 0
    assert capsys.readouterr().out == "ExactZero 0\n"


def test_cli_momento_json(capsys):
    assert main(["moment", "--beta", "0.5", "--N", "1", "--n", "0", "--json", "--no-cache"]) == 0
    dados = json.loads(capsys.readouterr().out)
    assert dados["resultado"]["value"] == pytest.approx(_momento_n1(0, 0.125), rel=1e-7)
    assert len(dados["manifest_digest"]) == 64


def test_cli_momento_grava_saidas(tmp_path, capsys):
    destino = tmp_path / "saida"
    args = ["moment", "--beta", "0.5", "--N", "2", "--n", "1", "--no-cache", "--output", str(destino)]
    assert main(args) == 0
    assert (destino / "moment.json").exists()
    linhas = ler_csv(destino / "moment.csv")
    assert linhas[0]["N"] == "2"
    manifestos = list(destino.glob("manifest-*.json"))
    assert len(manifestos) == 1
    manifesto = json.loads(manifestos[0].read_text(encoding="utf-8"))
    assert str(destino / "moment.csv") in manifesto["outputs"]


def test_cli_simulacao_reprodutivel(capsys):
    args = ["simulate", "--beta", "0.5", "--K", "64", "--grid", "512", "--samples", "120",
            "--seed", "3", "--n", "1,2", "--threads", "1", "--json"]
    assert main(args) == 0
    primeira = json.loads(capsys.readouterr().out)
    args[args.index("--threads") + 1] = "3"
    assert main(args) == 0
    segunda = json.loads(capsys.readouterr().out)
    assert primeira["resultado"] == segunda["resultado"]
    assert primeira["manifest_digest"] == segunda["manifest_digest"]

    args[args.index("--seed") + 1] = "4"
    assert main(args) == 0
    assert json.loads(capsys.readouterr().out)["manifest_digest"] != segunda["manifest_digest"]


def test_cli_csv(capsys):
    assert main(["asymptotic", "--beta", "0.5", "--N", "1", "--n-grid", "64,128", "--csv", "--no-cache"]) == 0
    saida = capsys.readouterr().out.splitlines()
    assert saida[0].startswith("# manifest: ")
    assert saida[1] == "n,exact,asymptotic,ratio"
    assert len(saida) == 4


def test_cli_verifica_criterio_dyson(capsys):
    assert main(["verify", "--only", "12", "--json"]) == 0
    dados = json.loads(capsys.readouterr().out)
    assert [c["id"] for c in dados["resultado"]["criteria"]] == [12]
    assert dados["resultado"]["criteria"][0]["passed"]


def test_cli_config_ausente(capsys):
    assert main(["mixed", "--l", "1", "--m", "1", "--config", "nao_existe.env"]) == 2


def test_cli_config_define_padroes(tmp_path, capsys):
    arquivo = tmp_path / "meu.env"
    arquivo.write_text("CHAOS_MODE=certified\nCHAOS_TOL=1e-2\n", encoding="utf-8")
    assert main(["moment", "--beta", "0.5", "--N", "1", "--n", "1", "--json", "--no-cache",
                 "--config", str(arquivo)]) == 0
    dados = json.loads(capsys.readouterr().out)
    assert dados["parametros"]["mode"] == "certified"
    assert dados["resultado"]["tail_correction"] == 0.0
