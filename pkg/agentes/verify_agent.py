import logging
from typing import Any, Dict, List, Optional

from calculo.erros import ChaosError
from calculo.verificacao import SUITES, executar_suite
from utils.file_utils import carregar_fixture
from utils.config import threads_padrao
from .base_agent import BaseAgent

logger = logging.getLogger(__name__)

CABECALHO = ("id", "passed", "measured", "threshold", "threshold_label", "wall_time_ms")
CODIGO_FALHA_CRITERIO = 5


class VerifyAgent(BaseAgent):
    """Agente da suíte de verificação: roda os critérios e devolve o relatório"""

    def __init__(self):
        super().__init__(
            nome="Verify Agent",
            descricao="Executa os critérios de aceitação (suíte fast ou full) e relata valores medidos"
        )

    def processar(self, suite: str = "fast", threads: int = 1,
                  only: Optional[List[int]] = None, **_) -> Dict[str, Any]:
        try:
            limite_gap = carregar_fixture("large_gap")["scaled_bound"]
            resultados = executar_suite(suite, threads, limite_gap, only)
        except ChaosError as e:
            return self.falha(e)

        relatorio = [r.to_json() for r in resultados]
        falhas = [r.id for r in resultados if not r.passed]
        linhas = [[r.id, r.passed, r.measured, r.threshold, r.threshold_label, r.wall_time_ms] for r in resultados]
        if falhas:
            logger.warning("[VERIFY] critérios com falha: %s", falhas)
            return {
                "erro": True,
                "mensagem": f"Critérios com falha: {falhas}",
                "resultado": {"suite": suite, "criteria": relatorio},
                "codigo": CODIGO_FALHA_CRITERIO,
                "tabela": (CABECALHO, linhas),
            }
        return self.sucesso(
            f"Suíte {suite}: {len(resultados)} critérios aprovados",
            {"suite": suite, "criteria": relatorio},
            tabela=(CABECALHO, linhas),
        )

    def get_tool_definition(self) -> Dict[str, Any]:
        return self._definicao("verify", {
            "suite": {"type": "string", "enum": list(SUITES), "default": "fast"},
            "threads": {"type": "integer", "minimum": 1, "default": threads_padrao()},
            "only": {"type": ["array", "null"], "items": {"type": "integer", "minimum": 1, "maximum": 12},
                     "default": None},
        }, [])
