import logging
import threading
from typing import Any, Dict, Optional

from calculo.erros import ChaosError
from calculo.jack import ChaosParams
from calculo.moments import (LAMBDA_TETO_PADRAO, MODO_EXTRAPOLADO, MODOS, MomentRequest,
                             Progresso, moment_abs)
from utils.cache_manager import CacheManager
from .base_agent import BaseAgent

logger = logging.getLogger(__name__)

CABECALHO = ("beta", "N", "n", "value", "tail_bound", "error_estimate", "lambda_max_used", "mode")


class MomentAgent(BaseAgent):
    """Agente do momento absoluto E|c_n|^{2N} pela série exata, com cache"""

    def __init__(self, cache: Optional[CacheManager] = None):
        super().__init__(
            nome="Moment Agent",
            descricao="Calcula E|c_n|^{2N} pela série de partições, com cota de cauda e Λ usado"
        )
        self.cache = cache or CacheManager()

    def processar(self, beta: float, N: int, n: int, tol: float = 1e-8,
                  lambda_max: Optional[int] = None, mode: str = MODO_EXTRAPOLADO,
                  lambda_ceiling: int = LAMBDA_TETO_PADRAO, no_cache: bool = False,
                  progresso: Optional[Progresso] = None,
                  cancelar: Optional[threading.Event] = None, **_) -> Dict[str, Any]:
        """
        Processa um pedido de momento absoluto

        Args:
            beta: parâmetro do caos, 0 < β < 1
            N: ordem do momento
            n: índice de Fourier
            tol: tolerância relativa
            lambda_max: truncamento fixo (desliga a duplicação)
            no_cache: ignora leitura e escrita do cache

        Returns:
            Dict com o registro do momento
        """
        consulta = {"beta": beta, "N": N, "n": n, "tol": tol, "mode": mode, "lambda_max": lambda_max}
        usar_cache = not no_cache
        try:
            registro = self.cache.buscar(consulta) if usar_cache else None
            em_cache = registro is not None
            if registro is None:
                req = MomentRequest(ChaosParams(beta, N), n, tol, lambda_max, mode, lambda_ceiling)
                resultado = moment_abs(req, progresso, cancelar)
                registro = resultado.to_record(req)
                registro["lambda_max"] = lambda_max
                registro["lambda_ceiling"] = lambda_ceiling
                if usar_cache:
                    self.cache.gravar(registro)
        except ChaosError as e:
            logger.warning("[ERRO] momento β=%s N=%s n=%s: %s", beta, N, n, e.mensagem)
            return self.falha(e)

        linha = [registro[c] for c in CABECALHO]
        return self.sucesso(
            f"E|c_{n}|^{2 * N} = {registro['value']:.12g} "
            f"(cota de cauda {registro['tail_bound']:.3e}, Λ = {registro['lambda_max_used']})",
            registro,
            tabela=(CABECALHO, [linha]),
            cache=em_cache,
        )

    def get_tool_definition(self) -> Dict[str, Any]:
        return self._definicao("moment", {
            "beta": {"type": "number", "description": "Parâmetro β do caos imaginário"},
            "N": {"type": "integer", "minimum": 1, "description": "Ordem do momento"},
            "n": {"type": "integer", "minimum": 0, "description": "Índice de Fourier"},
            "tol": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1, "default": 1e-8},
            "lambda_max": {"type": ["integer", "null"], "minimum": 0, "default": None},
            "mode": {"type": "string", "enum": list(MODOS), "default": MODO_EXTRAPOLADO},
            "lambda_ceiling": {"type": "integer", "minimum": 1, "default": LAMBDA_TETO_PADRAO},
            "no_cache": {"type": "boolean", "default": False},
        }, ["beta", "N", "n"])
