from typing import Any, Dict, Optional

from calculo.erros import ChaosError
from calculo.moments import joint_moment_k1_exact, joint_moment_k1_limit
from utils.config import threads_padrao
from .base_agent import BaseAgent
from .moment_agent import MomentAgent

CABECALHO = ("n", "N0", "N1", "lambda_max", "value", "tail_estimate", "extrapolated", "Q", "limit")


class JointAgent(BaseAgent):
    """Agente do momento conjunto E|c_n|^{2N_0}|c_{n+1}|^{2N_1} e da razão de independência Q"""

    def __init__(self, momentos: MomentAgent = None):
        super().__init__(
            nome="Joint Agent",
            descricao="Momento conjunto de c_n e c_{n+1} por enumeração de partições e faixas verticais"
        )
        self.momentos = momentos or MomentAgent()

    def _marginal(self, beta: float, N: int, n: int, no_cache: bool) -> Dict[str, Any]:
        if N == 0:
            return {"erro": False, "resultado": {"value": 1.0}}
        return self.momentos.processar(beta, N, n, no_cache=no_cache)

    def processar(self, beta: float, N0: int, N1: int, n: int,
                  lambda_max: Optional[int] = None, threads: int = 1,
                  no_cache: bool = False, **_) -> Dict[str, Any]:
        lambda_max = 100 * max(n, 1) if lambda_max is None else lambda_max
        N, p = N0 + N1, N1
        try:
            conjunto = joint_moment_k1_exact(n, N, p, beta, lambda_max, threads=threads)
            limite = joint_moment_k1_limit(N, p, beta)
        except ChaosError as e:
            return self.falha(e)

        marginais = [self._marginal(beta, N0, n, no_cache), self._marginal(beta, N1, n + 1, no_cache)]
        for resposta in marginais:
            if resposta["erro"]:
                return resposta
        produto = marginais[0]["resultado"]["value"] * marginais[1]["resultado"]["value"]
        Q = conjunto.extrapolated / produto

        resultado = {
            "beta": beta, "N0": N0, "N1": N1, "n": n,
            "lambda_max": lambda_max,
            "value": conjunto.value,
            "tail_estimate": conjunto.tail_estimate,
            "extrapolated": conjunto.extrapolated,
            "terms_evaluated": conjunto.terms_evaluated,
            "Q": Q,
            "limit": limite,
        }
        linha = [resultado[c] for c in CABECALHO]
        return self.sucesso(
            f"E|c_{n}|^{2 * N0}|c_{n + 1}|^{2 * N1} ≈ {conjunto.extrapolated:.10g}, Q = {Q:.6f}",
            resultado,
            tabela=(CABECALHO, [linha]),
        )

    def get_tool_definition(self) -> Dict[str, Any]:
        return self._definicao("joint", {
            "beta": {"type": "number"},
            "N0": {"type": "integer", "minimum": 0},
            "N1": {"type": "integer", "minimum": 0},
            "n": {"type": "integer", "minimum": 0},
            "lambda_max": {"type": ["integer", "null"], "minimum": 0, "default": None},
            "threads": {"type": "integer", "minimum": 1, "default": threads_padrao()},
            "no_cache": {"type": "boolean", "default": False},
        }, ["beta", "N0", "N1", "n"])
