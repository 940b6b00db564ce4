from typing import Any, Dict, List

from calculo.erros import ChaosError
from calculo.moments import MixedExponents, mixed_limit, mixed_selection
from .base_agent import BaseAgent

CABECALHO = ("n", "kind", "S_n", "zero_for_large_n", "limit")


class MixedAgent(BaseAgent):
    """Agente da regra de seleção dos momentos mistos E[Π c_{n+j}^{ℓ_j} c̄_{n+j}^{m_j}]"""

    def __init__(self):
        super().__init__(
            nome="Mixed Agent",
            descricao="Classifica um momento misto (zero exato, módulo diagonal ou limite nulo) e dá o coeficiente limite"
        )

    def processar(self, l: List[int], m: List[int], beta: float = 0.5, n: int = 1, **_) -> Dict[str, Any]:
        try:
            e = MixedExponents(tuple(l), tuple(m))
            selecao = mixed_selection(e, n)
            limite = mixed_limit(e, beta)
        except ChaosError as erro:
            return self.falha(erro)

        resultado = {
            "beta": beta, "l": list(l), "m": list(m), "n": n,
            "kind": selecao.kind.value,
            "S_n": selecao.s_n,
            "N_plus": e.N_plus,
            "N_minus": e.N_minus,
            "zero_for_large_n": selecao.zero_for_large_n,
            "limit": limite,
        }
        return self.sucesso(
            f"{selecao.kind.value} {limite:g}",
            resultado,
            tabela=(CABECALHO, [[resultado[c] for c in CABECALHO]]),
        )

    def get_tool_definition(self) -> Dict[str, Any]:
        return self._definicao("mixed", {
            "beta": {"type": "number", "default": 0.5},
            "l": {"type": "array", "items": {"type": "integer", "minimum": 0}, "minItems": 1},
            "m": {"type": "array", "items": {"type": "integer", "minimum": 0}, "minItems": 1},
            "n": {"type": "integer", "minimum": 0, "default": 1},
        }, ["l", "m"])
