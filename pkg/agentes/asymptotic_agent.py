from typing import Any, Dict, List

from calculo.erros import ChaosError, ParametroInvalidoError
from calculo.moments import asymptotic_moment
from .base_agent import BaseAgent
from .moment_agent import MomentAgent

CABECALHO = ("n", "exact", "asymptotic", "ratio")


def interpretar_grade(grade: str) -> List[int]:
    """Grade "6:12" vira 2⁶..2¹²; "64,100,128" é uma lista explícita"""
    grade = grade.strip()
    try:
        if ":" in grade:
            inicio, fim = (int(x) for x in grade.split(":", 1))
            if not 0 <= inicio <= fim <= 24:
                raise ParametroInvalidoError(f"Expoentes diádicos fora de [0, 24]: {grade}")
            return [2 ** k for k in range(inicio, fim + 1)]
        indices = [int(x) for x in grade.split(",") if x.strip()]
    except ValueError as e:
        raise ParametroInvalidoError(f"Grade de n inválida '{grade}': {e}") from e
    if not indices or any(n < 1 for n in indices):
        raise ParametroInvalidoError(f"Grade de n deve ter índices ≥ 1: '{grade}'")
    return indices


class AsymptoticAgent(BaseAgent):
    """Agente que compara a série exata com N!κ^N n^{−N(1−2γ)}"""

    def __init__(self, momentos: MomentAgent = None):
        super().__init__(
            nome="Asymptotic Agent",
            descricao="Tabela (n, exato, assintótico, razão) sobre uma grade diádica de n"
        )
        self.momentos = momentos or MomentAgent()

    def processar(self, beta: float, N: int, n_grid: str = "6:12", tol: float = 1e-8,
                  no_cache: bool = False, **_) -> Dict[str, Any]:
        try:
            indices = interpretar_grade(n_grid)
            linhas = []
            for n in indices:
                resposta = self.momentos.processar(beta, N, n, tol=tol, no_cache=no_cache)
                if resposta["erro"]:
                    return resposta
                exato = resposta["resultado"]["value"]
                assintotico = asymptotic_moment(n, N, beta)
                linhas.append([n, exato, assintotico, exato / assintotico])
        except ChaosError as e:
            return self.falha(e)
        return self.sucesso(
            f"Razão exato/assintótico de {linhas[0][3]:.6f} (n={indices[0]}) "
            f"a {linhas[-1][3]:.6f} (n={indices[-1]})",
            [dict(zip(CABECALHO, linha)) for linha in linhas],
            tabela=(CABECALHO, linhas),
        )

    def get_tool_definition(self) -> Dict[str, Any]:
        return self._definicao("asymptotic", {
            "beta": {"type": "number"},
            "N": {"type": "integer", "minimum": 1},
            "n_grid": {"type": "string", "default": "6:12",
                       "description": "Expoentes diádicos 'a:b' ou lista 'n1,n2,...'"},
            "tol": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1, "default": 1e-8},
            "no_cache": {"type": "boolean", "default": False},
        }, ["beta", "N"])
