from typing import Any, Dict, Optional


class ChaosError(Exception):
    """Erro base de todos os cálculos do pacote"""

    codigo_saida = 1

    def __init__(self, mensagem: str, detalhes: Optional[Dict[str, Any]] = None):
        super().__init__(mensagem)
        self.mensagem = mensagem
        self.detalhes = detalhes or {}


class ParametroInvalidoError(ChaosError, ValueError):
    """Parâmetro fora do domínio permitido (β, N, n, tolerância, ...)"""

    codigo_saida = 2


class ToleranciaNaoAtingidaError(ChaosError):
    """A série não atingiu a tolerância até o teto de truncamento.

    Carrega o melhor valor obtido para que o chamador possa decidir o que fazer.
    """

    codigo_saida = 3

    def __init__(self, mensagem: str, melhor_valor: float, tail_bound: float,
                 error_estimate: float, lambda_max: int):
        super().__init__(mensagem, {
            "melhor_valor": melhor_valor,
            "tail_bound": tail_bound,
            "error_estimate": error_estimate,
            "lambda_max": lambda_max,
        })
        self.melhor_valor = melhor_valor
        self.tail_bound = tail_bound
        self.error_estimate = error_estimate
        self.lambda_max = lambda_max


class OrcamentoExcedidoError(ChaosError):
    """Orçamento de enumeração ou de quadratura excedido"""

    codigo_saida = 4


class QuadraturaError(ChaosError):
    """Falha de convergência de uma quadratura"""

    codigo_saida = 4


class JackOracleError(ChaosError):
    """Colisão de autovalores ou resíduo não nulo no oráculo simbólico"""


class CanceladoError(ChaosError):
    """Cálculo interrompido por cancelamento cooperativo"""
