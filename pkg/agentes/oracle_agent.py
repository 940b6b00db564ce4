from typing import Any, Dict, List, Optional

from calculo.erros import ChaosError, ParametroInvalidoError
from calculo.jack import ChaosParams, norm_sq
from calculo.moments import MomentRequest, moment_abs, remark_n1_constant
from calculo.oracle import (dyson_norm_check, jack_monomial_coeffs, orthogonality_spot_check,
                            pieri_expand_oracle, quadrature_moment_N1, quadrature_moment_N2,
                            remark_integral_n1)
from calculo.partitions import new_partition
from .base_agent import BaseAgent

TIPOS = ("n1", "n2", "dyson", "remark", "jack", "pieri", "orthogonality")


class OracleAgent(BaseAgent):
    """Agente dos oráculos independentes: quadraturas e Jack simbólico"""

    def __init__(self):
        super().__init__(
            nome="Oracle Agent",
            descricao="Quadraturas de gás de Coulomb (N ≤ 2), Dyson, ortogonalidade e Pieri simbólico"
        )

    def _n1(self, gamma, n, tol, **_) -> Dict[str, Any]:
        quadratura = quadrature_moment_N1(n, gamma, tol)
        serie = moment_abs(MomentRequest(ChaosParams.from_gamma(gamma, 1), n, tol=1e-10)).value
        return {"value": quadratura.value, "error_estimate": quadratura.error_estimate,
                "series": serie, "relative_difference": abs(serie - quadratura.value) / quadratura.value}

    def _n2(self, gamma, n, tol, **_) -> Dict[str, Any]:
        quadratura = quadrature_moment_N2(n, gamma, max(tol, 1e-3))
        serie = moment_abs(MomentRequest(ChaosParams.from_gamma(gamma, 2), n, tol=1e-8)).value
        return {"value": quadratura.value, "error_estimate": quadratura.error_estimate,
                "evaluations": quadratura.evaluations, "series": serie,
                "relative_difference": abs(serie - quadratura.value) / quadratura.value}

    def _dyson(self, gamma, tol, **_) -> Dict[str, Any]:
        valor = dyson_norm_check(gamma, tol)
        formula = norm_sq(new_partition([], 2), ChaosParams.from_gamma(gamma, 2)).value
        return {"value": valor, "formula": formula, "difference": abs(valor - formula)}

    def _remark(self, gamma, tol, **_) -> Dict[str, Any]:
        valor = remark_integral_n1(gamma, tol)
        fechada = remark_n1_constant((2.0 * gamma) ** 0.5)
        return {"value": valor, "closed_form": fechada, "difference": abs(valor - fechada)}

    def _jack(self, gamma, lam, N, **_) -> Dict[str, Any]:
        poly = jack_monomial_coeffs(lam, gamma, N)
        return {"coefficients": {str(k.to_json()): float(v) for k, v in poly.coeffs.items()},
                "value_at_ones": float(poly.value_at_ones())}

    def _pieri(self, gamma, p, mu, N, **_) -> Dict[str, Any]:
        coeficientes = pieri_expand_oracle(p, mu, gamma, N)
        return {"coefficients": {str(k.to_json()): v for k, v in coeficientes.items()}}

    def _orthogonality(self, gamma, lam, nu, tol, **_) -> Dict[str, Any]:
        return {"value": orthogonality_spot_check(lam, nu, gamma, 2, tol)}

    def processar(self, kind: str, gamma: float, n: int = 0, tol: float = 1e-10,
                  N: int = 2, p: int = 1, mu: Optional[List[int]] = None,
                  lam: Optional[List[int]] = None, nu: Optional[List[int]] = None, **_) -> Dict[str, Any]:
        despacho = {
            "n1": self._n1, "n2": self._n2, "dyson": self._dyson, "remark": self._remark,
            "jack": self._jack, "pieri": self._pieri, "orthogonality": self._orthogonality,
        }
        try:
            if kind not in despacho:
                raise ParametroInvalidoError(f"Oráculo desconhecido '{kind}', use um de {TIPOS}")
            resultado = despacho[kind](gamma=gamma, n=n, tol=tol, N=N, p=p, mu=mu or [],
                                       lam=lam or [], nu=nu or [])
        except ChaosError as e:
            return self.falha(e)
        resultado = {"kind": kind, "gamma": gamma, **resultado}
        principal = resultado.get("value")
        mensagem = f"oráculo {kind}: {principal:.12g}" if principal is not None else f"oráculo {kind} concluído"
        cabecalho = tuple(k for k, v in resultado.items() if not isinstance(v, dict))
        return self.sucesso(mensagem, resultado,
                            tabela=(cabecalho, [[resultado[k] for k in cabecalho]]))

    def get_tool_definition(self) -> Dict[str, Any]:
        inteiros = {"type": "array", "items": {"type": "integer", "minimum": 0}}
        return self._definicao("oracle", {
            "kind": {"type": "string", "enum": list(TIPOS)},
            "gamma": {"type": "number", "exclusiveMinimum": 0},
            "n": {"type": "integer", "default": 0},
            "tol": {"type": "number", "exclusiveMinimum": 0, "default": 1e-10},
            "N": {"type": "integer", "minimum": 1, "maximum": 4, "default": 2},
            "p": {"type": "integer", "minimum": 0, "default": 1},
            "mu": inteiros,
            "lam": inteiros,
            "nu": inteiros,
        }, ["kind", "gamma"])
