import logging
from typing import Any, Dict, List

from calculo.erros import ChaosError
from calculo.gmc_sim import (MomentPattern, SimConfig, estimate_moments,
                             fourier_dimension_estimate, isotropy_report,
                             kurtosis_ratio, simulate)
from calculo.moments import kappa
from utils.config import threads_padrao
from .base_agent import BaseAgent

logger = logging.getLogger(__name__)

CABECALHO_AMOSTRAS = ("sample_id", "n", "re", "im")
CABECALHO_RESUMO = ("n", "E_abs2_Z", "se", "kurtosis", "kurtosis_se", "E_Z2_re", "E_Z2_im")


class SimulateAgent(BaseAgent):
    """Agente da simulação Monte Carlo do caos imaginário truncado em K modos"""

    def __init__(self):
        super().__init__(
            nome="Simulate Agent",
            descricao="Amostra o campo molificado, calcula c_n por FFT e estima momentos com erro padrão"
        )

    def processar(self, beta: float, K: int, grid: int, samples: int, seed: int, n: List[int],
                  threads: int = 1, batches: int = 32, estimate: bool = True, **_) -> Dict[str, Any]:
        try:
            config = SimConfig(beta, K, grid, samples, seed, tuple(n), threads, batches)
            run = simulate(config)
            resumo: Dict[str, Any] = {
                "config": {"beta": beta, "K": K, "G": grid, "M": samples, "seed": seed,
                           "n_list": list(config.n_list), "batches": batches},
                "H_K": config.H_K,
                "kappa": kappa(beta) if beta > 0 else None,
            }
            linhas = []
            if estimate:
                positivos = [i for i in config.n_list if i > 0]
                for indice in positivos:
                    segundo, quadrado = estimate_moments(
                        run, [MomentPattern.abs_power(indice, 1), MomentPattern.square(indice)])
                    razao, erro_razao = kurtosis_ratio(run, indice)
                    linhas.append([indice, segundo.value.real, segundo.se_re, razao, erro_razao,
                                   quadrado.value.real, quadrado.value.imag])
                resumo["estimates"] = [dict(zip(CABECALHO_RESUMO, linha)) for linha in linhas]
                if positivos:
                    resumo["isotropy"] = {str(k): est.to_json()
                                          for k, est in isotropy_report(run, positivos[0]).items()}
                if len(positivos) >= 5:
                    inclinacao, erro = fourier_dimension_estimate(run)
                    resumo["fourier_slope"] = {"slope": inclinacao, "stderr": erro,
                                               "expected": -(1.0 - beta * beta)}
        except ChaosError as e:
            return self.falha(e)

        return self.sucesso(
            f"{samples} amostras simuladas (K={K}, G={grid}, seed={seed})",
            resumo,
            tabela=(CABECALHO_RESUMO, linhas),
            amostras=(CABECALHO_AMOSTRAS, run.rows()),
        )

    def get_tool_definition(self) -> Dict[str, Any]:
        return self._definicao("simulate", {
            "beta": {"type": "number"},
            "K": {"type": "integer", "minimum": 1},
            "grid": {"type": "integer", "minimum": 2},
            "samples": {"type": "integer", "minimum": 2},
            "seed": {"type": "integer", "minimum": 0, "maximum": 2 ** 64 - 1},
            "n": {"type": "array", "items": {"type": "integer"}, "minItems": 1},
            "threads": {"type": "integer", "minimum": 1, "default": threads_padrao()},
            "batches": {"type": "integer", "minimum": 2, "default": 32},
            "estimate": {"type": "boolean", "default": True},
        }, ["beta", "K", "grid", "samples", "seed", "n"])
