"""
Utilitários numéricos compartilhados: valores em escala logarítmica, somas
compensadas, razões de Γ e nós de Gauss-Legendre graduados.
"""

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np
from scipy import special

from .erros import ParametroInvalidoError

BLOCO_SOMA = 4096


@dataclass(frozen=True)
class LogValue:
    """Quantidade estritamente positiva guardada pelo logaritmo natural"""

    log_magnitude: float

    @property
    def value(self) -> float:
        return math.exp(self.log_magnitude)

    def __mul__(self, other: "LogValue") -> "LogValue":
        return LogValue(self.log_magnitude + other.log_magnitude)

    def __truediv__(self, other: "LogValue") -> "LogValue":
        return LogValue(self.log_magnitude - other.log_magnitude)

    def __pow__(self, k: float) -> "LogValue":
        return LogValue(self.log_magnitude * k)

    def __float__(self) -> float:
        return self.value


def compensated_sum(values: Iterable[float]) -> float:
    return math.fsum(values)


def compensated_cumsum(values: np.ndarray, bloco: int = BLOCO_SOMA) -> np.ndarray:
    """Soma acumulada por blocos: cumsum dentro do bloco, fsum entre blocos.

    A ordem de redução depende só de `bloco`, então o resultado é reprodutível.
    """
    values = np.asarray(values, dtype=np.float64)
    out = np.empty_like(values)
    carry = 0.0
    parciais = []
    for inicio in range(0, values.size, bloco):
        parte = values[inicio:inicio + bloco]
        out[inicio:inicio + bloco] = carry + np.cumsum(parte)
        parciais.append(math.fsum(parte))
        carry = math.fsum(parciais)
    return out


def log_F(x, gamma: float):
    """log Γ(x)/Γ(x+1−γ), vetorizado; poch mantém a precisão para x grande"""
    return -np.log(special.poch(x, 1.0 - gamma))


def F_values(x, gamma: float):
    return 1.0 / special.poch(x, 1.0 - gamma)


def log_gamma_step(a, delta):
    """log Γ(a+δ)/Γ(a) para δ ∈ {−1, 0, 1}, sem cancelamento de gammaln grandes"""
    a = np.asarray(a, dtype=np.float64)
    delta = np.asarray(delta)
    out = np.zeros(np.broadcast(a, delta).shape)
    up = delta == 1
    down = delta == -1
    out = np.where(up, np.log(np.where(up, a, 1.0)), out)
    out = np.where(down, -np.log(np.where(down, a - 1.0, 1.0)), out)
    return out


def graded_nodes(ordem: int, niveis: int, razao: float = 0.25,
                 pontas: str = "ambas") -> Tuple[np.ndarray, np.ndarray]:
    """Nós e pesos compostos de Gauss-Legendre em [0, 1], graduados geometricamente.

    `pontas` escolhe onde refinar: "esquerda", "direita" ou "ambas".
    """
    x, w = np.polynomial.legendre.leggauss(ordem)
    x = 0.5 * (x + 1.0)
    w = 0.5 * w

    def _lado(comprimento: float) -> Tuple[np.ndarray, np.ndarray]:
        bordas = [0.0] + [comprimento * razao ** k for k in range(niveis, -1, -1)]
        nos, pesos = [], []
        for a, b in zip(bordas[:-1], bordas[1:]):
            nos.append(a + (b - a) * x)
            pesos.append((b - a) * w)
        return np.concatenate(nos), np.concatenate(pesos)

    if pontas == "esquerda":
        return _lado(1.0)
    if pontas == "direita":
        nos, pesos = _lado(1.0)
        return (1.0 - nos)[::-1], pesos[::-1]
    if pontas != "ambas":
        raise ParametroInvalidoError(f"Graduação desconhecida: {pontas}")
    nos, pesos = _lado(0.5)
    return np.concatenate([nos, (1.0 - nos)[::-1]]), np.concatenate([pesos, pesos[::-1]])


def geometric_tail(parciais: Sequence[float]) -> Optional[float]:
    """Extrapolação geométrica da cauda a partir de três somas parciais consecutivas.

    Devolve None quando os incrementos não decaem (razão fora de (0, 1)).
    """
    s1, s2, s3 = parciais[-3:]
    d1, d2 = s2 - s1, s3 - s2
    if d1 <= 0 or d2 < 0:
        return None
    razao = d2 / d1
    if not 0 <= razao < 1:
        return None
    return d2 * razao / (1.0 - razao)


def batch_means(amostras: np.ndarray, lotes: int = 32) -> Tuple[complex, float, float]:
    """Média e erro padrão por médias de lotes contíguos.

    Devolve (estimativa, erro da parte real, erro da parte imaginária).
    """
    amostras = np.asarray(amostras)
    if amostras.size < 2:
        raise ParametroInvalidoError("Médias por lotes exigem ao menos 2 amostras")
    lotes = max(2, min(lotes, amostras.size))
    medias = np.array([np.mean(parte) for parte in np.array_split(amostras, lotes)])
    escala = math.sqrt(lotes)
    erro_re = float(np.std(medias.real, ddof=1)) / escala
    erro_im = float(np.std(medias.imag, ddof=1)) / escala if np.iscomplexobj(medias) else 0.0
    return np.mean(amostras), erro_re, erro_im


def harmonic_number(K: int) -> float:
    return math.fsum(1.0 / k for k in range(1, K + 1))
