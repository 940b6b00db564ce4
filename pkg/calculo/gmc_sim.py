"""
Simulação Monte Carlo do caos multiplicativo imaginário no círculo.

O campo é truncado espectralmente em K modos, avaliado numa grade de G pontos
por FFT inversa, e cada amostra usa um fluxo Philox próprio derivado de
(seed, sample_id); o resultado não depende do número de threads.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import stats

from .erros import ParametroInvalidoError
from .moments import MixedExponents, kappa
from .numerics import batch_means, harmonic_number

logger = logging.getLogger(__name__)

LIMITE_EXPOENTE = 700.0
LOTES_PADRAO = 32
MIN_AMOSTRAS_ESTIMATIVA = 100
MARGEM_MOLIFICACAO = 16


@dataclass(frozen=True)
class SimConfig:
    beta: float
    K: int
    G: int
    M: int
    seed: int
    n_list: Tuple[int, ...]
    threads: int = 1
    batches: int = LOTES_PADRAO

    def __post_init__(self):
        object.__setattr__(self, "n_list", tuple(int(n) for n in self.n_list))
        if not 0 <= self.beta < 1:
            raise ParametroInvalidoError(f"β = {self.beta} fora de [0, 1)")
        if self.K < 1:
            raise ParametroInvalidoError(f"K deve ser positivo, recebido {self.K}")
        if self.G < 2 or self.G & (self.G - 1):
            raise ParametroInvalidoError(f"G = {self.G} não é potência de dois")
        if self.G < 8 * self.K:
            raise ParametroInvalidoError(f"G = {self.G} abaixo de 8K = {8 * self.K}")
        if self.M < 2:
            raise ParametroInvalidoError(f"M deve ser ao menos 2, recebido {self.M}")
        if not 0 <= self.seed < 2 ** 64:
            raise ParametroInvalidoError(f"seed fora de 64 bits: {self.seed}")
        if not self.n_list:
            raise ParametroInvalidoError("n_list vazia")
        limite = self.K // MARGEM_MOLIFICACAO
        fora = [n for n in self.n_list if abs(n) > limite]
        if fora:
            raise ParametroInvalidoError(
                f"Índices {fora} acima de K/{MARGEM_MOLIFICACAO} = {limite}"
            )
        if self.threads < 1:
            raise ParametroInvalidoError(f"threads deve ser positivo, recebido {self.threads}")

    @property
    def gamma(self) -> float:
        return self.beta * self.beta / 2.0

    @property
    def H_K(self) -> float:
        return harmonic_number(self.K)

    def with_indices(self, n_list: Sequence[int]) -> "SimConfig":
        return SimConfig(self.beta, self.K, self.G, self.M, self.seed, tuple(n_list),
                         self.threads, self.batches)


@dataclass(frozen=True)
class FieldSample:
    values: np.ndarray
    H_K: float
    sample_id: int = 0


@dataclass(frozen=True)
class MomentEstimate:
    label: str
    value: complex
    se_re: float
    se_im: float
    M_effective: int

    @property
    def stderr(self) -> float:
        return math.hypot(self.se_re, self.se_im)

    def z_score(self, alvo: complex = 0.0) -> float:
        """Maior |z| entre as partes real e imaginária; partes sem variância só contam se diferirem"""
        desvio = self.value - alvo
        z = 0.0
        for d, se in ((desvio.real, self.se_re), (desvio.imag, self.se_im)):
            if se > 0:
                z = max(z, abs(d) / se)
            elif abs(d) > 1e-12 * max(1.0, abs(alvo)):
                z = math.inf
        return z

    def to_json(self) -> Dict[str, float]:
        return {"label": self.label, "re": self.value.real, "im": self.value.imag,
                "se_re": self.se_re, "se_im": self.se_im, "M": self.M_effective}


@dataclass(frozen=True)
class MomentPattern:
    """Produto Π_i Z_{n_i} ou seu conjugado, conforme `conj[i]`"""

    label: str
    indices: Tuple[int, ...]
    conj: Tuple[bool, ...]

    def __post_init__(self):
        if len(self.indices) != len(self.conj) or not self.indices:
            raise ParametroInvalidoError(f"Padrão '{self.label}' malformado")

    @classmethod
    def abs_power(cls, n: int, N: int) -> "MomentPattern":
        return cls(f"|Z_{n}|^{2 * N}", (n,) * (2 * N), (False,) * N + (True,) * N)

    @classmethod
    def square(cls, n: int) -> "MomentPattern":
        return cls(f"Z_{n}^2", (n, n), (False, False))

    @classmethod
    def cross(cls, n: int, m: int) -> "MomentPattern":
        return cls(f"Z_{n}·conj(Z_{m})", (n, m), (False, True))

    @classmethod
    def from_mixed(cls, e: MixedExponents, n: int) -> "MomentPattern":
        indices, conj = [], []
        for j, (lj, mj) in enumerate(zip(e.l, e.m)):
            indices += [n + j] * (lj + mj)
            conj += [False] * lj + [True] * mj
        return cls(f"M_{n}({list(e.l)},{list(e.m)})", tuple(indices), tuple(conj))


@dataclass
class SimulationRun:
    """Coeficientes c_n de todas as amostras, colunas na ordem de `config.n_list`"""

    config: SimConfig
    coeffs: np.ndarray
    _colunas: Dict[int, int] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._colunas = {n: i for i, n in enumerate(self.config.n_list)}

    def column(self, n: int) -> np.ndarray:
        if n not in self._colunas:
            raise ParametroInvalidoError(f"Índice {n} não foi registrado na simulação")
        return self.coeffs[:, self._colunas[n]]

    def rescaled(self, n: int) -> np.ndarray:
        """Z_n = n^{(1−β²)/2} c_n"""
        fator = abs(n) ** ((1.0 - self.config.beta ** 2) / 2.0) if n else 1.0
        return fator * self.column(n)

    def rows(self) -> Iterator[Tuple[int, int, float, float]]:
        for amostra in range(self.coeffs.shape[0]):
            for n, coluna in self._colunas.items():
                c = self.coeffs[amostra, coluna]
                yield amostra, n, float(c.real), float(c.imag)


def sample_stream(seed: int, sample_id: int) -> np.random.Generator:
    """Subfluxo contador da amostra `sample_id`; independe da ordem de execução"""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(sample_id,))))


def sample_field(config: SimConfig, stream: np.random.Generator, sample_id: int = 0) -> FieldSample:
    """X(θ_j) = Σ_{k≤K} k^{−1/2}(A_k cos kθ_j + B_k sin kθ_j) por uma irfft"""
    k = np.arange(1, config.K + 1, dtype=np.float64)
    A = stream.standard_normal(config.K)
    B = stream.standard_normal(config.K)
    espectro = np.zeros(config.G // 2 + 1, dtype=np.complex128)
    espectro[1:config.K + 1] = (config.G / 2.0) * (A - 1j * B) / np.sqrt(k)
    valores = np.fft.irfft(espectro, n=config.G)
    return FieldSample(valores, config.H_K, sample_id)


def measure_density(campo: FieldSample, beta: float) -> np.ndarray:
    """exp(iβX + (β²/2)H_K) na grade"""
    expoente = 0.5 * beta * beta * campo.H_K
    if expoente > LIMITE_EXPOENTE:
        raise ParametroInvalidoError(
            f"Renormalização e^{expoente:.1f} estoura o ponto flutuante"
        )
    return np.exp(1j * beta * campo.values) * math.exp(expoente)


def fourier_coeffs(densidade: np.ndarray, n_list: Sequence[int]) -> np.ndarray:
    """c_n ≈ (2π/G) Σ_j e^{inθ_j} densidade(θ_j), lidos de uma única FFT"""
    G = densidade.size
    transformada = np.fft.ifft(densidade)
    return 2.0 * math.pi * transformada[np.mod(np.asarray(n_list), G)]


def _amostra(config: SimConfig, sample_id: int) -> np.ndarray:
    campo = sample_field(config, sample_stream(config.seed, sample_id), sample_id)
    return fourier_coeffs(measure_density(campo, config.beta), config.n_list)


def simulate(config: SimConfig) -> SimulationRun:
    logger.info("[SIM] β=%g K=%d G=%d M=%d seed=%d threads=%d n=%s",
                config.beta, config.K, config.G, config.M, config.seed,
                config.threads, list(config.n_list))
    with ThreadPoolExecutor(max_workers=config.threads) as executor:
        linhas = list(executor.map(lambda i: _amostra(config, i), range(config.M)))
    return SimulationRun(config, np.vstack(linhas))


def _como_execucao(fonte: Union[SimConfig, SimulationRun]) -> SimulationRun:
    return fonte if isinstance(fonte, SimulationRun) else simulate(fonte)


def _produto(run: SimulationRun, padrao: MomentPattern) -> np.ndarray:
    valores = np.ones(run.coeffs.shape[0], dtype=np.complex128)
    for n, conjugado in zip(padrao.indices, padrao.conj):
        z = run.rescaled(n)
        valores = valores * (np.conj(z) if conjugado else z)
    return valores


def _estimar(label: str, valores: np.ndarray, lotes: int) -> MomentEstimate:
    media, se_re, se_im = batch_means(valores, lotes)
    return MomentEstimate(label, complex(media), se_re, se_im, int(valores.size))


def estimate_moments(fonte: Union[SimConfig, SimulationRun],
                     padroes: Sequence[MomentPattern]) -> List[MomentEstimate]:
    run = _como_execucao(fonte)
    if run.coeffs.shape[0] < MIN_AMOSTRAS_ESTIMATIVA:
        raise ParametroInvalidoError(
            f"Estimativas exigem M ≥ {MIN_AMOSTRAS_ESTIMATIVA}, recebido {run.coeffs.shape[0]}"
        )
    return [_estimar(p.label, _produto(run, p), run.config.batches) for p in padroes]


def kurtosis_ratio(fonte: Union[SimConfig, SimulationRun], n: int) -> Tuple[float, float]:
    """E|Z|⁴/(E|Z|²)² com erro padrão pelo método delta sobre médias de lotes"""
    run = _como_execucao(fonte)
    modulo2 = np.abs(run.rescaled(n)) ** 2
    lotes = max(2, min(run.config.batches, modulo2.size))
    partes = np.array_split(modulo2, lotes)
    m2 = np.array([np.mean(p) for p in partes])
    m4 = np.array([np.mean(p ** 2) for p in partes])
    a, b = float(np.mean(modulo2)), float(np.mean(modulo2 ** 2))
    razao = b / (a * a)
    gradiente = np.array([-2.0 * b / a ** 3, 1.0 / (a * a)])
    covariancia = np.cov(np.vstack([m2, m4])) / lotes
    erro = math.sqrt(max(float(gradiente @ covariancia @ gradiente), 0.0))
    return razao, erro


def fourier_dimension_estimate(fonte: Union[SimConfig, SimulationRun],
                               n_range: Optional[Sequence[int]] = None) -> Tuple[float, float]:
    """Inclinação de log E|c_n|² contra log n; a esperada é −(1−β²)"""
    run = _como_execucao(fonte)
    indices = [n for n in (n_range or run.config.n_list) if n > 0]
    if len(indices) < 5:
        raise ParametroInvalidoError("Regressão exige ao menos 5 índices diádicos")
    medias = [float(np.mean(np.abs(run.column(n)) ** 2)) for n in indices]
    ajuste = stats.linregress(np.log(indices), np.log(medias))
    return float(ajuste.slope), float(ajuste.stderr)


@dataclass
class WhiteNoiseReport:
    kappa: float
    indices: Tuple[int, ...]
    diagonal: List[MomentEstimate]
    z_diagonal: List[float]
    z_off_diagonal: List[float]
    z_pseudo: List[float]

    def passed(self, limite: float = 3.0) -> bool:
        return all(abs(z) <= limite for z in self.z_diagonal + self.z_off_diagonal + self.z_pseudo)

    def to_json(self) -> Dict:
        return {
            "kappa": self.kappa,
            "indices": list(self.indices),
            "diagonal": [d.to_json() for d in self.diagonal],
            "z_diagonal": self.z_diagonal,
            "z_off_diagonal": self.z_off_diagonal,
            "z_pseudo": self.z_pseudo,
        }


def white_noise_marginals_test(config: SimConfig, n: int, k: int,
                               run: Optional[SimulationRun] = None) -> WhiteNoiseReport:
    """Covariância empírica de (Z_n, …, Z_{n+k}) contra κ(β)·Id, pseudo-covariância contra 0"""
    if not 0 <= k <= 8:
        raise ParametroInvalidoError(f"k = {k} fora de [0, 8]")
    indices = tuple(range(n, n + k + 1))
    if run is None or any(i not in run.config.n_list for i in indices):
        run = simulate(config.with_indices(indices))
    alvo = kappa(config.beta)
    lotes = config.batches
    diagonal, z_diag, z_fora, z_pseudo = [], [], [], []
    for a in indices:
        za = run.rescaled(a)
        for b in indices:
            if b < a:
                continue
            zb = run.rescaled(b)
            pseudo = _estimar(f"Z_{a}·Z_{b}", za * zb, lotes)
            z_pseudo.append(pseudo.z_score(0.0))
            if a == b:
                est = _estimar(f"|Z_{a}|^2", np.abs(za) ** 2, lotes)
                diagonal.append(est)
                z_diag.append(est.z_score(alvo))
            else:
                z_fora.append(_estimar(f"Z_{a}·conj(Z_{b})", za * np.conj(zb), lotes).z_score(0.0))
    relatorio = WhiteNoiseReport(alvo, indices, diagonal, z_diag, z_fora, z_pseudo)
    logger.info("[SIM] ruído branco n=%d k=%d max|z| diag=%.2f fora=%.2f pseudo=%.2f",
                n, k, max(map(abs, z_diag)), max(map(abs, z_fora), default=0.0),
                max(map(abs, z_pseudo)))
    return relatorio


def isotropy_report(fonte: Union[SimConfig, SimulationRun], n: int,
                    ordens: Sequence[int] = (1, 2, 3, 4)) -> Dict[int, MomentEstimate]:
    """E[e^{ik arg c_n}] para cada k; a fase de c_n é uniforme"""
    run = _como_execucao(fonte)
    fase = np.angle(run.column(n))
    return {k: _estimar(f"e^{{i{k}arg c_{n}}}", np.exp(1j * k * fase), run.config.batches)
            for k in ordens}
