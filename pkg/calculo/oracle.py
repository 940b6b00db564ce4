"""
Oráculos independentes para conferir as séries.

- Quadraturas das integrais de gás de Coulomb (N = 1 e N = 2), da constante de
  Dyson e da ortogonalidade no caso N = 2.
- Construção simbólica dos polinômios de Jack na base monomial, com aritmética
  exata de `Fraction`, e a expansão de Pieri e_p·P_μ por retrossubstituição.
"""

import logging
import math
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterator, List, Mapping, Sequence, Tuple, Union

import numpy as np
from scipy import integrate

from .erros import JackOracleError, OrcamentoExcedidoError, ParametroInvalidoError, QuadraturaError
from .numerics import compensated_sum, graded_nodes
from .partitions import Partition, enumerate_shapes, enumerate_vertical_strips, new_partition

logger = logging.getLogger(__name__)

GRAU_MAXIMO = 8
N_MAXIMO_SIMBOLICO = 4
NIVEIS_N2 = ((8, 6), (12, 8), (16, 8))
ORCAMENTO_N2 = 300_000_000
DOIS_PI = 2.0 * math.pi

Escalar = Union[Fraction, float]


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_estimate: float
    evaluations: int = 0

    def __float__(self) -> float:
        return self.value


def _validar_gamma(gamma: float) -> None:
    if not 0 < gamma < 0.5:
        raise ParametroInvalidoError(f"γ = {gamma} fora de (0, ½)")


def _sinc_meio(u):
    """2 sin(u/2) / u, finito em u = 0"""
    return np.sinc(u / DOIS_PI)


def _quad(f, a, b, tol, **kwargs) -> Tuple[float, float]:
    valor, erro = integrate.quad(f, a, b, epsabs=0.0, epsrel=max(1e-13, tol * 1e-3),
                                 limit=400, **kwargs)
    return valor, erro


# ---------------------------------------------------------------------------
# quadraturas
# ---------------------------------------------------------------------------

def quadrature_moment_N1(n: int, gamma: float, tol: float = 1e-10) -> QuadratureResult:
    """E|c_n|² = 2π ∫ e^{inu} |e^{iu}−1|^{−2γ} du.

    A singularidade |u|^{−2γ} em 0 vai para o peso algébrico do primeiro
    pedaço; o resto de [0, π] é cortado nos zeros de cos(nu).
    """
    _validar_gamma(gamma)
    if tol < 1e-10:
        raise ParametroInvalidoError(f"tol = {tol} abaixo de 1e-10")
    n = abs(int(n))
    bordas = [0.0]
    if n > 0:
        bordas += [(k + 0.5) * math.pi / n for k in range(n) if (k + 0.5) * math.pi / n < math.pi]
    bordas.append(math.pi)

    def _singular(u):
        return math.cos(n * u) * _sinc_meio(u) ** (-2.0 * gamma)

    def _regular(u):
        return math.cos(n * u) * (2.0 * math.sin(u / 2.0)) ** (-2.0 * gamma)

    pedacos, erros = [], []
    valor, erro = _quad(_singular, bordas[0], bordas[1], tol, weight="alg", wvar=(-2.0 * gamma, 0.0))
    pedacos.append(valor)
    erros.append(erro)
    for a, b in zip(bordas[1:-1], bordas[2:]):
        valor, erro = _quad(_regular, a, b, tol)
        pedacos.append(valor)
        erros.append(erro)

    total = 2.0 * DOIS_PI * compensated_sum(pedacos)
    erro_total = 2.0 * DOIS_PI * compensated_sum(erros)
    logger.debug("[ORACULO] N=1 n=%d γ=%g valor=%.15g erro=%.2e pedaços=%d",
                 n, gamma, total, erro_total, len(pedacos))
    if erro_total > tol * abs(total):
        raise QuadraturaError(
            f"Quadratura N=1 não convergiu: erro {erro_total:.2e} para valor {total:.6g}",
            {"valor": total, "erro": erro_total},
        )
    return QuadratureResult(total, erro_total, len(pedacos))


def _coulomb_N2(n: int, gamma: float, niveis: int, ordem: int) -> Tuple[float, int]:
    """Integral 3-D com θ'_2 = 0 fixo: variáveis x = θ_1, y = θ_2, z = θ'_1"""
    u, w = graded_nodes(ordem, niveis, pontas="ambas")
    g2 = 2.0 * gamma

    def _dist(a):
        return np.abs(2.0 * np.sin(a / 2.0))

    z_nos, z_pesos = DOIS_PI * u, DOIS_PI * w
    parciais = []
    avaliacoes = 0
    for z, wz in zip(z_nos, z_pesos):
        # x em [0, z] e [z, 2π]
        x = np.concatenate([z * u, z + (DOIS_PI - z) * u])
        wx = np.concatenate([z * w, (DOIS_PI - z) * w])
        baixo, alto = np.minimum(x, z), np.maximum(x, z)
        bordas = [np.zeros_like(x), baixo, alto, np.full_like(x, DOIS_PI)]
        y = np.concatenate([a[:, None] + (b - a)[:, None] * u[None, :]
                            for a, b in zip(bordas[:-1], bordas[1:])], axis=1)
        wy = np.concatenate([(b - a)[:, None] * w[None, :]
                             for a, b in zip(bordas[:-1], bordas[1:])], axis=1)
        X = x[:, None]
        integrando = (np.cos(n * (X + y - z))
                      * _dist(X - y) ** g2 * _dist(z) ** g2
                      / (_dist(X - z) * _dist(X) * _dist(y - z) * _dist(y)) ** g2)
        interno = np.sum(integrando * wy, axis=1)
        parciais.append(wz * float(np.dot(interno, wx)))
        avaliacoes += integrando.size
    return DOIS_PI * compensated_sum(parciais), avaliacoes


def quadrature_moment_N2(n: int, gamma: float, tol: float = 1e-3,
                         max_avaliacoes: int = ORCAMENTO_N2) -> QuadratureResult:
    """E|c_n|⁴ pela integral de gás de Coulomb com N = 2, reduzida a 3-D por rotação.

    Gauss-Legendre composto graduado em direção a cada conjunto de coincidência;
    o erro é a diferença entre dois refinamentos sucessivos.
    """
    _validar_gamma(gamma)
    n = abs(int(n))
    anterior = None
    gasto = 0
    for niveis, ordem in NIVEIS_N2:
        pontos = 2 * (niveis + 1) * ordem
        custo = pontos * (2 * pontos) * (3 * pontos)
        if gasto + custo > max_avaliacoes:
            break
        valor, avaliacoes = _coulomb_N2(n, gamma, niveis, ordem)
        gasto += avaliacoes
        logger.info("[ORACULO] N=2 n=%d γ=%g níveis=%d ordem=%d valor=%.10g",
                    n, gamma, niveis, ordem, valor)
        if anterior is not None:
            erro = abs(valor - anterior)
            if erro <= tol * abs(valor):
                return QuadratureResult(valor, erro, gasto)
        anterior = valor
    raise OrcamentoExcedidoError(
        f"Quadratura N=2 esgotou o orçamento de {max_avaliacoes} avaliações sem atingir tol={tol:g}",
        {"melhor_valor": anterior, "avaliacoes": gasto},
    )


def dyson_norm_check(gamma: float, tol: float = 1e-10) -> float:
    """(1/(2π)²) ∫∫ |e^{iθ_1}−e^{iθ_2}|^{2γ} dθ = Γ(1+2γ)/Γ(1+γ)² por quadratura"""
    _validar_gamma(gamma)

    def _f(u):
        return _sinc_meio(u) ** (2.0 * gamma)

    valor, erro = _quad(_f, 0.0, math.pi, tol, weight="alg", wvar=(2.0 * gamma, 0.0))
    if erro > tol * abs(valor):
        raise QuadraturaError(f"Quadratura de Dyson não convergiu: erro {erro:.2e}")
    return 2.0 * valor / DOIS_PI


def remark_integral_n1(gamma: float, tol: float = 1e-10) -> float:
    """2π ∫_ℝ e^{it}|t|^{−2γ} dt por quadratura oscilatória (peso de Fourier na cauda)"""
    _validar_gamma(gamma)
    perto, erro_perto = integrate.quad(math.cos, 0.0, 1.0, weight="alg",
                                       wvar=(-2.0 * gamma, 0.0), epsabs=0.0, epsrel=1e-12)
    longe, erro_longe = integrate.quad(lambda t: t ** (-2.0 * gamma), 1.0, np.inf,
                                       weight="cos", wvar=1.0, epsabs=1e-13)
    valor = 2.0 * DOIS_PI * (perto + longe)
    erro = 2.0 * DOIS_PI * (erro_perto + erro_longe)
    if erro > tol * abs(valor):
        raise QuadraturaError(f"Integral oscilatória não convergiu: erro {erro:.2e}")
    return valor


# ---------------------------------------------------------------------------
# polinômios simétricos exatos
# ---------------------------------------------------------------------------

def _como_fracao(gamma: Union[Fraction, float, int, str]) -> Fraction:
    if isinstance(gamma, Fraction):
        return gamma
    if isinstance(gamma, (int, str)):
        return Fraction(gamma)
    return Fraction(repr(float(gamma)))


@lru_cache(maxsize=None)
def _composicoes(parts: Tuple[int, ...]) -> Tuple[Tuple[int, ...], ...]:
    """Permutações distintas do vetor de expoentes: os monômios de m_λ"""
    k = max(parts, default=0)
    multiplicidades = [sum(1 for x in parts if x == r) for r in range(1, k + 1)]
    return tuple(s.entries for s in enumerate_shapes(len(parts), multiplicidades))


def _decrescente(b: Sequence[int]) -> bool:
    return all(b[i] >= b[i + 1] for i in range(len(b) - 1))


@dataclass(frozen=True)
class SymmetricPolynomial:
    """Combinação de funções simétricas monomiais m_λ em N variáveis"""

    N: int
    coeffs: Mapping[Partition, Escalar] = field(default_factory=dict)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, lam: Partition) -> Escalar:
        return self.coeffs.get(lam, 0)

    def _com(self, coeffs: Dict[Partition, Escalar]) -> "SymmetricPolynomial":
        return SymmetricPolynomial(self.N, {k: v for k, v in coeffs.items() if v != 0})

    def __add__(self, other: "SymmetricPolynomial") -> "SymmetricPolynomial":
        soma = dict(self.coeffs)
        for lam, c in other.coeffs.items():
            soma[lam] = soma.get(lam, 0) + c
        return self._com(soma)

    def __sub__(self, other: "SymmetricPolynomial") -> "SymmetricPolynomial":
        return self + other.scale(-1)

    def scale(self, c: Escalar) -> "SymmetricPolynomial":
        return self._com({lam: c * v for lam, v in self.coeffs.items()})

    def multiply(self, other: "SymmetricPolynomial") -> "SymmetricPolynomial":
        """Produto na base monomial; o coeficiente de m_κ é o de x^κ com κ decrescente"""
        produto: Dict[Tuple[int, ...], Escalar] = defaultdict(int)
        for lam, a in self.coeffs.items():
            for mu, b in other.coeffs.items():
                for e1 in _composicoes(lam.parts):
                    for e2 in _composicoes(mu.parts):
                        soma = tuple(x + y for x, y in zip(e1, e2))
                        if _decrescente(soma):
                            produto[soma] += a * b
        return self._com({Partition(k): v for k, v in produto.items()})

    def evaluate(self, x: Sequence[complex]) -> complex:
        total = 0
        for lam, c in self.coeffs.items():
            for b in _composicoes(lam.parts):
                termo = complex(c)
                for xi, bi in zip(x, b):
                    termo *= xi ** bi
                total += termo
        return total

    def value_at_ones(self) -> Escalar:
        return sum(c * len(_composicoes(lam.parts)) for lam, c in self.coeffs.items())

    def terms(self) -> List[Tuple[Tuple[int, ...], float]]:
        """Lista (expoentes, coeficiente) de todos os monômios, para avaliação numérica"""
        return [(b, float(c)) for lam, c in self.coeffs.items() for b in _composicoes(lam.parts)]


def _particoes_do_grau(grau: int, N: int) -> Iterator[Tuple[int, ...]]:
    """Partições de `grau` com no máximo N partes, em ordem lexicográfica decrescente"""
    def _gerar(resto: int, teto: int, linhas: int) -> Iterator[Tuple[int, ...]]:
        if linhas == 0:
            if resto == 0:
                yield ()
            return
        for cabeca in range(min(resto, teto), -1, -1):
            for cauda in _gerar(resto - cabeca, cabeca, linhas - 1):
                yield (cabeca,) + cauda
    yield from _gerar(grau, grau, N)


def _aplicar_operador(mu: Tuple[int, ...], alpha: Fraction) -> Dict[Tuple[int, ...], Fraction]:
    """Coeficientes d_{μν} de D m_μ = Σ_ν d_{μν} m_ν.

    D = (α/2) Σ_i x_i² ∂_i² + Σ_{i<j} (x_i² ∂_i − x_j² ∂_j)/(x_i − x_j).
    Para b_i > b_j, com q = b_j e k = b_i − b_j, o par {x^b, x^{b'}} vai em
    q(x^b + x^{b'}) + k Σ_{t=0}^{k} x^{b − t e_i + t e_j}; se b_i = b_j, em b_i x^b.
    """
    resultado: Dict[Tuple[int, ...], Fraction] = defaultdict(Fraction)
    N = len(mu)

    def _acumular(b, c):
        if _decrescente(b):
            resultado[tuple(b)] += c

    for b in _composicoes(mu):
        _acumular(b, alpha / 2 * sum(x * (x - 1) for x in b))
        for i in range(N):
            for j in range(i + 1, N):
                bi, bj = b[i], b[j]
                if bi == bj:
                    _acumular(b, Fraction(bi))
                elif bi > bj:
                    k = bi - bj
                    trocado = list(b)
                    trocado[i], trocado[j] = bj, bi
                    _acumular(b, Fraction(bj))
                    _acumular(trocado, Fraction(bj))
                    for t in range(k + 1):
                        c = list(b)
                        c[i] -= t
                        c[j] += t
                        _acumular(c, Fraction(k))
    return {k: v for k, v in resultado.items() if v != 0}


@lru_cache(maxsize=None)
def _jack_exato(parts: Tuple[int, ...], gamma: Fraction) -> Dict[Tuple[int, ...], Fraction]:
    N = len(parts)
    alpha = 1 / gamma
    base = [nu for nu in _particoes_do_grau(sum(parts), N) if nu <= parts]
    operador = {nu: _aplicar_operador(nu, alpha) for nu in base}
    autovalor = operador[parts].get(parts, Fraction(0))
    u: Dict[Tuple[int, ...], Fraction] = {parts: Fraction(1)}
    for nu in base:
        if nu == parts:
            continue
        lado_direito = sum((c * operador[mu].get(nu, 0) for mu, c in u.items()), Fraction(0))
        diferenca = autovalor - operador[nu].get(nu, Fraction(0))
        if diferenca == 0:
            if lado_direito != 0:
                raise JackOracleError(
                    f"Colisão de autovalores entre {list(parts)} e {list(nu)} com acoplamento não nulo",
                    {"lambda": list(parts), "nu": list(nu)},
                )
            continue
        valor = lado_direito / diferenca
        if valor != 0:
            u[nu] = valor
    return u


def jack_monomial_coeffs(lam: Union[Partition, Sequence[int]], gamma: Union[Fraction, float],
                         N: int) -> SymmetricPolynomial:
    """P_λ^{(1/γ)} na base monomial, mônico em m_λ, pela recursão de autovalores"""
    lam = new_partition(list(lam), N)
    if lam.size > GRAU_MAXIMO or N > N_MAXIMO_SIMBOLICO:
        raise ParametroInvalidoError(
            f"Oráculo simbólico limitado a |λ| ≤ {GRAU_MAXIMO} e N ≤ {N_MAXIMO_SIMBOLICO}"
        )
    g = _como_fracao(gamma)
    if g <= 0:
        raise ParametroInvalidoError(f"γ deve ser positivo, recebido {gamma}")
    coeficientes = _jack_exato(lam.parts, g)
    return SymmetricPolynomial(N, {Partition(k): v for k, v in coeficientes.items()})


def elementary(p: int, N: int) -> SymmetricPolynomial:
    if not 0 <= p <= N:
        raise ParametroInvalidoError(f"e_p com p = {p} fora de [0, {N}]")
    return SymmetricPolynomial(N, {new_partition([1] * p, N): Fraction(1)})


def pieri_expand_exact(p: int, mu: Union[Partition, Sequence[int]],
                       gamma: Union[Fraction, float], N: int) -> Dict[Partition, Fraction]:
    """e_p·P_μ reexpandido na base de Jack por retrossubstituição triangular"""
    mu = new_partition(list(mu), N)
    if mu.size + p > GRAU_MAXIMO:
        raise ParametroInvalidoError(f"|μ| + p = {mu.size + p} acima de {GRAU_MAXIMO}")
    resto = jack_monomial_coeffs(mu, gamma, N).multiply(elementary(p, N))
    coeficientes: Dict[Partition, Fraction] = {}
    limite = sum(1 for _ in _particoes_do_grau(mu.size + p, N)) + 1
    while not resto.is_zero():
        if len(coeficientes) > limite:
            raise JackOracleError("Reexpansão de Pieri não terminou", {"resto": str(resto.coeffs)})
        topo = max(resto.coeffs, key=lambda lam: lam.parts)
        a = resto[topo]
        coeficientes[topo] = a
        resto = resto - jack_monomial_coeffs(topo, gamma, N).scale(a)
    faixas = set(enumerate_vertical_strips(mu, p))
    fora = [tau.to_json() for tau in coeficientes if tau not in faixas]
    ausentes = [tau.to_json() for tau in faixas if tau not in coeficientes]
    if fora or ausentes:
        raise JackOracleError(
            f"Suporte de e_{p}·P_{mu.to_json()} difere das faixas verticais",
            {"fora_das_faixas": fora, "faixas_ausentes": ausentes},
        )
    return coeficientes


def pieri_expand_oracle(p: int, mu: Union[Partition, Sequence[int]],
                        gamma: Union[Fraction, float], N: int) -> Dict[Partition, float]:
    return {tau: float(a) for tau, a in pieri_expand_exact(p, mu, gamma, N).items()}


# ---------------------------------------------------------------------------
# ortogonalidade
# ---------------------------------------------------------------------------

def orthogonality_spot_check(lam: Union[Partition, Sequence[int]],
                             nu: Union[Partition, Sequence[int]],
                             gamma: float, N: int = 2, tol: float = 1e-10) -> float:
    """(1/(2π)²) ∫∫ P_λ(e^{iθ}) P_ν(e^{−iθ}) |e^{iθ_1}−e^{iθ_2}|^{2γ} dθ.

    Pela homogeneidade, fixar θ_2 integra a fase e zera graus diferentes; sobra
    uma integral em u = θ_1 − θ_2 com pesos algébricos nas duas pontas.
    """
    _validar_gamma(gamma)
    if N != 2:
        raise ParametroInvalidoError("Checagem de ortogonalidade implementada para N = 2")
    lam = new_partition(list(lam), N)
    nu = new_partition(list(nu), N)
    if lam.size > 4 or nu.size > 4:
        raise ParametroInvalidoError("Checagem de ortogonalidade limitada a |λ|, |ν| ≤ 4")
    if lam.size != nu.size:
        return 0.0
    termos_l = jack_monomial_coeffs(lam, gamma, N).terms()
    termos_n = jack_monomial_coeffs(nu, gamma, N).terms()

    def _produto(u: float) -> float:
        a = sum(c * np.exp(1j * b[0] * u) for b, c in termos_l)
        b = sum(c * np.exp(-1j * e[0] * u) for e, c in termos_n)
        return float(np.real(a * b))

    def _esquerda(u):
        return _produto(u) * _sinc_meio(u) ** (2.0 * gamma)

    def _direita(u):
        return _produto(u) * _sinc_meio(DOIS_PI - u) ** (2.0 * gamma)

    v1, e1 = _quad(_esquerda, 0.0, math.pi, tol, weight="alg", wvar=(2.0 * gamma, 0.0))
    v2, e2 = _quad(_direita, math.pi, DOIS_PI, tol, weight="alg", wvar=(0.0, 2.0 * gamma))
    escala = max(1.0, abs(v1) + abs(v2))
    if e1 + e2 > tol * escala:
        raise QuadraturaError(f"Quadratura de ortogonalidade não convergiu: erro {e1 + e2:.2e}")
    return (v1 + v2) / DOIS_PI
