from math import comb

import numpy as np
import pytest

from calculo.erros import ParametroInvalidoError
from calculo.partitions import (Cell, Partition, ShapeVector, add_scalar, add_shape, arm,
                                cells_C_minus_R, conjugate, count_partitions, enumerate_partitions,
                                enumerate_shapes, enumerate_vertical_strips, gap, is_vertical_strip,
                                iter_partitions, leg, multinomial, new_partition, partition_array,
                                vertical_strip_shapes)


def test_new_partition_completa_com_zeros():
    assert new_partition([3, 1], 3).parts == (3, 1, 0)
    assert new_partition([], 2).parts == (0, 0)


@pytest.mark.parametrize("parts, N", [([1, 2], 2), ([2, -1], 2), ([3, 2, 1], 2)])
def test_new_partition_invalida(parts, N):
    with pytest.raises(ParametroInvalidoError):
        new_partition(parts, N)


@pytest.mark.parametrize("parts, esperado", [
    ((2, 1, 0), (2, 1)),
    ((0, 0), ()),
    ((4, 2, 1), (3, 2, 1, 1)),
])
def test_conjugate(parts, esperado):
    assert conjugate(Partition(parts)).parts == esperado


def test_arm_e_leg():
    assert (arm(Partition((1,)), Cell(1, 1)), leg(Partition((1,)), Cell(1, 1))) == (0, 0)
    lam = Partition((3, 2))
    assert arm(lam, Cell(1, 1)) == 2
    assert leg(lam, Cell(1, 1)) == 1
    with pytest.raises(ParametroInvalidoError):
        arm(lam, Cell(2, 3))


@pytest.mark.parametrize("parts, esperado", [
    ((5, 3, 3, 1), 0),
    ((0, 0, 0), 0),
    ((9, 6, 3), 3),
    ((5, 3, 1), 1),
])
def test_gap(parts, esperado):
    assert gap(Partition(parts)) == esperado


def test_add_scalar():
    assert add_scalar(Partition((0, 0)), 3).parts == (3, 3)
    assert add_scalar(Partition((2, 1)), 0).parts == (2, 1)
    assert add_scalar(Partition((2, 1)), 2).parts == (4, 3)


def test_add_shape():
    assert add_shape(Partition((4, 2, 0)), ShapeVector((1, 1, 1))).parts == (5, 3, 1)
    with pytest.raises(ParametroInvalidoError):
        add_shape(Partition((1, 1)), ShapeVector((2, 0)))


def test_iter_partitions_pequeno():
    visitadas = [lam.parts for lam in iter_partitions(2, 2)]
    assert visitadas == [(0, 0), (1, 0), (1, 1), (2, 0), (2, 1), (2, 2)]
    assert [lam.parts for lam in iter_partitions(1, 0)] == [(0,)]


@pytest.mark.parametrize("N, lambda_max", [(1, 7), (2, 5), (3, 4), (4, 3)])
def test_contagem_confere_com_binomial(N, lambda_max):
    visitadas = list(iter_partitions(N, lambda_max))
    assert len(visitadas) == count_partitions(N, lambda_max) == comb(lambda_max + N, N)
    assert len(set(visitadas)) == len(visitadas)


def test_visitante_percorre_todas_as_particoes():
    for N in range(1, 7):
        for lambda_max in range(0, 13):
            visitadas = []
            enumerate_partitions(N, lambda_max, visitadas.append)
            assert len(visitadas) == comb(lambda_max + N, N), (N, lambda_max)
            assert all(lam.N == N and lam.first <= lambda_max for lam in visitadas)
    ordem = []
    enumerate_partitions(2, 2, lambda lam: ordem.append(lam.parts))
    assert ordem == [lam.parts for lam in iter_partitions(2, 2)]


def test_intervalos_disjuntos_cobrem_o_dominio():
    inteiro = list(iter_partitions(3, 6))
    partes = list(iter_partitions(3, 6, (0, 3))) + list(iter_partitions(3, 6, (3, 7)))
    assert partes == inteiro


@pytest.mark.parametrize("N", [1, 2, 3])
def test_partition_array_mesma_ordem(N):
    matriz = partition_array(N, 2, 6)
    esperado = [lam.parts for lam in iter_partitions(N, 5, (2, 6))]
    np.testing.assert_array_equal(matriz, np.array(esperado).reshape(-1, N))


@pytest.mark.parametrize("mu, p, esperado", [
    ((0, 0), 1, {(1, 0)}),
    ((1, 0), 1, {(2, 0), (1, 1)}),
    ((1, 1), 2, {(2, 2)}),
])
def test_enumerate_vertical_strips(mu, p, esperado):
    assert {nu.parts for nu in enumerate_vertical_strips(Partition(mu), p)} == esperado


def test_is_vertical_strip():
    assert is_vertical_strip(Partition((2, 2)), Partition((1, 1)))
    assert not is_vertical_strip(Partition((3, 0)), Partition((1, 0)))


@pytest.mark.parametrize("tau, mu, esperado", [
    ((1,), (0,), []),
    ((1, 1), (1, 0), [Cell(1, 1)]),
    ((2, 2), (2, 1), [Cell(1, 2)]),
])
def test_cells_C_minus_R(tau, mu, esperado):
    assert cells_C_minus_R(Partition(tau), Partition(mu)) == esperado


def test_cells_C_minus_R_exige_faixa():
    with pytest.raises(ParametroInvalidoError):
        cells_C_minus_R(Partition((3, 0)), Partition((1, 0)))


def test_enumerate_shapes():
    formas = [s.entries for s in enumerate_shapes(2, [1, 1])]
    assert formas == [(1, 2), (2, 1)]


@pytest.mark.parametrize("N, multiplicidades", [(3, [1]), (4, [2, 1]), (5, [1, 1, 1]), (3, [3])])
def test_enumerate_shapes_multinomial(N, multiplicidades):
    formas = list(enumerate_shapes(N, multiplicidades))
    assert len(formas) == len(set(formas))
    assert len(formas) == multinomial([N - sum(multiplicidades)] + multiplicidades)
    assert all(s.multiplicities[:len(multiplicidades)] == tuple(multiplicidades) for s in formas)


def test_vertical_strip_shapes():
    assert vertical_strip_shapes(3, 2) == [(1, 1, 0), (1, 0, 1), (0, 1, 1)]
    assert vertical_strip_shapes(2, 0) == [(0, 0)]
