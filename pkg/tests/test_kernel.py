import numpy as np
import pytest
from hypothesis import given, strategies as st

from rskernel.errors import ConfigError, InsufficientGridError
from rskernel.kernel import (
    KernelTable, hahn_coefficient, hahn_coefficients, invert_kernel, point_pair_kernel, selberg_transform,
)
from rskernel.wilson import ChiSpec

CHI = ChiSpec.gaussian()


@pytest.fixture(scope="module")
def table():
    return KernelTable.build(CHI)


def test_point_pair_kernel_against_quadrature_oracle():
    # mpmath quadrature of the defining t-integral for χ(t) = exp(-t²)
    ref = np.array([1.9600458003585692067, 0.3609350916082592619])
    assert point_pair_kernel(np.array([0.0, 2.0]), CHI) == pytest.approx(ref, rel=1e-12)


def test_point_pair_kernel_zero_and_linear():
    assert np.all(point_pair_kernel(np.array([0.0, 1.0]), ChiSpec.zero()) == 0)
    u = np.array([0.3, 4.0])
    combo = point_pair_kernel(u, CHI + 2.0 * ChiSpec.gaussian(3.0))
    parts = point_pair_kernel(u, CHI) + 2.0 * point_pair_kernel(u, ChiSpec.gaussian(3.0))
    assert combo == pytest.approx(parts, rel=1e-11)
    with pytest.raises(ValueError):
        point_pair_kernel(-1.0, CHI)


def test_table_interpolates_between_nodes(table):
    u = np.array([0.0, 0.37, 5.3, 120.0])
    assert table(u) == pytest.approx(point_pair_kernel(u, CHI), rel=1e-10, abs=1e-13)
    with pytest.raises(InsufficientGridError):
        table(1e9)


@given(st.floats(0.0, 3.0))
def test_round_trip(table, t):
    assert invert_kernel(t, table) == pytest.approx(float(CHI(t)), abs=1e-8)


def test_two_inverse_transforms_agree(table):
    t = np.array([0.0, 0.5, 1.7, 3.0])
    assert selberg_transform(t, table) == pytest.approx(invert_kernel(t, table), abs=1e-9)


def test_short_table_is_rejected():
    short = KernelTable.build(CHI, breaks=[0.0, 0.5, 1.0])
    with pytest.raises(InsufficientGridError):
        invert_kernel(0.3, short)


def test_table_text_round_trip(table):
    again = KernelTable.loads(table.dumps())
    assert np.array_equal(again.k, table.k)
    assert np.array_equal(again.breaks, table.breaks)
    assert again.chi == table.chi


def test_table_text_errors(table):
    lines = table.dumps().splitlines()
    with pytest.raises(ConfigError):
        KernelTable.loads("\n".join(lines[2:]))
    bad = lines[:5] + ["0.1 zz"] + lines[6:]
    with pytest.raises(ConfigError) as info:
        KernelTable.loads("\n".join(bad))
    assert info.value.line == 6


def test_hahn_coefficient_zero_against_quadrature_oracle():
    # mpmath quadrature of the n = 0 weight integral at T = 0.8
    assert hahn_coefficient(0, 0.8, CHI) == pytest.approx(5.648765824686795613, rel=1e-10)


@pytest.mark.parametrize("n", [0, 3, 7])
def test_hahn_coefficient_forms_and_batch(n):
    a = hahn_coefficient(n, 1.3, CHI, form="3f2")
    b = hahn_coefficient(n, 1.3, CHI, form="hahn")
    batch = hahn_coefficients(7, 1.3, CHI)
    assert b == pytest.approx(a, rel=1e-9)
    assert batch[n] == pytest.approx(a, rel=1e-9)


def test_hahn_coefficient_validation():
    with pytest.raises(ValueError):
        hahn_coefficient(-1, 0.8, CHI)
    with pytest.raises(ValueError):
        hahn_coefficient(1, 0.8, CHI, form="other")
    assert hahn_coefficient(2, 0.8, ChiSpec.zero()) == 0
