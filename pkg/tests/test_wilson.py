import numpy as np
import pytest
from hypothesis import given, strategies as st

from rskernel.gammas import SpectralParams
from rskernel.wilson import (
    ChiSpec, WilsonParams, dual_parameters, integrated_kernel, kernel_parts, spectral_kernel, spectral_weight,
    wilson_function, wilson_minus, wilson_plus_params,
)

SP = SpectralParams(0.8, 1.3)
GENERIC = WilsonParams(0.3 + 0.2j, 0.4, 0.5 - 0.1j, 0.35, 0.45, 0.6)
# mpmath quadrature of the Barnes integral on Re R = -0.1, divided by the gamma prefactor
GENERIC_REF = 0.7173911587790444 + 0.2915851502849327j


def test_wilson_function_against_quadrature_oracle():
    assert wilson_function(GENERIC) == pytest.approx(GENERIC_REF, rel=1e-11)


def test_dual_parameters():
    at, dt = dual_parameters(0.75, 0.25 + 0.8j, 0.25 - 0.8j, 0.75)
    assert at == pytest.approx(0.5)
    assert dt == pytest.approx(1.0)
    # the dual of the dual is the original set (a, d)
    a, b, c, d = 0.3 + 0.2j, 0.4, 0.5 - 0.1j, 0.35
    at, dt = dual_parameters(a, b, c, d)
    bt, ct = 0.5 * (a + b - c - d + 1), 0.5 * (a - b + c - d + 1)
    assert dual_parameters(at, bt, ct, dt) == pytest.approx((a, d))


@pytest.mark.parametrize("field", ["lam", "x"])
def test_even_in_order_and_argument(field):
    flipped = GENERIC.replace(**{field: -getattr(GENERIC, field)})
    assert wilson_function(flipped) == pytest.approx(wilson_function(GENERIC), rel=1e-10)


def test_symmetric_in_b_and_c():
    swapped = GENERIC.replace(b=GENERIC.c, c=GENERIC.b)
    assert wilson_function(swapped) == pytest.approx(wilson_function(GENERIC), rel=1e-10)


def test_order_zero_limit_is_continuous():
    p = wilson_plus_params(0.0, 0.5, SP)
    at_zero = wilson_function(p)
    nearby = wilson_function(p.replace(lam=0.02))
    assert abs(at_zero - nearby) < 1e-3 * abs(at_zero)


def test_kernel_minus_half_negates_t2():
    lam = 1j * (0.5 - (0.49 + 0.3j))
    direct = wilson_function(wilson_plus_params(lam, 0.7, SpectralParams(SP.t1, SP.t2), -1))
    assert wilson_minus(lam, 0.7, SP) == direct
    plus, minus = kernel_parts(0.49 + 0.3j, 0.7, SP)
    assert spectral_kernel(0.49 + 0.3j, 0.7, SP) == pytest.approx(plus + minus, rel=1e-15)


@given(st.floats(0.0, 4.0))
def test_spectral_weight_even_and_vanishing(t):
    assert spectral_weight(-t, SP) == pytest.approx(spectral_weight(t, SP), rel=1e-12, abs=1e-300)
    assert spectral_weight(0.0, SP) == 0


def test_chi_spec_algebra_and_text():
    chi = ChiSpec.gaussian(1.0) + 2.0 * ChiSpec.gaussian(0.5)
    t = np.linspace(0, 3, 7)
    assert chi(t) == pytest.approx(np.exp(-t * t) + 2 * np.exp(-0.5 * t * t))
    assert ChiSpec.parse(chi.describe()) == chi
    assert ChiSpec.parse("0").is_zero
    assert ChiSpec.from_shift(4) == ChiSpec.gaussian(0.25)
    assert (0 * chi).is_zero
    with pytest.raises(ValueError):
        ChiSpec.gaussian(-1.0)
    with pytest.raises(ValueError):
        ChiSpec.from_shift(0)


def test_integrated_kernel_of_zero_is_zero():
    assert integrated_kernel(0.49, ChiSpec.zero(), SP) == 0


@pytest.mark.slow
def test_integrated_kernel_is_linear_in_chi():
    S = 0.49 + 0.3j
    one = integrated_kernel(S, ChiSpec.gaussian(1.0), SP, 1e-8)
    two = integrated_kernel(S, ChiSpec.gaussian(2.0), SP, 1e-8)
    both = integrated_kernel(S, ChiSpec.gaussian(1.0) + 3.0 * ChiSpec.gaussian(2.0), SP, 1e-8)
    assert both == pytest.approx(one + 3.0 * two, rel=1e-7)
