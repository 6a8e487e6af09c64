import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from rskernel.errors import PinchedContourError
from rskernel.gammas import SpectralParams
from rskernel.theta import theta_tail
from rskernel.whittaker import (
    WhittakerUnderflowWarning, theta_tail_mellin, whittaker_pair_mellin, whittaker_pair_mellin_barnes, whittaker_w,
)

SP = SpectralParams(0.8, 1.3)

# reference values computed with mpmath at 30 digits
W_REF = [
    ((0.3, 0.4j, 1.5), 0.4826921514996478),
    ((-0.2 + 0.1j, 0.8j, 5.0), 0.04852578831553362 + 0.00892214006504328j),
    ((0.1, 0.25, 0.3), 0.6704612390449434),
    ((-1.0, 1.2j, 12.0), 0.00015798447420100419),
]
# K_{iν}(y) for (ν, y), mpmath
BESSEL_REF = [((0.8, 0.5), 0.6161761976886331), ((1.3, 2.0), 0.07976769542054779), ((3.0, 1.0), -0.0008861479232281393)]


@pytest.mark.parametrize("args,ref", W_REF)
def test_whittaker_reference(args, ref):
    assert abs(whittaker_w(*args) - ref) <= 1e-11 * abs(ref)


@pytest.mark.parametrize("args,ref", BESSEL_REF)
def test_whittaker_zero_kappa_is_bessel(args, ref):
    nu, y = args
    # W_{0,iν}(2y) = sqrt(2y/π) K_{iν}(y)
    assert whittaker_w(0.0, 1j * nu, 2 * y) == pytest.approx(math.sqrt(2 * y / math.pi) * ref, rel=1e-10)


def test_elementary_case_is_reported_as_pinched():
    # W_{κ, κ-1/2}(y) = e^{-y/2} y^κ is elementary, but its Barnes contour pinches
    with pytest.raises(PinchedContourError):
        whittaker_w(0.3, -0.2, np.array([0.2, 1.0, 3.5]))


@given(st.floats(0.05, 30.0), st.floats(0.0, 2.0))
def test_mu_sign_symmetry(y, t):
    a = whittaker_w(0.2, 1j * t, y)
    b = whittaker_w(0.2, -1j * t, y)
    assert b == pytest.approx(a, rel=1e-10, abs=1e-14)


@pytest.mark.parametrize("mu", [0.0, 0.5])
def test_near_coincident_poles_share_one_loop(mu):
    # the poles at -1/2 ± μ are 2e-10 apart; mpmath gives W at the exact μ
    ref = {0.0: 0.572009882157575, 0.5: 0.672098881527414}[mu]
    assert whittaker_w(0.2, mu + 1e-10j, 1.0) == pytest.approx(ref, rel=1e-9)


def test_series_and_line_agree_at_switch():
    below = whittaker_w(0.1, 0.6j, 2.0 - 1e-9)
    above = whittaker_w(0.1, 0.6j, 2.0 + 1e-9)
    assert above == pytest.approx(below, rel=1e-9)


def test_underflow_warns_and_returns_zero():
    with pytest.warns(WhittakerUnderflowWarning):
        out = whittaker_w(0.1, 0.2j, np.array([1.0, 3000.0]))
    assert out[1] == 0 and out[0] != 0


def test_pinched_parameters():
    with pytest.raises(PinchedContourError):
        whittaker_w(0.5, 0.0, 1.0)


def test_domain():
    with pytest.raises(ValueError):
        whittaker_w(0.1, 0.2, -1.0)


@pytest.mark.parametrize("n,ref", [(0, 0.057305034690232472), (1, 0.078731831759181891)])
def test_pair_mellin_against_quadrature_oracle(n, ref):
    # oracle: mpmath quadrature of the product of two W at S = 1.2, m = 1
    assert whittaker_pair_mellin(1.2, n, 1, 1, SP) == pytest.approx(ref, rel=1e-9)
    assert whittaker_pair_mellin_barnes(1.2, n, 1, 1, SP) == pytest.approx(ref, rel=1e-9)


@pytest.mark.parametrize("y", [0.4, 1.0, 2.7])
@pytest.mark.parametrize("order", [0, 2])
def test_theta_tail_mellin(order, y):
    assert theta_tail_mellin(order, y) == pytest.approx(theta_tail(order, y), rel=1e-10, abs=1e-15)


def test_theta_tail_mellin_rejects_bad_line():
    with pytest.raises(ValueError):
        theta_tail_mellin(0, 1.0, sigma=0.4)
