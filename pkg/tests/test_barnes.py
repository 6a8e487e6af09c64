import numpy as np
import pytest
from hypothesis import given, strategies as st

from rskernel.barnes import BarnesIntegrand, barnes_integral, down, integrate, plan_contour, up
from rskernel.errors import NoDecayError, PinchedContourError
from rskernel.gammas import gamma, rgamma

param = st.complex_numbers(max_magnitude=1.0).map(lambda z: complex(0.15 + abs(z.real) * 0.6, z.imag))


def first_lemma(a, b, c, d):
    f = BarnesIntegrand(numerator=[up(a), up(b), down(c), down(d)])
    closed = gamma(a + c) * gamma(a + d) * gamma(b + c) * gamma(b + d) * rgamma(a + b + c + d)
    return f, complex(closed)


@given(param, param, param, param)
def test_barnes_first_lemma(a, b, c, d):
    f, closed = first_lemma(a, b, c, d)
    assert barnes_integral(f, tol=1e-11) == pytest.approx(closed, rel=1e-9)


@pytest.mark.parametrize("hint", [None, -0.1, 0.05, -0.9, 1.3])
def test_abscissa_independence(hint):
    # poles of Γ(a+s), Γ(b+s) at -0.3-..., -0.4; of Γ(c-s), Γ(d-s) at 0.2, 0.5:
    # lines outside (-0.3, 0.2) need loops, which must give the same value
    f, closed = first_lemma(0.3 + 0.2j, 0.4, 0.2 - 0.1j, 0.5)
    assert barnes_integral(f, hint_abscissa=hint, tol=1e-11) == pytest.approx(closed, rel=1e-10)


def test_left_poles_crossing_right():
    # Re(a + c) < 0: the families interleave and the contour must indent
    f, closed = first_lemma(-0.35 + 0.1j, 0.6, 0.2, 0.4 - 0.3j)
    contour = plan_contour(f)
    assert contour.indentations
    assert integrate(f, contour, 1e-11) == pytest.approx(closed, rel=1e-9)


def test_pinch_detected():
    f = BarnesIntegrand(numerator=[up(0.3), up(0.5), down(-0.3), down(0.2)])
    with pytest.raises(PinchedContourError):
        barnes_integral(f)


def test_no_decay_detected():
    f = BarnesIntegrand(numerator=[up(0.3), down(0.2)], denominator=[up(0.7), up(0.9)])
    with pytest.raises(NoDecayError):
        barnes_integral(f)


def test_batched_power_base():
    # (1/2πi) ∫ Γ(s) x^{-s} ds = e^{-x}; here base^s with base = 1/x
    xs = np.array([0.5, 1.0, 2.5])
    f = BarnesIntegrand(numerator=[up(0.0)], power_base=1.0 / xs, extra=lambda s: np.ones_like(s),
                        extra_decay=0.0)
    f2 = BarnesIntegrand(numerator=[up(0.0)], power_base=1.0 / xs)
    for g in (f, f2):
        out = barnes_integral(g, hint_abscissa=0.7, tol=1e-11)
        assert out.shape == xs.shape
        assert out == pytest.approx(np.exp(-xs), rel=1e-10)


def test_factor_order_is_canonical():
    f1 = BarnesIntegrand(numerator=[up(0.3), up(0.4), down(0.2), down(0.5)])
    f2 = BarnesIntegrand(numerator=[down(0.5), up(0.4), down(0.2), up(0.3)])
    assert barnes_integral(f1) == barnes_integral(f2)
