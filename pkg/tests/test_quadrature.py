import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from rskernel.errors import NonConvergenceError
from rskernel.quadrature import adaptive_panels, gauss_legendre, graded_breaks, panel_nodes


def test_gauss_legendre_exact_for_polynomials():
    x, w = gauss_legendre(10)
    assert w.sum() == pytest.approx(2.0, rel=1e-15)
    assert (w @ x ** 18) == pytest.approx(2.0 / 19.0, rel=1e-13)


def test_panel_nodes_weights_cover_interval():
    x, w = panel_nodes(np.array([0.0, 1.0, 3.0]), order=8, level=2)
    assert x.size == 8 * 8
    assert w.sum() == pytest.approx(3.0, rel=1e-14)
    assert np.all(np.diff(x) > 0)


@given(st.floats(0.1, 5.0), st.floats(0.5, 4.0))
def test_adaptive_panels_gaussian(a, top):
    val = adaptive_panels(lambda t: np.exp(-a * t * t), np.linspace(0.0, top, 5), 1e-12)
    exact = 0.5 * math.sqrt(math.pi / a) * math.erf(math.sqrt(a) * top)
    assert val == pytest.approx(exact, rel=1e-11)


def test_adaptive_panels_vector_valued():
    breaks = np.linspace(0.0, math.pi, 3)
    val = adaptive_panels(lambda t: np.stack([np.sin(t), np.cos(t) ** 2]), breaks, 1e-12)
    assert val == pytest.approx([2.0, math.pi / 2], rel=1e-12)


def test_adaptive_panels_reports_failure():
    with pytest.raises(NonConvergenceError):
        adaptive_panels(lambda t: np.sin(1e4 * t) * t, np.array([0.0, 1.0]), 1e-12, max_level=1)


def test_graded_breaks_refine_near_singularity():
    b = graded_breaks(-5.0, 5.0, 1.0, [(0.3, 1e-3)])
    assert b[0] == -5.0 and b[-1] == 5.0
    near = b[np.argmin(np.abs(b - 0.3))]
    assert near == pytest.approx(0.3)
    gaps = np.diff(b)
    assert gaps.min() <= 1e-3 * (1 + 1e-9)
    assert np.all(gaps > 0)
