"""Composite Gauss–Legendre quadrature with level-doubling refinement."""
from __future__ import annotations

from functools import lru_cache
from typing import Callable, Iterable

import numpy as np

from .errors import NonConvergenceError

DEFAULT_ORDER = 20
MAX_LEVEL = 6


@lru_cache(maxsize=None)
def gauss_legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(order)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def panel_nodes(breaks: np.ndarray, order: int = DEFAULT_ORDER, level: int = 0):
    """Nodes and weights of GL panels, each break interval split into 2**level."""
    breaks = np.asarray(breaks, dtype=float)
    if level:
        sub = 2 ** level
        frac = np.arange(sub) / sub
        lo, hi = breaks[:-1], breaks[1:]
        inner = (lo[:, None] + (hi - lo)[:, None] * frac[None, :]).ravel()
        breaks = np.append(inner, breaks[-1])
    x, w = gauss_legendre(order)
    half = 0.5 * np.diff(breaks)
    mid = 0.5 * (breaks[1:] + breaks[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def graded_breaks(
    lo: float,
    hi: float,
    h: float,
    singular: Iterable[tuple[float, float]] = (),
) -> np.ndarray:
    """Uniform breakpoints of spacing about ``h`` on [lo, hi], graded geometrically
    towards each (position, distance) pair so that a panel next to a nearby
    singularity is no longer than its distance to it."""
    n = max(1, int(np.ceil((hi - lo) / h)))
    pts = [np.linspace(lo, hi, n + 1)]
    for y0, d in singular:
        if not (lo - h < y0 < hi + h):
            continue
        d = max(float(d), 1e-10)
        steps = d * 2.0 ** np.arange(0, max(1, int(np.ceil(np.log2(h / d)))) + 1)
        steps = steps[steps < h]
        pts.append(np.concatenate(([y0], y0 + steps, y0 - steps)))
    allp = np.concatenate(pts)
    allp = np.unique(allp[(allp >= lo) & (allp <= hi)])
    keep = np.concatenate(([True], np.diff(allp) > 1e-13 * max(1.0, abs(hi - lo))))
    allp = allp[keep]
    allp[0], allp[-1] = lo, hi
    return allp


def adaptive_panels(
    f: Callable[[np.ndarray], np.ndarray],
    breaks: np.ndarray,
    tol: float,
    *,
    order: int = DEFAULT_ORDER,
    max_level: int = MAX_LEVEL,
    scale=None,
):
    """Integrate ``f`` over the break intervals, doubling the panel count until
    two successive levels agree to ``tol`` relative.

    ``f`` maps a 1-D array of nodes to an array whose last axis runs over the
    nodes; leading axes are integrated independently.  ``scale`` optionally
    supplies a magnitude that the tolerance may be measured against when the
    integral itself is small.
    """
    prev = None
    for level in range(max_level + 1):
        x, w = panel_nodes(breaks, order, level)
        vals = f(x)
        cur = vals @ w
        if prev is not None:
            l1 = np.abs(vals) @ w
            ref = np.abs(cur) if scale is None else np.maximum(np.abs(cur), scale)
            err = np.abs(cur - prev)
            if np.all(err <= np.maximum(tol * ref, 1e-14 * l1)):
                return cur
        prev = cur
    raise NonConvergenceError(
        f"panel refinement did not reach tol={tol:g} after {max_level} levels"
    )
