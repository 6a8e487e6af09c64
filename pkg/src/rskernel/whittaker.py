"""Whittaker W-functions and Mellin transforms of their products.

W is represented as

    W_{κ,μ}(y) = e^{−y/2} (1/2πi) ∫ Γ(1/2+μ+t) Γ(1/2−μ+t) Γ(−κ−t) y^{−t} dt
                 / (Γ(1/2+μ−κ) Γ(1/2−μ−κ)),

with the contour separating the poles of the first two factors (left) from
those of Γ(−κ−t) (right).  For small y the contour is closed to the left and
the integral becomes the residue sum over the left family, which converges
for every y but loses digits to cancellation once y is large; above
``SERIES_MAX`` the integral is taken along a vertical line instead.
"""
from __future__ import annotations

import math
import warnings

import numpy as np

from .barnes import BarnesIntegrand, barnes_integral, down, up
from .errors import NonConvergenceError, PinchedContourError
from .gammas import SpectralParams, log_gamma, rgamma, zeta
from .quadrature import adaptive_panels
from .theta import theta_tail

SERIES_MAX = 2.0
# 2μ closer than this to an integer makes the residues of the two left
# families nearly cancel; the line integral is used instead
_LOG_CASE = 1e-3
_LOG_TINY = -745.0


class WhittakerUnderflowWarning(RuntimeWarning):
    """W underflowed to zero in double precision."""


def _residue_series(kappa: complex, mu: complex, y: np.ndarray) -> np.ndarray:
    """Σ over the poles t = −1/2 ∓ μ − k of the Barnes integrand, times e^{−y/2}."""
    norm = rgamma(0.5 + mu - kappa) * rgamma(0.5 - mu - kappa)
    logy = np.log(y)
    total = np.zeros(y.shape, dtype=complex)
    for m in (mu, -mu):
        # residue at t = −1/2 − m − k:
        # (−1)^k/k! Γ(−2m−k) Γ(1/2+m−κ+k) y^{1/2+m+k}
        k = 0
        acc = np.zeros(y.shape, dtype=complex)
        base = log_gamma(-2.0 * m) + log_gamma(0.5 + m - kappa)
        term_log = base + (0.5 + m) * logy
        term = np.exp(term_log)
        peak = np.abs(term)
        while True:
            acc = acc + term
            # ratio of consecutive residues
            ratio = -(0.5 + m - kappa + k) / ((k + 1) * (-2.0 * m - k - 1)) * y
            term = term * ratio
            k += 1
            peak = np.maximum(peak, np.abs(term))
            if k > 4 and np.all(np.abs(term) <= 1e-17 * np.maximum(np.abs(acc), 1e-300)):
                break
            if k > 400:
                raise NonConvergenceError("Whittaker residue series did not converge")
        total = total + acc
    return np.exp(-0.5 * y) * norm * total


def _line_integral(kappa: complex, mu: complex, y: np.ndarray, tol: float, hint: float) -> np.ndarray:
    f = BarnesIntegrand(
        numerator=[up(0.5 + mu), up(0.5 - mu), down(-kappa)],
        power_base=1.0 / y,
        scalar=rgamma(0.5 + mu - kappa) * rgamma(0.5 - mu - kappa),
    )
    val = barnes_integral(f, hint_abscissa=hint, tol=tol)
    return np.exp(-0.5 * y) * np.asarray(val)


def whittaker_w(kappa, mu, y, *, tol: float = 1e-11):
    """W_{κ,μ}(y) for real y > 0, vectorized over ``y``.

    Values whose magnitude is below the double range are returned as exact
    zeros and a :class:`WhittakerUnderflowWarning` is issued.

    Raises
    ------
    PinchedContourError
        When 1/2 ± μ − κ is a non-positive integer.
    """
    kappa, mu = complex(kappa), complex(mu)
    for edge in (0.5 + mu - kappa, 0.5 - mu - kappa):
        if abs(edge.imag) < 1e-12 and edge.real < 1e-12 and abs(edge.real - round(edge.real)) < 1e-12:
            raise PinchedContourError(f"1/2 ± μ − κ hits the non-positive integer {round(edge.real)}")
    y = np.asarray(y, dtype=float)
    scalar = y.ndim == 0
    y = np.atleast_1d(y)
    if np.any(~(y > 0)):
        raise ValueError("y must be positive")
    out = np.zeros(y.shape, dtype=complex)
    size = -0.5 * y + kappa.real * np.log(y) + abs(kappa) + 2.0 * abs(mu)
    under = size < _LOG_TINY
    if np.any(under):
        warnings.warn(
            f"W_{{{kappa},{mu}}} underflows for y >= {y[under].min():g}; returning 0",
            WhittakerUnderflowWarning,
            stacklevel=2,
        )
    two_mu = 2.0 * mu
    log_case = abs(two_mu - round(two_mu.real)) < _LOG_CASE
    small = (y <= SERIES_MAX) & ~under
    if np.any(small) and not log_case:
        out[small] = _residue_series(kappa, mu, y[small])
    # the line sits left of every pole of Γ(−κ−t); left poles right of it get loops
    for mask, hint in (
        (small & log_case, -0.5 - abs(mu.real) - 0.75),
        (~small & ~under, -kappa.real - 0.25),
    ):
        if np.any(mask):
            out[mask] = _line_integral(kappa, mu, y[mask], tol, hint)
    return out[0] if scalar else out


def theta_tail_mellin(order: int, y: float, sigma: float = 2.0, tol: float = 1e-11) -> complex:
    """(1/l!)(1/2πi) ∫_(σ) π^{−S} ζ(2S) Γ(l+S) y^S dS, which equals
    :func:`~rskernel.theta.theta_tail` for σ > 1/2."""
    if sigma <= 0.5:
        raise ValueError("sigma must exceed 1/2")
    f = BarnesIntegrand(
        numerator=[up(float(order))],
        power_base=y / math.pi,
        scalar=1.0 / math.factorial(order),
        extra=lambda s: zeta(2.0 * s),
        extra_singularities=(0.5,),
    )
    return complex(barnes_integral(f, hint_abscissa=sigma, tol=tol))


def whittaker_pair_integral(S, k, lam, m: int, t_first: float, t_second: float, tol: float = 1e-8) -> complex:
    """∫_0^∞ y^S W_{k,it_first}(4π|m|y) W_{λ,it_second}(4π|m|y) dy/y² for Re S > 0.

    Quadrature in v = log y over panels of unit width; the range is cut
    where the integrand drops below 1e-18 of its maximum (the integrand
    decays exponentially in v at the lower end and doubly exponentially at
    the upper end).
    """
    S = complex(S)
    if S.real <= 0:
        raise ValueError("Re S must be positive")
    scale = 4.0 * math.pi * abs(m)

    def integrand(v):
        y = np.exp(v)
        z = scale * y
        w1 = whittaker_w(k, 1j * t_first, z, tol=min(1e-11, tol / 100))
        w2 = whittaker_w(lam, 1j * t_second, z, tol=min(1e-11, tol / 100))
        return np.exp((S - 1.0) * v) * w1 * w2

    # near y = 0 the integrand is O(y^{Re S}) in v, so the probe must reach
    # down to where that has dropped by 1e-18
    bottom = max(60.0, 45.0 / S.real)
    probe = np.arange(-bottom, 8.0, 0.5) - math.log(scale)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", WhittakerUnderflowWarning)
        mag = np.abs(integrand(probe))
        big = mag.max()
        keep = np.nonzero(mag >= 1e-18 * big)[0]
        lo = probe[max(keep[0] - 1, 0)]
        hi = probe[min(keep[-1] + 1, probe.size - 1)]
        if keep[0] == 0:
            raise NonConvergenceError("integrand has not decayed at the lower end of the range")
        breaks = np.linspace(lo, hi, int(math.ceil(hi - lo)) + 1)
        return complex(adaptive_panels(integrand, breaks, tol))


def whittaker_pair_barnes(S, k, lam, m: int, t_first: float, t_second: float, tol: float = 1e-10) -> complex:
    """The same Mellin transform as :func:`whittaker_pair_integral`, via

        (4π|m|)^{1−S} / Γ(1/2−λ±it_second) · (1/2πi) ∫ Γ(−1/2±it_second+S−s)
        Γ(1/2±it_first+s) Γ(1−λ+s−S) / Γ(1−k+s) ds.
    """
    S = complex(S)
    a1, a2 = 1j * t_first, 1j * t_second
    f = BarnesIntegrand(
        numerator=[
            down(-0.5 + a2 + S), down(-0.5 - a2 + S),
            up(0.5 + a1), up(0.5 - a1), up(1.0 - lam - S),
        ],
        denominator=[up(1.0 - k)],
    )
    pref = np.exp((1.0 - S) * math.log(4.0 * math.pi * abs(m))) * (
        rgamma(0.5 - lam + a2) * rgamma(0.5 - lam - a2)
    )
    return complex(pref * barnes_integral(f, tol=tol))


def _pair_indices(n: int, sign: int, sp: SpectralParams):
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if n < 0:
        raise ValueError("n must be non-negative")
    if sign == 1:
        return dict(k=n, lam=0, t_first=sp.t1, t_second=sp.t2)
    # negative frequencies: the roles of the two indices are exchanged
    return dict(k=0, lam=-n, t_first=sp.t2, t_second=sp.t1)


def whittaker_pair_mellin(S, n: int, sign: int, m: int, sp: SpectralParams, tol: float = 1e-8) -> complex:
    """∫_0^∞ y^S W_{n·sign, it1}(4π|m|y) W_{0, it2}(4π|m|y) dy/y² by direct quadrature."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    return whittaker_pair_integral(S, n * sign, 0, m, sp.t1, sp.t2, tol)


def whittaker_pair_mellin_barnes(S, n: int, sign: int, m: int, sp: SpectralParams, tol: float = 1e-10) -> complex:
    """Barnes-integral form of :func:`whittaker_pair_mellin`.

    For sign = −1 the integrand is read as W_{0,it2}·W_{−n,it1}, so the
    general formula is applied with k = 0, λ = −n and t1, t2 exchanged.
    """
    return whittaker_pair_barnes(S, m=m, tol=tol, **_pair_indices(n, sign, sp))


__all__ = [
    "WhittakerUnderflowWarning", "whittaker_w", "theta_tail", "theta_tail_mellin",
    "whittaker_pair_integral", "whittaker_pair_barnes", "whittaker_pair_mellin",
    "whittaker_pair_mellin_barnes",
]
