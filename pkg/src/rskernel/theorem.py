"""Desk-scale evaluation of the terms of the Rankin-Selberg type summation formula.

Three pieces are computable from user-supplied data: the truncated Dirichlet
series of coefficient products, the diagonal term (a single integral
against χ) and the critical-line integral of sampled L-values against the
integrated kernel.  Each returns its value together with an estimate of what
the truncation left out.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InsufficientGridError, RegionError
from .gammas import SpectralParams, gamma_pm, log_gamma
from .io import CoefficientTable, LSampleTable
from .quadrature import adaptive_panels
from .wilson import ChiSpec, _t_breaks, integrated_kernel, spectral_weight

# Dirichlet sums are only taken with this much margin right of Re S = 1
MIN_DIRICHLET_RE = 1.2


@dataclass(frozen=True)
class TruncatedValue:
    """A truncated sum or integral and a bound on the omitted remainder."""

    value: complex
    tail_bound: float

    def to_dict(self) -> dict:
        return {"value": [self.value.real, self.value.imag], "tail_bound": self.tail_bound}


def _growth_fit(m: np.ndarray, mag: np.ndarray) -> tuple[float, float]:
    """(C, θ) with mag <= C m^θ on every row; θ from a least-squares fit of the logs."""
    good = mag > 0
    if good.sum() >= 2 and np.ptp(np.log(m[good])) > 0:
        theta = float(np.polyfit(np.log(m[good]), np.log(mag[good]), 1)[0])
    else:
        theta = 0.0
    C = float(np.max(mag / m ** theta))
    return C, theta


def rankin_selberg_sum(S, table: CoefficientTable) -> TruncatedValue:
    """Σ_m ρ1(m) conj(ρ2(m)) (4πm)^{1−S} over the table rows.

    The tail bound assumes |ρ1 ρ̄2| <= C m^θ beyond the table, with (C, θ)
    fitted to the rows, and compares the sum over m > M with an integral.

    Raises
    ------
    RegionError
        Re S <= 1.2.
    """
    S = complex(S)
    if S.real <= MIN_DIRICHLET_RE:
        raise RegionError(f"Re S must exceed {MIN_DIRICHLET_RE}, got {S.real:g}")
    m = table.m.astype(float)
    prod = table.rho1 * np.conj(table.rho2)
    value = complex(np.sum(prod * np.exp((1.0 - S) * np.log(4.0 * math.pi * m))))
    C, theta = _growth_fit(m, np.abs(prod))
    expo = S.real - theta - 2.0
    if expo <= 0:
        tail = math.inf
    else:
        M = m[-1]
        tail = C * (4.0 * math.pi) ** (1.0 - S.real) * M ** (-expo) / expo
    return TruncatedValue(value, float(tail))


def diagonal_term(chi: ChiSpec, sp: SpectralParams, tol: float = 1e-10) -> complex:
    """(3/(2π^{3/2})) / Γ(1/2±it1) · ∫ Γ(1/4±it)Γ(1/4±it±it1)/Γ(±2it) χ(t) dt.

    The Kronecker delta of the two forms is taken to be 1.
    """
    if chi.is_zero:
        return 0j
    integral = 2.0 * adaptive_panels(lambda t: spectral_weight(t, sp) * chi(t), _t_breaks(chi, 0.5), tol)
    pref = 3.0 / (2.0 * math.pi ** 1.5) / gamma_pm(0.5, 1j * sp.t1)
    return complex(pref * integral)


def offdiagonal_integrand(tau, values, chi: ChiSpec, sp: SpectralParams, tol: float = 1e-6,
                          kernel_values=None) -> np.ndarray:
    """ζ(2S)L(S)(2π)^{−2S} Γ(S)Γ(1−S) H_χ(S) at S = 1/2 + iτ.

    ``values`` are the samples of ζ(2S)L(S).  H_χ is only evaluated where the
    sample is non-zero; precomputed ``kernel_values`` skip it entirely.
    """
    tau = np.asarray(tau, dtype=float)
    values = np.asarray(values, dtype=complex)
    S = 0.5 + 1j * tau
    if kernel_values is None:
        kernel_values = np.zeros(tau.shape, dtype=complex)
        for i, (s, v) in enumerate(zip(S, values)):
            if v != 0:
                kernel_values[i] = integrated_kernel(s, chi, sp, tol)
    # Γ(S)Γ(1−S) = π/cosh(πτ) on the critical line
    lg = log_gamma(S) + log_gamma(1.0 - S) - 2.0 * S * math.log(2.0 * math.pi)
    return values * np.exp(lg) * np.asarray(kernel_values)


def _end_tail(x: np.ndarray, g: np.ndarray) -> float:
    """Integral beyond the last sample of a power law through the last two."""
    a, b = np.abs(g[-2]), np.abs(g[-1])
    if b == 0.0:
        return 0.0
    if a == 0.0 or b >= a:
        return math.inf
    p = math.log(a / b) / math.log(abs(x[-1]) / abs(x[-2]))
    if not p > 1.0:
        return math.inf
    return b * abs(x[-1]) / (p - 1.0)


def offdiagonal_term(chi: ChiSpec, sp: SpectralParams, samples: LSampleTable, tol: float = 1e-6,
                     kernel_values=None) -> TruncatedValue:
    """−6/Γ(1/2±it2) · (1/2π) ∫ ζ(2S)L(S)(2π)^{−2S} Γ(S)Γ(1−S) H_χ(S) dτ on S = 1/2 + iτ.

    Trapezoid rule over the sample grid; the tail bound extends the
    integrand beyond each end by the power law through the two outermost
    samples on that side.

    Raises
    ------
    InsufficientGridError
        The integrand does not decay fast enough at an end of the samples
        for the tail to be bounded.
    """
    if chi.is_zero or not np.any(samples.value != 0):
        return TruncatedValue(0j, 0.0)
    g = offdiagonal_integrand(samples.tau, samples.value, chi, sp, tol, kernel_values)
    integral = np.trapezoid(g, samples.tau) if hasattr(np, "trapezoid") else np.trapz(g, samples.tau)
    pref = -6.0 / gamma_pm(0.5, 1j * sp.t2) / (2.0 * math.pi)
    tail = _end_tail(samples.tau, g) + _end_tail(samples.tau[::-1], g[::-1])
    if not math.isfinite(tail):
        raise InsufficientGridError("L samples do not reach the decaying part of the integrand")
    return TruncatedValue(complex(pref * integral), float(abs(pref) * tail))
