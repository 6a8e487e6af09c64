"""Complex gamma machinery.

Everything here is vectorized over numpy arrays and works in complex128.
``log_gamma`` is the principal branch, built from a Stirling series after
upward recurrence.  Products of many gammas are accumulated in log space by
the callers and exponentiated once.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import PoleError

POLE_TOL = 1e-12

# B_2 .. B_24
_BERNOULLI = [
    Fraction(1, 6), Fraction(-1, 30), Fraction(1, 42), Fraction(-1, 30),
    Fraction(5, 66), Fraction(-691, 2730), Fraction(7, 6), Fraction(-3617, 510),
    Fraction(43867, 798), Fraction(-174611, 330), Fraction(854513, 138),
    Fraction(-236364091, 2730),
]
# coefficients B_2k / (2k (2k-1)) of the Stirling series
_STIRLING = np.array(
    [float(b / ((2 * k) * (2 * k - 1))) for k, b in enumerate(_BERNOULLI, start=1)]
)
_HALF_LOG_2PI = 0.5 * np.log(2.0 * np.pi)
# |w| beyond which the truncated series is accurate to well below 1e-16
_STIRLING_RADIUS = 7.0
_N_TERMS = 12


def _as_complex(z) -> np.ndarray:
    return np.asarray(z, dtype=np.complex128)


def pole_distance(z) -> np.ndarray:
    """Distance from ``z`` to the nearest non-positive integer."""
    z = _as_complex(z)
    nearest = np.minimum(np.round(z.real), 0.0)
    return np.abs(z - nearest)


def _check_poles(z: np.ndarray) -> None:
    bad = pole_distance(z) < POLE_TOL
    if np.any(bad):
        raise PoleError(f"gamma pole at argument {z[bad].ravel()[0]!r}")


def _stirling(w: np.ndarray) -> np.ndarray:
    r = 1.0 / w
    r2 = r * r
    acc = np.zeros_like(w)
    for c in _STIRLING[_N_TERMS - 1::-1]:
        acc = acc * r2 + c
    return (w - 0.5) * np.log(w) - w + _HALF_LOG_2PI + r * acc


def log_gamma(z):
    """Principal branch of log Γ(z).

    Raises
    ------
    PoleError
        If ``z`` is within 1e-12 of a non-positive integer.

    Notes
    -----
    The argument is pushed to the right with ``log Γ(z) = log Γ(z+1) - log z``
    until the Stirling series is accurate.  Summing the logarithms (rather
    than taking the log of the product) keeps the imaginary part on the
    principal branch, consistent with ``log Γ(z+1) = log z + log Γ(z)``.
    """
    z = _as_complex(z)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    _check_poles(z)
    x = z.real
    far = np.abs(z.imag) >= _STIRLING_RADIUS
    shift = np.where(far, np.ceil(1.0 - x), np.ceil(_STIRLING_RADIUS - x))
    shift = np.maximum(shift, 0.0).astype(np.int64)
    acc = np.zeros_like(z)
    for k in range(int(shift.max(initial=0))):
        m = shift > k
        acc[m] += np.log(z[m] + k)
    out = _stirling(z + shift) - acc
    return out[0] if scalar else out


def gamma(z):
    """Γ(z) as ``exp(log_gamma(z))``."""
    return np.exp(log_gamma(z))


def rgamma(z):
    """1/Γ(z), an entire function; exactly zero at the poles of Γ."""
    z = _as_complex(z)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    out = np.zeros_like(z)
    near = pole_distance(z) < POLE_TOL
    if np.any(~near):
        out[~near] = np.exp(-log_gamma(z[~near]))
    if np.any(near):
        # 1/Γ(z) ≈ (-1)^n n! (z + n) next to the pole at -n
        n = -np.round(z[near].real)
        fact = np.exp(log_gamma(n + 1.0).real)
        out[near] = (-1.0) ** n * fact * (z[near] + n)
    return out[0] if scalar else out


def gamma_pm(x, y):
    """Γ(x+y)Γ(x−y), symmetric in the sign of ``y`` bit for bit."""
    x, y = _as_complex(x), _as_complex(y)
    return np.exp(log_gamma(x + y) + log_gamma(x - y))


def gamma_pm2(x, y, z):
    """Product of Γ(x ± y ± z) over all four sign choices."""
    x, y, z = _as_complex(x), _as_complex(y), _as_complex(z)
    plus = log_gamma(x + y + z) + log_gamma(x + y - z)
    minus = log_gamma(x - y + z) + log_gamma(x - y - z)
    return np.exp(plus + minus)


def pochhammer(w, n: int):
    """Rising factorial (w)_n as a finite product."""
    if n < 0:
        raise ValueError("pochhammer needs n >= 0")
    w = _as_complex(w)
    out = np.ones_like(w)
    for k in range(n):
        out = out * (w + k)
    return out


_MAX_EXP = 709.0


def _sincos_real_pi(x: np.ndarray):
    """sin(πx), cos(πx) for real x, exact at multiples of 1/2."""
    n = np.round(2.0 * x)
    f = np.pi * (x - 0.5 * n)
    s, c = np.sin(f), np.cos(f)
    q = np.mod(n, 4).astype(np.int64)
    sin_out = np.choose(q, [s, c, -s, -c])
    cos_out = np.choose(q, [c, -s, -c, s])
    return sin_out, cos_out


def _split(z):
    z = _as_complex(z)
    py = np.pi * z.imag
    if np.any(np.abs(py) > _MAX_EXP):
        raise OverflowError("|Im z| too large for sin(pi z)")
    return z, py


def sin_pi(z):
    """sin(πz) with exact reduction of the real part."""
    z, py = _split(z)
    s, c = _sincos_real_pi(z.real)
    return s * np.cosh(py) + 1j * c * np.sinh(py)


def cos_pi(z):
    """cos(πz) with exact reduction of the real part."""
    z, py = _split(z)
    s, c = _sincos_real_pi(z.real)
    return c * np.cosh(py) - 1j * s * np.sinh(py)


def zeta(s):
    """Riemann zeta via Euler–Maclaurin summation, for s away from 1.

    Accurate to roughly 1e-14 relative for Re s >= 1/2 and moderate |Im s|.
    """
    s = _as_complex(s)
    if np.any(np.abs(s - 1.0) < POLE_TOL):
        raise PoleError("zeta pole at s = 1")
    n_head = 16 + int(np.ceil(np.max(np.abs(s), initial=0.0)))
    k = np.arange(1, n_head, dtype=float)
    head = np.sum(np.exp(-s[..., None] * np.log(k)), axis=-1)
    big = float(n_head)
    lnb = np.log(big)
    nsb = np.exp(-s * lnb)
    out = head + big * nsb / (s - 1.0) + 0.5 * nsb
    # Bernoulli corrections: B_2j/(2j)! · s(s+1)...(s+2j-2) · N^{-s-2j+1}
    rising = s.copy()
    fact = 2.0
    power = nsb / big
    for j, b in enumerate(_BERNOULLI[:_N_TERMS], start=1):
        out = out + float(b) / fact * rising * power
        rising = rising * (s + 2 * j - 1) * (s + 2 * j)
        fact *= (2 * j + 1) * (2 * j + 2)
        power = power / (big * big)
    return out


@dataclass(frozen=True)
class SpectralParams:
    """The pair of real spectral parameters of the two cusp forms."""

    t1: float
    t2: float

    def __post_init__(self):
        for name in ("t1", "t2"):
            v = getattr(self, name)
            if not np.isfinite(v) or v <= 0:
                raise ValueError(f"{name} must be a positive real, got {v!r}")

    @property
    def s1(self) -> complex:
        return 0.5 + 1j * self.t1

    @property
    def s2(self) -> complex:
        return 0.5 + 1j * self.t2
