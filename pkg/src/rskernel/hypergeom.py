"""Gauss and unit-argument 3F2 hypergeometric functions, continuous dual Hahn
polynomials and the conical-type Jacobi function F(3/4−it, 3/4+it; 1; −u).

All routines broadcast over numpy arrays.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from .errors import PoleError, RegionError
from .gammas import POLE_TOL, log_gamma, pole_distance, rgamma

SERIES_RADIUS = 0.75
_DEGENERATE = 1e-5
_RICHARDSON_STEP = 2e-4


def _series(a, b, c, z, max_terms: int = 4000):
    """Plain Gauss series; stops when 3 consecutive terms fall below 1e-17 of the sum."""
    a, b, c, z = np.broadcast_arrays(*(np.asarray(v, dtype=complex) for v in (a, b, c, z)))
    term = np.ones(z.shape, dtype=complex)
    total = term.copy()
    quiet = np.zeros(z.shape, dtype=int)
    for n in range(max_terms):
        term = term * (a + n) * (b + n) / ((c + n) * (n + 1)) * z
        total = total + term
        small = np.abs(term) <= 1e-17 * np.abs(total)
        quiet = np.where(small, quiet + 1, 0)
        if np.all((quiet >= 3) | (term == 0)):
            return total
    raise RegionError("Gauss series did not converge")


def _near_integer(x) -> np.ndarray:
    x = np.asarray(x, dtype=complex)
    return (np.abs(x.imag) < _DEGENERATE) & (np.abs(x.real - np.round(x.real)) < _DEGENERATE)


def _connection(a, b, c, w):
    """F(a,b;c;1−w) from series in w; requires c−a−b away from the integers."""
    d = c - a - b
    lg_c = log_gamma(c)
    first = np.exp(lg_c + log_gamma(d)) * rgamma(c - a) * rgamma(c - b)
    second = np.exp(lg_c + log_gamma(-d)) * rgamma(a) * rgamma(b)
    out = first * _series(a, b, 1.0 - d, w)
    out = out + second * np.exp(d * np.log(w)) * _series(c - a, c - b, 1.0 + d, w)
    return out


def _connection_any(a, b, c, w):
    """F(a,b;c;1−w) by the connection formula, with a Richardson-extrapolated
    symmetric perturbation of ``a`` when c−a−b is (numerically) an integer.

    The caller passes w = 1−z itself so that no digits are lost forming it.
    """
    a, b, c, w = np.broadcast_arrays(*(np.asarray(v, dtype=complex) for v in (a, b, c, w)))
    out = np.empty(w.shape, dtype=complex)
    deg = _near_integer(c - a - b)
    if np.any(~deg):
        out[~deg] = _connection(a[~deg], b[~deg], c[~deg], w[~deg])
    if np.any(deg):
        # the neglected h^4 term grows like (h log w)^4
        h = _RICHARDSON_STEP * np.minimum(1.0, 10.0 / np.abs(np.log(w[deg])))
        args = (b[deg], c[deg], w[deg])
        a0 = a[deg]
        near = 0.5 * (_connection(a0 + h, *args) + _connection(a0 - h, *args))
        far = 0.5 * (_connection(a0 + 2 * h, *args) + _connection(a0 - 2 * h, *args))
        out[deg] = (4.0 * near - far) / 3.0
    return out


def gauss_2f1(a, b, c, z):
    """Gauss hypergeometric function F(a, b; c; z), principal branch.

    Routing per element: the direct series for |z| <= 0.75; the Pfaff
    transform z -> z/(z-1) when that lands inside the same disc; the
    connection formula around z = 1 when |1-z| <= 0.75; and for large
    negative z the Pfaff transform followed by the connection formula.

    Raises
    ------
    PoleError
        ``c`` is a non-positive integer.
    RegionError
        ``z`` lies on [1, ∞) or in an unsupported part of the plane.
    """
    a, b, c, z = np.broadcast_arrays(*(np.asarray(v, dtype=complex) for v in (a, b, c, z)))
    scalar = z.ndim == 0
    a, b, c, z = (np.atleast_1d(v) for v in (a, b, c, z))
    if np.any(pole_distance(c) < POLE_TOL):
        raise PoleError("lower parameter of 2F1 is a non-positive integer")
    if np.any((np.abs(z.imag) < 1e-15) & (z.real >= 1.0)):
        raise RegionError("2F1 is not evaluated on the cut [1, oo)")
    out = np.empty(z.shape, dtype=complex)
    done = np.zeros(z.shape, dtype=bool)
    with np.errstate(divide="ignore", invalid="ignore"):
        pf = z / (z - 1.0)

    direct = np.abs(z) <= SERIES_RADIUS
    if np.any(direct):
        m = direct
        out[m] = _series(a[m], b[m], c[m], z[m])
        done |= m
    m = ~done & (np.abs(pf) <= SERIES_RADIUS)
    if np.any(m):
        out[m] = np.exp(-a[m] * np.log(1.0 - z[m])) * _series(a[m], c[m] - b[m], c[m], pf[m])
        done |= m
    m = ~done & (np.abs(1.0 - z) <= SERIES_RADIUS)
    if np.any(m):
        out[m] = _connection_any(a[m], b[m], c[m], 1.0 - z[m])
        done |= m
    m = ~done & (np.abs(1.0 - pf) <= SERIES_RADIUS)
    if np.any(m):
        out[m] = np.exp(-a[m] * np.log(1.0 - z[m])) * _connection_any(
            a[m], c[m] - b[m], c[m], 1.0 / (1.0 - z[m])
        )
        done |= m
    if not np.all(done):
        raise RegionError(f"2F1 argument {z[~done][0]!r} outside the supported region")
    return out[0] if scalar else out


# ---------------------------------------------------------------------------
# F(3/4 - it, 3/4 + it; 1; -u)

_SPLIT_T_FLOOR = 1e-6


def _jacobi_small_u(t, u):
    w = u / (1.0 + u)
    a = 0.75 - 1j * t
    return np.exp((-0.75 + 1j * t) * np.log1p(u)) * _series(a, 0.25 - 1j * t, 1.0, w)


def _jacobi_split_half(t, u):
    """Γ(1/4−it)Γ(3/4−it)/Γ(−2it) · u^{it−3/4} · F(3/4−it, 3/4−it; 1−2it; −1/u)."""
    a = 0.75 - 1j * t
    pref = np.exp(log_gamma(0.25 - 1j * t) + log_gamma(a) + (1j * t - 0.75) * np.log(u))
    return pref * rgamma(-2j * t) * gauss_2f1(a, a, 1.0 - 2j * t, -1.0 / u)


def jacobi_weight(t):
    """|Γ(1/4+it)Γ(3/4+it)/Γ(2it)|², assembled from entire reciprocal gammas."""
    t = np.asarray(t, dtype=float)
    lg = log_gamma(0.25 + 1j * t) + log_gamma(0.75 + 1j * t)
    return (np.abs(np.exp(lg) * rgamma(2j * t)) ** 2).real


def _jacobi_large_u(t, u):
    t = np.maximum(np.abs(t), _SPLIT_T_FLOOR)
    num = _jacobi_split_half(t, u) + _jacobi_split_half(-t, u)
    return num / jacobi_weight(t)


def jacobi_function(t, u, *, large_u_path: bool | None = None, real: bool = True):
    """F(3/4−it, 3/4+it; 1; −u) for real t and u ≥ 0.

    For u <= 1 the Pfaff-transformed series in u/(1+u) is summed; for u > 1
    the function is split into the two large-u branches u^{±it−3/4} and
    divided by |Γ(1/4+it)Γ(3/4+it)/Γ(2it)|².  Near t = 0 the split is
    evaluated at |t| = 1e-6 where the removable singularity is harmless.
    ``large_u_path`` forces one path (for cross-checks).
    """
    t, u = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(u, dtype=float))
    scalar = t.ndim == 0
    t, u = np.atleast_1d(t), np.atleast_1d(u)
    if np.any(u < 0):
        raise RegionError("jacobi_function needs u >= 0")
    t = np.abs(t)  # the function is even in t; this makes it so bit for bit
    big = u > 1.0 if large_u_path is None else np.full(u.shape, bool(large_u_path))
    out = np.empty(u.shape, dtype=complex)
    if np.any(~big):
        out[~big] = _jacobi_small_u(t[~big], u[~big])
    if np.any(big):
        if np.any(u[big] == 0):
            raise RegionError("large-u path needs u > 0")
        out[big] = _jacobi_large_u(t[big], u[big])
    if real:
        out = out.real
    return out[0] if scalar else out


# ---------------------------------------------------------------------------
# unit-argument 3F2


class _QC:
    """Exact complex rational number."""

    __slots__ = ("re", "im")

    def __init__(self, re, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    @classmethod
    def of(cls, z) -> "_QC":
        z = complex(z)
        return cls(Fraction(z.real), Fraction(z.imag))

    def __add__(self, o):
        o = o if isinstance(o, _QC) else _QC.of(o)
        return _QC(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, o):
        o = o if isinstance(o, _QC) else _QC.of(o)
        return _QC(self.re - o.re, self.im - o.im)

    def __neg__(self):
        return _QC(-self.re, -self.im)

    def __mul__(self, o):
        o = o if isinstance(o, _QC) else _QC.of(o)
        return _QC(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = o if isinstance(o, _QC) else _QC.of(o)
        den = o.re * o.re + o.im * o.im
        if den == 0:
            raise ZeroDivisionError("exact complex division by zero")
        return _QC((self.re * o.re + self.im * o.im) / den, (self.im * o.re - self.re * o.im) / den)

    def __complex__(self):
        return complex(float(self.re), float(self.im))


def _terminating_order(params) -> int | None:
    best = None
    for a in params:
        if np.ndim(a):
            continue
        a = complex(a)
        if abs(a.imag) < 1e-14 and a.real < 0.5 and abs(a.real - round(a.real)) < 1e-14:
            n = -int(round(a.real))
            best = n if best is None else min(best, n)
    return best


def _levin_u(partial: np.ndarray, terms: np.ndarray, n0: int = 0, beta: float = 1.0):
    """Sequence of Levin u-transform estimates T_k^{(n0)} for k = 1, 2, ..."""
    est = []
    kmax = len(partial) - n0 - 1
    for k in range(1, kmax + 1):
        j = np.arange(k + 1)
        ratio = ((beta + n0 + j) / (beta + n0 + k)) ** (k - 1)
        coef = np.array([(-1) ** jj * comb(k, jj) for jj in j], dtype=float) * ratio
        omega = (beta + n0 + j) * terms[n0 + j]
        num = np.sum(coef * partial[n0 + j] / omega)
        den = np.sum(coef / omega)
        est.append(num / den)
    return np.array(est)


def f3f2_unit(a1, a2, a3, b1, b2, *, exact: bool = False):
    """3F2(a1, a2, a3; b1, b2; 1).

    Terminating series (some upper parameter a non-positive integer) are
    summed term by term, in exact rational arithmetic when ``exact`` is set.
    Otherwise the series must converge (Re(b1+b2−a1−a2−a3) > 0) and its
    partial sums are accelerated with the Levin u-transform.
    """
    ups = (a1, a2, a3)
    nterm = _terminating_order(ups)
    if nterm is not None:
        if exact:
            qa = [_QC.of(v) for v in ups]
            qb = [_QC.of(b1), _QC.of(b2)]
            term = _QC(1)
            total = _QC(1)
            for k in range(nterm):
                num = (qa[0] + k) * (qa[1] + k) * (qa[2] + k)
                den = (qb[0] + k) * (qb[1] + k) * (k + 1)
                term = term * num / den
                total = total + term
            return complex(total)
        args = np.broadcast_arrays(*(np.asarray(v, dtype=complex) for v in (a1, a2, a3, b1, b2)))
        a1v, a2v, a3v, b1v, b2v = args
        term = np.ones(a1v.shape, dtype=complex)
        total = term.copy()
        for k in range(nterm):
            term = term * (a1v + k) * (a2v + k) * (a3v + k) / ((b1v + k) * (b2v + k) * (k + 1))
            total = total + term
        return total[()] if total.ndim == 0 else total
    if exact:
        raise ValueError("exact evaluation needs a terminating series")
    excess = complex(b1) + complex(b2) - complex(a1) - complex(a2) - complex(a3)
    if excess.real <= 0:
        raise RegionError(f"3F2 at 1 diverges: parameter excess {excess}")
    return _f3f2_levin(complex(a1), complex(a2), complex(a3), complex(b1), complex(b2))


def _f3f2_levin(a1, a2, a3, b1, b2, nterms: int = 60):
    terms = np.empty(nterms, dtype=complex)
    t = 1.0 + 0j
    for k in range(nterms):
        terms[k] = t
        t = t * (a1 + k) * (a2 + k) * (a3 + k) / ((b1 + k) * (b2 + k) * (k + 1))
    if np.all(terms[1:] == 0):
        return complex(terms[0])
    partial = np.cumsum(terms)
    est = _levin_u(partial, terms)
    # take the estimate where successive transforms agree best
    diffs = np.abs(np.diff(est))
    lo = 4
    k = lo + int(np.argmin(diffs[lo:])) + 1
    return complex(est[k])


# ---------------------------------------------------------------------------
# continuous dual Hahn polynomials


@dataclass(frozen=True)
class HahnParams:
    a: complex
    b: complex
    c: complex

    def __post_init__(self):
        for name in ("a", "b", "c"):
            v = complex(getattr(self, name))
            if v.real <= 0:
                raise ValueError(f"{name} must have positive real part")
            object.__setattr__(self, name, v)


def _hahn_coeffs(n, p: HahnParams):
    a, b, c = p.a, p.b, p.c
    up_ = (n + a + b) * (n + a + c)
    dn = n * (n + b + c - 1)
    return up_, dn


def hahn_sequence(nmax: int, x2, p: HahnParams) -> np.ndarray:
    """S_0..S_nmax(x²; a, b, c); leading axis runs over the degree.

    Uses the three-term recurrence
    S_{n+1} = (A_n + C_n − a² − x²) S_n − C_n A_{n−1} S_{n−1},
    A_n = (n+a+b)(n+a+c), C_n = n(n+b+c−1).
    """
    x2 = np.asarray(x2, dtype=complex)
    out = np.empty((nmax + 1,) + x2.shape, dtype=complex)
    out[0] = 1.0
    if nmax == 0:
        return out
    a2 = p.a * p.a
    prev_up = None
    for n in range(nmax):
        up_, dn = _hahn_coeffs(n, p)
        nxt = (up_ + dn - a2 - x2) * out[n]
        if n > 0:
            nxt = nxt - dn * prev_up * out[n - 1]
        out[n + 1] = nxt
        prev_up = up_
    return out


def continuous_dual_hahn(n: int, x2, p: HahnParams):
    """S_n(x²; a, b, c), with S_n/((a+b)_n (a+c)_n) = 3F2(−n, a+ix, a−ix; a+b, a+c; 1)."""
    if n < 0:
        raise ValueError("degree must be non-negative")
    seq = hahn_sequence(n, x2, p)
    return seq[n][()] if seq[n].ndim == 0 else seq[n]


def hahn_ratio_sequence(nmax: int, x2, p: HahnParams) -> np.ndarray:
    """Normalized values S_n/((a+b)_n (a+c)_n) for n = 0..nmax, by the
    normalized form of the same recurrence (no factorial growth)."""
    x2 = np.asarray(x2, dtype=complex)
    out = np.empty((nmax + 1,) + x2.shape, dtype=complex)
    out[0] = 1.0
    a2 = p.a * p.a
    for n in range(nmax):
        up_, dn = _hahn_coeffs(n, p)
        nxt = (up_ + dn - a2 - x2) * out[n]
        if n > 0:
            nxt = nxt - dn * out[n - 1]
        out[n + 1] = nxt / up_
    return out
