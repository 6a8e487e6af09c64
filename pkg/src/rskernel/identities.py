"""Both-sides verification of the analytic identities behind the kernels.

Every check evaluates the two sides of an identity by disjoint code paths
(a Barnes integral or quadrature on one side, a closed form or a different
representation on the other) and packages the result as a
:class:`VerificationReport`.  Checks are grouped under identity ids in
:data:`REGISTRY`; :func:`run_suite` expands them into independent cases,
runs those on a thread pool and returns the reports in declaration order.
"""
from __future__ import annotations

import itertools
import json
import math
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable, Iterable

import numpy as np

from .barnes import BarnesIntegrand, down, integrate, plan_contour, up
from .errors import PinchedContourError, RSKernelError
from .gammas import (
    SpectralParams, gamma_pm, gamma_pm2, log_gamma, pole_distance, rgamma, sin_pi, zeta,
)
from .hypergeom import HahnParams, f3f2_unit, gauss_2f1, hahn_ratio_sequence, jacobi_function
from .kernel import KernelTable, hahn_coefficient, invert_kernel, selberg_transform
from .quadrature import adaptive_panels
from .theta import coset_sums, theta_tail, weighted_theta
from .whittaker import (
    WhittakerUnderflowWarning, theta_tail_mellin, whittaker_pair_mellin, whittaker_pair_mellin_barnes,
    whittaker_w,
)
from .wilson import ChiSpec, WilsonParams, wilson_function, wilson_minus, wilson_plus

DEFAULT_SPECTRAL = SpectralParams(0.8, 1.3)
# Re S on the shifted line used by the kernel identities
SHIFTED_RE = 0.49


# ---------------------------------------------------------------------------
# reports


def _encode(v):
    if isinstance(v, (complex, np.complexfloating)):
        return [float(v.real), float(v.imag)]
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, SpectralParams):
        return {"t1": v.t1, "t2": v.t2}
    if isinstance(v, (list, tuple)):
        return [_encode(x) for x in v]
    if isinstance(v, dict):
        return {k: _encode(x) for k, x in v.items()}
    return v


@dataclass
class VerificationReport:
    """One both-sides comparison.

    ``relation`` is ``"equal"`` for identities and ``"le"`` for inequalities
    (``lhs`` bounded by ``rhs``).  ``skipped`` marks cases that could not be
    evaluated at the given parameters (for instance a pinched contour); they
    do not count as failures.
    """

    identity_id: str
    inputs: dict
    lhs: complex
    rhs: complex
    abs_dev: float
    rel_dev: float
    tol: float
    passed: bool
    runtime_ms: float
    relation: str = "equal"
    skipped: bool = False
    note: str = ""

    @classmethod
    def compare(cls, identity_id: str, inputs: dict, lhs, rhs, tol: float, *, relation: str = "equal",
                runtime_ms: float = 0.0, note: str = "") -> "VerificationReport":
        lhs, rhs = complex(lhs), complex(rhs)
        if relation == "equal":
            abs_dev = abs(lhs - rhs)
            rel_dev = abs_dev / max(abs(lhs), abs(rhs), 1e-300)
            small = abs(lhs) < 1.0 and abs(rhs) < 1.0
            passed = rel_dev <= tol or (small and abs_dev <= tol)
        elif relation == "le":
            abs_dev = max(abs(lhs) - abs(rhs), 0.0)
            rel_dev = abs_dev / max(abs(rhs), 1e-300)
            passed = abs(lhs) <= abs(rhs) * (1.0 + tol)
        else:
            raise ValueError(f"unknown relation {relation!r}")
        return cls(identity_id, _encode(inputs), lhs, rhs, abs_dev, rel_dev, tol, bool(passed),
                   runtime_ms, relation, False, note)

    @classmethod
    def untestable(cls, identity_id: str, inputs: dict, tol: float, reason: str) -> "VerificationReport":
        nan = complex(math.nan, math.nan)
        return cls(identity_id, _encode(inputs), nan, nan, math.nan, math.nan, tol, False, 0.0,
                   "equal", True, f"untestable at these parameters: {reason}")

    @property
    def status(self) -> str:
        if self.skipped:
            return "skip"
        return "pass" if self.passed else "fail"

    def to_dict(self) -> dict:
        d = asdict(self)
        d["lhs"] = _encode(self.lhs)
        d["rhs"] = _encode(self.rhs)
        for key in ("abs_dev", "rel_dev"):
            if math.isnan(d[key]):
                d[key] = None
        if any(math.isnan(x) for x in d["lhs"] + d["rhs"]):
            d["lhs"] = d["rhs"] = None
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "VerificationReport":
        d = dict(d)
        nan = complex(math.nan, math.nan)
        for key in ("lhs", "rhs"):
            d[key] = nan if d[key] is None else complex(*d[key])
        for key in ("abs_dev", "rel_dev"):
            if d[key] is None:
                d[key] = math.nan
        return cls(**d)

    @classmethod
    def from_json(cls, line: str) -> "VerificationReport":
        return cls.from_dict(json.loads(line))


REPORT_SCHEMA = {
    "type": "object",
    "required": ["identity_id", "inputs", "lhs", "rhs", "abs_dev", "rel_dev", "tol", "passed", "runtime_ms"],
    "properties": {
        "identity_id": {"type": "string"},
        "inputs": {"type": "object"},
        "lhs": {"type": ["array", "null"], "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
        "rhs": {"type": ["array", "null"], "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
        "abs_dev": {"type": ["number", "null"], "minimum": 0},
        "rel_dev": {"type": ["number", "null"], "minimum": 0},
        "tol": {"type": "number", "minimum": 0},
        "passed": {"type": "boolean"},
        "runtime_ms": {"type": "number", "minimum": 0},
        "relation": {"enum": ["equal", "le"]},
        "skipped": {"type": "boolean"},
        "note": {"type": "string"},
    },
    "additionalProperties": False,
}


def _timed(fn: Callable[[], VerificationReport]) -> VerificationReport:
    start = time.perf_counter()
    rep = fn()
    rep.runtime_ms = (time.perf_counter() - start) * 1e3
    return rep


# ---------------------------------------------------------------------------
# finite and trigonometric identities


def _rational(z) -> tuple[Fraction, Fraction]:
    z = complex(z)
    return Fraction(z.real), Fraction(z.imag)


def _qmul(x, y):
    return (x[0] * y[0] - x[1] * y[1], x[0] * y[1] + x[1] * y[0])


def binomial_gamma_sum(N: int, a, s) -> complex:
    """Σ_j (−1)^j C(N,j) Γ(a+N)/Γ(a+j) · Γ(a+j+s)/Γ(a+s).

    Each gamma ratio is a rising factorial, so the sum is accumulated in
    exact rational arithmetic at the binary values of ``a`` and ``s``; the
    alternating terms cancel heavily for large N and this keeps every digit.
    """
    if N < 0:
        raise ValueError("N must be non-negative")
    qa, qs = _rational(a), _rational(s)
    total = (Fraction(0), Fraction(0))
    for j in range(N + 1):
        term = (Fraction((-1) ** j * math.comb(N, j)), Fraction(0))
        for k in range(j, N):  # (a+j)_{N−j}
            term = _qmul(term, (qa[0] + k, qa[1]))
        for k in range(j):  # (a+s)_j
            term = _qmul(term, (qa[0] + qs[0] + k, qa[1] + qs[1]))
        total = (total[0] + term[0], total[1] + term[1])
    return complex(float(total[0]), float(total[1]))


def verify_binomial_gamma_sum(N: int, a, s, tol: float = 1e-11) -> VerificationReport:
    """The alternating binomial sum against Γ(N−s)/Γ(−s), the latter in log space."""
    a, s = complex(a), complex(s)

    def run():
        lhs = binomial_gamma_sum(N, a, s)
        if abs(s - round(s.real)) < 1e-14 and s.real >= 0 and round(s.real) < N:
            rhs = 0j  # Γ(N−s)/Γ(−s) vanishes at s = 0..N−1
        else:
            rhs = complex(np.exp(log_gamma(N - s)) * rgamma(-s))
        return VerificationReport.compare("binomial-gamma-sum", dict(N=N, a=a, s=s), lhs, rhs, tol)

    return _timed(run)


def random_binomial_cases(count: int = 50, seed: int = 20240601, radius: float = 5.0, gap: float = 0.1):
    """(a, s) pairs with |a|, |s| <= radius and every gamma argument at least
    ``gap`` away from the non-positive integers, for all N up to 10."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        a, s = (radius * math.sqrt(rng.random()) * np.exp(2j * np.pi * rng.random()) for _ in range(2))
        args = [a + j for j in range(11)] + [a + s + j for j in range(11)] + [-s, 10 - s]
        if np.min(pole_distance(np.array(args))) >= gap:
            out.append((complex(a), complex(s)))
    return out


def sine_partition_terms(S, n: int, t2: float) -> tuple[complex, complex]:
    """The two terms whose sum is 1:
    sin π(1/2−it2−n−S)/sin π(1/2+it2−n−S) and
    sin πS · sin π(1+2it2) / (sin π(1/2−it2−n) sin π(3/2+it2−n−S))."""
    S, it2 = complex(S), 1j * t2
    den1 = complex(sin_pi(0.5 + it2 - n - S))
    den2 = complex(sin_pi(0.5 - it2 - n)) * complex(sin_pi(1.5 + it2 - n - S))
    if abs(den1) < 1e-14 or abs(den2) < 1e-14:
        raise ZeroDivisionError("a denominator of the sine partition vanishes")
    first = complex(sin_pi(0.5 - it2 - n - S)) / den1
    second = complex(sin_pi(S)) * complex(sin_pi(1.0 + 2.0 * it2)) / den2
    return first, second


def verify_sine_partition(S, n: int, t2: float, tol: float = 1e-12) -> VerificationReport:
    def run():
        first, second = sine_partition_terms(S, n, t2)
        return VerificationReport.compare("sine-partition", dict(S=complex(S), n=n, t2=t2), first + second, 1.0, tol)

    return _timed(run)


def verify_residue_constant(t1: float, tol: float = 1e-14) -> VerificationReport:
    """π/(2Γ(1/2±it1)) against ζ(2)/(Γ(1/2±it1)·π/3).

    The left side uses the reflection formula Γ(1/2±it1) = π/cosh(πt1), the
    right side the computed ζ(2) and gamma values.
    """
    def run():
        lhs = math.cosh(math.pi * t1) / 2.0
        rhs = complex(zeta(2.0)) / (complex(gamma_pm(0.5, 1j * t1)) * math.pi / 3.0)
        return VerificationReport.compare("residue-constant", dict(t1=t1), lhs, rhs, tol)

    return _timed(run)


# ---------------------------------------------------------------------------
# Jacobi-function moments


def jacobi_moment(n: int, t: float, t0: float, tol: float = 1e-9) -> float:
    """∫_0^∞ F(3/4−it, 3/4+it; 1; −u) u^n F(1/2+it0+n, 1/2−it0+n; 1+n; −u) du.

    Quadrature in v = log u over [−40, 90]; the integrand is O(u^{n+1}) at
    the lower end and O(u^{−1/4}) (oscillating) at the upper end, so the
    dropped pieces are below 1e-10.
    """
    def f(v):
        u = np.exp(v)
        second = gauss_2f1(0.5 + 1j * t0 + n, 0.5 - 1j * t0 + n, 1.0 + n, -u).real
        return np.exp((n + 1) * v) * jacobi_function(t, u) * second

    return float(adaptive_panels(f, np.arange(-40.0, 91.0, 1.0), tol))


def jacobi_moment_closed_form(n: int, t: float, t0: float) -> complex:
    it, it0 = 1j * t, 1j * t0
    pref = gamma_pm2(0.25, it, it0) / (gamma_pm(0.75, it) * gamma_pm(0.5, it0))
    ratio = np.exp(log_gamma(1.0 + n) - log_gamma(0.5 + n))
    poly = f3f2_unit(-n, 0.25 + it, 0.25 - it, 0.5 + it0, 0.5 - it0)
    return complex(pref * ratio * poly)


def verify_jacobi_moment(n: int, t: float, t0: float, tol: float = 1e-6) -> VerificationReport:
    def run():
        lhs = jacobi_moment(n, t, t0, tol=min(1e-9, tol / 100))
        rhs = jacobi_moment_closed_form(n, t, t0)
        return VerificationReport.compare("jacobi-moment", dict(n=n, t=t, t0=t0), lhs, rhs, tol)

    return _timed(run)


# ---------------------------------------------------------------------------
# generating series of continuous dual Hahn polynomials


@dataclass(frozen=True)
class SeriesParams:
    hahn: HahnParams = HahnParams(0.25, 0.25 - 0.8j, 0.25 + 0.8j)
    gamma: complex = 0.9
    A: complex = 1.1
    B: complex = 7.0
    x: float = 0.6


def hahn_generating_series(p: SeriesParams, tol: float = 1e-9, nmax: int = 20000):
    """Σ_n 3F2(−n, a±ix; a+b, a+c; 1)/n! · (γ)_n (A)_n/(A+B)_n.

    Terms decay like a power of n; the truncation point doubles until a
    power law fitted to the last terms bounds the rest of the series by
    ``tol``/10 of the partial sum.  Returns (sum, tail estimate, terms used).

    Raises
    ------
    InsufficientGridError
        The terms do not decay fast enough to reach the target before ``nmax``.
    """
    from .errors import InsufficientGridError

    g, A, B = complex(p.gamma), complex(p.A), complex(p.B)
    n = 64
    while True:
        poly = hahn_ratio_sequence(n, p.x * p.x, p.hahn)
        k = np.arange(n + 1, dtype=float)
        lw = (log_gamma(g + k) - log_gamma(g)) + (log_gamma(A + k) - log_gamma(A)) - (
            log_gamma(A + B + k) - log_gamma(A + B)
        ) - log_gamma(k + 1.0)
        terms = poly * np.exp(lw)
        total = complex(terms.sum())
        tail_idx = np.arange(n // 2, n + 1)
        mag = np.log(np.abs(terms[tail_idx]) + 1e-300)
        slope, icept = np.polyfit(np.log(tail_idx), mag, 1)
        if slope < -1.0:
            # Σ_{m>n} C m^slope <= C n^{slope+1}/(−slope−1)
            tail = math.exp(icept) * n ** (slope + 1.0) / (-slope - 1.0)
            if tail <= 0.1 * tol * max(abs(total), 1e-300):
                return total, tail, n
        if n >= nmax:
            raise InsufficientGridError(f"series tail still above tol/10 after {n} terms")
        n *= 2


def hahn_generating_integral(p: SeriesParams, tol: float = 1e-10) -> complex:
    """Gamma prefactor times (1/2πi)∫_(−c) Γ(γ+s)Γ(A+s)Γ(a±ix+s)Γ(−s)Γ(B−γ−s)/(Γ(a+b+s)Γ(a+c+s)) ds."""
    h = p.hahn
    g, A, B, ix = complex(p.gamma), complex(p.A), complex(p.B), 1j * p.x
    f = BarnesIntegrand(
        numerator=[up(g), up(A), up(h.a + ix), up(h.a - ix), down(0.0), down(B - g)],
        denominator=[up(h.a + h.b), up(h.a + h.c)],
    )
    c = 0.5 * min(h.a.real, g.real, A.real)
    val = integrate(f, plan_contour(f, hint_abscissa=-c), tol)
    lpref = (log_gamma(h.a + h.b) + log_gamma(h.a + h.c) + log_gamma(A + B)) - (
        log_gamma(g) + log_gamma(A) + log_gamma(B) + log_gamma(h.a + ix) + log_gamma(h.a - ix)
        + log_gamma(A + B - g)
    )
    return complex(np.exp(lpref) * val)


def verify_hahn_generating_series(p: SeriesParams = SeriesParams(), tol: float = 1e-6) -> VerificationReport:
    def run():
        total, tail, used = hahn_generating_series(p, tol=min(1e-9, tol / 100))
        rhs = hahn_generating_integral(p)
        inputs = dict(a=p.hahn.a, b=p.hahn.b, c=p.hahn.c, gamma=p.gamma, A=p.A, B=p.B, x=p.x)
        return VerificationReport.compare("hahn-generating-series", inputs, total, rhs, tol,
                                          note=f"{used} terms, tail estimate {tail:.2e}")

    return _timed(run)


def _log_hahn_grid(h: HahnParams, nmax: int, xs: np.ndarray) -> np.ndarray:
    vals = hahn_ratio_sequence(nmax, xs * xs, h)
    return np.log(np.abs(vals) + 1e-300)


def _bound_margin(M: float, logf: np.ndarray, n: np.ndarray, x: np.ndarray) -> float:
    bound = math.log(M) + M * np.abs(x)[None, :] + M * np.log1p(n)[:, None]
    return float(np.max(logf - bound))


def fit_growth_constant(h: HahnParams, nmax: int = 50, xmax: float = 5.0, points: int = 101) -> float:
    """Smallest M on a grid with |3F2(−n, a±ix; a+b, a+c; 1)| <= M e^{M|x|} (1+n)^M
    for n <= nmax and |x| <= xmax (the function is even in x)."""
    xs = np.linspace(0.0, xmax, points)
    n = np.arange(nmax + 1, dtype=float)
    logf = _log_hahn_grid(h, nmax, xs)
    lo, hi = 1e-6, 1.0
    while _bound_margin(hi, logf, n, xs) > 0:
        hi *= 2.0
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if _bound_margin(mid, logf, n, xs) > 0:
            lo = mid
        else:
            hi = mid
    return hi


def verify_hahn_growth_bound(h: HahnParams = SeriesParams().hahn, nmax: int = 50, xmax: float = 5.0,
                             tol: float = 1e-12) -> VerificationReport:
    """Fits M on a coarse x grid and checks the bound on a 7x finer one.

    Reported as an inequality: lhs is the largest ratio
    |3F2| / (M e^{M|x|}(1+n)^M) on the fine grid, rhs is 1.
    """
    def run():
        M = fit_growth_constant(h, nmax, xmax)
        xs = np.linspace(0.0, xmax, 701)
        n = np.arange(nmax + 1, dtype=float)
        worst = math.exp(_bound_margin(M, _log_hahn_grid(h, nmax, xs), n, xs))
        inputs = dict(a=h.a, b=h.b, c=h.c, nmax=nmax, xmax=xmax)
        return VerificationReport.compare("hahn-growth-bound", inputs, worst, 1.0, tol, relation="le",
                                          note=f"fitted M = {M:.6g}")

    return _timed(run)


# ---------------------------------------------------------------------------
# kernel Barnes pair


def _shifted_pair_integrands(n: int, B, S, sp: SpectralParams):
    it1, it2 = 1j * sp.t1, 1j * sp.t2
    first = BarnesIntegrand(
        numerator=[
            down(-0.5 + it1 + S), down(-0.5 - it1 + S), up(0.5 + it2), up(0.5 - it2),
            up(1.0 - n - S), down(n - 1.0 + B),
        ],
        denominator=[up(1.0 - n), down(n - 1.0 + B + S)],
    )
    ratio = complex(sin_pi(sp.s2) / sin_pi(sp.s1))
    second = BarnesIntegrand(
        numerator=[down(-0.5 + it2 + S), down(-0.5 - it2 + S), up(0.5 + it1), up(0.5 - it1),
                   up(1.0 + n - S), up(B - S + n)],
        denominator=[up(B + n), up(1.0 + n)],
        scalar=ratio,
    )
    return first, second


def kernel_barnes_pair_integrals(n: int, B, S, sp: SpectralParams, tol: float = 1e-9) -> tuple[complex, complex]:
    """The two Barnes integrals of the pair; for n = 0 on the line Re s = −0.255,
    otherwise on planned contours (loops around poles on the wrong side)."""
    hint = -0.255 if n == 0 else None
    return tuple(integrate(f, plan_contour(f, hint_abscissa=hint), tol)
                 for f in _shifted_pair_integrands(n, complex(B), complex(S), sp))


def kernel_barnes_pair_closed_forms(n: int, B, S, sp: SpectralParams, tol: float = 1e-10) -> tuple[complex, complex]:
    """Closed forms of the pair through Wilson functions at argument i((1−B)/2 − n)."""
    B, S = complex(B), complex(S)
    it1, it2 = 1j * sp.t1, 1j * sp.t2
    pref = (-1.0) ** (n - 1) * np.exp(log_gamma(B - S) + log_gamma(1.0 - S)) * gamma_pm(0.5 - n, it1)
    pref = complex(pref * sin_pi(sp.s2) / sin_pi(sp.s1))
    x = 1j * ((1.0 - B) / 2.0 - n)
    lam = 1j * (0.5 - S)
    first = second = 0j
    for sign in (1, -1):
        j2 = sign * it2
        q = wilson_function(WilsonParams(1.0 - B / 2 + j2, B / 2 + it1, B / 2 - it1, 1.0 - B / 2 - j2, lam, x), tol)
        lg = log_gamma(B - 0.5 + n + j2) + log_gamma(0.5 + n + j2) + log_gamma(S + it1 + j2) + log_gamma(S - it1 + j2)
        core = complex(np.exp(lg) / sin_pi(2.0 * j2)) * q
        first += core * complex(sin_pi(sp.s1))
        second += core * complex(sin_pi(0.5 - j2 - S))
    return pref * first, pref * second


def verify_kernel_barnes_pair(n: int, B, S, sp: SpectralParams = DEFAULT_SPECTRAL,
                              tol: float | None = None) -> list[VerificationReport]:
    """Both Barnes integrals of the pair against their Wilson-function forms."""
    tol = (1e-5 if n == 0 else 1e-4) if tol is None else tol
    ident = "kernel-barnes-pair" if n == 0 else "kernel-barnes-pair-shifted"
    inputs = dict(n=n, B=complex(B), S=complex(S), t1=sp.t1, t2=sp.t2)
    start = time.perf_counter()
    try:
        lhs = kernel_barnes_pair_integrals(n, B, S, sp, tol=min(1e-9, tol / 1000))
        rhs = kernel_barnes_pair_closed_forms(n, B, S, sp)
    except PinchedContourError as exc:
        return [VerificationReport.untestable(ident, dict(inputs, form=k), tol, str(exc)) for k in ("first", "second")]
    ms = (time.perf_counter() - start) * 1e3 / 2
    return [
        VerificationReport.compare(ident, dict(inputs, form=k), l, r, tol, runtime_ms=ms)
        for k, l, r in zip(("first", "second"), lhs, rhs)
    ]


# ---------------------------------------------------------------------------
# nested kernel integrals

# The outer and inner lines are deformed from the ones next to the poles
# (distances 0.0025 to 0.01) to lines with clearance of at least 0.12; the
# poles crossed are added back as residues, so the integrals
# are unchanged.
_NESTED_INNER_LINE = -0.8
_NESTED_OUTER_LINES = {"first": -0.38, "second": -0.135}


def _inner_shifts(kind: str, S: complex, t: float, sp: SpectralParams, s):
    """Gamma arguments of the inner integrand as (numerator, denominator)
    lists of (shift, sign) meaning Γ(shift + sign·T)."""
    it, it1 = 1j * t, 1j * sp.t1
    num = [(0.25 + it, 1), (0.25 - it, 1), (S, 1), (0.0, -1)]
    if kind == "first":
        num += [(1.0 - S + s, 1), (-0.5 - s, -1)]
    else:
        num += [(-s, 1), (0.5 - S + s, -1)]
    return num, [(0.5 + it1, 1), (0.5 - it1, 1)]


def _log_inner(num, den, T):
    out = 0j
    for shift, sign in num:
        out = out + log_gamma(shift + sign * T)
    for shift, sign in den:
        out = out - log_gamma(shift + sign * T)
    return out


def _inner_batch(kind: str, s: np.ndarray, S: complex, t: float, sp: SpectralParams, tol: float) -> np.ndarray:
    """The inner integrals for every outer node ``s`` at once.

    All of them share the line Re T = −0.8, at least 0.3 from every pole.
    The poles the prescribed contour keeps on its left but which lie right
    of this line (T = −1/4 ∓ it, T = −S and the first pole of the
    s-dependent factor) are added back as residues, each being the product
    of the remaining gammas.
    """
    s = np.asarray(s, dtype=complex)
    flat = s.reshape(-1)
    c = _NESTED_INNER_LINE
    num, den = _inner_shifts(kind, S, t, sp, flat[:, None])
    # the integrand is flat between τ = 0 and τ = −Im s and decays like
    # exp(−2π·distance) outside; 12 units beyond is below 1e-30 of the plateau
    lo = min(0.0, float(np.min(-flat.imag))) - 12.0
    hi = max(0.0, float(np.max(-flat.imag))) + 12.0
    breaks = np.linspace(lo, hi, int(math.ceil((hi - lo) / 0.75)) + 1)
    line = adaptive_panels(lambda tau: np.exp(_log_inner(num, den, c + 1j * tau[None, :])), breaks, tol) / (2.0 * np.pi)
    # residues at the crossed poles; index 4 is the s-dependent left factor
    res = np.zeros((flat.size, 1), dtype=complex)
    for k in (0, 1, 2, 4):
        pole = -num[k][0] + np.zeros((flat.size, 1))
        rest = [g for j, g in enumerate(num) if j != k]
        res = res + np.exp(_log_inner(rest, den, pole))
    return (line + res[:, 0]).reshape(s.shape)


def _inner_singularities(kind: str, S: complex, t: float) -> list[complex]:
    """Singularities of the inner integral as a function of s near the outer line."""
    if kind == "first":
        pts = [-0.25 + 1j * t, -0.25 - 1j * t, S - 0.5, S - 1.0]
    else:
        pts = [0.0, S - 0.75 + 1j * t, S - 0.75 - 1j * t, -0.5]
    return pts


def nested_kernel_integral(kind: str, t: float, S, sp: SpectralParams = DEFAULT_SPECTRAL, tol: float = 1e-8) -> complex:
    """The nested Barnes integrals of the kernel identity (``kind`` = "first" or "second").

    Raises
    ------
    PinchedContourError
        For |t| < 1e-3, where the two inner poles at T = −1/4 ∓ it merge.
    """
    S = complex(S)
    if abs(t) < 1e-3:
        raise PinchedContourError("inner poles at -1/4 -+ it coincide")
    it1, it2 = 1j * sp.t1, 1j * sp.t2
    inner_tol = max(1e-13, min(1e-10, tol / 100))

    def inner(s):
        return _inner_batch(kind, s, S, t, sp, inner_tol)

    if kind == "first":
        num = [down(-0.5 + it1 + S), down(-0.5 - it1 + S), up(0.5 + it2), up(0.5 - it2)]
        den = [up(1.0), down(S - 0.5)]
        scalar = 1.0
    elif kind == "second":
        num = [down(-0.5 + it2 + S), down(-0.5 - it2 + S), up(0.5 + it1), up(0.5 - it1), up(1.0 - S)]
        den = [up(1.0), down(0.0), up(0.5)]
        scalar = complex(sin_pi(sp.s2) / sin_pi(sp.s1))
    else:
        raise ValueError("kind must be 'first' or 'second'")
    f = BarnesIntegrand(numerator=num, denominator=den, scalar=scalar, extra=inner,
                        extra_singularities=tuple(_inner_singularities(kind, S, t)))
    contour = plan_contour(f, hint_abscissa=_NESTED_OUTER_LINES[kind])
    if contour.indentations:
        raise PinchedContourError("outer line of the nested integral crosses a pole")
    return integrate(f, contour, tol)


def nested_kernel_closed_form(kind: str, t: float, S, sp: SpectralParams = DEFAULT_SPECTRAL, tol: float = 1e-10) -> complex:
    S = complex(S)
    it, it1, it2 = 1j * t, 1j * sp.t1, 1j * sp.t2
    lam = 1j * (0.5 - S)
    phis = {1: wilson_plus(lam, t, sp, tol), -1: wilson_minus(lam, t, sp, tol)}
    total = 0j
    for sign in (1, -1):
        j2 = sign * it2
        lg = log_gamma(S + it1 + j2) + log_gamma(S - it1 + j2) + log_gamma(0.25 + j2 + it) + log_gamma(0.25 + j2 - it)
        term = complex(np.exp(lg) / sin_pi(2.0 * j2)) * phis[sign]
        if kind == "second":
            term *= complex(sin_pi(0.5 - j2 - S))
        total += term
    pref = -gamma_pm(0.25, it) * np.exp(log_gamma(0.5 - S) + log_gamma(S) + log_gamma(1.0 - S))
    trig = sin_pi(sp.s2) if kind == "first" else sin_pi(sp.s2) / sin_pi(sp.s1)
    return complex(pref * trig * total)


def verify_nested_kernel(kind: str, t: float, S, sp: SpectralParams = DEFAULT_SPECTRAL,
                         tol: float = 1e-5) -> VerificationReport:
    inputs = dict(form=kind, t=t, S=complex(S), t1=sp.t1, t2=sp.t2)

    def run():
        try:
            lhs = nested_kernel_integral(kind, t, S, sp, tol=min(1e-8, tol / 100))
        except PinchedContourError as exc:
            return VerificationReport.untestable("nested-kernel", inputs, tol, str(exc))
        rhs = nested_kernel_closed_form(kind, t, S, sp)
        return VerificationReport.compare("nested-kernel", inputs, lhs, rhs, tol)

    return _timed(run)


# ---------------------------------------------------------------------------
# Wilson function symmetries


def verify_wilson_symmetry(S=0.49 + 0.6j, x: float = 0.5, sp: SpectralParams = DEFAULT_SPECTRAL,
                           tol: float = 1e-8) -> list[VerificationReport]:
    """Every ordering of (a, b, c) against the first one."""
    start = time.perf_counter()
    it1, it2 = 1j * sp.t1, 1j * sp.t2
    base = (0.75 + it2, 0.25 + it1, 0.25 - it1)
    lam = 1j * (0.5 - complex(S))
    vals = [(perm, wilson_function(WilsonParams(*perm, 0.75 - it2, lam, x)))
            for perm in itertools.permutations(base)]
    ms = (time.perf_counter() - start) * 1e3 / len(vals)
    ref = vals[0][1]
    return [
        VerificationReport.compare("wilson-symmetry", dict(order=list(perm), S=complex(S), x=x), v, ref, tol, runtime_ms=ms)
        for perm, v in vals[1:]
    ]


def verify_wilson_duality(t1: float = 0.8, t: float = 0.5, s: float = -0.26, S=0.49 + 0.4j,
                          tol: float = 1e-6) -> VerificationReport:
    """φ at (1/4, 1/4±it1, 5/4+s), order i((1+s)/2 − S), argument t, against
    φ at (1/4+it, 1/2−S, −1/2+S−s, 3/4+it), order i(1/4 + s/2), argument t1."""
    def run():
        S_ = complex(S)
        lhs = wilson_function(WilsonParams(0.25, 0.25 + 1j * t1, 0.25 - 1j * t1, 1.25 + s, 1j * ((1 + s) / 2 - S_), t))
        rhs = wilson_function(WilsonParams(0.25 + 1j * t, 0.5 - S_, -0.5 + S_ - s, 0.75 + 1j * t, 1j * (0.25 + s / 2), t1))
        return VerificationReport.compare("wilson-duality", dict(t1=t1, t=t, s=s, S=S_), lhs, rhs, tol)

    return _timed(run)


# ---------------------------------------------------------------------------
# Whittaker layer


def verify_whittaker_mellin(S, m: int, sign: int, sp: SpectralParams = DEFAULT_SPECTRAL,
                            tol: float = 1e-6) -> VerificationReport:
    """Direct Mellin integral of a Whittaker product against its Barnes form."""
    def run():
        lhs = whittaker_pair_mellin(S, 0, sign, m, sp, tol=min(1e-8, tol / 100))
        rhs = whittaker_pair_mellin_barnes(S, 0, sign, m, sp)
        inputs = dict(S=complex(S), m=m, sign=sign, t1=sp.t1, t2=sp.t2)
        return VerificationReport.compare("whittaker-mellin", inputs, lhs, rhs, tol)

    return _timed(run)


def bessel_k_imaginary(nu: float, y: np.ndarray) -> np.ndarray:
    """K_{iν}(y) = ∫_0^∞ e^{−y cosh τ} cos(ντ) dτ for real ν and y > 0."""
    y = np.atleast_1d(np.asarray(y, dtype=float))
    out = np.empty(y.shape)
    for i, yy in enumerate(y):
        top = math.acosh(max(1.0, 45.0 / yy)) + 1.0
        breaks = np.linspace(0.0, top, int(math.ceil(top * max(2.0, nu))) + 2)
        out[i] = adaptive_panels(lambda s: np.exp(-yy * np.cosh(s)) * np.cos(nu * s), breaks, 1e-13)
    return out


def verify_whittaker_bessel(nu: float, y: float, tol: float = 1e-9) -> VerificationReport:
    """W_{0,iν}(2y) against √(2y/π) K_{iν}(y)."""
    def run():
        lhs = complex(whittaker_w(0.0, 1j * nu, 2.0 * y))
        rhs = math.sqrt(2.0 * y / math.pi) * float(bessel_k_imaginary(nu, y)[0])
        return VerificationReport.compare("whittaker-bessel", dict(nu=nu, y=y), lhs, rhs, tol)

    return _timed(run)


def verify_theta_tail_mellin(order: int = 0, y: float = 1.0, tol: float = 1e-10) -> VerificationReport:
    def run():
        lhs = float(theta_tail(order, y))
        rhs = theta_tail_mellin(order, y, sigma=2.0)
        return VerificationReport.compare("theta-tail-mellin", dict(order=order, y=y), lhs, rhs, tol)

    return _timed(run)


def maass_lowering_residual(k: int = 1, t: float = 0.9, m: int = 1, x: float = 0.3, y: float = 0.4,
                            h: float = 1e-5) -> tuple[complex, complex]:
    """(L_k f, expected) at (x, y) for f = W_{k,it}(4πmy) e(mx), with
    L_k = −iy ∂x + y ∂y − k applied by central differences of step ``h``."""
    def f(xx, yy):
        return complex(whittaker_w(k, 1j * t, 4.0 * math.pi * m * yy)) * np.exp(2j * math.pi * m * xx)

    dx = (f(x + h, y) - f(x - h, y)) / (2.0 * h)
    dy = (f(x, y + h) - f(x, y - h)) / (2.0 * h)
    lhs = -1j * y * dx + y * dy - k * f(x, y)
    coef = -((1j * t) ** 2 - (k - 0.5) ** 2)
    rhs = coef * complex(whittaker_w(k - 1, 1j * t, 4.0 * math.pi * m * y)) * np.exp(2j * math.pi * m * x)
    return complex(lhs), complex(rhs)


def verify_maass_lowering(k: int = 1, t: float = 0.9, m: int = 1, tol: float = 1e-5) -> VerificationReport:
    def run():
        lhs, rhs = maass_lowering_residual(k, t, m)
        return VerificationReport.compare("maass-lowering", dict(k=k, t=t, m=m), lhs, rhs, tol)

    return _timed(run)


# ---------------------------------------------------------------------------
# theta sums and kernels


def verify_coset_theta_sums(z: complex, order: int, tol: float = 1e-9) -> VerificationReport:
    """Coset theta sum against 6 × lattice tail sum (+3 at order 0)."""
    def run():
        first, second = coset_sums(complex(z), order)
        rhs = 6.0 * second + (3.0 if order == 0 else 0.0)
        return VerificationReport.compare("coset-theta-sums", dict(z=complex(z), order=order), first, rhs, tol)

    return _timed(run)


def verify_coset_cusp(height: float = 10.0, tol: float = 1e-9) -> VerificationReport:
    """The order-0 coset theta sum high in the cusp against 3√y."""
    def run():
        first, _ = coset_sums(1j * height, 0)
        return VerificationReport.compare("coset-theta-cusp", dict(y=height), first, 3.0 * math.sqrt(height), tol)

    return _timed(run)


def verify_theta_inversion(z: complex, tol: float = 1e-11) -> VerificationReport:
    """B_0(−1/(4z)) against e(−1/8)(z/|z|)^{1/2} B_0(z)."""
    def run():
        z_ = complex(z)
        lhs = complex(weighted_theta(-1.0 / (4.0 * z_)))
        rhs = np.exp(-0.25j * math.pi) * np.sqrt(z_ / abs(z_)) * complex(weighted_theta(z_))
        return VerificationReport.compare("theta-inversion", dict(z=z_), lhs, rhs, tol)

    return _timed(run)


_TABLE_CACHE: dict[tuple, KernelTable] = {}


def _kernel_table(chi: ChiSpec, tol: float) -> KernelTable:
    key = (chi.terms, tol)
    if key not in _TABLE_CACHE:
        _TABLE_CACHE[key] = KernelTable.build(chi, tol=tol)
    return _TABLE_CACHE[key]


def verify_kernel_inversion(scale: float, tol: float = 1e-6, points: int = 13) -> list[VerificationReport]:
    """χ → point-pair kernel → inverse transform, at ``points`` t values in [0, 3]."""
    start = time.perf_counter()
    chi = ChiSpec.gaussian(scale)
    table = _kernel_table(chi, 1e-9)
    ts = np.linspace(0.0, 3.0, points)
    back = invert_kernel(ts, table)
    ms = (time.perf_counter() - start) * 1e3 / points
    return [
        VerificationReport.compare("kernel-inversion", dict(A=scale, t=float(t)), b, chi(t), tol, runtime_ms=ms)
        for t, b in zip(ts, back)
    ]


def verify_kernel_transform_forms(scale: float, tol: float = 1e-8, points: int = 7) -> list[VerificationReport]:
    """The inverse transform written in the u variable against the form in the R variable."""
    start = time.perf_counter()
    table = _kernel_table(ChiSpec.gaussian(scale), 1e-9)
    ts = np.linspace(0.0, 3.0, points)
    u_form = invert_kernel(ts, table)
    r_form = selberg_transform(ts, table)
    ms = (time.perf_counter() - start) * 1e3 / points
    return [
        VerificationReport.compare("kernel-transform-forms", dict(A=scale, t=float(t)), r, u, tol, runtime_ms=ms)
        for t, u, r in zip(ts, u_form, r_form)
    ]


def verify_hahn_coefficient_forms(n: int, T: float, tol: float = 1e-8) -> VerificationReport:
    """Coefficient through the 3F2 polynomial against the Hahn-polynomial form."""
    def run():
        chi = ChiSpec.gaussian(1.0)
        lhs = hahn_coefficient(n, T, chi, form="hahn")
        rhs = hahn_coefficient(n, T, chi, form="3f2")
        return VerificationReport.compare("hahn-coefficient-forms", dict(n=n, T=T), lhs, rhs, tol)

    return _timed(run)


def verify_hahn_coefficient_decay(T: float, nmin: int = 10, nmax: int = 25, power: int = 6) -> list[VerificationReport]:
    """|C_n|(1+n)^power against max_{m<=5}|C_m| for nmin <= n <= nmax."""
    from .kernel import hahn_coefficients

    start = time.perf_counter()
    coef = hahn_coefficients(nmax, T, ChiSpec.gaussian(1.0))
    ref = float(np.max(np.abs(coef[:6])))
    ms = (time.perf_counter() - start) * 1e3 / (nmax - nmin + 1)
    return [
        VerificationReport.compare("hahn-coefficient-decay", dict(n=n, T=T, power=power),
                                   abs(coef[n]) * (1.0 + n) ** power, ref, 0.0, relation="le", runtime_ms=ms)
        for n in range(nmin, nmax + 1)
    ]


# ---------------------------------------------------------------------------
# registry and suite


@dataclass
class SuiteConfig:
    """Settings of a suite run; ``None`` spectral values select the default grids."""

    t1: float | None = None
    t2: float | None = None
    tol: float | None = None
    threads: int = 1
    filters: tuple[str, ...] = ()
    extra: dict = field(default_factory=dict)

    def spectral(self) -> list[SpectralParams]:
        if self.t1 is None and self.t2 is None:
            return []
        return [SpectralParams(self.t1 or DEFAULT_SPECTRAL.t1, self.t2 or DEFAULT_SPECTRAL.t2)]


Case = Callable[[], "VerificationReport | list[VerificationReport]"]


def _tol(cfg: SuiteConfig, default: float) -> float:
    return default if cfg.tol is None else cfg.tol


def _sp_grid(cfg: SuiteConfig, default: Iterable[SpectralParams]) -> list[SpectralParams]:
    return cfg.spectral() or list(default)


def _cases_binomial(cfg):
    pairs = random_binomial_cases(10)
    return [lambda N=N, a=a, s=s: verify_binomial_gamma_sum(N, a, s, _tol(cfg, 1e-11))
            for a, s in pairs for N in (0, 1, 6, 10)]


def _cases_sine(cfg):
    t2s = [cfg.t2] if cfg.t2 else [1.3, -1.3, 0.6]
    Ss = [0.0, 0.49 + 0.7j, 0.3 - 0.2j, 0.9 + 1.1j]
    return [lambda S=S, n=n, t2=t2: verify_sine_partition(S, n, t2, _tol(cfg, 1e-12))
            for S in Ss for n in range(4) for t2 in t2s]


def _cases_residue(cfg):
    t1s = [cfg.t1] if cfg.t1 else [0.8, 2.5]
    return [lambda t1=t1: verify_residue_constant(t1, _tol(cfg, 1e-14)) for t1 in t1s]


def _cases_jacobi(cfg):
    return [lambda n=n, t=t, t0=t0: verify_jacobi_moment(n, t, t0, _tol(cfg, 1e-6))
            for n in (0, 1, 2, 3) for t in (0.3, 0.7, 1.1) for t0 in (0.5, 0.9, 2.0)]


def _cases_series(cfg):
    return [
        lambda: verify_hahn_generating_series(SeriesParams(), _tol(cfg, 1e-6)),
        lambda: verify_hahn_generating_series(SeriesParams(x=0.0), _tol(cfg, 1e-6)),
    ]


def _cases_growth(cfg):
    return [lambda: verify_hahn_growth_bound()]


def _cases_pair(cfg):
    sps = _sp_grid(cfg, [SpectralParams(0.8, 1.3), SpectralParams(1.7, 0.6)])
    return [lambda B=B, S=S, sp=sp: verify_kernel_barnes_pair(0, B, S, sp, cfg.tol)
            for sp in sps for B in (0.742, 0.748) for S in (SHIFTED_RE, SHIFTED_RE + 0.7j, SHIFTED_RE - 0.7j)]


def _cases_pair_shifted(cfg):
    sps = _sp_grid(cfg, [SpectralParams(0.8, 1.3), SpectralParams(1.7, 0.6)])
    return [lambda n=n, S=S, sp=sp: verify_kernel_barnes_pair(n, 0.5, S, sp, cfg.tol)
            for sp in sps for n in (1, 2) for S in (SHIFTED_RE, SHIFTED_RE + 0.7j, SHIFTED_RE - 0.7j)]


def _cases_nested(cfg):
    sps = _sp_grid(cfg, [DEFAULT_SPECTRAL])
    return [lambda kind=kind, t=t, S=S, sp=sp: verify_nested_kernel(kind, t, S, sp, _tol(cfg, 1e-5))
            for sp in sps for t in (0.2, 0.4, 1.0) for S in (SHIFTED_RE, SHIFTED_RE + 0.6j)
            for kind in ("first", "second")]


def _cases_wilson_symmetry(cfg):
    sps = _sp_grid(cfg, [DEFAULT_SPECTRAL])
    return [lambda sp=sp: verify_wilson_symmetry(sp=sp, tol=_tol(cfg, 1e-8)) for sp in sps]


def _cases_wilson_duality(cfg):
    t1 = cfg.t1 or 0.8
    return [lambda: verify_wilson_duality(t1=t1, tol=_tol(cfg, 1e-6))]


def _cases_whittaker_mellin(cfg):
    sps = _sp_grid(cfg, [DEFAULT_SPECTRAL])
    return [lambda S=S, m=m, sign=sign, sp=sp: verify_whittaker_mellin(S, m, sign, sp, _tol(cfg, 1e-6))
            for sp in sps for S in (0.6, 1.2) for m in (1, 4) for sign in (1, -1)]


def _cases_bessel(cfg):
    return [lambda nu=nu, y=y: verify_whittaker_bessel(nu, y, _tol(cfg, 1e-9))
            for nu in (0.5, 2.0, 5.0) for y in (0.025, 0.3, 1.3, 6.0, 25.0)]


def _cases_theta_tail(cfg):
    return [lambda y=y: verify_theta_tail_mellin(0, y, _tol(cfg, 1e-10)) for y in (1.0, 3.0)]


def _cases_maass(cfg):
    return [lambda: verify_maass_lowering(tol=_tol(cfg, 1e-5))]


SAMPLE_POINTS = (0.1 + 0.7j, -0.35 + 1.1j, 0.25 + 1.5j, 0.45 + 2.2j, -0.2 + 3.0j)


def _cases_cosets(cfg):
    return [lambda z=z, l=l: verify_coset_theta_sums(z, l, _tol(cfg, 1e-9)) for z in SAMPLE_POINTS for l in (0, 1, 2)]


def _cases_cusp(cfg):
    return [lambda: verify_coset_cusp(10.0, _tol(cfg, 1e-9))]


def _cases_theta_inversion(cfg):
    return [lambda z=z: verify_theta_inversion(z, _tol(cfg, 1e-11)) for z in SAMPLE_POINTS]


def _cases_inversion(cfg):
    return [lambda A=A: verify_kernel_inversion(A, _tol(cfg, 1e-6)) for A in (0.25, 1.0, 4.0)]


def _cases_forms(cfg):
    return [lambda A=A: verify_kernel_transform_forms(A, _tol(cfg, 1e-8)) for A in (0.25, 1.0, 4.0)]


def _cases_hahn_forms(cfg):
    return [lambda n=n, T=T: verify_hahn_coefficient_forms(n, T, _tol(cfg, 1e-8)) for T in (0.8, 1.3) for n in range(11)]


def _cases_hahn_decay(cfg):
    return [lambda T=T: verify_hahn_coefficient_decay(T) for T in (0.8, 1.3)]


# identity id -> (description, case generator); the order is the report order
REGISTRY: dict[str, tuple[str, Callable[[SuiteConfig], list[Case]]]] = {
    "binomial-gamma-sum": ("alternating binomial sum of gamma ratios", _cases_binomial),
    "sine-partition": ("two sine quotients summing to one", _cases_sine),
    "residue-constant": ("residue constant at S = 1 in two closed forms", _cases_residue),
    "jacobi-moment": ("moments of a Jacobi function against a 2F1", _cases_jacobi),
    "hahn-generating-series": ("generating series of dual Hahn polynomials vs Barnes integral", _cases_series),
    "hahn-growth-bound": ("exponential-polynomial growth bound of dual Hahn 3F2", _cases_growth),
    "hahn-coefficient-forms": ("spectral coefficient via 3F2 vs dual Hahn form", _cases_hahn_forms),
    "hahn-coefficient-decay": ("decay of spectral coefficients in n", _cases_hahn_decay),
    "wilson-symmetry": ("Wilson function symmetric in (a, b, c)", _cases_wilson_symmetry),
    "wilson-duality": ("Wilson function duality instance", _cases_wilson_duality),
    "kernel-barnes-pair": ("Barnes pair vs Wilson closed forms, n = 0", _cases_pair),
    "kernel-barnes-pair-shifted": ("Barnes pair vs Wilson closed forms, n >= 1", _cases_pair_shifted),
    "nested-kernel": ("nested Barnes integrals vs Wilson closed forms", _cases_nested),
    "whittaker-mellin": ("Mellin transform of Whittaker products vs Barnes form", _cases_whittaker_mellin),
    "whittaker-bessel": ("W at kappa = 0 vs Bessel K integral", _cases_bessel),
    "theta-tail-mellin": ("theta tail sum vs its Mellin integral", _cases_theta_tail),
    "maass-lowering": ("lowering operator on Whittaker Fourier terms", _cases_maass),
    "theta-inversion": ("weight-1/2 theta inversion", _cases_theta_inversion),
    "coset-theta-sums": ("coset theta sums vs lattice tail sums", _cases_cosets),
    "coset-theta-cusp": ("coset theta sum in the cusp", _cases_cusp),
    "kernel-inversion": ("point-pair kernel round trip", _cases_inversion),
    "kernel-transform-forms": ("inverse transform in u vs R variables", _cases_forms),
}

# fast subset used by the self test
QUICK_IDS = (
    "binomial-gamma-sum", "sine-partition", "residue-constant", "wilson-duality",
    "theta-tail-mellin", "maass-lowering", "theta-inversion", "coset-theta-cusp",
)


def select_ids(filters: Iterable[str]) -> list[str]:
    """Identity ids matching any of the filters (exact id or id prefix); all when empty."""
    filters = [f for f in filters if f and f != "all"]
    if not filters:
        return list(REGISTRY)
    chosen = [i for i in REGISTRY if any(i == f or i.startswith(f) for f in filters)]
    if not chosen:
        raise KeyError(f"no identity matches {', '.join(filters)}; known ids: {', '.join(REGISTRY)}")
    return chosen


def _run_case(ident: str, case: Case) -> list[VerificationReport]:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", WhittakerUnderflowWarning)
        try:
            out = case()
        except RSKernelError as exc:
            nan = complex(math.nan, math.nan)
            return [VerificationReport(ident, {}, nan, nan, math.nan, math.nan, 0.0, False, 0.0,
                                       note=f"{type(exc).__name__}: {exc}")]
    return out if isinstance(out, list) else [out]


def run_suite(cfg: SuiteConfig | None = None) -> list[VerificationReport]:
    """Run every selected identity; reports come back in registry order."""
    cfg = cfg or SuiteConfig()
    jobs = [(ident, case) for ident in select_ids(cfg.filters) for case in REGISTRY[ident][1](cfg)]
    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            results = list(pool.map(lambda j: _run_case(*j), jobs))
    else:
        results = [_run_case(*j) for j in jobs]
    return [rep for group in results for rep in group]


def summary_table(reports: list[VerificationReport]) -> str:
    """Fixed-width table, one row per identity id."""
    rows = {}
    for r in reports:
        row = rows.setdefault(r.identity_id, dict(n=0, passed=0, skipped=0, worst=0.0, ms=0.0))
        row["n"] += 1
        row["passed"] += r.passed
        row["skipped"] += r.skipped
        if not r.skipped and not math.isnan(r.rel_dev):
            row["worst"] = max(row["worst"], r.rel_dev)
        row["ms"] += r.runtime_ms
    lines = [f"{'identity':<28}{'cases':>6}{'pass':>6}{'skip':>6}{'worst rel':>12}{'time s':>9}  status"]
    for ident, row in rows.items():
        ok = row["passed"] + row["skipped"] == row["n"]
        lines.append(
            f"{ident:<28}{row['n']:>6}{row['passed']:>6}{row['skipped']:>6}{row['worst']:>12.2e}"
            f"{row['ms'] / 1e3:>9.2f}  {'PASS' if ok else 'FAIL'}"
        )
    return "\n".join(lines)


def all_passed(reports: list[VerificationReport]) -> bool:
    return all(r.passed or r.skipped for r in reports)
