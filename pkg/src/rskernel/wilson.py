"""Wilson functions through their Barnes integral, and the spectral kernels
assembled from them.

The Wilson function is the ratio of

    (1/2πi) ∫ Γ(a±ix+R) Γ(ã±iλ+R) Γ(−R) Γ(1−a−d−R) / (Γ(a+b+R) Γ(a+c+R)) dR

to the gamma product Γ(a±ix) Γ(ã±iλ) Γ(1−d±ix) Γ(1−d̃±iλ), where ã and d̃
are the dual parameters.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .barnes import BarnesIntegrand, down, integrate, plan_contour, up
from .errors import PinchedContourError, PoleError
from .gammas import SpectralParams, log_gamma, rgamma, sin_pi
from .quadrature import adaptive_panels

# distance from the order λ = 0 below which the limit is taken by extrapolation
_LAMBDA_LIMIT = 1e-3


def dual_parameters(a, b, c, d) -> tuple[complex, complex]:
    """(ã, d̃) = ((a+b+c+d−1)/2, (a−b−c+d+1)/2)."""
    a, b, c, d = (complex(v) for v in (a, b, c, d))
    return 0.5 * (a + b + c + d - 1.0), 0.5 * (a - b - c + d + 1.0)


@dataclass(frozen=True)
class WilsonParams:
    """Parameters (a, b, c, d), order ``lam`` and argument ``x`` of a Wilson function."""

    a: complex
    b: complex
    c: complex
    d: complex
    lam: complex
    x: complex

    def __post_init__(self):
        for name in ("a", "b", "c", "d", "lam", "x"):
            object.__setattr__(self, name, complex(getattr(self, name)))

    @property
    def dual(self) -> tuple[complex, complex]:
        return dual_parameters(self.a, self.b, self.c, self.d)

    def replace(self, **kw) -> "WilsonParams":
        vals = dict(a=self.a, b=self.b, c=self.c, d=self.d, lam=self.lam, x=self.x)
        vals.update(kw)
        return WilsonParams(**vals)


def wilson_integrand(p: WilsonParams) -> BarnesIntegrand:
    at, _ = p.dual
    ix, il = 1j * p.x, 1j * p.lam
    return BarnesIntegrand(
        numerator=[up(p.a + ix), up(p.a - ix), up(at + il), up(at - il), down(0.0), down(1.0 - p.a - p.d)],
        denominator=[up(p.a + p.b), up(p.a + p.c)],
    )


def _log_prefactor(p: WilsonParams) -> complex:
    at, dt = p.dual
    ix, il = 1j * p.x, 1j * p.lam
    pairs = [
        (p.a + ix, p.a - ix),
        (at + il, at - il),
        (1.0 - p.d + ix, 1.0 - p.d - ix),
        (1.0 - dt + il, 1.0 - dt - il),
    ]
    total = 0j
    for u, v in pairs:
        total = total + (log_gamma(u) + log_gamma(v))
    return complex(total)


def _direct(p: WilsonParams, tol: float, hint: float | None) -> complex:
    f = wilson_integrand(p)
    contour = plan_contour(f, hint_abscissa=hint)
    val = integrate(f, contour, tol)
    return complex(val * np.exp(-_log_prefactor(p)))


def wilson_function(p: WilsonParams, tol: float = 1e-10, hint: float | None = None) -> complex:
    """φ_λ(x; a, b, c, d).

    At λ = 0 the Barnes integral can pinch while the gamma prefactor has a
    matching pole; the function itself is even and regular in λ there, so
    the value is extrapolated from λ = δ and 2δ (error O(δ⁴)).

    Raises
    ------
    PinchedContourError, PoleError
        For parameter coincidences other than the λ = 0 limit.
    """
    try:
        return _direct(p, tol, hint)
    except (PinchedContourError, PoleError):
        if abs(p.lam) >= _LAMBDA_LIMIT:
            raise
    delta = 2.0 * _LAMBDA_LIMIT
    near = _direct(p.replace(lam=delta), tol, hint)
    far = _direct(p.replace(lam=2.0 * delta), tol, hint)
    return (4.0 * near - far) / 3.0


def wilson_plus_params(lam, t, sp: SpectralParams, sign: int = 1) -> WilsonParams:
    """Parameters (3/4 ± it2, 1/4 + it1, 1/4 − it1, 3/4 ∓ it2) at order λ, argument t."""
    it2 = 1j * sp.t2 * sign
    it1 = 1j * sp.t1
    return WilsonParams(0.75 + it2, 0.25 + it1, 0.25 - it1, 0.75 - it2, lam, t)


def wilson_plus(lam, t, sp: SpectralParams, tol: float = 1e-10) -> complex:
    """Wilson function at the parameters (3/4+it2, 1/4+it1, 1/4−it1, 3/4−it2)."""
    return wilson_function(wilson_plus_params(lam, t, sp, +1), tol)


def wilson_minus(lam, t, sp: SpectralParams, tol: float = 1e-10) -> complex:
    """Same as :func:`wilson_plus` with t2 replaced by −t2."""
    return wilson_function(wilson_plus_params(lam, t, sp, -1), tol)


def _kernel_part(S, t, sp: SpectralParams, sign: int, tol: float) -> complex:
    it1, it2, it = 1j * sp.t1, 1j * sp.t2 * sign, 1j * t
    lg = (log_gamma(S + it1 + it2) + log_gamma(S - it1 + it2)) + (
        log_gamma(0.25 + it2 + it) + log_gamma(0.25 + it2 - it)
    )
    trig = (sin_pi(sp.s1) + sin_pi(0.5 - it2 - S)) / sin_pi(2.0 * it2)
    phi = wilson_function(wilson_plus_params(1j * (0.5 - S), t, sp, sign), tol)
    return complex(np.exp(lg) * trig * phi)


def kernel_parts(S, t, sp: SpectralParams, tol: float = 1e-10) -> tuple[complex, complex]:
    """The two halves (plus, minus) of the spectral kernel; the minus half is
    the plus half with t2 negated."""
    return _kernel_part(S, t, sp, +1, tol), _kernel_part(S, t, sp, -1, tol)


def spectral_kernel(S, t, sp: SpectralParams, tol: float = 1e-10) -> complex:
    """Sum of the two halves from :func:`kernel_parts`."""
    plus, minus = kernel_parts(S, t, sp, tol)
    return plus + minus


# ---------------------------------------------------------------------------
# test functions


@dataclass(frozen=True)
class ChiSpec:
    """Finite sum Σ c_j exp(−A_j z²) of gaussians.

    Every member is even and entire and decays like a gaussian on horizontal
    strips, so it belongs to every class of test functions the kernels need.
    The empty sum is the zero function.
    """

    terms: tuple[tuple[float, float], ...] = ((1.0, 1.0),)

    def __post_init__(self):
        clean = []
        for coef, scale in self.terms:
            coef, scale = float(coef), float(scale)
            if not scale > 0:
                raise ValueError("gaussian scale A must be positive")
            if coef != 0.0:
                clean.append((coef, scale))
        object.__setattr__(self, "terms", tuple(clean))

    @classmethod
    def gaussian(cls, scale: float = 1.0, coef: float = 1.0) -> "ChiSpec":
        """exp(−A z²)."""
        return cls(((coef, scale),))

    @classmethod
    def from_shift(cls, n: int) -> "ChiSpec":
        """exp(−z²/N)."""
        if int(n) != n or n < 1:
            raise ValueError("N must be a positive integer")
        return cls(((1.0, 1.0 / n),))

    @classmethod
    def zero(cls) -> "ChiSpec":
        return cls(())

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __call__(self, z):
        z = np.asarray(z)
        out = np.zeros(z.shape, dtype=np.result_type(z, float))
        for coef, scale in self.terms:
            out = out + coef * np.exp(-scale * z * z)
        return out

    def __add__(self, other: "ChiSpec") -> "ChiSpec":
        return ChiSpec(self.terms + other.terms)

    def __mul__(self, k: float) -> "ChiSpec":
        return ChiSpec(tuple((k * c, a) for c, a in self.terms))

    __rmul__ = __mul__

    def cutoff(self, rel: float = 1e-18) -> float:
        """|t| beyond which every term is below ``rel`` of its coefficient."""
        if self.is_zero:
            return 0.0
        smin = min(a for _, a in self.terms)
        return float(np.sqrt(np.log(1.0 / rel) / smin))

    def describe(self) -> str:
        return ";".join(f"{c!r}*exp(-{a!r}*t^2)" for c, a in self.terms) or "0"

    @classmethod
    def parse(cls, text: str) -> "ChiSpec":
        text = text.strip()
        if text == "0":
            return cls.zero()
        terms = []
        for part in text.split(";"):
            coef, rest = part.split("*exp(-", 1)
            scale = rest.split("*t^2)", 1)[0]
            terms.append((float(coef), float(scale)))
        return cls(tuple(terms))


def spectral_weight(t, sp: SpectralParams):
    """Γ(1/4±it) Γ(1/4±it±it1) / Γ(±2it) for real t; vanishes at t = 0."""
    t = np.asarray(t, dtype=float)
    it, it1 = 1j * t, 1j * sp.t1
    lg = (log_gamma(0.25 + it) + log_gamma(0.25 - it)) + (
        (log_gamma(0.25 + it + it1) + log_gamma(0.25 + it - it1))
        + (log_gamma(0.25 - it + it1) + log_gamma(0.25 - it - it1))
    )
    return (np.exp(lg) * rgamma(2.0 * it) * rgamma(-2.0 * it)).real


def _t_breaks(chi: ChiSpec, width: float = 1.0) -> np.ndarray:
    top = chi.cutoff()
    n = max(2, int(np.ceil(top / width)))
    return np.linspace(0.0, top, n + 1)


def integrated_kernel(
    S,
    chi: ChiSpec,
    sp: SpectralParams,
    tol: float = 1e-8,
    *,
    half_line: bool = True,
) -> complex:
    """∫ Γ(1/4±it)Γ(1/4±it±it1)/Γ(±2it) χ(t) N(S,t) dt over the real line.

    The integrand is even, so by default twice the half-line integral is
    returned; ``half_line=False`` integrates over the full symmetric range.
    """
    if chi.is_zero:
        return 0j
    inner_tol = min(1e-10, tol / 100)

    def integrand(ts):
        vals = np.array([spectral_kernel(S, float(t), sp, inner_tol) for t in ts])
        return spectral_weight(ts, sp) * chi(ts) * vals

    breaks = _t_breaks(chi)
    if half_line:
        return complex(2.0 * adaptive_panels(integrand, breaks, tol))
    full = np.concatenate((-breaks[:0:-1], breaks))
    return complex(adaptive_panels(integrand, full, tol))

