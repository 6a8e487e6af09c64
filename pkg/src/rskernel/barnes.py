"""Mellin–Barnes integrals of gamma-factor products.

An integrand is a product of factors Γ(shift ± s), a quotient by further
such factors, an optional power ``base**s`` and an optional vectorized
multiplier.  Contours are vertical lines; poles that sit on the wrong side of
the line are handled with small closed loops whose residue-type contribution
is added with the sign that turns line + loops into a separating path.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import NoDecayError, NonConvergenceError, PinchedContourError, PoleError
from .gammas import POLE_TOL, log_gamma, pole_distance
from .quadrature import adaptive_panels, graded_breaks

PINCH_TOL = 1e-10
MAX_RADIUS = 0.25
RADIUS_FRACTION = 0.4
# wrong-side poles closer than this share one loop
CLUSTER_GAP = 1e-3
MAX_HEIGHT = 400.0


@dataclass(frozen=True)
class GammaFactor:
    """Γ(shift + coeff·s) with coeff = ±1."""

    shift: complex
    coeff: int = 1

    def __post_init__(self):
        if self.coeff not in (1, -1):
            raise ValueError("coeff must be +1 or -1")
        object.__setattr__(self, "shift", complex(self.shift))

    def argument(self, s):
        return self.shift + self.coeff * s

    @property
    def first_pole(self) -> complex:
        return -self.shift / self.coeff

    def pole(self, k):
        """k-th pole; the sequence runs left for coeff=+1 and right for coeff=-1."""
        return (-np.asarray(k) - self.shift) / self.coeff

    def _key(self):
        return (self.coeff, self.shift.real, self.shift.imag)


def up(shift) -> GammaFactor:
    """Γ(shift + s); its poles march to the left."""
    return GammaFactor(shift, 1)


def down(shift) -> GammaFactor:
    """Γ(shift − s); its poles march to the right."""
    return GammaFactor(shift, -1)


def _sorted(factors) -> tuple[GammaFactor, ...]:
    return tuple(sorted(factors, key=GammaFactor._key))


@dataclass(frozen=True, eq=False)
class BarnesIntegrand:
    """scalar · base**s · Π Γ(num) / Π Γ(den) · extra(s).

    ``power_base`` may be an array; the integral is then evaluated for every
    base at once and the result has the base's shape.  ``extra`` must be
    vectorized and holomorphic near the contour; ``extra_singularities`` lists
    points where it is not, so the quadrature mesh can be graded towards them,
    and ``extra_decay`` is the exponential rate with which it decays (negative
    if it grows) along vertical lines.
    """

    numerator: Sequence[GammaFactor]
    denominator: Sequence[GammaFactor] = ()
    power_base: complex | np.ndarray | None = None
    scalar: complex = 1.0
    extra: Callable[[np.ndarray], np.ndarray] | None = None
    extra_singularities: Sequence[complex] = ()
    extra_decay: float = 0.0

    def __post_init__(self):
        # canonical factor order makes evaluation independent of how the
        # caller listed conjugate/sign-symmetric pairs
        object.__setattr__(self, "numerator", _sorted(self.numerator))
        object.__setattr__(self, "denominator", _sorted(self.denominator))
        if self.power_base is not None:
            b = np.asarray(self.power_base, dtype=complex)
            if np.any(b == 0):
                raise ValueError("power_base must be non-zero")
            object.__setattr__(self, "power_base", b)

    @property
    def batch_shape(self) -> tuple[int, ...]:
        if self.power_base is None:
            return ()
        return self.power_base.shape

    def __call__(self, s):
        return eval_integrand(self, s)


@dataclass(frozen=True)
class Indentation:
    center: complex
    radius: float
    side: str  # "right": contour passes right of the pole; "left": passes left

    def __post_init__(self):
        if self.side not in ("left", "right"):
            raise ValueError("side must be 'left' or 'right'")
        if self.radius <= 0:
            raise ValueError("radius must be positive")


@dataclass(frozen=True)
class Contour:
    abscissa: float
    indentations: tuple[Indentation, ...] = field(default_factory=tuple)

    def passes_left_of(self, p: complex) -> bool:
        """True when ``p`` lies to the right of the path."""
        for ind in self.indentations:
            if abs(ind.center - p) < ind.radius:
                return ind.side == "left"
        return p.real > self.abscissa

    def passes_right_of(self, p: complex) -> bool:
        for ind in self.indentations:
            if abs(ind.center - p) < ind.radius:
                return ind.side == "right"
        return p.real < self.abscissa


def eval_integrand(f: BarnesIntegrand, s):
    """Evaluate the integrand at ``s`` (scalar or 1-D array).

    Denominator factors at their own poles contribute an exact zero.  For a
    batched ``power_base`` the result has shape ``batch + s.shape``.
    """
    s = np.asarray(s, dtype=complex)
    scalar_in = s.ndim == 0
    s = np.atleast_1d(s)
    acc = np.zeros_like(s)
    for g in f.numerator:
        acc = acc + log_gamma(g.argument(s))
    zero = np.zeros(s.shape, dtype=bool)
    for g in f.denominator:
        arg = g.argument(s)
        hit = pole_distance(arg) < POLE_TOL
        zero |= hit
        safe = np.where(hit, 1.0, arg)
        acc = acc - log_gamma(safe)
    if f.power_base is not None:
        logb = np.log(f.power_base)
        acc = acc + logb[..., None] * s if logb.ndim else acc + logb * s
    out = f.scalar * np.exp(acc)
    out = np.where(zero, 0.0, out)
    if f.extra is not None:
        out = out * f.extra(s)
    return out[..., 0] if scalar_in else out


def decay_rates(f: BarnesIntegrand) -> tuple[float, float]:
    """Exponential decay rates of |f(c+iy)| as y → +∞ and y → −∞."""
    net = 0.5 * np.pi * (len(f.numerator) - len(f.denominator)) + f.extra_decay
    if f.power_base is None:
        return net, net
    theta = np.angle(f.power_base)
    return net + float(np.min(theta)), net - float(np.max(theta))


# ---------------------------------------------------------------------------
# contour planning


def _default_families(f):
    left = [g for g in f.numerator if g.coeff == 1]
    right = [g for g in f.numerator if g.coeff == -1]
    return left, right


def _pinch_check(left, right):
    for a in left:
        for b in right:
            # left poles -a.shift - k meet right poles b.shift + k'
            d = -a.shift - b.shift
            m = round(d.real)
            if abs(d.imag) < PINCH_TOL and m >= 0 and abs(d.real - m) < PINCH_TOL:
                raise PinchedContourError(
                    f"left factor Γ({a.shift}+s) and right factor Γ({b.shift}-s) "
                    f"share the pole s={-a.shift}"
                )


def _poles_between(factors, lo: float, hi: float) -> list[complex]:
    """Poles of the given factors whose real part lies in [lo, hi]."""
    out = []
    for g in factors:
        p0 = g.first_pole
        step = -g.coeff
        # poles run p0, p0+step, ...; only a finite stretch lies in [lo, hi]
        if step < 0:
            kmin = max(0, int(np.ceil(p0.real - hi)))
            kmax = int(np.floor(p0.real - lo))
        else:
            kmin = max(0, int(np.ceil(lo - p0.real)))
            kmax = int(np.floor(hi - p0.real))
        for k in range(kmin, kmax + 1):
            out.append(p0 + step * k)
    return out


def _wrong_side(left, right, c: float) -> tuple[list[complex], list[complex]]:
    top = max([g.first_pole.real for g in left], default=c)
    bottom = min([g.first_pole.real for g in right], default=c)
    lw = [p for p in _poles_between(left, c, top) if p.real >= c]
    rw = [p for p in _poles_between(right, bottom, c) if p.real <= c]
    return lw, rw


def _count_wrong(left, right, c: float) -> int:
    n = 0
    for g in left:
        r = g.first_pole.real
        if r >= c:
            n += int(np.floor(r - c)) + 1
    for g in right:
        r = g.first_pole.real
        if r <= c:
            n += int(np.floor(c - r)) + 1
    return n


def _margin(factors, c: float) -> float:
    near = _poles_between(factors, c - 3.0, c + 3.0)
    if not near:
        return 3.0
    return min(abs(p.real - c) for p in near)


def _best_abscissa(left, right, all_factors) -> float:
    lead_l = [g.first_pole.real for g in left]
    lead_r = [g.first_pole.real for g in right]
    if not lead_l and not lead_r:
        return 0.0
    if not lead_r:
        return max(lead_l) + 0.5
    if not lead_l:
        return min(lead_r) - 0.5
    if max(lead_l) < min(lead_r):
        return 0.5 * (max(lead_l) + min(lead_r))
    lo, hi = min(lead_r) - 1.0, max(lead_l) + 1.0
    xs = sorted({round(p.real, 14) for p in _poles_between(all_factors, lo, hi)})
    cands = [xs[0] - 0.5, xs[-1] + 0.5]
    cands += [0.5 * (a + b) for a, b in zip(xs, xs[1:]) if b - a > 1e-9]
    scored = [(_count_wrong(left, right, c), -_margin(all_factors, c), c) for c in cands]
    scored.sort()
    return scored[0][2]


def _clusters(poles, gap: float = CLUSTER_GAP) -> list[list[complex]]:
    """Group poles lying within ``gap`` of each other; a single loop around
    a tight group is far better conditioned than one tiny loop per pole."""
    groups: list[list[complex]] = []
    for p in poles:
        near = [g for g in groups if any(abs(p - q) < gap for q in g)]
        merged = [p] + [q for g in near for q in g]
        groups = [g for g in groups if g not in near] + [merged]
    return groups


def plan_contour(
    f: BarnesIntegrand,
    left_family: Sequence[GammaFactor] | None = None,
    right_family: Sequence[GammaFactor] | None = None,
    hint_abscissa: float | None = None,
) -> Contour:
    """Choose a vertical line plus loops separating the two pole families.

    With a hint the line is kept at ``hint_abscissa`` and every pole on the
    wrong side of it gets a loop; without one the line minimizing the number
    of loops (then maximizing the clearance to the nearest pole) is used.
    The families default to the numerator factors with coeff +1 (left) and
    coeff -1 (right).

    Raises
    ------
    PinchedContourError
        A left pole and a right pole coincide to within 1e-10.
    """
    dl, dr = _default_families(f)
    left = list(dl if left_family is None else left_family)
    right = list(dr if right_family is None else right_family)
    keys = {g._key() for g in f.numerator}
    for g in left + right:
        if g._key() not in keys:
            raise ValueError(f"{g} is not a numerator factor of the integrand")
    if any(g.coeff != 1 for g in left) or any(g.coeff != -1 for g in right):
        raise ValueError("left family needs coeff +1 factors, right family coeff -1")
    _pinch_check(left, right)
    numer = list(f.numerator)
    if hint_abscissa is not None and _margin(numer, hint_abscissa) < 1e-6:
        hint_abscissa = None  # a pole sits on the suggested line
    c = float(hint_abscissa) if hint_abscissa is not None else _best_abscissa(left, right, numer)
    lw, rw = _wrong_side(left, right, c)
    if not lw and not rw:
        return Contour(c)
    wrong = lw + rw
    lo = min(p.real for p in wrong) - 1.0
    hi = max(p.real for p in wrong) + 1.0
    nearby = _poles_between(numer, lo, hi)
    nearby += [complex(z) for z in f.extra_singularities]
    inds = []
    for members, side in [(c, "right") for c in _clusters(lw)] + [(c, "left") for c in _clusters(rw)]:
        center = complex(np.mean(members))
        span = max(abs(m - center) for m in members)
        others = [abs(center - q) for q in nearby if all(abs(q - m) > PINCH_TOL for m in members)]
        d = min(others) if others else 1.0
        inds.append(Indentation(center, span + min(MAX_RADIUS, RADIUS_FRACTION * (d - span)), side))
    inds.sort(key=lambda i: (i.center.real, i.center.imag))
    return Contour(c, tuple(inds))


# ---------------------------------------------------------------------------
# integration


def _abs_profile(f, c, ys):
    vals = np.abs(eval_integrand(f, c + 1j * ys))
    return vals.reshape((-1, ys.size))


def _heights(f, c, rates, tol):
    """Truncation heights above and below the real axis."""
    ys = np.linspace(-20.0, 20.0, 321)
    prof = _abs_profile(f, c, ys)
    l1 = np.trapezoid(prof, ys, axis=-1)
    if np.all(l1 == 0):
        return 1.0, 1.0
    out = []
    for sign, rate in ((1.0, rates[0]), (-1.0, rates[1])):
        thresh = 1e-2 * tol * l1[:, None]
        y0 = 0.0
        found = None
        while y0 < MAX_HEIGHT:
            block = sign * np.arange(y0 + 0.5, y0 + 40.5, 0.5)
            p = _abs_profile(f, c, block)
            ok = np.all(p / rate <= thresh, axis=0)
            bad = np.nonzero(~ok)[0]
            if bad.size == 0:
                found = y0 + 0.5
                break
            if bad[-1] < ok.size - 8:
                found = abs(block[bad[-1] + 1])
                break
            y0 += 40.0
        if found is None:
            raise NonConvergenceError("integrand does not decay to tolerance by |Im s| = 400")
        out.append(max(found, 2.0))
    return out[0], out[1]


def _loop(f, ind: Indentation, tol: float):
    """(1/2πi) ∮ f ds counter-clockwise around the indentation circle."""
    prev = None
    for n in (32, 64, 128, 256, 512):
        th = 2.0 * np.pi * np.arange(n) / n
        e = np.exp(1j * th)
        vals = eval_integrand(f, ind.center + ind.radius * e)
        cur = ind.radius * np.mean(vals * e, axis=-1)
        if prev is not None:
            floor = 1e-14 * ind.radius * np.mean(np.abs(vals), axis=-1)
            if np.all(np.abs(cur - prev) <= np.maximum(tol * np.abs(cur), floor)):
                return cur
        prev = cur
    raise NonConvergenceError("loop quadrature did not converge")


def integrate(f: BarnesIntegrand, contour: Contour, tol: float = 1e-10):
    """(1/2πi) ∫ f(s) ds along the contour.

    The line is truncated where the sampled integrand, divided by its decay
    rate, falls below tol/100 of its L1 mass; composite Gauss–Legendre panels
    (graded towards nearby poles) are refined until two levels agree to tol.

    Raises
    ------
    NoDecayError
        The Stirling count predicts no exponential decay.
    NonConvergenceError
        Refinement cap reached.
    """
    if tol < 1e-13:
        raise ValueError("tol must be at least 1e-13")
    rates = decay_rates(f)
    if min(rates) <= 0:
        raise NoDecayError(f"decay rates {rates} along vertical lines are not positive")
    c = contour.abscissa
    loops = 0.0
    for ind in contour.indentations:
        sign = 1.0 if ind.side == "right" else -1.0
        loops = loops + sign * _loop(f, ind, tol)
    y_up, y_down = _heights(f, c, rates, tol)
    h = 1.0
    if f.power_base is not None:
        osc = float(np.max(np.abs(np.log(np.abs(f.power_base)))))
        if osc > 0:
            h = min(h, 1.5 / osc)
    sing = []
    for p in _poles_between(list(f.numerator), c - 2.0, c + 2.0):
        sing.append((p.imag, abs(p.real - c)))
    for z in f.extra_singularities:
        z = complex(z)
        if abs(z.real - c) < 2.0:
            sing.append((z.imag, abs(z.real - c)))
    breaks = graded_breaks(-y_down, y_up, h, sing)
    line = adaptive_panels(
        lambda y: eval_integrand(f, c + 1j * y),
        breaks,
        tol,
        scale=np.abs(loops) * 2.0 * np.pi if np.ndim(loops) or loops != 0 else None,
    ) / (2.0 * np.pi)
    out = line + loops
    if not f.batch_shape:
        return complex(np.asarray(out).reshape(-1)[0]) if np.ndim(out) else complex(out)
    return np.asarray(out).reshape(f.batch_shape)


def barnes_integral(f: BarnesIntegrand, hint_abscissa: float | None = None, tol: float = 1e-10):
    """Plan a contour with the default families and integrate along it."""
    return integrate(f, plan_contour(f, hint_abscissa=hint_abscissa), tol)


__all__ = [
    "GammaFactor", "up", "down", "BarnesIntegrand", "Indentation", "Contour",
    "eval_integrand", "decay_rates", "plan_contour", "integrate", "barnes_integral",
    "PoleError",
]
