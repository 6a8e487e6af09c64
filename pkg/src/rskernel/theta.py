"""Theta lattice sums on the upper half plane and the coset sums built from them.

Conventions: ``e(x) = exp(2πi x)``, ``θ(z) = Σ_m e(m² z)`` and the weight-1/2
normalization ``B_0(z) = (Im z)^{1/4} θ(z)``.  Points of the upper half plane
are plain Python/numpy complex numbers with positive imaginary part.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InsufficientBoundError

# terms of the theta series are dropped once |e(m² z)| < 1e-18
_THETA_CUT = 18.0 * math.log(10.0)
# accuracy targets of the coset sum enumeration
_TAIL_TARGET = 1e-12
_TAIL_LIMIT = 1e-10


def _check_upper(z) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    if np.any(~(z.imag > 0)):
        raise ValueError("points must lie in the upper half plane")
    return z


def theta(z):
    """θ(z) = Σ_{m∈Z} exp(2πi m² z), vectorized over ``z``."""
    z = _check_upper(z)
    ymin = float(np.min(z.imag))
    top = max(1, math.ceil(math.sqrt(_THETA_CUT / (2.0 * math.pi * ymin))))
    m2 = np.arange(1, top + 1, dtype=float) ** 2
    terms = np.exp(2j * np.pi * z[..., None] * m2)
    return 1.0 + 2.0 * terms.sum(axis=-1)


def weighted_theta(z):
    """B_0(z) = (Im z)^{1/4} θ(z)."""
    z = _check_upper(z)
    return z.imag ** 0.25 * theta(z)


def theta_taylor_coefficients(z: complex, count: int, *, radius: float = 0.5, nodes: int = 256):
    """First ``count`` Taylor coefficients in L of

        y^{1/4} θ(x + y·i(1+L)/(1−L)) (1−L)^{−1/2},   z = x + iy,

    by the trapezoid rule for the Cauchy integral on |L| = ``radius``.
    The function is holomorphic on the unit disc, so any radius in (0, 1)
    gives the same coefficients up to aliasing of order radius**nodes.
    """
    z = complex(_check_upper(z))
    if not 0.0 < radius < 1.0:
        raise ValueError("radius must lie in (0, 1)")
    if count < 1 or count > nodes // 2:
        raise ValueError(f"count must be between 1 and {nodes // 2}")
    circle = radius * np.exp(2j * np.pi * np.arange(nodes) / nodes)
    w = 1j * (1.0 + circle) / (1.0 - circle)
    vals = z.imag ** 0.25 * theta(z.real + z.imag * w) * (1.0 - circle) ** -0.5
    coef = np.fft.fft(vals)[:count] / nodes
    return coef / radius ** np.arange(count)


def theta_taylor_coefficient(z: complex, n: int, *, radius: float = 0.5, nodes: int = 256) -> complex:
    """The n-th coefficient from :func:`theta_taylor_coefficients`; n = 0 gives B_0(z)."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return complex(theta_taylor_coefficients(z, n + 1, radius=radius, nodes=nodes)[n])


def point_pair_phase(z: complex, w: complex) -> complex:
    """i^{1/2} (|z − w̄| / (z − w̄))^{1/2} with principal square roots.

    Since Im(z − w̄) > 0 the argument stays inside (0, π) and no branch cut
    is ever crossed.
    """
    _check_upper(z), _check_upper(w)
    u = complex(z) - complex(w).conjugate()
    return complex(np.exp(0.25j * np.pi - 0.5j * np.angle(u)))


@dataclass(frozen=True)
class MoebiusMap:
    """z ↦ (az + b)/(cz + d) with ad − bc = 1."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        for name in ("a", "b", "c", "d"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if abs(self.a * self.d - self.b * self.c - 1.0) > 1e-14:
            raise ValueError("MoebiusMap needs determinant 1")

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return (self.a * z + self.b) / (self.c * z + self.d)

    def j(self, z):
        """Automorphy factor cz + d."""
        return self.c * np.asarray(z, dtype=complex) + self.d

    def __matmul__(self, other: "MoebiusMap") -> "MoebiusMap":
        return MoebiusMap(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "MoebiusMap":
        return MoebiusMap(self.d, -self.b, -self.c, self.a)

    def __neg__(self) -> "MoebiusMap":
        return MoebiusMap(-self.a, -self.b, -self.c, -self.d)


def translation(x: float, y: float = 1.0) -> MoebiusMap:
    """w ↦ y·w + x, normalized to determinant 1."""
    r = math.sqrt(y)
    return MoebiusMap(r, x / r, 0.0, 1.0 / r)


# representatives of Γ0(4)\SL(2,Z)
COSETS: tuple[MoebiusMap, ...] = tuple(MoebiusMap(0, -1, 1, j) for j in range(4)) + (
    MoebiusMap(1, 0, 0, 1),
    MoebiusMap(1, 0, -2, 1),
)


def theta_tail(order: int, y):
    """(1/l!) Σ_{m≥1} exp(−πm²/y) (πm²/y)^l for l = ``order``, vectorized over y.

    Summation stops once the terms have passed their peak and the next one
    is below 1e-17 of the running sum.
    """
    if order < 0 or int(order) != order:
        raise ValueError("order must be a non-negative integer")
    y = np.asarray(y, dtype=float)
    if np.any(~(y > 0)):
        raise ValueError("y must be positive")
    lfact = math.lgamma(order + 1.0)
    total = np.zeros_like(y)
    active = np.ones(y.shape, dtype=bool)
    m = 1
    while np.any(active):
        x = np.pi * m * m / y
        with np.errstate(divide="ignore"):
            term = np.exp(-x + order * np.log(x) - lfact)
        total = total + np.where(active, term, 0.0)
        done = (x > order) & (term <= 1e-17 * total)
        active &= ~done
        m += 1
    return total


def _tail_estimate(order: int, u: float) -> float:
    # (3/π²)·Q(l+1, u): coprime pairs with |cz+d|² ≈ X have density 3/(πy) in X
    # and each contributes about exp(−u)u^l/l! with u = πX/y
    acc, term = 0.0, 1.0
    for k in range(order + 1):
        if k:
            term *= u / k
        acc += term
    return 3.0 / math.pi ** 2 * math.exp(-u) * acc


def coset_bound(y: float, order: int, target: float = _TAIL_TARGET) -> float:
    """Smallest enumeration bound on |cz+d|² whose estimated tail is below ``target``."""
    u = max(1.0, float(order))
    while _tail_estimate(order, u) > target:
        u *= 1.05
    return u * y / math.pi


def lattice_tail_sum(z: complex, order: int, bound: float | None = None) -> complex:
    """Σ ψ_l(Im γz) (j_γ(z)/|j_γ(z)|)^{−2l} over Γ_∞\\SL(2,Z), l = ``order``.

    Representatives are the coprime pairs (c, d) with c > 0 together with
    (0, 1); pairs with |cz+d|² above ``bound`` are dropped.

    Raises
    ------
    InsufficientBoundError
        If the estimated tail beyond ``bound`` exceeds 1e-10.
    """
    z = complex(_check_upper(z))
    x, y = z.real, z.imag
    if bound is None:
        bound = coset_bound(y, order)
    elif _tail_estimate(order, math.pi * bound / y) > _TAIL_LIMIT:
        raise InsufficientBoundError(
            f"bound {bound:g} leaves a tail above {_TAIL_LIMIT:g}; "
            f"use at least {coset_bound(y, order, _TAIL_LIMIT):.4g}"
        )
    jz = [np.array([1.0 + 0j])]
    c = 1
    while c * c * y * y <= bound:
        half = math.sqrt(bound - c * c * y * y)
        d = np.arange(math.ceil(-c * x - half), math.floor(-c * x + half) + 1)
        d = d[np.gcd(d, c) == 1]
        jz.append(c * z + d.astype(float))
        c += 1
    j = np.concatenate(jz)
    aj = np.abs(j)
    vals = theta_tail(order, y / aj ** 2) * (j / aj) ** (-2 * order)
    return complex(np.sum(vals))


def coset_theta_sum(z: complex, order: int) -> complex:
    """Σ over the six Γ0(4) cosets of B_l(γz)·conj(B_0(γz))·(j_γ(z)/|j_γ(z)|)^{−2l}."""
    z = complex(_check_upper(z))
    total = 0j
    for g in COSETS:
        gz = complex(g(z))
        coef = theta_taylor_coefficients(gz, order + 1)
        j = complex(g.j(z))
        total += coef[order] * np.conj(coef[0]) * (j / abs(j)) ** (-2 * order)
    return total


def coset_sums(z: complex, order: int, bound: float | None = None) -> tuple[complex, complex]:
    """The pair (coset theta sum, lattice tail sum) at ``z`` for the given order.

    The two are related by first = 6·second + 3 at order 0 and
    first = 6·second at positive orders.
    """
    if order < 0 or int(order) != order:
        raise ValueError("order must be a non-negative integer")
    return coset_theta_sum(z, order), lattice_tail_sum(z, order, bound)
