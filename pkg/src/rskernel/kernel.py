"""The point-pair kernel attached to a test function, its inversion, and the
continuous dual Hahn coefficients of a test function.

The kernel of a test function χ is

    k(u) = (1/π)(u+1)^{1/4} ∫_0^∞ F(3/4−it, 3/4+it; 1; −u) W(t) χ(t) dt,
    W(t) = |Γ(1/4+it)Γ(3/4+it)/Γ(2it)|²,

and χ is recovered by χ(t) = ½ ∫_0^∞ (u+1)^{1/4} F(3/4−it, 3/4+it; 1; −u) k(u) du.

Kernel tables live on Gauss–Legendre panels in v = log(1+u); the inversion
integral is the panel quadrature itself, and values between nodes come from
the Lagrange polynomial of the panel.
"""
from __future__ import annotations

import io
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InsufficientGridError
from .gammas import log_gamma, rgamma
from .hypergeom import HahnParams, f3f2_unit, gauss_2f1, hahn_sequence, jacobi_function, jacobi_weight
from .quadrature import adaptive_panels, gauss_legendre, panel_nodes
from .wilson import ChiSpec

ORDER = 20
_V_PANEL = 0.5
_V_LIMIT = 40.0


def _t_breaks(chi: ChiSpec, umax: float) -> np.ndarray:
    # F oscillates like u^{±it}: keep panels below 1.5/log(u) wide
    top = chi.cutoff()
    width = min(0.5, 1.5 / max(math.log1p(umax), 1e-12))
    n = max(2, int(math.ceil(top / width)))
    return np.linspace(0.0, top, n + 1)


def point_pair_kernel(u, chi: ChiSpec, tol: float = 1e-10, *, real: bool = True):
    """k(u) for u ≥ 0, vectorized over ``u``.

    With ``real=False`` the complex accumulation is returned; its imaginary
    part is rounding noise (the integrand is real).
    """
    u = np.asarray(u, dtype=float)
    scalar = u.ndim == 0
    u = np.atleast_1d(u)
    if np.any(u < 0):
        raise ValueError("u must be non-negative")
    if chi.is_zero:
        out = np.zeros(u.shape)
        return out[0] if scalar else out

    def integrand(t):
        f = jacobi_function(t[None, :], u[:, None], real=False)
        return f * (jacobi_weight(t) * chi(t))[None, :]

    val = adaptive_panels(integrand, _t_breaks(chi, float(u.max())), tol)
    out = (u + 1.0) ** 0.25 / math.pi * val
    if real:
        out = out.real
    return out[0] if scalar else out


def _lagrange_weights(x: np.ndarray, nodes: np.ndarray) -> np.ndarray:
    """Matrix L with L @ values = interpolant at x (barycentric form)."""
    diff = nodes[:, None] - nodes[None, :]
    np.fill_diagonal(diff, 1.0)
    bw = 1.0 / np.prod(diff, axis=1)
    d = x[:, None] - nodes[None, :]
    exact = d == 0
    d = np.where(exact, 1.0, d)
    m = bw[None, :] / d
    m = m / m.sum(axis=1, keepdims=True)
    rows = exact.any(axis=1)
    m[rows] = exact[rows].astype(float)
    return m


@dataclass
class KernelTable:
    """Tabulated kernel on Gauss–Legendre panels in v = log(1+u).

    ``u`` starts with the endpoint 0 followed by the panel nodes in
    increasing order; ``k`` holds the kernel values there.
    """

    breaks: np.ndarray
    k: np.ndarray
    chi: ChiSpec
    tol: float
    order: int = ORDER
    u: np.ndarray = field(init=False)

    def __post_init__(self):
        self.breaks = np.asarray(self.breaks, dtype=float)
        self.k = np.asarray(self.k, dtype=float)
        if self.breaks[0] != 0.0 or np.any(np.diff(self.breaks) <= 0):
            raise ValueError("panel breaks must start at 0 and increase")
        v, _ = panel_nodes(self.breaks, self.order)
        self.u = np.concatenate(([0.0], np.expm1(v)))
        if self.k.shape != self.u.shape:
            raise ValueError(f"expected {self.u.size} kernel values, got {self.k.size}")

    @classmethod
    def build(cls, chi: ChiSpec, tol: float = 1e-9, *, breaks=None, order: int = ORDER) -> "KernelTable":
        """Tabulate k for ``chi``.

        Without explicit ``breaks`` panels of width 1/2 in v are added until
        e^{v/2}|k(u)|, the size of the inversion integrand, falls below
        tol/10 of its maximum over a whole panel.
        """
        if breaks is not None:
            breaks = np.asarray(breaks, dtype=float)
            v, _ = panel_nodes(breaks, order)
            k = point_pair_kernel(np.concatenate(([0.0], np.expm1(v))), chi, tol / 10)
            return cls(breaks, k, chi, tol, order)
        x, _ = gauss_legendre(order)
        vals = [point_pair_kernel(0.0, chi, tol / 10)]
        scale = abs(vals[0])
        lo = 0.0
        while True:
            v = lo + _V_PANEL * 0.5 * (x + 1.0)
            kv = point_pair_kernel(np.expm1(v), chi, tol / 10)
            vals.extend(kv)
            size = np.exp(0.5 * v) * np.abs(kv)
            lo += _V_PANEL
            if chi.is_zero or (np.max(size) <= 0.1 * tol * max(scale, 1e-300) and lo >= 2.0):
                break
            scale = max(scale, float(np.max(size)))
            if lo >= _V_LIMIT:
                raise InsufficientGridError("kernel did not decay within log(1+u) <= 40")
        breaks = np.arange(0.0, lo + 0.5 * _V_PANEL, _V_PANEL)
        return cls(breaks, np.array(vals), chi, tol, order)

    @property
    def nodes(self) -> tuple[np.ndarray, np.ndarray]:
        """Quadrature nodes and weights in v."""
        return panel_nodes(self.breaks, self.order)

    @property
    def tail_estimate(self) -> float:
        """Size of the inversion integrand over the last panel relative to its maximum."""
        v, _ = self.nodes
        size = np.exp(0.5 * v) * np.abs(self.k[1:])
        peak = max(float(np.max(size)), abs(self.k[0]))
        if peak == 0:
            return 0.0
        return float(np.max(size[-self.order:]) / peak)

    def check_coverage(self) -> None:
        if self.tail_estimate > 0.1 * self.tol:
            raise InsufficientGridError(
                f"kernel table ends at u={self.u[-1]:.4g} where the integrand is still "
                f"{self.tail_estimate:.2e} of its peak (needs < {0.1 * self.tol:.1e})"
            )

    def __call__(self, u):
        """Panel-wise polynomial interpolation of k."""
        u = np.asarray(u, dtype=float)
        scalar = u.ndim == 0
        u = np.atleast_1d(u)
        v = np.log1p(u)
        if np.any(u < 0) or np.any(v > self.breaks[-1]):
            raise InsufficientGridError(f"u outside the tabulated range [0, {np.expm1(self.breaks[-1]):.4g}]")
        out = np.empty(u.shape)
        panel = np.clip(np.searchsorted(self.breaks, v, side="right") - 1, 0, self.breaks.size - 2)
        vn, _ = self.nodes
        for p in np.unique(panel):
            m = panel == p
            lo, hi = p * self.order, (p + 1) * self.order
            # k[0] is the u = 0 endpoint, so panel values are shifted by one
            out[m] = _lagrange_weights(v[m], vn[lo:hi]) @ self.k[lo + 1:hi + 1]
        return out[0] if scalar else out

    # -- plain-text form ----------------------------------------------------

    def dumps(self) -> str:
        buf = io.StringIO()
        buf.write(f"# chi={self.chi.describe()} tol={self.tol!r} order={self.order}\n")
        buf.write("# breaks=" + ",".join(repr(float(b)) for b in self.breaks) + "\n")
        for u, k in zip(self.u, self.k):
            buf.write(f"{float(u)!r} {float(k)!r}\n")
        return buf.getvalue()

    @classmethod
    def loads(cls, text: str) -> "KernelTable":
        from .errors import ConfigError

        lines = text.splitlines()
        if len(lines) < 2 or not lines[0].startswith("# chi=") or not lines[1].startswith("# breaks="):
            raise ConfigError("missing kernel table header", line=1)
        meta = dict(part.split("=", 1) for part in lines[0][2:].split(" "))
        try:
            chi = ChiSpec.parse(meta["chi"])
            tol = float(meta["tol"])
            order = int(meta["order"])
            breaks = [float(b) for b in lines[1][len("# breaks="):].split(",")]
        except (KeyError, ValueError) as exc:
            raise ConfigError(f"bad kernel table header: {exc}", line=1) from exc
        us, ks = [], []
        for i, line in enumerate(lines[2:], start=3):
            if not line.strip():
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ConfigError("expected two columns 'u k'", line=i)
            try:
                us.append(float(parts[0]))
                ks.append(float(parts[1]))
            except ValueError as exc:
                raise ConfigError(str(exc), line=i) from exc
        table = cls(np.array(breaks), np.array(ks), chi, tol, order)
        if not np.allclose(table.u, us, rtol=1e-14, atol=0):
            raise ConfigError("u column does not match the panel nodes in the header")
        return table


def invert_kernel(t, table: KernelTable):
    """½ ∫_0^∞ (u+1)^{1/4} F(3/4−it, 3/4+it; 1; −u) k(u) du on the table's panels.

    Raises
    ------
    InsufficientGridError
        If the table stops before the integrand has decayed to tol/10.
    """
    table.check_coverage()
    t = np.asarray(t, dtype=float)
    scalar = t.ndim == 0
    t = np.atleast_1d(np.abs(t))
    v, w = table.nodes
    u = np.expm1(v)
    f = jacobi_function(t[:, None], u[None, :])
    # du = e^v dv
    out = 0.5 * f @ (w * np.exp(1.25 * v) * table.k[1:])
    return out[0] if scalar else out


def selberg_transform(t, table: KernelTable):
    """∫_0^1 k(R²/(1−R²)) (1−R²)^{s−2} F(s+1/4, s−1/4; 1; R²) R dR, s = 1/2 + it.

    Integrated with Gauss–Legendre panels in R whose breaks are the images of
    the table's panel breaks; k between table nodes is interpolated.
    """
    table.check_coverage()
    t = np.asarray(t, dtype=float)
    scalar = t.ndim == 0
    t = np.atleast_1d(t)
    ub = np.expm1(table.breaks)
    rb = np.sqrt(ub / (1.0 + ub))
    r, w = panel_nodes(rb, table.order)
    r2 = r * r
    kv = table(r2 / (1.0 - r2))
    out = np.empty(t.shape)
    for i, ti in enumerate(t):
        s = 0.5 + 1j * ti
        f = gauss_2f1(s + 0.25, s - 0.25, 1.0, r2)
        vals = kv * np.exp((s - 2.0) * np.log1p(-r2)) * f * r
        out[i] = float(np.sum(w * vals).real)
    return out[0] if scalar else out


# ---------------------------------------------------------------------------
# continuous dual Hahn coefficients


def _coefficient_weight(t, T: float) -> np.ndarray:
    """|Γ(1/4+it)/Γ(2it)|² Γ(1/4±it±iT) for real t, zero at t = 0."""
    it, iT = 1j * np.asarray(t, dtype=float), 1j * T
    lg = 2.0 * log_gamma(0.25 + it).real
    lg = lg + 2.0 * (log_gamma(0.25 + it + iT).real + log_gamma(0.25 + it - iT).real)
    return np.exp(lg) * np.abs(rgamma(2.0 * it)) ** 2


def _coefficient_breaks(chi: ChiSpec) -> np.ndarray:
    top = chi.cutoff()
    n = max(4, int(math.ceil(top / 0.5)))
    return np.linspace(0.0, top, n + 1)


def hahn_coefficient(n: int, T: float, chi: ChiSpec, tol: float = 1e-9, *, form: str = "3f2") -> complex:
    """∫_ℝ |Γ(1/4+it)/Γ(2it)|² Γ(1/4±it±iT) χ(t) 3F2(−n, 1/4+it, 1/4−it; 1/2+iT, 1/2−iT; 1) dt.

    ``form="hahn"`` evaluates the equivalent expression with the continuous
    dual Hahn polynomial S_n(t²; 1/4, 1/4−iT, 1/4+iT) divided by (1/2±iT)_n.
    The integrand is even, so twice the half-line integral is returned.
    """
    if n < 0 or int(n) != n:
        raise ValueError("n must be a non-negative integer")
    if form not in ("3f2", "hahn"):
        raise ValueError("form must be '3f2' or 'hahn'")
    if chi.is_zero:
        return 0j
    T = float(T)
    hp = HahnParams(0.25, 0.25 - 1j * T, 0.25 + 1j * T)

    def poly(t):
        if form == "3f2":
            return f3f2_unit(-float(n), 0.25 + 1j * t, 0.25 - 1j * t, 0.5 + 1j * T, 0.5 - 1j * T)
        norm = np.prod([(0.5 + k) ** 2 + T * T for k in range(n)]) if n else 1.0
        return hahn_sequence(n, t * t, hp)[n] / norm

    def integrand(t):
        return _coefficient_weight(t, T) * chi(t) * poly(t)

    return complex(2.0 * adaptive_panels(integrand, _coefficient_breaks(chi), tol))


def hahn_coefficients(nmax: int, T: float, chi: ChiSpec, tol: float = 1e-11) -> np.ndarray:
    """The coefficients for n = 0..nmax at once (normalized Hahn recurrence)."""
    from .hypergeom import hahn_ratio_sequence

    T = float(T)
    hp = HahnParams(0.25, 0.25 - 1j * T, 0.25 + 1j * T)

    def integrand(t):
        seq = hahn_ratio_sequence(nmax, t * t, hp)
        return seq * (_coefficient_weight(t, T) * chi(t))[None, :]

    return 2.0 * adaptive_panels(integrand, _coefficient_breaks(chi), tol)
