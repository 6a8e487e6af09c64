"""Plain-text inputs: Fourier coefficient tables, L-value samples and run configs.

All three formats are line based with ``#`` comments.  Parse errors raise
:class:`~rskernel.errors.ConfigError` naming the offending line.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ConfigError


def _rows(text: str, width: int, what: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != width:
            raise ConfigError(f"{what} row needs {width} columns, found {len(parts)}", line=lineno)
        try:
            vals = [float(p) for p in parts]
        except ValueError:
            raise ConfigError(f"{what} row has a non-numeric entry: {line!r}", line=lineno) from None
        if not np.all(np.isfinite(vals)):
            raise ConfigError(f"{what} row has a non-finite entry", line=lineno)
        yield lineno, vals


@dataclass(frozen=True)
class CoefficientTable:
    """Rows (m, ρ1(m), ρ2(m)) with m strictly increasing positive integers."""

    m: np.ndarray
    rho1: np.ndarray
    rho2: np.ndarray

    def __post_init__(self):
        if self.m.size == 0:
            raise ConfigError("coefficient table is empty")

    @classmethod
    def parse(cls, text: str) -> "CoefficientTable":
        """Columns ``m rho1_re rho1_im rho2_re rho2_im``."""
        ms, r1, r2 = [], [], []
        for lineno, (m, a, b, c, d) in _rows(text, 5, "coefficient"):
            if m != int(m) or m <= 0:
                raise ConfigError(f"m must be a positive integer, got {m:g}", line=lineno, field="m")
            if ms and m <= ms[-1]:
                raise ConfigError(f"m must increase strictly ({int(m)} after {ms[-1]})", line=lineno, field="m")
            ms.append(int(m))
            r1.append(complex(a, b))
            r2.append(complex(c, d))
        return cls(np.array(ms, dtype=np.int64), np.array(r1), np.array(r2))

    @classmethod
    def load(cls, path) -> "CoefficientTable":
        return cls.parse(Path(path).read_text())

    @classmethod
    def from_arrays(cls, m, rho1, rho2) -> "CoefficientTable":
        lines = [f"{int(k)} {float(a.real)!r} {float(a.imag)!r} {float(b.real)!r} {float(b.imag)!r}"
                 for k, a, b in zip(m, np.asarray(rho1, dtype=complex), np.asarray(rho2, dtype=complex))]
        return cls.parse("\n".join(lines))


@dataclass(frozen=True)
class LSampleTable:
    """Samples of ζ(2S)L(S) at S = 1/2 + iτ, τ strictly increasing."""

    tau: np.ndarray
    value: np.ndarray

    @classmethod
    def parse(cls, text: str) -> "LSampleTable":
        """Columns ``tau value_re value_im``."""
        taus, vals = [], []
        for lineno, (tau, re, im) in _rows(text, 3, "sample"):
            if taus and tau <= taus[-1]:
                raise ConfigError(f"tau must increase strictly ({tau:g} after {taus[-1]:g})", line=lineno, field="tau")
            taus.append(tau)
            vals.append(complex(re, im))
        if len(taus) < 2:
            raise ConfigError("at least two samples are needed")
        if taus[0] >= 0 or taus[-1] <= 0:
            raise ConfigError("samples must cover both sides of tau = 0")
        return cls(np.array(taus), np.array(vals))

    @classmethod
    def load(cls, path) -> "LSampleTable":
        return cls.parse(Path(path).read_text())


# keys accepted in run configuration files and how to convert them
CONFIG_KEYS = {
    "t1": float,
    "t2": float,
    "tol": float,
    "threads": int,
    "filter": str,
    "out": str,
    "coefficients": str,
    "lsamples": str,
}


def parse_config(text: str) -> dict:
    """``key = value`` lines; ``filter`` may repeat or hold a comma list."""
    out: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("expected 'key = value'", line=lineno)
        key, value = (p.strip() for p in line.split("=", 1))
        if key not in CONFIG_KEYS:
            raise ConfigError(f"unknown key (known: {', '.join(CONFIG_KEYS)})", line=lineno, field=key)
        if not value:
            raise ConfigError("empty value", line=lineno, field=key)
        try:
            conv = CONFIG_KEYS[key](value)
        except ValueError:
            raise ConfigError(f"cannot read {value!r} as {CONFIG_KEYS[key].__name__}", line=lineno, field=key) from None
        if key in ("t1", "t2", "tol") and not conv > 0:
            raise ConfigError("must be positive", line=lineno, field=key)
        if key == "threads" and conv < 1:
            raise ConfigError("must be at least 1", line=lineno, field=key)
        if key == "filter":
            out.setdefault("filter", []).extend(v.strip() for v in conv.split(",") if v.strip())
        else:
            out[key] = conv
    return out


def load_config(path) -> dict:
    return parse_config(Path(path).read_text())
