"""Complex special functions for Rankin-Selberg type kernels, with a
harness that checks the identities relating them."""
from .errors import (
    ConfigError, InsufficientBoundError, InsufficientGridError, NoDecayError, NonConvergenceError,
    PinchedContourError, PoleError, RegionError, RSKernelError,
)
from .gammas import SpectralParams, gamma, log_gamma, rgamma, zeta
from .wilson import ChiSpec, WilsonParams, integrated_kernel, spectral_kernel, wilson_function

__version__ = "0.1.0"

__all__ = [
    "ConfigError", "InsufficientBoundError", "InsufficientGridError", "NoDecayError", "NonConvergenceError",
    "PinchedContourError", "PoleError", "RegionError", "RSKernelError",
    "SpectralParams", "gamma", "log_gamma", "rgamma", "zeta",
    "ChiSpec", "WilsonParams", "integrated_kernel", "spectral_kernel", "wilson_function",
]
