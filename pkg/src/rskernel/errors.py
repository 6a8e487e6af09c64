"""Exception hierarchy shared by every numerical layer."""


class RSKernelError(Exception):
    """Base class for all library errors."""


class PoleError(RSKernelError, ValueError):
    """A gamma argument sits on (or within 1e-12 of) a non-positive integer."""


class PinchedContourError(RSKernelError):
    """A left-family pole collides with a right-family pole."""


class NoDecayError(RSKernelError):
    """The integrand does not decay exponentially along vertical lines."""


class NonConvergenceError(RSKernelError):
    """Adaptive refinement hit its cap before meeting the tolerance."""


class RegionError(RSKernelError, ValueError):
    """Argument outside the supported evaluation region."""


class InsufficientGridError(RSKernelError):
    """A tabulated or sampled input does not cover the range a computation needs."""


class InsufficientBoundError(InsufficientGridError):
    """A lattice-sum enumeration bound leaves a tail above the requested accuracy."""


class ConfigError(RSKernelError, ValueError):
    """Malformed configuration or input file; carries a line/field diagnostic."""

    def __init__(self, message: str, *, line: int | None = None, field: str | None = None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
