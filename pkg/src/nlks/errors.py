"""Exception types shared across the package."""


class NLKSError(Exception):
    """Base class for all package errors."""


class ConfigurationError(NLKSError, ValueError):
    """Inconsistent domain, grid or parameter choice."""


class InvariantViolation(NLKSError):
    """A field or trajectory broke one of its structural invariants."""


class BlowUpError(NLKSError, FloatingPointError):
    """Time integration produced non-finite or runaway coefficients."""

    def __init__(self, t, detail=""):
        self.t = float(t)
        msg = f"blow-up at t={self.t:.6g}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)
