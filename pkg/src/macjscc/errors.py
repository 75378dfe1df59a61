"""Exception types shared by all modules."""


class MacJsccError(Exception):
    """Base class for library errors."""


class InputError(MacJsccError, ValueError):
    """Malformed or out-of-range input (CLI exit code 2)."""


class NumericalError(MacJsccError, ArithmeticError):
    """A numerical procedure failed to produce a trustworthy answer (CLI exit code 3)."""
