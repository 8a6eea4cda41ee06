"""Exception hierarchy shared across the package.

Two top-level families matter for callers: bad input (``ValidationError``,
CLI exit code 3) and exhausted caps or budgets (``ResourceCapError``, CLI
exit code 4).  Everything raised by the library derives from
``RigidityError`` so callers can catch broadly.
"""


class RigidityError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(RigidityError):
    """Invalid input: bad ranges, violated preconditions, schema errors."""


class ResourceCapError(RigidityError):
    """An explicit cap or budget was exhausted; no silent approximation."""


class ConvergenceError(ResourceCapError):
    """An iterative method hit its iteration cap before reaching tolerance."""


class IndeterminateResultError(ResourceCapError):
    """A truncated enumeration made the requested yes/no answer unknowable."""
