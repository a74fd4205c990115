"""Shared exception types.

Domain violations (bad arguments, points outside a function's validity range)
raise ValueError or its subclass ConstraintViolation; series or quadrature
routines that cannot reach their tolerance raise NonConvergenceError.  The
command line maps ConstraintViolation/ValueError to exit code 1 and
NonConvergenceError to exit code 2.
"""


class ConstraintViolation(ValueError):
    """A parameter set violates one of its validity constraints.

    The message names the first violated constraint.
    """


class NonConvergenceError(RuntimeError):
    """A series or quadrature failed to reach the requested tolerance."""
