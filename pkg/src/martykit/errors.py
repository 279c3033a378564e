"""Exception types shared across the toolkit."""

from __future__ import annotations


class MartykitError(Exception):
    """Base class for all toolkit-specific errors."""


class RootFindingError(MartykitError):
    """Root iteration failed to produce a certified root list.

    Carries the roots that did validate in ``partial`` so callers can
    inspect how far the computation got.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class ClearanceError(MartykitError):
    """A zero or pole sits too close to an evaluation circle."""

    def __init__(self, message, location=None, kind=None):
        super().__init__(message)
        self.location = location
        self.kind = kind


class QuadratureError(MartykitError):
    """Node doubling stopped before the requested tolerance was met.

    ``best`` holds the last estimate, ``estimate`` the last successive
    difference.
    """

    def __init__(self, message, best=None, estimate=None):
        super().__init__(message)
        self.best = best
        self.estimate = estimate


class PreconditionError(MartykitError):
    """An operation was called outside its documented domain."""


class MultiplicityError(PreconditionError):
    """A zero or pole violates a required multiplicity lower bound."""

    def __init__(self, message, location=None, multiplicity=None, required=None):
        super().__init__(message)
        self.location = location
        self.multiplicity = multiplicity
        self.required = required


class HolomorphyError(MartykitError):
    """A function that must be pole-free on a region has a pole there.

    This is also the deliberate failure mode of the sharpness families,
    so the offending location is kept on the exception.
    """

    def __init__(self, message, location=None):
        super().__init__(message)
        self.location = location


class ContractError(MartykitError):
    """A numerical contract (residual or margin bound) was violated."""

    def __init__(self, message, value=None, bound=None):
        super().__init__(message)
        self.value = value
        self.bound = bound
