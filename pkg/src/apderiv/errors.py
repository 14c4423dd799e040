"""Exception types shared across the package."""


class ApderivError(Exception):
    """Base class for all errors raised by apderiv."""


class ParameterError(ApderivError, ValueError):
    """An argument is outside the domain of the operation (non-prime p, x = 0, ...)."""


class TooLarge(ApderivError):
    """A value would exceed the configured bit bound if materialized."""

    def __init__(self, what: str, bits: int, limit: int):
        self.what = what
        self.bits = bits
        self.limit = limit
        super().__init__(f"{what} needs ~{bits} bits, limit is {limit}")


class FactorBoundExceeded(ApderivError):
    """Trial division ran past the configured bound without finishing."""


class InfiniteSet(ApderivError):
    """The requested preimage set is infinite (anti-derivatives of 0)."""

    def __init__(self, p: int):
        self.p = p
        self.description = "{x : p does not divide x} U {0}"
        super().__init__(f"anti-derivatives of 0 w.r.t. p={p} form the infinite set {self.description}")


class EmptySet(ApderivError):
    """An operation needs a member of a set that turned out empty."""


class VerificationFailure(ApderivError):
    """An independent check disagreed with the analytic result."""
