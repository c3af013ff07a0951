"""Exception hierarchy shared across the package.

The CLI maps these onto its exit-code contract: refusals (budget or
precondition failures) exit 1, runtime invariant violations exit 2 and
I/O or store corruption problems exit 3.
"""


class BhlabError(Exception):
    """Base class for all package-specific errors."""


class PreconditionError(BhlabError):
    """An operation was called outside its documented domain."""


class BudgetExceededError(PreconditionError):
    """A computation was refused because it exceeds a configured budget.

    The message always states the budget and, where meaningful, the
    cheapest parameters that would fit (e.g. the coarsest affordable
    grid mesh).
    """


class InvariantViolation(BhlabError):
    """A runtime check caught data that contradicts a maintained invariant."""


class CapViolationError(InvariantViolation):
    """A certified lower bound exceeded a shipped upper bound.

    This is the highest-severity reportable event: it is raised loudly
    and the offending record is never silently stored.
    """


class StoreCorruptError(BhlabError):
    """The results store file cannot be parsed or fails validation."""

    def __init__(self, message, record_id=None):
        super().__init__(message)
        self.record_id = record_id
