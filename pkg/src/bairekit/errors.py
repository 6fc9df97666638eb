"""Exception types shared across the toolkit."""


class ToolkitError(Exception):
    """Base class for every error raised by this package."""


class BudgetExhausted(ToolkitError):
    """A bounded search ran out of steps.

    This signals "nothing found so far", never a negative fact: an exhausted
    apartness search does not mean the reals are equal, and an exhausted
    density search does not mean the set is empty.
    """

    def __init__(self, message: str, steps: int | None = None):
        super().__init__(message)
        self.steps = steps


class CertificateFailure(ToolkitError):
    """An oracle answer (or a recorded certificate) could not be re-certified."""


class MalformedInstance(ToolkitError):
    """An instance file or instance object violates its schema."""


class NeedsMembershipDecision(ToolkitError):
    """Evaluation was requested on a closed-set instance without a membership hook."""


class NeedsOscZeroDecision(ToolkitError):
    """A search needed the oscillation-zero decision hook and the instance lacks it."""


class DeltaHookUnavailable(ToolkitError):
    """The exact radius-to-distance upgrade only serves exact-distance-backed sets."""


class InjectivityViolation(ToolkitError):
    """Duplicate height values found on the scanned prefix of a countable set."""
