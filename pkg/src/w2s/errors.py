"""Exception hierarchy. Exit codes mirror the CLI contract."""


class W2SError(Exception):
    exit_code = 1


class InputError(W2SError):
    """Bad arguments, malformed data, or an unmet precondition."""

    exit_code = 2


class ContractViolationError(W2SError):
    """A guaranteed property failed to hold at runtime."""

    exit_code = 3


class WeakLearnerError(ContractViolationError):
    """The weak learner never produced the promised edge."""

    def __init__(self, message, best_edge=None, attempts=None):
        super().__init__(message)
        self.best_edge = best_edge
        self.attempts = attempts


class MarginShortfallError(ContractViolationError):
    """A trained voter missed its guaranteed minimum margin."""


class GeneratorInfeasibleError(InputError):
    """Rejection sampling cannot produce the requested dataset."""


class CheckFailureError(W2SError):
    """An acceptance-style verification did not pass."""

    exit_code = 4
