"""Exception types shared across the package."""


class OutOfDomainError(ValueError):
    """A subset refers to element ids outside the oracle's ground set."""


class BudgetExceededError(RuntimeError):
    """An exhaustive computation would exceed its enumeration budget.

    Brute-force results serve as ground truth, so exceeding a budget is a
    hard error and never degrades into sampling.
    """


class PreconditionError(ValueError):
    """An operation was called outside its supported parameter regime."""


class InfeasibleTargetsError(RuntimeError):
    """Certificate that no qualifying tuple exists for the requested targets.

    Raised by the tuple-greedy when a round's enumeration comes up empty,
    which proves the target values unachievable by any set of the assumed
    size at that round.
    """

    def __init__(self, message, round_index=None, selected=None, targets=None):
        super().__init__(message)
        self.round_index = round_index
        self.selected = selected
        self.targets = targets


class InconsistentBoundsError(RuntimeError):
    """The subsolver failed at a target value that is guaranteed attainable."""
