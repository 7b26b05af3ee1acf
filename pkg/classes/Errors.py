import threading
from typing import Any, Optional


class SemigroupError(Exception):
    """Base error; `witness` holds whatever certifies the failure."""

    def __init__(self, message: str, witness: Any = None):
        super().__init__(message)
        self.witness = witness


class ParseError(SemigroupError):
    pass


class IndexOutOfRange(SemigroupError):
    pass


class NonAssociative(SemigroupError):
    pass


class NotAGroup(SemigroupError):
    pass


class NotWellDefined(SemigroupError):
    pass


class NotACongruence(SemigroupError):
    pass


class NotAHomomorphism(SemigroupError):
    pass


class NotASubsemigroup(SemigroupError):
    pass


class NotAnIdeal(SemigroupError):
    pass


class NotGenerating(SemigroupError):
    pass


class UnknownLetter(SemigroupError):
    pass


class UnknownSymbol(SemigroupError):
    pass


class HypothesisViolated(SemigroupError):
    pass


class NotAMorphismOfRequiredKind(SemigroupError):
    pass


class NotAJClassSubsemigroup(SemigroupError):
    pass


class TooLarge(SemigroupError):
    pass


class PreconditionFailed(SemigroupError):
    pass


class BudgetExceeded(SemigroupError):
    pass


class SearchCancelled(BudgetExceeded):
    pass


class StepBudget:
    """
    Step counter shared by budgeted searches.

    Args:
        limit: maximum number of steps before BudgetExceeded
        cancel_event: optional threading.Event; once set, the next spend()
            raises SearchCancelled
    """

    def __init__(self, limit: int, cancel_event: Optional[threading.Event] = None):
        if limit <= 0:
            raise ValueError("budget must be positive")
        self.limit = limit
        self.used = 0
        self.cancel_event = cancel_event

    def spend(self, steps: int = 1):
        if self.cancel_event is not None and self.cancel_event.is_set():
            raise SearchCancelled(f"search cancelled after {self.used} steps", witness=self.used)
        self.used += steps
        if self.used > self.limit:
            raise BudgetExceeded(f"step budget of {self.limit} exhausted", witness=self.used)

    @property
    def remaining(self) -> int:
        return max(0, self.limit - self.used)

    def __repr__(self):
        return f"StepBudget(used={self.used}, limit={self.limit})"
