"""Exception hierarchy shared by all modules."""


class XiongError(Exception):
    """Base class for library errors."""


class AlphabetError(XiongError, ValueError):
    """Symbol outside the alphabet, or two sequences over different alphabets."""


class HorizonError(XiongError, IndexError):
    """A read went past the defined content of a sequence."""


class BudgetExceeded(XiongError):
    """An enumeration would exceed its configured size cap."""


class ScheduleError(XiongError):
    """A stage cannot be planned under the requested schedule."""


class NoSuchTuple(XiongError):
    """The schedule has no block realising the requested map pattern."""


class CoverError(XiongError):
    """A cover fails a precondition of the reduction pipeline."""
