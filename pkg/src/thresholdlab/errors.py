"""Exception hierarchy; each class carries the CLI exit code it maps to."""


class ThresholdLabError(Exception):
    exit_code = 1


class MalformedInput(ThresholdLabError):
    exit_code = 4


class EdgeOutOfRange(MalformedInput):
    pass


class EmptyGround(MalformedInput):
    pass


class MalformedDocument(MalformedInput):
    pass


class BadCardinality(MalformedInput):
    pass


class BadEll(MalformedInput):
    pass


class NoEdges(ThresholdLabError):
    exit_code = 2


class DegenerateFamily(ThresholdLabError):
    exit_code = 2


class DegenerateInput(DegenerateFamily):
    pass


class NotAnEdge(ThresholdLabError):
    exit_code = 4


class InsufficientGround(ThresholdLabError):
    exit_code = 3


class BudgetExceeded(ThresholdLabError):
    exit_code = 5


class TooLargeForExact(BudgetExceeded):
    pass


class TooLarge(BudgetExceeded):
    pass
