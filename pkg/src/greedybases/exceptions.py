"""Exception hierarchy. Argument problems also derive from ValueError."""


class GreedyBasesError(Exception):
    """Base class for every error raised by greedybases."""


class DimensionMismatchError(GreedyBasesError, ValueError):
    pass


class CapExceededError(GreedyBasesError, ValueError):
    pass


class InvalidParameterError(GreedyBasesError, ValueError):
    pass


class ZeroVectorError(GreedyBasesError, ValueError):
    pass


class UnsupportedNormError(GreedyBasesError, ValueError):
    pass


class SpecParseError(GreedyBasesError, ValueError):
    pass


class EmptyCorpusError(GreedyBasesError, ValueError):
    pass


class SelectorAxiomError(GreedyBasesError, ValueError):
    pass


class DualNormError(GreedyBasesError):
    """The LP behind a dual norm or an inner minimization did not finish."""
