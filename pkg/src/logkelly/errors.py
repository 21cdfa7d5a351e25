"""Exception hierarchy.

Every error raised by the library derives from :class:`KellyError`, which is a
``ValueError`` so callers that only care about bad input can catch that.
"""


class KellyError(ValueError):
    pass


class EmptyDistribution(KellyError):
    pass


class NonPositiveProbability(KellyError):
    pass


class ProbabilityMassNotOne(KellyError):
    pass


class NonFiniteValue(KellyError):
    pass


class InsufficientSamples(KellyError):
    pass


class DistributionFileError(KellyError):
    """Malformed distribution file; ``line`` is 1-based (None for whole-file problems)."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


class OutsideSurvivalInterval(KellyError):
    pass


class EmptyFeasibleSet(KellyError):
    pass


class UnboundedObjective(KellyError):
    pass


class SupportOutOfUnitRange(KellyError):
    pass


class DegenerateZeroReturn(KellyError):
    pass


class ZeroVariance(KellyError):
    pass


class DenominatorNonPositive(KellyError):
    pass
