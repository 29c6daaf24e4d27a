"""Exception hierarchy.

Two broad families matter to callers (and to the CLI exit code):
``InputError`` for bad data or configuration, ``ComputationError`` for
failures inside the numerics or statistics.
"""


class HeatPanelError(Exception):
    """Base class for every error raised by heatpanel."""


class InputError(HeatPanelError):
    """Invalid input data or configuration (CLI exit code 1)."""


class ComputationError(HeatPanelError):
    """A numerical or statistical step could not be carried out (exit code 2)."""


# -- panel -----------------------------------------------------------------

class MalformedCsv(InputError):
    pass


class UnreadableInput(InputError, OSError):
    pass


class DuplicateCell(InputError):
    pass


class IncompletePanel(InputError):
    pass


class NonFiniteValue(InputError):
    pass


class UnknownRegion(InputError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class UnknownVariable(InputError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class BadConfig(InputError):
    pass


class BadAlpha(BadConfig):
    pass


# -- trend / assoc ---------------------------------------------------------

class TooShort(ComputationError):
    pass


class DegenerateTime(ComputationError):
    pass


class EmptyInput(ComputationError):
    pass


class LengthMismatch(ComputationError):
    pass


class TimeMisalignment(ComputationError):
    pass


class ZeroVariance(ComputationError):
    pass


# -- numerics --------------------------------------------------------------

class DomainError(ComputationError, ValueError):
    pass


class NoConvergence(ComputationError):
    pass


class NotPositiveDefinite(ComputationError):
    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


# -- stat test -------------------------------------------------------------

class SingularCovariance(NotPositiveDefinite):
    pass


class InsufficientSamples(ComputationError):
    pass


class DegenerateGrouping(ComputationError):
    pass


# -- breaks ----------------------------------------------------------------

class TooFewDistinct(ComputationError):
    pass


class BadK(ComputationError, ValueError):
    pass


class NonFinite(ComputationError, ValueError):
    pass


class UnsortedBoundaries(ComputationError, ValueError):
    pass


class IoError(ComputationError, OSError):
    pass


class PipelineError(HeatPanelError):
    """A module error annotated with the pipeline stage it came from."""

    def __init__(self, stage, cause):
        super().__init__(f"[{stage}] {type(cause).__name__}: {cause}")
        self.stage = stage
        self.cause = cause
