"""Exception taxonomy shared by the library and the CLI exit-code mapping."""


class TrajkitError(Exception):
    """Base class for all trajkit errors."""


class InvalidArgumentError(TrajkitError, ValueError):
    """An argument violates an operation's preconditions."""


class DegeneratePathError(TrajkitError):
    """The trajectory has zero total length (all points identical)."""


class ParseError(TrajkitError):
    """A dataset file could not be parsed.

    Carries the offending file and, when known, the 1-based line number.
    """

    def __init__(self, message, file=None, line=None):
        loc = ""
        if file is not None:
            loc = f"{file}: " if line is None else f"{file}:{line}: "
        super().__init__(f"{loc}{message}")
        self.file = file
        self.line = line


class InfeasibleBandError(TrajkitError):
    """The warping band is too narrow to admit any monotone path."""


class UndefinedMetricError(TrajkitError):
    """The metric is undefined for the given signals (e.g. all constant)."""
