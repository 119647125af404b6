"""Exception and warning types raised across langsim."""


class LangSimError(Exception):
    """Base class for every error raised by this package."""


class DataFormatError(LangSimError, ValueError):
    """An input file could not be interpreted."""


class EmptyFileError(DataFormatError):
    pass


class MissingColumnError(DataFormatError):
    pass


class MissingMetadataError(DataFormatError):
    pass


class UnparseableCellError(DataFormatError):
    pass


class NotSquareError(DataFormatError):
    pass


class SymmetryViolationError(DataFormatError):
    pass


class DuplicateCodeError(DataFormatError):
    pass


class DuplicateFeatureIdError(DataFormatError):
    pass


class InvalidCategoryCountError(DataFormatError):
    pass


class ValueOutOfRangeError(DataFormatError):
    pass


class OutOfRangeScoreError(DataFormatError):
    pass


class UnknownLanguageError(LangSimError, LookupError):
    def __init__(self, code, known=None, line=None):
        self.code = code
        self.known = list(known) if known is not None else None
        self.line = line
        msg = f"unknown language {code!r}"
        if line is not None:
            msg += f" (line {line})"
        if self.known is not None:
            msg += f"; valid codes: {', '.join(self.known)}"
        super().__init__(msg)

    def __str__(self):
        return self.args[0]


class UnknownFeatureError(LangSimError, LookupError):
    def __str__(self):
        return self.args[0]


class LanguageSetMismatchError(LangSimError, ValueError):
    pass


class NoSharedFeaturesError(LangSimError, ValueError):
    """Two languages have no feature in common, so they are incomparable."""


class MissingCategoryError(LangSimError, ValueError):
    pass


class EmptyCandidatesError(LangSimError, ValueError):
    pass


class StatisticsError(LangSimError, ValueError):
    pass


class TooFewPointsError(StatisticsError):
    pass


class ZeroVarianceError(StatisticsError):
    pass


class NonFiniteValueError(StatisticsError):
    pass


class InvalidDegreesOfFreedomError(StatisticsError):
    pass


class SparseOverlapWarning(UserWarning):
    """A language pair shares fewer features than the reliability threshold."""
