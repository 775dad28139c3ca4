"""Exception types shared across the package.

Data/domain failures derive from :class:`DataError`; the CLI maps them to exit
status 1. Bad parameters raise plain :class:`ValueError` (exit status 2).
"""


class DataError(Exception):
    """Input data cannot be turned into the requested result."""


class EmptyLogError(DataError):
    pass


class FeatureError(DataError):
    pass


class MatrixFormatError(DataError):
    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class ClusterBudgetError(DataError):
    pass


class QualityError(DataError):
    pass
