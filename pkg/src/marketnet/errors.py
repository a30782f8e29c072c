"""Exception hierarchy. Each class carries the machine-readable category and
exit code the CLI reports."""


class MarketnetError(Exception):
    category = "error"
    exit_code = 1


class ConfigError(MarketnetError, ValueError):
    category = "config"
    exit_code = 2


class ParseError(MarketnetError, ValueError):
    category = "parse"
    exit_code = 3

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ValidationError(ParseError):
    category = "validation"


class DataError(MarketnetError, ValueError):
    category = "data"
    exit_code = 3


class UndefinedStatisticError(MarketnetError, ArithmeticError):
    """Raised when a statistic has no value on the given sample (constant margin,
    collinear design)."""

    category = "undefined-statistic"
    exit_code = 4


class InputFileError(MarketnetError, OSError):
    category = "file"
    exit_code = 5
