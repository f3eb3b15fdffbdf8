"""Exception hierarchy shared by the kernels, generators and CLI."""

from __future__ import annotations

from graphpe.models.error_code import ErrorCode


class GraphPEError(Exception):
    """Base class; ``code`` selects the CLI exit status."""

    code: ErrorCode = ErrorCode.INVALID_ARGUMENT


class InvalidArgumentError(GraphPEError, ValueError):
    """Raised when an argument violates an operation's precondition."""

    code = ErrorCode.INVALID_ARGUMENT


class NoValidPatternsError(GraphPEError):
    """Raised when no vertex yields a complete embedding vector."""

    code = ErrorCode.NO_VALID_PATTERNS


class DivergenceError(GraphPEError):
    """Raised when a generated orbit leaves the finite/bounded region."""

    code = ErrorCode.DIVERGENCE

    def __init__(self, message: str, index: int):
        super().__init__(message)
        self.index = index


class SignalParseError(GraphPEError, ValueError):
    """Raised when a CSV input cannot be parsed; ``line`` is 1-based."""

    code = ErrorCode.PARSE_ERROR

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class UsageError(GraphPEError):
    """Raised when command-line inputs are inconsistent with the chosen metric."""

    code = ErrorCode.USAGE_ERROR
