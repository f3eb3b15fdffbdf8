from enum import Enum


class ErrorCode(str, Enum):
    INVALID_ARGUMENT = "INVALID_ARGUMENT"
    NO_VALID_PATTERNS = "NO_VALID_PATTERNS"
    DIVERGENCE = "DIVERGENCE"
    PARSE_ERROR = "PARSE_ERROR"
    IO_ERROR = "IO_ERROR"
    USAGE_ERROR = "USAGE_ERROR"


_EXIT_CODES = {
    ErrorCode.USAGE_ERROR: 1,
    ErrorCode.INVALID_ARGUMENT: 2,
    ErrorCode.NO_VALID_PATTERNS: 2,
    ErrorCode.DIVERGENCE: 2,
    ErrorCode.PARSE_ERROR: 3,
    ErrorCode.IO_ERROR: 3,
}


def exit_code_for(code: ErrorCode) -> int:
    """Process exit status for an error code (0 is reserved for success)."""
    return _EXIT_CODES[code]
