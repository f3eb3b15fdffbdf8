from .error_code import ErrorCode, exit_code_for
from .run_result import RunResult

__all__ = ["ErrorCode", "exit_code_for", "RunResult"]
