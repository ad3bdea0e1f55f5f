"""
rothsq Error Handling - Classification and Exit Codes

This module implements:
- The exception hierarchy raised by the numerical core
- Severity classification of failures
- The mapping from failures to command-line exit codes
"""

import traceback
from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum
from typing import Any, Dict, Optional

from pydantic import ValidationError


class RothsqError(Exception):
    """Base class for every error raised by rothsq"""


class PreconditionError(RothsqError, ValueError):
    """An input violates an operation's precondition"""

    def __init__(self, field_name: str, message: str):
        self.field = field_name
        self.message = message
        super().__init__(f"{field_name}: {message}")


class ArithmeticOverflowError(RothsqError, OverflowError):
    """An exact integer exceeded the configured width"""


class BudgetExhausted(RothsqError):
    """A search stopped on its node or wall-clock cap"""

    def __init__(self, message: str, partial: Optional[Any] = None):
        self.partial = partial
        super().__init__(message)


class ErrorSeverity(Enum):
    """Error severity levels"""
    LOW = "low"
    MEDIUM = "medium"
    HIGH = "high"
    CRITICAL = "critical"


class ExitCode(int, Enum):
    """Process exit codes of the command-line gateway"""
    SUCCESS = 0
    UNEXPECTED = 1
    INVALID_CONFIG = 2
    BUDGET_EXHAUSTED = 3


@dataclass
class ErrorRecord:
    """Represents a classified failure"""
    error_type: str
    message: str
    severity: ErrorSeverity
    exit_code: ExitCode
    field_name: Optional[str] = None
    traceback: str = ""
    timestamp: datetime = field(default_factory=datetime.now)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "type": self.error_type,
            "message": self.message,
            "severity": self.severity.value,
            "exit_code": int(self.exit_code),
            "field": self.field_name,
        }


def classify_error(exception: BaseException) -> ErrorRecord:
    """Classify an exception into an ErrorRecord"""
    error_type = type(exception).__name__
    field_name = None

    if isinstance(exception, BudgetExhausted):
        severity, code = ErrorSeverity.MEDIUM, ExitCode.BUDGET_EXHAUSTED
    elif isinstance(exception, PreconditionError):
        severity, code = ErrorSeverity.LOW, ExitCode.INVALID_CONFIG
        field_name = exception.field
    elif isinstance(exception, ArithmeticOverflowError):
        severity, code = ErrorSeverity.HIGH, ExitCode.INVALID_CONFIG
    elif isinstance(exception, ValidationError):
        severity, code = ErrorSeverity.LOW, ExitCode.INVALID_CONFIG
        errors = exception.errors()
        if errors:
            field_name = ".".join(str(part) for part in errors[0].get("loc", ()))
    else:
        severity, code = ErrorSeverity.CRITICAL, ExitCode.UNEXPECTED

    return ErrorRecord(
        error_type=error_type,
        message=str(exception),
        severity=severity,
        exit_code=code,
        field_name=field_name,
        traceback="".join(traceback.format_exception(type(exception), exception, exception.__traceback__)),
    )


def require(condition: bool, field_name: str, message: str) -> None:
    """Raise PreconditionError unless condition holds"""
    if not condition:
        raise PreconditionError(field_name, message)
