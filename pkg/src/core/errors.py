"""
Standardized error handling for the Weibull tail-coefficient toolkit
"""

import functools
import numbers
import sys
from enum import Enum
from typing import Any, Callable, Dict, Optional, TypeVar

from rich.console import Console

F = TypeVar("F", bound=Callable[..., Any])


class ErrorCategory(str, Enum):
    """Categories of errors in the system"""
    VALIDATION = "validation"
    DOMAIN = "domain"
    PARSING = "parsing"
    NUMERICAL = "numerical"
    IO = "io"
    CONFIGURATION = "configuration"
    SYSTEM = "system"


# CLI exit codes: 2 usage, 3 domain/data, 4 numerical failure
EXIT_CODES: Dict[ErrorCategory, int] = {
    ErrorCategory.VALIDATION: 2,
    ErrorCategory.CONFIGURATION: 2,
    ErrorCategory.DOMAIN: 3,
    ErrorCategory.PARSING: 3,
    ErrorCategory.IO: 3,
    ErrorCategory.NUMERICAL: 4,
    ErrorCategory.SYSTEM: 1,
}


class WeibullTailError(Exception):
    """Base exception for all toolkit errors"""

    def __init__(
        self,
        message: str,
        category: ErrorCategory = ErrorCategory.SYSTEM,
        details: Optional[Dict[str, Any]] = None,
        cause: Optional[Exception] = None
    ):
        super().__init__(message)
        self.message = message
        self.category = category
        self.details = details or {}
        self.cause = cause

    @property
    def exit_code(self) -> int:
        return EXIT_CODES.get(self.category, 1)

    def to_dict(self) -> Dict[str, Any]:
        """Convert error to dictionary for logging/reporting"""
        return {
            "error_type": self.__class__.__name__,
            "message": self.message,
            "category": self.category.value,
            "details": self.details,
            "cause": str(self.cause) if self.cause else None
        }


class ValidationError(WeibullTailError):
    """Inconsistent or missing user input (usage errors)"""

    def __init__(self, message: str, field: Optional[str] = None, **kwargs):
        super().__init__(message, ErrorCategory.VALIDATION, **kwargs)
        if field:
            self.details["field"] = field


class DomainError(WeibullTailError):
    """An argument lies outside the domain where the quantity is defined"""

    def __init__(self, message: str, argument: Optional[str] = None, value: Any = None, **kwargs):
        super().__init__(message, ErrorCategory.DOMAIN, **kwargs)
        if argument:
            self.details["argument"] = argument
            self.details["value"] = value


class UndefinedRateError(DomainError):
    """b(log n) vanishes, so the optimal intermediate sequence is undefined"""


class IndeterminateSignError(DomainError):
    """The bias function changes sign on the probed window"""


class ParseError(WeibullTailError):
    """Errors while reading observation files"""

    def __init__(self, message: str, file_path: Optional[str] = None, line_number: Optional[int] = None, **kwargs):
        super().__init__(message, ErrorCategory.PARSING, **kwargs)
        if file_path:
            self.details["file_path"] = file_path
        if line_number:
            self.details["line_number"] = line_number


class NumericalError(WeibullTailError):
    """Quadrature, inversion or estimation produced an unusable number"""

    def __init__(self, message: str, **kwargs):
        super().__init__(message, ErrorCategory.NUMERICAL, **kwargs)


class SaturationError(NumericalError):
    """F^{-1}(1 - e^{-x}) is no longer resolvable in double precision"""


class OutputError(WeibullTailError):
    """Output files could not be written"""

    def __init__(self, message: str, path: Optional[str] = None, **kwargs):
        super().__init__(message, ErrorCategory.IO, **kwargs)
        if path:
            self.details["path"] = path


class ConfigurationError(WeibullTailError):
    """Configuration-related errors"""

    def __init__(self, message: str, config_path: Optional[str] = None, **kwargs):
        super().__init__(message, ErrorCategory.CONFIGURATION, **kwargs)
        if config_path:
            self.details["config_path"] = config_path


class ErrorHandler:
    """Centralized validation helpers"""

    @staticmethod
    def require_positive_int(value: Any, field_name: str, minimum: int = 1) -> int:
        """Validate an integer argument with a lower bound"""
        if isinstance(value, bool) or not isinstance(value, numbers.Integral):
            raise DomainError(f"{field_name} must be an integer, got {value!r}", argument=field_name, value=value)
        if value < minimum:
            raise DomainError(f"{field_name} must be >= {minimum}, got {value}", argument=field_name, value=value)
        return int(value)

    @staticmethod
    def require_k_range(k: int, n: int) -> int:
        """Validate 2 <= k < n"""
        if isinstance(k, bool) or not isinstance(k, numbers.Integral):
            raise DomainError(f"k must be an integer, got {k!r}", argument="k", value=k)
        if k < 2 or k >= n:
            raise DomainError(
                f"k must satisfy 2 <= k < n, got k={k}, n={n}",
                argument="k", value=k, details={"n": n}
            )
        return int(k)


def handle_cli_errors(func: F) -> F:
    """Decorator for CLI commands: render errors and exit with the mapped code"""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except WeibullTailError as e:
            console = Console(stderr=True)

            console.print(f"[red]Error ({e.category.value}): {e.message}[/red]")

            if e.details:
                console.print("[yellow]Details:[/yellow]")
                for key, value in e.details.items():
                    console.print(f"  {key}: {value}")

            if e.cause:
                console.print(f"[dim]Caused by: {e.cause}[/dim]")

            sys.exit(e.exit_code)

    return wrapper  # type: ignore[return-value]
