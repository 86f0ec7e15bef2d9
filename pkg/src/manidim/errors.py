"""Exception types shared across the package.

The CLI maps these onto its exit codes: hypothesis violations are exit 1,
configuration and I/O problems exit 2, enumeration cap aborts exit 3 and
existence-guarantee failures exit 4.
"""

from __future__ import annotations


class HypothesisError(ValueError):
    """One or more named mathematical hypotheses are violated.

    ``violations`` lists every violated condition by name, not just the
    first, so callers can report complete diagnostics.
    """

    def __init__(self, violations, message: str | None = None):
        self.violations = tuple(violations)
        if message is None:
            message = "hypothesis violation: " + ", ".join(self.violations)
        super().__init__(message)


class CapExceededError(RuntimeError):
    """An enumeration would exceed the configured candidate budget."""

    def __init__(self, estimate: int, cap: int):
        self.estimate = int(estimate)
        self.cap = int(cap)
        super().__init__(
            f"estimated candidate count {self.estimate} exceeds cap {self.cap}"
        )


class TheoremViolationError(RuntimeError):
    """A guaranteed solution was not found, or a sweep stagnated.

    This never fires on valid inputs; it signals either a defect or inputs
    outside the guarantee (for example a rational target in an infinitude
    sweep).
    """

    def __init__(self, message: str, solutions=None):
        self.solutions = solutions
        super().__init__(message)


class ConfigError(ValueError):
    """Malformed configuration file or CLI argument combination."""

    def __init__(self, message: str, line: int | None = None, field: str | None = None):
        self.line = line
        self.field = field
        prefix = ""
        if line is not None:
            prefix += f"line {line}: "
        if field is not None:
            prefix += f"field {field!r}: "
        super().__init__(prefix + message)
