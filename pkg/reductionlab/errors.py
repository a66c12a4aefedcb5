"""
Exception hierarchy shared by every reductionlab stage.

Each class also derives from the built-in exception a caller would naturally
catch, so ``except ValueError`` keeps working for code that does not know about
this package.
"""

from __future__ import annotations

from typing import Optional


class ReductionLabError(Exception):
    """Root of all errors raised by reductionlab."""


class DimensionMismatchError(ReductionLabError, ValueError):
    """Points, metrics or weights of incompatible length."""


class DomainError(ReductionLabError, ValueError):
    """Invalid grid bounds, or a point/model/dataset outside its domain."""


class ModelError(ReductionLabError, ValueError):
    """Invalid model parameters."""


class NotDerivableError(ReductionLabError, ValueError):
    """A published claim carries no numbers a robust accuracy can be derived from."""


class BudgetExceededError(ReductionLabError, RuntimeError):
    """Exact enumeration would examine more lattice points than allowed."""

    def __init__(self, requested: int, budget: int) -> None:
        super().__init__(
            f"exact enumeration needs {requested} lattice points, budget is {budget}; "
            "domain too large for exact mode"
        )
        self.requested = requested
        self.budget = budget


class FormatError(ReductionLabError, ValueError):
    """Malformed serialized model, dataset, claims or baseline file."""

    def __init__(
        self,
        message: str,
        source: Optional[str] = None,
        line: Optional[int] = None,
        field: Optional[str] = None,
    ) -> None:
        prefix = ""
        if source is not None:
            prefix = f"{source}:"
            if line is not None:
                prefix += f"{line}:"
            prefix += " "
        if field is not None:
            prefix += f"field '{field}': "
        super().__init__(prefix + message)
        self.source = source
        self.line = line
        self.field = field
