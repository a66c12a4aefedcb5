"""
reductionlab: exact robust-risk evaluation on small lattice domains, the
detector/classifier reductions, and an auditor for published detector claims.
"""

import pathlib

from .errors import (
    BudgetExceededError,
    DimensionMismatchError,
    DomainError,
    FormatError,
    ModelError,
    NotDerivableError,
    ReductionLabError,
)

__version__ = "0.1.0"

DEMO_DIR = pathlib.Path(__file__).resolve().parent / "data"

__all__ = [
    "BudgetExceededError",
    "DEMO_DIR",
    "DimensionMismatchError",
    "DomainError",
    "FormatError",
    "ModelError",
    "NotDerivableError",
    "ReductionLabError",
    "__version__",
]
