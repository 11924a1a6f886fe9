"""Exception types shared across the package.

The CLI maps these onto its exit codes: usage and format problems exit 2,
budget refusals exit 3.
"""

from __future__ import annotations

__all__ = ["FormatError", "BudgetExceeded", "EmptySearchSpace", "ExtractionError"]


class FormatError(ValueError):
    """Malformed input file; the message carries the offending line number."""


class BudgetExceeded(RuntimeError):
    """An exhaustive procedure would exceed its configured candidate budget."""


class ExtractionError(RuntimeError):
    """Box extraction could not produce a result."""


class EmptySearchSpace(ExtractionError):
    """No rectangle of the requested shape exists in the search relation."""
