"""Exception types shared across the package.

Each class maps to one CLI exit code so scripted callers can branch on
failure kind without parsing stderr.
"""

from __future__ import annotations

__all__ = [
    "SkewnetError",
    "ValidationError",
    "UnsupportedStructureError",
    "SizeCapError",
    "InvariantBreachError",
    "CouplingIntegrityError",
    "NumericError",
    "EXIT_OK",
    "EXIT_VALIDATION",
    "EXIT_INVARIANT",
    "EXIT_RESOURCE",
]

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_INVARIANT = 3
EXIT_RESOURCE = 4


class SkewnetError(Exception):
    """Base class for all package-specific failures."""


class ValidationError(SkewnetError):
    """Malformed input: unknown ids, bad rates, inconsistent config."""


class UnsupportedStructureError(ValidationError):
    """Structurally valid input that a given engine cannot handle."""


class SizeCapError(SkewnetError):
    """A requested computation exceeds a configured resource cap."""


class InvariantBreachError(SkewnetError):
    """A runtime check that should hold by construction failed."""


class CouplingIntegrityError(InvariantBreachError):
    """Precondition of the synchronized two-system dispatch was violated."""


class NumericError(SkewnetError):
    """A solver failed to reach the requested residual."""
