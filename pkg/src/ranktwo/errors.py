"""Exception types shared across the package.

Every error carries a short machine-readable ``code`` so the CLI can emit
structured error objects without parsing prose.
"""

from __future__ import annotations


class RankTwoError(Exception):
    """Base class; ``code`` is a stable kebab-case identifier."""

    def __init__(self, code: str, message: str):
        self.code = code
        super().__init__(message)


class FieldParameterError(RankTwoError):
    """Bad tower parameters (p not an odd prime, size bound exceeded, ...)."""


class DomainError(RankTwoError):
    """An element was passed to an operation outside its stated subfield."""


class ParameterError(RankTwoError):
    """Family or map parameters violate a required invariant."""


class StructureError(RankTwoError):
    """An expected geometric structure is absent or not unique."""


class CacheError(RankTwoError):
    """Tower cache file is unreadable or does not match the request."""
