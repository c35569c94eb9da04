"""Exception types shared across the package.

Everything raised for bad input data or bad parameter values derives from
MiningError, so callers (the CLI in particular) can map the whole family to
one failure path without enumerating causes.
"""

from __future__ import annotations


class MiningError(Exception):
    """Base class for all data and validation failures raised by this package."""


class CsvParseError(MiningError):
    """Malformed CSV input (quoting errors and friends), with a line number."""


class SchemaError(MiningError):
    """A required column is missing from a survey export."""


class ValidationError(MiningError):
    """A value is outside its documented domain."""


class ContractViolationError(MiningError):
    """An internal precondition was violated, e.g. an item handle outside the catalog."""


class ClosureViolationError(MiningError):
    """A stored itemset has a subset with no stored support count."""
