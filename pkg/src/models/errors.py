"""
Exception hierarchy for the ectff package.
Every error raised on purpose derives from EctffError so the CLI can map it to exit code 1.
"""


class EctffError(Exception):
    """Base class for all domain errors."""


class ParameterError(EctffError, ValueError):
    """A precondition on parameters or inputs does not hold."""


class ShapeError(ParameterError):
    """Matrix shapes disagree or blocks are not orthonormal."""


class SearchCapError(ParameterError):
    """A group or search exceeds the configured size cap."""


class OrbitCapError(EctffError, RuntimeError):
    """An orbit walk hit the step cap. Indicates a bug, the walks are provably finite."""


class CatalogError(EctffError):
    """Catalog data could not be loaded or a rule id is unknown."""


class ConsistencyError(EctffError):
    """Combinatorial and numerical verification disagree."""
