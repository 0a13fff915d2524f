"""Exception hierarchy.

Domain failures derive from :class:`DynMahlerError`; malformed input derives
from :class:`SchemaError`.  The CLI maps the first family to exit code 1 and
the second to exit code 2.
"""


class DynMahlerError(Exception):
    """Base class for numerical and mathematical failures."""


class SchemaError(ValueError):
    """Malformed polynomial JSON or configuration."""

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")


class RootFindingError(DynMahlerError):
    def __init__(self, message, best_residual):
        self.best_residual = best_residual
        super().__init__(f"{message} (best residual {best_residual:.3e})")


class DegreeCapError(DynMahlerError):
    pass


class NotOnCycleError(DynMahlerError):
    pass


class SamplerError(DynMahlerError):
    pass
