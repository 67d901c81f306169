"""Exception hierarchy shared by all affinet modules.

The CLI maps these onto exit codes: validation and parse failures are
exit 1, I/O problems exit 2, domain errors (operations applied outside
their mathematical domain) exit 3.
"""


class AffinetError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(AffinetError):
    """A file or spec string could not be parsed."""


class ValidationError(AffinetError):
    """Input violated a documented constraint (weights, shapes, parameters)."""


class DomainError(AffinetError):
    """Operation undefined for this input (e.g. modularity of an edgeless graph)."""


class IngestionError(AffinetError):
    """A dataset could not be provisioned (missing or inconsistent data file)."""
