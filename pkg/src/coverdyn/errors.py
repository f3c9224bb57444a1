"""Exception types shared across the library."""


class CoverdynError(Exception):
    """Base class for all library errors."""


class ModelMismatchError(CoverdynError):
    """Two covers that must share a base model do not."""


class NonCoverError(CoverdynError):
    """An operation requiring a true cover received a flagged non-cover."""


class DomainError(CoverdynError):
    """A piecewise-linear map leaves the unit interval."""


class DimensionError(CoverdynError):
    """Requested chain dimension outside the complex's range."""


class CarrierError(CoverdynError):
    """No cover element contains the image of some element.

    Carries the offending element name so callers can refine the cover
    (join with the preimage cover) and retry.
    """

    def __init__(self, element: str, message: str | None = None):
        self.element = element
        super().__init__(
            message
            or f"no cover element contains the image of {element!r}; "
            f"refine the cover (join with its preimage cover) and retry"
        )


class AssignmentError(CoverdynError):
    """A vertex assignment does not induce a simplicial map."""


class WindowMismatchError(CoverdynError):
    """Fiber operations combined values with different windows."""


class ScenarioError(CoverdynError):
    """A scenario file failed to parse or validate."""
