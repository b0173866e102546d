"""Exception hierarchy. Every error is a ``ValueError`` so callers can catch broadly."""


class TaulabError(ValueError):
    pass


class CapacityError(TaulabError):
    """Requested table exceeds the configured memory budget."""


class RangeError(TaulabError):
    """Argument lies outside a precomputed table."""


class PoleError(TaulabError):
    pass


class DomainError(TaulabError):
    pass


class SingularityError(TaulabError):
    """Evaluation too close to a singular point for the requested formula."""


class ConfigurationError(TaulabError):
    pass


class WindowError(TaulabError):
    """Contour radius not inside the signal's analyticity window."""
