"""Exception hierarchy shared by the library and the CLI."""


class AdvRobustError(Exception):
    """Base class for all library errors."""


class MalformedInputError(AdvRobustError, ValueError):
    """Input could not be parsed or violates basic structural rules."""


class DomainError(AdvRobustError, ValueError):
    """Arguments are well formed but outside the operation's domain."""


class InvalidFiltrationError(AdvRobustError, ValueError):
    def __init__(self, index, reason):
        super().__init__(f"invalid filtration at index {index}: {reason}")
        self.index = index
        self.reason = reason


class UnsupportedError(AdvRobustError):
    """Requested computation is not supported (e.g. robustness of an infinite bar)."""


class ConfigurationError(AdvRobustError, ValueError):
    """Strategy or option incompatible with the given input."""


class GeometryError(AdvRobustError, ValueError):
    """Coordinates do not define a valid embedding."""
