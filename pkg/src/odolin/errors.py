"""Exception hierarchy shared by every module of the package."""


class OdolinError(Exception):
    """Base class for all errors raised by odolin."""


class OutOfRange(OdolinError):
    """An integer does not fit in the requested coordinate window."""


class WindowMismatch(OdolinError):
    """Two digit vectors do not share the same window."""


class WindowTooSmall(OdolinError):
    """A shift does not fit in the window the sets are constrained on."""


class InvalidBase(OdolinError):
    pass


class InvalidFamily(OdolinError):
    """A measure family's construction is not admissible on the given base."""


class InvalidShift(OdolinError):
    pass


class SizeLimit(OdolinError):
    """A finite problem exceeds the configured size cap."""


class InconsistentDeclarations(OdolinError):
    """Declared asymptotics contradict each other under the known rules."""


class KTooSmall(OdolinError):
    pass


class HorizonExhausted(OdolinError):
    pass


class NotFound(OdolinError):
    pass


class EpsilonTooLarge(OdolinError):
    pass


class ConfigError(OdolinError):
    """A configuration document could not be parsed; ``where`` names the field."""

    def __init__(self, where: str, message: str):
        super().__init__(f"{where}: {message}")
        self.where = where
