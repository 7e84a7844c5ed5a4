"""Exception hierarchy shared by every module of the package."""


class DisksepError(Exception):
    """Base class for all package errors."""


class DegenerateInput(DisksepError, ValueError):
    """Input violates general position within the tolerance policy."""


class PerturbationFailed(DisksepError):
    pass


class RayDegeneracy(DisksepError):
    """Every retried ray direction grazed an arc endpoint or a tangency."""


class NotSeparated(DisksepError, ValueError):
    pass


class NoPath(DisksepError):
    pass


class PiConstructionFailed(DisksepError):
    pass


class NoPieceCycle(DisksepError):
    pass


class InvalidInstance(DisksepError, ValueError):
    pass


class InternalError(DisksepError, RuntimeError):
    """A guarantee the algorithms rely on was violated at runtime."""


class Uncoverable(DisksepError, ValueError):
    pass


class TooLarge(DisksepError, ValueError):
    pass


class ResolutionExhausted(DisksepError):
    pass


class ParseError(DisksepError, ValueError):
    pass


class GenerationFailed(DisksepError):
    pass
