"""Exception types shared across the package."""


class TorusError(Exception):
    """Base class for every error raised by torusforcing."""


class InvalidParams(TorusError, ValueError):
    pass


class DegenerateInstance(TorusError):
    """The parameters describe a multigraph (loops or parallel edges)."""


class OddOrder(TorusError):
    """The torus has an odd number of vertices, so no perfect matching exists."""


class BandUndefined(TorusError):
    pass


class NotAMatching(TorusError, ValueError):
    pass


class NoPerfectMatching(TorusError):
    pass


class BudgetExceeded(TorusError):
    pass


class WrongClass(TorusError):
    """A construction was requested for a parity class it is not defined on."""


class NotIndependent(TorusError, ValueError):
    pass


class NotApplicable(TorusError):
    pass


class SearchExhausted(TorusError):
    """No marking strategy succeeded. For a solved class this contradicts the closed form being checked."""


class NotSimplyConnected(TorusError, ValueError):
    pass
