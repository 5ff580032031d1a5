"""Exception hierarchy shared across the solver modules.

Two broad families matter to callers: ``InputError`` for rejected inputs
(bad files, bad flags, malformed graphs) and ``NumericalError`` for runtime
failures of the randomized machinery (exhausted retries, walk caps).
The CLI maps them to exit codes 1 and 2 respectively.
"""


class SolverError(Exception):
    """Base class for all errors raised by this package."""


class InputError(SolverError, ValueError):
    """Invalid input: graph data, vectors, configuration, or files."""


class NumericalError(SolverError, RuntimeError):
    """Numerical or statistical failure at runtime."""


# -- input validation ---------------------------------------------------------

class NonPositiveWeight(InputError):
    pass


class SelfLoop(InputError):
    pass


class VertexOutOfRange(InputError):
    pass


class DimensionMismatch(InputError):
    pass


class Disconnected(InputError):
    pass


class KernelMismatch(InputError):
    pass


class NotFiveDD(InputError):
    pass


class OracleSizeExceeded(InputError):
    """The dense reference oracle refuses instances above its size cap."""


# -- runtime / numerical ------------------------------------------------------

class SingularBlock(NumericalError):
    pass


class WalkCapExceeded(NumericalError):
    pass


class DisconnectedSubsample(NumericalError):
    pass


class RetriesExhausted(NumericalError):
    pass


class InternalError(NumericalError):
    """Invariant violation that indicates a bug, not bad input."""
