"""Exception types shared across the package.

Every error raised for a violated precondition derives from ``PrnetError``,
so callers (and the CLI) can catch one base class.
"""


class PrnetError(Exception):
    """Base class for all validation and precondition errors."""


class MalformedLineError(PrnetError):
    """An input line could not be parsed."""

    def __init__(self, line_no: int, message: str):
        self.line_no = line_no
        super().__init__(f"line {line_no}: {message}")


class NegativeWeightError(PrnetError):
    """A weight or probability was negative."""


class DuplicateEdgeError(PrnetError):
    """The same ordered node pair appeared twice in an edge list."""


class AsymmetricInputError(PrnetError):
    """An operation defined only for undirected graphs received a directed one."""


class DisconnectedError(PrnetError):
    """An operation requiring a connected graph received a disconnected one."""


class EmptyOrFullSetError(PrnetError):
    """A node subset must be a non-empty proper subset of the vertex set."""


class DanglingNodeError(PrnetError):
    """A node with zero out-degree reached an operation that requires repair."""


class DenseThresholdError(PrnetError):
    """The graph is too large for a dense n-by-n materialization."""


class ReducibleChainError(PrnetError):
    """The support of the transition matrix is not strongly connected."""


class AlphaOutOfRangeError(PrnetError):
    """The restart constant must lie in (0, 1)."""


class NotADistributionError(PrnetError):
    """A vector expected to be a probability distribution is not one."""


class DimensionMismatchError(PrnetError):
    """Two arguments that must share a dimension do not."""


class TooManyPlayersError(PrnetError):
    """Exact game-theoretic computation refused beyond the player cap."""


class NotMonotoneError(PrnetError):
    """An incentive utility is not monotonically non-decreasing."""


class NotNormalizedError(PrnetError):
    """An incentive utility does not assign 1 to the full coalition of others."""


class TooManyEdgesError(PrnetError):
    """Exact influence-spread enumeration refused beyond the edge cap."""


class TooLargeError(PrnetError):
    """Exact influence-chain construction refused beyond its size caps."""


class DanglingRepairWarning(UserWarning):
    """Emitted when dangling nodes are repaired with uniform out-edges."""
