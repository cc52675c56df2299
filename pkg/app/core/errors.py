"""
Exception types shared by every module of the lab.
"""


class GossipError(Exception):
    """Base error for the k-gossip lab."""


class ExchangeError(GossipError, ValueError):
    """A round's transfer list breaks the engine contract."""


class GraphError(GossipError, ValueError):
    """A round graph or graph-sequence file is malformed."""


class DistributionError(GossipError, ValueError):
    """An init spec or distribution file is malformed."""


class ContractError(GossipError):
    """A protocol/adversary contract was violated (e.g. a chosen token is not held)."""


class ModelOrderingError(GossipError):
    """The adversary needs information the protocol only produces later in the round."""


class OrientationError(GossipError, ValueError):
    """An inter-group edge was oriented from a subset holder."""


class ScheduleError(GossipError):
    """An offline scheduler could not produce a feasible schedule."""

    def __init__(self, message: str, phase: int | None = None):
        super().__init__(message)
        self.phase = phase


class DerandomizationError(GossipError):
    """The conditional-expectation sum does not start below 1."""


class ConfigError(GossipError, ValueError):
    """Unresolvable spec string or malformed experiment configuration."""
