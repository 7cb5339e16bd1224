"""Exception types shared across the planning library."""


class HyplanError(Exception):
    """Base class for all library errors."""


class EmptySolutionPair(HyplanError):
    pass


class EmptyOperand(HyplanError):
    pass


class EndpointMismatch(HyplanError):
    pass


class InvalidDuration(HyplanError):
    pass


class StartNotInFlowSet(HyplanError):
    pass


class StateNotInJumpSet(HyplanError):
    pass


class EmptyInitialSet(HyplanError):
    pass


class SamplingExhausted(HyplanError):
    """Rejection sampling ran out of attempts; typically a measure-zero or empty region."""


class NoQualifyingVertex(HyplanError):
    pass


class NoActiveVertex(HyplanError):
    pass


class ConfigError(HyplanError):
    """Run configuration failed to parse or validate."""


class TrajectorySchemaError(HyplanError):
    """Trajectory CSV does not conform to the documented schema."""


class NoPlanFound(HyplanError):
    """Iteration budget exhausted without reaching the goal set.

    Carries the solve statistics collected up to exhaustion.
    """

    def __init__(self, message: str = "no plan found", stats=None):
        super().__init__(message)
        self.stats = stats
