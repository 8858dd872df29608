"""Exception hierarchy shared by every module."""


class HedonicError(Exception):
    """Base class for all errors raised by this package."""


class MissingValue(HedonicError, KeyError):
    """A value v_i(S) was requested from a game that does not store it."""

    def __init__(self, agent, coalition):
        self.agent = agent
        self.coalition = coalition
        super().__init__(f"no value for agent {agent} in coalition {coalition}")

    def __str__(self):
        return self.args[0]


class AgentNotMember(HedonicError, ValueError):
    pass


class CoverageInsufficient(HedonicError):
    pass


class InstanceTooLarge(HedonicError):
    pass


class EmptyCore(HedonicError):
    """No core-stable partition exists."""


class MissingAssignment(HedonicError, KeyError):
    pass


class EnumerationTooLarge(HedonicError):
    pass


class EmptySample(HedonicError, ValueError):
    pass


class InvalidAlpha(HedonicError, ValueError):
    pass


class UnsupportedGame(HedonicError, ValueError):
    pass


class TieEncountered(HedonicError):
    """A de-noised comparison landed on an exact tie."""


class BoundaryPoint(HedonicError, ValueError):
    pass
