"""Typed errors shared across the package."""

from __future__ import annotations


class GenemError(Exception):
    """Base class for all package errors."""


class MaxRoundsExceeded(GenemError):
    """A feedback round was attempted after the session's round cap was reached."""

    def __init__(self, round_index: int, max_rounds: int):
        super().__init__(
            f"feedback round rejected: round index {round_index} has reached "
            f"the cap of {max_rounds} rounds"
        )
        self.round_index = round_index
        self.max_rounds = max_rounds


class UnknownEmbodiment(GenemError):
    pass


class UnknownScenario(GenemError):
    pass


class UnknownSensor(GenemError):
    pass


class EmptyTrajectory(GenemError):
    pass


class ChannelMismatch(GenemError):
    """Trajectories being compared carry different channel sets."""


class GatewayError(GenemError):
    pass


class TransportError(GatewayError):
    """Network or HTTP failure that survived the retry policy."""


class AuthError(GatewayError):
    """The completion endpoint rejected the configured credentials."""


class ReplayMiss(GatewayError):
    """Replay-mode lookup found no transcript entry for the request."""

    def __init__(self, stage_tag: str, fingerprint: str):
        super().__init__(
            f"no transcript entry for stage {stage_tag} (fingerprint {fingerprint})"
        )
        self.stage_tag = stage_tag
        self.fingerprint = fingerprint


class MalformedStageOutput(GenemError):
    """A stage completion could not be parsed after the allowed re-prompts."""

    def __init__(self, stage_tag: str, detail: str, raw: str = ""):
        super().__init__(f"stage {stage_tag}: {detail}")
        self.stage_tag = stage_tag
        self.detail = detail
        self.raw = raw


class CodeRejected(GenemError):
    """Generated code failed validation even after the repair round."""

    def __init__(self, report, source: str = ""):
        codes = ", ".join(e.code for e in report.errors) or "unknown"
        super().__init__(f"generated code rejected: {codes}")
        self.report = report
        self.source = source


class EblError(GenemError):
    pass


class ParseError(EblError):
    """Source text does not conform to the ebl/1 grammar."""

    def __init__(self, message: str, line: int, col: int, expected: tuple[str, ...] = ()):
        loc = f"{line}:{col}"
        if expected:
            message = f"{message} (expected {' | '.join(expected)})"
        super().__init__(f"{loc}: {message}")
        self.line = line
        self.col = col
        self.expected = expected


class BudgetExceeded(EblError):
    """The interpreter hit its action or simulated-time budget."""

    def __init__(self, kind: str, limit: float):
        super().__init__(f"execution budget exceeded: {kind} limit {limit}")
        self.kind = kind
        self.limit = limit


class ExecutorFault(EblError):
    """The primitive executor rejected an action."""

    def __init__(self, primitive: str, detail: str):
        super().__init__(f"{primitive}: {detail}")
        self.primitive = primitive
        self.detail = detail


class DuplicateSkillName(GenemError):
    pass


class InvalidProgram(GenemError):
    pass
