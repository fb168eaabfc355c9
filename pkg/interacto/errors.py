from typing import Iterable, Optional


class InteractoError(Exception):
    """Root of every error raised by the engine."""


class EventError(InteractoError):
    pass


class ClockError(InteractoError):
    pass


class TraceError(InteractoError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(f"{prefix}{message}")


class FsmError(InteractoError):
    pass


class InteractionError(InteractoError):
    pass


class CommandError(InteractoError):
    pass


class BinderError(InteractoError):
    def __init__(self, message: str, missing: Iterable[str] = ()):
        self.missing = tuple(missing)
        super().__init__(message)


class ScenarioError(InteractoError):
    pass


class ScenarioFormatError(ScenarioError):
    """The scenario document is not well-formed JSON or YAML, or does not fit the schema."""


class RobotError(InteractoError):
    pass


class SuiteSpecError(InteractoError):
    pass


class BenchmarkError(InteractoError):
    pass
