from dataclasses import dataclass
from typing import List, Optional, Tuple, Type, Union

from ..bindings.binding import Binding
from ..bindings.context import InteractoContext
from ..commands.command import Command, CommandStatus

CommandKind = Union[Type[Command], str]


@dataclass(frozen=True)
class ProducedRecord:
    binding: str
    command: Command
    status: CommandStatus

    @property
    def kept(self) -> bool:
        """Executed and left in effect (not discarded, not reverted)."""
        return self.status is CommandStatus.DONE


def _matches(command: Command, kind: Optional[CommandKind]) -> bool:
    if kind is None:
        return True
    if isinstance(kind, str):
        return command.label == kind
    return isinstance(command, kind)


class BindingsObservation:
    """
    Records every command the bindings of the observed contexts create,
    once its fate is settled: kept (`done`), dropped as never executable
    (`discarded`) or reverted after a cancellation (`executed`).
    """

    def __init__(self, *contexts: InteractoContext):
        self.records: List[ProducedRecord] = []
        self.contexts: List[InteractoContext] = []
        for context in contexts:
            self.attach(context)

    def attach(self, context: InteractoContext) -> None:
        context.observe(self._record)
        self.contexts.append(context)

    def detach(self) -> None:
        for context in self.contexts:
            context.unobserve(self._record)
        self.contexts = []

    def _record(self, binding: Binding, command: Command) -> None:
        self.records.append(ProducedRecord(binding.name, command, command.status))

    @property
    def produced(self) -> Tuple[ProducedRecord, ...]:
        return tuple(self.records)

    def matching(self, kind: Optional[CommandKind] = None, include_discarded: bool = False) -> List[ProducedRecord]:
        return [
            r for r in self.records
            if _matches(r.command, kind) and (include_discarded or r.kept)
        ]

    def count(self, kind: Optional[CommandKind] = None, include_discarded: bool = False) -> int:
        return len(self.matching(kind, include_discarded))

    def list_produced(self, include_discarded: bool = False) -> List[Command]:
        return [r.command for r in self.matching(None, include_discarded)]

    def _describe(self) -> str:
        if not self.records:
            return 'no command produced'
        return '; '.join(f"{r.binding}: {r.command.label} ({r.status.value})" for r in self.records)

    def assert_cmd_produced(self, kind: CommandKind, count: int, include_discarded: bool = False) -> None:
        found = self.count(kind, include_discarded)
        if found != count:
            name = kind if isinstance(kind, str) else kind.__name__
            raise AssertionError(f"expected {count} {name} produced, found {found}: {self._describe()}")

    def one_cmd_produced(self, kind: CommandKind) -> Command:
        self.assert_cmd_produced(kind, 1)
        return self.matching(kind)[0].command

    def no_cmd_produced(self, kind: Optional[CommandKind] = None) -> None:
        if kind is None:
            if self.count():
                raise AssertionError(f"expected no command produced: {self._describe()}")
            return
        self.assert_cmd_produced(kind, 0)

    def clear(self) -> None:
        self.records = []
