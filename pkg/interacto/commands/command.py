"""
UI commands.

A command runs its effect through `execute`, which checks `can_execute`,
creates the memento before the first execution and tracks the status. An
`execution` written as a coroutine function makes the command asynchronous:
`execute` then returns an `asyncio.Task` resolving to True once the effect
completed.
"""
import asyncio
import inspect
import logging
from abc import ABC, abstractmethod
from enum import Enum
from typing import Any, Awaitable, Dict, Optional, Union

from ..errors import CommandError

logger = logging.getLogger(__name__)

Completion = Union[bool, 'asyncio.Task[bool]']


class CommandStatus(str, Enum):
    CREATED = 'created'
    EXECUTED = 'executed'
    DONE = 'done'
    DISCARDED = 'discarded'


class Command:
    def __init__(self):
        self.status = CommandStatus.CREATED
        self.memento_created = False
        self.pending: Optional['asyncio.Task[bool]'] = None
        self.executions = 0

    @property
    def label(self) -> str:
        return type(self).__name__

    def params(self) -> Dict[str, Any]:
        """Parameters reported in command logs."""
        return {}

    def can_execute(self) -> bool:
        return True

    def execution(self) -> Optional[Awaitable[Any]]:
        raise NotImplementedError

    def create_memento(self) -> None:
        pass

    @property
    def was_executed(self) -> bool:
        return self.status in (CommandStatus.EXECUTED, CommandStatus.DONE)

    def execute(self) -> Completion:
        """
        Run the effect if the command can execute.

        :return: False when not executable, True once a synchronous effect
            ran, or the task of an asynchronous one.
        :raises CommandError: when a synchronous effect fails; the status is
            left as it was before the call.
        """
        if self.status not in (CommandStatus.CREATED, CommandStatus.EXECUTED):
            raise CommandError(f"{self.label}: cannot execute a command that is {self.status.value}")
        if not self.can_execute():
            return False
        if not self.memento_created:
            self.create_memento()
            self.memento_created = True
        return self._run_effect(self.execution)

    def _run_effect(self, effect) -> Completion:
        # a newer execution supersedes one still in flight
        self.cancel_pending()
        before = self.status
        try:
            result = effect()
        except Exception as exc:
            self.status = before
            raise CommandError(f"{self.label}: execution failed: {exc}") from exc
        if inspect.isawaitable(result):
            self.pending = asyncio.ensure_future(self._complete(result, before))
            return self.pending
        self._executed()
        return True

    async def _complete(self, awaitable: Awaitable[Any], before: CommandStatus) -> bool:
        try:
            await awaitable
        except Exception as exc:
            self.status = before
            raise CommandError(f"{self.label}: execution failed: {exc}") from exc
        finally:
            if self.pending is asyncio.current_task():
                self.pending = None
        self._executed()
        return True

    def cancel_pending(self) -> bool:
        """
        Cancel an asynchronous execution that has not completed yet.

        :return: True if a task was cancelled; its effect never completes
            and the status stays as it was.
        """
        task = self.pending
        if task is None or task.done():
            return False
        task.cancel()
        self.pending = None
        return True

    def _executed(self) -> None:
        self.status = CommandStatus.EXECUTED
        self.executions += 1

    def done(self) -> None:
        if self.status is CommandStatus.EXECUTED:
            self.status = CommandStatus.DONE

    def discard(self) -> None:
        if self.status is CommandStatus.CREATED:
            self.status = CommandStatus.DISCARDED

    def __repr__(self) -> str:
        return f"<{self.label} {self.status.value}>"


class Undoable(ABC):
    """
    Capability of commands whose effect can be reverted with their memento.

    Mixed into a `Command` subclass; redoing runs `execution` again unless
    `redo_execution` is overridden.
    """

    @abstractmethod
    def undo_execution(self) -> None:
        ...

    def redo_execution(self) -> Optional[Awaitable[Any]]:
        return self.execution()

    def undo(self) -> None:
        self._require_memento()
        self.undo_execution()
        logger.debug("undone %s", self)

    def redo(self) -> Completion:
        self._require_memento()
        return self._run_effect(self.redo_execution)

    def _require_memento(self) -> None:
        if not getattr(self, 'memento_created', False):
            raise CommandError(f"{type(self).__name__}: no memento, the command was never executed")


def is_undoable(command: Optional[Command]) -> bool:
    return isinstance(command, Undoable)
