import asyncio
import logging
from collections import deque
from typing import Deque, List, Optional

from ..config import settings
from ..errors import CommandError
from .command import Undoable

logger = logging.getLogger(__name__)


class UndoHistory:
    """
    Linear undo/redo history.

    Adding a command clears the redo stack; past `capacity` entries the
    oldest undoable command is evicted.
    """

    def __init__(self, capacity: Optional[int] = None):
        capacity = settings.HISTORY_CAPACITY if capacity is None else capacity
        if capacity < 1:
            raise CommandError(f"history capacity must be >= 1, got {capacity}")
        self.capacity = capacity
        self._undos: Deque[Undoable] = deque(maxlen=capacity)
        self._redos: List[Undoable] = []

    @property
    def undos(self) -> List[Undoable]:
        return list(self._undos)

    @property
    def redos(self) -> List[Undoable]:
        return list(self._redos)

    def can_undo(self) -> bool:
        return bool(self._undos)

    def can_redo(self) -> bool:
        return bool(self._redos)

    def add(self, command: Undoable) -> None:
        if not isinstance(command, Undoable):
            raise CommandError(f"{type(command).__name__} is not undoable")
        self._undos.append(command)
        self._redos.clear()

    def undo(self) -> Optional[Undoable]:
        """
        Undo the most recent command and move it to the redo stack.

        A command whose undo raises stays where it was.
        """
        if not self.can_undo():
            logger.debug("undo on an empty history")
            return None
        command = self._undos[-1]
        command.undo()
        self._undos.pop()
        self._redos.append(command)
        return command

    def redo(self) -> Optional[Undoable]:
        """
        Redo the most recently undone command and move it back to the undo
        stack. An asynchronous redo is marked done once it resolves; if it
        fails the command returns to the redo stack.
        """
        if not self.can_redo():
            logger.debug("redo on an empty history")
            return None
        command = self._redos[-1]
        completion = command.redo()
        self._redos.pop()
        self._undos.append(command)
        if isinstance(completion, asyncio.Future):
            completion.add_done_callback(lambda task: self._redone(command, task))
        else:
            command.done()
        return command

    def _redone(self, command: Undoable, task: 'asyncio.Task[bool]') -> None:
        if not task.cancelled() and task.exception() is None:
            command.done()
            return
        logger.warning("asynchronous redo of %s failed", command.label)
        if self._undos and self._undos[-1] is command:
            self._undos.pop()
            self._redos.append(command)

    def last_undo_label(self) -> str:
        return self._undos[-1].label if self._undos else ""

    def last_redo_label(self) -> str:
        return self._redos[-1].label if self._redos else ""

    def clear(self) -> None:
        self._undos.clear()
        self._redos.clear()

    def __len__(self) -> int:
        return len(self._undos)
