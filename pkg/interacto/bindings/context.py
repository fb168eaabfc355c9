import asyncio
import logging
from typing import TYPE_CHECKING, Callable, List, Optional, Set

from ..commands.command import Command
from ..commands.history import UndoHistory
from ..utils.utils_clock import VirtualClock
from .dispatcher import Dispatcher

if TYPE_CHECKING:
    from .binding import Binding

logger = logging.getLogger(__name__)

CommandObserver = Callable[['Binding', Command], None]


class InteractoContext:
    """
    Owns an undo history and the bindings registering into it.

    Several contexts may share one dispatcher to get several histories fed
    by the same event stream.
    """

    def __init__(
        self,
        history_capacity: Optional[int] = None,
        dispatcher: Optional[Dispatcher] = None,
    ):
        self.history = UndoHistory(history_capacity)
        self.dispatcher = dispatcher if dispatcher is not None else Dispatcher()
        self.bindings: List['Binding'] = []
        self.observers: List[CommandObserver] = []
        self._tasks: Set['asyncio.Task[bool]'] = set()

    @property
    def clock(self) -> VirtualClock:
        return self.dispatcher.clock

    def add_binding(self, binding: 'Binding') -> None:
        self.bindings.append(binding)
        self.dispatcher.register(binding)

    def remove_binding(self, binding: 'Binding') -> None:
        if binding in self.bindings:
            self.bindings.remove(binding)
            self.dispatcher.unregister(binding)

    def observe(self, observer: CommandObserver) -> None:
        self.observers.append(observer)

    def unobserve(self, observer: CommandObserver) -> None:
        if observer in self.observers:
            self.observers.remove(observer)

    def command_settled(self, binding: 'Binding', command: Command) -> None:
        for observer in list(self.observers):
            observer(binding, command)

    def track(self, task: 'asyncio.Task[bool]') -> None:
        self._tasks.add(task)
        task.add_done_callback(self._tasks.discard)

    async def drain(self) -> None:
        """Wait until every asynchronous command execution has completed."""
        while self._tasks:
            await asyncio.gather(*list(self._tasks), return_exceptions=True)

    def __repr__(self) -> str:
        return f"<InteractoContext bindings={len(self.bindings)} undos={len(self.history)}>"
