from typing import Callable, FrozenSet, Iterable, Optional

from ..commands.history import UndoHistory
from ..schemas.events_schemas import CANCEL_KEYS, Event, EventKind, NodeId
from ..schemas.interaction_schemas import FromToData
from .commands import Translate
from .model import Drawing


class DirectDragTranslate:
    """
    Hand-written press/move/release listener moving shapes.

    Behaves like a dnd binding producing Translate commands (same when
    predicate, same continuous mode, same registration) without going
    through machines or bindings; it is the baseline of the benchmark.
    """

    def __init__(
        self,
        drawing: Drawing,
        history: UndoHistory,
        nodes: Iterable[NodeId],
        when: Optional[Callable[[FromToData], bool]] = None,
        continuous: bool = False,
    ):
        self.drawing = drawing
        self.history = history
        self.nodes: FrozenSet[NodeId] = frozenset(nodes)
        self.when = when
        self.continuous = continuous
        self.data = FromToData()
        self.phase = 'idle'
        self.command: Optional[Translate] = None
        self.produced = 0
        self.registered = 0

    def _holds(self) -> bool:
        return self.when is None or self.when(self.data)

    def _create(self) -> None:
        self.command = Translate(self.drawing, self.data.src_object)
        self.produced += 1

    def _update(self, final: bool) -> None:
        if not self._holds():
            if final and self.command is not None:
                self._revert()
            return
        if self.command is None:
            self._create()
        self.command.set_offset(self.data.dx, self.data.dy)
        if not final:
            if self.continuous and self.command.can_execute():
                self.command.execute()
        elif self.command.can_execute():
            self.command.execute()
            self.history.add(self.command)
            self.command.done()
            self.registered += 1
        else:
            self._revert()

    def _revert(self) -> None:
        if self.continuous and self.command.was_executed:
            self.command.undo()
        else:
            self.command.discard()

    def _reset(self) -> None:
        self.phase = 'idle'
        self.command = None
        self.data.flush()

    def on_event(self, event: Event) -> None:
        if event.target not in self.nodes:
            return
        kind = event.kind
        if self.phase == 'idle':
            if kind is EventKind.POINTER_PRESS:
                self.data.start_at(event.target, event.position, event.button)
                self.phase = 'pressed'
                if self._holds():
                    self._create()
                self._update(final=False)
            return
        if kind is EventKind.POINTER_MOVE:
            self.data.move_to(event.target, event.position)
            self.phase = 'dragged'
            self._update(final=False)
        elif kind is EventKind.POINTER_RELEASE:
            if self.phase == 'dragged':
                self.data.move_to(event.target, event.position)
                self._update(final=True)
            elif self.command is not None:
                self._revert()
            self._reset()
        elif kind is EventKind.KEY_PRESS and event.key in CANCEL_KEYS:
            if self.command is not None:
                self._revert()
            self._reset()
