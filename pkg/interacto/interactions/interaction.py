import logging
from typing import (
    FrozenSet,
    Generic,
    Iterable,
    Optional,
    Protocol,
    Set,
    Type,
    TypeVar,
)

from ..errors import FsmError, InteractionError
from ..fsm.machine import NOTHING, Fsm, FsmOutcome, Signal, TimeoutToken
from ..schemas.events_schemas import Event, EventKind, NodeId
from ..schemas.interaction_schemas import InteractionData
from ..utils.utils_clock import VirtualClock

logger = logging.getLogger(__name__)

D = TypeVar('D', bound=InteractionData)

KEY_KINDS = frozenset({EventKind.KEY_PRESS, EventKind.KEY_RELEASE})


class InteractionHandler(Protocol):
    def on_interaction_start(self) -> None:
        ...

    def on_interaction_update(self) -> None:
        ...

    def on_interaction_end(self) -> None:
        ...

    def on_interaction_cancel(self) -> None:
        ...


class UserInteraction(Generic[D]):
    """
    A machine paired with the data it fills in.

    Events reach the machine only while the interaction is activated, hit a
    registered node and, when `optimized`, belong to the kinds the machine
    currently listens for. Life-cycle signals are forwarded to the handler;
    once a run ends or is cancelled the machine restarts and the data is
    flushed.
    """

    def __init__(self, name: str, fsm: Fsm, data: D, optimized: bool = True):
        self.name = name
        self.fsm = fsm
        self.data = data
        self.optimized = optimized
        self.registered_nodes: Set[NodeId] = set()
        self.activated = False
        self.key_filter: Optional[FrozenSet[str]] = None
        self.handler: Optional[InteractionHandler] = None
        self._active_kinds = fsm.active_event_kinds()
        self._run = 0

    @property
    def data_type(self) -> Type[D]:
        return type(self.data)

    @property
    def running(self) -> bool:
        return self.fsm.started and not self.fsm.is_over

    @property
    def active_kinds(self) -> FrozenSet[EventKind]:
        return self._active_kinds

    def attach_clock(self, clock: VirtualClock) -> None:
        self.fsm.bind_clock(clock, owner=self)

    def register_nodes(self, nodes: Iterable[NodeId]) -> None:
        self.registered_nodes.update(nodes)

    def unregister_nodes(self, nodes: Iterable[NodeId]) -> None:
        self.registered_nodes.difference_update(nodes)

    def set_late_start(self, state: str) -> None:
        try:
            self.fsm.set_late_start(state)
        except FsmError as exc:
            raise InteractionError(str(exc)) from exc

    def set_activated(self, on: bool) -> None:
        self.activated = on
        if not on:
            self.reinit()

    def data_snapshot(self) -> D:
        return self.data.snapshot()

    def reinit(self) -> None:
        self._run += 1
        self.fsm.reinit()
        self.data.flush()
        self._active_kinds = self.fsm.active_event_kinds()

    def cancel(self) -> None:
        """Abort the ongoing execution, notifying the handler if it had started."""
        was_running = self.running
        self._run += 1
        if was_running and self.handler is not None:
            self.handler.on_interaction_cancel()
        self.reinit()

    def accepts(self, event: Event) -> bool:
        if not self.activated or event.target not in self.registered_nodes:
            return False
        if self.optimized and event.kind not in self._active_kinds:
            return False
        if self.key_filter is not None and event.kind in KEY_KINDS:
            return event.key in self.key_filter
        return True

    def process_event(self, event: Event) -> FsmOutcome:
        if not self.accepts(event):
            return NOTHING
        return self._settle(self.fsm.process_event(event))

    def on_timeout(self, token: TimeoutToken) -> FsmOutcome:
        if not self.activated:
            return NOTHING
        return self._settle(self.fsm.on_timeout(token))

    def _settle(self, outcome: FsmOutcome) -> FsmOutcome:
        run = self._run
        if outcome.signals and self.handler is not None:
            for signal in outcome.signals:
                if self._run != run:
                    break
                self._notify(signal)
        if self._run == run:
            if self.fsm.is_over:
                self.reinit()
            else:
                self._active_kinds = self.fsm.active_event_kinds()
        return outcome

    def _notify(self, signal: Signal) -> None:
        logger.debug("%s: %s", self.name, signal.value)
        if signal is Signal.STARTED:
            self.handler.on_interaction_start()
        elif signal is Signal.UPDATED:
            self.handler.on_interaction_update()
        elif signal is Signal.ENDED:
            self.handler.on_interaction_end()
        else:
            self.handler.on_interaction_cancel()

    def __repr__(self) -> str:
        return f"<UserInteraction {self.name} {self.fsm.current}>"
