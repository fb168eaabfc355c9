"""
Finite-state machines driving the interaction life cycle.

A machine reacts to events and timeouts by taking the first declared
transition leaving its current state whose trigger matches and whose guard
passes. Crossing life-cycle arcs yields signals: leaving the initial state
(or first entering the late-start state) starts the run, entering a
standard state updates it, entering a terminal state ends it and entering a
cancelling state cancels it.
"""
import logging
from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import (
    Any,
    Callable,
    Dict,
    FrozenSet,
    Iterable,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
    Union,
)

from ..errors import FsmError
from ..schemas.events_schemas import Event, EventKind

logger = logging.getLogger(__name__)


class StateKind(str, Enum):
    INITIAL = 'initial'
    STANDARD = 'standard'
    TERMINAL = 'terminal'
    CANCELLING = 'cancelling'


class Signal(str, Enum):
    STARTED = 'started'
    UPDATED = 'updated'
    ENDED = 'ended'
    CANCELLED = 'cancelled'


@dataclass(frozen=True)
class FsmOutcome:
    consumed_event: bool = False
    signals: Tuple[Signal, ...] = ()

    @property
    def ended(self) -> bool:
        return Signal.ENDED in self.signals

    @property
    def cancelled(self) -> bool:
        return Signal.CANCELLED in self.signals

    @property
    def over(self) -> bool:
        return self.ended or self.cancelled


NOTHING = FsmOutcome()
CONSUMED = FsmOutcome(consumed_event=True)

Guard = Callable[[Optional[Event], 'Fsm'], bool]
Action = Callable[[Optional[Event], 'Fsm'], None]
Hook = Callable[['Fsm'], None]
Scheduler = Callable[[int, 'TimeoutToken'], Any]


@dataclass(frozen=True)
class EventTrigger:
    kinds: FrozenSet[EventKind]

    def __init__(self, *kinds: Union[EventKind, str]):
        if not kinds:
            raise FsmError('an event trigger needs at least one kind')
        object.__setattr__(self, 'kinds', frozenset(EventKind(k) for k in kinds))


@dataclass(frozen=True)
class TimeoutTrigger:
    duration: int

    def __post_init__(self):
        if self.duration <= 0:
            raise FsmError(f"timeout duration must be > 0, got {self.duration}")


@dataclass(frozen=True)
class SubFsmTrigger:
    machine: str


Trigger = Union[EventTrigger, TimeoutTrigger, SubFsmTrigger]


@dataclass(frozen=True)
class Transition:
    source: str
    target: str
    trigger: Trigger
    guard: Optional[Guard] = None
    action: Optional[Action] = None

    def accepts(self, event: Optional[Event], fsm: 'Fsm') -> bool:
        return self.guard is None or self.guard(event, fsm)


@dataclass(frozen=True, eq=False)
class TimeoutToken:
    machine: 'Fsm'
    state: str
    epoch: int
    index: int


class Fsm:
    """
    A state graph with event, timeout and sub-machine transitions.

    :param name: machine id, used by sub-machine triggers of a parent.
    :param states: state id to kind; exactly one initial state.
    :param transitions: declaration order is the tie-breaking order.
    :param inner: machines referenced by SubFsmTrigger, keyed by id.
    :param on_enter: per-state hooks run after a state is entered.
    :param on_exit: per-state hooks run before a state is left.
    :param context_factory: builds the machine-local context guards read.
    """

    def __init__(
        self,
        name: str,
        states: Mapping[str, StateKind],
        transitions: Sequence[Transition],
        inner: Optional[Mapping[str, 'Fsm']] = None,
        on_enter: Optional[Mapping[str, Hook]] = None,
        on_exit: Optional[Mapping[str, Hook]] = None,
        context_factory: Optional[Callable[[], Dict[str, Any]]] = None,
    ):
        self.name = name
        self.states: Dict[str, StateKind] = dict(states)
        self.transitions: Tuple[Transition, ...] = tuple(transitions)
        self.inner: Dict[str, Fsm] = dict(inner or {})
        self.on_enter: Dict[str, Hook] = dict(on_enter or {})
        self.on_exit: Dict[str, Hook] = dict(on_exit or {})
        self._context_factory = context_factory or dict
        self.parent: Optional[Fsm] = None
        self._scheduler: Optional[Scheduler] = None
        self._validate()
        self.initial = next(s for s, k in self.states.items() if k == StateKind.INITIAL)
        self._by_source: Dict[str, Tuple[Tuple[int, Transition], ...]] = {
            state: tuple((i, t) for i, t in enumerate(self.transitions) if t.source == state)
            for state in self.states
        }
        self._inner_refs: Dict[str, FrozenSet[str]] = {
            state: frozenset(
                t.trigger.machine for _, t in pairs if isinstance(t.trigger, SubFsmTrigger)
            )
            for state, pairs in self._by_source.items()
        }
        for machine in self.inner.values():
            machine.parent = self
        self.late_start: Optional[str] = None
        self.current = self.initial
        self.started = False
        self.context: Dict[str, Any] = self._context_factory()
        self._epoch = 0

    def _validate(self) -> None:
        initials = [s for s, k in self.states.items() if k == StateKind.INITIAL]
        if len(initials) != 1:
            raise FsmError(f"{self.name}: expected exactly one initial state, got {len(initials)}")
        if not any(k in (StateKind.TERMINAL, StateKind.CANCELLING) for k in self.states.values()):
            raise FsmError(f"{self.name}: no terminal or cancelling state")
        for t in self.transitions:
            for state in (t.source, t.target):
                if state not in self.states:
                    raise FsmError(f"{self.name}: undeclared state {state!r}")
            if isinstance(t.trigger, SubFsmTrigger) and t.trigger.machine not in self.inner:
                raise FsmError(f"{self.name}: unknown inner machine {t.trigger.machine!r}")

    # -- introspection ----------------------------------------------------

    @property
    def current_kind(self) -> StateKind:
        return self.states[self.current]

    @property
    def is_over(self) -> bool:
        return self.current_kind in (StateKind.TERMINAL, StateKind.CANCELLING)

    def reachable_from_initial(self) -> FrozenSet[str]:
        seen = {self.initial}
        queue = deque([self.initial])
        while queue:
            state = queue.popleft()
            for _, t in self._by_source[state]:
                if t.target not in seen:
                    seen.add(t.target)
                    queue.append(t.target)
        return frozenset(seen)

    def active_event_kinds(self) -> FrozenSet[EventKind]:
        """Event kinds that can make a transition leave the current state."""
        if self.is_over:
            return frozenset()
        kinds = set()
        for _, t in self._by_source[self.current]:
            if isinstance(t.trigger, EventTrigger):
                kinds |= t.trigger.kinds
            elif isinstance(t.trigger, SubFsmTrigger):
                kinds |= self.inner[t.trigger.machine].active_event_kinds()
        return frozenset(kinds)

    # -- configuration ----------------------------------------------------

    @property
    def scheduler(self) -> Optional[Scheduler]:
        return self._scheduler

    @scheduler.setter
    def scheduler(self, scheduler: Optional[Scheduler]) -> None:
        self._scheduler = scheduler
        for machine in self.inner.values():
            machine.scheduler = scheduler

    def bind_clock(self, clock, owner=None) -> None:
        """Arm timeouts on `clock`; fired tokens go to `owner` (default: this machine)."""
        target = owner if owner is not None else self
        self.scheduler = lambda delay, token: clock.schedule(delay, target, token)

    def set_late_start(self, state: str) -> None:
        if state not in self.states:
            raise FsmError(f"{self.name}: unknown state {state!r}")
        if state not in self.reachable_from_initial():
            raise FsmError(f"{self.name}: state {state!r} is not reachable from {self.initial!r}")
        self.late_start = None if state == self.initial else state

    # -- life cycle ---------------------------------------------------------

    def reinit(self) -> None:
        """Back to the initial state; armed timeouts become stale."""
        self.current = self.initial
        self.started = False
        self.context = self._context_factory()
        self._epoch += 1
        for machine in self.inner.values():
            machine.reinit()

    def process_event(self, event: Event) -> FsmOutcome:
        if self.is_over:
            return NOTHING
        fed: Dict[str, Tuple[FsmOutcome, StateKind]] = {}
        for _, t in self._by_source[self.current]:
            trigger = t.trigger
            if isinstance(trigger, EventTrigger):
                if event.kind in trigger.kinds and t.accepts(event, self):
                    return self._fire(t, event)
            elif isinstance(trigger, SubFsmTrigger):
                if trigger.machine not in fed:
                    inner = self.inner[trigger.machine]
                    fed[trigger.machine] = _step_inner(inner, inner.process_event(event))
                decision = self._after_inner(t, *fed[trigger.machine], event)
                if decision is not None:
                    return decision
        return NOTHING

    def on_timeout(self, token: TimeoutToken) -> FsmOutcome:
        if self.is_over:
            return NOTHING
        if token.machine is self:
            if token.state != self.current or token.epoch != self._epoch:
                return NOTHING
            t = self.transitions[token.index]
            if not t.accepts(None, self):
                return NOTHING
            return self._fire(t, None)
        owner = token.machine
        while owner.parent is not None and owner.parent is not self:
            owner = owner.parent
        if owner.parent is not self:
            return NOTHING
        name = next((n for n, m in self.inner.items() if m is owner), None)
        if name is None or name not in self._inner_refs[self.current]:
            return NOTHING
        step = _step_inner(owner, owner.on_timeout(token))
        for _, t in self._by_source[self.current]:
            if isinstance(t.trigger, SubFsmTrigger) and t.trigger.machine == name:
                decision = self._after_inner(t, *step, None)
                if decision is not None:
                    return decision
        return NOTHING

    def _after_inner(
        self,
        t: Transition,
        inner_outcome: FsmOutcome,
        inner_kind: StateKind,
        event: Optional[Event],
    ) -> Optional[FsmOutcome]:
        """
        Decide what a sub-machine step means for this machine.

        Returns None to let later transitions be tried.
        """
        if inner_kind == StateKind.TERMINAL:
            if t.accepts(event, self):
                return self._fire(t, event)
            return None
        if inner_kind == StateKind.CANCELLING:
            return None
        if inner_outcome.consumed_event:
            return CONSUMED
        return None

    def _fire(self, t: Transition, event: Optional[Event]) -> FsmOutcome:
        exit_hook = self.on_exit.get(self.current)
        if exit_hook is not None:
            exit_hook(self)
        if t.action is not None:
            t.action(event, self)
        self.current = t.target
        self._epoch += 1
        kind = self.states[t.target]
        signals: List[Signal] = []
        was_started = self.started
        if not self.started and (self.late_start is None or t.target == self.late_start):
            if kind != StateKind.CANCELLING:
                self.started = True
                signals.append(Signal.STARTED)
        if kind == StateKind.TERMINAL:
            if not self.started:
                self.started = True
                signals.append(Signal.STARTED)
            elif was_started:
                # The closing transition of a running execution still updates it.
                signals.append(Signal.UPDATED)
            signals.append(Signal.ENDED)
        elif kind == StateKind.CANCELLING:
            if self.started:
                signals.append(Signal.CANCELLED)
        elif self.started:
            signals.append(Signal.UPDATED)
        enter_hook = self.on_enter.get(t.target)
        if enter_hook is not None:
            enter_hook(self)
        if self.is_over:
            for machine in self.inner.values():
                machine.reinit()
        else:
            keep = self._inner_refs[t.target]
            for name, machine in self.inner.items():
                if name not in keep:
                    machine.reinit()
            self._arm_timeouts(t.target)
        return FsmOutcome(consumed_event=event is not None, signals=tuple(signals))

    def _arm_timeouts(self, state: str) -> None:
        for index, t in self._by_source[state]:
            if isinstance(t.trigger, TimeoutTrigger):
                if self._scheduler is None:
                    logger.debug("%s: no clock bound, timeout in %s not armed", self.name, state)
                    continue
                self._scheduler(t.trigger.duration, TimeoutToken(self, state, self._epoch, index))

    def spawn_concurrent(self, key: int) -> 'Fsm':
        raise FsmError(f"{self.name}: machine has no concurrency spec")

    def __repr__(self) -> str:
        return f"<Fsm {self.name} at {self.current}>"


class ConcurrentFsm(Fsm):
    """
    Runs one copy of a template machine per key (touch id).

    The run starts once `n` copies are active, updates while all of them run
    and ends when all `n` copies have ended. A copy that ends before the run
    started is dropped.

    :param template: builds a fresh copy for a key.
    :param n: number of copies that make up the run.
    """

    def __init__(
        self,
        name: str,
        template: Callable[[int], Fsm],
        n: int,
        spawn_kind: EventKind = EventKind.TOUCH_START,
        on_spawn: Optional[Callable[[int], None]] = None,
        on_drop: Optional[Callable[[int], None]] = None,
    ):
        if n < 1:
            raise FsmError(f"{name}: required copy count must be >= 1, got {n}")
        super().__init__(
            name,
            {
                'idle': StateKind.INITIAL,
                'running': StateKind.STANDARD,
                'ended': StateKind.TERMINAL,
                'cancelled': StateKind.CANCELLING,
            },
            (),
        )
        self.template = template
        self.n = n
        self.spawn_kind = spawn_kind
        self._on_spawn = on_spawn
        self._on_drop = on_drop
        self.copies: Dict[int, Fsm] = {}
        self.finished: List[int] = []

    @Fsm.scheduler.setter
    def scheduler(self, scheduler: Optional[Scheduler]) -> None:
        self._scheduler = scheduler
        for machine in self.copies.values():
            machine.scheduler = scheduler

    def spawn_concurrent(self, key: int) -> Fsm:
        if key in self.copies:
            raise FsmError('touch already tracked')
        machine = self.template(key)
        machine.parent = self
        machine.scheduler = self._scheduler
        self.copies[key] = machine
        if self._on_spawn is not None:
            self._on_spawn(key)
        return machine

    def _drop(self, key: int) -> None:
        del self.copies[key]
        if self._on_drop is not None:
            self._on_drop(key)

    def active_event_kinds(self) -> FrozenSet[EventKind]:
        if self.is_over:
            return frozenset()
        kinds = set()
        if len(self.copies) < self.n:
            kinds.add(self.spawn_kind)
        for key, machine in self.copies.items():
            if key not in self.finished:
                kinds |= machine.active_event_kinds()
        return frozenset(kinds)

    def reinit(self) -> None:
        for key in list(self.copies):
            self._drop(key)
        self.finished = []
        super().reinit()

    def process_event(self, event: Event) -> FsmOutcome:
        if self.is_over or event.touch_id is None:
            return NOTHING
        key = event.touch_id
        if key not in self.copies:
            if event.kind != self.spawn_kind or len(self.copies) >= self.n:
                return NOTHING
            self.spawn_concurrent(key)
        if key in self.finished:
            return NOTHING
        return self._react(key, self.copies[key].process_event(event))

    def on_timeout(self, token: TimeoutToken) -> FsmOutcome:
        if self.is_over:
            return NOTHING
        for key, machine in self.copies.items():
            owner = token.machine
            while owner is not None and owner is not machine:
                owner = owner.parent
            if owner is machine:
                return self._react(key, machine.on_timeout(token))
        return NOTHING

    def _react(self, key: int, outcome: FsmOutcome) -> FsmOutcome:
        if not outcome.consumed_event and not outcome.signals:
            return NOTHING
        consumed = outcome.consumed_event
        if outcome.cancelled or (outcome.ended and not self.started):
            self._drop(key)
            if self.started:
                return self._enter('cancelled', consumed)
            return FsmOutcome(consumed_event=consumed)
        if outcome.ended:
            self.finished.append(key)
            if len(self.finished) == self.n:
                return self._enter('ended', consumed)
            return FsmOutcome(consumed_event=consumed)
        if not self.started:
            if len(self.copies) == self.n:
                self.started = True
                self.current = 'running'
                return FsmOutcome(consumed_event=consumed, signals=(Signal.STARTED,))
            return FsmOutcome(consumed_event=consumed)
        if not self.finished:
            return FsmOutcome(consumed_event=consumed, signals=(Signal.UPDATED,))
        return FsmOutcome(consumed_event=consumed)

    def _enter(self, state: str, consumed: bool) -> FsmOutcome:
        self.current = state
        signal = Signal.ENDED if state == 'ended' else Signal.CANCELLED
        return FsmOutcome(consumed_event=consumed, signals=(signal,))


def _step_inner(inner: Fsm, outcome: FsmOutcome) -> Tuple[FsmOutcome, StateKind]:
    # A finished sub-machine run is consumed by its parent; it restarts at once.
    kind = inner.current_kind
    if inner.is_over:
        inner.reinit()
    return outcome, kind


def run_signals(fsm: Fsm, events: Iterable[Event]) -> List[Tuple[Signal, ...]]:
    """Feed every event, collecting non-empty signal tuples; stops once over."""
    out = []
    for event in events:
        outcome = fsm.process_event(event)
        if outcome.signals:
            out.append(outcome.signals)
    return out
