"""
Predefined user interactions.

Each entry pairs a machine builder with the data record it fills in. A new
interaction is one machine builder, one data record (or an existing family)
and a `register_interaction` decoration.
"""
import math
from typing import Any, Callable, Dict, Mapping, Optional

from ..config import settings
from ..errors import FsmError, InteractionError
from ..fsm.machine import (
    ConcurrentFsm,
    EventTrigger,
    Fsm,
    StateKind,
    SubFsmTrigger,
    TimeoutTrigger,
    Transition,
)
from ..schemas.events_schemas import CANCEL_KEYS, Event, EventKind
from ..schemas.interaction_schemas import (
    FromToData,
    KeysData,
    MultiTouchData,
    PointData,
    TapData,
)
from .interaction import UserInteraction

I = StateKind.INITIAL
S = StateKind.STANDARD
T = StateKind.TERMINAL
C = StateKind.CANCELLING

PRESS = EventKind.POINTER_PRESS
RELEASE = EventKind.POINTER_RELEASE
MOVE = EventKind.POINTER_MOVE
CLICK = EventKind.POINTER_CLICK

InteractionFactory = Callable[..., UserInteraction]

CATALOG: Dict[str, InteractionFactory] = {}


def register_interaction(name: str) -> Callable[[InteractionFactory], InteractionFactory]:
    def decorator(factory: InteractionFactory) -> InteractionFactory:
        CATALOG[name] = factory
        return factory
    return decorator


def construct_interaction(name: str, params: Optional[Mapping[str, Any]] = None) -> UserInteraction:
    """
    Build a fresh cataloged interaction.

    :param name: catalog id, e.g. 'drag_lock' or 'multi_touch'.
    :param params: keyword parameters of the entry (n, timeout, ...).
    :return: an unactivated interaction with flushed data.
    """
    factory = CATALOG.get(name)
    if factory is None:
        raise InteractionError(f"unknown interaction {name!r}; known: {', '.join(sorted(CATALOG))}")
    try:
        return factory(**dict(params or {}))
    except TypeError as exc:
        raise InteractionError(f"{name}: invalid parameters: {exc}") from exc
    except FsmError as exc:
        raise InteractionError(f"{name}: {exc}") from exc


def _positive(name: str, value: float, what: str = 'timeout') -> None:
    if value <= 0:
        raise InteractionError(f"{name}: {what} must be > 0, got {value}")


def _key_is(keys):
    return lambda e, fsm: e is not None and e.key in keys


def _distance(a, b) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


# -- machines ---------------------------------------------------------------

def click_machine(
    data: PointData,
    synthesize: bool = False,
    tolerance: Optional[float] = None,
    name: str = 'click',
) -> Fsm:
    """
    Primitive clicks end the machine at once. With `synthesize`, a press
    followed by a release of the same button on the same target, no farther
    than `tolerance` away, also counts as a click.
    """
    tolerance = settings.CLICK_TOLERANCE if tolerance is None else tolerance

    def record(e: Event, fsm: Fsm) -> None:
        data.object = e.target
        data.position = e.position
        data.button = e.button
        data.modifiers = e.modifiers

    states = {'idle': I, 'clicked': T}
    transitions = [Transition('idle', 'clicked', EventTrigger(CLICK), action=record)]
    if synthesize:
        def pressed_here(e: Event, fsm: Fsm) -> bool:
            press = fsm.context['press']
            return (
                e.target == press.target
                and e.button == press.button
                and _distance(e.position, press.position) <= tolerance
            )

        def remember(e: Event, fsm: Fsm) -> None:
            fsm.context['press'] = e

        within = lambda e, fsm: _distance(e.position, fsm.context['press'].position) <= tolerance
        states.update({'pressed': S, 'cancelled': C})
        transitions += [
            Transition('idle', 'pressed', EventTrigger(PRESS), action=remember),
            Transition('pressed', 'clicked', EventTrigger(RELEASE), guard=pressed_here, action=record),
            Transition('pressed', 'cancelled', EventTrigger(RELEASE)),
            Transition('pressed', 'pressed', EventTrigger(MOVE), guard=within),
            Transition('pressed', 'cancelled', EventTrigger(MOVE)),
        ]
    return Fsm(name, states, transitions)


def double_click_machine(
    data: PointData,
    timeout: Optional[int] = None,
    alternative: bool = False,
    synthesize: bool = False,
    name: str = 'double_click',
) -> Fsm:
    """
    Two clicks. The classic variant cancels when no second click comes
    within `timeout` ms; the alternative one also cancels on any move
    between the clicks and defaults to the shorter timeout.
    """
    if timeout is None:
        timeout = settings.ALT_DOUBLE_CLICK_TIMEOUT_MS if alternative else settings.DOUBLE_CLICK_TIMEOUT_MS
    _positive(name, timeout)
    transitions = [Transition('idle', 'clicked', SubFsmTrigger('click'))]
    if alternative:
        transitions.append(Transition('clicked', 'cancelled', EventTrigger(MOVE)))
    transitions += [
        Transition('clicked', 'double_clicked', SubFsmTrigger('click')),
        Transition('clicked', 'cancelled', TimeoutTrigger(timeout)),
    ]
    return Fsm(
        name,
        {'idle': I, 'clicked': S, 'double_clicked': T, 'cancelled': C},
        transitions,
        inner={'click': click_machine(data, synthesize=synthesize)},
    )


def drag_lock_machine(
    data: FromToData,
    variant: str = 'alternative',
    double_click_timeout: Optional[int] = None,
    double_click_alternative: bool = False,
    synthesize: bool = False,
) -> Fsm:
    """
    A drag-and-drop delimited by two double-clicks.

    The 'alternative' variant needs at least one move between the
    double-clicks and is cancelled by Escape; 'classic' has neither rule.
    """
    if variant not in ('alternative', 'classic'):
        raise InteractionError(f"drag_lock: unknown variant {variant!r}")
    clicks = PointData()
    dbl = double_click_machine(
        clicks,
        timeout=double_click_timeout,
        alternative=double_click_alternative,
        synthesize=synthesize,
    )

    def lock(e: Event, fsm: Fsm) -> None:
        data.start_at(e.target, e.position, e.button)

    def move(e: Event, fsm: Fsm) -> None:
        data.move_to(e.target, e.position)

    dbl_click = SubFsmTrigger('double_click')
    if variant == 'classic':
        return Fsm(
            'drag_lock',
            {'idle': I, 'locked': S, 'unlocked': T},
            [
                Transition('idle', 'locked', dbl_click, action=lock),
                Transition('locked', 'locked', EventTrigger(MOVE), action=move),
                Transition('locked', 'unlocked', dbl_click, action=move),
            ],
            inner={'double_click': dbl},
        )
    escape = _key_is(CANCEL_KEYS)
    return Fsm(
        'drag_lock',
        {'idle': I, 'locked': S, 'moved': S, 'unlocked': T, 'cancelled': C},
        [
            Transition('idle', 'locked', dbl_click, action=lock),
            Transition('locked', 'moved', EventTrigger(MOVE), action=move),
            Transition('locked', 'cancelled', EventTrigger(EventKind.KEY_PRESS), guard=escape),
            Transition('locked', 'cancelled', dbl_click),
            Transition('moved', 'moved', EventTrigger(MOVE), action=move),
            Transition('moved', 'cancelled', EventTrigger(EventKind.KEY_PRESS), guard=escape),
            Transition('moved', 'unlocked', dbl_click, action=move),
        ],
        inner={'double_click': dbl},
    )


def dnd_machine(data: FromToData) -> Fsm:
    def press(e: Event, fsm: Fsm) -> None:
        data.start_at(e.target, e.position, e.button)

    def move(e: Event, fsm: Fsm) -> None:
        data.move_to(e.target, e.position)

    escape = _key_is(CANCEL_KEYS)
    return Fsm(
        'dnd',
        {'idle': I, 'pressed': S, 'dragged': S, 'released': T, 'cancelled': C},
        [
            Transition('idle', 'pressed', EventTrigger(PRESS), action=press),
            Transition('pressed', 'dragged', EventTrigger(MOVE), action=move),
            Transition('pressed', 'cancelled', EventTrigger(RELEASE)),
            Transition('pressed', 'cancelled', EventTrigger(EventKind.KEY_PRESS), guard=escape),
            Transition('dragged', 'dragged', EventTrigger(MOVE), action=move),
            Transition('dragged', 'released', EventTrigger(RELEASE), action=move),
            Transition('dragged', 'cancelled', EventTrigger(EventKind.KEY_PRESS), guard=escape),
        ],
    )


def touch_machine(data: FromToData, touch_id: int) -> Fsm:
    same_touch = lambda e, fsm: e.touch_id == touch_id

    def start(e: Event, fsm: Fsm) -> None:
        data.start_at(e.target, e.position)

    def move(e: Event, fsm: Fsm) -> None:
        data.move_to(e.target, e.position)

    return Fsm(
        f"touch-{touch_id}",
        {'idle': I, 'touching': S, 'released': T},
        [
            Transition('idle', 'touching', EventTrigger(EventKind.TOUCH_START), guard=same_touch, action=start),
            Transition('touching', 'touching', EventTrigger(EventKind.TOUCH_MOVE), guard=same_touch, action=move),
            Transition('touching', 'released', EventTrigger(EventKind.TOUCH_END), guard=same_touch, action=move),
        ],
    )


# -- catalog ----------------------------------------------------------------

@register_interaction('click')
def click(synthesize: bool = False, tolerance: Optional[float] = None) -> UserInteraction[PointData]:
    data = PointData()
    return UserInteraction('click', click_machine(data, synthesize, tolerance), data)


@register_interaction('double_click')
def double_click(
    timeout: Optional[int] = None,
    alternative: bool = False,
    synthesize: bool = False,
) -> UserInteraction[PointData]:
    data = PointData()
    fsm = double_click_machine(data, timeout=timeout, alternative=alternative, synthesize=synthesize)
    return UserInteraction('double_click', fsm, data)


@register_interaction('drag_lock')
def drag_lock(
    variant: str = 'alternative',
    double_click_timeout: Optional[int] = None,
    double_click_alternative: bool = False,
    synthesize: bool = False,
) -> UserInteraction[FromToData]:
    data = FromToData()
    fsm = drag_lock_machine(
        data,
        variant=variant,
        double_click_timeout=double_click_timeout,
        double_click_alternative=double_click_alternative,
        synthesize=synthesize,
    )
    return UserInteraction('drag_lock', fsm, data)


@register_interaction('dnd')
def dnd(late_start: Optional[str] = None) -> UserInteraction[FromToData]:
    data = FromToData()
    interaction = UserInteraction('dnd', dnd_machine(data), data)
    if late_start is not None:
        interaction.set_late_start(late_start)
    return interaction


@register_interaction('press')
def press() -> UserInteraction[PointData]:
    data = PointData()

    def record(e: Event, fsm: Fsm) -> None:
        data.object = e.target
        data.position = e.position
        data.button = e.button
        data.modifiers = e.modifiers

    fsm = Fsm('press', {'idle': I, 'pressed': T}, [
        Transition('idle', 'pressed', EventTrigger(PRESS), action=record),
    ])
    return UserInteraction('press', fsm, data)


@register_interaction('key_pressed')
def key_pressed() -> UserInteraction[KeysData]:
    data = KeysData()

    def record(e: Event, fsm: Fsm) -> None:
        data.keys.append(e.key)
        data.target = e.target

    fsm = Fsm('key_pressed', {'idle': I, 'pressed': T}, [
        Transition('idle', 'pressed', EventTrigger(EventKind.KEY_PRESS), action=record),
    ])
    return UserInteraction('key_pressed', fsm, data)


@register_interaction('keys_typed')
def keys_typed(timeout: Optional[int] = None) -> UserInteraction[KeysData]:
    """Key presses until the keyboard stays idle for `timeout` ms."""
    timeout = settings.KEYS_TYPED_TIMEOUT_MS if timeout is None else timeout
    _positive('keys_typed', timeout)
    data = KeysData()

    def record(e: Event, fsm: Fsm) -> None:
        data.keys.append(e.key)
        data.target = e.target

    fsm = Fsm('keys_typed', {'idle': I, 'typing': S, 'typed': T}, [
        Transition('idle', 'typing', EventTrigger(EventKind.KEY_PRESS), action=record),
        Transition('typing', 'typing', EventTrigger(EventKind.KEY_PRESS), action=record),
        Transition('typing', 'typed', TimeoutTrigger(timeout)),
    ])
    return UserInteraction('keys_typed', fsm, data)


@register_interaction('multi_touch')
def multi_touch(n: int = 2) -> UserInteraction[MultiTouchData]:
    """`n` simultaneous touches, each tracked by its own touch machine."""
    if n < 1:
        raise InteractionError(f"multi_touch: n must be >= 1, got {n}")
    data = MultiTouchData(n=n)
    slots: Dict[int, int] = {}

    def spawn(key: int) -> None:
        used = set(slots.values())
        slots[key] = next(i for i in range(n) if i not in used)

    def drop(key: int) -> None:
        data.touches[slots.pop(key)] = FromToData()

    def template(key: int) -> Fsm:
        return touch_machine(_Slot(data, slots, key), key)

    fsm = ConcurrentFsm('multi_touch', template, n, on_spawn=spawn, on_drop=drop)
    return UserInteraction('multi_touch', fsm, data)


class _Slot:
    """Write-through view on the data slot a touch currently owns."""

    def __init__(self, data: MultiTouchData, slots: Dict[int, int], key: int):
        self._data = data
        self._slots = slots
        self._key = key

    def start_at(self, obj, position, button=None) -> None:
        self._data.touches[self._slots[self._key]].start_at(obj, position, button)

    def move_to(self, obj, position) -> None:
        self._data.touches[self._slots[self._key]].move_to(obj, position)


@register_interaction('tap')
def tap(n: int = 1, timeout: Optional[int] = None) -> UserInteraction[TapData]:
    """`n` successive taps, each a touch start and end without moving."""
    if n < 1:
        raise InteractionError(f"tap: n must be >= 1, got {n}")
    timeout = settings.TAP_TIMEOUT_MS if timeout is None else timeout
    _positive('tap', timeout)
    data = TapData()

    def touch(e: Event, fsm: Fsm) -> None:
        fsm.context['touch'] = e.touch_id

    def record(e: Event, fsm: Fsm) -> None:
        data.taps.append(PointData(object=e.target, position=e.position))

    same_touch = lambda e, fsm: e.touch_id == fsm.context.get('touch')
    last_tap = lambda e, fsm: same_touch(e, fsm) and len(data.taps) + 1 == n

    fsm = Fsm('tap', {'idle': I, 'touching': S, 'waiting': S, 'tapped': T, 'cancelled': C}, [
        Transition('idle', 'touching', EventTrigger(EventKind.TOUCH_START), action=touch),
        Transition('touching', 'tapped', EventTrigger(EventKind.TOUCH_END), guard=last_tap, action=record),
        Transition('touching', 'waiting', EventTrigger(EventKind.TOUCH_END), guard=same_touch, action=record),
        Transition('touching', 'cancelled', EventTrigger(EventKind.TOUCH_MOVE), guard=same_touch),
        Transition('waiting', 'touching', EventTrigger(EventKind.TOUCH_START), action=touch),
        Transition('waiting', 'cancelled', TimeoutTrigger(timeout)),
    ])
    return UserInteraction('tap', fsm, data)


@register_interaction('scroll')
def scroll() -> UserInteraction[PointData]:
    data = PointData()

    def record(e: Event, fsm: Fsm) -> None:
        data.object = e.target
        data.position = e.position
        data.modifiers = e.modifiers

    fsm = Fsm('scroll', {'idle': I, 'scrolled': T}, [
        Transition('idle', 'scrolled', EventTrigger(EventKind.SCROLL), action=record),
    ])
    return UserInteraction('scroll', fsm, data)
