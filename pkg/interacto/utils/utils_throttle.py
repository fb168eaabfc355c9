import logging
from typing import Callable, FrozenSet, List, Optional

from ..config import settings
from ..errors import EventError
from ..schemas.events_schemas import Event, EventKind
from .utils_clock import VirtualClock

logger = logging.getLogger(__name__)


def default_throttled_kinds() -> FrozenSet[EventKind]:
    try:
        return frozenset(EventKind(k) for k in settings.throttled_kinds())
    except ValueError as exc:
        raise EventError(f"INTERACTO_THROTTLED_KINDS: {exc}") from exc


class Throttle:
    """
    Coalesces bursts of continuous events to the last one per window.

    The first throttled event opens a window of `window_ms`; later events of
    the same kind replace the pending one. The pending event is released
    when the window closes (through the clock) or as soon as an event of
    another kind arrives, before that event.

    :param window_ms: window length; 0 disables throttling.
    :param release: receives events released when a window closes.
    """

    def __init__(
        self,
        window_ms: int,
        clock: Optional[VirtualClock] = None,
        release: Optional[Callable[[Event], None]] = None,
        kinds: Optional[FrozenSet[EventKind]] = None,
    ):
        if window_ms < 0:
            raise EventError(f"throttle must be >= 0 ms, got {window_ms}")
        self.window_ms = window_ms
        self.clock = clock
        self.release = release
        self.kinds = default_throttled_kinds() if kinds is None else kinds
        self.pending: Optional[Event] = None

    def on_timeout(self, token: object) -> None:
        event = self._take()
        if event is not None and self.release is not None:
            self.release(event)

    def _take(self) -> Optional[Event]:
        event, self.pending = self.pending, None
        if event is not None and self.clock is not None:
            self.clock.cancel(self)
        return event

    def flush(self) -> List[Event]:
        event = self._take()
        return [event] if event is not None else []


def throttle_filter(throttle: Throttle, event: Event) -> List[Event]:
    """
    Events to deliver now, in order, for an incoming `event`.

    :return: zero events while a burst is being coalesced, otherwise the
        flushed pending event (if any) followed by `event` itself when it
        is not throttled.
    """
    if throttle.window_ms == 0:
        return [event]
    pending = throttle.pending
    if pending is not None and pending.kind == event.kind:
        throttle.pending = event
        return []
    out = throttle.flush()
    if event.kind in throttle.kinds:
        throttle.pending = event
        if throttle.clock is not None:
            throttle.clock.schedule(throttle.window_ms, throttle, None)
        return out
    out.append(event)
    return out
