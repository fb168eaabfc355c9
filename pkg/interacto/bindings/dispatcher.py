import logging
from typing import TYPE_CHECKING, Iterable, List, Optional

from ..errors import ClockError
from ..schemas.events_schemas import Event
from ..utils.utils_clock import VirtualClock

if TYPE_CHECKING:
    from .binding import Binding

logger = logging.getLogger(__name__)

# Upper bound on timeouts fired while settling after the last event.
MAX_SETTLE_TIMEOUTS = 100_000


class Dispatcher:
    """
    Delivers events in time order to bindings, in registration order.

    Before an event is delivered the clock is moved to its time, firing the
    timeouts due until then. Once a binding configured to consume events
    has used an event, later bindings do not see it.
    """

    def __init__(self, clock: Optional[VirtualClock] = None):
        self.clock = clock if clock is not None else VirtualClock()
        self.bindings: List['Binding'] = []
        self.dispatched = 0

    def register(self, binding: 'Binding') -> None:
        if binding not in self.bindings:
            self.bindings.append(binding)

    def unregister(self, binding: 'Binding') -> None:
        if binding in self.bindings:
            self.bindings.remove(binding)

    def dispatch(self, event: Event) -> Event:
        """
        A trace event already consumed by an earlier run is delivered as a
        fresh copy.

        :return: the delivered event, whose `consumed` flag tells whether a
            binding stopped its propagation.
        """
        if event.time < self.clock.now:
            raise ClockError(f"event at {event.time} is older than the clock ({self.clock.now})")
        self.clock.advance_and_fire(event.time)
        if event.consumed:
            event = event.fresh_copy()
        self.dispatched += 1
        for binding in list(self.bindings):
            if event.consumed:
                break
            binding.handle(event)
        return event

    def dispatch_all(self, events: Iterable[Event], settle: bool = True) -> int:
        count = 0
        for event in events:
            self.dispatch(event)
            count += 1
        if settle:
            self.settle()
        return count

    def settle(self) -> None:
        """Fire every pending timeout, in deadline order."""
        fired = 0
        while True:
            deadline = self.clock.next_deadline()
            if deadline is None:
                return
            if fired >= MAX_SETTLE_TIMEOUTS:
                raise ClockError(f"timeouts keep re-arming after {fired} firings")
            fired += self.clock.advance_and_fire(deadline)
