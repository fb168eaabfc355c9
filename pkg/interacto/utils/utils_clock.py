import itertools
import logging
from dataclasses import dataclass, field
from typing import Any, List, Protocol, Tuple

from sortedcontainers import SortedKeyList

from ..errors import ClockError

logger = logging.getLogger(__name__)


class TimeoutOwner(Protocol):
    def on_timeout(self, token: Any) -> Any:
        ...


@dataclass
class _Pending:
    deadline: int
    seq: int
    owner: Any
    token: Any = field(compare=False)


class VirtualClock:
    """
    Deterministic millisecond clock.

    Time only moves through `advance`; pending timeouts fire in deadline
    order, ties broken by registration order. A deadline equal to the
    target time fires.
    """

    def __init__(self, start: int = 0):
        if start < 0:
            raise ClockError('clock cannot start before 0')
        self.now = start
        self._seq = itertools.count()
        self._pending = SortedKeyList(key=lambda p: (p.deadline, p.seq))

    def schedule(self, delay: int, owner: TimeoutOwner, token: Any) -> int:
        """
        Register a timeout `delay` ms from now.

        :param delay: strictly positive delay in milliseconds.
        :param owner: object whose `on_timeout(token)` handles the firing.
        :param token: opaque value handed back when the timeout fires.
        :return: the absolute deadline.
        """
        if delay <= 0:
            raise ClockError(f"timeout delay must be positive, got {delay}")
        deadline = self.now + delay
        self._pending.add(_Pending(deadline, next(self._seq), owner, token))
        return deadline

    def cancel(self, owner: TimeoutOwner) -> None:
        for pending in [p for p in self._pending if p.owner is owner]:
            self._pending.remove(pending)

    @property
    def pending_timeouts(self) -> List[Tuple[int, Any]]:
        return [(p.deadline, p.token) for p in self._pending]

    def next_deadline(self):
        return self._pending[0].deadline if self._pending else None

    def advance(self, to: int) -> List[Tuple[Any, Any]]:
        """
        Move the clock to `to` and pop every due timeout.

        :return: (owner, token) pairs in firing order.
        """
        if to < self.now:
            raise ClockError(f"clock cannot rewind from {self.now} to {to}")
        fired = []
        while self._pending and self._pending[0].deadline <= to:
            pending = self._pending.pop(0)
            fired.append((pending.owner, pending.token))
        self.now = to
        return fired

    def advance_and_fire(self, to: int) -> int:
        """
        Advance to `to`, delivering each due timeout to its owner.

        Owners may schedule new timeouts while firing; those due before
        `to` fire in the same call. Returns the number of timeouts fired.
        """
        if to < self.now:
            raise ClockError(f"clock cannot rewind from {self.now} to {to}")
        count = 0
        while self._pending and self._pending[0].deadline <= to:
            pending = self._pending.pop(0)
            self.now = pending.deadline
            pending.owner.on_timeout(pending.token)
            count += 1
        self.now = to
        return count


def advance_clock(clock: VirtualClock, to: int) -> List[Any]:
    """Advance `clock` and return the fired tokens in deadline order."""
    return [token for _, token in clock.advance(to)]
