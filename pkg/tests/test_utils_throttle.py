import pytest

from interacto.errors import EventError
from interacto.utils.utils_throttle import Throttle, default_throttled_kinds, throttle_filter

from .helpers import move, release


def test_throttle_zero_is_identity(clock):
    throttle = Throttle(0, clock)
    events = [move(0), move(5), release(6)]
    assert [throttle_filter(throttle, e) for e in events] == [[e] for e in events]


def test_burst_coalesced_before_release(clock):
    throttle = Throttle(20, clock)
    delivered = []
    for e in [move(0, x=0), move(5, x=5), move(10, x=10)]:
        delivered += throttle_filter(throttle, e)
    assert delivered == []
    end = release(12, x=10)
    out = throttle_filter(throttle, end)
    assert [(e.kind.value, e.time) for e in out] == [('pointer_move', 10), ('pointer_release', 12)]
    assert clock.pending_timeouts == []


def test_single_move_released_when_window_closes(clock):
    released = []
    throttle = Throttle(20, clock, release=released.append)
    assert throttle_filter(throttle, move(0)) == []
    clock.advance_and_fire(19)
    assert released == []
    clock.advance_and_fire(20)
    assert [e.time for e in released] == [0]
    assert throttle.pending is None


def test_negative_window_rejected(clock):
    with pytest.raises(EventError):
        Throttle(-1, clock)


def test_flush_returns_pending(clock):
    throttle = Throttle(50, clock)
    throttle_filter(throttle, move(0))
    assert [e.time for e in throttle.flush()] == [0]
    assert throttle.flush() == []


def test_default_kinds_read_from_settings(monkeypatch):
    from interacto.config import settings

    monkeypatch.setattr(settings, 'THROTTLED_KINDS', 'pointer_move')
    assert {k.value for k in default_throttled_kinds()} == {'pointer_move'}
    monkeypatch.setattr(settings, 'THROTTLED_KINDS', 'pointer_wiggle')
    with pytest.raises(EventError):
        default_throttled_kinds()
