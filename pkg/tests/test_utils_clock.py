import pytest

from interacto.errors import ClockError
from interacto.utils.utils_clock import VirtualClock, advance_clock


class Recorder:
    def __init__(self, clock=None):
        self.fired = []
        self.clock = clock

    def on_timeout(self, token):
        self.fired.append((token, self.clock.now if self.clock else None))


def test_timeout_not_due_before_deadline(clock):
    clock.schedule(1000, Recorder(), 'dbl')
    assert advance_clock(clock, 999) == []
    assert clock.now == 999


def test_timeout_due_at_deadline(clock):
    clock.schedule(1000, Recorder(), 'dbl')
    assert advance_clock(clock, 1000) == ['dbl']


@pytest.mark.parametrize("target,expected", [(999, []), (1000, ['t']), (1001, ['t'])])
def test_deadline_boundaries(clock, target, expected):
    clock.schedule(1000, Recorder(), 't')
    assert advance_clock(clock, target) == expected


def test_clock_cannot_rewind(clock):
    advance_clock(clock, 5)
    with pytest.raises(ClockError):
        advance_clock(clock, 3)


def test_ties_fire_in_registration_order(clock):
    owner = Recorder()
    clock.schedule(10, owner, 'a')
    clock.schedule(5, owner, 'b')
    clock.schedule(10, owner, 'c')
    assert advance_clock(clock, 20) == ['b', 'a', 'c']


def test_non_positive_delay_rejected(clock):
    with pytest.raises(ClockError):
        clock.schedule(0, Recorder(), None)


def test_negative_start_rejected():
    with pytest.raises(ClockError):
        VirtualClock(start=-1)


def test_cancel_drops_owner_timeouts(clock):
    a, b = Recorder(), Recorder()
    clock.schedule(10, a, 'a')
    clock.schedule(10, b, 'b')
    clock.cancel(a)
    assert clock.pending_timeouts == [(10, 'b')]


def test_advance_and_fire_sets_now_to_deadline_while_firing(clock):
    owner = Recorder(clock)
    clock.schedule(30, owner, 'x')
    fired = clock.advance_and_fire(100)
    assert fired == 1
    assert owner.fired == [('x', 30)]
    assert clock.now == 100


def test_timeouts_armed_while_firing_fire_in_same_advance(clock):
    class Chain:
        def __init__(self):
            self.tokens = []

        def on_timeout(self, token):
            self.tokens.append(token)
            if token < 3:
                clock.schedule(10, self, token + 1)

    chain = Chain()
    clock.schedule(10, chain, 1)
    clock.advance_and_fire(25)
    assert chain.tokens == [1, 2]
    assert clock.next_deadline() == 30
