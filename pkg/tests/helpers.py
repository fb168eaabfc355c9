from interacto.bindings.dispatcher import Dispatcher
from interacto.schemas.events_schemas import Event
from interacto.utils.utils_trace import make_event


def press(t, target='n1', x=0.0, y=0.0, button=0) -> Event:
    return make_event('pointer_press', t, target, {'x': x, 'y': y, 'button': button})


def release(t, target='n1', x=0.0, y=0.0, button=0) -> Event:
    return make_event('pointer_release', t, target, {'x': x, 'y': y, 'button': button})


def move(t, target='n1', x=0.0, y=0.0, button=0) -> Event:
    return make_event('pointer_move', t, target, {'x': x, 'y': y, 'button': button})


def click(t, target='n1', x=0.0, y=0.0, button=0) -> Event:
    return make_event('pointer_click', t, target, {'x': x, 'y': y, 'button': button})


def key(t, name, target='n1') -> Event:
    return make_event('key_press', t, target, {'key': name})


def touch(kind, t, touch_id, target='n1', x=0.0, y=0.0) -> Event:
    return make_event(f"touch_{kind}", t, target, {'touch': touch_id, 'x': x, 'y': y})


def dnd_trace(moves, start=(10.0, 10.0), step=(1.0, 1.0), target='n1', t0=0, button=0):
    """Press at `start`, `moves` moves of `step`, release at the last point."""
    x, y = start
    events = [press(t0, target, x, y, button)]
    for i in range(1, moves + 1):
        events.append(move(t0 + i * 10, target, x + i * step[0], y + i * step[1], button))
    last = (x + moves * step[0], y + moves * step[1])
    events.append(release(t0 + (moves + 1) * 10, target, last[0], last[1], button))
    return events


def drag_lock_trace(start=(1.0, 1.0), end=(4.0, 4.0), moves=3, target='n1', button=0):
    """Double-click at `start`, `moves` moves to `end`, double-click there."""
    events = [click(0, target, *start, button), click(100, target, *start, button)]
    for i in range(1, moves + 1):
        x = start[0] + (end[0] - start[0]) * i / moves
        y = start[1] + (end[1] - start[1]) * i / moves
        events.append(move(100 + i * 100, target, x, y, button))
    t = 100 + (moves + 1) * 100
    events += [click(t, target, *end, button), click(t + 100, target, *end, button)]
    return events


class SignalLog:
    """Interaction handler recording the life-cycle callbacks it receives."""

    def __init__(self):
        self.calls = []

    def on_interaction_start(self):
        self.calls.append('start')

    def on_interaction_update(self):
        self.calls.append('update')

    def on_interaction_end(self):
        self.calls.append('end')

    def on_interaction_cancel(self):
        self.calls.append('cancel')


class Driver:
    """Stands in for a binding on a dispatcher: feeds one interaction, clock included."""

    def __init__(self, interaction, dispatcher):
        self.interaction = interaction
        interaction.attach_clock(dispatcher.clock)
        dispatcher.register(self)

    def handle(self, event):
        self.interaction.process_event(event)


def run_interaction(interaction, events, nodes=('n1',)):
    """Dispatch `events` to an activated `interaction`; returns its handler calls."""
    log = SignalLog()
    interaction.handler = log
    dispatcher = Dispatcher()
    interaction.register_nodes(nodes)
    interaction.set_activated(True)
    Driver(interaction, dispatcher)
    dispatcher.dispatch_all(events)
    return log.calls
