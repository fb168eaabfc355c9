import logging
import statistics
import time
from typing import List, Optional, Sequence, Tuple

from ..commands.history import UndoHistory
from ..config import settings
from ..demo.direct import DirectDragTranslate
from ..demo.factories import when_rule
from ..demo.model import Drawing, Shape
from ..errors import BenchmarkError
from ..schemas.events_schemas import Event, EventKind, NodeId
from ..schemas.report_schemas import BenchReport, TimingRow
from ..schemas.scenario_schemas import BindingSpec, Scenario
from .replay_client import build_world

logger = logging.getLogger(__name__)


def _check_benchable(scenario: Scenario) -> BindingSpec:
    if len(scenario.bindings) != 1:
        raise BenchmarkError('the benchmark needs a scenario with exactly one binding')
    spec = scenario.bindings[0]
    if spec.interaction != 'dnd' or spec.command != 'translate':
        raise BenchmarkError(
            f"no direct-callback counterpart for {spec.interaction} -> {spec.command}; "
            f"only dnd -> translate is benchmarked"
        )
    if spec.params or spec.throttle_ms or spec.strict_start or spec.keys is not None or spec.dynamic:
        raise BenchmarkError('the benchmarked binding cannot use params, throttle, strict_start, keys or dynamic nodes')
    return spec


def _direct_run(scenario: Scenario, spec: BindingSpec, events: Sequence[Event]) -> Tuple[int, List[dict], int]:
    drawing = Drawing(
        Shape(id=n.id, x=n.x, y=n.y, width=n.width, height=n.height, color=n.color)
        for n in scenario.nodes if n.shape
    )
    listener = DirectDragTranslate(
        drawing,
        UndoHistory(scenario.history_capacity),
        spec.nodes,
        when=when_rule(spec.when),
        continuous=spec.continuous,
    )
    on_event = listener.on_event
    started = time.perf_counter_ns()
    for event in events:
        on_event(event)
    elapsed = time.perf_counter_ns() - started
    return elapsed, drawing.state(), listener.registered


def _binding_run(scenario: Scenario, events: Sequence[Event]) -> Tuple[int, List[dict], int]:
    world = build_world(scenario)
    dispatch = world.context.dispatcher.dispatch
    started = time.perf_counter_ns()
    for event in events:
        dispatch(event)
    elapsed = time.perf_counter_ns() - started
    return elapsed, world.drawing.state(), world.observation.count()


def _row(path: str, samples: List[int], events: int, reps: int) -> TimingRow:
    per_event = [s / events if events else 0.0 for s in samples]
    return TimingRow(
        path=path,
        mean_ns_per_event=statistics.mean(per_event),
        stdev_ns_per_event=statistics.stdev(per_event),
        reps=reps,
    )


def run_benchmark(
    scenario: Scenario,
    events: Sequence[Event],
    reps: int,
    max_overhead: Optional[float] = None,
) -> BenchReport:
    """
    Time the binding path against the hand-written callback on the same trace.

    Both paths must leave the drawing in the same state; repetitions run
    sequentially, alternating paths.

    :param reps: at least BENCH_MIN_REPS, so a dispersion can be reported.
    :param max_overhead: bound on the binding/direct mean ratio recorded in
        the report (default BENCH_MAX_OVERHEAD); see `BenchReport.within_bound`.
    """
    if reps < settings.BENCH_MIN_REPS:
        raise BenchmarkError(f"repetitions must be >= {settings.BENCH_MIN_REPS}, got {reps}")
    max_overhead = settings.BENCH_MAX_OVERHEAD if max_overhead is None else max_overhead
    if max_overhead <= 0:
        raise BenchmarkError(f"overhead bound must be > 0, got {max_overhead}")
    spec = _check_benchable(scenario)
    events = list(events)
    binding_samples: List[int] = []
    direct_samples: List[int] = []
    equivalent = True
    commands = {'binding': 0, 'direct': 0}
    for rep in range(reps):
        b_elapsed, b_state, b_count = _binding_run(scenario, events)
        d_elapsed, d_state, d_count = _direct_run(scenario, spec, events)
        binding_samples.append(b_elapsed)
        direct_samples.append(d_elapsed)
        if b_state != d_state or b_count != d_count:
            equivalent = False
            logger.warning("rep %d: binding and direct paths diverge (%d vs %d commands)", rep, b_count, d_count)
        commands = {'binding': b_count, 'direct': d_count}
    return BenchReport(
        events=len(events),
        reps=reps,
        rows=[
            _row('binding', binding_samples, len(events), reps),
            _row('direct', direct_samples, len(events), reps),
        ],
        equivalent=equivalent,
        commands=commands,
        max_overhead=max_overhead,
    )


def synthetic_moves(
    count: int,
    node: NodeId,
    start: Tuple[float, float] = (0.0, 0.0),
    step_ms: int = 1,
) -> List[Event]:
    """A press, `count` one-pixel moves and a release on `node`."""
    if count < 1:
        raise BenchmarkError(f"need at least one move, got {count}")
    x, y = start
    events = [Event(kind=EventKind.POINTER_PRESS, time=0, target=node, position=(x, y), button=0)]
    for i in range(1, count + 1):
        events.append(Event(
            kind=EventKind.POINTER_MOVE,
            time=i * step_ms,
            target=node,
            position=(x + i, y + i),
            button=0,
        ))
    events.append(Event(
        kind=EventKind.POINTER_RELEASE,
        time=(count + 1) * step_ms,
        target=node,
        position=(x + count, y + count),
        button=0,
    ))
    return events
