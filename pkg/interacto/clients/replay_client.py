import logging
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Union

import yaml
from pydantic import ValidationError

from ..bindings.binder import Binder
from ..bindings.binding import Binding
from ..bindings.context import InteractoContext
from ..demo.factories import recipe_for, when_rule
from ..demo.model import Drawing, Shape
from ..errors import BinderError, InteractionError, ScenarioError, ScenarioFormatError
from ..interactions.catalog import CATALOG, construct_interaction
from ..schemas.events_schemas import Event, NodeId, Position
from ..schemas.report_schemas import PostOpResult, ProducedCommand, ReplayReport, ReplayStats
from ..schemas.scenario_schemas import BindingSpec, Scenario
from ..testkit.observation import BindingsObservation
from ..utils.utils_logging import CapturingHandler, LogLevel, configure_logging, parse_log_levels, remove_logging
from ..utils.utils_trace import validation_message

logger = logging.getLogger(__name__)

POST_OPS = ('undo', 'redo')


def parse_scenario(text: Union[str, bytes], suffix: str = '.json') -> Scenario:
    """
    Validate a scenario document.

    :param suffix: '.yaml' or '.yml' selects YAML, anything else JSON.
    """
    try:
        if suffix.lower() in ('.yaml', '.yml'):
            raw = yaml.safe_load(text)
            return Scenario.model_validate(raw if raw is not None else {})
        return Scenario.model_validate_json(text)
    except yaml.YAMLError as exc:
        raise ScenarioFormatError(f"malformed YAML: {exc}") from exc
    except ValidationError as exc:
        raise ScenarioFormatError(f"invalid scenario: {validation_message(exc)}") from exc


def load_scenario(path: Union[str, Path]) -> Scenario:
    path = Path(path)
    return parse_scenario(path.read_bytes(), path.suffix)


def node_positions(scenario: Scenario) -> Dict[NodeId, Position]:
    return {node.id: (node.x, node.y) for node in scenario.nodes}


def validate_scenario(scenario: Scenario) -> None:
    """Check every name the scenario refers to before anything runs."""
    ids = [node.id for node in scenario.nodes]
    duplicates = sorted({i for i in ids if ids.count(i) > 1})
    if duplicates:
        raise ScenarioError(f"duplicate nodes: {', '.join(duplicates)}")
    known = set(ids)
    for index, spec in enumerate(scenario.bindings):
        where = f"binding {spec.name or index}"
        if spec.interaction not in CATALOG:
            raise ScenarioError(f"{where}: unknown interaction {spec.interaction!r}")
        unknown = [n for n in spec.nodes if n not in known]
        if unknown:
            raise ScenarioError(f"{where}: unknown nodes {', '.join(unknown)}")
        try:
            data_type = construct_interaction(spec.interaction, spec.params).data_type
            recipe_for(spec.command, data_type)
            when_rule(spec.when)
            parse_log_levels(spec.log or ())
        except (InteractionError, ValueError) as exc:
            raise ScenarioError(f"{where}: {exc}") from exc
        except ScenarioError as exc:
            raise ScenarioError(f"{where}: {exc}") from exc


@dataclass
class ReplayWorld:
    """A drawing with the scenario's bindings installed on one context."""
    scenario: Scenario
    drawing: Drawing
    context: InteractoContext
    bindings: List[Binding] = field(default_factory=list)
    observation: Optional[BindingsObservation] = None

    def dispatch(self, events: Iterable[Event]) -> int:
        return self.context.dispatcher.dispatch_all(events)


def build_world(scenario: Scenario, log_levels: Optional[FrozenSet[LogLevel]] = None) -> ReplayWorld:
    """
    Build the drawing and bind every scenario binding, in file order.

    :param log_levels: when given, replaces the log levels of every binding.
    """
    validate_scenario(scenario)
    drawing = Drawing(
        Shape(id=n.id, x=n.x, y=n.y, width=n.width, height=n.height, color=n.color)
        for n in scenario.nodes if n.shape
    )
    context = InteractoContext(scenario.history_capacity)
    world = ReplayWorld(scenario, drawing, context)
    world.observation = BindingsObservation(context)
    for index, spec in enumerate(scenario.bindings):
        try:
            world.bindings.append(_bind(spec, index, drawing, context, log_levels))
        except BinderError as exc:
            raise ScenarioError(f"binding {spec.name or index}: {exc}") from exc
    return world


def _bind(
    spec: BindingSpec,
    index: int,
    drawing: Drawing,
    context: InteractoContext,
    log_levels: Optional[FrozenSet[LogLevel]],
) -> Binding:
    stage = Binder().using(spec.interaction, spec.params)
    data_type = construct_interaction(spec.interaction, spec.params).data_type
    stage = recipe_for(spec.command, data_type).configure(stage, drawing, spec.command_params)
    predicate = when_rule(spec.when)
    if predicate is not None:
        stage = stage.when(predicate)
    if spec.nodes:
        stage = stage.on(*spec.nodes)
    if spec.dynamic:
        stage = stage.on_dynamic(drawing.node_list)
    if spec.keys is not None:
        stage = stage.with_keys(*spec.keys)
    if log_levels is None and spec.log is not None:
        log_levels = parse_log_levels(spec.log)
    if log_levels is not None:
        stage = stage.log(*log_levels)
    stage = (
        stage.continuous(spec.continuous)
        .strict_start(spec.strict_start)
        .consume(spec.consume)
        .throttle(spec.throttle_ms)
    )
    name = spec.name or f"{spec.interaction}-{spec.command}-{index}"
    return stage.bind(context, name=name)


def run_replay(
    scenario: Scenario,
    events: Sequence[Event],
    log_levels: Optional[FrozenSet[LogLevel]] = None,
    post_ops: Sequence[str] = (),
) -> ReplayReport:
    """
    Replay `events` through the scenario's bindings, then apply `post_ops`
    (undo/redo) to the history.

    Nothing is dispatched when the scenario does not resolve.
    """
    for op in post_ops:
        if op not in POST_OPS:
            raise ScenarioError(f"unknown post operation {op!r}; expected undo or redo")
    world = build_world(scenario, log_levels)
    capture = CapturingHandler()
    configure_logging(capture)
    try:
        started = time.perf_counter_ns()
        count = world.dispatch(events)
        elapsed = time.perf_counter_ns() - started
        results = [_post_op(world.context, op) for op in post_ops]
    finally:
        remove_logging(capture)
    history = world.context.history
    return ReplayReport(
        produced=[
            ProducedCommand(
                binding=r.binding,
                command=r.command.label,
                status=r.status.value,
                params=r.command.params(),
            )
            for r in world.observation.produced
        ],
        final_state=world.drawing.state(),
        undo_history=[c.label for c in history.undos],
        redo_history=[c.label for c in history.redos],
        post_ops=results,
        logs=capture.records,
        stats=ReplayStats(
            events=count,
            elapsed_ns=elapsed,
            ns_per_event=elapsed / count if count else 0.0,
        ),
    )


def run_undo_redo(scenario: Scenario, events: Sequence[Event], post_ops: Sequence[str]) -> ReplayReport:
    return run_replay(scenario, events, post_ops=post_ops)


def _post_op(context: InteractoContext, op: str) -> PostOpResult:
    history = context.history
    available = history.can_undo() if op == 'undo' else history.can_redo()
    if not available:
        logger.info("%s on an empty history, nothing to do", op)
        return PostOpResult(op=op, noop=True)
    command = history.undo() if op == 'undo' else history.redo()
    return PostOpResult(op=op, command=command.label)
