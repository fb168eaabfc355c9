"""
Interacto bindings.

A binding turns each execution of its user interaction into at most one
fresh command. On start it creates the command if `when` holds, updates it
on every interaction update (executing it right away in continuous mode),
executes and registers it when the interaction ends, and reverts continuous
effects when the interaction is cancelled.
"""
import asyncio
import logging
from typing import (
    Any,
    Callable,
    FrozenSet,
    Generic,
    Iterable,
    Optional,
    Sequence,
    TypeVar,
)

from ..commands.command import Command, is_undoable
from ..errors import CommandError
from ..interactions.interaction import UserInteraction
from ..schemas.events_schemas import Event, NodeId
from ..schemas.interaction_schemas import InteractionData
from ..utils.utils_logging import LogLevel, log_record
from ..utils.utils_throttle import Throttle, throttle_filter
from .context import InteractoContext
from .observable import ADDED, REMOVED, ObservableNodeList

logger = logging.getLogger(__name__)

D = TypeVar('D', bound=InteractionData)
C = TypeVar('C', bound=Command)

Hook = Callable[[Any, Optional[Any]], None]
Predicate = Callable[[Any], bool]
CommandFactory = Callable[[Any], Command]


class Binding(Generic[D, C]):
    def __init__(
        self,
        name: str,
        interaction: UserInteraction[D],
        command_factory: Callable[[D], C],
        context: InteractoContext,
        nodes: Iterable[NodeId] = (),
        dynamic_nodes: Sequence[ObservableNodeList] = (),
        first: Sequence[Hook] = (),
        then: Sequence[Hook] = (),
        end: Sequence[Hook] = (),
        cancel: Sequence[Hook] = (),
        end_or_cancel: Sequence[Hook] = (),
        when: Optional[Predicate] = None,
        continuous: bool = False,
        strict_start: bool = False,
        consume: bool = False,
        throttle_ms: int = 0,
        log_levels: FrozenSet[LogLevel] = frozenset(),
        key_filter: Optional[FrozenSet[str]] = None,
    ):
        self.name = name
        self.interaction = interaction
        self.command_factory = command_factory
        self.context = context
        self.first_hooks = tuple(first)
        self.then_hooks = tuple(then)
        self.end_hooks = tuple(end)
        self.cancel_hooks = tuple(cancel)
        self.end_or_cancel_hooks = tuple(end_or_cancel)
        self.when_predicate = when
        self.continuous = continuous
        self.strict_start = strict_start
        self.consume_events = consume
        self.log_levels = frozenset(log_levels)
        self.current_command: Optional[C] = None
        self.commands_created = 0
        self.activated = False

        self.throttle: Optional[Throttle] = None
        if throttle_ms > 0:
            self.throttle = Throttle(throttle_ms, context.clock, release=self._deliver)

        interaction.handler = self
        interaction.key_filter = key_filter
        interaction.attach_clock(context.clock)
        self.static_nodes = frozenset(nodes)
        interaction.register_nodes(self.static_nodes)
        self.dynamic_nodes = tuple(dynamic_nodes)
        for node_list in self.dynamic_nodes:
            self._bind_dynamic_nodes(node_list)

    @property
    def key_filter(self) -> Optional[FrozenSet[str]]:
        return self.interaction.key_filter

    @property
    def throttle_ms(self) -> int:
        return self.throttle.window_ms if self.throttle is not None else 0

    # -- activation -------------------------------------------------------

    def set_activated(self, on: bool) -> None:
        if on == self.activated:
            return
        if not on:
            if self.interaction.running:
                self.interaction.cancel()
            if self.throttle is not None:
                self.throttle.flush()
        self.activated = on
        self.interaction.set_activated(on)
        self._log(LogLevel.BINDING, "binding %s", 'activated' if on else 'deactivated')

    def uninstall(self) -> None:
        self.set_activated(False)
        for node_list in self.dynamic_nodes:
            node_list.unsubscribe(ADDED, self.interaction.register_nodes)
            node_list.unsubscribe(REMOVED, self._dynamic_nodes_removed)
        self.context.remove_binding(self)

    def _bind_dynamic_nodes(self, node_list: ObservableNodeList) -> None:
        self.interaction.register_nodes(node_list)
        node_list.subscribe(ADDED, self.interaction.register_nodes)
        node_list.subscribe(REMOVED, self._dynamic_nodes_removed)

    def _dynamic_nodes_removed(self, nodes: Iterable[NodeId]) -> None:
        # A node stays registered while `on` or another list still provides it.
        gone = [
            node for node in nodes
            if node not in self.static_nodes
            and not any(node in node_list for node_list in self.dynamic_nodes)
        ]
        self.interaction.unregister_nodes(gone)

    # -- event path ---------------------------------------------------------

    def handle(self, event: Event) -> None:
        if not self.activated:
            return
        if self.throttle is None:
            events = [event]
        else:
            events = throttle_filter(self.throttle, event)
        used = False
        for e in events:
            used = self._deliver(e) or used
        if not self.consume_events:
            return
        buffered = self.throttle is not None and self.throttle.pending is event
        if used or (buffered and self.interaction.accepts(event)):
            event.consume()

    def _deliver(self, event: Event) -> bool:
        return self.interaction.process_event(event).consumed_event

    # -- interaction life cycle --------------------------------------------

    def on_interaction_start(self) -> None:
        self._log(LogLevel.INTERACTION, "%s started", self.interaction.name)
        self._guarded(self._start)

    def on_interaction_update(self) -> None:
        self._log(LogLevel.INTERACTION, "%s updated", self.interaction.name)
        self._guarded(self._update)

    def on_interaction_end(self) -> None:
        self._log(LogLevel.INTERACTION, "%s ended", self.interaction.name)
        self._guarded(self._end)

    def on_interaction_cancel(self) -> None:
        self._log(LogLevel.INTERACTION, "%s cancelled", self.interaction.name)
        try:
            self._cancel()
        except Exception as exc:
            self._log(LogLevel.BINDING, "cancel path failed: %s", exc)
            logger.warning("%s: cancel path failed: %s", self.name, exc)
            self.current_command = None

    def _start(self) -> None:
        if self._when():
            self._create_command()
        elif self.strict_start:
            self._log(LogLevel.BINDING, "when is false at start, strict start cancels the interaction")
            self.interaction.cancel()

    def _update(self) -> None:
        if not self._when():
            return
        if self.current_command is None:
            self._create_command()
        self._run_hooks(self.then_hooks, self.current_command)
        command = self.current_command
        if self.continuous and command.can_execute():
            self._execute(command)

    def _end(self) -> None:
        command = self.current_command
        if self._when():
            if command is None:
                command = self._create_command()
            self._run_hooks(self.then_hooks, command)
            if command.can_execute():
                self._execute(command, register=True)
            else:
                self._revert_or_drop(command)
        elif command is not None:
            self._revert_or_drop(command)
        self.current_command = None
        self._run_hooks(self.end_hooks, command)
        self._run_hooks(self.end_or_cancel_hooks, command)

    def _cancel(self) -> None:
        command = self.current_command
        try:
            self._run_hooks(self.cancel_hooks, command)
            self._run_hooks(self.end_or_cancel_hooks, command)
        finally:
            self.current_command = None
            if command is not None:
                self._revert_or_drop(command)

    # -- helpers ------------------------------------------------------------

    def _when(self) -> bool:
        if self.when_predicate is None:
            return True
        return bool(self.when_predicate(self.interaction.data))

    def _create_command(self) -> C:
        command = self.command_factory(self.interaction.data)
        if not isinstance(command, Command):
            raise CommandError(f"factory returned {type(command).__name__}, not a command")
        self.current_command = command
        self.commands_created += 1
        self._log(LogLevel.BINDING, "created %s", command.label)
        self._run_hooks(self.first_hooks, command)
        return command

    def _run_hooks(self, hooks: Sequence[Hook], command: Optional[C]) -> None:
        for hook in hooks:
            hook(self.interaction.data, command)

    def _execute(self, command: C, register: bool = False) -> None:
        completion = command.execute()
        if isinstance(completion, asyncio.Future):
            self.context.track(completion)
            if register:
                completion.add_done_callback(lambda task: self._completed(command, task))
            return
        self._log(LogLevel.CMD, "executed %s", command.label)
        if register:
            self._register(command)

    def _completed(self, command: C, task: 'asyncio.Task[bool]') -> None:
        if task.cancelled() or task.exception() is not None:
            error = 'cancelled' if task.cancelled() else task.exception()
            self._log(LogLevel.CMD, "asynchronous %s failed: %s", command.label, error)
            self._drop(command)
            return
        self._log(LogLevel.CMD, "executed %s", command.label)
        self._register(command)

    def _register(self, command: C) -> None:
        if is_undoable(command):
            self.context.history.add(command)
            self._log(LogLevel.CMD, "registered %s", command.label)
        command.done()
        self.context.command_settled(self, command)

    def _drop(self, command: C) -> None:
        if command.cancel_pending():
            self._log(LogLevel.CMD, "cancelled the pending execution of %s", command.label)
        command.discard()
        self._log(LogLevel.CMD, "discarded %s", command.label)
        self.context.command_settled(self, command)

    def _revert_or_drop(self, command: C) -> None:
        if self.continuous and command.was_executed and is_undoable(command):
            command.undo()
            self._log(LogLevel.CMD, "undone %s", command.label)
            self.context.command_settled(self, command)
        else:
            self._drop(command)

    def _guarded(self, step: Callable[[], None]) -> None:
        try:
            step()
        except Exception as exc:
            self._log(LogLevel.BINDING, "execution cancelled: %s", exc)
            logger.warning("%s: execution cancelled: %s", self.name, exc)
            if self.interaction.running:
                self.interaction.cancel()
            else:
                self.on_interaction_cancel()

    def _log(self, level: LogLevel, msg: str, *args) -> None:
        if level in self.log_levels:
            log_record(level, self.name, self.context.clock.now, msg, *args)

    def __repr__(self) -> str:
        return f"<Binding {self.name} {self.interaction.name}>"
