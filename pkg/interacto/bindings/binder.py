"""
Immutable staged builder of bindings.

Every routine returns a new `Binder`; the receiver never changes, so a
partially configured binder can be stored and derived from several times.
Routines typed over the interaction data need `using` first, hooks over the
command need `to_produce` first, and `bind` needs `using`, `to_produce` and
at least one node.
"""
import dataclasses
from dataclasses import dataclass
from enum import Enum
from typing import (
    Any,
    Callable,
    Dict,
    FrozenSet,
    Mapping,
    Optional,
    Tuple,
    Union,
)

from ..errors import BinderError, InteractionError
from ..interactions.catalog import construct_interaction
from ..interactions.interaction import UserInteraction
from ..schemas.events_schemas import NodeId
from ..utils.utils_logging import LogLevel, default_log_levels
from .binding import Binding, CommandFactory, Hook, Predicate
from .context import InteractoContext
from .observable import ObservableNodeList

InteractionSupplier = Callable[[], UserInteraction]


class BinderStage(str, Enum):
    EMPTY = 'empty'
    HAS_INTERACTION = 'has_interaction'
    HAS_COMMAND = 'has_command'
    COMPLETE = 'complete'


REQUIRED_ROUTINES = ('using', 'to_produce', 'on')


@dataclass(frozen=True)
class Binder:
    interaction_name: Optional[str] = None
    interaction_supplier: Optional[InteractionSupplier] = None
    command_factory: Optional[CommandFactory] = None
    nodes: FrozenSet[NodeId] = frozenset()
    dynamic_nodes: Tuple[ObservableNodeList, ...] = ()
    first_hooks: Tuple[Hook, ...] = ()
    then_hooks: Tuple[Hook, ...] = ()
    end_hooks: Tuple[Hook, ...] = ()
    cancel_hooks: Tuple[Hook, ...] = ()
    end_or_cancel_hooks: Tuple[Hook, ...] = ()
    when_predicate: Optional[Predicate] = None
    key_filter: Optional[FrozenSet[str]] = None
    throttle_ms: int = 0
    is_strict_start: bool = False
    is_continuous: bool = False
    consume_events: bool = False
    log_levels: Optional[FrozenSet[LogLevel]] = None

    @property
    def stage(self) -> BinderStage:
        if self.interaction_supplier is None:
            return BinderStage.EMPTY
        if self.command_factory is None:
            return BinderStage.HAS_INTERACTION
        if not self.nodes and not self.dynamic_nodes:
            return BinderStage.HAS_COMMAND
        return BinderStage.COMPLETE

    def missing_routines(self) -> Tuple[str, ...]:
        present = {
            'using': self.interaction_supplier is not None,
            'to_produce': self.command_factory is not None,
            'on': bool(self.nodes or self.dynamic_nodes),
        }
        return tuple(name for name in REQUIRED_ROUTINES if not present[name])

    def _require_interaction(self, routine: str) -> None:
        if self.interaction_supplier is None:
            raise BinderError(f"{routine}: interaction not selected", ('using',))

    def _require_command(self, routine: str) -> None:
        self._require_interaction(routine)
        if self.command_factory is None:
            raise BinderError(f"{routine}: command not selected", ('to_produce',))

    def _with(self, **changes: Any) -> 'Binder':
        return dataclasses.replace(self, **changes)

    # -- routines -----------------------------------------------------------

    def using(
        self,
        interaction: Union[str, InteractionSupplier],
        params: Optional[Mapping[str, Any]] = None,
    ) -> 'Binder':
        """
        Select the user interaction.

        :param interaction: a catalog id, or a function building a fresh
            interaction for every binding.
        :param params: catalog parameters, only with a catalog id.
        """
        if self.interaction_supplier is not None:
            raise BinderError(f"using: interaction already selected ({self.interaction_name})")
        if isinstance(interaction, str):
            name = interaction
            frozen_params: Dict[str, Any] = dict(params or {})
            supplier = lambda: construct_interaction(name, frozen_params)
        elif callable(interaction):
            if params:
                raise BinderError('using: params only apply to catalog interactions')
            supplier = interaction
        else:
            raise BinderError(f"using: expected a catalog id or a supplier, got {type(interaction).__name__}")
        try:
            sample = supplier()
        except InteractionError as exc:
            raise BinderError(f"using: {exc}") from exc
        if not isinstance(sample, UserInteraction):
            raise BinderError(f"using: supplier returned {type(sample).__name__}")
        return self._with(interaction_name=sample.name, interaction_supplier=supplier)

    def to_produce(self, factory: CommandFactory) -> 'Binder':
        self._require_interaction('to_produce')
        return self._with(command_factory=factory)

    def on(self, *nodes: NodeId) -> 'Binder':
        return self._with(nodes=self.nodes | frozenset(nodes))

    def on_dynamic(self, node_list: ObservableNodeList) -> 'Binder':
        return self._with(dynamic_nodes=self.dynamic_nodes + (node_list,))

    def first(self, hook: Hook) -> 'Binder':
        self._require_command('first')
        return self._with(first_hooks=self.first_hooks + (hook,))

    def then(self, hook: Hook) -> 'Binder':
        self._require_command('then')
        return self._with(then_hooks=self.then_hooks + (hook,))

    def end(self, hook: Hook) -> 'Binder':
        self._require_command('end')
        return self._with(end_hooks=self.end_hooks + (hook,))

    def cancel(self, hook: Hook) -> 'Binder':
        self._require_command('cancel')
        return self._with(cancel_hooks=self.cancel_hooks + (hook,))

    def end_or_cancel(self, hook: Hook) -> 'Binder':
        self._require_command('end_or_cancel')
        return self._with(end_or_cancel_hooks=self.end_or_cancel_hooks + (hook,))

    def when(self, predicate: Predicate) -> 'Binder':
        self._require_interaction('when')
        return self._with(when_predicate=predicate)

    def with_keys(self, *keys: str) -> 'Binder':
        self._require_interaction('with_keys')
        return self._with(key_filter=frozenset(keys))

    def throttle(self, ms: int) -> 'Binder':
        if ms < 0:
            raise BinderError(f"throttle: must be >= 0 ms, got {ms}")
        return self._with(throttle_ms=ms)

    def strict_start(self, on: bool = True) -> 'Binder':
        return self._with(is_strict_start=on)

    def continuous(self, on: bool = True) -> 'Binder':
        return self._with(is_continuous=on)

    def consume(self, on: bool = True) -> 'Binder':
        return self._with(consume_events=on)

    def log(self, *levels: Union[LogLevel, str]) -> 'Binder':
        try:
            return self._with(log_levels=frozenset(LogLevel(lvl) for lvl in levels))
        except ValueError as exc:
            raise BinderError(f"log: {exc}") from exc

    # -- building -----------------------------------------------------------

    def bind(self, context: InteractoContext, name: Optional[str] = None) -> Binding:
        """Create the binding, attach it to `context` and activate it."""
        missing = self.missing_routines()
        if missing:
            raise BinderError(f"binder incomplete, missing: {', '.join(missing)}", missing)
        log_levels = self.log_levels
        if log_levels is None:
            try:
                log_levels = default_log_levels()
            except ValueError as exc:
                raise BinderError(f"INTERACTO_LOG_LEVELS: {exc}") from exc
        interaction = self.interaction_supplier()
        binding = Binding(
            name or f"{interaction.name}#{len(context.bindings)}",
            interaction,
            self.command_factory,
            context,
            nodes=self.nodes,
            dynamic_nodes=self.dynamic_nodes,
            first=self.first_hooks,
            then=self.then_hooks,
            end=self.end_hooks,
            cancel=self.cancel_hooks,
            end_or_cancel=self.end_or_cancel_hooks,
            when=self.when_predicate,
            continuous=self.is_continuous,
            strict_start=self.is_strict_start,
            consume=self.consume_events,
            throttle_ms=self.throttle_ms,
            log_levels=log_levels,
            key_filter=self.key_filter,
        )
        context.add_binding(binding)
        binding.set_activated(True)
        return binding


def binder() -> Binder:
    return Binder()


def drag_lock_binder(**params: Any) -> Binder:
    return Binder().using('drag_lock', params)


def dnd_binder(**params: Any) -> Binder:
    return Binder().using('dnd', params)


def tap_binder(n: int, **params: Any) -> Binder:
    return Binder().using('tap', {'n': n, **params})


def multi_touch_binder(n: int) -> Binder:
    return Binder().using('multi_touch', {'n': n})


def key_binder() -> Binder:
    return Binder().using('key_pressed')


def button_binder(**params: Any) -> Binder:
    return Binder().using('click', params)


SHORTCUTS: Dict[str, Callable[..., Binder]] = {
    'drag_lock_binder': drag_lock_binder,
    'dnd_binder': dnd_binder,
    'tap_binder': tap_binder,
    'multi_touch_binder': multi_touch_binder,
    'key_binder': key_binder,
    'button_binder': button_binder,
}


def binder_shortcut(name: str, params: Optional[Mapping[str, Any]] = None) -> Binder:
    shortcut = SHORTCUTS.get(name)
    if shortcut is None:
        raise BinderError(f"unknown binder shortcut {name!r}")
    try:
        return shortcut(**dict(params or {}))
    except TypeError as exc:
        raise BinderError(f"{name}: invalid parameters: {exc}") from exc
