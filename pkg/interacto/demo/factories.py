"""
Declarative wiring of scenario bindings onto the demo drawing.

A scenario binding names a command recipe (how to build and update the
command from interaction data) and optionally a list of when-conditions
compared against the interaction data.
"""
import json
import operator
import re
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Type, Union

from ..bindings.binder import Binder
from ..commands.command import Command
from ..errors import ScenarioError
from ..schemas.interaction_schemas import (
    FromToData,
    InteractionData,
    KeysData,
    MultiTouchData,
    PointData,
    TapData,
)
from ..schemas.scenario_schemas import WhenCondition, WhenOp
from .commands import ChangeColor, DelShapes, DrawRect, Translate
from .model import Drawing

BUTTON_NAMES = {'primary': 0, 'middle': 1, 'secondary': 2}


# -- when-rules ---------------------------------------------------------------

_RULE = re.compile(r'^\s*([A-Za-z_][\w.]*)\s*(==|!=|<=|>=|<|>|\bin\b|\bcontains\b)\s*(.+?)\s*$')

_COMPARE: Dict[WhenOp, Callable[[Any, Any], bool]] = {
    WhenOp.EQ: operator.eq,
    WhenOp.NE: operator.ne,
    WhenOp.LT: operator.lt,
    WhenOp.LE: operator.le,
    WhenOp.GT: operator.gt,
    WhenOp.GE: operator.ge,
    WhenOp.IN: lambda a, b: a in b,
    WhenOp.CONTAINS: lambda a, b: b in a,
}


def parse_condition(rule: Union[str, WhenCondition]) -> WhenCondition:
    """Parse `field op value`, e.g. `button==primary` or `keys contains "a"`."""
    if isinstance(rule, WhenCondition):
        return _normalize(rule)
    match = _RULE.match(rule)
    if match is None:
        raise ScenarioError(f"cannot parse when-rule {rule!r}")
    field, op, raw = match.groups()
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    return _normalize(WhenCondition(field=field, op=WhenOp(op), value=value))


def _normalize(cond: WhenCondition) -> WhenCondition:
    if cond.field == 'button' and isinstance(cond.value, str):
        if cond.value not in BUTTON_NAMES:
            raise ScenarioError(f"unknown button name {cond.value!r}")
        return cond.model_copy(update={'value': BUTTON_NAMES[cond.value]})
    return cond


def _lookup(data: InteractionData, path: str) -> Any:
    value: Any = data
    for part in path.split('.'):
        if isinstance(value, (list, tuple)):
            try:
                value = value[int(part)]
            except (ValueError, IndexError):
                return None
        elif isinstance(value, dict):
            value = value.get(part)
        else:
            value = getattr(value, part, None)
        if value is None:
            return None
    return value


def evaluate(cond: WhenCondition, data: InteractionData) -> bool:
    actual = _lookup(data, cond.field)
    if actual is None and cond.op not in (WhenOp.EQ, WhenOp.NE):
        return False
    try:
        return bool(_COMPARE[cond.op](actual, cond.value))
    except TypeError:
        return False


def when_rule(rules: Sequence[Union[str, WhenCondition]]) -> Optional[Callable[[InteractionData], bool]]:
    """All conditions must hold; no condition means no when-predicate."""
    conditions = [parse_condition(rule) for rule in rules]
    if not conditions:
        return None
    return lambda d: all(evaluate(c, d) for c in conditions)


# -- command recipes ------------------------------------------------------------

@dataclass(frozen=True)
class CommandRecipe:
    name: str
    command_type: Type[Command]
    data_types: Tuple[Type[InteractionData], ...]
    build: Callable[[Drawing, Mapping[str, Any]], Callable[[Any], Command]]
    update: Optional[Callable[[Any, Any], None]] = None

    def configure(self, stage: Binder, drawing: Drawing, params: Mapping[str, Any]) -> Binder:
        stage = stage.to_produce(self.build(drawing, params))
        if self.update is not None:
            stage = stage.then(self.update)
        return stage


def _target(d: InteractionData) -> Optional[str]:
    if isinstance(d, FromToData):
        return d.src_object
    if isinstance(d, PointData):
        return d.object
    if isinstance(d, KeysData):
        return d.target
    if isinstance(d, TapData):
        return d.taps[0].object if d.taps else None
    if isinstance(d, MultiTouchData):
        return next((t.src_object for t in d.touches if t.src_object), None)
    return None


def _selection_or_target(drawing: Drawing, d: InteractionData) -> List[str]:
    if drawing.selection:
        return list(drawing.selection)
    target = _target(d)
    return [target] if target is not None else []


def _translate_update(d: FromToData, c: Translate) -> None:
    c.set_offset(d.dx, d.dy)


def _draw_rect_update(d: FromToData, c: DrawRect) -> None:
    c.set_corners(d.src_position, d.tgt_position)


RECIPES: Dict[str, CommandRecipe] = {
    'translate': CommandRecipe(
        'translate', Translate, (FromToData,),
        build=lambda drawing, params: lambda d: Translate(drawing, d.src_object),
        update=_translate_update,
    ),
    'draw_rect': CommandRecipe(
        'draw_rect', DrawRect, (FromToData,),
        build=lambda drawing, params: lambda d: DrawRect(
            drawing, params.get('shape_id'), params.get('color', 'black'),
        ),
        update=_draw_rect_update,
    ),
    'change_color': CommandRecipe(
        'change_color', ChangeColor, (PointData, KeysData, TapData, FromToData),
        build=lambda drawing, params: lambda d: ChangeColor(
            drawing, _selection_or_target(drawing, d), params.get('color', 'red'),
        ),
    ),
    'del_shapes': CommandRecipe(
        'del_shapes', DelShapes, (PointData, KeysData, TapData, FromToData, MultiTouchData),
        build=lambda drawing, params: lambda d: DelShapes(drawing, _selection_or_target(drawing, d)),
    ),
}


def recipe_for(name: str, data_type: Type[InteractionData]) -> CommandRecipe:
    recipe = RECIPES.get(name)
    if recipe is None:
        raise ScenarioError(f"unknown command {name!r}; known: {', '.join(sorted(RECIPES))}")
    if not issubclass(data_type, recipe.data_types):
        accepted = ', '.join(t.__name__ for t in recipe.data_types)
        raise ScenarioError(f"command {name!r} needs {accepted} data, the interaction gives {data_type.__name__}")
    return recipe
