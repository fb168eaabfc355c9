"""
Undoable commands of the demo drawing editor.
"""
from typing import Any, Dict, List, Optional, Sequence, Tuple, Type

from ..commands.command import Command, Undoable
from ..schemas.events_schemas import NodeId, Position
from ..schemas.report_schemas import CommandMeta
from .model import Drawing, Shape

COMMAND_META: Dict[str, CommandMeta] = {}


def command_meta(*fields: str):
    """Record the metadata test skeletons are generated from."""
    def decorator(cls: Type[Command]) -> Type[Command]:
        COMMAND_META[cls.__name__] = CommandMeta(
            name=cls.__name__,
            fields=list(fields),
            undoable=issubclass(cls, Undoable),
            module=cls.__module__,
        )
        return cls
    return decorator


@command_meta('shape', 'new_x', 'new_y')
class Translate(Command, Undoable):
    """
    Moves a shape. The target position is set relative to where the shape
    stood when the command was created, so continuous updates do not
    accumulate.
    """

    def __init__(self, drawing: Drawing, shape: Optional[NodeId]):
        super().__init__()
        self.drawing = drawing
        self.shape = shape
        current = drawing.get(shape)
        self.origin: Optional[Position] = current.position if current is not None else None
        self.new_x, self.new_y = self.origin if self.origin is not None else (0.0, 0.0)
        self.memento: Optional[Position] = None

    def set_coord(self, x: float, y: float) -> None:
        self.new_x, self.new_y = x, y

    def set_offset(self, dx: float, dy: float) -> None:
        if self.origin is not None:
            self.set_coord(self.origin[0] + dx, self.origin[1] + dy)

    def params(self) -> Dict[str, Any]:
        return {'shape': self.shape, 'new_x': self.new_x, 'new_y': self.new_y}

    def can_execute(self) -> bool:
        shape = self.drawing.get(self.shape)
        if shape is None:
            return False
        target = (self.new_x, self.new_y)
        if self.was_executed:
            # moving back to the memento is a move; staying there is not
            return target != self.memento or target != shape.position
        return target != shape.position

    def create_memento(self) -> None:
        self.memento = self.drawing.get(self.shape).position

    def execution(self) -> None:
        shape = self.drawing.get(self.shape)
        shape.x, shape.y = self.new_x, self.new_y

    def undo_execution(self) -> None:
        shape = self.drawing.get(self.shape)
        shape.x, shape.y = self.memento


@command_meta('shape_id', 'x', 'y', 'width', 'height', 'color')
class DrawRect(Command, Undoable):
    def __init__(self, drawing: Drawing, shape_id: Optional[NodeId] = None, color: str = 'black'):
        super().__init__()
        self.drawing = drawing
        self.shape_id = shape_id
        self.color = color
        self.x = self.y = self.width = self.height = 0.0

    def set_corners(self, a: Optional[Position], b: Optional[Position]) -> None:
        if a is None or b is None:
            return
        self.x, self.y = min(a[0], b[0]), min(a[1], b[1])
        self.width, self.height = abs(a[0] - b[0]), abs(a[1] - b[1])

    def params(self) -> Dict[str, Any]:
        return {
            'shape_id': self.shape_id, 'x': self.x, 'y': self.y,
            'width': self.width, 'height': self.height, 'color': self.color,
        }

    def can_execute(self) -> bool:
        return self.width > 0 and self.height > 0

    def create_memento(self) -> None:
        if self.shape_id is None:
            taken = {s.id for s in self.drawing.shapes}
            n = len(taken) + 1
            while f"rect{n}" in taken:
                n += 1
            self.shape_id = f"rect{n}"

    def execution(self) -> None:
        if self.shape_id in self.drawing:
            self.drawing.remove_shape(self.shape_id)
        self.drawing.add_shape(Shape(
            id=self.shape_id, x=self.x, y=self.y,
            width=self.width, height=self.height, color=self.color,
        ))

    def undo_execution(self) -> None:
        self.drawing.remove_shape(self.shape_id)


@command_meta('shapes', 'color')
class ChangeColor(Command, Undoable):
    def __init__(self, drawing: Drawing, shapes: Sequence[NodeId], color: str):
        super().__init__()
        self.drawing = drawing
        self.shapes = [s for s in shapes if s is not None]
        self.color = color
        self.memento: Dict[NodeId, str] = {}

    def params(self) -> Dict[str, Any]:
        return {'shapes': list(self.shapes), 'color': self.color}

    def can_execute(self) -> bool:
        existing = [self.drawing.get(s) for s in self.shapes]
        return bool(existing) and all(existing) and any(s.color != self.color for s in existing)

    def create_memento(self) -> None:
        self.memento = {s: self.drawing.get(s).color for s in self.shapes}

    def execution(self) -> None:
        for shape_id in self.shapes:
            self.drawing.get(shape_id).color = self.color

    def undo_execution(self) -> None:
        for shape_id, color in self.memento.items():
            self.drawing.get(shape_id).color = color


@command_meta('shapes')
class DelShapes(Command, Undoable):
    def __init__(self, drawing: Drawing, shapes: Sequence[NodeId]):
        super().__init__()
        self.drawing = drawing
        self.shapes = list(dict.fromkeys(s for s in shapes if s is not None))
        self.memento: List[Tuple[int, Shape]] = []

    def params(self) -> Dict[str, Any]:
        return {'shapes': list(self.shapes)}

    def can_execute(self) -> bool:
        return bool(self.shapes) and all(s in self.drawing for s in self.shapes)

    def create_memento(self) -> None:
        self.memento = sorted(
            (self.drawing.index_of(s), self.drawing.get(s).model_copy()) for s in self.shapes
        )

    def execution(self) -> None:
        for shape_id in self.shapes:
            self.drawing.remove_shape(shape_id)

    def undo_execution(self) -> None:
        for index, shape in self.memento:
            self.drawing.add_shape(shape.model_copy(), index)
