from typing import Dict, Iterable, List, Optional, Tuple

from pydantic import BaseModel, Field

from ..bindings.observable import ObservableNodeList
from ..errors import CommandError
from ..schemas.events_schemas import NodeId


class Shape(BaseModel):
    id: NodeId = Field(min_length=1)
    x: float = 0.0
    y: float = 0.0
    width: float = Field(default=10.0, ge=0)
    height: float = Field(default=10.0, ge=0)
    color: str = 'black'

    @property
    def position(self) -> Tuple[float, float]:
        return (self.x, self.y)


class Drawing:
    """
    Ordered shapes of the demo canvas.

    `node_list` mirrors the shape ids, so bindings declared on it follow
    shapes as they are added and removed.
    """

    def __init__(self, shapes: Iterable[Shape] = ()):
        self._shapes: Dict[NodeId, Shape] = {}
        self.node_list = ObservableNodeList()
        self.selection: List[NodeId] = []
        for shape in shapes:
            self.add_shape(shape)

    @property
    def shapes(self) -> List[Shape]:
        return list(self._shapes.values())

    def get(self, shape_id: Optional[NodeId]) -> Optional[Shape]:
        if shape_id is None:
            return None
        return self._shapes.get(shape_id)

    def __contains__(self, shape_id: object) -> bool:
        return shape_id in self._shapes

    def index_of(self, shape_id: NodeId) -> int:
        return list(self._shapes).index(shape_id)

    def add_shape(self, shape: Shape, index: Optional[int] = None) -> None:
        if shape.id in self._shapes:
            raise CommandError(f"shape {shape.id!r} already drawn")
        items = list(self._shapes.items())
        position = len(items) if index is None else max(0, min(index, len(items)))
        items.insert(position, (shape.id, shape))
        self._shapes = dict(items)
        self.node_list.append(shape.id)

    def remove_shape(self, shape_id: NodeId) -> Shape:
        shape = self._shapes.pop(shape_id, None)
        if shape is None:
            raise CommandError(f"no shape {shape_id!r}")
        if shape_id in self.selection:
            self.selection.remove(shape_id)
        self.node_list.remove(shape_id)
        return shape

    def state(self) -> List[dict]:
        """Comparable snapshot of every shape, in drawing order."""
        return [shape.model_dump() for shape in self._shapes.values()]

    def __repr__(self) -> str:
        return f"<Drawing {len(self._shapes)} shapes>"
