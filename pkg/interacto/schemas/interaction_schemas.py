from typing import FrozenSet, List, Optional

from pydantic import BaseModel, Field, model_validator

from .events_schemas import Modifier, NodeId, Position


class InteractionData(BaseModel):
    """Root of the data families interactions expose to bindings."""

    def flush(self) -> None:
        fresh = type(self)()
        for name in type(self).model_fields:
            setattr(self, name, getattr(fresh, name))

    def snapshot(self) -> 'InteractionData':
        return self.model_copy(deep=True)


class FromToData(InteractionData):
    src_object: Optional[NodeId] = None
    tgt_object: Optional[NodeId] = None
    src_position: Optional[Position] = None
    tgt_position: Optional[Position] = None
    button: Optional[int] = None

    def start_at(self, obj: NodeId, position: Position, button: Optional[int] = None) -> None:
        self.src_object = obj
        self.src_position = position
        self.tgt_object = obj
        self.tgt_position = position
        self.button = button

    def move_to(self, obj: NodeId, position: Position) -> None:
        self.tgt_object = obj
        self.tgt_position = position

    @property
    def dx(self) -> float:
        if self.src_position is None or self.tgt_position is None:
            return 0.0
        return self.tgt_position[0] - self.src_position[0]

    @property
    def dy(self) -> float:
        if self.src_position is None or self.tgt_position is None:
            return 0.0
        return self.tgt_position[1] - self.src_position[1]


class PointData(InteractionData):
    object: Optional[NodeId] = None
    position: Optional[Position] = None
    button: Optional[int] = None
    modifiers: FrozenSet[Modifier] = frozenset()


class KeysData(InteractionData):
    keys: List[str] = []
    target: Optional[NodeId] = None


class MultiTouchData(InteractionData):
    n: int = Field(default=1, ge=1)
    touches: List[FromToData] = []

    @model_validator(mode='after')
    def _allocate_slots(self) -> 'MultiTouchData':
        if not self.touches:
            self.touches = [FromToData() for _ in range(self.n)]
        return self

    def flush(self) -> None:
        self.touches = [FromToData() for _ in range(self.n)]


class TapData(InteractionData):
    taps: List[PointData] = []
