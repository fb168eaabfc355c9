from enum import Enum
from typing import FrozenSet, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, PrivateAttr, model_validator

Position = Tuple[float, float]
NodeId = str

# Keys that cancel keyboard-aware interactions.
CANCEL_KEYS = frozenset({"Escape", "ESC"})


class EventKind(str, Enum):
    POINTER_PRESS = 'pointer_press'
    POINTER_RELEASE = 'pointer_release'
    POINTER_MOVE = 'pointer_move'
    POINTER_CLICK = 'pointer_click'
    KEY_PRESS = 'key_press'
    KEY_RELEASE = 'key_release'
    TOUCH_START = 'touch_start'
    TOUCH_MOVE = 'touch_move'
    TOUCH_END = 'touch_end'
    SCROLL = 'scroll'

    @property
    def family(self) -> str:
        return self.value.split('_')[0]


class Modifier(str, Enum):
    SHIFT = 'shift'
    CTRL = 'ctrl'
    ALT = 'alt'
    META = 'meta'


# Payload fields each event family must carry; anything else is rejected.
REQUIRED_FIELDS = {
    'pointer': ('position', 'button'),
    'key': ('key',),
    'touch': ('touch_id', 'position'),
    'scroll': ('position',),
}
PAYLOAD_FIELDS = ('position', 'button', 'key', 'touch_id')


class Event(BaseModel):
    kind: EventKind
    time: int = Field(ge=0)
    target: NodeId = Field(min_length=1)
    position: Optional[Position] = None
    button: Optional[int] = Field(default=None, ge=0)
    key: Optional[str] = None
    touch_id: Optional[int] = Field(default=None, ge=0)
    modifiers: FrozenSet[Modifier] = frozenset()

    model_config = ConfigDict(frozen=True)

    _consumed: bool = PrivateAttr(default=False)

    @model_validator(mode='after')
    def _check_payload(self) -> 'Event':
        required = REQUIRED_FIELDS[self.kind.family]
        for name in required:
            if getattr(self, name) is None:
                raise ValueError(f"missing {name} for {self.kind.value}")
        for name in PAYLOAD_FIELDS:
            if name not in required and getattr(self, name) is not None:
                raise ValueError(f"unexpected field {name} for {self.kind.value}")
        return self

    @property
    def consumed(self) -> bool:
        return self._consumed

    def consume(self) -> None:
        """Stop the propagation of this event; the flag never flips back."""
        self._consumed = True

    def fresh_copy(self) -> 'Event':
        """Copy of this event with the consumed flag cleared."""
        copy = self.model_copy()
        copy._consumed = False
        return copy


class TraceRecord(BaseModel):
    """One line of an on-disk trace."""
    t: int = Field(ge=0)
    kind: EventKind
    target: NodeId = Field(min_length=1)
    x: Optional[float] = None
    y: Optional[float] = None
    button: Optional[int] = None
    key: Optional[str] = None
    touch: Optional[int] = None
    mods: List[Modifier] = []

    model_config = ConfigDict(extra='forbid')

    @model_validator(mode='after')
    def _check_coordinates(self) -> 'TraceRecord':
        if (self.x is None) != (self.y is None):
            raise ValueError('x and y must be given together')
        return self

    def to_event(self) -> Event:
        position = (self.x, self.y) if self.x is not None else None
        return Event(
            kind=self.kind,
            time=self.t,
            target=self.target,
            position=position,
            button=self.button,
            key=self.key,
            touch_id=self.touch,
            modifiers=frozenset(self.mods),
        )

    @classmethod
    def from_event(cls, event: Event) -> 'TraceRecord':
        x, y = event.position if event.position is not None else (None, None)
        return cls(
            t=event.time,
            kind=event.kind,
            target=event.target,
            x=x,
            y=y,
            button=event.button,
            key=event.key,
            touch=event.touch_id,
            mods=sorted(event.modifiers, key=lambda m: m.value),
        )
