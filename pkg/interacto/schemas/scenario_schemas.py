from enum import Enum
from typing import Any, Dict, List, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .events_schemas import NodeId


class NodeSpec(BaseModel):
    """A node of the demo canvas; `shape` nodes become drawing shapes."""
    id: NodeId = Field(min_length=1)
    x: float = 0.0
    y: float = 0.0
    width: float = Field(default=10.0, ge=0)
    height: float = Field(default=10.0, ge=0)
    color: str = 'black'
    shape: bool = True

    model_config = ConfigDict(extra='forbid')


class WhenOp(str, Enum):
    EQ = '=='
    NE = '!='
    LT = '<'
    LE = '<='
    GT = '>'
    GE = '>='
    IN = 'in'
    CONTAINS = 'contains'


class WhenCondition(BaseModel):
    """Compares one field of the interaction data to a constant."""
    field: str = Field(min_length=1)
    op: WhenOp = WhenOp.EQ
    value: Any = None

    model_config = ConfigDict(extra='forbid')


class BindingSpec(BaseModel):
    name: Optional[str] = None
    interaction: str
    params: Dict[str, Any] = {}
    command: str
    command_params: Dict[str, Any] = {}
    nodes: List[NodeId] = []
    dynamic: bool = False
    when: List[Union[WhenCondition, str]] = []
    continuous: bool = False
    strict_start: bool = False
    consume: bool = False
    throttle_ms: int = Field(default=0, ge=0)
    log: Optional[List[str]] = None
    keys: Optional[List[str]] = None

    model_config = ConfigDict(extra='forbid')

    @model_validator(mode='after')
    def _check_targets(self) -> 'BindingSpec':
        if not self.nodes and not self.dynamic:
            raise ValueError('a binding needs nodes or dynamic: true')
        return self


class Scenario(BaseModel):
    nodes: List[NodeSpec] = []
    bindings: List[BindingSpec] = []
    history_capacity: Optional[int] = Field(default=None, ge=1)

    model_config = ConfigDict(extra='forbid')


class RobotOp(str, Enum):
    MOVE_TO = 'move_to'
    PRESS = 'press'
    RELEASE = 'release'
    CLICK = 'click'
    KEY = 'key'
    TOUCH_START = 'touch_start'
    TOUCH_MOVE = 'touch_move'
    TOUCH_END = 'touch_end'
    SCROLL = 'scroll'
    WAIT = 'wait'


class RobotStep(BaseModel):
    op: RobotOp
    node: Optional[NodeId] = None
    x: Optional[float] = None
    y: Optional[float] = None
    button: int = Field(default=0, ge=0)
    n: int = Field(default=1, ge=1)
    key: Optional[str] = None
    id: Optional[int] = Field(default=None, ge=0)
    ms: int = Field(default=0, ge=0)

    model_config = ConfigDict(extra='forbid')


class RobotScript(BaseModel):
    start: int = Field(default=0, ge=0)
    step_ms: Optional[int] = Field(default=None, ge=1)
    steps: List[RobotStep] = []

    model_config = ConfigDict(extra='forbid')
