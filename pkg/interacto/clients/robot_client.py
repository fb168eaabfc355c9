from typing import Dict, List, Mapping, Optional, Set, Union

from ..config import settings
from ..errors import RobotError
from ..schemas.events_schemas import Event, EventKind, NodeId, Position
from ..schemas.scenario_schemas import RobotOp, RobotScript, RobotStep

Target = Union[NodeId, Position]


class Robot:
    """
    Scripted source of synthetic events.

    Each emitted event is stamped with the current virtual time, which then
    moves `step_ms` forward; `wait` moves it without emitting anything.
    Moving to a node targets that node, moving to a point keeps the current
    target, like a captured pointer.

    Usage:
        events = Robot(positions).move_to('n1').press().move_to((5, 5)).release().events
    """

    def __init__(
        self,
        positions: Optional[Mapping[NodeId, Position]] = None,
        step_ms: Optional[int] = None,
        start: int = 0,
    ):
        self.positions: Dict[NodeId, Position] = dict(positions or {})
        self.step_ms = settings.ROBOT_STEP_MS if step_ms is None else step_ms
        if self.step_ms < 1:
            raise RobotError(f"robot step must be >= 1 ms, got {self.step_ms}")
        self.now = start
        self.target: Optional[NodeId] = None
        self.position: Optional[Position] = None
        self.pressed: Set[int] = set()
        self.touches: Dict[int, NodeId] = {}
        self.events: List[Event] = []

    def _aim(self, where: Target) -> None:
        if isinstance(where, str):
            if where not in self.positions:
                raise RobotError(f"unknown node {where!r}")
            self.target = where
            self.position = self.positions[where]
        else:
            if self.target is None:
                raise RobotError('no target yet, move to a node first')
            self.position = (float(where[0]), float(where[1]))

    def _emit(self, kind: EventKind, **payload) -> None:
        if self.target is None:
            raise RobotError(f"{kind.value}: no target yet, move to a node first")
        self.events.append(Event(kind=kind, time=self.now, target=self.target, **payload))
        self.now += self.step_ms

    def move_to(self, where: Target) -> 'Robot':
        self._aim(where)
        self._emit(EventKind.POINTER_MOVE, position=self.position, button=self._button())
        return self

    def _button(self) -> int:
        return min(self.pressed) if self.pressed else 0

    def press(self, button: int = 0) -> 'Robot':
        self._emit(EventKind.POINTER_PRESS, position=self.position, button=button)
        self.pressed.add(button)
        return self

    def release(self, button: int = 0) -> 'Robot':
        if button not in self.pressed:
            raise RobotError(f"release of button {button} without press")
        self.pressed.discard(button)
        self._emit(EventKind.POINTER_RELEASE, position=self.position, button=button)
        return self

    def click(self, n: int = 1, button: int = 0) -> 'Robot':
        if n < 1:
            raise RobotError(f"click count must be >= 1, got {n}")
        for _ in range(n):
            self._emit(EventKind.POINTER_CLICK, position=self.position, button=button)
        return self

    def key(self, name: str) -> 'Robot':
        self._emit(EventKind.KEY_PRESS, key=name)
        self._emit(EventKind.KEY_RELEASE, key=name)
        return self

    def touch_start(self, touch_id: int, where: Optional[Target] = None) -> 'Robot':
        if touch_id in self.touches:
            raise RobotError(f"touch {touch_id} already down")
        if where is not None:
            self._aim(where)
        self._emit(EventKind.TOUCH_START, position=self.position, touch_id=touch_id)
        self.touches[touch_id] = self.target
        return self

    def touch_move(self, touch_id: int, where: Target) -> 'Robot':
        self._require_touch(touch_id)
        self._aim(where)
        self._emit(EventKind.TOUCH_MOVE, position=self.position, touch_id=touch_id)
        return self

    def touch_end(self, touch_id: int) -> 'Robot':
        self._require_touch(touch_id)
        del self.touches[touch_id]
        self._emit(EventKind.TOUCH_END, position=self.position, touch_id=touch_id)
        return self

    def _require_touch(self, touch_id: int) -> None:
        if touch_id not in self.touches:
            raise RobotError(f"touch {touch_id} is not down")

    def scroll(self) -> 'Robot':
        self._emit(EventKind.SCROLL, position=self.position)
        return self

    def wait(self, ms: int) -> 'Robot':
        if ms < 0:
            raise RobotError(f"cannot wait a negative time ({ms} ms)")
        self.now += ms
        return self


def _where(step: RobotStep) -> Optional[Target]:
    if step.node is not None:
        return step.node
    if step.x is not None and step.y is not None:
        return (step.x, step.y)
    return None


def compile_robot(
    script: RobotScript,
    positions: Mapping[NodeId, Position],
    step_ms: Optional[int] = None,
) -> List[Event]:
    """
    Turn a robot script into a time-ordered event trace.

    :param positions: where each node sits, used by node-targeted steps.
    :param step_ms: overrides the script's and the configured step.
    """
    robot = Robot(positions, step_ms or script.step_ms, script.start)
    for number, step in enumerate(script.steps, start=1):
        try:
            _apply(robot, step)
        except RobotError as exc:
            raise RobotError(f"step {number} ({step.op.value}): {exc}") from exc
    return robot.events


def _apply(robot: Robot, step: RobotStep) -> None:
    op = step.op
    where = _where(step)
    if op is RobotOp.MOVE_TO:
        if where is None:
            raise RobotError('needs a node or x and y')
        robot.move_to(where)
    elif op is RobotOp.PRESS:
        robot.press(step.button)
    elif op is RobotOp.RELEASE:
        robot.release(step.button)
    elif op is RobotOp.CLICK:
        robot.click(step.n, step.button)
    elif op is RobotOp.KEY:
        if step.key is None:
            raise RobotError('needs a key')
        robot.key(step.key)
    elif op in (RobotOp.TOUCH_START, RobotOp.TOUCH_MOVE, RobotOp.TOUCH_END):
        if step.id is None:
            raise RobotError('needs a touch id')
        if op is RobotOp.TOUCH_START:
            robot.touch_start(step.id, where)
        elif op is RobotOp.TOUCH_MOVE:
            if where is None:
                raise RobotError('needs a node or x and y')
            robot.touch_move(step.id, where)
        else:
            robot.touch_end(step.id)
    elif op is RobotOp.SCROLL:
        robot.scroll()
    else:
        robot.wait(step.ms)
