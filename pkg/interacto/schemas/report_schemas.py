from enum import Enum
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field


class ProducedCommand(BaseModel):
    binding: str
    command: str
    status: str
    params: Dict[str, Any] = {}


class PostOpResult(BaseModel):
    op: str
    command: Optional[str] = None
    noop: bool = False


class ReplayStats(BaseModel):
    events: int = 0
    elapsed_ns: int = 0
    ns_per_event: float = 0.0


class ReplayReport(BaseModel):
    """What a replay produced; everything but `stats` is deterministic."""
    produced: List[ProducedCommand] = []
    final_state: List[Dict[str, Any]] = []
    undo_history: List[str] = []
    redo_history: List[str] = []
    post_ops: List[PostOpResult] = []
    logs: List[Dict[str, Any]] = []
    stats: ReplayStats = ReplayStats()

    def deterministic_json(self) -> str:
        return self.model_dump_json(exclude={'stats'})


class TimingRow(BaseModel):
    path: str
    mean_ns_per_event: float
    stdev_ns_per_event: float
    reps: int


class BenchReport(BaseModel):
    events: int
    reps: int
    rows: List[TimingRow]
    equivalent: bool
    commands: Dict[str, int] = {}
    max_overhead: float = Field(default=2.0, gt=0)

    @property
    def overhead_ratio(self) -> float:
        by_path = {row.path: row.mean_ns_per_event for row in self.rows}
        direct = by_path.get('direct', 0.0)
        return by_path.get('binding', 0.0) / direct if direct else float('inf')

    @property
    def within_bound(self) -> bool:
        """Equivalent end states and a binding mean at most `max_overhead` times the direct one."""
        return self.equivalent and self.overhead_ratio <= self.max_overhead


class ScenarioOutcome(str, Enum):
    PASS = 'pass'
    FAIL = 'fail'
    ERROR = 'error'
    SKIPPED = 'skipped'


class ScenarioResult(BaseModel):
    name: str
    outcome: ScenarioOutcome
    detail: str = ''


class SuiteReport(BaseModel):
    command: str
    scenarios: List[ScenarioResult] = []

    @property
    def passed(self) -> bool:
        return all(s.outcome in (ScenarioOutcome.PASS, ScenarioOutcome.SKIPPED) for s in self.scenarios)

    def outcome_of(self, name: str) -> Optional[ScenarioOutcome]:
        return next((s.outcome for s in self.scenarios if s.name == name), None)


class CommandMeta(BaseModel):
    """Declarative description of a command, enough to scaffold its test suite."""
    name: str = Field(min_length=1, pattern=r'^[A-Za-z_][A-Za-z0-9_]*$')
    fields: List[str] = []
    undoable: bool = False
    module: Optional[str] = None
