from pathlib import Path
from typing import List, Optional

import typer
from pydantic import ValidationError
from rich.console import Console
from rich.table import Table

from .clients.bench_client import run_benchmark, synthetic_moves
from .clients.replay_client import load_scenario, node_positions, run_replay
from .clients.robot_client import compile_robot
from .demo.commands import COMMAND_META
from .errors import (
    ClockError,
    EventError,
    InteractoError,
    ScenarioError,
    ScenarioFormatError,
    TraceError,
)
from .schemas.events_schemas import Event
from .schemas.scenario_schemas import RobotScript, Scenario
from .testkit.skeleton import generate_test_skeleton
from .utils.utils_logging import JsonLogFormatter, parse_log_levels
from .utils.utils_trace import parse_trace, validation_message

app = typer.Typer(help='Replay UI event traces through Interacto bindings.', no_args_is_help=True)
console = Console()
err_console = Console(stderr=True)

# Unreadable or malformed input exits with 2; every other engine error with 1.
INPUT_ERRORS = (TraceError, EventError, ClockError, ScenarioFormatError, OSError, ValidationError)
SCENARIO_ERRORS = (InteractoError, AssertionError)


def _fail(exc: Exception) -> None:
    code = 2 if isinstance(exc, INPUT_ERRORS) else 1
    message = validation_message(exc) if isinstance(exc, ValidationError) else str(exc)
    err_console.print(f"[red]error:[/red] {message}")
    raise typer.Exit(code)


def _split(value: Optional[str]) -> List[str]:
    return [part.strip() for part in (value or '').split(',') if part.strip()]


def _load_events(scenario: Scenario, trace: Optional[Path], robot: Optional[Path]) -> List[Event]:
    if (trace is None) == (robot is None):
        raise ScenarioError('give exactly one of --trace or --robot')
    if trace is not None:
        return parse_trace(trace.read_bytes())
    script = RobotScript.model_validate_json(robot.read_bytes())
    return compile_robot(script, node_positions(scenario))


def _levels(log: Optional[str]):
    if log is None:
        return None
    try:
        return parse_log_levels(_split(log))
    except ValueError as exc:
        raise ScenarioError(str(exc)) from None


def _check_expectations(expect: List[str], produced: List[str]) -> None:
    for item in expect:
        kind, sep, count = item.partition('=')
        if not sep or not count.strip().isdigit():
            raise ScenarioError(f"--expect takes KIND=COUNT, got {item!r}")
        found = produced.count(kind.strip())
        if found != int(count):
            raise AssertionError(f"expected {count} {kind.strip()} produced, found {found}")


@app.command()
def replay(
    scenario: Path = typer.Option(..., help='Scenario file (JSON or YAML).'),
    trace: Optional[Path] = typer.Option(None, help='Event trace, one JSON record per line.'),
    robot: Optional[Path] = typer.Option(None, help='Robot script (JSON) compiled into a trace.'),
    post: Optional[str] = typer.Option(None, help='Comma-separated undo/redo operations run after the replay.'),
    log: Optional[str] = typer.Option(None, help='Comma-separated log levels: interaction, binding, cmd.'),
    report: Optional[Path] = typer.Option(None, help='Write the JSON report to this file.'),
    expect: List[str] = typer.Option([], help='KIND=COUNT of kept commands; repeatable.'),
):
    """Replay a trace and report the commands the bindings produced."""
    try:
        loaded = load_scenario(scenario)
        events = _load_events(loaded, trace, robot)
        levels = _levels(log)
        result = run_replay(loaded, events, log_levels=levels, post_ops=_split(post))
        if report is not None:
            report.write_text(result.model_dump_json(indent=2))
        _check_expectations(expect, [p.command for p in result.produced if p.status == 'done'])
    except INPUT_ERRORS + SCENARIO_ERRORS as exc:
        _fail(exc)

    formatter = JsonLogFormatter()
    for record in result.logs:
        err_console.print(formatter.render(record), markup=False, highlight=False)
    table = Table('binding', 'command', 'status', 'params')
    for p in result.produced:
        table.add_row(p.binding, p.command, p.status, str(p.params))
    console.print(table)
    for op in result.post_ops:
        console.print(f"{op.op}: {'nothing to do' if op.noop else op.command}")
    console.print(f"{result.stats.events} events, {result.stats.ns_per_event:.0f} ns/event")


@app.command()
def bench(
    scenario: Path = typer.Option(..., help='Scenario with a single dnd -> translate binding.'),
    trace: Optional[Path] = typer.Option(None, help='Event trace; omit to use --moves synthetic moves.'),
    moves: int = typer.Option(100_000, help='Synthetic move count when no trace is given.'),
    node: Optional[str] = typer.Option(None, help='Node the synthetic drag starts on (default: first node).'),
    reps: int = typer.Option(10, help='Repetitions per path (at least 3).'),
    max_overhead: Optional[float] = typer.Option(
        None, help='Fail when the binding mean exceeds this multiple of the direct mean.',
    ),
    report: Optional[Path] = typer.Option(None, help='Write the JSON report to this file.'),
):
    """Compare binding dispatch with the hand-written callback."""
    try:
        loaded = load_scenario(scenario)
        if trace is not None:
            events = parse_trace(trace.read_bytes())
        else:
            if not loaded.nodes:
                raise ScenarioError('the scenario declares no node to drag')
            start = next((n for n in loaded.nodes if n.id == node), loaded.nodes[0])
            events = synthetic_moves(moves, start.id, (start.x, start.y))
        result = run_benchmark(loaded, events, reps, max_overhead)
        if report is not None:
            report.write_text(result.model_dump_json(indent=2))
    except INPUT_ERRORS + SCENARIO_ERRORS as exc:
        _fail(exc)

    table = Table('path', 'mean ns/event', 'stdev', 'reps')
    for row in result.rows:
        table.add_row(row.path, f"{row.mean_ns_per_event:.1f}", f"{row.stdev_ns_per_event:.1f}", str(row.reps))
    console.print(table)
    console.print(f"overhead x{result.overhead_ratio:.2f}, equivalent end states: {result.equivalent}")
    if not result.equivalent:
        raise typer.Exit(1)
    if max_overhead is not None and not result.within_bound:
        err_console.print(f"[red]error:[/red] overhead x{result.overhead_ratio:.2f} above x{result.max_overhead:.2f}")
        raise typer.Exit(1)


@app.command()
def skeleton(
    command: str = typer.Argument(..., help='Demo command name, e.g. Translate.'),
    out: Optional[Path] = typer.Option(None, help='Write the module here instead of stdout.'),
):
    """Generate a pytest command-suite skeleton for a demo command."""
    meta = COMMAND_META.get(command)
    if meta is None:
        _fail(ScenarioError(f"unknown command {command!r}; known: {', '.join(sorted(COMMAND_META))}"))
    text = generate_test_skeleton(meta)
    if out is None:
        typer.echo(text, nl=False)
        return
    try:
        out.write_text(text)
    except OSError as exc:
        _fail(exc)


if __name__ == '__main__':
    app()
