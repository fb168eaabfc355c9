"""
Scenario runner for UI command test suites.

A suite declares fixtures building commands that can (or cannot) execute
and checkers asserting the model state after execution and after undo.
Every fixture is used to run a fixed set of named scenarios; one failing
scenario never stops the others.
"""
import logging
from dataclasses import dataclass
from typing import Callable, List, Sequence, Type

from ..commands.command import Command, Undoable
from ..errors import SuiteSpecError
from ..schemas.report_schemas import ScenarioOutcome, ScenarioResult, SuiteReport

logger = logging.getLogger(__name__)

Fixture = Callable[[], Command]
Checker = Callable[[Command], None]

CYCLES = 3


class _SetupError(Exception):
    pass


@dataclass(frozen=True)
class CommandSuiteSpec:
    """
    :param command_type: the command class under test.
    :param can_do: fixtures returning a fresh, executable command.
    :param cannot_do: fixtures returning a command that must not execute.
    :param do_checkers: assertions on a command after it executed.
    :param undo_checkers: assertions on a command after it was undone;
        required exactly when the command is undoable.
    """
    command_type: Type[Command]
    can_do: Sequence[Fixture]
    cannot_do: Sequence[Fixture] = ()
    do_checkers: Sequence[Checker] = ()
    undo_checkers: Sequence[Checker] = ()

    @property
    def undoable(self) -> bool:
        return is_undoable_type(self.command_type)

    def validate(self) -> None:
        name = self.command_type.__name__
        if not self.can_do:
            raise SuiteSpecError(f"{name}: at least one can-do fixture is required")
        if not self.do_checkers:
            raise SuiteSpecError(f"{name}: at least one do checker is required")
        if self.undoable and not self.undo_checkers:
            raise SuiteSpecError(f"{name} is undoable: undo checkers are required")
        if not self.undoable and self.undo_checkers:
            raise SuiteSpecError(f"{name} is not undoable: undo checkers are not allowed")


def is_undoable_type(command_type: Type[Command]) -> bool:
    return issubclass(command_type, Undoable)


def _build(spec: CommandSuiteSpec, fixture: Fixture) -> Command:
    try:
        command = fixture()
    except Exception as exc:
        raise _SetupError(f"fixture failed: {exc!r}") from exc
    if not isinstance(command, spec.command_type):
        raise _SetupError(f"fixture returned {type(command).__name__}, not {spec.command_type.__name__}")
    return command


def _execute(command: Command) -> None:
    result = command.execute()
    if result is not True:
        raise AssertionError('the command did not execute synchronously' if result else 'the command did not execute')


def _check(checkers: Sequence[Checker], command: Command) -> None:
    for checker in checkers:
        checker(command)


def _run(name: str, scenario: Callable[[], None]) -> ScenarioResult:
    try:
        scenario()
    except _SetupError as exc:
        return ScenarioResult(name=name, outcome=ScenarioOutcome.ERROR, detail=str(exc))
    except AssertionError as exc:
        return ScenarioResult(name=name, outcome=ScenarioOutcome.FAIL, detail=str(exc) or 'assertion failed')
    except Exception as exc:
        return ScenarioResult(name=name, outcome=ScenarioOutcome.ERROR, detail=repr(exc))
    return ScenarioResult(name=name, outcome=ScenarioOutcome.PASS)


def run_command_suite(spec: CommandSuiteSpec) -> SuiteReport:
    """
    Run the can-do, do, undo, redo and cycle scenarios of every can-do
    fixture, then the cannot-do scenario of every cannot-do fixture.
    """
    spec.validate()
    results: List[ScenarioResult] = []
    undoable = spec.undoable

    for i, fixture in enumerate(spec.can_do):
        def can_do(fixture=fixture) -> None:
            if not _build(spec, fixture).can_execute():
                raise AssertionError('can_execute is false')

        def do(fixture=fixture) -> None:
            command = _build(spec, fixture)
            _execute(command)
            _check(spec.do_checkers, command)

        def undo(fixture=fixture) -> None:
            command = _build(spec, fixture)
            _execute(command)
            command.undo()
            _check(spec.undo_checkers, command)

        def redo(fixture=fixture) -> None:
            command = _build(spec, fixture)
            _execute(command)
            command.undo()
            command.redo()
            _check(spec.do_checkers, command)

        def cycles(fixture=fixture) -> None:
            command = _build(spec, fixture)
            _execute(command)
            _check(spec.do_checkers, command)
            for _ in range(CYCLES):
                command.undo()
                _check(spec.undo_checkers, command)
                command.redo()
                _check(spec.do_checkers, command)

        results.append(_run(f"can_do[{i}]", can_do))
        results.append(_run(f"do[{i}]", do))
        if undoable:
            results.append(_run(f"undo[{i}]", undo))
            results.append(_run(f"redo[{i}]", redo))
            results.append(_run(f"cycles[{i}]", cycles))

    if not spec.cannot_do:
        results.append(ScenarioResult(
            name='cannot_do',
            outcome=ScenarioOutcome.SKIPPED,
            detail='no cannot-do fixture',
        ))
    for j, fixture in enumerate(spec.cannot_do):
        def cannot_do(fixture=fixture) -> None:
            command = _build(spec, fixture)
            if command.can_execute():
                raise AssertionError('can_execute is true')
            if command.execute() is not False:
                raise AssertionError('the command executed')

        results.append(_run(f"cannot_do[{j}]", cannot_do))

    report = SuiteReport(command=spec.command_type.__name__, scenarios=results)
    logger.debug("%s suite: %d scenarios, passed=%s", report.command, len(results), report.passed)
    return report
