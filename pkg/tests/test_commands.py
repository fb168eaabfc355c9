import asyncio

import pytest

from interacto.commands.command import Command, CommandStatus, Undoable, is_undoable
from interacto.commands.history import UndoHistory
from interacto.demo.commands import COMMAND_META, ChangeColor, DelShapes, DrawRect, Translate
from interacto.errors import CommandError


class Counter(Command, Undoable):
    def __init__(self, label='c'):
        super().__init__()
        self.name = label
        self.value = 0

    @property
    def label(self):
        return self.name

    def execution(self):
        self.value += 1

    def undo_execution(self):
        self.value -= 1


class Broken(Command):
    def execution(self):
        raise RuntimeError('boom')


class Slow(Command):
    def __init__(self):
        super().__init__()
        self.ran = False

    async def execution(self):
        await asyncio.sleep(0)
        self.ran = True


# --- Command ---


def test_translate_executes_and_keeps_memento(drawing):
    cmd = Translate(drawing, 'n1')
    cmd.set_coord(30, 40)
    assert cmd.execute() is True
    assert drawing.get('n1').position == (30, 40)
    assert cmd.memento == (10, 20)
    assert cmd.status is CommandStatus.EXECUTED


def test_null_translation_not_executable(drawing):
    cmd = Translate(drawing, 'n1')
    cmd.set_coord(10, 20)
    assert cmd.can_execute() is False
    assert cmd.execute() is False
    assert cmd.status is CommandStatus.CREATED
    assert not cmd.memento_created


def test_memento_created_once(drawing):
    cmd = Translate(drawing, 'n1')
    cmd.set_coord(15, 15)
    cmd.execute()
    cmd.set_coord(30, 40)
    cmd.execute()
    assert cmd.memento == (10, 20)
    assert cmd.executions == 2


def test_translate_undo_redo(drawing):
    cmd = Translate(drawing, 'n1')
    cmd.set_coord(30, 40)
    cmd.execute()
    cmd.undo()
    assert drawing.get('n1').position == (10, 20)
    cmd.redo()
    assert drawing.get('n1').position == (30, 40)


def test_undo_unexecuted_command(drawing):
    with pytest.raises(CommandError, match='no memento'):
        Translate(drawing, 'n1').undo()


def test_offset_is_relative_to_origin(drawing):
    cmd = Translate(drawing, 'n1')
    cmd.set_offset(1, 1)
    cmd.execute()
    cmd.set_offset(3, 3)
    cmd.execute()
    assert drawing.get('n1').position == (13, 23)



def test_translate_back_to_memento_executes_once(drawing):
    cmd = Translate(drawing, 'n1')
    cmd.set_coord(30, 40)
    cmd.execute()
    cmd.set_coord(10, 20)
    assert cmd.can_execute()
    assert cmd.execute() is True
    assert drawing.get('n1').position == (10, 20)
    assert not cmd.can_execute()


def test_translate_of_removed_shape_not_executable(drawing):
    cmd = Translate(drawing, 'n1')
    cmd.set_coord(30, 40)
    drawing.remove_shape('n1')
    assert not cmd.can_execute()


def test_failing_execution_keeps_status():
    cmd = Broken()
    with pytest.raises(CommandError, match='boom'):
        cmd.execute()
    assert cmd.status is CommandStatus.CREATED


def test_done_command_cannot_execute_again(drawing):
    cmd = Translate(drawing, 'n1')
    cmd.set_coord(1, 1)
    cmd.execute()
    cmd.done()
    with pytest.raises(CommandError, match='done'):
        cmd.execute()


def test_discard_only_from_created(drawing):
    cmd = Translate(drawing, 'n1')
    cmd.discard()
    assert cmd.status is CommandStatus.DISCARDED
    executed = Counter()
    executed.execute()
    executed.discard()
    assert executed.status is CommandStatus.EXECUTED


def test_is_undoable():
    assert is_undoable(Counter())
    assert not is_undoable(Broken())
    assert not is_undoable(None)


@pytest.mark.asyncio
async def test_async_execution_returns_task():
    cmd = Slow()
    task = cmd.execute()
    assert isinstance(task, asyncio.Task)
    assert cmd.status is CommandStatus.CREATED
    assert await task is True
    assert cmd.ran
    assert cmd.status is CommandStatus.EXECUTED
    assert cmd.pending is None



@pytest.mark.asyncio
async def test_cancel_pending_execution():
    cmd = Slow()
    task = cmd.execute()
    assert cmd.cancel_pending()
    assert not cmd.cancel_pending()
    with pytest.raises(asyncio.CancelledError):
        await task
    assert not cmd.ran
    assert cmd.status is CommandStatus.CREATED


# --- demo commands ---


def test_draw_rect_names_shape_and_undoes(drawing):
    cmd = DrawRect(drawing)
    cmd.set_corners((5, 5), (1, 2))
    assert (cmd.x, cmd.y, cmd.width, cmd.height) == (1, 2, 4, 3)
    cmd.execute()
    assert cmd.shape_id == 'rect3'
    assert 'rect3' in drawing
    cmd.undo()
    assert 'rect3' not in drawing
    cmd.redo()
    assert drawing.get('rect3').width == 4


def test_draw_rect_needs_an_area(drawing):
    cmd = DrawRect(drawing)
    cmd.set_corners((5, 5), (5, 9))
    assert not cmd.can_execute()


def test_change_color(drawing):
    cmd = ChangeColor(drawing, ['n1', 'n2'], 'blue')
    assert cmd.can_execute()
    cmd.execute()
    assert {s.color for s in drawing.shapes} == {'blue'}
    cmd.undo()
    assert [s.color for s in drawing.shapes] == ['black', 'blue']


def test_change_color_same_color_not_executable(drawing):
    assert not ChangeColor(drawing, ['n2'], 'blue').can_execute()
    assert not ChangeColor(drawing, [], 'red').can_execute()


def test_del_shapes_restores_order(drawing):
    before = drawing.state()
    cmd = DelShapes(drawing, ['n1'])
    cmd.execute()
    assert [s.id for s in drawing.shapes] == ['n2']
    cmd.undo()
    assert drawing.state() == before


def test_del_shapes_unknown_shape(drawing):
    assert not DelShapes(drawing, ['ghost']).can_execute()


def test_command_meta_registered():
    assert COMMAND_META['Translate'].fields == ['shape', 'new_x', 'new_y']
    assert COMMAND_META['Translate'].undoable


# --- UndoHistory ---


def test_history_stack_discipline():
    history = UndoHistory(20)
    a, b = Counter('A'), Counter('B')
    for c in (a, b):
        c.execute()
        history.add(c)
    history.undo()
    history.undo()
    history.redo()
    assert [c.label for c in history.undos] == ['A']
    assert [c.label for c in history.redos] == ['B']
    history.redo()
    assert [c.label for c in history.undos] == ['A', 'B']
    assert history.redos == []


def test_add_clears_redos():
    history = UndoHistory(20)
    a, b = Counter('A'), Counter('B')
    a.execute()
    history.add(a)
    history.undo()
    b.execute()
    history.add(b)
    assert history.redos == []
    assert history.last_undo_label() == 'B'


def test_undo_on_empty_history():
    history = UndoHistory(20)
    assert history.undo() is None
    assert history.redo() is None
    assert history.last_undo_label() == '' and history.last_redo_label() == ''


def test_capacity_evicts_oldest():
    history = UndoHistory(2)
    commands = [Counter(str(i)) for i in range(3)]
    for c in commands:
        c.execute()
        history.add(c)
    assert [c.label for c in history.undos] == ['1', '2']
    assert len(history) == 2


def test_capacity_defaults_to_settings(monkeypatch):
    from interacto.config import settings

    monkeypatch.setattr(settings, 'HISTORY_CAPACITY', 7)
    assert UndoHistory().capacity == 7


def test_invalid_capacity():
    with pytest.raises(CommandError):
        UndoHistory(0)


def test_non_undoable_rejected():
    with pytest.raises(CommandError, match='not undoable'):
        UndoHistory(5).add(Broken())


def test_redo_marks_command_done():
    history = UndoHistory(5)
    cmd = Counter()
    cmd.execute()
    cmd.done()
    history.add(cmd)
    history.undo()
    assert cmd.value == 0
    history.redo()
    assert cmd.value == 1
    assert cmd.status is CommandStatus.DONE


def test_can_undo_and_can_redo_follow_the_stacks():
    history = UndoHistory(5)
    assert not history.can_undo() and not history.can_redo()
    cmd = Counter()
    cmd.execute()
    history.add(cmd)
    assert history.can_undo() and not history.can_redo()
    history.undo()
    assert not history.can_undo() and history.can_redo()


class NoUndo(Counter):
    def undo_execution(self):
        raise RuntimeError('cannot undo')


class NoRedo(Counter):
    def redo_execution(self):
        raise RuntimeError('cannot redo')


def test_failing_undo_keeps_the_command_on_the_undo_stack():
    history = UndoHistory(5)
    cmd = NoUndo()
    cmd.execute()
    history.add(cmd)
    with pytest.raises(RuntimeError, match='cannot undo'):
        history.undo()
    assert history.undos == [cmd]
    assert history.redos == []


def test_failing_redo_keeps_the_command_on_the_redo_stack():
    history = UndoHistory(5)
    cmd = NoRedo()
    cmd.execute()
    cmd.done()
    history.add(cmd)
    history.undo()
    with pytest.raises(CommandError, match='cannot redo'):
        history.redo()
    assert history.undos == []
    assert history.redos == [cmd]


class SlowCounter(Counter):
    def __init__(self, label='s', fail=False):
        super().__init__(label)
        self.fail = fail

    async def redo_execution(self):
        await asyncio.sleep(0)
        if self.fail:
            raise OSError('offline')
        self.value += 1


@pytest.mark.asyncio
@pytest.mark.parametrize("fail", [False, True])
async def test_async_redo_settles_when_resolved(fail):
    history = UndoHistory(5)
    cmd = SlowCounter(fail=fail)
    cmd.execute()
    cmd.done()
    history.add(cmd)
    history.undo()
    history.redo()
    assert history.undos == [cmd]
    assert cmd.status is CommandStatus.DONE
    task = cmd.pending
    assert task is not None
    await asyncio.gather(task, return_exceptions=True)
    await asyncio.sleep(0)
    if fail:
        assert cmd.value == 0
        assert history.undos == [] and history.redos == [cmd]
    else:
        assert cmd.value == 1
        assert history.undos == [cmd] and history.redos == []
