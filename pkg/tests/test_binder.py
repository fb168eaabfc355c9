import itertools

import pytest

from interacto.bindings.binder import (
    SHORTCUTS,
    Binder,
    BinderStage,
    binder,
    binder_shortcut,
    button_binder,
    drag_lock_binder,
    key_binder,
    multi_touch_binder,
    tap_binder,
)
from interacto.bindings.context import InteractoContext
from interacto.bindings.observable import ObservableNodeList
from interacto.demo.commands import Translate
from interacto.errors import BinderError
from interacto.interactions.catalog import construct_interaction
from interacto.schemas.interaction_schemas import FromToData

from .helpers import drag_lock_trace


def produce(drawing):
    return lambda d: Translate(drawing, d.src_object)


def test_routines_return_new_binders():
    empty = binder()
    staged = empty.using('dnd')
    assert empty.stage is BinderStage.EMPTY
    assert staged.stage is BinderStage.HAS_INTERACTION
    assert staged is not empty


def test_stage_progression(drawing):
    stage = binder().using('drag_lock')
    assert stage.stage is BinderStage.HAS_INTERACTION
    stage = stage.to_produce(produce(drawing))
    assert stage.stage is BinderStage.HAS_COMMAND
    assert stage.on('n1').stage is BinderStage.COMPLETE
    assert stage.on_dynamic(ObservableNodeList()).stage is BinderStage.COMPLETE


def test_when_sees_interaction_data(context, drawing):
    seen = []
    (
        drag_lock_binder()
        .when(lambda d: seen.append(type(d)) or True)
        .to_produce(produce(drawing))
        .on('n1')
        .bind(context)
    )
    context.dispatcher.dispatch_all(drag_lock_trace(start=(10, 20), end=(12, 22)))
    assert seen and set(seen) == {FromToData}


@pytest.mark.parametrize("routine,args", [
    ('when', (lambda d: True,)),
    ('with_keys', ('a',)),
    ('to_produce', (lambda d: None,)),
    ('first', (lambda d, c: None,)),
])
def test_routines_need_an_interaction(routine, args):
    with pytest.raises(BinderError, match='interaction not selected'):
        getattr(binder(), routine)(*args)


@pytest.mark.parametrize("routine", ['first', 'then', 'end', 'cancel', 'end_or_cancel'])
def test_hooks_need_a_command(routine):
    with pytest.raises(BinderError, match='command not selected') as exc:
        getattr(binder().using('dnd'), routine)(lambda d, c: None)
    assert exc.value.missing == ('to_produce',)


def test_on_unions_nodes():
    stage = binder().on('n1').on('n2', 'n1')
    assert stage.nodes == {'n1', 'n2'}


def test_using_twice_is_an_error():
    with pytest.raises(BinderError, match='already selected'):
        binder().using('dnd').using('drag_lock')


def test_when_last_write_wins():
    first, second = (lambda d: True), (lambda d: False)
    stage = binder().using('dnd').when(first).when(second)
    assert stage.when_predicate is second


def test_using_unknown_interaction():
    with pytest.raises(BinderError, match='unknown interaction'):
        binder().using('swipe')


def test_using_supplier():
    stage = binder().using(lambda: construct_interaction('tap', {'n': 2}))
    assert stage.interaction_name == 'tap'


def test_using_supplier_with_params_rejected():
    with pytest.raises(BinderError):
        binder().using(lambda: construct_interaction('tap'), {'n': 2})


def test_bind_full_configuration(context, drawing):
    binding = (
        drag_lock_binder()
        .to_produce(produce(drawing))
        .then(lambda d, c: c.set_offset(d.dx, d.dy))
        .when(lambda d: d.button == 0)
        .on('n1')
        .bind(context)
    )
    assert binding.activated
    assert binding in context.bindings
    assert binding.name == 'drag_lock#0'


@pytest.mark.parametrize("stage,missing", [
    (Binder(), ('using', 'to_produce', 'on')),
    (Binder().using('dnd'), ('to_produce', 'on')),
    (Binder().using('dnd').on('n1'), ('to_produce',)),
])
def test_incomplete_binder(context, stage, missing):
    with pytest.raises(BinderError, match='missing') as exc:
        stage.bind(context)
    assert exc.value.missing == missing


def test_partial_binder_reused(context, drawing):
    partial = drag_lock_binder().to_produce(produce(drawing)).then(lambda d, c: c.set_offset(d.dx, d.dy))
    first = partial.on('n1').bind(context)
    second = partial.on('n2').bind(context)
    assert first.interaction is not second.interaction
    assert first.interaction.registered_nodes == {'n1'}
    assert second.interaction.registered_nodes == {'n2'}
    assert partial.nodes == frozenset()


def test_bind_twice_gives_independent_bindings(context, drawing):
    stage = drag_lock_binder().to_produce(produce(drawing)).on('n1')
    a, b = stage.bind(context), stage.bind(context)
    assert a is not b
    assert a.interaction is not b.interaction


def test_deriving_does_not_touch_the_receiver(drawing):
    base = drag_lock_binder().to_produce(produce(drawing))
    snapshot = dict(base.__dict__)
    base.on('n1').continuous().throttle(10).log('cmd').consume().strict_start().with_keys('a')
    assert base.__dict__ == snapshot


def test_negative_throttle():
    with pytest.raises(BinderError):
        binder().throttle(-5)


def test_unknown_log_level():
    with pytest.raises(BinderError):
        binder().log('chatty')


def test_tap_binder():
    stage = tap_binder(3)
    assert stage.interaction_name == 'tap'
    assert stage.interaction_supplier().fsm is not None


def test_tap_binder_zero():
    with pytest.raises(BinderError):
        tap_binder(0)


def test_multi_touch_binder_slots():
    interaction = multi_touch_binder(2).interaction_supplier()
    assert len(interaction.data.touches) == 2


def test_shortcut_names():
    assert key_binder().interaction_name == 'key_pressed'
    assert button_binder().interaction_name == 'click'
    assert set(SHORTCUTS) == {
        'drag_lock_binder', 'dnd_binder', 'tap_binder',
        'multi_touch_binder', 'key_binder', 'button_binder',
    }
    assert binder_shortcut('tap_binder', {'n': 2}).interaction_name == 'tap'


def test_unknown_shortcut():
    with pytest.raises(BinderError):
        binder_shortcut('swipe_binder')
    with pytest.raises(BinderError, match='invalid parameters'):
        binder_shortcut('key_binder', {'n': 2})


# --- every routine ordering against the stage table ---

STAGE_ROUTINES = {
    'using': lambda b: b.using('dnd'),
    'to_produce': lambda b: b.to_produce(lambda d: Translate(None, None)),
    'on': lambda b: b.on('n1'),
    'then': lambda b: b.then(lambda d, c: None),
    'when': lambda b: b.when(lambda d: True),
    'continuous': lambda b: b.continuous(),
}

# '+on' marks nodes given before the binder could be bound; a routine the
# table leaves out for a state must raise BinderError.
STAGE_TABLE = {
    'empty': {'using': 'interaction', 'on': 'empty+on', 'continuous': 'empty'},
    'empty+on': {'using': 'interaction+on', 'on': 'empty+on', 'continuous': 'empty+on'},
    'interaction': {
        'to_produce': 'command', 'on': 'interaction+on', 'when': 'interaction', 'continuous': 'interaction',
    },
    'interaction+on': {
        'to_produce': 'complete', 'on': 'interaction+on', 'when': 'interaction+on', 'continuous': 'interaction+on',
    },
    'command': {
        'to_produce': 'command', 'on': 'complete', 'then': 'command', 'when': 'command', 'continuous': 'command',
    },
    'complete': {
        'to_produce': 'complete', 'on': 'complete', 'then': 'complete', 'when': 'complete', 'continuous': 'complete',
    },
}

STAGE_OF = {
    'empty': BinderStage.EMPTY,
    'empty+on': BinderStage.EMPTY,
    'interaction': BinderStage.HAS_INTERACTION,
    'interaction+on': BinderStage.HAS_INTERACTION,
    'command': BinderStage.HAS_COMMAND,
    'complete': BinderStage.COMPLETE,
}


def routine_orderings(longest=4):
    for length in range(longest + 1):
        yield from itertools.product(STAGE_ROUTINES, repeat=length)


def test_every_routine_ordering_follows_the_stage_table():
    for ordering in routine_orderings():
        state, stage = 'empty', Binder()
        for routine in ordering:
            allowed = STAGE_TABLE[state]
            if routine not in allowed:
                with pytest.raises(BinderError):
                    STAGE_ROUTINES[routine](stage)
                break
            stage = STAGE_ROUTINES[routine](stage)
            state = allowed[routine]
            assert stage.stage is STAGE_OF[state], ordering
        else:
            context = InteractoContext()
            if state == 'complete':
                assert stage.bind(context).interaction.registered_nodes == {'n1'}
            else:
                with pytest.raises(BinderError, match='missing'):
                    stage.bind(context)
                assert context.bindings == []
