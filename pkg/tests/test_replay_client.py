import json

import pytest

from interacto.clients.replay_client import (
    build_world,
    load_scenario,
    node_positions,
    parse_scenario,
    run_replay,
    run_undo_redo,
)
from interacto.errors import ScenarioError, ScenarioFormatError
from interacto.schemas.scenario_schemas import Scenario
from interacto.utils.utils_logging import LogLevel

from .helpers import dnd_trace, drag_lock_trace, key


def scenario(data):
    return Scenario.model_validate(data)


def position(report, node):
    shape = next(s for s in report.final_state if s['id'] == node)
    return shape['x'], shape['y']


def test_drag_lock_moves_node(scenario_dict):
    report = run_replay(scenario(scenario_dict), drag_lock_trace())
    assert [(p.command, p.status) for p in report.produced] == [('Translate', 'done')]
    assert report.produced[0].binding == 'move-node'
    assert report.produced[0].params == {'shape': 'n1', 'new_x': 4.0, 'new_y': 4.0}
    assert position(report, 'n1') == (4, 4)
    assert report.undo_history == ['Translate']
    assert report.stats.events == 7


def test_secondary_button_produces_nothing(scenario_dict):
    scenario_dict['bindings'][0]['when'] = ['button==primary']
    report = run_replay(scenario(scenario_dict), drag_lock_trace(button=2))
    assert report.produced == []
    assert position(report, 'n1') == (1, 1)


def test_dnd_substitution(scenario_dict):
    scenario_dict['bindings'][0]['interaction'] = 'dnd'
    report = run_replay(scenario(scenario_dict), dnd_trace(3, start=(1, 1)))
    assert [(p.command, p.status) for p in report.produced] == [('Translate', 'done')]
    assert position(report, 'n1') == (4, 4)


@pytest.mark.parametrize("moves", range(6))
def test_escape_restores_node(scenario_dict, moves):
    scenario_dict['bindings'][0]['continuous'] = True
    trace = drag_lock_trace(end=(1 + moves, 1 + moves), moves=moves)[:2 + moves]
    trace.append(key(3000, 'ESC'))
    report = run_replay(scenario(scenario_dict), trace)
    assert [p for p in report.produced if p.status == 'done'] == []
    assert position(report, 'n1') == (1, 1)
    assert report.undo_history == []


def test_undo_restores_position(scenario_dict):
    report = run_replay(scenario(scenario_dict), drag_lock_trace(), post_ops=['undo'])
    assert position(report, 'n1') == (1, 1)
    assert report.redo_history == ['Translate']
    assert report.post_ops[0].command == 'Translate'


def test_undo_redo_restores_move(scenario_dict):
    report = run_undo_redo(scenario(scenario_dict), drag_lock_trace(), ['undo', 'redo'])
    assert position(report, 'n1') == (4, 4)
    assert report.undo_history == ['Translate']


def test_undo_on_empty_history_is_noted(scenario_dict):
    report = run_replay(scenario(scenario_dict), [], post_ops=['undo'])
    assert report.post_ops[0].noop
    assert report.post_ops[0].command is None


def test_empty_trace_gives_empty_report(scenario_dict):
    report = run_replay(scenario(scenario_dict), [])
    assert report.produced == []
    assert report.logs == []
    assert report.stats.events == 0
    assert position(report, 'n1') == (1, 1)


def test_unknown_post_op(scenario_dict):
    with pytest.raises(ScenarioError, match='post operation'):
        run_replay(scenario(scenario_dict), [], post_ops=['rewind'])


def test_logs_collected_in_report(scenario_dict):
    report = run_replay(scenario(scenario_dict), drag_lock_trace(), log_levels=frozenset({LogLevel.CMD}))
    assert [r['msg'] for r in report.logs] == ['executed Translate', 'registered Translate']
    assert all(r['binding'] == 'move-node' for r in report.logs)


def test_scenario_log_levels_used_by_default(scenario_dict):
    scenario_dict['bindings'][0]['log'] = ['interaction']
    report = run_replay(scenario(scenario_dict), drag_lock_trace())
    assert report.logs[0]['msg'] == 'drag_lock started'
    assert {r['level'] for r in report.logs} == {'interaction'}


def test_replay_is_deterministic(scenario_dict):
    first = run_replay(scenario(scenario_dict), drag_lock_trace())
    second = run_replay(scenario(scenario_dict), drag_lock_trace())
    assert first.deterministic_json() == second.deterministic_json()


def test_draw_rect_on_dynamic_canvas():
    data = {
        'nodes': [{'id': 'canvas', 'width': 500, 'height': 500, 'shape': False}],
        'bindings': [{
            'interaction': 'dnd', 'command': 'draw_rect', 'command_params': {'color': 'green'},
            'nodes': ['canvas'],
        }],
    }
    report = run_replay(scenario(data), dnd_trace(5, start=(10, 10), target='canvas'))
    assert report.final_state == [{
        'id': 'rect1', 'x': 10.0, 'y': 10.0, 'width': 5.0, 'height': 5.0, 'color': 'green',
    }]


# --- loading and validation ---


def test_parse_yaml_scenario():
    text = """
nodes:
  - {id: n1, x: 1, y: 1}
bindings:
  - interaction: dnd
    command: translate
    nodes: [n1]
    when: ["button == primary"]
"""
    parsed = parse_scenario(text, '.yaml')
    assert parsed.bindings[0].interaction == 'dnd'
    assert node_positions(parsed) == {'n1': (1, 1)}


def test_load_scenario_from_file(tmp_path, scenario_dict):
    path = tmp_path / 'scenario.json'
    path.write_text(json.dumps(scenario_dict))
    assert load_scenario(path).bindings[0].name == 'move-node'


@pytest.mark.parametrize("text,suffix", [
    ('nodes: [', '.yml'),
    ('{"nodes": 3}', '.json'),
    ('{"bindings": [{"interaction": "dnd", "command": "translate"}]}', '.json'),
    ('{"speed": 1}', '.json'),
])
def test_invalid_scenario_documents(text, suffix):
    with pytest.raises(ScenarioFormatError):
        parse_scenario(text, suffix)


@pytest.mark.parametrize("change,message", [
    ({'interaction': 'swipe'}, 'unknown interaction'),
    ({'nodes': ['ghost']}, 'unknown nodes'),
    ({'command': 'rotate'}, 'unknown command'),
    ({'interaction': 'press'}, 'needs FromToData'),
    ({'when': ['button ~ 2']}, 'cannot parse'),
    ({'when': ['button==left']}, 'unknown button'),
    ({'log': ['everything']}, 'unknown log level'),
    ({'params': {'variant': 'sideways'}}, 'variant'),
])
def test_unresolved_scenarios(scenario_dict, change, message):
    scenario_dict['bindings'][0].update(change)
    with pytest.raises(ScenarioError, match=message):
        build_world(scenario(scenario_dict))


def test_duplicate_nodes(scenario_dict):
    scenario_dict['nodes'].append({'id': 'n1'})
    with pytest.raises(ScenarioError, match='duplicate'):
        build_world(scenario(scenario_dict))
