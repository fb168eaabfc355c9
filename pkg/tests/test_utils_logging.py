import json
import logging

import pytest

from interacto.utils.utils_logging import (
    CapturingHandler,
    JsonLogFormatter,
    LogLevel,
    configure_logging,
    log_record,
    parse_log_levels,
    remove_logging,
)


def test_parse_log_levels():
    assert parse_log_levels(['cmd', ' binding ']) == {LogLevel.CMD, LogLevel.BINDING}
    assert parse_log_levels([]) == frozenset()


def test_parse_log_levels_unknown():
    with pytest.raises(ValueError, match='unknown log level'):
        parse_log_levels(['verbose'])


def test_records_carry_time_and_binding():
    capture = CapturingHandler()
    configure_logging(capture)
    try:
        log_record(LogLevel.CMD, 'move-node', 42, "executed %s", 'Translate')
    finally:
        remove_logging(capture)
    assert capture.records == [
        {'level': 'cmd', 't': 42, 'msg': 'executed Translate', 'binding': 'move-node'},
    ]


def test_configure_replaces_previous_sink():
    first, second = CapturingHandler(), CapturingHandler()
    configure_logging(first)
    configure_logging(second)
    try:
        log_record(LogLevel.BINDING, 'b', 0, 'hello')
    finally:
        remove_logging(second)
    assert first.records == []
    assert len(second.records) == 1


def test_json_formatter_emits_one_object():
    record = logging.LogRecord('interacto.interaction', logging.INFO, __file__, 1, 'dnd started', (), None)
    record.interacto_level = 'interaction'
    record.interacto_t = 7
    record.interacto_binding = 'b0'
    line = JsonLogFormatter().format(record)
    assert json.loads(line) == {'level': 'interaction', 't': 7, 'msg': 'dnd started', 'binding': 'b0'}
