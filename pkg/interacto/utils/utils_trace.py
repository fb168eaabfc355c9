import json
from typing import Any, Iterable, List, Mapping, Union

from pydantic import ValidationError

from ..errors import EventError, TraceError
from ..schemas.events_schemas import Event, EventKind, NodeId, TraceRecord


def validation_message(exc: ValidationError) -> str:
    err = exc.errors()[0]
    loc = '.'.join(str(part) for part in err.get('loc', ()))
    msg = err.get('msg', 'invalid value')
    if msg.startswith('Value error, '):
        msg = msg[len('Value error, '):]
    return f"{loc}: {msg}" if loc else msg


def make_event(
    kind: Union[EventKind, str],
    time: int,
    target: NodeId,
    payload: Mapping[str, Any],
) -> Event:
    """
    Build a well-formed event from a trace-style payload.

    :param kind: event kind (member or its string value).
    :param time: virtual milliseconds.
    :param target: id of the interactive object the event hits.
    :param payload: any of x, y, button, key, touch, mods.
    :return: an Event with consumed=False.
    """
    try:
        record = TraceRecord(t=time, kind=kind, target=target, **dict(payload))
        return record.to_event()
    except ValidationError as exc:
        raise EventError(validation_message(exc)) from exc
    except TypeError as exc:
        raise EventError(str(exc)) from exc


def parse_trace(text: Union[bytes, str]) -> List[Event]:
    """
    Parse newline-delimited JSON trace records.

    Blank lines are skipped. Times must be non-decreasing.

    :param text: UTF-8 bytes or already decoded text.
    :return: events in file order.
    """
    if isinstance(text, bytes):
        try:
            text = text.decode('utf-8')
        except UnicodeDecodeError as exc:
            raise TraceError(f"trace is not UTF-8: {exc}") from exc
    events: List[Event] = []
    for number, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            raw = json.loads(line)
        except json.JSONDecodeError as exc:
            raise TraceError(f"malformed JSON: {exc.msg}", line=number) from exc
        if not isinstance(raw, dict):
            raise TraceError('record must be a JSON object', line=number)
        try:
            event = TraceRecord.model_validate(raw).to_event()
        except ValidationError as exc:
            raise TraceError(validation_message(exc), line=number) from exc
        if events and event.time < events[-1].time:
            raise TraceError(
                f"time goes backwards: {events[-1].time} then {event.time}",
                line=number,
            )
        events.append(event)
    return events


def serialize_trace(events: Iterable[Event]) -> str:
    lines = [
        TraceRecord.from_event(e).model_dump_json(exclude_none=True, exclude_defaults=True)
        for e in events
    ]
    return ''.join(line + '\n' for line in lines)
