import json
import logging
import sys
from enum import Enum
from typing import Dict, Iterable, List, Optional

from ..config import settings

# Record attributes carried through `extra=`.
CATEGORY_ATTR = 'interacto_level'
TIME_ATTR = 'interacto_t'
BINDING_ATTR = 'interacto_binding'


class LogLevel(str, Enum):
    INTERACTION = 'interaction'
    BINDING = 'binding'
    CMD = 'cmd'

    @property
    def logger(self) -> logging.Logger:
        return logging.getLogger(f"interacto.{self.value}")


def parse_log_levels(values: Iterable[str]) -> frozenset:
    levels = set()
    for value in values:
        try:
            levels.add(LogLevel(value.strip()))
        except ValueError:
            known = ', '.join(lvl.value for lvl in LogLevel)
            raise ValueError(f"unknown log level {value!r}; expected one of: {known}") from None
    return frozenset(levels)


def default_log_levels() -> frozenset:
    """Categories a binding logs when its binder never selected any."""
    return parse_log_levels(settings.log_levels())


def log_record(level: LogLevel, binding: str, t: int, msg: str, *args) -> None:
    level.logger.info(
        msg, *args,
        extra={CATEGORY_ATTR: level.value, TIME_ATTR: t, BINDING_ATTR: binding},
    )


class JsonLogFormatter(logging.Formatter):
    """One JSON object per record: level, t (ms), msg and binding name."""

    def format(self, record: logging.LogRecord) -> str:
        return self.render(record_to_dict(record))

    def render(self, entry: Dict[str, object]) -> str:
        return json.dumps(entry)


def record_to_dict(record: logging.LogRecord) -> Dict[str, object]:
    return {
        'level': getattr(record, CATEGORY_ATTR, record.name.rsplit('.', 1)[-1]),
        't': getattr(record, TIME_ATTR, None),
        'msg': record.getMessage(),
        'binding': getattr(record, BINDING_ATTR, None),
    }


class CapturingHandler(logging.Handler):
    """Keeps formatted-as-dict records in memory, for reports and tests."""

    def __init__(self, level: int = logging.INFO):
        super().__init__(level)
        self.records: List[Dict[str, object]] = []

    def emit(self, record: logging.LogRecord) -> None:
        self.records.append(record_to_dict(record))


def configure_logging(handler: Optional[logging.Handler] = None) -> logging.Handler:
    """
    Route the three binding log categories to `handler`.

    Defaults to a JSON stream handler on standard error. Installing a new
    handler replaces the one previously installed by this function.
    """
    if handler is None:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(JsonLogFormatter())
    for level in LogLevel:
        logger = level.logger
        for old in [h for h in logger.handlers if getattr(h, '_interacto_sink', False)]:
            logger.removeHandler(old)
        handler._interacto_sink = True
        logger.addHandler(handler)
        logger.setLevel(logging.INFO)
        logger.propagate = False
    return handler


def remove_logging(handler: logging.Handler) -> None:
    for level in LogLevel:
        level.logger.removeHandler(handler)
