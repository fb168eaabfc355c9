import re
from pathlib import Path

from jinja2 import Environment, FileSystemLoader, StrictUndefined

from ..schemas.report_schemas import CommandMeta

TEMPLATES = Path(__file__).resolve().parent.parent / 'templates'

_env = Environment(
    loader=FileSystemLoader(str(TEMPLATES)),
    undefined=StrictUndefined,
    keep_trailing_newline=True,
    autoescape=False,
)


def snake_case(name: str) -> str:
    return re.sub(r'(?<=[a-z0-9])(?=[A-Z])', '_', name).lower()


def generate_test_skeleton(meta: CommandMeta) -> str:
    """
    Render a pytest module scaffolding the command suite of `meta`.

    The undo checker is only generated for undoable commands; each command
    field becomes a class attribute of the suite.
    """
    template = _env.get_template('command_suite.py.j2')
    return template.render(meta=meta, snake_name=snake_case(meta.name))
