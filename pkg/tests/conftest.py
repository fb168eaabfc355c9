import pytest

from interacto.bindings.context import InteractoContext
from interacto.demo.model import Drawing, Shape
from interacto.testkit.observation import BindingsObservation
from interacto.utils.utils_clock import VirtualClock


@pytest.fixture
def clock():
    return VirtualClock()


@pytest.fixture
def context():
    return InteractoContext(history_capacity=20)


@pytest.fixture
def observation(context):
    obs = BindingsObservation(context)
    yield obs
    obs.detach()


@pytest.fixture
def drawing():
    return Drawing([
        Shape(id='n1', x=10, y=20),
        Shape(id='n2', x=50, y=50, color='blue'),
    ])


@pytest.fixture
def scenario_dict():
    """Drag-lock moving n1 with the primary button."""
    return {
        'nodes': [{'id': 'n1', 'x': 1, 'y': 1}, {'id': 'n2', 'x': 40, 'y': 40}],
        'bindings': [{
            'name': 'move-node',
            'interaction': 'drag_lock',
            'command': 'translate',
            'nodes': ['n1'],
            'when': ['button==0'],
        }],
    }
