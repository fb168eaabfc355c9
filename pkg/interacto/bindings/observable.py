from collections import defaultdict
from typing import Callable, Dict, Iterable, Iterator, List

from ..schemas.events_schemas import NodeId

Listener = Callable[[List[NodeId]], None]

ADDED = 'added'
REMOVED = 'removed'


class ObservableNodeList:
    """
    Ordered node ids whose additions and removals are announced.

    Subscribers of 'added' and 'removed' receive the ids that actually
    entered or left the list.
    """

    def __init__(self, nodes: Iterable[NodeId] = ()):
        self._nodes: List[NodeId] = []
        self.callbacks: Dict[str, List[Listener]] = defaultdict(list)
        self.extend(nodes)

    def subscribe(self, event: str, callback: Listener) -> None:
        if event not in (ADDED, REMOVED):
            raise ValueError(f"unknown list event {event!r}")
        self.callbacks[event].append(callback)

    def unsubscribe(self, event: str, callback: Listener) -> None:
        if callback in self.callbacks[event]:
            self.callbacks[event].remove(callback)

    def fire(self, event: str, nodes: List[NodeId]) -> None:
        if not nodes:
            return
        for handler in list(self.callbacks[event]):
            handler(nodes)

    def append(self, node: NodeId) -> None:
        self.extend([node])

    def extend(self, nodes: Iterable[NodeId]) -> None:
        added = []
        for node in nodes:
            if node not in self._nodes:
                self._nodes.append(node)
                added.append(node)
        self.fire(ADDED, added)

    def remove(self, node: NodeId) -> None:
        if node in self._nodes:
            self._nodes.remove(node)
            self.fire(REMOVED, [node])

    def clear(self) -> None:
        removed, self._nodes = self._nodes, []
        self.fire(REMOVED, removed)

    def __contains__(self, node: object) -> bool:
        return node in self._nodes

    def __iter__(self) -> Iterator[NodeId]:
        return iter(list(self._nodes))

    def __len__(self) -> int:
        return len(self._nodes)

    def __repr__(self) -> str:
        return f"ObservableNodeList({self._nodes!r})"
