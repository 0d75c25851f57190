"""Finite acyclic quivers, paths, and reflection at a sink.

Vertices are 1-based integers.  Reflecting at a sink reverses the arrows
ending there; a reversed arrow keeps its label and toggles an ``op`` mark,
so reflecting twice restores the original quiver exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import CyclicQuiverError, NotASinkError, NotASourceError, ValidationError


@dataclass(frozen=True)
class Arrow:
    label: str
    source: int
    target: int
    op: bool = False

    @property
    def name(self) -> str:
        return self.label + ("^op" if self.op else "")

    def reversed(self) -> "Arrow":
        return Arrow(self.label, self.target, self.source, not self.op)


@dataclass(frozen=True)
class Quiver:
    vertex_count: int
    arrows: tuple[Arrow, ...]

    def __post_init__(self):
        labels = [a.label for a in self.arrows]
        if len(set(labels)) != len(labels):
            raise ValidationError("arrow labels must be unique")
        for a in self.arrows:
            if not (1 <= a.source <= self.vertex_count and 1 <= a.target <= self.vertex_count):
                raise ValidationError(f"arrow {a.name} endpoints out of range")
        topological_order(self)  # raises CyclicQuiverError on a cycle

    @property
    def vertices(self) -> range:
        return range(1, self.vertex_count + 1)

    def arrow(self, name: str) -> Arrow:
        for a in self.arrows:
            if a.name == name:
                return a
        raise KeyError(name)

    def arrows_into(self, w: int) -> list[Arrow]:
        return sorted((a for a in self.arrows if a.target == w), key=lambda a: a.name)

    def arrows_out_of(self, v: int) -> list[Arrow]:
        return sorted((a for a in self.arrows if a.source == v), key=lambda a: a.name)

    def is_sink(self, v: int) -> bool:
        return not any(a.source == v for a in self.arrows)

    def is_source(self, v: int) -> bool:
        return not any(a.target == v for a in self.arrows)


def quiver_from_arrows(vertex_count: int, arrows: list[tuple[str, int, int]]) -> Quiver:
    return Quiver(vertex_count, tuple(Arrow(l, s, t) for l, s, t in arrows))


def topological_order(q: Quiver) -> list[int]:
    """Vertices ordered so arrows go forward; smallest vertex label first."""
    indeg = {v: 0 for v in q.vertices}
    for a in q.arrows:
        indeg[a.target] += 1
    ready = sorted(v for v, d in indeg.items() if d == 0)
    order = []
    while ready:
        v = ready.pop(0)
        order.append(v)
        for a in q.arrows:
            if a.source == v:
                indeg[a.target] -= 1
                if indeg[a.target] == 0:
                    ready.append(a.target)
        ready.sort()
    if len(order) != q.vertex_count:
        raise CyclicQuiverError("quiver has an oriented cycle")
    return order


def reflect_quiver(q: Quiver, v: int) -> Quiver:
    """Reverse every arrow ending in the sink v."""
    if not q.is_sink(v):
        raise NotASinkError(f"vertex {v} has an outgoing arrow")
    return Quiver(q.vertex_count,
                  tuple(a.reversed() if a.target == v else a for a in q.arrows))


def require_source(q: Quiver, v: int):
    if not q.is_source(v):
        raise NotASourceError(f"vertex {v} has an incoming arrow")


def paths(q: Quiver, v: int, w: int) -> list[tuple[Arrow, ...]]:
    """All directed paths v -> w as arrow sequences, lexicographic by labels.

    Includes the trivial (empty) path when v == w.
    """
    out: list[tuple[Arrow, ...]] = []

    def walk(cur: int, acc: tuple[Arrow, ...]):
        if cur == w:
            out.append(acc)
        for a in q.arrows_out_of(cur):
            walk(a.target, acc + (a,))

    walk(v, ())
    out.sort(key=lambda seq: tuple(a.name for a in seq))
    return out
