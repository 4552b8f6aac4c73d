"""Skew-symmetric quivers with frozen vertices and their mutation."""

from __future__ import annotations

from typing import Hashable, Iterable, Mapping

from .errors import FrozenVertex

Vertex = Hashable


class Quiver:
    """A quiver stored as its skew-symmetric weight function.

    ``weight(u, v) == -weight(v, u)``; a positive value counts arrows ``u -> v``.
    Weights between two frozen vertices are never stored.
    """

    __slots__ = ("vertices", "frozen", "_w")

    def __init__(self, vertices: Iterable[Vertex], frozen: Iterable[Vertex], arrows: Mapping[tuple, int]):
        self.vertices: tuple = tuple(vertices)
        self.frozen: frozenset = frozenset(frozen)
        vset = set(self.vertices)
        if len(vset) != len(self.vertices):
            raise ValueError("duplicate vertex ids")
        if not self.frozen <= vset:
            raise ValueError("frozen vertices must be vertices")
        w: dict[tuple, int] = {}
        for (u, v), k in arrows.items():
            if u not in vset or v not in vset:
                raise ValueError(f"arrow ({u!r}, {v!r}) has an unknown endpoint")
            if u == v:
                if k:
                    raise ValueError("loops are not allowed")
                continue
            if u in self.frozen and v in self.frozen:
                continue
            total = w.get((u, v), 0) + k
            if total:
                w[u, v], w[v, u] = total, -total
            else:
                w.pop((u, v), None)
                w.pop((v, u), None)
        self._w = w

    @classmethod
    def _raw(cls, vertices: tuple, frozen: frozenset, w: dict) -> Quiver:
        q = cls.__new__(cls)
        q.vertices, q.frozen, q._w = vertices, frozen, w
        return q

    def weight(self, u: Vertex, v: Vertex) -> int:
        return self._w.get((u, v), 0)

    @property
    def mutable(self) -> tuple:
        return tuple(v for v in self.vertices if v not in self.frozen)

    def is_mutable(self, v: Vertex) -> bool:
        return v in self.vertices and v not in self.frozen

    def arrows(self) -> dict[tuple, int]:
        """Positive weights only: ``{(u, v): k}`` meaning ``k`` arrows ``u -> v``."""
        return {uv: k for uv, k in self._w.items() if k > 0}

    def incoming(self, v: Vertex) -> dict:
        return {u: k for (u, t), k in self._w.items() if t == v and k > 0}

    def outgoing(self, v: Vertex) -> dict:
        return {t: k for (u, t), k in self._w.items() if u == v and k > 0}

    def __eq__(self, other) -> bool:
        if not isinstance(other, Quiver):
            return NotImplemented
        return (set(self.vertices) == set(other.vertices) and self.frozen == other.frozen
                and self._w == other._w)

    def __hash__(self):
        return hash((frozenset(self.vertices), self.frozen, frozenset(self._w.items())))

    def relabel(self, mapping: Mapping[Vertex, Vertex]) -> Quiver:
        w = {(mapping[u], mapping[v]): k for (u, v), k in self._w.items()}
        return Quiver._raw(tuple(mapping[v] for v in self.vertices),
                           frozenset(mapping[v] for v in self.frozen), w)

    def in_out_degree(self, v: Vertex) -> tuple[int, int]:
        return sum(self.incoming(v).values()), sum(self.outgoing(v).values())

    def to_json(self) -> dict:
        return {
            "vertices": [{"id": _jsonable(v), "frozen": v in self.frozen} for v in self.vertices],
            "arrows": [{"source": _jsonable(u), "target": _jsonable(v), "weight": k}
                       for (u, v), k in sorted(self.arrows().items(), key=repr)],
        }

    def to_dot(self, name: str = "Q") -> str:
        lines = [f"digraph {name} {{"]
        for v in self.vertices:
            shape = "box" if v in self.frozen else "circle"
            lines.append(f'  "{v}" [shape={shape}];')
        for (u, v), k in sorted(self.arrows().items(), key=repr):
            label = f' [label="{k}"]' if k > 1 else ""
            lines.append(f'  "{u}" -> "{v}"{label};')
        lines.append("}")
        return "\n".join(lines)


def _jsonable(v):
    return list(v) if isinstance(v, tuple) else v


def mutate_quiver(q: Quiver, v: Vertex) -> Quiver:
    """Quiver mutation at the mutable vertex ``v``.

    Every path ``u -> v -> t`` adds ``w(u,v) * w(v,t)`` arrows ``u -> t``
    (skipped when ``u`` and ``t`` are both frozen); arrows at ``v`` reverse.
    """
    if not q.is_mutable(v):
        raise FrozenVertex(f"cannot mutate at frozen or unknown vertex {v!r}")
    ins = q.incoming(v)
    outs = q.outgoing(v)
    w = dict(q._w)
    frozen = q.frozen
    for u, a in ins.items():
        for t, b in outs.items():
            if u in frozen and t in frozen:
                continue
            total = w.get((u, t), 0) + a * b
            if total:
                w[u, t], w[t, u] = total, -total
            else:
                del w[u, t]
                del w[t, u]
    for u in list(ins) + list(outs):
        w[u, v], w[v, u] = -w[u, v], -w[v, u]
    return Quiver._raw(q.vertices, q.frozen, w)


def grid_vertices(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(1, n + 1) for j in range(1, n + 2 - i)]


def grid_frozen(n: int) -> set[tuple[int, int]]:
    """Left side ``(1, j)`` and hypotenuse ``i + j = n + 1`` of the grid."""
    return {(i, j) for (i, j) in grid_vertices(n) if i == 1 or i + j == n + 1}


def initial_quiver(n: int) -> Quiver:
    """The triangular grid quiver with cyclically oriented unit triangles.

    Arrows: ``(i,j) -> (i+1,j)``, ``(i,j+1) -> (i,j)`` and ``(i+1,j) -> (i,j+1)``.
    """
    if n < 3:
        raise ValueError("the grid quiver needs n >= 3")
    verts = grid_vertices(n)
    vset = set(verts)
    arrows = {}
    for (i, j) in verts:
        for src, dst in (((i, j), (i + 1, j)), ((i, j + 1), (i, j)), ((i + 1, j), (i, j + 1))):
            if src in vset and dst in vset:
                arrows[src, dst] = 1
    return Quiver(verts, grid_frozen(n), arrows)
