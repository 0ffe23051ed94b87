"""Quivers, path enumeration and path algebras."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

from .errors import CyclicQuiver, DanglingEndpoint, DuplicateArrow, DuplicateVertex, EmptyQuiver


class Arrow(NamedTuple):
    label: str
    source: str
    target: str


@dataclass(frozen=True)
class Quiver:
    """A finite quiver with declaration-ordered vertices and arrows.

    Use :func:`build_quiver` to construct a validated instance.
    """

    name: str
    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...]

    @cached_property
    def arrow_map(self) -> dict[str, Arrow]:
        return {a.label: a for a in self.arrows}

    @cached_property
    def vertex_index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def arrow_index(self) -> dict[str, int]:
        return {a.label: i for i, a in enumerate(self.arrows)}

    def source(self, label: str) -> str:
        return self.arrow_map[label].source

    def target(self, label: str) -> str:
        return self.arrow_map[label].target

    def outgoing(self, v: str) -> list[Arrow]:
        return [a for a in self.arrows if a.source == v]

    @cached_property
    def is_acyclic(self) -> bool:
        return topological_order(self) is not None

    @cached_property
    def is_connected(self) -> bool:
        if not self.vertices:
            raise EmptyQuiver(f"quiver {self.name!r} has no vertices")
        parent = {v: v for v in self.vertices}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a in self.arrows:
            ra, rb = find(a.source), find(a.target)
            if ra != rb:
                parent[ra] = rb
        return len({find(v) for v in self.vertices}) == 1

    def same_shape(self, other: "Quiver") -> bool:
        return self.vertices == other.vertices and self.arrows == other.arrows

    def renamed(self, name: str) -> "Quiver":
        return Quiver(name, self.vertices, self.arrows)


def build_quiver(name: str, vertices: Iterable[str], arrows: Iterable[Sequence[str]]) -> Quiver:
    """Validate and build a quiver; arrows are ``(label, source, target)`` triples."""
    verts = tuple(str(v) for v in vertices)
    seen = set()
    for v in verts:
        if v in seen:
            raise DuplicateVertex(f"vertex {v!r} declared twice in quiver {name!r}")
        seen.add(v)
    arrs = []
    labels = set()
    for label, src, dst in arrows:
        label, src, dst = str(label), str(src), str(dst)
        if label in labels:
            raise DuplicateArrow(f"arrow {label!r} declared twice in quiver {name!r}")
        labels.add(label)
        for end in (src, dst):
            if end not in seen:
                raise DanglingEndpoint(f"arrow {label!r} of quiver {name!r} uses undeclared vertex {end!r}")
        arrs.append(Arrow(label, src, dst))
    return Quiver(name, verts, tuple(arrs))


def is_acyclic(q: Quiver) -> bool:
    return q.is_acyclic


def is_connected(q: Quiver) -> bool:
    return q.is_connected


def topological_order(q: Quiver) -> list[str] | None:
    """Kahn's algorithm, ties broken by declaration order; ``None`` if cyclic."""
    indeg = {v: 0 for v in q.vertices}
    for a in q.arrows:
        indeg[a.target] += 1
    ready = [v for v in q.vertices if indeg[v] == 0]
    order = []
    while ready:
        v = ready.pop(0)
        order.append(v)
        for a in q.outgoing(v):
            indeg[a.target] -= 1
            if indeg[a.target] == 0:
                ready.append(a.target)
        ready.sort(key=q.vertex_index.__getitem__)
    return order if len(order) == len(q.vertices) else None


class Path(NamedTuple):
    source: str
    target: str
    arrows: tuple[str, ...] = ()

    def __len__(self):
        return len(self.arrows)

    @property
    def is_trivial(self) -> bool:
        return not self.arrows


def _require_acyclic(q: Quiver) -> None:
    if not q.is_acyclic:
        raise CyclicQuiver(f"quiver {q.name!r} has an oriented cycle; its path algebra is infinite-dimensional")


def enumerate_paths(q: Quiver) -> list[Path]:
    """All paths of an acyclic quiver, trivial ones included.

    Ordered by length, then trivial paths by vertex declaration order and
    longer paths lexicographically by arrow declaration index.
    """
    _require_acyclic(q)
    layer = [Path(v, v, ()) for v in q.vertices]
    out = list(layer)
    layer = [Path(a.source, a.target, (a.label,)) for a in q.arrows]
    while layer:
        out.extend(layer)
        nxt = [Path(p.source, a.target, p.arrows + (a.label,)) for p in layer for a in q.outgoing(p.target)]
        idx = q.arrow_index
        nxt.sort(key=lambda p: [idx[x] for x in p.arrows])
        layer = nxt
    return out


def path_count_matrix(q: Quiver) -> list[list[int]]:
    """Entry ``[i][j]`` is the number of paths from vertex ``i`` to vertex ``j``."""
    _require_acyclic(q)
    n = len(q.vertices)
    vi = q.vertex_index
    counts = [[0] * n for _ in range(n)]
    order = topological_order(q)
    for start in q.vertices:
        row = counts[vi[start]]
        row[vi[start]] = 1
        for v in order:
            c = row[vi[v]]
            if c:
                for a in q.outgoing(v):
                    row[vi[a.target]] += c
    return counts


ZERO = -1


@dataclass(frozen=True)
class PathAlgebra:
    """Basis of paths with the structure constants of concatenation.

    ``table[i][j]`` is the index of ``basis[i] * basis[j]`` or ``ZERO``.  The
    left factor is traversed first: ``c * c'`` is defined when ``c'`` starts
    where ``c`` ends.
    """

    quiver: Quiver
    basis: tuple[Path, ...]
    table: tuple[tuple[int, ...], ...] = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def index(self, p: Path) -> int:
        return self._index[p]

    @cached_property
    def _index(self) -> dict[Path, int]:
        return {p: i for i, p in enumerate(self.basis)}

    def multiply(self, x: dict[int, object], y: dict[int, object]) -> dict[int, object]:
        """Product of two elements given as sparse ``{basis index: coefficient}`` maps."""
        out: dict[int, object] = {}
        for i, a in x.items():
            for j, b in y.items():
                k = self.table[i][j]
                if k != ZERO:
                    out[k] = out.get(k, 0) + a * b
        return {k: v for k, v in out.items() if v != 0}

    def identity(self) -> dict[int, object]:
        return {i: 1 for i, p in enumerate(self.basis) if p.is_trivial}


def path_algebra(q: Quiver) -> PathAlgebra:
    basis = enumerate_paths(q)
    index = {p: i for i, p in enumerate(basis)}
    table = []
    for c in basis:
        row = []
        for d in basis:
            if d.source != c.target:
                row.append(ZERO)
            else:
                row.append(index[Path(c.source, d.target, c.arrows + d.arrows)])
        table.append(tuple(row))
    return PathAlgebra(q, tuple(basis), tuple(table))
