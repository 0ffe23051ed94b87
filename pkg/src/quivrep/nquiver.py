"""The glued quiver of a quiver tuple and the glue/decompose functors.

Naming in the glued quiver: vertex ``v`` of level ``m`` becomes ``L<m>.<v>``,
arrow ``a`` of level ``m`` becomes ``L<m>.<a>``, and the connecting arrow for
the pair ``(g, h)`` entering level ``m`` is ``rho<m>.<g>.<h>``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Mapping, NamedTuple, Sequence

from . import nrep as _nrep
from . import rep as _rep
from .errors import LevelCountTooSmall, QuiverMismatch, TupleMismatch
from .nrep import NRepMorphism, NRepresentation, link_pairs
from .quiver import Quiver, build_quiver, enumerate_paths, path_count_matrix
from .rep import Representation, RepMorphism


def glued_vertex(m: int, v: str) -> str:
    return f"L{m}.{v}"


def glued_arrow(m: int, a: str) -> str:
    return f"L{m}.{a}"


def connecting_arrow(m: int, g: str, h: str) -> str:
    return f"rho{m}.{g}.{h}"


class LevelArrow(NamedTuple):
    level: int
    label: str


class Connecting(NamedTuple):
    level: int
    prev_arrow: str
    arrow: str


@dataclass(frozen=True)
class NQuiver:
    base: Quiver
    levels: tuple[Quiver, ...]
    vertex_origin: Mapping[str, tuple[int, str]]
    arrow_origin: Mapping[str, LevelArrow | Connecting]

    @property
    def n(self) -> int:
        return len(self.levels)

    @cached_property
    def connecting_arrows(self) -> tuple[str, ...]:
        return tuple(a for a, o in self.arrow_origin.items() if isinstance(o, Connecting))

    def origin_json(self) -> dict:
        return {
            "vertices": {v: {"level": m, "vertex": w} for v, (m, w) in self.vertex_origin.items()},
            "arrows": {
                a: ({"level": o.level, "arrow": o.label} if isinstance(o, LevelArrow)
                    else {"level": o.level, "connecting": [o.prev_arrow, o.arrow]})
                for a, o in self.arrow_origin.items()
            },
        }


def default_name(levels: Sequence[Quiver]) -> str:
    return "glued_" + "_".join(q.name for q in levels)


def build_nquiver(levels: Sequence[Quiver], name: str | None = None) -> NQuiver:
    """Disjoint union of the levels plus one connecting arrow per consecutive
    arrow pair, from the target of the lower arrow to the source of the upper one.

    Arrows are ordered level 1, connecting arrows into level 2, level 2, and so on.
    """
    levels = tuple(levels)
    if len(levels) < 2:
        raise LevelCountTooSmall(f"an n-quiver needs at least 2 levels, got {len(levels)}")
    vertices, vorigin = [], {}
    for m, q in enumerate(levels, start=1):
        for v in q.vertices:
            gv = glued_vertex(m, v)
            vertices.append(gv)
            vorigin[gv] = (m, v)
    arrows, aorigin = [], {}
    for m, q in enumerate(levels, start=1):
        if m >= 2:
            lower = levels[m - 2]
            for g in lower.arrows:
                for h in q.arrows:
                    label = connecting_arrow(m, g.label, h.label)
                    arrows.append((label, glued_vertex(m - 1, g.target), glued_vertex(m, h.source)))
                    aorigin[label] = Connecting(m, g.label, h.label)
        for a in q.arrows:
            label = glued_arrow(m, a.label)
            arrows.append((label, glued_vertex(m, a.source), glued_vertex(m, a.target)))
            aorigin[label] = LevelArrow(m, a.label)
    base = build_quiver(name or default_name(levels), vertices, arrows)
    return NQuiver(base, levels, vorigin, aorigin)


def _check_levels(nq: NQuiver, quivers: Sequence[Quiver]) -> None:
    if len(quivers) != nq.n or any(not a.same_shape(b) for a, b in zip(quivers, nq.levels)):
        raise TupleMismatch("quiver tuple does not match the n-quiver's levels")


def glue(v: NRepresentation, nq: NQuiver | None = None, name: str | None = None) -> Representation:
    """Assemble an n-representation into one representation of the glued quiver."""
    nq = nq or build_nquiver(v.quivers)
    _check_levels(nq, v.quivers)
    dims = {gv: v.component(m).dims[w] for gv, (m, w) in nq.vertex_origin.items()}
    mats = {}
    for label, o in nq.arrow_origin.items():
        if isinstance(o, LevelArrow):
            mats[label] = v.component(o.level).mats[o.label]
        else:
            mats[label] = v.links[(o.level, o.prev_arrow, o.arrow)]
    return Representation(nq.base, v.field, dims, mats, v.name if name is None else name)


def decompose(r: Representation, nq: NQuiver, name: str | None = None) -> NRepresentation:
    """Split a representation of the glued quiver into levels and links."""
    if not r.quiver.same_shape(nq.base):
        raise QuiverMismatch(f"representation is over {r.quiver.name!r}, not the glued quiver {nq.base.name!r}")
    comps = []
    for m, q in enumerate(nq.levels, start=1):
        dims = {w: r.dims[glued_vertex(m, w)] for w in q.vertices}
        mats = {a.label: r.mats[glued_arrow(m, a.label)] for a in q.arrows}
        comps.append(Representation(q, r.field, dims, mats))
    links = {(m, g.label, h.label): r.mats[connecting_arrow(m, g.label, h.label)]
             for m, g, h in link_pairs(nq.levels)}
    return NRepresentation(nq.levels, tuple(comps), links, r.name if name is None else name)


def glue_morphism(f: NRepMorphism, nq: NQuiver | None = None) -> RepMorphism:
    nq = nq or build_nquiver(f.source.quivers)
    comps = {gv: f.component(m).comps[w] for gv, (m, w) in nq.vertex_origin.items()}
    return RepMorphism(glue(f.source, nq), glue(f.target, nq), comps, f.name)


def decompose_morphism(f: RepMorphism, nq: NQuiver) -> NRepMorphism:
    src, tgt = decompose(f.source, nq), decompose(f.target, nq)
    maps = []
    for m, q in enumerate(nq.levels, start=1):
        comps = {w: f.comps[glued_vertex(m, w)] for w in q.vertices}
        maps.append(RepMorphism(src.component(m), tgt.component(m), comps))
    return NRepMorphism(src, tgt, tuple(maps), f.name)


def hom_dimension_glued(v: NRepresentation, w: NRepresentation) -> int:
    nq = build_nquiver(v.quivers)
    return len(_rep.hom_space(glue(v, nq), glue(w, nq)))


def hom_dimension_levels(v: NRepresentation, w: NRepresentation) -> int:
    return len(_nrep.nrep_hom_space(v, w))


class BlockStructure(NamedTuple):
    lower: int   # path algebra of the glued quiver on levels 1..n-1 (or of level 1 when n = 2)
    omega: int   # paths using a connecting arrow into the top level
    top: int     # path algebra of the top level
    total: int


def block_structure(nq: NQuiver) -> BlockStructure:
    """Dimensions of the upper-triangular block decomposition of the path algebra."""
    paths = enumerate_paths(nq.base)
    top_level = nq.n
    top_vertices = {glued_vertex(top_level, v) for v in nq.levels[-1].vertices}
    top_connecting = {a for a, o in nq.arrow_origin.items() if isinstance(o, Connecting) and o.level == top_level}
    lower = top = omega = 0
    for p in paths:
        if any(a in top_connecting for a in p.arrows):
            omega += 1
        elif p.source in top_vertices:
            top += 1
        else:
            lower += 1
    return BlockStructure(lower, omega, top, len(paths))


def path_dimension_table(q: Quiver) -> list[list[int]]:
    """Dimension of each entry ``e_i kQ e_j`` (paths from ``i`` to ``j``)."""
    return path_count_matrix(q)
