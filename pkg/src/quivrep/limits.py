"""Finite limits and colimits of representations and n-representations.

A limit is computed vertexwise as the subspace of the product cut out by the
edge constraints (equalizer of products); a colimit as the quotient of the
coproduct by the edge relations.  Arrow maps and links of the apex are the
unique solutions of the defining equations, e.g. ``E_t X = phi E_s`` for an
arrow and ``E_{s(h)} X = psi E_{t(g)}`` for a link, so a universal-property
failure surfaces as an unsolvable system rather than a silent wrong answer.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, NamedTuple, Union

from . import nquiver as _nq
from . import nrep as _nrep
from . import rep as _rep
from .errors import InvalidDiagram
from .exactlin import (
    Matrix,
    block_diag,
    hstack,
    kernel_matrix,
    left_kernel_matrix,
    rank,
    solve_left,
    solve_matrix,
    vstack,
)
from .nrep import NRepMorphism, NRepresentation, link_pairs
from .quiver import Quiver, build_quiver
from .rep import Representation, RepMorphism

Obj = Union[Representation, NRepresentation]
Mor = Union[RepMorphism, NRepMorphism]


@dataclass(frozen=True)
class Diagram:
    shape: Quiver
    objects: Mapping[str, Obj]
    edges: Mapping[str, Mor]
    name: str = field(default="", compare=False)

    @property
    def is_nrep(self) -> bool:
        return isinstance(next(iter(self.objects.values())), NRepresentation)


def make_diagram(shape: Quiver, objects: Mapping[str, Obj], edges: Mapping[str, Mor], name: str = "") -> Diagram:
    """Check that every shape vertex and arrow is assigned and endpoints match."""
    if not shape.vertices:
        raise InvalidDiagram("diagram shape has no objects")
    for v in shape.vertices:
        if v not in objects:
            raise InvalidDiagram(f"no object assigned to shape vertex {v!r}")
    for a in shape.arrows:
        if a.label not in edges:
            raise InvalidDiagram(f"no morphism assigned to shape arrow {a.label!r}")
    extra = (set(objects) - set(shape.vertices)) | (set(edges) - set(shape.arrow_map))
    if extra:
        raise InvalidDiagram(f"assignments for names not in the shape: {sorted(extra)}")
    kinds = {type(o) for o in objects.values()}
    if len(kinds) != 1:
        raise InvalidDiagram("diagram mixes representations and n-representations")
    first = objects[shape.vertices[0]]
    for v in shape.vertices:
        o = objects[v]
        if o.field != first.field:
            raise InvalidDiagram("diagram objects over different fields")
        if _levels(o)[0].quiver.vertices != _levels(first)[0].quiver.vertices or len(_levels(o)) != len(_levels(first)):
            raise InvalidDiagram("diagram objects over different quivers")
    for a in shape.arrows:
        f = edges[a.label]
        if f.source != objects[a.source] or f.target != objects[a.target]:
            raise InvalidDiagram(f"morphism on shape arrow {a.label!r} does not match the assigned objects")
    return Diagram(shape, dict(objects), dict(edges), name)


def _levels(o: Obj) -> tuple[Representation, ...]:
    return o.comps if isinstance(o, NRepresentation) else (o,)


def _maps(f: Mor) -> tuple[RepMorphism, ...]:
    return f.maps if isinstance(f, NRepMorphism) else (f,)


@dataclass(frozen=True)
class Cone:
    """A limit cone (legs apex -> objects) or colimit cocone (legs objects -> apex).

    ``frames[m][v]`` is the embedding of the apex space into the product
    (limit) or the projection of the coproduct onto the apex space (colimit)
    at vertex ``v`` of level ``m + 1``.
    """

    kind: str
    diagram: Diagram
    apex: Obj
    legs: Mapping[str, Mor]
    frames: tuple


def _offsets(d: Diagram, level: int, v: str) -> tuple[dict[str, tuple[int, int]], int]:
    off, total = {}, 0
    for sv in d.shape.vertices:
        n = _levels(d.objects[sv])[level].dims[v]
        off[sv] = (total, n)
        total += n
    return off, total


def _block(d: Diagram, level: int, getter) -> Matrix:
    return block_diag([getter(_levels(d.objects[sv])[level]) for sv in d.shape.vertices], field=_field(d))


def _field(d: Diagram):
    return next(iter(d.objects.values())).field


def _constraint_matrix(d: Diagram, level: int, v: str) -> Matrix:
    """Rows ``(F h)_v x_D - x_{D'}`` for every edge ``h: D -> D'``."""
    k = _field(d)
    off, total = _offsets(d, level, v)
    blocks = []
    for a in d.shape.arrows:
        f = _maps(d.edges[a.label])[level].comps[v]
        rows = [[k.zero] * total for _ in range(f.rows)]
        s0, sn = off[a.source]
        t0, tn = off[a.target]
        for i in range(f.rows):
            for j in range(sn):
                rows[i][s0 + j] += f[i, j]
            rows[i][t0 + i] -= k.one
        blocks.append(Matrix.from_rows(rows, k, cols=total) if rows else Matrix.zeros(0, total, k))
    return vstack(blocks, cols=total, field=k)


def _relation_matrix(d: Diagram, level: int, v: str) -> Matrix:
    """Columns ``iota_{D'}(F h)_v x - iota_D x`` for every edge ``h: D -> D'``."""
    k = _field(d)
    off, total = _offsets(d, level, v)
    blocks = []
    for a in d.shape.arrows:
        f = _maps(d.edges[a.label])[level].comps[v]
        cols = [[k.zero] * total for _ in range(f.cols)]
        s0, sn = off[a.source]
        t0, tn = off[a.target]
        for j in range(f.cols):
            for i in range(f.rows):
                cols[j][t0 + i] += f[i, j]
            cols[j][s0 + j] -= k.one
        blocks.append(Matrix.from_columns(cols, k, rows=total) if cols else Matrix.zeros(total, 0, k))
    return hstack(blocks, rows=total, field=k)


def _solve_unique(a, b, left=False):
    x = solve_left(a, b, unique=True) if left else solve_matrix(a, b, unique=True)
    if x is None:
        raise AssertionError("induced map does not exist; the defining equation is inconsistent")
    return x


def _assemble(d: Diagram, level_reps: list[Representation], links: dict) -> Obj:
    if d.is_nrep:
        first = next(iter(d.objects.values()))
        return _nrep.validate_nrep(first.quivers, level_reps, links)
    return level_reps[0]


def _legs(d: Diagram, apex: Obj, frames, limit: bool) -> dict[str, Mor]:
    legs = {}
    for sv in d.shape.vertices:
        obj = d.objects[sv]
        per_level = []
        for level, frame in enumerate(frames):
            comps = {}
            for v, e in frame.items():
                off, _ = _offsets(d, level, v)
                start, n = off[sv]
                if limit:
                    comps[v] = e.submatrix(range(start, start + n), range(e.cols))
                else:
                    comps[v] = e.submatrix(range(e.rows), range(start, start + n))
            per_level.append(comps)
        if isinstance(apex, NRepresentation):
            legs[sv] = (_nrep.check_nrep_morphism(apex, obj, per_level) if limit
                        else _nrep.check_nrep_morphism(obj, apex, per_level))
        else:
            legs[sv] = (_rep.check_morphism(apex, obj, per_level[0]) if limit
                        else _rep.check_morphism(obj, apex, per_level[0]))
    return legs


def limit(d: Diagram) -> Cone:
    """Limit of a finite diagram with verified projections."""
    first = next(iter(d.objects.values()))
    k = first.field
    levels = _levels(first)
    frames, reps = [], []
    for level, base in enumerate(levels):
        q = base.quiver
        e = {v: kernel_matrix(_constraint_matrix(d, level, v)) for v in q.vertices}
        mats = {}
        for a in q.arrows:
            phi = _block(d, level, lambda r: r.mats[a.label])
            mats[a.label] = _solve_unique(e[a.target], phi @ e[a.source])
        reps.append(Representation(q, k, {v: e[v].cols for v in q.vertices}, mats))
        frames.append(e)
    links = {}
    if d.is_nrep:
        for m, g, h in link_pairs(first.quivers):
            key = (m, g.label, h.label)
            psi = block_diag([d.objects[sv].links[key] for sv in d.shape.vertices], field=k)
            links[key] = _solve_unique(frames[m - 1][h.source], psi @ frames[m - 2][g.target])
    apex = _assemble(d, reps, links)
    return Cone("limit", d, apex, _legs(d, apex, frames, True), tuple(frames))


def colimit(d: Diagram) -> Cone:
    """Colimit of a finite diagram with verified injections."""
    first = next(iter(d.objects.values()))
    k = first.field
    levels = _levels(first)
    frames, reps = [], []
    for level, base in enumerate(levels):
        q = base.quiver
        p = {v: left_kernel_matrix(_relation_matrix(d, level, v)) for v in q.vertices}
        mats = {}
        for a in q.arrows:
            phi = _block(d, level, lambda r: r.mats[a.label])
            mats[a.label] = _solve_unique(p[a.source], p[a.target] @ phi, left=True)
        reps.append(Representation(q, k, {v: p[v].rows for v in q.vertices}, mats))
        frames.append(p)
    links = {}
    if d.is_nrep:
        for m, g, h in link_pairs(first.quivers):
            key = (m, g.label, h.label)
            psi = block_diag([d.objects[sv].links[key] for sv in d.shape.vertices], field=k)
            links[key] = _solve_unique(frames[m - 2][g.target], frames[m - 1][h.source] @ psi, left=True)
    apex = _assemble(d, reps, links)
    return Cone("colimit", d, apex, _legs(d, apex, frames, False), tuple(frames))


class Mediation(NamedTuple):
    morphism: Mor
    freedom: int  # dimension of the solution space of the mediating system; 0 means unique


def mediate(cone: Cone, apex: Obj, legs: Mapping[str, Mor]) -> Mediation:
    """The unique morphism from a test cone into a limit (or out of a colimit
    into a test cocone).  Raises :class:`InvalidDiagram` if ``legs`` is not a
    (co)cone over the same diagram."""
    d = cone.diagram
    limit_kind = cone.kind == "limit"
    per_level = []
    freedom = 0
    for level, frame in enumerate(cone.frames):
        comps = {}
        for v, e in frame.items():
            parts = [_maps(legs[sv])[level].comps[v] for sv in d.shape.vertices]
            k = e.field
            if limit_kind:
                stacked = vstack(parts, cols=_levels(apex)[level].dims[v], field=k)
                x = solve_matrix(e, stacked)
                freedom += e.cols - rank(e)
            else:
                stacked = hstack(parts, rows=_levels(apex)[level].dims[v], field=k)
                x = solve_left(e, stacked)
                freedom += e.rows - rank(e)
            if x is None:
                raise InvalidDiagram(f"supplied legs do not form a {'cone' if limit_kind else 'cocone'} at vertex {v!r}")
            comps[v] = x
        per_level.append(comps)
    if isinstance(apex, NRepresentation):
        f = (_nrep.check_nrep_morphism(apex, cone.apex, per_level) if limit_kind
             else _nrep.check_nrep_morphism(cone.apex, apex, per_level))
    else:
        f = (_rep.check_morphism(apex, cone.apex, per_level[0]) if limit_kind
             else _rep.check_morphism(cone.apex, apex, per_level[0]))
    return Mediation(f, freedom)


# standard shapes

PARALLEL = build_quiver("parallel", ["s", "t"], [("f", "s", "t"), ("g", "s", "t")])
DISCRETE2 = build_quiver("discrete2", ["a", "b"], [])
SPAN = build_quiver("span", ["l", "c", "r"], [("p", "c", "l"), ("q", "c", "r")])
COSPAN = build_quiver("cospan", ["l", "c", "r"], [("p", "l", "c"), ("q", "r", "c")])


def _zero(a: Obj, b: Obj) -> Mor:
    if isinstance(a, NRepresentation):
        return _nrep.nrep_zero_morphism(a, b)
    return _rep.zero_morphism(a, b)


def equalizer(f: Mor, g: Mor) -> Cone:
    return limit(make_diagram(PARALLEL, {"s": f.source, "t": f.target}, {"f": f, "g": g}))


def coequalizer(f: Mor, g: Mor) -> Cone:
    return colimit(make_diagram(PARALLEL, {"s": f.source, "t": f.target}, {"f": f, "g": g}))


def product(a: Obj, b: Obj) -> Cone:
    return limit(make_diagram(DISCRETE2, {"a": a, "b": b}, {}))


def coproduct(a: Obj, b: Obj) -> Cone:
    return colimit(make_diagram(DISCRETE2, {"a": a, "b": b}, {}))


def pullback(f: Mor, g: Mor) -> Cone:
    return limit(make_diagram(COSPAN, {"l": f.source, "r": g.source, "c": f.target}, {"p": f, "q": g}))


def pushout(f: Mor, g: Mor) -> Cone:
    return colimit(make_diagram(SPAN, {"c": f.source, "l": f.target, "r": g.target}, {"p": f, "q": g}))


def kernel_nrep(f: Mor) -> tuple[Obj, Mor]:
    """Kernel as the equalizer of ``f`` and ``0``."""
    cone = equalizer(f, _zero(f.source, f.target))
    return cone.apex, cone.legs["s"]


def cokernel_nrep(f: Mor) -> tuple[Obj, Mor]:
    """Cokernel as the coequalizer of ``f`` and ``0``."""
    cone = coequalizer(f, _zero(f.source, f.target))
    return cone.apex, cone.legs["t"]


class AbelianWitness(NamedTuple):
    kernel: Obj
    kernel_inclusion: Mor
    cokernel: Obj
    cokernel_projection: Mor
    image: Obj
    image_inclusion: Mor
    coimage: Obj
    coimage_projection: Mor
    comparison: Mor  # coimage -> image

    @property
    def comparison_is_iso(self) -> bool:
        return self.comparison.is_iso()


def abelian_witness(f: Mor) -> AbelianWitness:
    """Kernel, cokernel, image, coimage and the canonical map coim -> im."""
    ker, ki = kernel_nrep(f)
    cok, cp = cokernel_nrep(f)
    im, ii = kernel_nrep(cp)
    coim, pc = cokernel_nrep(ki)
    per_level = []
    for fm, im_m, pc_m in zip(_maps(f), _maps(ii), _maps(pc)):
        comps = {}
        for v, mat in fm.comps.items():
            through_image = _solve_unique(im_m.comps[v], mat)
            comps[v] = _solve_unique(pc_m.comps[v], through_image, left=True)
        per_level.append(comps)
    if isinstance(f, NRepMorphism):
        comparison = _nrep.check_nrep_morphism(coim, im, per_level)
    else:
        comparison = _rep.check_morphism(coim, im, per_level[0])
    return AbelianWitness(ker, ki, cok, cp, im, ii, coim, pc, comparison)


# the glued-quiver route

def glue_diagram(d: Diagram, nq=None) -> Diagram:
    """Transport an n-representation diagram to the glued quiver."""
    first = next(iter(d.objects.values()))
    nq = nq or _nq.build_nquiver(first.quivers)
    objects = {sv: _nq.glue(o, nq) for sv, o in d.objects.items()}
    edges = {a: _nq.glue_morphism(f, nq) for a, f in d.edges.items()}
    return make_diagram(d.shape, objects, edges, d.name)


def glued_comparison(cone: Cone) -> tuple[Cone, Mor]:
    """Compute the same (co)limit on the glued quiver and the isomorphism
    relating it to the glued levelwise apex.

    For a limit the iso runs ``glue(apex) -> glued apex``; for a colimit
    ``glued apex -> glue(apex)``.
    """
    d = cone.diagram
    nq = _nq.build_nquiver(next(iter(d.objects.values())).quivers)
    gd = glue_diagram(d, nq)
    other = limit(gd) if cone.kind == "limit" else colimit(gd)
    legs = {sv: _nq.glue_morphism(f, nq) for sv, f in cone.legs.items()}
    iso = mediate(other, _nq.glue(cone.apex, nq), legs).morphism
    return other, iso
