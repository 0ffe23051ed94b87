"""n-representations of quiver tuples.

Levels are numbered from 1.  A link is keyed ``(m, g, h)`` with ``2 <= m <= n``,
``g`` an arrow of level ``m - 1`` and ``h`` an arrow of level ``m``; it maps the
space at the target of ``g`` to the space at the source of ``h``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence

from . import rep as _rep
from .errors import (
    FieldMismatch,
    LevelCountTooSmall,
    LevelOutOfRange,
    MissingLink,
    NotCommutingLink,
    QuiverMismatch,
    ShapeMismatch,
    SourceTargetMismatch,
    TupleMismatch,
)
from .exactlin import Field, Matrix, block_diag, homogeneous_block_solutions, kron_product
from .quiver import Arrow, Quiver
from .rep import Biproduct, Representation, RepMorphism

LinkKey = tuple  # (level, arrow of level - 1, arrow of level)


def link_pairs(quivers: Sequence[Quiver]) -> Iterator[tuple[int, Arrow, Arrow]]:
    """Every consecutive arrow pair, in level then declaration order."""
    for m in range(2, len(quivers) + 1):
        for g in quivers[m - 2].arrows:
            for h in quivers[m - 1].arrows:
                yield m, g, h


@dataclass(frozen=True)
class NRepresentation:
    quivers: tuple[Quiver, ...]
    comps: tuple[Representation, ...]
    links: Mapping[LinkKey, Matrix]
    name: str = field(default="", compare=False)

    @property
    def n(self) -> int:
        return len(self.quivers)

    @property
    def field(self) -> Field:
        return self.comps[0].field

    def component(self, m: int) -> Representation:
        return self.comps[m - 1]

    def link(self, m: int, g: str, h: str) -> Matrix:
        return self.links[(m, g, h)]

    @property
    def dim_vectors(self) -> tuple[tuple[int, ...], ...]:
        return tuple(c.dim_vector for c in self.comps)

    @property
    def total_dim(self) -> int:
        return sum(c.total_dim for c in self.comps)

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def named(self, name: str) -> "NRepresentation":
        return NRepresentation(self.quivers, self.comps, self.links, name)


def _link_shape(comps: Sequence[Representation], m: int, g: Arrow, h: Arrow) -> tuple[int, int]:
    return comps[m - 1].dims[h.source], comps[m - 2].dims[g.target]


def validate_nrep(quivers: Sequence[Quiver], comps: Sequence[Representation], links: Mapping,
                  name: str = "") -> NRepresentation:
    """Check levels, fields and every link shape.

    A link whose shape has a zero dimension may be omitted; any other missing
    link raises :class:`MissingLink`.
    """
    quivers = tuple(quivers)
    comps = tuple(comps)
    if len(quivers) < 2:
        raise LevelCountTooSmall(f"an n-representation needs at least 2 levels, got {len(quivers)}")
    if len(comps) != len(quivers):
        raise TupleMismatch(f"{len(comps)} components for {len(quivers)} quivers")
    for m, (q, c) in enumerate(zip(quivers, comps), start=1):
        if not c.quiver.same_shape(q):
            raise QuiverMismatch(f"component {m} is over {c.quiver.name!r}, expected {q.name!r}")
    fld = comps[0].field
    if any(c.field != fld for c in comps):
        raise FieldMismatch("components over different fields")
    expected_keys = set()
    out = {}
    for m, g, h in link_pairs(quivers):
        key = (m, g.label, h.label)
        expected_keys.add(key)
        shape = _link_shape(comps, m, g, h)
        raw = links.get(key)
        if raw is None:
            if 0 in shape:
                out[key] = Matrix.zeros(*shape, fld)
                continue
            raise MissingLink(m, g.label, h.label)
        if isinstance(raw, Matrix):
            mat = raw
            if mat.field != fld:
                raise FieldMismatch(f"link {key} is over {mat.field.name}")
        else:
            rows = [list(r) for r in raw]
            mat = Matrix.from_rows(rows, fld) if rows else Matrix.zeros(0, shape[1], fld)
        if mat.shape != shape:
            raise ShapeMismatch(key, shape, mat.shape)
        out[key] = mat
    extra = set(links) - expected_keys
    if extra:
        raise TupleMismatch(f"links for unknown arrow pairs: {sorted(extra)}")
    return NRepresentation(quivers, comps, out, name)


def _same_tuple(a: NRepresentation, b: NRepresentation) -> None:
    if a.n != b.n or any(not x.same_shape(y) for x, y in zip(a.quivers, b.quivers)):
        raise TupleMismatch("n-representations over different quiver tuples")
    if a.field != b.field:
        raise FieldMismatch(f"n-representations over {a.field.name} and {b.field.name}")


def zero_nrep(quivers: Sequence[Quiver], fld: Field) -> NRepresentation:
    return validate_nrep(quivers, [_rep.zero_rep(q, fld) for q in quivers], {})


def nrep_unit(quivers: Sequence[Quiver], fld: Field) -> NRepresentation:
    """Unit object: the unit representation at every level, every link ``[1]``."""
    comps = [_rep.unit_rep(q, fld) for q in quivers]
    links = {(m, g.label, h.label): Matrix.identity(1, fld) for m, g, h in link_pairs(quivers)}
    return validate_nrep(quivers, comps, links)


# morphisms

@dataclass(frozen=True)
class NRepMorphism:
    source: NRepresentation
    target: NRepresentation
    maps: tuple[RepMorphism, ...]
    name: str = field(default="", compare=False)

    def component(self, m: int) -> RepMorphism:
        return self.maps[m - 1]

    @property
    def field(self) -> Field:
        return self.source.field

    def is_zero(self) -> bool:
        return all(f.is_zero() for f in self.maps)

    def is_iso(self) -> bool:
        return all(f.is_iso() for f in self.maps)


def link_failure(source: NRepresentation, target: NRepresentation, maps: Sequence[RepMorphism]):
    """First failing link square as ``(m, g, h, lhs, rhs)``, else ``None``."""
    for m, g, h in link_pairs(source.quivers):
        key = (m, g.label, h.label)
        lhs = target.links[key] @ maps[m - 2].comps[g.target]
        rhs = maps[m - 1].comps[h.source] @ source.links[key]
        if lhs != rhs:
            return m, g.label, h.label, lhs, rhs
    return None


def check_nrep_morphism(source: NRepresentation, target: NRepresentation, comps: Sequence,
                        name: str = "") -> NRepMorphism:
    """Verify every level's squares, then every link square.

    ``comps[m - 1]`` is either a :class:`RepMorphism` or a mapping from vertices
    of level ``m`` to matrices.
    """
    _same_tuple(source, target)
    if len(comps) != source.n:
        raise TupleMismatch(f"{len(comps)} component morphisms for {source.n} levels")
    maps = []
    for m, c in enumerate(comps, start=1):
        if isinstance(c, RepMorphism):
            if c.source != source.component(m) or c.target != target.component(m):
                raise SourceTargetMismatch(f"component morphism {m} has the wrong endpoints")
            maps.append(c)
        else:
            maps.append(_rep.check_morphism(source.component(m), target.component(m), c))
    bad = link_failure(source, target, maps)
    if bad:
        raise NotCommutingLink(*bad)
    return NRepMorphism(source, target, tuple(maps), name)


def nrep_identity(v: NRepresentation) -> NRepMorphism:
    return NRepMorphism(v, v, tuple(_rep.identity_morphism(c) for c in v.comps))


def nrep_zero_morphism(a: NRepresentation, b: NRepresentation) -> NRepMorphism:
    _same_tuple(a, b)
    return NRepMorphism(a, b, tuple(_rep.zero_morphism(x, y) for x, y in zip(a.comps, b.comps)))


def nrep_compose(g: NRepMorphism, f: NRepMorphism) -> NRepMorphism:
    """``g`` after ``f``, re-verified."""
    if f.target != g.source:
        raise SourceTargetMismatch("target of the first morphism is not the source of the second")
    maps = [_rep.compose(y, x) for x, y in zip(f.maps, g.maps)]
    return check_nrep_morphism(f.source, g.target, maps)


def nrep_add(f: NRepMorphism, g: NRepMorphism) -> NRepMorphism:
    if f.source != g.source or f.target != g.target:
        raise SourceTargetMismatch("cannot add morphisms with different endpoints")
    return NRepMorphism(f.source, f.target, tuple(_rep.add_morphisms(x, y) for x, y in zip(f.maps, g.maps)))


def nrep_scale(f: NRepMorphism, c) -> NRepMorphism:
    return NRepMorphism(f.source, f.target, tuple(_rep.scale_morphism(x, c) for x in f.maps))


# direct sum and tensor

def nrep_direct_sum(a: NRepresentation, b: NRepresentation) -> Biproduct:
    _same_tuple(a, b)
    sums = [_rep.direct_sum(x, y) for x, y in zip(a.comps, b.comps)]
    links = {k: block_diag([a.links[k], b.links[k]]) for k in a.links}
    s = validate_nrep(a.quivers, [bp.obj for bp in sums], links)
    ia = check_nrep_morphism(a, s, [bp.inclusions[0].comps for bp in sums])
    ib = check_nrep_morphism(b, s, [bp.inclusions[1].comps for bp in sums])
    pa = check_nrep_morphism(s, a, [bp.projections[0].comps for bp in sums])
    pb = check_nrep_morphism(s, b, [bp.projections[1].comps for bp in sums])
    return Biproduct(s, (ia, ib), (pa, pb))


def nrep_tensor(a: NRepresentation, b: NRepresentation) -> NRepresentation:
    """Levelwise tensor; links are Kronecker products of links."""
    _same_tuple(a, b)
    comps = [_rep.tensor(x, y) for x, y in zip(a.comps, b.comps)]
    links = {k: kron_product(a.links[k], b.links[k]) for k in a.links}
    return validate_nrep(a.quivers, comps, links)


def nrep_tensor_morphism(f: NRepMorphism, g: NRepMorphism) -> NRepMorphism:
    maps = tuple(_rep.tensor_morphism(x, y) for x, y in zip(f.maps, g.maps))
    return NRepMorphism(nrep_tensor(f.source, g.source), nrep_tensor(f.target, g.target), maps)


# level embeddings

def embed_component(j: int, r: Representation, quivers: Sequence[Quiver]) -> NRepresentation:
    """Place ``r`` at level ``j`` with zero components elsewhere and zero links."""
    quivers = tuple(quivers)
    if not 1 <= j <= len(quivers):
        raise LevelOutOfRange(f"level {j} outside 1..{len(quivers)}")
    if not r.quiver.same_shape(quivers[j - 1]):
        raise QuiverMismatch(f"representation is over {r.quiver.name!r}, level {j} is {quivers[j - 1].name!r}")
    comps = [r if m == j else _rep.zero_rep(q, r.field) for m, q in enumerate(quivers, start=1)]
    links = {}
    for m, g, h in link_pairs(quivers):
        links[(m, g.label, h.label)] = Matrix.zeros(*_link_shape(comps, m, g, h), r.field)
    return validate_nrep(quivers, comps, links)


def embed_morphism(j: int, f: RepMorphism, quivers: Sequence[Quiver]) -> NRepMorphism:
    a = embed_component(j, f.source, quivers)
    b = embed_component(j, f.target, quivers)
    maps = [f.comps if m == j else {} for m in range(1, len(quivers) + 1)]
    return check_nrep_morphism(a, b, maps)


def forget_component(v: NRepresentation, j: int) -> Representation:
    if not 1 <= j <= v.n:
        raise LevelOutOfRange(f"level {j} outside 1..{v.n}")
    return v.component(j)


def truncate(v: NRepresentation) -> NRepresentation:
    """Drop the top level and its links, leaving an (n-1)-representation."""
    if v.n <= 2:
        raise LevelCountTooSmall("truncating a 2-representation leaves a single representation")
    links = {k: mat for k, mat in v.links.items() if k[0] < v.n}
    return validate_nrep(v.quivers[:-1], v.comps[:-1], links)


# Hom spaces

def nrep_hom_space(a: NRepresentation, b: NRepresentation) -> list[NRepMorphism]:
    """A basis of the morphisms ``a -> b``."""
    _same_tuple(a, b)
    k = a.field
    blocks = []
    index = {}
    for m, (x, y) in enumerate(zip(a.comps, b.comps), start=1):
        for v in x.quiver.vertices:
            index[(m, v)] = len(blocks)
            blocks.append((y.dims[v], x.dims[v]))
    eqs = []
    for m, (x, y) in enumerate(zip(a.comps, b.comps), start=1):
        for arr in x.quiver.arrows:
            eqs.append([
                (index[(m, arr.target)], Matrix.identity(y.dims[arr.target], k), x.mats[arr.label]),
                (index[(m, arr.source)], -y.mats[arr.label], Matrix.identity(x.dims[arr.source], k)),
            ])
    for m, g, h in link_pairs(a.quivers):
        key = (m, g.label, h.label)
        eqs.append([
            (index[(m, h.source)], Matrix.identity(b.comps[m - 1].dims[h.source], k), a.links[key]),
            (index[(m - 1, g.target)], -b.links[key], Matrix.identity(a.comps[m - 2].dims[g.target], k)),
        ])
    out = []
    for sol in homogeneous_block_solutions(k, blocks, eqs):
        maps = []
        for m, x in enumerate(a.comps, start=1):
            maps.append({v: sol[index[(m, v)]] for v in x.quiver.vertices})
        out.append(check_nrep_morphism(a, b, maps))
    return out

