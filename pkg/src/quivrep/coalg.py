"""Comonoid objects in the monoidal category of (n-)representations.

Tensor products live on ordered Kronecker bases, so the coherence maps are
explicit permutation matrices.  The associator and unitors turn out to be
identities on these bases; they are still generated from index maps and
composed into the checks so that the bookkeeping is visible and tested.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence, Union

from . import nquiver as _nq
from . import nrep as _nrep
from . import rep as _rep
from .errors import CounitLawFails, EndpointMismatch, NotCoassociative, QuivrepError, ShapeMismatch
from .exactlin import Field, Matrix, kron_product
from .nrep import NRepMorphism, NRepresentation
from .rep import Representation, RepMorphism

Obj = Union[Representation, NRepresentation]
Mor = Union[RepMorphism, NRepMorphism]


def permutation_matrix(n: int, index_map, field: Field) -> Matrix:
    """Matrix sending basis vector ``j`` to basis vector ``index_map(j)``."""
    rows = [[field.zero] * n for _ in range(n)]
    for j in range(n):
        rows[index_map(j)][j] = field.one
    return Matrix.from_rows(rows, field, cols=n)


def associator(a: int, b: int, c: int, field: Field) -> Matrix:
    """``(A (x) B) (x) C -> A (x) (B (x) C)`` on Kronecker bases."""

    def move(j):
        ij, k = divmod(j, c)
        i, jj = divmod(ij, b)
        return i * (b * c) + jj * c + k

    return permutation_matrix(a * b * c, move, field)


def left_unitor(d: int, field: Field) -> Matrix:
    """``I (x) C -> C``, where the unit has dimension 1."""
    return permutation_matrix(d, lambda j: j, field)


def right_unitor(d: int, field: Field) -> Matrix:
    """``C (x) I -> C``."""
    return permutation_matrix(d, lambda j: j, field)


def swap_middle(a: int, b: int, c: int, d: int, field: Field) -> Matrix:
    """``(A (x) B) (x) (C (x) D) -> (A (x) C) (x) (B (x) D)``."""

    def move(j):
        ab, cd = divmod(j, c * d)
        i, jj = divmod(ab, b)
        k, l = divmod(cd, d)
        return (i * c + k) * (b * d) + jj * d + l

    return permutation_matrix(a * b * c * d, move, field)


def _levels(o: Obj):
    return o.comps if isinstance(o, NRepresentation) else (o,)


def _maps(f: Mor):
    return f.maps if isinstance(f, NRepMorphism) else (f,)


def _tensor(a: Obj, b: Obj) -> Obj:
    return _nrep.nrep_tensor(a, b) if isinstance(a, NRepresentation) else _rep.tensor(a, b)


def _unit(o: Obj) -> Obj:
    if isinstance(o, NRepresentation):
        return _nrep.nrep_unit(o.quivers, o.field)
    return _rep.unit_rep(o.quiver, o.field)


def _check(source: Obj, target: Obj, comps) -> Mor:
    if isinstance(source, NRepresentation):
        return _nrep.check_nrep_morphism(source, target, comps)
    return _rep.check_morphism(source, target, comps[0])


@dataclass(frozen=True)
class CoalgebraObject:
    carrier: Obj
    comult: Mor
    counit: Mor
    name: str = ""


def _as_level_dicts(raw, source: Obj, target: Obj, what: str) -> list[dict]:
    if isinstance(raw, (RepMorphism, NRepMorphism)):
        if raw.source != source or raw.target != target:
            raise EndpointMismatch(f"{what} has the wrong source or target")
        return [dict(f.comps) for f in _maps(raw)]
    if isinstance(raw, Mapping):
        raw = [raw]
    raw = list(raw)
    src_levels, tgt_levels = _levels(source), _levels(target)
    if len(raw) != len(src_levels):
        raise EndpointMismatch(f"{what} has {len(raw)} levels, expected {len(src_levels)}")
    k = source.field
    out = []
    for m, (comps, s, t) in enumerate(zip(raw, src_levels, tgt_levels), start=1):
        level = {}
        for v in s.quiver.vertices:
            shape = (t.dims[v], s.dims[v])
            x = comps.get(v)
            if x is None:
                mat = Matrix.zeros(*shape, k)
            elif isinstance(x, Matrix):
                mat = x
            else:
                rows = [list(r) for r in x]
                mat = Matrix.from_rows(rows, k) if rows else Matrix.zeros(0, shape[1], k)
            if mat.shape != shape:
                raise ShapeMismatch((what, m, v), shape, mat.shape)
            level[v] = mat
        out.append(level)
    return out


def check_coalgebra(carrier: Obj, comult, counit, name: str = "") -> CoalgebraObject:
    """Verify the comonoid axioms, then that both structure maps are morphisms.

    The axioms are vertexwise matrix identities and are checked first (counit
    laws, then coassociativity), so a perturbed structure map is reported
    with the level and vertex where an axiom breaks.
    """
    k = carrier.field
    cc = _tensor(carrier, carrier)
    unit = _unit(carrier)
    delta = _as_level_dicts(comult, carrier, cc, "comult")
    eps = _as_level_dicts(counit, carrier, unit, "counit")
    levels = _levels(carrier)
    for m, c in enumerate(levels, start=1):
        for v in c.quiver.vertices:
            d = c.dims[v]
            ident = Matrix.identity(d, k)
            left = left_unitor(d, k) @ kron_product(eps[m - 1][v], ident) @ delta[m - 1][v]
            if left != ident:
                raise CounitLawFails("left", m, v)
            right = right_unitor(d, k) @ kron_product(ident, eps[m - 1][v]) @ delta[m - 1][v]
            if right != ident:
                raise CounitLawFails("right", m, v)
    for m, c in enumerate(levels, start=1):
        for v in c.quiver.vertices:
            d = c.dims[v]
            ident = Matrix.identity(d, k)
            lhs = associator(d, d, d, k) @ kron_product(delta[m - 1][v], ident) @ delta[m - 1][v]
            rhs = kron_product(ident, delta[m - 1][v]) @ delta[m - 1][v]
            if lhs != rhs:
                raise NotCoassociative(m, v)
    comult_m = _check(carrier, cc, delta)
    counit_m = _check(carrier, unit, eps)
    return CoalgebraObject(carrier, comult_m, counit_m, name)


def unit_coalgebra(quivers, field: Field) -> CoalgebraObject:
    """The unit object with its canonical comonoid structure.

    ``quivers`` is a tuple of quivers (n-representation case) or a single quiver.
    """
    if isinstance(quivers, (list, tuple)):
        carrier = _nrep.nrep_unit(quivers, field)
    else:
        carrier = _rep.unit_rep(quivers, field)
    ones = [{v: Matrix.identity(1, field) for v in c.quiver.vertices} for c in _levels(carrier)]
    return check_coalgebra(carrier, ones, ones)


def tensor_coalgebra(a: CoalgebraObject, b: CoalgebraObject) -> CoalgebraObject:
    """``a (x) b`` with comultiplication reindexed by the middle swap."""
    carrier = _tensor(a.carrier, b.carrier)
    k = carrier.field
    delta, eps = [], []
    for ca, cb, da, db, ea, eb in zip(_levels(a.carrier), _levels(b.carrier), _maps(a.comult), _maps(b.comult),
                                      _maps(a.counit), _maps(b.counit)):
        dl, el = {}, {}
        for v in ca.quiver.vertices:
            x, y = ca.dims[v], cb.dims[v]
            dl[v] = swap_middle(x, x, y, y, k) @ kron_product(da.comps[v], db.comps[v])
            el[v] = left_unitor(1, k) @ kron_product(ea.comps[v], eb.comps[v])
        delta.append(dl)
        eps.append(el)
    return check_coalgebra(carrier, delta, eps)


def glue_coalgebra(c: CoalgebraObject) -> CoalgebraObject:
    """Transport a coalgebra on an n-representation to the glued quiver and re-check it."""
    nq = _nq.build_nquiver(c.carrier.quivers)
    carrier = _nq.glue(c.carrier, nq)
    comult = _nq.glue_morphism(c.comult, nq).comps
    counit = _nq.glue_morphism(c.counit, nq).comps
    return check_coalgebra(carrier, comult, counit, c.name)


def coalgebra_verdict(carrier: Obj, comult, counit) -> str:
    """``"ok"`` or the name of the first failing check."""
    try:
        check_coalgebra(carrier, comult, counit)
    except CounitLawFails as exc:
        return f"CounitLawFails:{exc.side}"
    except NotCoassociative:
        return "NotCoassociative"
    except QuivrepError as exc:
        return type(exc).__name__
    return "ok"
