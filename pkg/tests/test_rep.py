import random

import pytest
from hypothesis import given, settings, strategies as st

from quivrep import rep
from quivrep.errors import FieldMismatch, NotCommuting, QuiverMismatch, ShapeMismatch, ZeroRepresentation
from quivrep.exactlin import QQ, Matrix, rank
from quivrep.quiver import build_quiver

from factories import F7, random_brick, random_hom, random_quiver, random_rep, scramble

Q = build_quiver("Q", ["1", "2"], [("a", "1", "2")])
QP = build_quiver("Qp", ["1", "2", "3", "4"], [("b1", "1", "3"), ("b2", "2", "3"), ("b3", "4", "3")])


def M(rows, k=QQ):
    return Matrix.from_rows(rows, k)


def line(c):
    return rep.validate_rep(Q, QQ, {"1": 1, "2": 1}, {"a": M([[c]])})


def test_validate_small_examples():
    r = line(1)
    assert r.dim_vector == (1, 1)
    m = rep.validate_rep(QP, QQ, {"1": 1, "2": 1, "3": 2, "4": 1},
                         {"b1": M([[1], [0]]), "b2": M([[0], [1]]), "b3": M([[1], [1]])})
    assert m.total_dim == 5


def test_missing_data_defaults_to_zero():
    r = rep.validate_rep(Q, QQ, {"2": 2})
    assert r.dims == {"1": 0, "2": 2}
    assert r.mats["a"].shape == (2, 0)


def test_shape_mismatch_names_the_arrow():
    with pytest.raises(ShapeMismatch) as info:
        rep.validate_rep(Q, QQ, {"1": 1, "2": 2}, {"a": M([[1]])})
    assert info.value.where == "a"
    assert info.value.expected == (2, 1)


def test_unknown_arrow_rejected():
    with pytest.raises(QuiverMismatch):
        rep.validate_rep(Q, QQ, {}, {"z": M([[1]])})


def test_morphism_between_lines():
    # into k ->0 k the vertex-2 component must vanish, out of it the vertex-1 one
    assert len(rep.hom_space(line(1), line(0))) == 1
    assert len(rep.hom_space(line(1), line(1))) == 1
    assert len(rep.hom_space(line(0), line(1))) == 1
    assert len(rep.hom_space(line(0), line(0))) == 2


def test_non_commuting_square_reports_arrow():
    with pytest.raises(NotCommuting) as info:
        rep.check_morphism(line(1), line(1), {"1": M([[1]]), "2": M([[2]])})
    assert info.value.arrow == "a"


def test_fields_must_agree():
    other = rep.validate_rep(Q, F7, {"1": 1, "2": 1}, {"a": M([[1]], F7)})
    with pytest.raises(FieldMismatch):
        rep.direct_sum(line(1), other)


def test_tensor_with_unit_is_same_dims():
    r = line(3)
    t = rep.tensor(r, rep.unit_rep(Q))
    assert t == r


def test_kernel_and_cokernel_of_projection():
    bp = rep.direct_sum(line(1), line(0))
    p = bp.projections[0]
    ker, inc = rep.kernel(p)
    cok, proj = rep.cokernel(p)
    assert ker.dim_vector == (1, 1)
    assert cok.is_zero()
    assert rep.compose(p, inc).is_zero()


def test_fitting_split_zero_raises():
    with pytest.raises(ZeroRepresentation):
        rep.fitting_split(rep.zero_rep(Q))


def test_fitting_split_brick_is_probably_indecomposable():
    res = rep.fitting_split(line(1))
    assert isinstance(res, rep.ProbablyIndecomposable)


def test_fitting_split_over_rationals():
    r = rep.direct_sum(line(1), line(1)).obj
    res = rep.fitting_split(r, seed=1)
    assert isinstance(res, rep.FittingSplit)
    assert res.first.dim_vector == res.second.dim_vector == (1, 1)
    assert res.iso.is_iso()


def test_fitting_split_is_seeded():
    rng = random.Random(5)
    q = random_quiver(rng, "R", 3, 3, min_vertices=2)
    r = scramble(rng, rep.direct_sum(random_brick(rng, q), random_brick(rng, q)).obj)
    a = rep.fitting_split(r, seed=11)
    b = rep.fitting_split(r, seed=11)
    assert type(a) is type(b)
    if isinstance(a, rep.FittingSplit):
        assert (a.trial, a.eigenvalue, a.first, a.second) == (b.trial, b.eigenvalue, b.first, b.second)


# properties

seeds = st.integers(0, 10**6)
fields = st.sampled_from([QQ, F7])


def _pair(seed, k):
    rng = random.Random(seed)
    q = random_quiver(rng, "R", 4, 4)
    return rng, q, random_rep(rng, q, k), random_rep(rng, q, k)


@settings(max_examples=40, deadline=None)
@given(seeds, fields)
def test_biproduct_identities(seed, k):
    _, _, a, b = _pair(seed, k)
    bp = rep.direct_sum(a, b)
    (ia, ib), (pa, pb) = bp.inclusions, bp.projections
    assert rep.compose(pa, ia) == rep.identity_morphism(a)
    assert rep.compose(pb, ib) == rep.identity_morphism(b)
    assert rep.compose(pb, ia).is_zero() and rep.compose(pa, ib).is_zero()
    total = rep.add_morphisms(rep.compose(ia, pa), rep.compose(ib, pb))
    assert total == rep.identity_morphism(bp.obj)


@settings(max_examples=40, deadline=None)
@given(seeds, fields)
def test_hom_basis_is_independent_morphisms(seed, k):
    _, _, a, b = _pair(seed, k)
    basis = rep.hom_space(a, b)
    for f in basis:
        rep.check_morphism(a, b, f.comps)
    if basis:
        flat = Matrix.from_rows([[x for v in a.quiver.vertices for x in f.comps[v].entries] for f in basis], k)
        assert rank(flat) == len(basis)


@settings(max_examples=40, deadline=None)
@given(seeds, fields)
def test_kernel_rank_nullity(seed, k):
    rng, _, a, b = _pair(seed, k)
    f = random_hom(rng, a, b)
    ker, inc = rep.kernel(f)
    im, _ = rep.image(f)
    cok, proj = rep.cokernel(f)
    for v in a.quiver.vertices:
        assert ker.dims[v] + im.dims[v] == a.dims[v]
        assert im.dims[v] + cok.dims[v] == b.dims[v]
    assert rep.compose(f, inc).is_zero()
    assert rep.compose(proj, f).is_zero()


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_tensor_is_functorial(seed):
    rng, q, a, b = _pair(seed, QQ)
    f = random_hom(rng, a, a)
    g = random_hom(rng, b, b)
    ff = random_hom(rng, a, a)
    gg = random_hom(rng, b, b)
    lhs = rep.compose(rep.tensor_morphism(ff, gg), rep.tensor_morphism(f, g))
    rhs = rep.tensor_morphism(rep.compose(ff, f), rep.compose(gg, g))
    assert lhs == rhs
