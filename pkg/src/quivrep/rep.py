"""Representations of a single quiver and their morphisms."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, NamedTuple

from .errors import (
    FieldMismatch,
    NotCommuting,
    QuiverMismatch,
    ShapeMismatch,
    SourceTargetMismatch,
    ZeroRepresentation,
)
from .exactlin import (
    Field,
    Matrix,
    QQ,
    column_space,
    homogeneous_block_solutions,
    hstack,
    is_invertible,
    kernel_matrix,
    kron_product,
    left_kernel_matrix,
    block_diag,
    rank,
    solve_left,
    solve_matrix,
    vstack,
)
from .quiver import Quiver


@dataclass(frozen=True)
class Representation:
    quiver: Quiver
    field: Field
    dims: Mapping[str, int]
    mats: Mapping[str, Matrix]
    name: str = field(default="", compare=False)

    def dim(self, v: str) -> int:
        return self.dims[v]

    @property
    def dim_vector(self) -> tuple[int, ...]:
        return tuple(self.dims[v] for v in self.quiver.vertices)

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def named(self, name: str) -> "Representation":
        return Representation(self.quiver, self.field, self.dims, self.mats, name)


def validate_rep(quiver: Quiver, field: Field, dims: Mapping[str, int], mats: Mapping | None = None,
                 name: str = "") -> Representation:
    """Shape-check raw data and build a :class:`Representation`.

    Unlisted vertices get dimension 0 and unlisted arrows the zero map.
    """
    mats = dict(mats or {})
    for v in dims:
        if v not in quiver.vertex_index:
            raise QuiverMismatch(f"vertex {v!r} is not a vertex of quiver {quiver.name!r}")
    for a in mats:
        if a not in quiver.arrow_map:
            raise QuiverMismatch(f"arrow {a!r} is not an arrow of quiver {quiver.name!r}")
    d = {}
    for v in quiver.vertices:
        n = int(dims.get(v, 0))
        if n < 0:
            raise ValueError(f"negative dimension at vertex {v!r}")
        d[v] = n
    out = {}
    for a in quiver.arrows:
        expected = (d[a.target], d[a.source])
        if a.label not in mats:
            out[a.label] = Matrix.zeros(*expected, field)
            continue
        raw = mats[a.label]
        if isinstance(raw, Matrix):
            m = raw
            if m.field != field:
                raise FieldMismatch(f"map {a.label!r} is over {m.field.name}, expected {field.name}")
        else:
            rows = [list(r) for r in raw]
            if not rows:
                m = Matrix.zeros(0, expected[1], field)
            else:
                m = Matrix.from_rows(rows, field)
        if m.shape != expected:
            raise ShapeMismatch(a.label, expected, m.shape)
        out[a.label] = m
    return Representation(quiver, field, d, out, name)


def zero_rep(quiver: Quiver, field: Field = QQ) -> Representation:
    return validate_rep(quiver, field, {})


def unit_rep(quiver: Quiver, field: Field = QQ) -> Representation:
    """The tensor unit: a line at each vertex, identity maps on arrows."""
    return validate_rep(quiver, field, {v: 1 for v in quiver.vertices},
                        {a.label: Matrix.identity(1, field) for a in quiver.arrows})


def simple_rep(quiver: Quiver, vertex: str, field: Field = QQ) -> Representation:
    return validate_rep(quiver, field, {vertex: 1})


def _same_category(a: Representation, b: Representation) -> None:
    if not a.quiver.same_shape(b.quiver):
        raise QuiverMismatch(f"representations over different quivers {a.quiver.name!r} and {b.quiver.name!r}")
    if a.field != b.field:
        raise FieldMismatch(f"representations over {a.field.name} and {b.field.name}")


@dataclass(frozen=True)
class RepMorphism:
    source: Representation
    target: Representation
    comps: Mapping[str, Matrix]
    name: str = field(default="", compare=False)

    def __getitem__(self, v: str) -> Matrix:
        return self.comps[v]

    @property
    def quiver(self) -> Quiver:
        return self.source.quiver

    @property
    def field(self) -> Field:
        return self.source.field

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.comps.values())

    def is_iso(self) -> bool:
        return all(is_invertible(m) for m in self.comps.values())

    def ranks(self) -> dict[str, int]:
        return {v: rank(m) for v, m in self.comps.items()}


def commuting_failure(source: Representation, target: Representation, comps: Mapping[str, Matrix]):
    """First arrow whose square fails, as ``(arrow, lhs, rhs)``, else ``None``."""
    for a in source.quiver.arrows:
        lhs = comps[a.target] @ source.mats[a.label]
        rhs = target.mats[a.label] @ comps[a.source]
        if lhs != rhs:
            return a.label, lhs, rhs
    return None


def check_morphism(source: Representation, target: Representation, comps: Mapping, name: str = "") -> RepMorphism:
    """Verify the commuting squares and return the morphism.

    Raises :class:`NotCommuting` at the first arrow (declaration order) whose
    square fails.
    """
    _same_category(source, target)
    out = {}
    for v in source.quiver.vertices:
        expected = (target.dims[v], source.dims[v])
        raw = comps.get(v)
        if raw is None:
            m = Matrix.zeros(*expected, source.field)
        elif isinstance(raw, Matrix):
            m = raw
            if m.field != source.field:
                raise FieldMismatch(f"component at {v!r} is over {m.field.name}")
        else:
            rows = [list(r) for r in raw]
            m = Matrix.from_rows(rows, source.field) if rows else Matrix.zeros(0, expected[1], source.field)
        if m.shape != expected:
            raise ShapeMismatch(v, expected, m.shape)
        out[v] = m
    for v in comps:
        if v not in source.quiver.vertex_index:
            raise QuiverMismatch(f"component at unknown vertex {v!r}")
    bad = commuting_failure(source, target, out)
    if bad:
        raise NotCommuting(*bad)
    return RepMorphism(source, target, out, name)


def identity_morphism(r: Representation) -> RepMorphism:
    return RepMorphism(r, r, {v: Matrix.identity(r.dims[v], r.field) for v in r.quiver.vertices})


def zero_morphism(a: Representation, b: Representation) -> RepMorphism:
    _same_category(a, b)
    return RepMorphism(a, b, {v: Matrix.zeros(b.dims[v], a.dims[v], a.field) for v in a.quiver.vertices})


def compose(g: RepMorphism, f: RepMorphism) -> RepMorphism:
    """``g`` after ``f``."""
    if f.target != g.source:
        raise SourceTargetMismatch("target of the first morphism is not the source of the second")
    return check_morphism(f.source, g.target, {v: g.comps[v] @ f.comps[v] for v in f.quiver.vertices})


def add_morphisms(f: RepMorphism, g: RepMorphism) -> RepMorphism:
    if f.source != g.source or f.target != g.target:
        raise SourceTargetMismatch("cannot add morphisms with different endpoints")
    return RepMorphism(f.source, f.target, {v: f.comps[v] + g.comps[v] for v in f.comps})


def scale_morphism(f: RepMorphism, c) -> RepMorphism:
    return RepMorphism(f.source, f.target, {v: m.scale(c) for v, m in f.comps.items()})


def linear_combination(coeffs, morphisms, source: Representation, target: Representation) -> RepMorphism:
    out = zero_morphism(source, target)
    for c, f in zip(coeffs, morphisms):
        if c:
            out = add_morphisms(out, scale_morphism(f, c))
    return out


# direct sums

class Biproduct(NamedTuple):
    obj: object
    inclusions: tuple
    projections: tuple


def direct_sum(a: Representation, b: Representation) -> Biproduct:
    """Vertexwise direct sum with block-diagonal arrow maps, plus the canonical
    injections and projections."""
    _same_category(a, b)
    q, k = a.quiver, a.field
    dims = {v: a.dims[v] + b.dims[v] for v in q.vertices}
    mats = {x.label: block_diag([a.mats[x.label], b.mats[x.label]]) for x in q.arrows}
    s = Representation(q, k, dims, mats)
    ia, ib, pa, pb = {}, {}, {}, {}
    for v in q.vertices:
        da, db = a.dims[v], b.dims[v]
        ia[v] = vstack([Matrix.identity(da, k), Matrix.zeros(db, da, k)])
        ib[v] = vstack([Matrix.zeros(da, db, k), Matrix.identity(db, k)])
        pa[v] = hstack([Matrix.identity(da, k), Matrix.zeros(da, db, k)])
        pb[v] = hstack([Matrix.zeros(db, da, k), Matrix.identity(db, k)])
    return Biproduct(
        s,
        (check_morphism(a, s, ia), check_morphism(b, s, ib)),
        (check_morphism(s, a, pa), check_morphism(s, b, pb)),
    )


# tensor

def tensor(a: Representation, b: Representation) -> Representation:
    """Pointwise tensor product on Kronecker bases."""
    _same_category(a, b)
    q = a.quiver
    return Representation(
        q, a.field,
        {v: a.dims[v] * b.dims[v] for v in q.vertices},
        {x.label: kron_product(a.mats[x.label], b.mats[x.label]) for x in q.arrows},
    )


def tensor_morphism(f: RepMorphism, g: RepMorphism) -> RepMorphism:
    return RepMorphism(
        tensor(f.source, g.source), tensor(f.target, g.target),
        {v: kron_product(f.comps[v], g.comps[v]) for v in f.quiver.vertices},
    )


# sub-objects and quotients

def subrepresentation(r: Representation, basis: Mapping[str, Matrix]) -> tuple[Representation, RepMorphism]:
    """Subrepresentation spanned by the (independent) columns of ``basis[v]``.

    The arrow maps are the unique solutions of ``B_t X = phi B_s``; raises
    ``ValueError`` if the subspaces are not closed under the arrow maps.
    """
    q, k = r.quiver, r.field
    mats = {}
    for a in q.arrows:
        x = solve_matrix(basis[a.target], r.mats[a.label] @ basis[a.source], unique=True)
        if x is None:
            raise ValueError(f"subspaces are not invariant under arrow {a.label!r}")
        mats[a.label] = x
    sub = Representation(q, k, {v: basis[v].cols for v in q.vertices}, mats)
    return sub, check_morphism(sub, r, dict(basis))


def quotient_representation(r: Representation, proj: Mapping[str, Matrix]) -> tuple[Representation, RepMorphism]:
    """Quotient along the surjections ``proj[v]``; arrow maps solve ``X P_s = P_t phi``."""
    q, k = r.quiver, r.field
    mats = {}
    for a in q.arrows:
        x = solve_left(proj[a.source], proj[a.target] @ r.mats[a.label], unique=True)
        if x is None:
            raise ValueError(f"kernel is not invariant under arrow {a.label!r}")
        mats[a.label] = x
    quo = Representation(q, k, {v: proj[v].rows for v in q.vertices}, mats)
    return quo, check_morphism(r, quo, dict(proj))


def kernel(f: RepMorphism) -> tuple[Representation, RepMorphism]:
    return subrepresentation(f.source, {v: kernel_matrix(m) for v, m in f.comps.items()})


def cokernel(f: RepMorphism) -> tuple[Representation, RepMorphism]:
    return quotient_representation(f.target, {v: left_kernel_matrix(m) for v, m in f.comps.items()})


def image(f: RepMorphism) -> tuple[Representation, RepMorphism]:
    return subrepresentation(f.target, {v: column_space(m) for v, m in f.comps.items()})


# Hom spaces

def hom_equations(a: Representation, b: Representation):
    """Unknown shapes and equations whose solutions are the morphisms ``a -> b``."""
    q, k = a.quiver, a.field
    vi = q.vertex_index
    blocks = [(b.dims[v], a.dims[v]) for v in q.vertices]
    eqs = []
    for x in q.arrows:
        s, t = vi[x.source], vi[x.target]
        eqs.append([
            (t, Matrix.identity(b.dims[x.target], k), a.mats[x.label]),
            (s, -b.mats[x.label], Matrix.identity(a.dims[x.source], k)),
        ])
    return blocks, eqs


def hom_space(a: Representation, b: Representation) -> list[RepMorphism]:
    """A basis of ``Hom(a, b)``; its length is the dimension."""
    _same_category(a, b)
    blocks, eqs = hom_equations(a, b)
    out = []
    for sol in homogeneous_block_solutions(a.field, blocks, eqs):
        out.append(check_morphism(a, b, dict(zip(a.quiver.vertices, sol))))
    return out


# Fitting decomposition

@dataclass(frozen=True)
class FittingSplit:
    """``iso`` is an isomorphism ``first (+) second -> r``."""

    first: Representation
    second: Representation
    iso: RepMorphism
    trial: int
    eigenvalue: object


@dataclass(frozen=True)
class ProbablyIndecomposable:
    trials: int
    reason: str


DEFAULT_MAX_BITS = 4096


def _charpoly(m: Matrix) -> list:
    """Characteristic polynomial coefficients, highest degree first (Faddeev-LeVerrier)."""
    n = m.rows
    k = m.field
    coeffs = [k.one]
    acc = Matrix.zeros(n, n, k)
    ident = Matrix.identity(n, k)
    for i in range(1, n + 1):
        acc = m @ (acc + ident.scale(coeffs[-1]))
        tr = sum((acc[j, j] for j in range(n)), k.zero)
        c = k(-tr) * k.inv(k(i)) if k.p else -tr / i
        coeffs.append(k(c))
    return coeffs


def _divisors(n: int, cap: int = 10**6) -> list[int] | None:
    n = abs(n)
    out = []
    d = 1
    while d * d <= n:
        if d > cap:
            return None
        if n % d == 0:
            out.extend({d, n // d})
        d += 1
    return out


def _rational_roots(coeffs: list) -> set:
    coeffs = [Fraction(c) for c in coeffs]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    roots = {Fraction(0)} if len(coeffs) > 0 else set()
    if len(coeffs) <= 1:
        return roots
    lcm = 1
    for c in coeffs:
        lcm = lcm * c.denominator // _gcd(lcm, c.denominator)
    ints = [int(c * lcm) for c in coeffs]
    lead, const = _divisors(ints[0]), _divisors(ints[-1])
    if lead is None or const is None:
        return roots
    for p in const:
        for q in lead:
            for cand in (Fraction(p, q), Fraction(-p, q)):
                val = 0
                for c in ints:
                    val = val * cand + c
                if val == 0:
                    roots.add(cand)
    return roots


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def _eigenvalue_candidates(f: RepMorphism) -> list:
    k = f.field
    mats = [m for m in f.comps.values() if m.rows]
    if k.p:
        if k.p <= 4096:
            found = set()
            for lam in range(k.p):
                for m in mats:
                    if rank(m - Matrix.identity(m.rows, k).scale(lam)) < m.rows:
                        found.add(lam)
                        break
            return sorted(found)
        return sorted({0} | {m[i, i] for m in mats for i in range(m.rows)})
    found = set()
    for m in mats:
        found |= _rational_roots(_charpoly(m))
    return sorted(found)


def _random_scalar(rng: random.Random, k: Field):
    return k(rng.randrange(k.p)) if k.p else k(rng.randint(-3, 3))


def fitting_split(r: Representation, trials: int = 20, seed: int = 0,
                  max_bits: int = DEFAULT_MAX_BITS) -> FittingSplit | ProbablyIndecomposable:
    """Try to split ``r`` via Fitting's lemma on seeded random endomorphisms.

    For a random ``f`` in ``End(r)`` and each eigenvalue ``c`` of ``f`` in the
    ground field, ``r = ker g^N (+) im g^N`` with ``g = f - c`` and ``N`` the
    total dimension.  A nontrivial split is returned with an explicit
    isomorphism; otherwise the verdict is only probabilistic.
    """
    if r.is_zero():
        raise ZeroRepresentation("cannot split the zero representation")
    if r.total_dim == 1:
        return ProbablyIndecomposable(0, "total dimension 1")
    basis = hom_space(r, r)
    if len(basis) == 1:
        return ProbablyIndecomposable(0, "endomorphism space is one-dimensional")
    k = r.field
    q = r.quiver
    n = r.total_dim
    rng = random.Random(seed)
    for trial in range(trials):
        coeffs = [_random_scalar(rng, k) for _ in basis]
        f = linear_combination(coeffs, basis, r, r)
        for lam in _eigenvalue_candidates(f):
            g = {v: f.comps[v] - Matrix.identity(r.dims[v], k).scale(lam) for v in q.vertices}
            gn = {v: m.power(n, max_bits) for v, m in g.items()}
            kern = {v: kernel_matrix(m) for v, m in gn.items()}
            img = {v: column_space(m) for v, m in gn.items()}
            kd = sum(m.cols for m in kern.values())
            if kd == 0 or kd == n:
                continue
            first, _ = subrepresentation(r, kern)
            second, _ = subrepresentation(r, img)
            total = direct_sum(first, second).obj
            iso = check_morphism(total, r, {v: hstack([kern[v], img[v]], rows=r.dims[v], field=k) for v in q.vertices})
            if not iso.is_iso():
                raise AssertionError("Fitting decomposition did not produce an isomorphism")
            return FittingSplit(first, second, iso, trial, lam)
    return ProbablyIndecomposable(trials, "no endomorphism produced a nontrivial Fitting decomposition")
