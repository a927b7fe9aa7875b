import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from localcoeff.burnside import (BurnsideCategory, FiniteGSet, MackeyFunctor, Span, SpanHom, box_product,
                                 burnside_green, burnside_hom_basis, burnside_ring_product, green_check,
                                 random_mackey, span_canonical_form, span_compose, span_from_key,
                                 unit_action_map)
from localcoeff.errors import BadParams, GroupMismatch, ObjectMismatch
from localcoeff.fieldlin import FieldMatrix
from localcoeff.groupring import FiniteGroup


def hom_rank_oracle(b, c):
    """Count classes of pairs (H, z in (b x c)^H) under conjugation by the Burnside lemma."""
    g = b.group
    bc = b.product(c)
    pairs = []
    for h in g.subgroups:
        hs = sorted(h)
        for z in range(bc.size):
            if all(bc.perms[x, z] == z for x in hs):
                pairs.append((frozenset(h), z))
    fixed = 0
    for a in range(g.order):
        for h, z in pairs:
            if g.conjugate(a, h) == h and bc.perms[a, z] == z:
                fixed += 1
    assert fixed % g.order == 0
    return fixed // g.order


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_hom_basis_sizes_cyclic(p):
    g = FiniteGroup.cyclic(p)
    free, pt = FiniteGSet.orbit(g, [g.identity]), FiniteGSet.point(g)
    assert len(burnside_hom_basis(free, free)) == p
    assert len(burnside_hom_basis(pt, pt)) == 2
    for b in (free, pt):
        for c in (free, pt):
            assert len(burnside_hom_basis(b, c)) == hom_rank_oracle(b, c)


def test_hom_basis_matches_oracle_s3():
    g = FiniteGroup.from_permutations([(1, 0, 2), (1, 2, 0)])
    cat = BurnsideCategory(g)
    for i in range(cat.n_orbits):
        for j in range(cat.n_orbits):
            assert len(cat.basis(i, j)) == hom_rank_oracle(cat.orbits[i], cat.orbits[j])


def test_hom_with_empty_set_is_zero():
    g = FiniteGroup.cyclic(3)
    e, pt = FiniteGSet.empty(g), FiniteGSet.point(g)
    assert burnside_hom_basis(e, pt) == [] and burnside_hom_basis(pt, e) == []


def test_compose_examples():
    p = 3
    g = FiniteGroup.cyclic(p)
    free, pt = FiniteGSet.orbit(g, [g.identity]), FiniteGSet.point(g)
    idx = np.arange(p)
    zero = np.zeros(p, dtype=np.int64)
    to_pt = Span(free, free, pt, idx, zero)            # C_p <- C_p -> pt
    from_pt = Span(pt, free, free, zero, idx)          # pt <- C_p -> C_p
    # pulling back over the point gives C_p x C_p: p free orbits, one per basis span of B(C_p, C_p)
    comp = span_compose(from_pt, to_pt)
    assert comp.apex.size == p * p and len(comp.apex.orbits()) == p
    assert span_canonical_form(comp) == {k: 1 for k in burnside_hom_basis(free, free)}
    # pulling back over C_p gives a single free orbit
    back = span_compose(to_pt, from_pt)
    assert span_canonical_form(back) == span_canonical_form(Span(pt, free, pt, zero, zero))
    # identity span is a unit
    s = span_from_key(burnside_hom_basis(free, pt)[0], free, pt)
    assert span_canonical_form(span_compose(s, Span.identity(free))) == span_canonical_form(s)
    assert span_canonical_form(span_compose(Span.identity(pt), s)) == span_canonical_form(s)
    # two projections compose to a projection
    pr = Span.from_map(zero, free, pt)
    assert span_canonical_form(span_compose(Span.identity(pt), span_compose(pr, Span.identity(free)))) == \
        span_canonical_form(pr)
    with pytest.raises(ObjectMismatch):
        span_compose(s, s)


def test_burnside_ring_product():
    for p in (2, 3, 5):
        g = FiniteGroup.cyclic(p)
        free, pt = FiniteGSet.orbit(g, [g.identity]), FiniteGSet.point(g)
        zero = np.zeros(p, dtype=np.int64)
        one = SpanHom.from_span(Span.identity(pt))
        x = SpanHom.from_span(Span(pt, free, pt, zero, zero))
        assert burnside_ring_product(one, x) == x and burnside_ring_product(x, one) == x
        assert burnside_ring_product(x, x) == x.scale(p)
        assert burnside_ring_product(x + one, x + one) == x.scale(p + 2) + one
        with pytest.raises(ObjectMismatch):
            burnside_ring_product(SpanHom.from_span(Span.identity(free)), x)


def relabel(s: Span, sigma):
    """Same span with apex point x renamed sigma[x]."""
    inv = np.argsort(sigma)
    perms = sigma[s.apex.perms[:, inv]]
    return Span(s.source, FiniteGSet(s.apex.group, perms), s.target, s.left[inv], s.right[inv])


def union_span(parts):
    b, c = parts[0].source, parts[0].target
    apex = parts[0].apex
    left, right = [parts[0].left], [parts[0].right]
    for s in parts[1:]:
        apex = apex.disjoint_union(s.apex)
        left.append(s.left)
        right.append(s.right)
    return Span(b, apex, c, np.concatenate(left), np.concatenate(right))


def random_span(rng, cat, b, c):
    basis = burnside_hom_basis(b, c)
    keys = [basis[int(rng.integers(0, len(basis)))] for _ in range(int(rng.integers(1, 3)))]
    return union_span([span_from_key(k, b, c) for k in keys])


def random_gset(rng, cat):
    out = cat.orbits[int(rng.integers(0, cat.n_orbits))]
    if rng.random() < 0.3:
        out = out.disjoint_union(cat.orbits[int(rng.integers(0, cat.n_orbits))])
    return out


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31 - 1), st.sampled_from([2, 3]))
def test_composition_associative(seed, p):
    rng = np.random.default_rng(seed)
    cat = BurnsideCategory(FiniteGroup.cyclic(p))
    a, b, c, d = (random_gset(rng, cat) for _ in range(4))
    s1, s2, s3 = random_span(rng, cat, a, b), random_span(rng, cat, b, c), random_span(rng, cat, c, d)
    left = span_compose(s3, span_compose(s2, s1))
    right = span_compose(span_compose(s3, s2), s1)
    assert span_canonical_form(left) == span_canonical_form(right)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31 - 1))
def test_canonical_form_invariant_under_relabelling(seed):
    rng = np.random.default_rng(seed)
    cat = BurnsideCategory(FiniteGroup.cyclic(3))
    b, c = random_gset(rng, cat), random_gset(rng, cat)
    parts = [random_span(rng, cat, b, c) for _ in range(2)]
    s = union_span(parts)
    t = relabel(s, rng.permutation(s.apex.size))
    assert span_canonical_form(s) == span_canonical_form(t)
    assert span_canonical_form(s) == span_canonical_form(union_span(parts[::-1]))


def test_distinct_basis_spans_not_isomorphic():
    cat = BurnsideCategory(FiniteGroup.cyclic(3))
    for i in range(2):
        for j in range(2):
            keys = cat.basis(i, j)
            forms = [span_canonical_form(span_from_key(k, cat.orbits[i], cat.orbits[j])) for k in keys]
            assert len({tuple(sorted(f.items())) for f in forms}) == len(keys)


def test_every_span_factors_through_embeddings():
    for g in (FiniteGroup.cyclic(3), FiniteGroup.from_permutations([(1, 0, 2), (1, 2, 0)])):
        cat = BurnsideCategory(g)
        for i in range(cat.n_orbits):
            for j in range(cat.n_orbits):
                for k in cat.basis(i, j):
                    s = span_from_key(k, cat.orbits[i], cat.orbits[j])
                    back = Span.from_map_reversed(s.left, s.apex, s.source)
                    fwd = Span.from_map(s.right, s.apex, s.target)
                    assert span_canonical_form(span_compose(fwd, back)) == {k: 1}


def test_span_legs_checked():
    g = FiniteGroup.cyclic(3)
    free, pt = FiniteGSet.orbit(g, [g.identity]), FiniteGSet.point(g)
    with pytest.raises(BadParams):
        Span(pt, pt, free, [0], [0])


@pytest.mark.parametrize("p,q", [(2, 3), (3, 5), (5, 7), (3, 3)])
def test_burnside_functor_restriction_transfer(p, q):
    cat = BurnsideCategory(FiniteGroup.cyclic(p))
    a = MackeyFunctor.burnside(cat, q)
    a.check()
    assert a.dims == [1, 2]
    rt = a.restriction(0, 1) @ a.transfer(0, 1)
    assert rt == FieldMatrix([[p]], q)


def test_representables_are_functors():
    for g in (FiniteGroup.cyclic(3), FiniteGroup.from_permutations([(1, 0, 2), (1, 2, 0)])):
        cat = BurnsideCategory(g)
        for d in range(cat.n_orbits):
            MackeyFunctor.representable(cat, d, 5).check()


@pytest.mark.parametrize("p,q", [(2, 3), (3, 5), (3, 3), (5, 3)])
def test_box_of_burnside_with_itself(p, q):
    cat = BurnsideCategory(FiniteGroup.cyclic(p))
    a = MackeyFunctor.burnside(cat, q)
    assert box_product(a, a).functor.dims == a.dims


def test_box_with_zero():
    cat = BurnsideCategory(FiniteGroup.cyclic(3))
    a = MackeyFunctor.burnside(cat, 5)
    z = MackeyFunctor.zero(cat, 5)
    assert box_product(a, z).functor.dims == [0, 0]
    assert box_product(z, a).functor.dims == [0, 0]


def test_box_mismatch():
    a3 = MackeyFunctor.burnside(BurnsideCategory(FiniteGroup.cyclic(3)), 5)
    a2 = MackeyFunctor.burnside(BurnsideCategory(FiniteGroup.cyclic(2)), 5)
    with pytest.raises(GroupMismatch):
        box_product(a3, a2)


@settings(max_examples=5, deadline=None)
@given(st.integers(0, 2**31 - 1), st.sampled_from([(2, 3), (3, 5), (3, 3)]))
def test_burnside_unit_law(seed, pq):
    p, q = pq
    rng = np.random.default_rng(seed)
    cat = BurnsideCategory(FiniteGroup.cyclic(p))
    m = random_mackey(cat, q, rng)
    m.check()
    box = box_product(MackeyFunctor.burnside(cat, q), m)
    assert box.functor.dims == m.dims
    unit = unit_action_map(box)
    for c in range(cat.n_orbits):
        assert unit[c].rank() == m.dims[c]


@settings(max_examples=5, deadline=None)
@given(st.integers(0, 2**31 - 1))
def test_box_dims_symmetric(seed):
    rng = np.random.default_rng(seed)
    cat = BurnsideCategory(FiniteGroup.cyclic(3))
    m, n = random_mackey(cat, 5, rng), random_mackey(cat, 5, rng)
    assert box_product(m, n).functor.dims == box_product(n, m).functor.dims


@pytest.mark.parametrize("p,q", [(2, 3), (3, 5), (5, 3)])
def test_burnside_is_green(p, q):
    cat = BurnsideCategory(FiniteGroup.cyclic(p))
    a, box, mult, unit = burnside_green(cat, q)
    rep = green_check(a, box, mult, unit)
    assert rep.passed
    assert rep.algebras[0].tolist() == [[[1]]]
    # structure constants at G/G come from products of spans
    g = cat.group
    pt = cat.orbits[cat.top]
    keys = cat.basis(cat.top, cat.top)
    for i, ki in enumerate(keys):
        for j, kj in enumerate(keys):
            x, y = SpanHom(pt, pt, {ki: 1}), SpanHom(pt, pt, {kj: 1})
            prod = burnside_ring_product(x, y)
            expected = [prod.coeffs.get(k, 0) % q for k in keys]
            assert rep.algebras[cat.top][:, i, j].tolist() == expected
    assert g.order == p


def test_broken_product_fails():
    cat = BurnsideCategory(FiniteGroup.cyclic(3))
    a, box, mult, unit = burnside_green(cat, 5)
    broken = dict(mult)
    broken[cat.top] = mult[cat.top].scale(2)
    rep = green_check(a, box, broken, unit)
    assert not rep.passed and rep.message
    rep = green_check(a, box, mult, np.zeros(2, dtype=np.int64))
    assert not rep.unital
