import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from localcoeff import models
from localcoeff.chains import VectorComplex, homology
from localcoeff.eicat import (EICategory, FunctorComplex, FunctorModule, NaturalTransformation, constant,
                              fixed_subfunctor_dim, representable)
from localcoeff.eilenberg import (EquivariantSpace, GroupSpace, bo2_pipeline, eilenberg_cohomology,
                                  eilenberg_homology, eq_eilenberg, serre_e2_page)
from localcoeff.errors import BadPrimes, GroupMismatch, NotFree
from localcoeff.groupring import FiniteGroup, GroupRingModule, fixed_points, homology_modules, tensor_over_ring

from helpers import random_bgz2_functor, random_group_module


def rp_oracle(N, q, twist):
    """Cellular chains of RP^N with one cell per degree: d_k = 1 + (-1)^k, or 1 - (-1)^k when twisted."""
    sign = -1 if twist else 1
    diffs = {k: [[1 + sign * (-1) ** k]] for k in range(1, N + 1)}
    return homology(VectorComplex([1] * (N + 1), diffs, q)).dims


@pytest.mark.parametrize("N", range(0, 9))
@pytest.mark.parametrize("q", [3, 5, 7])
def test_projective_space_homology(N, q):
    x = models.sphere_antipodal(N, q)
    g = x.group
    assert eilenberg_homology(x, GroupRingModule.trivial(g, q)).target == rp_oracle(N, q, False)
    assert eilenberg_homology(x, GroupRingModule.sign(g, q)).target == rp_oracle(N, q, True)


def test_projective_space_example_values():
    assert eilenberg_homology(models.sphere_antipodal(5, 5), GroupRingModule.trivial(FiniteGroup.cyclic(2), 5)).target \
        == [1, 0, 0, 0, 0, 1]
    assert eilenberg_homology(models.sphere_antipodal(4, 5), GroupRingModule.trivial(FiniteGroup.cyclic(2), 5)).target \
        == [1, 0, 0, 0, 0]


def test_free_coefficients_give_cover_homology():
    x = models.sphere_antipodal(6, 5)
    for r in (1, 2):
        free = GroupRingModule.free(x.group, 5, r)
        res = eilenberg_homology(x, free)
        assert res.target == [r, 0, 0, 0, 0, 0, r]


def test_coefficient_side_checked():
    x = models.sphere_antipodal(3, 5)
    with pytest.raises(GroupMismatch):
        eilenberg_homology(x, GroupRingModule.trivial(x.group, 5, side="right"))
    with pytest.raises(GroupMismatch):
        eilenberg_cohomology(x, GroupRingModule.trivial(x.group, 5))
    with pytest.raises(GroupMismatch):
        eilenberg_homology(x, GroupRingModule.trivial(FiniteGroup.cyclic(3), 5))


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**31 - 1), st.sampled_from([(2, 3), (2, 5), (3, 5), (3, 7), (5, 3)]))
def test_semisimple_collapse(seed, nq):
    n, q = nq
    rng = np.random.default_rng(seed)
    g = FiniteGroup.cyclic(n)
    x = models.k_pi_1(g, 4, q)
    m = random_group_module(rng, g, q)
    res = eilenberg_homology(x, m)
    assert all(d == 0 for (p, t), d in res.e2.dims.items() if p > 0)
    hs = homology_modules(x.chains)
    for k in range(res.valid_through + 1):
        assert res.target[k] == tensor_over_ring(hs[k], m).dim
    assert res.converges() and res.e2_matches_expected()


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**31 - 1), st.sampled_from([(2, 3), (2, 5), (3, 3), (3, 5), (4, 2)]))
def test_degree_zero_cohomology_is_fixed_points(seed, nq):
    n, q = nq
    rng = np.random.default_rng(seed)
    g = FiniteGroup.cyclic(n)
    x = models.k_pi_1(g, 3, q)
    nmod = random_group_module(rng, g, q, side="right")
    res = eilenberg_cohomology(x, nmod)
    assert res.target[0] == fixed_points(nmod).dim
    assert res.converges() and res.e2_matches_expected()


@pytest.mark.parametrize("n,q", [(3, 3), (2, 3), (2, 5), (5, 5), (6, 3), (4, 2)])
def test_cyclic_classifying_space_modular(n, q):
    L = 8
    x = models.k_pi_1(FiniteGroup.cyclic(n), L, q)
    triv = GroupRingModule.trivial(x.group, q, side="right")
    res = eilenberg_cohomology(x, triv)
    expected = [1] * L if n % q == 0 else [1] + [0] * (L - 1)
    assert res.target[:L] == expected
    assert res.valid_through == L - 1


def test_trivial_action_corollary():
    # antipode acts on H_N(S^N) by (-1)^(N+1): trivially for N odd
    rng = np.random.default_rng(5)
    for N in (1, 3, 5):
        x = models.sphere_antipodal(N, 5)
        for _ in range(3):
            nmod = random_group_module(rng, x.group, 5, side="right")
            res = eilenberg_cohomology(x, nmod)
            f = fixed_points(nmod).dim
            assert res.target == [f] + [0] * (N - 1) + [f]


def test_row_filtration_concentrated_on_one_line():
    x = models.sphere_antipodal(6, 7)
    for m in (GroupRingModule.trivial(x.group, 7), GroupRingModule.sign(x.group, 7), GroupRingModule.free(x.group, 7)):
        res = eilenberg_homology(x, m)
        row = res.row_pages[2]
        for (a, b), d in row.dims.items():
            if d and a + b <= res.valid_through:
                assert b == 0
        assert [row.dim(k, 0) for k in range(res.valid_through + 1)] == res.target[:res.valid_through + 1]


def group_space_as_functor_complex(x: GroupSpace):
    cat = EICategory.from_group(x.group)
    mods = [FunctorModule.from_group_module(x.chains.module(k)) for k in range(x.top + 1)]
    diffs = {k: NaturalTransformation(mods[k], mods[k - 1], [x.chains.expand(k)]) for k in range(1, x.top + 1)}
    return EquivariantSpace(cat, FunctorComplex(mods, diffs), x.valid_through)


@pytest.mark.parametrize("n,q", [(2, 3), (3, 3), (2, 5)])
def test_one_object_category_degenerates(n, q):
    rng = np.random.default_rng(n + q)
    x = models.k_pi_1(FiniteGroup.cyclic(n), 4, q)
    xe = group_space_as_functor_complex(x)
    for _ in range(2):
        m = random_group_module(rng, x.group, q)
        a = eilenberg_homology(x, m, L=4)
        b = eq_eilenberg(xe, FunctorModule.from_group_module(m), L=4)
        assert a.target == b.target and a.e2_dims() == b.e2_dims()
        nmod = random_group_module(rng, x.group, q, side="right")
        a = eilenberg_cohomology(x, nmod, L=4)
        b = eq_eilenberg(xe, FunctorModule.from_group_module(nmod), L=4)
        assert a.target == b.target and a.e2_dims() == b.e2_dims()


def test_point_model_gives_fixed_subfunctor():
    x = models.point_model(FiniteGroup.cyclic(3), 5)
    for f in (constant(x.cat, 5, "contravariant"), representable(x.cat, 0, 5, "contravariant")):
        res = eq_eilenberg(x, f)
        assert res.target[0] == fixed_subfunctor_dim(f)[0]
        assert res.target[0] == f.dims[x.cat.n_objects - 1]


def test_equivariant_sphere_collapse():
    x = models.bgz2_sphere(3, 5, 5)
    rng = np.random.default_rng(4)
    for _ in range(4):
        f = random_bgz2_functor(rng, 3, 5)
        res = eq_eilenberg(x, f)
        assert res.collapsed and res.converges() and res.e2_matches_expected()
        assert res.target[0] == fixed_subfunctor_dim(f)[0]
        assert all(d == 0 for d in res.target[1:res.valid_through + 1])


def test_non_free_chains_rejected():
    cat = models.fundamental_category_bgz2(3)
    c = models.bgz2_constant(3, 5)
    x = EquivariantSpace(cat, FunctorComplex([c], {}), 0)
    with pytest.raises(NotFree):
        eq_eilenberg(x, c)


def test_serre_zero_family():
    base = models.sphere_antipodal(4, 5)
    zero = GroupRingModule(base.group, 5, [np.zeros((0, 0), dtype=np.int64)] * 2, "right", check=False)
    page = serre_e2_page(base, {t: zero for t in range(4)})
    assert not any(page.grid.values()) and page.collapses


def test_serre_nonequivariant_bo2():
    base = models.sphere_antipodal(21, 5)
    page = serre_e2_page(base, models.cp_cohomology_with_sign(20, 5), s_max=20)
    assert page.collapses
    assert [page.dim(0, t) for t in range(21)] == [1 if t % 4 == 0 else 0 for t in range(21)]


def test_serre_equivariant_projective_base():
    base = models.bgz2_sphere(3, 5, 4)
    fam = {lab: models.serre_coefficient_bgz2(3, 5, [lab]) for lab in ("1", "D1", "D2", "C", "D1C")}
    page = serre_e2_page(base, fam, s_max=3)
    assert page.collapses
    assert page.column(0) == {"1": 1, "D1": 0, "D2": 1, "C": 0, "D1C": 1}


def test_bo2_small():
    rep = bo2_pipeline(3, 5, t_max=12)
    assert rep.nonequivariant == [1 if n % 4 == 0 else 0 for n in range(13)]
    fixed = {str(g) for g in rep.fixed_labels}
    assert {"1", "D2", "D1C"} <= fixed and not {"D1", "C"} & fixed
    assert rep.fixed_matches and rep.equivariant_collapses and rep.decomposition.passed


@pytest.mark.parametrize("p,q", [(3, 3), (2, 5), (5, 2), (9, 5)])
def test_bo2_bad_primes(p, q):
    with pytest.raises(BadPrimes):
        bo2_pipeline(p, q, t_max=4)
