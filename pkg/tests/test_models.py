import numpy as np
import pytest

from localcoeff import models
from localcoeff.chains import homology
from localcoeff.eicat import decompose_into_representables, hom_over_cat
from localcoeff.errors import BadParams, BadPrimes
from localcoeff.fieldlin import FieldMatrix
from localcoeff.groupring import FiniteGroup, periodic_resolution
from localcoeff.rograding import GeneratorLabel


@pytest.mark.parametrize("q", [3, 5, 7])
def test_sphere_underlying_homology(q):
    for N in range(13):
        x = models.sphere_antipodal(N, q)
        dims = homology(x.chains.underlying()).dims
        expected = [2] if N == 0 else [1] + [0] * (N - 1) + [1]
        assert dims == expected


def test_sphere_structure():
    x = models.sphere_antipodal(0, 5)
    assert x.chains.ranks == [1]
    x = models.sphere_antipodal(3, 5)
    ref = periodic_resolution(FiniteGroup.cyclic(2), 3, 5, side="right")
    for k in (1, 2, 3):
        assert np.array_equal(x.chains.boundary(k), ref.boundary(k))
    g = x.group.cyclic_generator()
    assert x.chains.boundary(1)[0, 0, g] == 1 and x.chains.boundary(1)[0, 0, x.group.identity] == 4
    assert x.chains.boundary(2)[0, 0].tolist() == [1, 1]
    with pytest.raises(BadParams):
        models.sphere_antipodal(-1, 5)
    with pytest.raises(BadParams):
        models.sphere_antipodal(3, 2)


def test_cp_signs():
    fam = models.cp_cohomology_with_sign(8, 5)
    g = FiniteGroup.cyclic(2).cyclic_generator()
    signs = {t: int(fam[t].action[g].array[0, 0]) for t in range(0, 9, 2)}
    assert signs == {0: 1, 2: 4, 4: 1, 6: 4, 8: 1}
    assert all(fam[t].dim == 0 for t in range(1, 9, 2))


def test_bgz2_category():
    for p in (3, 5, 7):
        cat = models.fundamental_category_bgz2(p)
        sizes = cat.hom_sizes()
        assert (sizes[("top", "top")], sizes[("bottom", "top")], sizes[("top", "bottom")], sizes[("bottom", "bottom")]) \
            == (2, 2, 0, 2 * p)
        assert cat.compose(1, 1) == 0
        # kappa swaps the two maps bottom -> top
        assert {cat.compose(1, 2), cat.compose(1, 3)} == {2, 3}
    with pytest.raises(BadParams):
        models.fundamental_category_bgz2(4)


def test_serre_coefficient_signs():
    c = models.serre_coefficient_bgz2(3, 5, ["D2", "C", "D1C", "D1", "1"])
    kappa = c.maps[1].array
    assert [int(kappa[i, i]) for i in range(5)] == [1, 4, 1, 4, 1]
    with pytest.raises(BadPrimes):
        models.serre_coefficient_bgz2(3, 3, ["1"])
    with pytest.raises(BadParams):
        models.serre_coefficient_bgz2(3, 5, ["D3"])


def test_serre_coefficient_restriction():
    p, q = 5, 7
    labels = [GeneratorLabel(j, n) for j in range(p) for n in range(3)]
    c = models.serre_coefficient_bgz2(p, q, labels)
    cat = c.cat
    z2 = models._bottom_endo(p, 0, 1)
    pi0, kappa = 2, 1
    for i, lab in enumerate(labels):
        k = lab.j + lab.n * p
        assert k == lab.restriction_degree(p)
        assert int(c.maps[z2].array[i, i]) == (-1) ** k % q
    # restriction intertwines kappa with the Z/2 factor at the bottom
    lhs = c.maps[pi0].array @ c.maps[kappa].array % q
    rhs = c.maps[z2].array @ c.maps[pi0].array % q
    assert np.array_equal(lhs, rhs)
    assert np.array_equal(c.maps[cat.compose(kappa, pi0)].array, lhs)


@pytest.mark.parametrize("q", [3, 5, 7])
def test_representable_split(q):
    w = models.representable_split_bgz2(3, q)
    assert w.verify()
    assert hom_over_cat(w.constant, w.constant).dim == 1
    assert hom_over_cat(w.constant, w.sign).dim == 0
    assert FieldMatrix([[1, 1], [1, -1]], q).rank() == 2


def test_split_matches_structure_maps():
    w = models.representable_split_bgz2(3, 5)
    rep = w.representable
    # at the top kappa swaps the basis {id, kappa}; at the bottom the Z/2 factor swaps {pi_0, pi_1}
    assert rep.maps[0].is_identity()
    assert rep.maps[1].array.tolist() == [[0, 1], [1, 0]]
    assert rep.maps[models._bottom_endo(3, 0, 1)].array.tolist() == [[0, 1], [1, 0]]


def test_k_pi_1():
    x = models.k_pi_1(FiniteGroup.cyclic(4), 5, 3)
    assert x.chains.ranks == [1] * 6 and x.valid_through == 4
    x0 = models.k_pi_1(FiniteGroup.cyclic(3), 0, 3)
    assert x0.chains.ranks == [1] and x0.valid_through == 0
    s3 = FiniteGroup.from_permutations([(1, 0, 2), (1, 2, 0)])
    xs = models.k_pi_1(s3, 4, 3)
    xs.chains.check()
    h = homology(xs.chains.underlying()).dims
    assert h[0] == 1 and h[1:4] == [0, 0, 0]


def test_equivariant_models_are_free():
    for q in (3, 5, 7):
        for name, x in models.equivariant_models(q).items():
            for dec in x.check_free():
                assert dec.verify()
    x = models.bgz2_sphere(5, 7, 3)
    for m in x.chains.modules:
        assert decompose_into_representables(m).objects == [0]


def test_orbit_category():
    cat = models.orbit_category(FiniteGroup.cyclic(3))
    sizes = cat.hom_sizes()
    assert sizes[("G/e", "G/e")] == 3 and sizes[("G/e", "G/G")] == 1 and sizes[("G/G", "G/e")] == 0
    s3 = models.orbit_category(FiniteGroup.from_permutations([(1, 0, 2), (1, 2, 0)]))
    assert s3.n_objects == 4
