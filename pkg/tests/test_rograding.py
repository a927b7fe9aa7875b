import numpy as np
import pytest
from hypothesis import given, strategies as st

from localcoeff.errors import BadParams, ProductNotAvailable
from localcoeff.rograding import (GeneratorLabel, VirtualRep, all_labels, fixed_algebra_generators, fixed_basis,
                                  generator_decomposition_check, generator_degree, involution_sign, odd_basis,
                                  omega, omega_closed_form, regular_real)


def real_character(rep: VirtualRep):
    p = rep.p
    m = np.arange(p)
    chi = rep.mult[0] * np.ones(p)
    for k, a in enumerate(rep.mult[1:], start=1):
        chi = chi + a * 2 * np.cos(2 * np.pi * k * m / p)
    return chi


def omega_character_oracle(j, p):
    """Character of the realification of phi_j^{-1} (phi_0 + ... + phi_{j-1}), evaluated on g^m."""
    m = np.arange(p)
    z = sum(np.exp(2j * np.pi * (i - j) * m / p) for i in range(j)) if j else np.zeros(p, dtype=complex)
    return 2 * z.real


def test_omega_examples():
    assert omega(0, 3) == VirtualRep.zero(3)
    for p in (3, 5, 7):
        assert omega(p, p) == regular_real(p) and omega(p, p).real_dim == 2 * p
    w = omega(1, 3)
    assert w == VirtualRep.from_complex(3, [0, 0, 1]) and w.real_dim == 2
    assert str(w) == "rho1"


@pytest.mark.parametrize("p", [3, 5, 7])
def test_omega_dims_and_periodicity(p):
    for j in range(26):
        w = omega(j, p)
        assert w.real_dim == 2 * j
        assert w == omega_closed_form(j, p)
        assert np.allclose(real_character(w), omega_character_oracle(j, p))
        assert omega(j + p, p) == w + omega(p, p)


def test_omega_errors():
    with pytest.raises(BadParams):
        omega(-1, 3)
    with pytest.raises(BadParams):
        omega(1, 4)
    with pytest.raises(BadParams):
        omega(1, 3) + omega(1, 5)


def test_generator_degrees():
    assert generator_degree(GeneratorLabel(0, 0), 3) == VirtualRep.zero(3)
    assert generator_degree(GeneratorLabel(0, 1), 5) == omega(5, 5)
    d = generator_degree(GeneratorLabel(1, 1), 3)
    assert d == omega(1, 3) + omega(3, 3) and d.real_dim == 8


def test_involution_signs():
    lab = GeneratorLabel.parse
    assert involution_sign(lab("D2")) == 1
    assert involution_sign(lab("C")) == -1
    assert involution_sign(lab("D1C")) == 1
    assert involution_sign(lab("D1")) == -1 and lab("C^2").sign == 1


def test_label_parsing():
    for text in ("1", "D1", "C", "C^3", "D4C^2", "D2C"):
        assert str(GeneratorLabel.parse(text)) == text
    assert GeneratorLabel.parse("D0") == GeneratorLabel(0, 0)
    for bad in ("", "X", "D", "CD1", "C^"):
        with pytest.raises(BadParams):
            GeneratorLabel.parse(bad)
    with pytest.raises(BadParams):
        GeneratorLabel(-1, 0)


@given(st.integers(0, 6), st.integers(0, 20))
def test_label_round_trip(j, n):
    g = GeneratorLabel(j, n)
    assert GeneratorLabel.parse(str(g)) == g


def test_products():
    c = GeneratorLabel(0, 1)
    assert GeneratorLabel(2, 0) * c == GeneratorLabel(2, 1)
    assert c * c == GeneratorLabel(0, 2)
    with pytest.raises(ProductNotAvailable):
        GeneratorLabel(1, 0) * GeneratorLabel(2, 0)


def test_fixed_basis_example():
    assert {str(g) for g in fixed_basis(3, max_total=2)} == {"1", "D2", "D1C", "C^2"}


@pytest.mark.parametrize("p", [3, 5, 7])
def test_fixed_and_odd_partition(p):
    labs = all_labels(p, max_total=12)
    fixed, odd = fixed_basis(p, max_total=12), odd_basis(p, max_total=12)
    assert set(fixed) | set(odd) == set(labs) and not set(fixed) & set(odd)
    assert all(involution_sign(g) == 1 for g in fixed)
    assert len({(g.j, g.n) for g in labs}) == len(labs)
    assert all(g.j < p and g.j + g.n <= 12 for g in labs)


def test_all_labels_needs_bound():
    with pytest.raises(BadParams):
        all_labels(3)
    labs = all_labels(3, max_real_dim=12)
    assert all(generator_degree(g, 3).real_dim <= 12 for g in labs)
    assert GeneratorLabel(0, 2) in labs and GeneratorLabel(1, 2) not in labs


def test_decomposition_examples():
    rep = generator_decomposition_check(5, labels=[GeneratorLabel(2, 2), GeneratorLabel(3, 3), GeneratorLabel(0, 0)])
    assert rep.passed
    w = dict((str(k), {str(g): c for g, c in v.items()}) for k, v in rep.entries)
    assert w["D2C^2"] == {"D2": 1, "C^2": 1}
    assert w["D3C^3"] == {"D3C": 1, "C^2": 1}
    assert w["1"] == {}
    assert not generator_decomposition_check(5, labels=[GeneratorLabel(1, 0)]).passed


@pytest.mark.parametrize("p", [3, 5, 7])
def test_decomposition_passes(p):
    rep = generator_decomposition_check(p, max_total=20)
    assert rep.passed and len(rep.entries) == len(fixed_basis(p, max_total=20))
    gens = set(fixed_algebra_generators(p))
    for lab, w in rep.entries:
        total = VirtualRep.zero(p)
        for g, k in w.items():
            assert g in gens and k > 0
            total = total + k * generator_degree(g, p)
        assert total == generator_degree(lab, p)


def test_algebra_generators():
    assert [str(g) for g in fixed_algebra_generators(5)] == ["D2", "D4", "D1C", "D3C", "C^2"]
