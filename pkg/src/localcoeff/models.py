"""Built-in chain-level and category-level models.

Infinite complexes (S^infinity, K(pi, 1)) appear as truncations with a
recorded validity range.
"""

from dataclasses import dataclass
from typing import Dict, List, Sequence

import numpy as np

from .eicat import EICategory, FunctorComplex, FunctorModule, NaturalTransformation, constant, representable
from .eilenberg import EquivariantSpace, GroupSpace
from .errors import BadParams, BadPrimes, NotFunctorial
from .fieldlin import FieldMatrix, check_modulus, is_prime
from .groupring import FiniteGroup, GroupRingModule, periodic_resolution, projective_resolution
from .rograding import GeneratorLabel, involution_sign

__all__ = [
    "ModelDescriptor", "MODELS", "sphere_antipodal", "k_pi_1", "cp_cohomology_with_sign",
    "fundamental_category_bgz2", "bgz2_constant", "bgz2_sign", "bgz2_sphere",
    "orbit_category", "point_model", "serre_coefficient_bgz2", "representable_split_bgz2",
    "SplitWitness", "equivariant_models",
]


@dataclass(frozen=True)
class ModelDescriptor:
    name: str
    parameters: tuple
    kind: str
    summary: str


MODELS = {
    "sphere-antipodal": ModelDescriptor("sphere-antipodal", ("N", "q"), "group-space",
                                        "S^N with the antipodal C_2 action (chains of the cover of RP^N)"),
    "k-pi-1": ModelDescriptor("k-pi-1", ("group", "L", "q"), "group-space",
                              "truncated free resolution as the chains of the cover of K(pi,1)"),
    "bgz2-sphere": ModelDescriptor("bgz2-sphere", ("p", "q", "N"), "equivariant-space",
                                   "sphere chain functor over the fundamental category of B_G Z/2"),
    "point": ModelDescriptor("point", ("group", "q"), "equivariant-space",
                             "a point over the orbit category"),
}


def _odd_prime(q, what="q"):
    if q == 2 or not is_prime(q):
        raise BadParams(f"{what} must be an odd prime, got {q}")
    return check_modulus(q)


def sphere_antipodal(N: int, q: int) -> GroupSpace:
    """Cellular chains of S^N with two cells per degree swapped by the antipode.

    Boundaries alternate (g - 1) and (g + 1); over F_q[C_2] this is the
    periodic resolution truncated at N.
    """
    if N < 0:
        raise BadParams("N must be nonnegative")
    _odd_prime(q)
    g = FiniteGroup.cyclic(2)
    return GroupSpace(g, periodic_resolution(g, N, q, side="right"), N, f"S^{N}/antipodal")


def k_pi_1(group: FiniteGroup, L: int, q: int) -> GroupSpace:
    """Truncated free resolution of the trivial module, read as chains of the cover of K(pi,1).

    Valid in degrees < L.
    """
    if L < 0:
        raise BadParams("L must be nonnegative")
    check_modulus(q)
    if group.cyclic_generator() is not None:
        c = periodic_resolution(group, L, q, side="right")
    else:
        triv = GroupRingModule.trivial(group, q, side="right")
        c = projective_resolution(triv, L, minimize=False).as_free_complex()
        if len(c.ranks) < L + 1:
            c = type(c)(group, q, c.ranks + [0] * (L + 1 - len(c.ranks)), c.boundaries, "right", check=False)
    return GroupSpace(group, c, max(L - 1, 0), f"K(pi,1) to degree {L}")


def cp_cohomology_with_sign(t_max: int, q: int, side="right") -> Dict[int, GroupRingModule]:
    """H^t(CP^infinity; F_q) as C_2-modules, the generator acting on x^k by (-1)^k."""
    _odd_prime(q)
    g = FiniteGroup.cyclic(2)
    out = {}
    for t in range(t_max + 1):
        if t % 2:
            out[t] = GroupRingModule(g, q, [FieldMatrix.zeros(0, 0, q)] * 2, side, check=False)
        else:
            s = (-1) ** (t // 2)
            out[t] = GroupRingModule.character(g, q, [1, s], side)
    return out


# Morphism layout of the two-object category (top = (G, x0), bottom = ({e}, x0)):
#   0: id_top, 1: kappa, 2: pi_0, 3: pi_1 (bottom -> top),
#   4 + 2g + d: the endomorphism (g, d) of bottom, g in C_p, d in Z/2.
TOP, BOTTOM = 0, 1


def _bottom_endo(p, g, d):
    return 4 + 2 * (g % p) + (d % 2)


def fundamental_category_bgz2(p: int) -> EICategory:
    """Skeleton of the fundamental EI-category of B_G Z/2 for G = C_p.

    kappa^2 = id, kappa o pi_e = pi_{e+1}, pi_e o (g, d) = pi_{e+d},
    End(bottom) = C_p x Z/2.
    """
    _odd_prime(p, "p")
    n = 4 + 2 * p
    morph = [(TOP, TOP), (TOP, TOP), (BOTTOM, TOP), (BOTTOM, TOP)] + [(BOTTOM, BOTTOM)] * (2 * p)
    names = ["id_top", "kappa", "pi_0", "pi_1"] + [f"({g},{d})" for g in range(p) for d in range(2)]
    comp = -np.ones((n, n), dtype=np.int64)
    for a in range(2):
        for b in range(2):
            comp[a, b] = (a + b) % 2                        # End(top) = Z/2
        for e in range(2):
            comp[a, 2 + e] = 2 + (a + e) % 2                # kappa^a o pi_e
    for e in range(2):
        for g in range(p):
            for d in range(2):
                comp[2 + e, _bottom_endo(p, g, d)] = 2 + (e + d) % 2
    for g in range(p):
        for d in range(2):
            for h in range(p):
                for c in range(2):
                    comp[_bottom_endo(p, g, d), _bottom_endo(p, h, c)] = _bottom_endo(p, g + h, d + c)
    return EICategory(["top", "bottom"], morph, comp, [0, _bottom_endo(p, 0, 0)], names)


def _bgz2_character(cat, p, q, top_sign, bottom_sign) -> FunctorModule:
    """One-dimensional contravariant functor with kappa -> top_sign, (g,d) -> bottom_sign^d."""
    maps = []
    for f in range(cat.n_morphisms):
        if f == 0:
            v = 1
        elif f == 1:
            v = top_sign
        elif f in (2, 3):
            v = 1 if f == 2 else bottom_sign   # pi_1 = kappa o pi_0 = pi_0 o (e, 1)
        else:
            d = (f - 4) % 2
            v = bottom_sign ** d
        maps.append(FieldMatrix([[v]], q))
    return FunctorModule(cat, q, [1, 1], maps, "contravariant")


def bgz2_constant(p: int, q: int) -> FunctorModule:
    return constant(fundamental_category_bgz2(p), q, "contravariant")


def bgz2_sign(p: int, q: int) -> FunctorModule:
    """kappa and the Z/2 factor act by -1, pi_1 by -1, G trivially."""
    return _bgz2_character(fundamental_category_bgz2(p), p, q, -1, -1)


def bgz2_sphere(p: int, q: int, N: int) -> EquivariantSpace:
    """Chain functor of the universal cover of B_G Z/2 = RP^infinity (trivial G action), truncated at N.

    C_n is the representable at the top object; boundaries are
    postcomposition with kappa - 1 (n odd) and kappa + 1 (n even).  Valid
    in degrees < N.
    """
    _odd_prime(q)
    if N < 0:
        raise BadParams("N must be nonnegative")
    cat = fundamental_category_bgz2(p)
    rep = representable(cat, TOP, q, "contravariant")
    mods = [rep] * (N + 1)
    diffs = {}
    for n in range(1, N + 1):
        sgn = -1 if n % 2 else 1
        comps = []
        for b in range(cat.n_objects):
            basis = cat.hom(b, TOP)
            pos = {f: i for i, f in enumerate(basis)}
            m = np.zeros((len(basis), len(basis)), dtype=np.int64)
            for i, f in enumerate(basis):
                m[pos[cat.comp[1, f]], i] += 1        # kappa o f
                m[i, i] += sgn
            comps.append(FieldMatrix(m, q))
        diffs[n] = NaturalTransformation(rep, rep, comps)
    return EquivariantSpace(cat, FunctorComplex(mods, diffs), max(N - 1, 0), f"E Z/2 -> B_G Z/2 to degree {N}")


def orbit_category(group: FiniteGroup) -> EICategory:
    """Orbit category on one subgroup per conjugacy class.

    A morphism G/H -> G/K is eH -> gK with g^-1 H g in K; it is stored by
    the coset gK.  Composition: (eK -> g'L) o (eH -> gK) = (eH -> g g' L).
    """
    subs = group.conjugacy_class_reps()
    morph, names, data = [], [], []
    for a, h in enumerate(subs):
        for b, k in enumerate(subs):
            seen = set()
            for g in range(group.order):
                coset = frozenset(group.mul(g, x) for x in k)
                if coset in seen:
                    continue
                gi = group.inverses[g]
                if all(group.mul(group.mul(gi, x), g) in k for x in h):
                    seen.add(coset)
                    morph.append((a, b))
                    data.append((a, b, coset, g))
                    names.append(f"G/{len(h)}->G/{len(k)}:{min(coset)}")
    n = len(morph)
    index = {(a, b, c): i for i, (a, b, c, _) in enumerate(data)}
    comp = -np.ones((n, n), dtype=np.int64)
    for i, (a, b, _, g) in enumerate(data):           # f: a -> b
        for j, (b2, c, _, g2) in enumerate(data):     # h: b -> c
            if b2 != b:
                continue
            gg = group.mul(g, g2)
            coset = frozenset(group.mul(gg, x) for x in subs[c])
            comp[j, i] = index[(a, c, coset)]
    ident = [index[(a, a, frozenset(subs[a]))] for a in range(len(subs))]
    objects = ["G/e" if len(h) == 1 else ("G/G" if len(h) == group.order else f"G/H{a}")
               for a, h in enumerate(subs)]
    return EICategory(objects, morph, comp, ident, names)


def point_model(group: FiniteGroup, q: int) -> EquivariantSpace:
    """A point: the constant chain functor in degree 0 (the representable at G/G)."""
    cat = orbit_category(group)
    top = cat.n_objects - 1
    c0 = representable(cat, top, q, "contravariant")
    return EquivariantSpace(cat, FunctorComplex([c0], {}), 0, "point")


def serre_coefficient_bgz2(p: int, q: int, generators: Sequence) -> FunctorModule:
    """Generator-level coefficient system H^{V+t}(fiber) over the two-object category.

    Top: span of the given labels D_j C^n, kappa acting by (-1)^{j+n}.
    Bottom: span of their restrictions x^{j+np}, the Z/2 factor acting by
    (-1)^{j+np} and G trivially.  pi_0 is restriction, pi_1 = pi_0 o kappa.
    """
    if not (is_prime(p) and is_prime(q) and p != 2 and q != 2 and p != q):
        raise BadPrimes("p and q must be distinct odd primes")
    labels = [g if isinstance(g, GeneratorLabel) else GeneratorLabel.parse(str(g)) for g in generators]
    if any(g.j >= p for g in labels):
        raise BadParams("generator index j must be < p")
    cat = fundamental_category_bgz2(p)
    k = len(labels)
    top = np.diag([involution_sign(g) for g in labels]).astype(np.int64)
    bot = np.diag([(-1) ** g.restriction_degree(p) for g in labels]).astype(np.int64)
    eye = np.eye(k, dtype=np.int64)
    maps = []
    for f in range(cat.n_morphisms):
        if f == 0:
            m = eye
        elif f == 1:
            m = top
        elif f == 2:
            m = eye                 # D_j C^n -> x^{j+np}
        elif f == 3:
            m = eye @ top           # restriction after kappa
        else:
            d = (f - 4) % 2
            m = bot if d else eye
        maps.append(FieldMatrix(m, q))
    return FunctorModule(cat, q, [k, k], maps, "contravariant")


@dataclass
class SplitWitness:
    representable: FunctorModule
    constant: FunctorModule
    sign: FunctorModule
    summed: FunctorModule
    iso: NaturalTransformation       # representable -> constant + sign
    inverse: NaturalTransformation

    def verify(self) -> bool:
        return self.iso.is_natural() and self.inverse.is_natural() \
            and (self.iso @ self.inverse).is_identity() and (self.inverse @ self.iso).is_identity()


def representable_split_bgz2(p: int, q: int) -> SplitWitness:
    """F_q Pi(-, top) = constant + sign, via the basis change [[1, 1], [1, -1]] at both objects."""
    _odd_prime(p, "p")
    _odd_prime(q)
    cat = fundamental_category_bgz2(p)
    rep = representable(cat, TOP, q, "contravariant")
    const, sgn = bgz2_constant(p, q), bgz2_sign(p, q)
    summed = const.direct_sum(sgn)
    change = FieldMatrix([[1, 1], [1, -1]], q)
    iso = NaturalTransformation(rep, summed, [change, change])
    inv = NaturalTransformation(summed, rep, [change.inverse(), change.inverse()])
    w = SplitWitness(rep, const, sgn, summed, iso, inv)
    if not w.verify():
        raise NotFunctorial("basis change does not split the representable")
    return w


def equivariant_models(q: int, p: int = 3, N: int = 4) -> Dict[str, EquivariantSpace]:
    """All built-in equivariant models at the given parameters."""
    return {
        "bgz2-sphere": bgz2_sphere(p, q, N),
        "point": point_model(FiniteGroup.cyclic(p), q),
    }
