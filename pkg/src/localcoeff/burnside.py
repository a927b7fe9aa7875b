"""Spans of finite G-sets, the Burnside category, Mackey and Green functors.

A span from b to c is b <-l- u -r-> c.  Composition is by pullback:
(c <- v -> d) o (b <- u -> c) has apex u x_c v.  A connected span with apex
G/H is determined up to isomorphism by the point z = (l(eH), r(eH)) of
(b x c)^H, up to the diagonal G-action; its canonical key is the minimum
of (sorted gHg^-1, g z) over g in G.

Mackey functors are contravariant on spans (a span b -> c induces
M(c) -> M(b)) and are stored on one orbit G/H per conjugacy class.
"""

from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import BadParams, GroupMismatch, NotFunctorial, ObjectMismatch
from .fieldlin import FieldMatrix, Subquotient, Subspace, _kernel_array, check_modulus
from .groupring import FiniteGroup

__all__ = [
    "FiniteGSet", "Span", "SpanHom", "BurnsideCategory", "MackeyFunctor", "BoxProduct",
    "span_compose", "span_canonical_form", "burnside_hom_basis", "burnside_ring_product",
    "box_product", "green_check", "GreenReport", "burnside_green", "random_mackey",
    "unit_action_map", "span_from_key",
]


class FiniteGSet:
    """``perms[g, x]`` is g . x."""

    def __init__(self, group: FiniteGroup, perms, check=True):
        self.group = group
        p = np.asarray(perms, dtype=np.int64).reshape(group.order, -1)
        p.setflags(write=False)
        self.perms = p
        if check:
            self.check()

    @property
    def size(self):
        return self.perms.shape[1]

    def __len__(self):
        return self.size

    def check(self):
        g, n = self.group, self.size
        if n and (self.perms.min() < 0 or self.perms.max() >= n):
            raise BadParams("action entries out of range")
        for a in range(g.order):
            if len(set(self.perms[a].tolist())) != n:
                raise BadParams("group element does not act by a permutation")
        if not np.array_equal(self.perms[g.identity], np.arange(n)):
            raise BadParams("identity must act trivially")
        for a in range(g.order):
            for b in g.generators:
                if not np.array_equal(self.perms[a][self.perms[b]], self.perms[g.mul(a, b)]):
                    raise BadParams("action is not a homomorphism")

    @classmethod
    def empty(cls, group):
        return cls(group, np.zeros((group.order, 0), dtype=np.int64), check=False)

    @classmethod
    def point(cls, group):
        return cls(group, np.zeros((group.order, 1), dtype=np.int64), check=False)

    @classmethod
    def orbit(cls, group: FiniteGroup, subgroup) -> "FiniteGSet":
        """G/H with cosets ordered by their smallest element."""
        h = sorted(subgroup)
        cosets, index = [], {}
        for g in range(group.order):
            c = frozenset(group.mul(g, x) for x in h)
            if c not in index:
                index[c] = len(cosets)
                cosets.append(c)
        perms = np.zeros((group.order, len(cosets)), dtype=np.int64)
        for a in range(group.order):
            for i, c in enumerate(cosets):
                perms[a, i] = index[frozenset(group.mul(a, x) for x in c)]
        s = cls(group, perms, check=False)
        s.cosets = cosets
        return s

    def coset_of(self, g) -> int:
        """Index of gH in an orbit built by ``orbit``."""
        return next(i for i, c in enumerate(self.cosets) if g in c)

    def product(self, other: "FiniteGSet") -> "FiniteGSet":
        """X x Y with (x, y) stored at x * |Y| + y."""
        _same_group(self, other)
        n = other.size
        perms = self.perms[:, :, None] * n + other.perms[:, None, :]
        return FiniteGSet(self.group, perms.reshape(self.group.order, -1), check=False)

    def disjoint_union(self, other: "FiniteGSet") -> "FiniteGSet":
        _same_group(self, other)
        return FiniteGSet(self.group, np.hstack([self.perms, other.perms + self.size]), check=False)

    def stabilizer(self, x) -> Tuple[int, ...]:
        return tuple(int(g) for g in np.flatnonzero(self.perms[:, x] == x))

    def orbits(self) -> List[np.ndarray]:
        seen = np.zeros(self.size, dtype=bool)
        out = []
        for x in range(self.size):
            if not seen[x]:
                orb = np.unique(self.perms[:, x])
                seen[orb] = True
                out.append(orb)
        return out

    def is_equivariant(self, target: "FiniteGSet", f) -> bool:
        f = np.asarray(f, dtype=np.int64)
        if f.shape != (self.size,):
            return False
        if self.size == 0:
            return True
        return bool(np.array_equal(f[self.perms], target.perms[:, f]))

    def __eq__(self, other):
        return isinstance(other, FiniteGSet) and self.group == other.group and np.array_equal(self.perms, other.perms)

    def __hash__(self):
        return hash((self.perms.shape, self.perms.tobytes()))

    def __repr__(self):
        return f"FiniteGSet(size={self.size}, orbits={len(self.orbits())})"


def _same_group(a, b):
    if a.group != b.group:
        raise GroupMismatch("G-sets over different groups")


@dataclass
class Span:
    """b <-left- apex -right-> c, a morphism from b to c."""

    source: FiniteGSet
    apex: FiniteGSet
    target: FiniteGSet
    left: np.ndarray
    right: np.ndarray

    def __post_init__(self):
        self.left = np.asarray(self.left, dtype=np.int64).reshape(self.apex.size)
        self.right = np.asarray(self.right, dtype=np.int64).reshape(self.apex.size)
        if not self.apex.is_equivariant(self.source, self.left) or not self.apex.is_equivariant(self.target, self.right):
            raise BadParams("span legs must be equivariant")

    @classmethod
    def identity(cls, b: FiniteGSet):
        idx = np.arange(b.size)
        return cls(b, b, b, idx, idx)

    @classmethod
    def from_map(cls, f, b: FiniteGSet, c: FiniteGSet):
        """The covariant embedding b <-id- b -f-> c."""
        return cls(b, b, c, np.arange(b.size), f)

    @classmethod
    def from_map_reversed(cls, f, b: FiniteGSet, c: FiniteGSet):
        """The contravariant embedding c <-f- b -id-> b (a morphism c -> b)."""
        return cls(c, b, b, f, np.arange(b.size))

    def times(self, other: "Span") -> "Span":
        """Cartesian product of spans."""
        n_src, n_tgt = other.source.size, other.target.size
        apex = self.apex.product(other.apex)
        left = (self.left[:, None] * n_src + other.left[None, :]).reshape(-1)
        right = (self.right[:, None] * n_tgt + other.right[None, :]).reshape(-1)
        return Span(self.source.product(other.source), apex, self.target.product(other.target), left, right)


def span_compose(s2: Span, s1: Span) -> Span:
    """Pullback composite of s1: b -> c and s2: c -> d."""
    if s1.target != s2.source:
        raise ObjectMismatch("middle G-sets of the spans do not match")
    g = s1.apex.group
    nv = s2.apex.size
    xs, ys = np.nonzero(s1.right[:, None] == s2.left[None, :])
    code = xs * nv + ys
    lookup = -np.ones(s1.apex.size * nv, dtype=np.int64)
    lookup[code] = np.arange(code.size)
    perms = lookup[s1.apex.perms[:, xs] * nv + s2.apex.perms[:, ys]] if code.size else np.zeros((g.order, 0), dtype=np.int64)
    apex = FiniteGSet(g, perms, check=False)
    return Span(s1.source, apex, s2.target, s1.left[xs], s2.right[ys])


def _key(group: FiniteGroup, stab, zb, zc, b: FiniteGSet, c: FiniteGSet):
    best = None
    for g in range(group.order):
        h = tuple(sorted(group.conjugate(g, stab)))
        k = (h, int(b.perms[g, zb]), int(c.perms[g, zc]))
        if best is None or k < best:
            best = k
    return best


def span_canonical_form(s: Span) -> Counter:
    """Multiset of canonical keys of the connected components of the apex."""
    out = Counter()
    group = s.apex.group
    for orb in s.apex.orbits():
        x = int(orb[0])
        out[_key(group, s.apex.stabilizer(x), s.left[x], s.right[x], s.source, s.target)] += 1
    return out


def burnside_hom_basis(b: FiniteGSet, c: FiniteGSet) -> List[tuple]:
    """Canonical keys of the connected spans b -> c (a basis of B_G(b, c))."""
    _same_group(b, c)
    group = b.group
    keys = set()
    bc = b.product(c)
    for h in group.subgroups:
        hs = sorted(h)
        fixed = np.flatnonzero(np.all(bc.perms[hs] == np.arange(bc.size)[None, :], axis=0))
        for z in fixed:
            keys.add(_key(group, frozenset(h), int(z) // c.size, int(z) % c.size, b, c))
    return sorted(keys)


def span_from_key(key, b: FiniteGSet, c: FiniteGSet) -> Span:
    """The connected span G/H -> b x c sending eH to (zb, zc)."""
    h, zb, zc = key
    group = b.group
    orb = FiniteGSet.orbit(group, h)
    left = np.zeros(orb.size, dtype=np.int64)
    right = np.zeros(orb.size, dtype=np.int64)
    for i, coset in enumerate(orb.cosets):
        g = min(coset)
        left[i] = b.perms[g, zb]
        right[i] = c.perms[g, zc]
    return Span(b, orb, c, left, right)


@dataclass
class SpanHom:
    """Integer combination of canonical connected spans from ``source`` to ``target``."""

    source: FiniteGSet
    target: FiniteGSet
    coeffs: Dict[tuple, int] = field(default_factory=dict)

    @classmethod
    def from_span(cls, s: Span) -> "SpanHom":
        return cls(s.source, s.target, dict(span_canonical_form(s)))

    def _clean(self):
        return SpanHom(self.source, self.target, {k: v for k, v in self.coeffs.items() if v})

    def __add__(self, other):
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return SpanHom(self.source, self.target, out)._clean()

    def scale(self, c):
        return SpanHom(self.source, self.target, {k: c * v for k, v in self.coeffs.items()})._clean()

    def compose(self, first: "SpanHom") -> "SpanHom":
        """self o first."""
        out: Dict[tuple, int] = {}
        for k2, a in self.coeffs.items():
            s2 = span_from_key(k2, self.source, self.target)
            for k1, b in first.coeffs.items():
                s1 = span_from_key(k1, first.source, first.target)
                for k, m in span_canonical_form(span_compose(s2, s1)).items():
                    out[k] = out.get(k, 0) + a * b * m
        return SpanHom(first.source, self.target, out)._clean()

    def __eq__(self, other):
        return isinstance(other, SpanHom) and self._clean().coeffs == other._clean().coeffs

    def __str__(self):
        parts = [f"{v}*[G/{len(k[0])}:{k[1]},{k[2]}]" for k, v in sorted(self.coeffs.items())]
        return " + ".join(parts) if parts else "0"


def burnside_ring_product(x: SpanHom, y: SpanHom) -> SpanHom:
    """Product in A(G) = B(G/G, G/G), given by composition."""
    if x.source.size != 1 or x.target.size != 1 or y.source.size != 1 or y.target.size != 1:
        raise ObjectMismatch("Burnside ring elements are endomorphisms of the point")
    return x.compose(y)


class BurnsideCategory:
    """Orbit representatives and cached composition of basis spans."""

    def __init__(self, group: FiniteGroup):
        self.group = group
        self.subgroups = group.conjugacy_class_reps()
        self.orbits = [FiniteGSet.orbit(group, h) for h in self.subgroups]
        self._basis: Dict[tuple, List[tuple]] = {}
        self._comp: Dict[tuple, Dict[tuple, int]] = {}
        self._prod: Dict[tuple, FiniteGSet] = {}

    @property
    def n_orbits(self):
        return len(self.orbits)

    @property
    def top(self):
        """Index of G/G."""
        return self.n_orbits - 1

    def gset(self, x) -> FiniteGSet:
        return self.orbits[x] if isinstance(x, (int, np.integer)) else x

    def product(self, i, j) -> FiniteGSet:
        if (i, j) not in self._prod:
            self._prod[(i, j)] = self.orbits[i].product(self.orbits[j])
        return self._prod[(i, j)]

    def basis(self, b, c) -> List[tuple]:
        b, c = self.gset(b), self.gset(c)
        key = (hash(b), hash(c))
        if key not in self._basis:
            self._basis[key] = burnside_hom_basis(b, c)
        return self._basis[key]

    def compose_keys(self, k2, k1, b, c, d) -> Dict[tuple, int]:
        """Canonical decomposition of span(k2: c -> d) o span(k1: b -> c)."""
        b, c, d = self.gset(b), self.gset(c), self.gset(d)
        ck = (k2, k1, hash(b), hash(c), hash(d))
        if ck not in self._comp:
            s = span_compose(span_from_key(k2, c, d), span_from_key(k1, b, c))
            self._comp[ck] = dict(span_canonical_form(s))
        return self._comp[ck]

    def orbit_index(self, subgroup) -> int:
        """Index of the orbit representative conjugate to ``subgroup``."""
        h = frozenset(int(x) for x in subgroup)
        for i, rep in enumerate(self.subgroups):
            if len(rep) == len(h) and any(self.group.conjugate(g, rep) == h for g in range(self.group.order)):
                return i
        raise ObjectMismatch("not a subgroup of this group")

    def identity_key(self, i):
        return next(iter(span_canonical_form(Span.identity(self.orbits[i]))))

    def projection(self, i, j):
        """The G-map G/H_i -> G/H_j (H_i inside H_j), as an array, or None."""
        hi, hj = self.subgroups[i], self.subgroups[j]
        if not hi <= hj:
            return None
        oi, oj = self.orbits[i], self.orbits[j]
        return np.array([oj.perms[min(c), 0] for c in oi.cosets], dtype=np.int64)

    def restriction_key(self, i, j):
        """G/H_i <-id- G/H_i -proj-> G/H_j, a morphism G/H_i -> G/H_j."""
        f = self.projection(i, j)
        if f is None:
            raise ObjectMismatch("no projection between these orbits")
        return next(iter(span_canonical_form(Span.from_map(f, self.orbits[i], self.orbits[j]))))

    def transfer_key(self, i, j):
        """G/H_j <-proj- G/H_i -id-> G/H_i, a morphism G/H_j -> G/H_i."""
        f = self.projection(i, j)
        if f is None:
            raise ObjectMismatch("no projection between these orbits")
        return next(iter(span_canonical_form(Span.from_map_reversed(f, self.orbits[i], self.orbits[j]))))

    def diagonal_keys(self, i) -> Dict[tuple, int]:
        """c <-id- c -diag-> c x c, in the basis of B(c, c x c)."""
        o = self.orbits[i]
        diag = np.arange(o.size) * o.size + np.arange(o.size)
        return dict(span_canonical_form(Span.from_map(diag, o, self.product(i, i))))


class MackeyFunctor:
    """Values on orbit representatives; ``maps[(i, j, key)]``: M(G/H_j) -> M(G/H_i)."""

    def __init__(self, cat: BurnsideCategory, q, dims, maps, check=True):
        self.cat = cat
        self.q = check_modulus(q)
        self.dims = [int(d) for d in dims]
        self.maps = {}
        for i in range(cat.n_orbits):
            for j in range(cat.n_orbits):
                for k in cat.basis(i, j):
                    m = maps.get((i, j, k))
                    if m is None:
                        m = FieldMatrix.zeros(self.dims[i], self.dims[j], q)
                    elif not isinstance(m, FieldMatrix):
                        m = FieldMatrix(np.asarray(m, dtype=np.int64).reshape(self.dims[i], self.dims[j]), q)
                    self.maps[(i, j, k)] = m
        if check:
            self.check()

    def value(self, i, j, combo: Dict[tuple, int]) -> FieldMatrix:
        out = np.zeros((self.dims[i], self.dims[j]), dtype=np.int64)
        for k, c in combo.items():
            out += c * self.maps[(i, j, k)].array
        return FieldMatrix(out, self.q)

    def check(self):
        cat = self.cat
        n = cat.n_orbits
        for i in range(n):
            if not self.maps[(i, i, cat.identity_key(i))].is_identity():
                raise NotFunctorial("identity span must act as the identity")
        for i in range(n):
            for j in range(n):
                for k1 in cat.basis(i, j):
                    for l in range(n):
                        for k2 in cat.basis(j, l):
                            comp = cat.compose_keys(k2, k1, i, j, l)
                            if self.value(i, l, comp) != self.maps[(i, j, k1)] @ self.maps[(j, l, k2)]:
                                raise NotFunctorial("span composition is not respected")

    @classmethod
    def representable(cls, cat: BurnsideCategory, d, q) -> "MackeyFunctor":
        """F_q B(-, G/H_d): a span s: i -> j acts by x -> x o s."""
        bases = [cat.basis(i, d) for i in range(cat.n_orbits)]
        pos = [{k: a for a, k in enumerate(bs)} for bs in bases]
        maps = {}
        for i in range(cat.n_orbits):
            for j in range(cat.n_orbits):
                for s in cat.basis(i, j):
                    m = np.zeros((len(bases[i]), len(bases[j])), dtype=np.int64)
                    for col, x in enumerate(bases[j]):
                        for k, c in cat.compose_keys(x, s, i, j, d).items():
                            m[pos[i][k], col] += c
                    maps[(i, j, s)] = FieldMatrix(m, q)
        return cls(cat, q, [len(b) for b in bases], maps, check=False)

    @classmethod
    def burnside(cls, cat: BurnsideCategory, q) -> "MackeyFunctor":
        """The Burnside Mackey functor A = F_q B(-, G/G)."""
        return cls.representable(cat, cat.top, q)

    @classmethod
    def zero(cls, cat, q):
        return cls(cat, q, [0] * cat.n_orbits, {}, check=False)

    def direct_sum(self, other: "MackeyFunctor") -> "MackeyFunctor":
        maps = {}
        for key, a in self.maps.items():
            b = other.maps[key]
            maps[key] = FieldMatrix.block({(0, 0): a, (1, 1): b}, [a.rows, b.rows], [a.cols, b.cols], self.q)
        return MackeyFunctor(self.cat, self.q, [x + y for x, y in zip(self.dims, other.dims)], maps, check=False)

    def generated(self, gens) -> List[Subspace]:
        """Subfunctor generated by elements (orbit index, vector)."""
        cols = [[] for _ in self.dims]
        for j, v in gens:
            v = np.asarray(v, dtype=np.int64)
            for i in range(self.cat.n_orbits):
                for k in self.cat.basis(i, j):
                    cols[i].append(self.maps[(i, j, k)].array @ v)
        return [Subspace.span(np.array(c, dtype=np.int64).T if c else np.zeros((d, 0), dtype=np.int64), self.q, d)
                for c, d in zip(cols, self.dims)]

    def quotient(self, subs: Sequence[Subspace]) -> "MackeyFunctor":
        sqs = [Subquotient(Subspace.full(d, self.q), s, check=False) for d, s in zip(self.dims, subs)]
        maps = {}
        for (i, j, k), m in self.maps.items():
            maps[(i, j, k)] = FieldMatrix(sqs[i].coords(m.array @ sqs[j].reps).reshape(sqs[i].dim, sqs[j].dim), self.q)
        return MackeyFunctor(self.cat, self.q, [s.dim for s in sqs], maps, check=False)

    def restriction(self, i, j) -> FieldMatrix:
        """M(G/H_j) -> M(G/H_i) for H_i inside H_j."""
        return self.maps[(i, j, self.cat.restriction_key(i, j))]

    def transfer(self, i, j) -> FieldMatrix:
        """M(G/H_i) -> M(G/H_j) for H_i inside H_j."""
        return self.maps[(j, i, self.cat.transfer_key(i, j))]

    def __repr__(self):
        return f"MackeyFunctor(dims={self.dims}, q={self.q})"


def random_mackey(cat: BurnsideCategory, q, rng, max_summands=2, max_relations=2) -> MackeyFunctor:
    """Quotient of a sum of representables by a random finitely generated subfunctor."""
    m = MackeyFunctor.zero(cat, q)
    for _ in range(int(rng.integers(1, max_summands + 1))):
        m = m.direct_sum(MackeyFunctor.representable(cat, int(rng.integers(0, cat.n_orbits)), q))
    gens = []
    for _ in range(int(rng.integers(0, max_relations + 1))):
        j = int(rng.integers(0, cat.n_orbits))
        if m.dims[j]:
            gens.append((j, rng.integers(0, q, size=m.dims[j])))
    return m.quotient(m.generated(gens)) if gens else m


@dataclass
class BoxProduct:
    """M box N with the presentation used to build it.

    At each orbit c the value is the quotient of the sum over orbit pairs
    (b, b') and basis spans s in B(c, b x b') of M(b) (x) N(b'), by the
    relations identifying M(phi) m (x) n (x) s with m (x) n (x) (phi x id) o s
    and likewise for N.
    """

    m: MackeyFunctor
    n: MackeyFunctor
    functor: MackeyFunctor
    blocks: List[Dict[tuple, int]]         # per c: (b, b', s) -> offset
    quotients: List[Subquotient]

    def element(self, c, b, b2, s_combo: Dict[tuple, int], x, y) -> np.ndarray:
        """Quotient coordinates of x (x) y (x) s in (M box N)(c)."""
        vec = np.zeros(self.quotients[c].num.ambient_dim, dtype=np.int64)
        xy = np.kron(np.asarray(x, dtype=np.int64), np.asarray(y, dtype=np.int64))
        for s, coef in s_combo.items():
            off = self.blocks[c][(b, b2, s)]
            vec[off:off + xy.size] += coef * xy
        return self.quotients[c].coords(np.mod(vec, self.m.q))


def box_product(m: MackeyFunctor, n: MackeyFunctor) -> BoxProduct:
    """Day convolution along the cartesian product, as a coend over orbits."""
    if m.cat is not n.cat or m.q != n.q:
        raise GroupMismatch("Mackey functors over different groups or fields")
    cat, q = m.cat, m.q
    O = range(cat.n_orbits)
    blocks, quots = [], []
    for c in O:
        offs, total = {}, 0
        for b in O:
            for b2 in O:
                for s in cat.basis(c, cat.product(b, b2)):
                    offs[(b, b2, s)] = total
                    total += m.dims[b] * n.dims[b2]
        rels = []
        for b in O:
            for bt in O:
                for b2 in O:
                    for phi in cat.basis(b, bt):
                        # phi x id : b x b2 -> bt x b2
                        ps = span_from_key(phi, cat.orbits[b], cat.orbits[bt]).times(Span.identity(cat.orbits[b2]))
                        rels += _relations(cat, c, offs, total, (b, b2), (bt, b2), ps,
                                           m.maps[(b, bt, phi)].array, n.dims[b2], first=True, dims_other=m.dims[bt])
        for b in O:
            for b2 in O:
                for bt in O:
                    for phi in cat.basis(b2, bt):
                        ps = Span.identity(cat.orbits[b]).times(span_from_key(phi, cat.orbits[b2], cat.orbits[bt]))
                        rels += _relations(cat, c, offs, total, (b, b2), (b, bt), ps,
                                           n.maps[(b2, bt, phi)].array, m.dims[b], first=False, dims_other=n.dims[bt])
        rel = np.mod(np.hstack(rels), q) if rels else np.zeros((total, 0), dtype=np.int64)
        quots.append(Subquotient(Subspace.full(total, q), Subspace.span(rel, q, total), check=False))
        blocks.append(offs)
    maps = {}
    for c2 in O:
        for c in O:
            for psi in cat.basis(c2, c):
                lift = np.zeros((quots[c2].num.ambient_dim, quots[c].num.ambient_dim), dtype=np.int64)
                for (b, b2, s), off in blocks[c].items():
                    size = m.dims[b] * n.dims[b2]
                    if not size:
                        continue
                    bb = cat.product(b, b2)
                    for s2, coef in cat.compose_keys(s, psi, cat.orbits[c2], cat.orbits[c], bb).items():
                        o2 = blocks[c2][(b, b2, s2)]
                        lift[o2:o2 + size, off:off + size] += coef * np.eye(size, dtype=np.int64)
                img = np.mod(lift, q) @ quots[c].reps
                maps[(c2, c, psi)] = FieldMatrix(quots[c2].coords(img).reshape(quots[c2].dim, quots[c].dim), q)
    functor = MackeyFunctor(cat, q, [s.dim for s in quots], maps, check=False)
    return BoxProduct(m, n, functor, blocks, quots)


def _relations(cat, c, offs, total, src_pair, tgt_pair, prod_span, phi_mat, other_dim, first, dims_other):
    """Relation vectors for one basis morphism phi acting in one slot."""
    rels = []
    src_set = cat.product(*src_pair)
    tgt_set = cat.product(*tgt_pair)
    ncols = dims_other * other_dim
    if ncols == 0:
        return rels
    for s in cat.basis(c, src_set):
        combo = span_canonical_form(span_compose(prod_span, span_from_key(s, cat.orbits[c], src_set)))
        r = np.zeros((total, ncols), dtype=np.int64)
        o = offs[src_pair + (s,)]
        if first:
            blk = np.kron(phi_mat, np.eye(other_dim, dtype=np.int64))
        else:
            blk = np.kron(np.eye(other_dim, dtype=np.int64), phi_mat)
        r[o:o + blk.shape[0]] += blk
        for s2, coef in combo.items():
            o2 = offs[tgt_pair + (s2,)]
            r[o2:o2 + ncols] -= coef * np.eye(ncols, dtype=np.int64)
        rels.append(r)
    return rels


def unit_action_map(box: BoxProduct) -> Dict[int, FieldMatrix]:
    """The map A box M -> M, [a (x) m (x) s] -> M(sigma_a o s)(m).

    For a: b -> G/G, sigma_a: b x b' -> b' is the span b x b' <- u x b' -> b'.
    Raises NotFunctorial when the formula does not respect the relations.
    """
    m = box.n
    cat, q = m.cat, m.q
    a_fun = box.m
    out = {}
    for c in range(cat.n_orbits):
        cols = np.zeros((m.dims[c], box.quotients[c].num.ambient_dim), dtype=np.int64)
        for (b, b2, s), off in box.blocks[c].items():
            if a_fun.dims[b] == 0 or m.dims[b2] == 0:
                continue
            bb = cat.product(b, b2)
            s_span = span_from_key(s, cat.orbits[c], bb)
            for ai, akey in enumerate(cat.basis(b, cat.top)):
                a_span = span_from_key(akey, cat.orbits[b], cat.orbits[cat.top])
                sigma = _unit_span(a_span, cat.orbits[b2])
                combo = span_canonical_form(span_compose(sigma, s_span))
                mat = m.value(c, b2, combo).array
                for mi in range(m.dims[b2]):
                    cols[:, off + ai * m.dims[b2] + mi] += mat[:, mi]
        cols = np.mod(cols, q)
        if np.any(np.mod(cols @ box.quotients[c].den.array, q)):
            raise NotFunctorial("unit action does not vanish on the relations")
        out[c] = FieldMatrix(cols @ box.quotients[c].reps, q)
    return out


def _unit_span(a_span: Span, b2: FiniteGSet) -> Span:
    """b x b2 <- u x b2 -> b2 for a: b <- u -> point."""
    n2 = b2.size
    apex = a_span.apex.product(b2)
    left = (a_span.left[:, None] * n2 + np.arange(n2)[None, :]).reshape(-1)
    right = np.tile(np.arange(n2), a_span.apex.size)
    return Span(a_span.source.product(b2), apex, b2, left, right)


@dataclass
class GreenReport:
    passed: bool
    natural: bool
    associative: bool
    unital: bool
    algebras: Dict[int, np.ndarray]      # structure constants [k, i, j]: e_i e_j = sum_k c e_k
    units: Dict[int, np.ndarray]
    message: str = ""


def green_check(t: MackeyFunctor, box: BoxProduct, mult: Dict[int, FieldMatrix], unit) -> GreenReport:
    """Check that ``mult``: T box T -> T and ``unit`` in T(G/G) make T a Green functor.

    Verifies naturality of ``mult`` on every basis span and, at each orbit,
    associativity and two-sided unitality of the induced product
    x.y = mult([x (x) y (x) diagonal]), with unit the restriction of ``unit``.
    """
    cat, q = t.cat, t.q
    natural = True
    for (c2, c, psi), bmap in box.functor.maps.items():
        if mult[c2] @ bmap != t.maps[(c2, c, psi)] @ mult[c]:
            natural = False
    algebras, units = {}, {}
    assoc = unital = True
    for c in range(cat.n_orbits):
        d = t.dims[c]
        diag = cat.diagonal_keys(c)
        const = np.zeros((d, d, d), dtype=np.int64)
        eye = np.eye(d, dtype=np.int64)
        for i in range(d):
            for j in range(d):
                el = box.element(c, c, c, diag, eye[i], eye[j])
                const[:, i, j] = mult[c].array @ el % q
        algebras[c] = const
        if c == cat.top:
            u = np.asarray(unit, dtype=np.int64) % q
        else:
            u = t.restriction(c, cat.top).array @ np.asarray(unit, dtype=np.int64) % q
        units[c] = u
        mul = lambda x, y: np.einsum("kij,i,j->k", const, x, y) % q
        for i in range(d):
            if not np.array_equal(mul(u, eye[i]), eye[i]) or not np.array_equal(mul(eye[i], u), eye[i]):
                unital = False
            for j in range(d):
                for k in range(d):
                    if not np.array_equal(mul(mul(eye[i], eye[j]), eye[k]), mul(eye[i], mul(eye[j], eye[k]))):
                        assoc = False
    passed = natural and assoc and unital
    msg = "" if passed else ", ".join(n for n, ok in (("naturality", natural), ("associativity", assoc),
                                                     ("unit", unital)) if not ok) + " failed"
    return GreenReport(passed, natural, assoc, unital, algebras, units, msg)


def burnside_green(cat: BurnsideCategory, q):
    """A with its product [a (x) b (x) s] -> (a x b) o s; returns (A, box, mult, unit)."""
    a = MackeyFunctor.burnside(cat, q)
    box = box_product(a, a)
    top = cat.top
    point = cat.orbits[top]
    mult = {}
    for c in range(cat.n_orbits):
        basis_c = cat.basis(c, top)
        pos = {k: i for i, k in enumerate(basis_c)}
        cols = np.zeros((a.dims[c], box.quotients[c].num.ambient_dim), dtype=np.int64)
        for (b, b2, s), off in box.blocks[c].items():
            bb = cat.product(b, b2)
            s_span = span_from_key(s, cat.orbits[c], bb)
            for i, k1 in enumerate(cat.basis(b, top)):
                for j, k2 in enumerate(cat.basis(b2, top)):
                    prod = span_from_key(k1, cat.orbits[b], point).times(span_from_key(k2, cat.orbits[b2], point))
                    prod = Span(prod.source, prod.apex, point, prod.left, np.zeros(prod.apex.size, dtype=np.int64))
                    for k, coef in span_canonical_form(span_compose(prod, s_span)).items():
                        cols[pos[k], off + i * a.dims[b2] + j] += coef
        cols = np.mod(cols, q)
        if np.any(np.mod(cols @ box.quotients[c].den.array, q)):
            raise NotFunctorial("product does not respect the box relations")
        mult[c] = FieldMatrix(cols @ box.quotients[c].reps, q)
    unit = np.zeros(a.dims[top], dtype=np.int64)
    unit[cat.basis(top, top).index(cat.identity_key(top))] = 1
    return a, box, mult, unit
