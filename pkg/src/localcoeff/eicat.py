"""Finite EI-categories and modules over them (functors to F_q-vector spaces).

A category is stored by an explicit composition table ``comp[g, f] = g o f``
(or -1 when f's target is not g's source).  A covariant functor stores
F(f): F(src f) -> F(dst f); a contravariant one stores F(f): F(dst f) ->
F(src f).  Over a one-object category coming from a group, covariant
functors are left modules and contravariant functors are right modules.
"""

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence

import numpy as np

from .errors import (BadParams, CategoryMismatch, DimensionMismatch, NotAComplex, NotFree,
                     NotFunctorial, UnknownObject)
from .fieldlin import FieldMatrix, Subquotient, Subspace, _kernel_array, _left_inverse, check_modulus, mulmod, rank

__all__ = [
    "EICategory", "FunctorModule", "NaturalTransformation", "FunctorComplex",
    "FunctorResolution", "FunctorCoResolution", "CatHomSpace", "CatTensorSpace",
    "representable", "constant", "tensor_over_cat", "hom_over_cat",
    "functor_projective_resolution", "functor_injective_resolution", "tor_over_cat",
    "ext_over_cat", "decompose_into_representables", "Decomposition", "fixed_subfunctor_dim",
    "is_projective",
]


class EICategory:
    """Finite category in which every endomorphism is invertible."""

    def __init__(self, objects, morphisms, comp, identities, names=None, check=True):
        self.objects = list(objects)
        self.sources = np.array([m[0] for m in morphisms], dtype=np.int64)
        self.targets = np.array([m[1] for m in morphisms], dtype=np.int64)
        self.comp = np.array(comp, dtype=np.int64).reshape(len(morphisms), len(morphisms))
        self.identities = [int(i) for i in identities]
        self.names = list(names) if names is not None else [f"f{i}" for i in range(len(morphisms))]
        self._homs = {}
        for f in range(len(morphisms)):
            self._homs.setdefault((int(self.sources[f]), int(self.targets[f])), []).append(f)
        if check:
            self.check()

    @classmethod
    def from_group(cls, group, name="*"):
        """The one-object category with morphisms the group elements; g o f = g*f."""
        n = group.order
        return cls([name], [(0, 0)] * n, group.table, [group.identity], group.names, check=False)

    @property
    def n_objects(self):
        return len(self.objects)

    @property
    def n_morphisms(self):
        return len(self.sources)

    def index(self, obj) -> int:
        if isinstance(obj, (int, np.integer)) and 0 <= obj < self.n_objects:
            return int(obj)
        try:
            return self.objects.index(obj)
        except ValueError:
            raise UnknownObject(f"unknown object {obj!r}") from None

    def hom(self, a, b) -> List[int]:
        return self._homs.get((self.index(a), self.index(b)), [])

    def compose(self, g, f) -> int:
        h = int(self.comp[g, f])
        if h < 0:
            raise BadParams(f"morphisms {self.names[g]} and {self.names[f]} are not composable")
        return h

    def check(self):
        m = self.n_morphisms
        for a, i in enumerate(self.identities):
            if self.sources[i] != a or self.targets[i] != a:
                raise BadParams("identity has wrong endpoints")
        for g in range(m):
            for f in range(m):
                h = self.comp[g, f]
                if self.sources[g] == self.targets[f]:
                    if h < 0 or self.sources[h] != self.sources[f] or self.targets[h] != self.targets[g]:
                        raise BadParams("composition table has wrong endpoints")
                elif h >= 0:
                    raise BadParams("composition defined on non-composable pair")
        for f in range(m):
            if self.comp[self.identities[self.targets[f]], f] != f or self.comp[f, self.identities[self.sources[f]]] != f:
                raise BadParams("identities are not units")
        for h in range(m):
            for g in np.flatnonzero(self.targets == self.sources[h]):
                for f in np.flatnonzero(self.targets == self.sources[g]):
                    if self.comp[h, self.comp[g, f]] != self.comp[self.comp[h, g], f]:
                        raise BadParams("composition is not associative")
        for a in range(self.n_objects):
            ends = self.hom(a, a)
            ident = self.identities[a]
            for e in ends:
                if not any(self.comp[e, x] == ident and self.comp[x, e] == ident for x in ends):
                    raise BadParams(f"endomorphism {self.names[e]} is not invertible (EI condition)")

    def is_iso(self, f) -> bool:
        s, t = int(self.sources[f]), int(self.targets[f])
        return any(self.comp[f, x] == self.identities[t] and self.comp[x, f] == self.identities[s]
                   for x in self.hom(t, s))

    def object_order(self, variance) -> List[int]:
        """Objects ordered so generators are placed where nothing else covers them.

        Covariant: sources of non-invertible morphisms first.  Contravariant:
        targets first.  Ties follow input order.
        """
        before = {a: set() for a in range(self.n_objects)}
        for f in range(self.n_morphisms):
            s, t = int(self.sources[f]), int(self.targets[f])
            if s != t:
                if variance == "covariant":
                    before[t].add(s)
                else:
                    before[s].add(t)
        order, done = [], set()
        while len(order) < self.n_objects:
            for a in range(self.n_objects):
                if a not in done and before[a] <= done:
                    order.append(a)
                    done.add(a)
                    break
            else:
                raise BadParams("category has a cycle of non-invertible morphisms")
        return order

    def weakly_terminal(self) -> Optional[int]:
        for w in range(self.n_objects):
            if all(self.hom(a, w) for a in range(self.n_objects)):
                return w
        return None

    def weakly_initial(self) -> Optional[int]:
        for w in range(self.n_objects):
            if all(self.hom(w, a) for a in range(self.n_objects)):
                return w
        return None

    def hom_sizes(self):
        return {(self.objects[a], self.objects[b]): len(self.hom(a, b))
                for a in range(self.n_objects) for b in range(self.n_objects)}

    def __eq__(self, other):
        return isinstance(other, EICategory) and self.objects == other.objects \
            and np.array_equal(self.comp, other.comp) and np.array_equal(self.sources, other.sources) \
            and np.array_equal(self.targets, other.targets)

    def __hash__(self):
        return hash((tuple(self.objects), self.comp.tobytes()))

    def __repr__(self):
        return f"EICategory(objects={self.objects}, morphisms={self.n_morphisms})"


def _check_variance(v):
    if v not in ("covariant", "contravariant"):
        raise BadParams("variance must be 'covariant' or 'contravariant'")
    return v


class FunctorModule:
    """Functor from an EI-category to finite-dimensional F_q-spaces."""

    def __init__(self, cat: EICategory, q, dims, maps, variance="covariant", check=True):
        self.cat = cat
        self.q = check_modulus(q)
        self.variance = _check_variance(variance)
        self.dims = [int(d) for d in dims]
        if len(self.dims) != cat.n_objects or len(maps) != cat.n_morphisms:
            raise DimensionMismatch("need one dimension per object and one matrix per morphism")
        self.maps = [m if isinstance(m, FieldMatrix) else FieldMatrix(np.asarray(m, dtype=np.int64).reshape(self._shape(f)), q)
                     for f, m in enumerate(maps)]
        if check:
            self.check()

    def _shape(self, f):
        s, t = self.dims[self.cat.sources[f]], self.dims[self.cat.targets[f]]
        return (t, s) if self.variance == "covariant" else (s, t)

    def check(self):
        cat = self.cat
        for f, m in enumerate(self.maps):
            if m.shape != self._shape(f):
                raise DimensionMismatch(f"matrix for {cat.names[f]} has shape {m.shape}, expected {self._shape(f)}")
        for a, i in enumerate(cat.identities):
            if not self.maps[i].is_identity():
                raise NotFunctorial(f"identity of {cat.objects[a]} is not sent to the identity")
        for g in range(cat.n_morphisms):
            for f in range(cat.n_morphisms):
                h = cat.comp[g, f]
                if h < 0:
                    continue
                lhs = self.maps[g] @ self.maps[f] if self.variance == "covariant" else self.maps[f] @ self.maps[g]
                if lhs != self.maps[h]:
                    raise NotFunctorial(f"composite {cat.names[g]} o {cat.names[f]} is not preserved")

    @property
    def total_dim(self):
        return sum(self.dims)

    def dim(self, obj):
        return self.dims[self.cat.index(obj)]

    def dual(self) -> "FunctorModule":
        """Objectwise dual Hom(F(-), F_q); variance flips."""
        v = "contravariant" if self.variance == "covariant" else "covariant"
        return FunctorModule(self.cat, self.q, self.dims, [m.T for m in self.maps], v, check=False)

    def direct_sum(self, other: "FunctorModule") -> "FunctorModule":
        _same(self, other)
        maps = []
        for f in range(self.cat.n_morphisms):
            a, b = self.maps[f], other.maps[f]
            maps.append(FieldMatrix.block({(0, 0): a, (1, 1): b}, [a.rows, b.rows], [a.cols, b.cols], self.q))
        return FunctorModule(self.cat, self.q, [x + y for x, y in zip(self.dims, other.dims)], maps,
                             self.variance, check=False)

    @classmethod
    def zero(cls, cat, q, variance="covariant"):
        return cls(cat, q, [0] * cat.n_objects,
                   [FieldMatrix.zeros(0, 0, q)] * cat.n_morphisms, variance, check=False)

    @classmethod
    def from_group_module(cls, module, name="*"):
        """Left modules become covariant functors, right modules contravariant ones."""
        cat = EICategory.from_group(module.group, name)
        v = "covariant" if module.side == "left" else "contravariant"
        return cls(cat, module.q, [module.dim], module.action, v, check=False)

    def to_group_module(self, group):
        from .groupring import GroupRingModule
        side = "left" if self.variance == "covariant" else "right"
        return GroupRingModule(group, self.q, self.maps, side, check=False)

    def subfunctor(self, subspaces: Sequence[Subspace]):
        """Restriction to invariant subspaces; returns (functor, inclusion)."""
        maps = []
        for f, m in enumerate(self.maps):
            src, dst = self._ends(f)
            img = mulmod(m.array, subspaces[src].array, self.q)
            maps.append(FieldMatrix(subspaces[dst].coordinates(img).reshape(subspaces[dst].dim, subspaces[src].dim), self.q))
        sub = FunctorModule(self.cat, self.q, [s.dim for s in subspaces], maps, self.variance, check=False)
        return sub, NaturalTransformation(sub, self, [s.basis for s in subspaces], check=False)

    def quotient(self, subspaces: Sequence[Subspace]):
        """Quotient by invariant subspaces; returns (functor, projection)."""
        sqs = [Subquotient(Subspace.full(d, self.q), s, check=False) for d, s in zip(self.dims, subspaces)]
        maps = []
        for f, m in enumerate(self.maps):
            src, dst = self._ends(f)
            maps.append(FieldMatrix(sqs[dst].coords(mulmod(m.array, sqs[src].reps, self.q)).reshape(sqs[dst].dim, sqs[src].dim), self.q))
        quo = FunctorModule(self.cat, self.q, [s.dim for s in sqs], maps, self.variance, check=False)
        return quo, NaturalTransformation(self, quo, [FieldMatrix(s.projection, self.q) for s in sqs], check=False)

    def _ends(self, f):
        """(domain object, codomain object) of the linear map F(f)."""
        s, t = int(self.cat.sources[f]), int(self.cat.targets[f])
        return (s, t) if self.variance == "covariant" else (t, s)

    def generated(self, gens) -> List[Subspace]:
        """Subfunctor generated by elements ``(object, vector)``."""
        cols = [[] for _ in self.dims]
        for c, v in gens:
            v = np.asarray(v, dtype=np.int64)
            for b in range(self.cat.n_objects):
                for f in (self.cat.hom(c, b) if self.variance == "covariant" else self.cat.hom(b, c)):
                    cols[b].append(self.maps[f].array @ v)
        return [Subspace.span(np.array(c, dtype=np.int64).T if c else np.zeros((d, 0), dtype=np.int64), self.q, d)
                for c, d in zip(cols, self.dims)]

    def __eq__(self, other):
        return isinstance(other, FunctorModule) and self.cat == other.cat and self.q == other.q \
            and self.variance == other.variance and self.dims == other.dims \
            and all(a == b for a, b in zip(self.maps, other.maps))

    def __repr__(self):
        return f"FunctorModule({self.variance}, dims={self.dims}, q={self.q})"


def _same(a, b):
    if a.cat != b.cat or a.q != b.q:
        raise CategoryMismatch("functors over different categories or fields")


class NaturalTransformation:
    """A matrix per object, commuting with the structure maps."""

    def __init__(self, source: FunctorModule, target: FunctorModule, components, check=True):
        _same(source, target)
        if source.variance != target.variance:
            raise CategoryMismatch("natural transformation between functors of different variance")
        self.source, self.target = source, target
        self.components = [c if isinstance(c, FieldMatrix) else
                           FieldMatrix(np.asarray(c, dtype=np.int64).reshape(target.dims[b], source.dims[b]), source.q)
                           for b, c in enumerate(components)]
        if check:
            self.check()

    def __getitem__(self, b):
        return self.components[b]

    def check(self):
        for b, c in enumerate(self.components):
            if c.shape != (self.target.dims[b], self.source.dims[b]):
                raise DimensionMismatch(f"component at object {b} has the wrong shape")
        if not self.is_natural():
            raise NotFunctorial("transformation is not natural")

    def is_natural(self) -> bool:
        src, tgt = self.source, self.target
        for f in range(src.cat.n_morphisms):
            a, b = src._ends(f)
            if self.components[b] @ src.maps[f] != tgt.maps[f] @ self.components[a]:
                return False
        return True

    def __matmul__(self, other: "NaturalTransformation") -> "NaturalTransformation":
        return NaturalTransformation(other.source, self.target,
                                     [x @ y for x, y in zip(self.components, other.components)], check=False)

    def is_zero(self):
        return all(c.is_zero() for c in self.components)

    def is_identity(self):
        return all(c.is_identity() for c in self.components)

    def is_iso(self):
        return all(c.rows == c.cols and rank(c) == c.rows for c in self.components)

    def inverse(self) -> "NaturalTransformation":
        return NaturalTransformation(self.target, self.source, [c.inverse() for c in self.components], check=False)

    def kernel(self) -> List[Subspace]:
        q = self.source.q
        return [Subspace._trusted(_kernel_array(c.array, q), q, c.cols) for c in self.components]

    def image(self) -> List[Subspace]:
        return [Subspace.span(c.array, self.source.q, c.rows) for c in self.components]

    @classmethod
    def identity(cls, f: FunctorModule):
        return cls(f, f, [FieldMatrix.identity(d, f.q) for d in f.dims], check=False)

    @classmethod
    def zero(cls, source, target):
        return cls(source, target, [FieldMatrix.zeros(t, s, source.q) for s, t in zip(source.dims, target.dims)],
                   check=False)

    @property
    def transpose(self) -> "NaturalTransformation":
        """The dual transformation between dual functors (direction reverses)."""
        return NaturalTransformation(self.target.dual(), self.source.dual(), [c.T for c in self.components], check=False)


def representable(cat: EICategory, obj, q, variance="covariant") -> FunctorModule:
    """F_q[hom(obj, -)] (covariant) or F_q[hom(-, obj)] (contravariant), acting by composition."""
    c = cat.index(obj)
    _check_variance(variance)
    bases = [cat.hom(c, b) if variance == "covariant" else cat.hom(b, c) for b in range(cat.n_objects)]
    pos = [{f: i for i, f in enumerate(basis)} for basis in bases]
    maps = []
    for h in range(cat.n_morphisms):
        s, t = int(cat.sources[h]), int(cat.targets[h])
        if variance == "covariant":
            m = np.zeros((len(bases[t]), len(bases[s])), dtype=np.int64)
            for i, f in enumerate(bases[s]):
                m[pos[t][cat.comp[h, f]], i] = 1
        else:
            m = np.zeros((len(bases[s]), len(bases[t])), dtype=np.int64)
            for i, f in enumerate(bases[t]):
                m[pos[s][cat.comp[f, h]], i] = 1
        maps.append(FieldMatrix(m, q))
    return FunctorModule(cat, q, [len(b) for b in bases], maps, variance, check=False)


def constant(cat: EICategory, q, variance="covariant", dim=1) -> FunctorModule:
    """The constant functor with value F_q^dim and identity structure maps."""
    maps = [FieldMatrix.identity(dim, q)] * cat.n_morphisms
    return FunctorModule(cat, q, [dim] * cat.n_objects, maps, variance, check=False)


def _direct_sum_all(cat, q, variance, parts) -> FunctorModule:
    if not parts:
        return FunctorModule.zero(cat, q, variance)
    maps = []
    for f in range(cat.n_morphisms):
        blocks = [p.maps[f] for p in parts]
        maps.append(FieldMatrix.block({(i, i): b for i, b in enumerate(blocks)},
                                      [b.rows for b in blocks], [b.cols for b in blocks], q))
    dims = [sum(p.dims[b] for p in parts) for b in range(cat.n_objects)]
    return FunctorModule(cat, q, dims, maps, variance, check=False)


@dataclass
class CatTensorSpace:
    """N (x)_Pi M as a quotient of the sum over objects of N(b) (x) M(b)."""

    n: FunctorModule
    m: FunctorModule
    offsets: List[int]
    quotient: Subquotient

    @property
    def dim(self):
        return self.quotient.dim

    def induced(self, other: "CatTensorSpace", alpha, beta) -> FieldMatrix:
        """Matrix of alpha (x) beta; each argument a NaturalTransformation or None (identity)."""
        q = self.n.q
        src_total = self.offsets[-1]
        dst_total = other.offsets[-1]
        big = np.zeros((dst_total, src_total), dtype=np.int64)
        for b in range(self.n.cat.n_objects):
            a_b = alpha[b].array if alpha is not None else np.eye(self.n.dims[b], dtype=np.int64)
            b_b = beta[b].array if beta is not None else np.eye(self.m.dims[b], dtype=np.int64)
            big[other.offsets[b]:other.offsets[b + 1], self.offsets[b]:self.offsets[b + 1]] = np.kron(a_b, b_b)
        return FieldMatrix(other.quotient.coords(mulmod(big, self.quotient.reps, q)).reshape(other.dim, self.dim), q)

    def evaluation_map(self, obj) -> FieldMatrix:
        """Canonical map N(obj) (x) M(obj) -> N (x)_Pi M."""
        b = self.n.cat.index(obj)
        d = self.n.dims[b] * self.m.dims[b]
        emb = np.zeros((self.offsets[-1], d), dtype=np.int64)
        emb[self.offsets[b]:self.offsets[b + 1]] = np.eye(d, dtype=np.int64)
        return FieldMatrix(self.quotient.coords(emb).reshape(self.dim, d), self.n.q)


def tensor_over_cat(n: FunctorModule, m: FunctorModule) -> CatTensorSpace:
    """Coequalizer of  sum_f N(b) (x) M(a)  ==>  sum_b N(b) (x) M(b)."""
    _same(n, m)
    if n.variance != "contravariant" or m.variance != "covariant":
        raise CategoryMismatch("tensor product needs a contravariant and a covariant functor")
    cat, q = n.cat, n.q
    offsets = [0]
    for b in range(cat.n_objects):
        offsets.append(offsets[-1] + n.dims[b] * m.dims[b])
    total = offsets[-1]
    rels = []
    for f in range(cat.n_morphisms):
        if f in cat.identities:
            continue
        a, b = int(cat.sources[f]), int(cat.targets[f])
        cols = n.dims[b] * m.dims[a]
        if cols == 0:
            continue
        r = np.zeros((total, cols), dtype=np.int64)
        r[offsets[a]:offsets[a + 1]] += np.kron(n.maps[f].array, np.eye(m.dims[a], dtype=np.int64))
        r[offsets[b]:offsets[b + 1]] -= np.kron(np.eye(n.dims[b], dtype=np.int64), m.maps[f].array)
        rels.append(r)
    rel = np.mod(np.hstack(rels), q) if rels else np.zeros((total, 0), dtype=np.int64)
    sq = Subquotient(Subspace.full(total, q), Subspace.span(rel, q, total), check=False)
    return CatTensorSpace(n, m, offsets, sq)


@dataclass
class CatHomSpace:
    """Natural transformations m1 -> m2, stored as stacked row-major components."""

    m1: FunctorModule
    m2: FunctorModule
    offsets: List[int]
    space: Subspace

    @property
    def dim(self):
        return self.space.dim

    def unpack(self, vec) -> NaturalTransformation:
        comps = []
        for b in range(self.m1.cat.n_objects):
            blk = np.asarray(vec[self.offsets[b]:self.offsets[b + 1]], dtype=np.int64)
            comps.append(FieldMatrix(blk.reshape(self.m2.dims[b], self.m1.dims[b]), self.m1.q))
        return NaturalTransformation(self.m1, self.m2, comps, check=False)

    def pack(self, t: NaturalTransformation) -> np.ndarray:
        return np.concatenate([c.array.reshape(-1) for c in t.components] + [np.zeros(0, dtype=np.int64)])

    def basis(self) -> List[NaturalTransformation]:
        a = self.space.array
        return [self.unpack(a[:, k]) for k in range(a.shape[1])]

    def coords(self, t: NaturalTransformation) -> np.ndarray:
        return self.space.coordinates(self.pack(t))

    def induced(self, other: "CatHomSpace", pre=None, post=None) -> FieldMatrix:
        """Matrix of T -> post o T o pre from this space into ``other``."""
        cols = []
        for t in self.basis():
            u = t
            if pre is not None:
                u = u @ pre
            if post is not None:
                u = post @ u
            cols.append(other.coords(u))
        a = np.array(cols, dtype=np.int64).T.reshape(other.dim, self.dim)
        return FieldMatrix(a, self.m1.q)


def _spanning_generators(m: FunctorModule):
    """A generating set (object, vector): at each object in ``object_order``,
    a basis of what the earlier generators leave uncovered."""
    gens = []
    for c in m.cat.object_order(m.variance):
        span = m.generated(gens)[c]
        if span.dim < m.dims[c]:
            sq = Subquotient(Subspace.full(m.dims[c], m.q), span, check=False)
            gens.extend((c, sq.reps[:, k]) for k in range(sq.dim))
    return gens


def _cover_columns(cat, variance, gens, b):
    """(generator index, morphism) labelling the basis of the covering sum at b."""
    return [(i, f) for i, (c, _) in enumerate(gens)
            for f in (cat.hom(c, b) if variance == "covariant" else cat.hom(b, c))]


class _Descent:
    """Maps out of m1 in terms of images x_i in m2(c_i) of generators (c_i, v_i) of m1.

    Any choice of x defines Phi_x on the covering sum of representables; it
    descends to a transformation m1 -> m2 exactly when ``equations @ x = 0``
    (generators of the kernel of the covering map go to zero).
    """

    def __init__(self, m1: FunctorModule, m2: FunctorModule, gens=None):
        self.m1, self.m2 = m1, m2
        cat, q = m1.cat, m1.q
        self.gens = _spanning_generators(m1) if gens is None else gens
        self.xoff = np.concatenate([[0], np.cumsum([m2.dims[c] for c, _ in self.gens])]).astype(int)
        self.n_x = int(self.xoff[-1])
        self.labels = [_cover_columns(cat, m1.variance, self.gens, b) for b in range(cat.n_objects)]
        cover, self.eps = _covering(m1, self.gens)
        ker, incl = cover.subfunctor(self.eps.kernel())
        rows = [self.phi(c, mulmod(incl[c].array, w, q)) for c, w in _spanning_generators(ker) if m2.dims[c]]
        self.equations = np.vstack(rows) if rows else np.zeros((0, self.n_x), dtype=np.int64)

    def phi(self, b, w):
        """Matrix of x -> Phi_x(w) for w in the covering sum at b."""
        out = np.zeros((self.m2.dims[b], self.n_x), dtype=np.int64)
        for j, (i, f) in enumerate(self.labels[b]):
            if w[j]:
                out[:, self.xoff[i]:self.xoff[i + 1]] += w[j] * self.m2.maps[f].array
        return np.mod(out, self.m1.q)

    def components(self, sol):
        """For solution columns x (n_x by h): arrays (h, d2, d1) of T_b = Phi_x(b) o eps_b^{-1}."""
        q = self.m1.q
        out = []
        for b in range(self.m1.cat.n_objects):
            d1, d2, h = self.m1.dims[b], self.m2.dims[b], sol.shape[1]
            if not d1 or not d2:
                out.append(np.zeros((h, d2, d1), dtype=np.int64))
                continue
            right_inv = _left_inverse(self.eps[b].array.T, q).T
            img = np.zeros((h, d2, len(self.labels[b])), dtype=np.int64)
            for j, (i, f) in enumerate(self.labels[b]):
                img[:, :, j] = mulmod(self.m2.maps[f].array, sol[self.xoff[i]:self.xoff[i + 1]], q).T
            out.append(mulmod(img, right_inv, q))
        return out


def hom_over_cat(m1: FunctorModule, m2: FunctorModule) -> CatHomSpace:
    """Natural transformations m1 -> m2, solved for on generators of m1."""
    _same(m1, m2)
    if m1.variance != m2.variance:
        raise CategoryMismatch("Hom needs two functors of the same variance")
    cat, q = m1.cat, m1.q
    offsets = [0]
    for b in range(cat.n_objects):
        offsets.append(offsets[-1] + m2.dims[b] * m1.dims[b])
    total = offsets[-1]
    if not total:
        return CatHomSpace(m1, m2, offsets, Subspace.zero(0, q))
    desc = _Descent(m1, m2)
    sol = _kernel_array(desc.equations, q) if desc.equations.shape[0] else np.eye(desc.n_x, dtype=np.int64)
    comps = desc.components(sol)
    h = sol.shape[1]
    cols = np.concatenate([c.reshape(h, c.shape[1] * c.shape[2]) for c in comps], axis=1).T
    return CatHomSpace(m1, m2, offsets, Subspace._trusted(np.ascontiguousarray(cols), q, total))


class FunctorComplex:
    """Chain complex of functor modules; ``diffs[k]``: F_k -> F_{k-1}."""

    def __init__(self, modules: Sequence[FunctorModule], diffs: Dict[int, NaturalTransformation], check=True):
        self.modules = list(modules)
        self.diffs = dict(diffs)
        if not self.modules:
            raise BadParams("functor complex needs at least one degree")
        self.cat, self.q, self.variance = self.modules[0].cat, self.modules[0].q, self.modules[0].variance
        if check:
            self.check()

    @property
    def top(self):
        return len(self.modules) - 1

    def d(self, k) -> NaturalTransformation:
        if k in self.diffs:
            return self.diffs[k]
        return NaturalTransformation.zero(self.module(k), self.module(k - 1))

    def module(self, k) -> FunctorModule:
        if 0 <= k < len(self.modules):
            return self.modules[k]
        return FunctorModule.zero(self.cat, self.q, self.variance)

    def check(self):
        for k, d in self.diffs.items():
            if d.source is not self.modules[k] and d.source != self.modules[k]:
                raise DimensionMismatch(f"differential {k} has the wrong source")
            if not d.is_natural():
                raise NotFunctorial(f"differential {k} is not natural")
        for k in range(2, self.top + 1):
            if not (self.d(k - 1) @ self.d(k)).is_zero():
                raise NotAComplex(f"differential squares to a nonzero map at degree {k}")

    def evaluate(self, obj):
        """The chain complex of spaces at one object."""
        from .chains import VectorComplex
        b = self.cat.index(obj)
        return VectorComplex([m.dims[b] for m in self.modules],
                             {k: d[b] for k, d in self.diffs.items()}, self.q, check=False)

    def homology(self) -> List[FunctorModule]:
        """Objectwise homology with the induced structure maps."""
        out = []
        for k in range(self.top + 1):
            mod = self.modules[k]
            cyc = self.d(k).kernel() if k > 0 else [Subspace.full(d, self.q) for d in mod.dims]
            bnd = self.d(k + 1).image() if k < self.top else [Subspace.zero(d, self.q) for d in mod.dims]
            sqs = [Subquotient(z, b, check=False) for z, b in zip(cyc, bnd)]
            maps = []
            for f, m in enumerate(mod.maps):
                a, b = mod._ends(f)
                maps.append(FieldMatrix(sqs[b].coords(mulmod(m.array, sqs[a].reps, self.q)).reshape(sqs[b].dim, sqs[a].dim), self.q))
            out.append(FunctorModule(self.cat, self.q, [s.dim for s in sqs], maps, self.variance, check=False))
        return out

    def tensor_with(self, m: FunctorModule):
        """C (x)_Pi M as a chain complex of spaces (contravariant C, covariant M)."""
        from .chains import VectorComplex
        spaces = [tensor_over_cat(c, m) for c in self.modules]
        diffs = {k: spaces[k].induced(spaces[k - 1], self.diffs[k], None) for k in self.diffs}
        return VectorComplex([s.dim for s in spaces], diffs, self.q, check=False)

    def hom_into(self, n: FunctorModule):
        """Hom_Pi(C, N) as a cochain complex of spaces."""
        from .chains import VectorComplex
        spaces = [hom_over_cat(c, n) for c in self.modules]
        diffs = {k - 1: spaces[k - 1].induced(spaces[k], pre=self.diffs[k]) for k in self.diffs}
        return VectorComplex([s.dim for s in spaces], diffs, self.q, cochain=True, check=False)


@dataclass
class FunctorResolution:
    """Projective resolution P_* -> M by sums of representables.

    ``summands[k]`` lists the objects of the representables making up P_k,
    or is None when P_k is a projective functor kept as is (a split
    summand detected during the construction).
    """

    target: FunctorModule
    modules: List[FunctorModule]
    maps: Dict[int, NaturalTransformation]
    augmentation: NaturalTransformation
    summands: List[Optional[List[int]]]
    complete: bool

    @property
    def length(self):
        return len(self.modules) - 1

    def module(self, k) -> FunctorModule:
        if 0 <= k < len(self.modules):
            return self.modules[k]
        return FunctorModule.zero(self.target.cat, self.target.q, self.target.variance)

    def d(self, k) -> NaturalTransformation:
        if k in self.maps:
            return self.maps[k]
        return NaturalTransformation.zero(self.module(k), self.module(k - 1))

    def check_exact(self) -> bool:
        """Objectwise exactness of the augmented complex below the top degree."""
        aug = self.augmentation
        if any(rank(c) != c.rows for c in aug.components):
            return False
        top = len(self.modules) if self.complete else len(self.modules) - 1
        for k in range(top):
            out = aug if k == 0 else self.d(k)
            inc = self.d(k + 1)
            if not (out @ inc).is_zero():
                return False
            for b in range(self.target.cat.n_objects):
                if out[b].cols - rank(out[b]) != rank(inc[b]):
                    return False
        return True

    def as_complex(self) -> FunctorComplex:
        return FunctorComplex(self.modules, self.maps, check=False)


def _covering(m: FunctorModule, gens):
    """Sum of representables on generators (object, vector) with its map to m."""
    cat, q = m.cat, m.q
    reps = [representable(cat, c, q, m.variance) for c, _ in gens]
    total = _direct_sum_all(cat, q, m.variance, reps)
    comps = []
    for b in range(cat.n_objects):
        cols = []
        for c, v in gens:
            for f in (cat.hom(c, b) if m.variance == "covariant" else cat.hom(b, c)):
                cols.append(m.maps[f].array @ np.asarray(v, dtype=np.int64))
        a = np.array(cols, dtype=np.int64).T if cols else np.zeros((m.dims[b], 0), dtype=np.int64)
        comps.append(FieldMatrix(a.reshape(m.dims[b], total.dims[b]), q))
    return total, NaturalTransformation(total, m, comps, check=False)


def _is_prime_power_of(n, q):
    while n % q == 0:
        n //= q
    return n == 1


def _choose_generators(m: FunctorModule, strategy="greedy"):
    """Generators (object, vector) of m, processed in ``object_order``."""
    cat, q = m.cat, m.q
    if strategy == "naive":
        return [(b, np.eye(m.dims[b], dtype=np.int64)[:, i]) for b in range(cat.n_objects) for i in range(m.dims[b])]
    gens = []
    for c in cat.object_order(m.variance):
        span = m.generated(gens)
        if span[c].dim == m.dims[c]:
            continue
        autos = cat.hom(c, c)
        if _is_prime_power_of(len(autos), q):
            # Nakayama: lifts of a basis of M(c) / (already generated + augmentation ideal) suffice
            eye = np.eye(m.dims[c], dtype=np.int64)
            rel = [m.maps[g].array - eye for g in autos]
            den = Subspace.span(np.mod(np.hstack([span[c].array] + rel), q), q, m.dims[c])
            sq = Subquotient(Subspace.full(m.dims[c], q), den, check=False)
            gens.extend((c, sq.reps[:, k]) for k in range(sq.dim))
            continue
        # the gain of a candidate at c is the span of its Aut(c)-orbit over what is covered
        acts = np.stack([m.maps[g].array for g in autos])
        while span[c].dim < m.dims[c]:
            best, best_gain = None, -1
            for k in range(m.dims[c]):
                if span[c].contains(np.eye(m.dims[c], dtype=np.int64)[:, k]):
                    continue
                gain = rank(FieldMatrix(np.hstack([span[c].array, acts[:, :, k].T]), q))
                if gain > best_gain:
                    best, best_gain = np.eye(m.dims[c], dtype=np.int64)[:, k], gain
            gens.append((c, best))
            span = m.generated(gens)
    return gens


def is_projective(m: FunctorModule, gens=None) -> bool:
    """Whether the covering map by representables on ``gens`` (default: greedy) splits."""
    if m.total_dim == 0:
        return True
    gens = _choose_generators(m) if gens is None else gens
    p, eps = _covering(m, gens)
    return _section(m, p, eps, gens) is not None


def _section(m, p, eps, gens) -> Optional[NaturalTransformation]:
    """A transformation s: m -> p with eps o s = id, or None when eps does not split.

    Solved on generators: s(v_i) = y_i with eps(y_i) = v_i, subject to the
    naturality equations of ``_Descent``.
    """
    from .fieldlin import NoSolution, solve
    q = m.q
    desc = _Descent(m, p, gens)
    rows, rhs = [desc.equations], [np.zeros(desc.equations.shape[0], dtype=np.int64)]
    for i, (c, v) in enumerate(desc.gens):
        blk = np.zeros((m.dims[c], desc.n_x), dtype=np.int64)
        blk[:, desc.xoff[i]:desc.xoff[i + 1]] = eps[c].array
        rows.append(blk)
        rhs.append(np.mod(np.asarray(v, dtype=np.int64), q))
    try:
        y = solve(FieldMatrix(np.vstack(rows), q), np.concatenate(rhs))
    except NoSolution:
        return None
    comps = desc.components(y.reshape(-1, 1))
    return NaturalTransformation(m, p, [FieldMatrix(c[0], q) for c in comps], check=False)


def functor_projective_resolution(m: FunctorModule, length: int, strategy="greedy",
                                  detect_projective=True) -> FunctorResolution:
    """Cover by sums of representables, take the kernel, repeat.

    A term whose covering map splits is projective; with
    ``detect_projective`` it is kept as the last term and the resolution
    stops there.
    """
    if length < 0:
        raise BadParams("resolution length must be nonnegative")
    cat, q = m.cat, m.q
    modules, maps, summands = [], {}, []
    current = m
    incl = NaturalTransformation.identity(m)
    augmentation = None
    for k in range(length + 1):
        gens = _choose_generators(current, strategy)
        p, eps = _covering(current, gens)
        ker = eps.kernel()
        # projectivity does not depend on the cover, so test it on the smaller greedy one
        split = detect_projective and any(s.dim for s in ker) and \
            is_projective(current, None if strategy == "naive" else gens)
        if split:
            p, eps, ker = current, NaturalTransformation.identity(current), [Subspace.zero(d, q) for d in current.dims]
            summands.append(None)
        else:
            summands.append([int(c) for c, _ in gens])
        modules.append(p)
        to_prev = incl @ eps
        if k == 0:
            augmentation = to_prev
        else:
            maps[k] = to_prev
        if all(s.dim == 0 for s in ker):
            return FunctorResolution(m, modules, maps, augmentation, summands, True)
        current, incl = p.subfunctor(ker)
    return FunctorResolution(m, modules, maps, augmentation, summands, False)


@dataclass
class FunctorCoResolution:
    """Injective resolution N -> I^0 -> I^1 -> ... (``maps[k]``: I^k -> I^{k+1})."""

    target: FunctorModule
    modules: List[FunctorModule]
    maps: Dict[int, NaturalTransformation]
    coaugmentation: NaturalTransformation
    complete: bool

    @property
    def length(self):
        return len(self.modules) - 1

    def module(self, k) -> FunctorModule:
        if 0 <= k < len(self.modules):
            return self.modules[k]
        return FunctorModule.zero(self.target.cat, self.target.q, self.target.variance)

    def d(self, k) -> NaturalTransformation:
        if k in self.maps:
            return self.maps[k]
        return NaturalTransformation.zero(self.module(k), self.module(k + 1))

    def check_exact(self) -> bool:
        co = self.coaugmentation
        if any(rank(c) != c.cols for c in co.components):
            return False
        top = len(self.modules) if self.complete else len(self.modules) - 1
        for k in range(top):
            inc = co if k == 0 else self.d(k - 1)
            out = self.d(k)
            if not (out @ inc).is_zero():
                return False
            for b in range(self.target.cat.n_objects):
                if out[b].cols - rank(out[b]) != rank(inc[b]):
                    return False
        return True


def functor_injective_resolution(n: FunctorModule, length: int, strategy="greedy",
                                 detect_projective=True) -> FunctorCoResolution:
    """Dual of a projective resolution of the dual functor.

    Duals of representables are the functors J_{c} = Hom(F_q[hom(c,-)], F_q),
    which are injective by the dual Yoneda argument.
    """
    res = functor_projective_resolution(n.dual(), length, strategy, detect_projective)
    mods = [p.dual() for p in res.modules]
    maps = {k - 1: NaturalTransformation(mods[k - 1], mods[k], [c.T for c in d.components], check=False)
            for k, d in res.maps.items()}
    co = NaturalTransformation(n, mods[0], [c.T for c in res.augmentation.components], check=False)
    return FunctorCoResolution(n, mods, maps, co, res.complete)


def _graded(dims, diffs, q, cochain):
    from .chains import VectorComplex, homology
    return homology(VectorComplex(dims, diffs, q, cochain=cochain, check=False), check=False).dims


def tor_over_cat(n: FunctorModule, m: FunctorModule, max_p: int, resolution=None, strategy="greedy") -> List[int]:
    """dim Tor_p^Pi(N, M) for p <= max_p, from N (x)_Pi P_*(M)."""
    _same(n, m)
    res = resolution or functor_projective_resolution(m, max_p + 1, strategy)
    spaces = [tensor_over_cat(n, res.module(k)) for k in range(max_p + 2)]
    diffs = {k: spaces[k].induced(spaces[k - 1], None, res.d(k)) for k in range(1, max_p + 2)}
    return _graded([s.dim for s in spaces], diffs, n.q, cochain=False)[:max_p + 1]


def ext_over_cat(m: FunctorModule, n: FunctorModule, max_p: int, coresolution=None, strategy="greedy") -> List[int]:
    """dim Ext^p_Pi(M, N) for p <= max_p, from Hom_Pi(M, I^*(N))."""
    _same(m, n)
    cores = coresolution or functor_injective_resolution(n, max_p + 1, strategy)
    spaces = [hom_over_cat(m, cores.module(k)) for k in range(max_p + 2)]
    diffs = {k: spaces[k].induced(spaces[k + 1], post=cores.d(k)) for k in range(max_p + 1)}
    return _graded([s.dim for s in spaces], diffs, n.q, cochain=True)[:max_p + 1]


@dataclass
class Decomposition:
    """An explicit isomorphism from a sum of representables onto a functor."""

    objects: List[int]
    generators: list
    free: FunctorModule
    iso: NaturalTransformation
    inverse: NaturalTransformation

    def verify(self) -> bool:
        return self.iso.is_natural() and self.inverse.is_natural() \
            and (self.iso @ self.inverse).is_identity() and (self.inverse @ self.iso).is_identity()


def decompose_into_representables(f: FunctorModule, tries=64, seed=0) -> Decomposition:
    """Find generators whose representables map isomorphically onto f.

    Objects are visited in ``object_order``.  A new generator at c is kept
    only when the generated subfunctor grows by the full size of the
    representable at c (so the map from the sum stays injective); the
    search ends when every object is covered (surjectivity).
    """
    cat, q = f.cat, f.q
    rng = np.random.default_rng(seed)
    gens, total = [], 0
    for c in cat.object_order(f.variance):
        rep_size = sum(len(cat.hom(c, b) if f.variance == "covariant" else cat.hom(b, c))
                       for b in range(cat.n_objects))
        span = f.generated(gens)
        while span[c].dim < f.dims[c]:
            sq = Subquotient(Subspace.full(f.dims[c], q), span[c], check=False)
            candidates = [sq.reps[:, k] for k in range(sq.dim)]
            candidates += [np.mod(rng.integers(0, q, size=f.dims[c]), q) for _ in range(tries)]
            for v in candidates:
                if span[c].contains(v):
                    continue
                new_span = f.generated(gens + [(c, v)])
                new_total = sum(s.dim for s in new_span)
                if new_total == total + rep_size:
                    gens.append((c, v))
                    span, total = new_span, new_total
                    break
            else:
                raise NotFree(f"no free generator found at object {cat.objects[c]!r}")
    if total != f.total_dim:
        raise NotFree("generators do not cover the functor")
    free, iso = _covering(f, gens)
    if not iso.is_iso():
        raise NotFree("covering map is not an isomorphism")
    dec = Decomposition([int(c) for c, _ in gens], gens, free, iso, iso.inverse())
    if not dec.verify():
        raise NotFree("inverse transformation failed verification")
    return dec


def fixed_subfunctor_dim(n: FunctorModule):
    """dim Hom_Pi(constant, N), with the realizing subspace when available.

    Returns (dim, subspace, object).  For a contravariant N the subspace
    lives at a weakly terminal object; for a covariant N at a weakly
    initial one.  When no such object exists subspace and object are None.
    """
    const = constant(n.cat, n.q, n.variance)
    hs = hom_over_cat(const, n)
    w = n.cat.weakly_terminal() if n.variance == "contravariant" else n.cat.weakly_initial()
    if w is None:
        return hs.dim, None, None
    vecs = [t[w].array[:, 0] for t in hs.basis()]
    arr = np.array(vecs, dtype=np.int64).T if vecs else np.zeros((n.dims[w], 0), dtype=np.int64)
    return hs.dim, Subspace.span(arr.reshape(n.dims[w], len(vecs)), n.q, n.dims[w]), w
