"""Finite groups, group rings F_q[pi] and their finite-dimensional modules.

Module conventions: a left module stores ``action[g]`` acting on column
vectors with ``action[g] @ action[h] == action[g*h]``; a right module
stores the matrix of ``n -> n.g`` so that ``action[g] @ action[h] ==
action[h*g]``.  Group-ring elements are coefficient vectors of length |pi|
indexed by the group's element order.
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, List, Optional, Sequence

import numpy as np

from .errors import BadParams, DimensionMismatch, GroupMismatch, NotAComplex, NotCyclic
from .fieldlin import FieldMatrix, Subquotient, Subspace, _kernel_array, check_modulus, solve

__all__ = [
    "FiniteGroup", "GroupRingModule", "FreeModuleComplex", "Resolution", "CoResolution",
    "HomSpace", "TensorSpace", "fixed_points", "coinvariants", "tensor_over_ring",
    "hom_over_ring", "periodic_resolution", "projective_resolution",
    "injective_resolution", "tor_over_ring", "ext_over_ring", "homology_modules",
]


class FiniteGroup:
    """Finite group given by its multiplication table (``table[a, b] = a*b``)."""

    def __init__(self, table, identity=0, names=None, check=True):
        t = np.array(table, dtype=np.int64)
        if t.ndim != 2 or t.shape[0] != t.shape[1]:
            raise BadParams("multiplication table must be square")
        t.setflags(write=False)
        self.table = t
        self.order = t.shape[0]
        self.identity = int(identity)
        self.names = list(names) if names is not None else [f"g{i}" for i in range(self.order)]
        if check:
            self.check()

    def check(self):
        n, t = self.order, self.table
        idx = np.arange(n)
        if t.min() < 0 or t.max() >= n:
            raise BadParams("table entries out of range")
        if not (np.array_equal(t[self.identity], idx) and np.array_equal(t[:, self.identity], idx)):
            raise BadParams("identity element is not a two-sided unit")
        for row in t:
            if len(set(row.tolist())) != n:
                raise BadParams("table is not a Latin square (missing inverses)")
        lhs = t[t[:, :, None], idx[None, None, :]]   # (a*b)*c
        rhs = t[idx[:, None, None], t[None, :, :]]   # a*(b*c)
        if not np.array_equal(lhs, rhs):
            raise BadParams("multiplication is not associative")

    @classmethod
    def cyclic(cls, n):
        if n < 1:
            raise BadParams("cyclic group order must be positive")
        i = np.arange(n)
        return cls((i[:, None] + i[None, :]) % n, 0, [f"g^{k}" for k in range(n)], check=False)

    @classmethod
    def from_permutations(cls, generators):
        """Group generated by permutations (tuples of images)."""
        gens = [tuple(g) for g in generators]
        deg = len(gens[0]) if gens else 0
        e = tuple(range(deg))
        elems, frontier = [e], [e]
        index = {e: 0}
        while frontier:
            new = []
            for x in frontier:
                for g in gens:
                    y = tuple(g[x[i]] for i in range(deg))
                    if y not in index:
                        index[y] = len(elems)
                        elems.append(y)
                        new.append(y)
            frontier = new
        n = len(elems)
        table = np.zeros((n, n), dtype=np.int64)
        for a, x in enumerate(elems):
            for b, y in enumerate(elems):
                table[a, b] = index[tuple(x[y[i]] for i in range(deg))]
        return cls(table, 0, [str(x) for x in elems], check=False)

    @classmethod
    def dihedral(cls, n):
        rot = tuple((i + 1) % n for i in range(n))
        ref = tuple((-i) % n for i in range(n))
        return cls.from_permutations([rot, ref])

    def direct_product(self, other: "FiniteGroup") -> "FiniteGroup":
        a, b = self.order, other.order
        table = np.zeros((a * b, a * b), dtype=np.int64)
        for x in range(a * b):
            for y in range(a * b):
                table[x, y] = self.table[x // b, y // b] * b + other.table[x % b, y % b]
        names = [f"({u},{v})" for u in self.names for v in other.names]
        return FiniteGroup(table, self.identity * b + other.identity, names, check=False)

    def mul(self, a, b):
        return int(self.table[a, b])

    @cached_property
    def inverses(self) -> np.ndarray:
        inv = np.zeros(self.order, dtype=np.int64)
        for a in range(self.order):
            inv[a] = int(np.flatnonzero(self.table[a] == self.identity)[0])
        return inv

    def power(self, g, k):
        x = self.identity
        for _ in range(k % self.element_order(g) if k >= 0 else 0):
            x = self.mul(x, g)
        return x

    def element_order(self, g):
        k, x = 1, g
        while x != self.identity:
            x = self.mul(x, g)
            k += 1
        return k

    @cached_property
    def generators(self) -> List[int]:
        """A small generating set, chosen greedily in element order."""
        gens, span = [], {self.identity}
        for g in range(self.order):
            if g not in span:
                gens.append(g)
                span = self.closure(gens)
        return gens

    def closure(self, elems) -> frozenset:
        span = {self.identity} | set(elems)
        frontier = list(span)
        while frontier:
            new = []
            for x in frontier:
                for g in elems:
                    y = self.mul(x, g)
                    if y not in span:
                        span.add(y)
                        new.append(y)
            frontier = new
        return frozenset(span)

    def cyclic_generator(self) -> Optional[int]:
        for g in range(self.order):
            if self.element_order(g) == self.order:
                return g
        return None

    def is_abelian(self) -> bool:
        return np.array_equal(self.table, self.table.T)

    def is_p_group(self, p) -> bool:
        n = self.order
        while n % p == 0:
            n //= p
        return n == 1

    @cached_property
    def subgroups(self) -> List[frozenset]:
        """All subgroups, sorted by (order, elements)."""
        found = {frozenset([self.identity])}
        frontier = list(found)
        while frontier:
            new = []
            for h in frontier:
                for g in range(self.order):
                    if g not in h:
                        k = self.closure(list(h) + [g])
                        if k not in found:
                            found.add(k)
                            new.append(k)
            frontier = new
        return sorted(found, key=lambda h: (len(h), sorted(h)))

    def conjugate(self, g, h) -> frozenset:
        gi = self.inverses[g]
        return frozenset(self.mul(self.mul(g, x), gi) for x in h)

    def conjugacy_class_reps(self) -> List[frozenset]:
        """One subgroup per conjugacy class (first in ``subgroups`` order)."""
        reps, seen = [], set()
        for h in self.subgroups:
            if h in seen:
                continue
            reps.append(h)
            seen.update(self.conjugate(g, h) for g in range(self.order))
        return reps

    def left_mult_matrix(self, a, q) -> np.ndarray:
        """Matrix of x -> a*x on F_q[pi] in the group basis."""
        n = self.order
        m = np.zeros((n, n), dtype=np.int64)
        for g in range(n):
            if a[g] % q:
                m[self.table[g], np.arange(n)] += a[g]
        return np.mod(m, q)

    def right_mult_matrix(self, a, q) -> np.ndarray:
        """Matrix of x -> x*a on F_q[pi] in the group basis."""
        n = self.order
        m = np.zeros((n, n), dtype=np.int64)
        for g in range(n):
            if a[g] % q:
                m[self.table[:, g], np.arange(n)] += a[g]
        return np.mod(m, q)

    def antipode(self, a) -> np.ndarray:
        """sum a_g g  ->  sum a_g g^-1."""
        out = np.zeros(self.order, dtype=np.int64)
        out[self.inverses] = np.asarray(a)
        return out

    def element(self, terms: Dict[int, int]) -> np.ndarray:
        v = np.zeros(self.order, dtype=np.int64)
        for g, c in terms.items():
            v[g] += c
        return v

    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and np.array_equal(self.table, other.table) \
            and self.identity == other.identity

    def __hash__(self):
        return hash((self.order, self.table.tobytes()))

    def __repr__(self):
        return f"FiniteGroup(order={self.order})"


def _same_group(a, b):
    if a.group != b.group or a.q != b.q:
        raise GroupMismatch("modules over different groups or fields")


class GroupRingModule:
    """Finite-dimensional left or right F_q[pi]-module."""

    def __init__(self, group: FiniteGroup, q, action, side="left", check=True):
        if side not in ("left", "right"):
            raise BadParams("side must be 'left' or 'right'")
        self.group = group
        self.q = check_modulus(q)
        self.side = side
        mats = [m if isinstance(m, FieldMatrix) else FieldMatrix(m, q) for m in action]
        if len(mats) != group.order:
            raise DimensionMismatch("need one action matrix per group element")
        self.dim = mats[0].rows if mats else 0
        self.action = mats
        if check:
            self.check()

    def check(self):
        g = self.group
        for m in self.action:
            if m.shape != (self.dim, self.dim):
                raise DimensionMismatch("action matrices must be square of size dim")
        if not self.action[g.identity].is_identity():
            raise BadParams("identity must act trivially")
        for a in range(g.order):
            for b in g.generators:
                prod = self.action[a] @ self.action[b]
                ab = g.mul(a, b) if self.side == "left" else g.mul(b, a)
                if prod != self.action[ab]:
                    raise BadParams("action is not a homomorphism")

    @classmethod
    def trivial(cls, group, q, dim=1, side="left"):
        i = FieldMatrix.identity(dim, q)
        return cls(group, q, [i] * group.order, side, check=False)

    @classmethod
    def character(cls, group, q, values, side="left"):
        """One-dimensional module from a homomorphism pi -> F_q^*."""
        return cls(group, q, [FieldMatrix([[v]], q) for v in values], side)

    @classmethod
    def sign(cls, group, q, side="left"):
        """Sign character of a group with a unique subgroup of index 2 (e.g. C_2)."""
        gen = group.cyclic_generator()
        if gen is None or group.order % 2:
            raise NotCyclic("sign module needs an even-order cyclic group")
        vals = [0] * group.order
        x = group.identity
        for k in range(group.order):
            vals[x] = (-1) ** k
            x = group.mul(x, gen)
        return cls.character(group, q, vals, side)

    @classmethod
    def free(cls, group, q, rank=1, side="left"):
        """F_q[pi]^rank in the basis (summand, group element)."""
        n = group.order
        mats = []
        for g in range(n):
            e = np.zeros(n, dtype=np.int64)
            e[g] = 1
            blk = group.left_mult_matrix(e, q) if side == "left" else group.right_mult_matrix(e, q)
            mats.append(FieldMatrix(np.kron(np.eye(rank, dtype=np.int64), blk), q))
        return cls(group, q, mats, side, check=False)

    regular = free

    @classmethod
    def cofree(cls, group, q, dim_a=1, side="right"):
        """Hom_{F_q}(F_q[pi], A) with A of dimension ``dim_a``."""
        other = "left" if side == "right" else "right"
        return cls.free(group, q, dim_a, other).dual()

    def dual(self) -> "GroupRingModule":
        """Hom_{F_q}(M, F_q); the side flips and matrices transpose."""
        side = "right" if self.side == "left" else "left"
        return GroupRingModule(self.group, self.q, [m.T for m in self.action], side, check=False)

    def opposite(self) -> "GroupRingModule":
        """Same space with g acting as g^-1; switches side."""
        side = "right" if self.side == "left" else "left"
        inv = self.group.inverses
        return GroupRingModule(self.group, self.q, [self.action[inv[g]] for g in range(self.group.order)],
                               side, check=False)

    def direct_sum(self, other: "GroupRingModule") -> "GroupRingModule":
        _same_group(self, other)
        if self.side != other.side:
            raise GroupMismatch("cannot add modules of different sides")
        mats = [FieldMatrix.block({(0, 0): a, (1, 1): b}, [self.dim, other.dim], [self.dim, other.dim], self.q)
                for a, b in zip(self.action, other.action)]
        return GroupRingModule(self.group, self.q, mats, self.side, check=False)

    def rho(self, a) -> FieldMatrix:
        """Matrix of the group-ring element ``a`` acting on the module."""
        out = np.zeros((self.dim, self.dim), dtype=np.int64)
        for g in np.flatnonzero(np.mod(a, self.q)):
            out += int(a[g]) * self.action[g].array
        return FieldMatrix(out, self.q)

    def submodule(self, sub: Subspace) -> "tuple[GroupRingModule, FieldMatrix]":
        """Restriction to an invariant subspace; returns (module, inclusion)."""
        basis = sub.array
        mats = [FieldMatrix(sub.coordinates(m.array @ basis), self.q) for m in self.action]
        return GroupRingModule(self.group, self.q, mats, self.side, check=False), sub.basis

    def quotient(self, sub: Subspace) -> "tuple[GroupRingModule, FieldMatrix]":
        """Quotient by an invariant subspace; returns (module, projection)."""
        sq = Subquotient(Subspace.full(self.dim, self.q), sub, check=False)
        mats = [FieldMatrix(sq.coords(m.array @ sq.reps), self.q) for m in self.action]
        return GroupRingModule(self.group, self.q, mats, self.side, check=False), FieldMatrix(sq.projection, self.q)

    def generated(self, vectors) -> Subspace:
        """Submodule generated by the columns of ``vectors``."""
        v = np.asarray(vectors, dtype=np.int64).reshape(self.dim, -1)
        span = Subspace.span(v, self.q, self.dim)
        while True:
            more = np.hstack([span.array] + [m.array @ span.array for m in
                                             (self.action[g] for g in self.group.generators)])
            nxt = Subspace.span(more, self.q, self.dim)
            if nxt.dim == span.dim:
                return span
            span = nxt

    def is_equivariant(self, other: "GroupRingModule", t: FieldMatrix) -> bool:
        """Whether t: self -> other commutes with the action."""
        return all(t @ self.action[g] == other.action[g] @ t for g in self.group.generators)

    def __repr__(self):
        return f"GroupRingModule({self.side}, dim={self.dim}, |pi|={self.group.order}, q={self.q})"


def fixed_points(m: GroupRingModule) -> Subspace:
    """{v : g v = v for all g}."""
    if m.dim == 0:
        return Subspace.zero(0, m.q)
    eye = np.eye(m.dim, dtype=np.int64)
    stack = np.vstack([m.action[g].array - eye for g in m.group.generators] or [np.zeros((0, m.dim), dtype=np.int64)])
    return Subspace._trusted(_kernel_array(np.mod(stack, m.q), m.q), m.q, m.dim)


def coinvariants(m: GroupRingModule):
    """M / span{gv - v}; returns (dim, projection matrix of full row rank)."""
    eye = np.eye(m.dim, dtype=np.int64)
    rel = np.hstack([m.action[g].array - eye for g in m.group.generators] or [np.zeros((m.dim, 0), dtype=np.int64)])
    sq = Subquotient(Subspace.full(m.dim, m.q), Subspace.span(np.mod(rel, m.q), m.q, m.dim), check=False)
    return sq.dim, FieldMatrix(sq.projection, m.q)


@dataclass
class TensorSpace:
    """N (x)_{F_q[pi]} M as a quotient of N (x)_{F_q} M (index i*dim M + j)."""

    n: GroupRingModule
    m: GroupRingModule
    quotient: Subquotient

    @property
    def dim(self):
        return self.quotient.dim

    @property
    def projection(self) -> FieldMatrix:
        return FieldMatrix(self.quotient.projection, self.n.q)

    def induced(self, other: "TensorSpace", alpha: Optional[FieldMatrix], beta: Optional[FieldMatrix]) -> FieldMatrix:
        """Matrix of alpha (x) beta from this tensor space to ``other`` (None = identity)."""
        a = alpha.array if alpha is not None else np.eye(self.n.dim, dtype=np.int64)
        b = beta.array if beta is not None else np.eye(self.m.dim, dtype=np.int64)
        img = np.kron(a, b) @ self.quotient.reps
        return FieldMatrix(other.quotient.coords(img).reshape(other.dim, self.dim), self.n.q)


def tensor_over_ring(n: GroupRingModule, m: GroupRingModule) -> TensorSpace:
    _same_group(n, m)
    if n.side != "right" or m.side != "left":
        raise GroupMismatch("tensor product needs a right module on the left and a left module on the right")
    q = n.q
    d = n.dim * m.dim
    rels = []
    for g in n.group.generators:
        rels.append(np.kron(n.action[g].array, np.eye(m.dim, dtype=np.int64))
                    - np.kron(np.eye(n.dim, dtype=np.int64), m.action[g].array))
    rel = np.mod(np.hstack(rels), q) if rels else np.zeros((d, 0), dtype=np.int64)
    sq = Subquotient(Subspace.full(d, q), Subspace.span(rel, q, d), check=False)
    return TensorSpace(n, m, sq)


@dataclass
class HomSpace:
    """Hom_{F_q[pi]}(M1, M2); basis matrices stored row-major as columns."""

    m1: GroupRingModule
    m2: GroupRingModule
    space: Subspace

    @property
    def dim(self):
        return self.space.dim

    def basis(self) -> List[FieldMatrix]:
        a = self.space.array
        return [FieldMatrix(a[:, k].reshape(self.m2.dim, self.m1.dim), self.m1.q) for k in range(a.shape[1])]

    def coords(self, t: FieldMatrix) -> np.ndarray:
        return self.space.coordinates(t.array.reshape(-1))

    def induced(self, other: "HomSpace", pre: Optional[FieldMatrix] = None,
                post: Optional[FieldMatrix] = None) -> FieldMatrix:
        """Matrix of T -> post . T . pre from this space into ``other``."""
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


def hom_over_ring(m1: GroupRingModule, m2: GroupRingModule) -> HomSpace:
    """Equivariant maps T with T a1(g) = a2(g) T."""
    _same_group(m1, m2)
    if m1.side != m2.side:
        raise GroupMismatch("Hom needs two modules on the same side")
    q, d1, d2 = m1.q, m1.dim, m2.dim
    eqs = [np.kron(np.eye(d2, dtype=np.int64), m1.action[g].array.T)
           - np.kron(m2.action[g].array, np.eye(d1, dtype=np.int64)) for g in m1.group.generators]
    if not eqs or d1 * d2 == 0:
        sp = Subspace.full(d1 * d2, q)
    else:
        sp = Subspace._trusted(_kernel_array(np.mod(np.vstack(eqs), q), q), q, d1 * d2)
    return HomSpace(m1, m2, sp)


class FreeModuleComplex:
    """Complex of free F_q[pi]-modules with boundaries given by group-ring matrices.

    ``boundaries[k]`` has shape (rank[k-1], rank[k], |pi|).  For ``side ==
    'right'`` (chains of a universal cover) the boundary acts by left
    multiplication: e_j -> sum_i e_i a_ij.  For ``side == 'left'`` it acts
    by right multiplication.
    """

    def __init__(self, group, q, ranks, boundaries, side="right", check=True):
        self.group = group
        self.q = check_modulus(q)
        self.ranks = [int(r) for r in ranks]
        self.side = side
        self.boundaries = {}
        for k, a in boundaries.items():
            a = np.mod(np.asarray(a, dtype=np.int64), q).reshape(self.rank(k - 1), self.rank(k), group.order)
            self.boundaries[k] = a
        if check:
            self.check()

    def rank(self, k):
        return self.ranks[k] if 0 <= k < len(self.ranks) else 0

    @property
    def top(self):
        return len(self.ranks) - 1

    def boundary(self, k) -> np.ndarray:
        a = self.boundaries.get(k)
        if a is None:
            return np.zeros((self.rank(k - 1), self.rank(k), self.group.order), dtype=np.int64)
        return a

    def module(self, k) -> GroupRingModule:
        return GroupRingModule.free(self.group, self.q, self.rank(k), self.side)

    def expand(self, k) -> FieldMatrix:
        """The boundary leaving degree k as an F_q matrix on the free modules."""
        a = self.boundary(k)
        n = self.group.order
        mult = self.group.left_mult_matrix if self.side == "right" else self.group.right_mult_matrix
        out = np.zeros((a.shape[0] * n, a.shape[1] * n), dtype=np.int64)
        for i in range(a.shape[0]):
            for j in range(a.shape[1]):
                if a[i, j].any():
                    out[i * n:(i + 1) * n, j * n:(j + 1) * n] = mult(a[i, j], self.q)
        return FieldMatrix(out, self.q)

    def check(self):
        for k in range(2, self.top + 1):
            if not (self.expand(k - 1) @ self.expand(k)).is_zero():
                raise NotAComplex(f"boundary squares to a nonzero map at degree {k}")

    def underlying(self):
        """The complex of F_q-spaces obtained by forgetting the action."""
        from .chains import VectorComplex
        n = self.group.order
        return VectorComplex([r * n for r in self.ranks],
                             {k: self.expand(k) for k in range(1, self.top + 1)}, self.q, check=False)

    def tensor_with(self, m: GroupRingModule):
        """C (x)_{F_q[pi]} M as a chain complex of spaces (right C, left M)."""
        from .chains import VectorComplex
        if self.side != "right" or m.side != "left":
            raise GroupMismatch("C (x) M needs right chains and a left module")
        if m.group != self.group or m.q != self.q:
            raise GroupMismatch("module over a different group")
        diffs = {}
        for k in range(1, self.top + 1):
            diffs[k] = _block_rho(self.boundary(k), m, transpose=False)
        return VectorComplex([r * m.dim for r in self.ranks], diffs, self.q, check=False)

    def hom_into(self, nmod: GroupRingModule):
        """Hom_{F_q[pi]}(C, N) as a cochain complex of spaces (right C, right N)."""
        from .chains import VectorComplex
        if self.side != nmod.side:
            raise GroupMismatch("Hom(C, N) needs modules on the same side")
        if nmod.group != self.group or nmod.q != self.q:
            raise GroupMismatch("module over a different group")
        diffs = {}
        for k in range(0, self.top):
            diffs[k] = _block_rho(self.boundary(k + 1), nmod, transpose=True)
        return VectorComplex([r * nmod.dim for r in self.ranks], diffs, self.q, cochain=True, check=False)

    def as_left(self) -> "FreeModuleComplex":
        """Switch sides through the antipode g -> g^-1."""
        side = "left" if self.side == "right" else "right"
        b = {k: np.apply_along_axis(self.group.antipode, 2, a) for k, a in self.boundaries.items()}
        return FreeModuleComplex(self.group, self.q, self.ranks, b, side, check=False)

    def __repr__(self):
        return f"FreeModuleComplex({self.side}, ranks={self.ranks}, |pi|={self.group.order}, q={self.q})"


def _block_rho(a, m: GroupRingModule, transpose: bool) -> FieldMatrix:
    """Block matrix (rho_M(a_ij)); block-transposed for Hom."""
    r0, r1 = a.shape[0], a.shape[1]
    d = m.dim
    if transpose:
        out = np.zeros((r1 * d, r0 * d), dtype=np.int64)
    else:
        out = np.zeros((r0 * d, r1 * d), dtype=np.int64)
    for i in range(r0):
        for j in range(r1):
            if a[i, j].any():
                blk = m.rho(a[i, j]).array
                if transpose:
                    out[j * d:(j + 1) * d, i * d:(i + 1) * d] = blk
                else:
                    out[i * d:(i + 1) * d, j * d:(j + 1) * d] = blk
    return FieldMatrix(out, m.q)


def periodic_resolution(group: FiniteGroup, length: int, q, side="left") -> FreeModuleComplex:
    """Free resolution of the trivial module for a cyclic group.

    Boundaries alternate (g - 1) in odd degrees and the norm sum g^i in even
    degrees; augmented complex exact below ``length``.
    """
    if length < 0:
        raise BadParams("resolution length must be nonnegative")
    gen = group.cyclic_generator()
    if gen is None:
        raise NotCyclic("periodic resolution needs a cyclic group")
    n = group.order
    g_minus_1 = group.element({gen: 1, group.identity: -1})
    norm = np.ones(n, dtype=np.int64)
    b = {k: (g_minus_1 if k % 2 else norm).reshape(1, 1, n) for k in range(1, length + 1)}
    return FreeModuleComplex(group, q, [1] * (length + 1), b, side, check=False)


@dataclass
class Resolution:
    """Projective resolution P_* -> M of left (or right) modules.

    ``maps[k]`` is d_k: P_k -> P_{k-1} (k >= 1); ``augmentation`` is P_0 -> M.
    ``free_ranks[k]`` is the rank when P_k is free in the standard basis and
    None when P_k is a projective module taken as is.  ``exact_through`` is
    the largest degree in which the augmented complex is certified exact
    (None when the resolution is complete).
    """

    target: GroupRingModule
    modules: List[GroupRingModule]
    maps: Dict[int, FieldMatrix]
    augmentation: FieldMatrix
    free_ranks: List[Optional[int]]
    complete: bool

    @property
    def length(self):
        return len(self.modules) - 1

    @property
    def exact_through(self):
        return None if self.complete else self.length - 1

    def d(self, k) -> FieldMatrix:
        if k in self.maps:
            return self.maps[k]
        rows = self.modules[k - 1].dim if 0 <= k - 1 < len(self.modules) else 0
        cols = self.modules[k].dim if 0 <= k < len(self.modules) else 0
        return FieldMatrix.zeros(rows, cols, self.target.q)

    def module(self, k) -> GroupRingModule:
        if 0 <= k < len(self.modules):
            return self.modules[k]
        return GroupRingModule(self.target.group, self.target.q,
                               [FieldMatrix.zeros(0, 0, self.target.q)] * self.target.group.order,
                               self.target.side, check=False)

    def as_free_complex(self) -> FreeModuleComplex:
        """Formal group-ring boundaries (all terms must be free)."""
        if any(r is None for r in self.free_ranks):
            raise BadParams("resolution has non-free terms")
        g = self.target.group
        n = g.order
        bnd = {}
        for k in range(1, len(self.modules)):
            m = self.maps[k].array
            r0, r1 = self.free_ranks[k - 1], self.free_ranks[k]
            a = np.zeros((r0, r1, n), dtype=np.int64)
            for j in range(r1):
                col = m[:, j * n + g.identity]
                a[:, j, :] = col.reshape(r0, n)
            bnd[k] = a
        return FreeModuleComplex(g, self.target.q, self.free_ranks, bnd, self.target.side, check=False)

    def check_exact(self) -> bool:
        """Objectwise exactness of P_L -> ... -> P_0 -> M -> 0 below L."""
        from .fieldlin import rank as _rank
        q = self.target.q
        if _rank(self.augmentation) != self.target.dim:
            return False
        top = len(self.modules) if self.complete else len(self.modules) - 1
        for k in range(top):
            out = self.augmentation if k == 0 else self.d(k)
            if not (out @ self.d(k + 1)).is_zero():
                return False
            ker = self.modules[k].dim - _rank(out)
            if ker != _rank(self.d(k + 1)):
                return False
        return True


def _greedy_generators(mod: GroupRingModule, candidates: np.ndarray) -> List[np.ndarray]:
    """Pick candidate columns that each enlarge the generated submodule most."""
    gens = []
    span = Subspace.zero(mod.dim, mod.q)
    while span.dim < mod.dim:
        best, best_span = None, None
        for k in range(candidates.shape[1]):
            v = candidates[:, k]
            if span.contains(v):
                continue
            s = mod.generated(np.hstack([span.array, v[:, None]]))
            if best_span is None or s.dim > best_span.dim:
                best, best_span = v, s
        gens.append(best)
        span = best_span
    return gens


def _generators(mod: GroupRingModule) -> List[np.ndarray]:
    """Generating vectors; minimal when pi is a q-group (lifts of M / IM)."""
    if mod.dim == 0:
        return []
    if mod.group.is_p_group(mod.q):
        eye = np.eye(mod.dim, dtype=np.int64)
        rel = np.mod(np.hstack([mod.action[g].array - eye for g in mod.group.generators]
                               or [np.zeros((mod.dim, 0), dtype=np.int64)]), mod.q)
        sq = Subquotient(Subspace.full(mod.dim, mod.q), Subspace.span(rel, mod.q, mod.dim), check=False)
        return [sq.reps[:, k] for k in range(sq.dim)]
    return _greedy_generators(mod, np.eye(mod.dim, dtype=np.int64))


def _free_cover(mod: GroupRingModule):
    """Free module F on generators of ``mod`` and the surjection F -> mod."""
    gens = _generators(mod)
    g = mod.group
    n = g.order
    free = GroupRingModule.free(g, mod.q, len(gens), mod.side)
    eps = np.zeros((mod.dim, len(gens) * n), dtype=np.int64)
    for j, v in enumerate(gens):
        for h in range(n):
            eps[:, j * n + h] = mod.action[h].array @ v
    return free, FieldMatrix(eps, mod.q), len(gens)


def projective_resolution(m: GroupRingModule, length: int, minimize=True) -> Resolution:
    """Resolve ``m`` by free modules: surject from a free module, take the kernel, repeat.

    When q does not divide |pi| and ``minimize`` is set, the module is
    projective and the resolution is P_0 = M with identity augmentation.
    """
    if length < 0:
        raise BadParams("resolution length must be nonnegative")
    q = m.q
    if minimize and m.group.order % q:
        return Resolution(m, [m], {}, FieldMatrix.identity(m.dim, q), [None], True)
    modules, maps, ranks = [], {}, []
    current, incl = m, FieldMatrix.identity(m.dim, q)
    augmentation = None
    for k in range(length + 1):
        free, eps, r = _free_cover(current)
        modules.append(free)
        ranks.append(r)
        to_prev = incl @ eps
        if k == 0:
            augmentation = to_prev
        else:
            maps[k] = to_prev
        ker = Subspace._trusted(_kernel_array(eps.array, q), q, free.dim)
        if ker.dim == 0:
            return Resolution(m, modules, maps, augmentation, ranks, True)
        current, incl = free.submodule(ker)
    return Resolution(m, modules, maps, augmentation, ranks, False)


@dataclass
class CoResolution:
    """Injective resolution N -> I^0 -> I^1 -> ... (``maps[k]``: I^k -> I^{k+1})."""

    target: GroupRingModule
    modules: List[GroupRingModule]
    maps: Dict[int, FieldMatrix]
    coaugmentation: FieldMatrix
    complete: bool

    @property
    def length(self):
        return len(self.modules) - 1

    def module(self, k) -> GroupRingModule:
        if 0 <= k < len(self.modules):
            return self.modules[k]
        return GroupRingModule(self.target.group, self.target.q,
                               [FieldMatrix.zeros(0, 0, self.target.q)] * self.target.group.order,
                               self.target.side, check=False)

    def d(self, k) -> FieldMatrix:
        if k in self.maps:
            return self.maps[k]
        rows = self.modules[k + 1].dim if k + 1 < len(self.modules) else 0
        cols = self.modules[k].dim if 0 <= k < len(self.modules) else 0
        return FieldMatrix.zeros(rows, cols, self.target.q)

    def check_exact(self) -> bool:
        from .fieldlin import rank as _rank
        if _rank(self.coaugmentation) != self.target.dim:
            return False
        top = len(self.modules) if self.complete else len(self.modules) - 1
        for k in range(top):
            inc = self.coaugmentation if k == 0 else self.d(k - 1)
            if not (self.d(k) @ inc).is_zero():
                return False
            if self.modules[k].dim - _rank(self.d(k)) != _rank(inc):
                return False
        return True


def injective_resolution(n: GroupRingModule, length: int, minimize=True) -> CoResolution:
    """Dualize a projective resolution of the dual module (F_q[pi] is self-injective)."""
    res = projective_resolution(n.dual(), length, minimize)
    mods = [p.dual() for p in res.modules]
    maps = {k - 1: d.T for k, d in res.maps.items()}
    return CoResolution(n, mods, maps, res.augmentation.T, res.complete)


def tor_over_ring(n: GroupRingModule, m: GroupRingModule, max_p: int, resolution=None) -> List[int]:
    """dim Tor_p(N, M) for p <= max_p via N (x) P_*(M)."""
    res = resolution or projective_resolution(m, max_p + 1)
    spaces = [tensor_over_ring(n, res.module(k)) for k in range(max_p + 2)]
    ident = FieldMatrix.identity(n.dim, n.q)
    diffs = {k: spaces[k].induced(spaces[k - 1], ident, res.d(k)) for k in range(1, max_p + 2)}
    return _graded_homology([s.dim for s in spaces], diffs, n.q, cochain=False)[:max_p + 1]


def ext_over_ring(m: GroupRingModule, n: GroupRingModule, max_p: int, coresolution=None) -> List[int]:
    """dim Ext^p(M, N) for p <= max_p via Hom(M, I^*(N))."""
    cores = coresolution or injective_resolution(n, max_p + 1)
    spaces = [hom_over_ring(m, cores.modules[k]) if k < len(cores.modules) else None for k in range(max_p + 2)]
    dims = [s.dim if s is not None else 0 for s in spaces]
    diffs = {}
    for k in range(max_p + 1):
        if spaces[k] is not None and spaces[k + 1] is not None:
            diffs[k] = spaces[k].induced(spaces[k + 1], post=cores.d(k))
    return _graded_homology(dims, diffs, n.q, cochain=True)[:max_p + 1]


def _graded_homology(dims, diffs, q, cochain):
    from .chains import VectorComplex, homology
    return homology(VectorComplex(dims, diffs, q, cochain=cochain, check=False), check=False).dims


def homology_modules(c: FreeModuleComplex) -> List[GroupRingModule]:
    """H_k(C) with the induced action, one module per degree."""
    out = []
    q = c.q
    for k in range(c.top + 1):
        mod = c.module(k)
        cycles = Subspace._trusted(_kernel_array(c.expand(k).array, q), q, mod.dim) if k > 0 else Subspace.full(mod.dim, q)
        bounds = Subspace.span(c.expand(k + 1).array, q, mod.dim) if k < c.top else Subspace.zero(mod.dim, q)
        sq = Subquotient(cycles, bounds, check=False)
        mats = [FieldMatrix(sq.coords(a.array @ sq.reps), q) for a in mod.action]
        out.append(GroupRingModule(c.group, q, mats, c.side, check=False))
    return out
