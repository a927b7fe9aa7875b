"""Random generators shared by the test modules."""

import numpy as np

from localcoeff.chains import Bicomplex
from localcoeff.eicat import FunctorModule, constant, representable
from localcoeff.fieldlin import FieldMatrix, Subspace, _kernel_array
from localcoeff.groupring import FiniteGroup, GroupRingModule
from localcoeff import models


def random_bicomplex(rng, q, P=None, Q=None, max_dim=3, cohomological=False):
    """Random first-quadrant bicomplex.

    Cells are filled in order of p + q; the maps leaving a cell are a random
    element of the solution space of d_h^2 = 0, d_v^2 = 0 and the commuting
    square with the maps already chosen.
    """
    P = int(rng.integers(1, 7)) if P is None else P
    Q = int(rng.integers(1, 7)) if Q is None else Q
    dims = rng.integers(0, max_dim + 1, size=(P, Q))
    step = 1 if cohomological else -1
    dh, dv = {}, {}

    def dim(p, qq):
        return int(dims[p, qq]) if 0 <= p < P and 0 <= qq < Q else 0

    def get(store, p, qq, shape):
        m = store.get((p, qq))
        return np.zeros(shape, dtype=np.int64) if m is None else m

    order = sorted(((p, qq) for p in range(P) for qq in range(Q)), key=lambda c: -step * (c[0] + c[1]))
    for p, qq in order:
        n = dim(p, qq)
        hp, vq = p + step, qq + step
        mh, mv = dim(hp, qq), dim(p, vq)
        if n == 0 or (mh == 0 and mv == 0):
            continue
        nx, ny = mh * n, mv * n
        eye = np.eye(n, dtype=np.int64)
        # maps leaving the neighbouring cells were fixed earlier in this order
        hh = get(dh, hp, qq, (dim(hp + step, qq), mh))
        vv = get(dv, p, vq, (dim(p, vq + step), mv))
        vh = get(dv, hp, qq, (dim(hp, qq + step), mh))
        hv = get(dh, p, vq, (dim(hp, vq), mv))
        rows = []
        if hh.shape[0]:
            rows.append(np.hstack([np.kron(hh, eye), np.zeros((hh.shape[0] * n, ny), dtype=np.int64)]))
        if vv.shape[0]:
            rows.append(np.hstack([np.zeros((vv.shape[0] * n, nx), dtype=np.int64), np.kron(vv, eye)]))
        if vh.shape[0]:
            rows.append(np.hstack([np.kron(vh, eye), -np.kron(hv, eye)]))
        system = np.vstack(rows) % q if rows else np.zeros((0, nx + ny), dtype=np.int64)
        ker = _kernel_array(system, q)
        sol = ker @ rng.integers(0, q, size=ker.shape[1]) % q if ker.shape[1] else np.zeros(nx + ny, dtype=np.int64)
        if mh:
            dh[(p, qq)] = sol[:nx].reshape(mh, n)
        if mv:
            dv[(p, qq)] = sol[nx:].reshape(mv, n)
    return Bicomplex(dims, dh, dv, q, cohomological=cohomological)


def random_invertible(rng, n, q):
    while True:
        a = rng.integers(0, q, size=(n, n))
        m = FieldMatrix(a, q)
        if m.rank() == n:
            return m


def conjugate_module(m: GroupRingModule, rng) -> GroupRingModule:
    if m.dim == 0:
        return m
    s = random_invertible(rng, m.dim, m.q)
    si = s.inverse()
    return GroupRingModule(m.group, m.q, [s @ a @ si for a in m.action], m.side)


def random_group_module(rng, group: FiniteGroup, q, side="left", max_rank=2) -> GroupRingModule:
    """A quotient of a free module by a random submodule, in a random basis."""
    r = int(rng.integers(1, max_rank + 1))
    free = GroupRingModule.free(group, q, r, side)
    k = int(rng.integers(0, 3))
    vecs = rng.integers(0, q, size=(free.dim, k))
    sub = free.generated(vecs) if k else Subspace.zero(free.dim, q)
    quo, _ = free.quotient(sub)
    if int(rng.integers(0, 2)):
        quo = quo.direct_sum(GroupRingModule.trivial(group, q, 1, side))
    return conjugate_module(quo, rng)


def conjugate_functor(f: FunctorModule, rng) -> FunctorModule:
    mats = [random_invertible(rng, d, f.q) if d else FieldMatrix.zeros(0, 0, f.q) for d in f.dims]
    invs = [m.inverse() if m.rows else m for m in mats]
    cat = f.cat
    maps = []
    for g, a in enumerate(f.maps):
        s, t = int(cat.sources[g]), int(cat.targets[g])
        if f.variance == "covariant":
            maps.append(mats[t] @ a @ invs[s])
        else:
            maps.append(mats[s] @ a @ invs[t])
    return FunctorModule(cat, f.q, f.dims, maps, f.variance)


def random_bgz2_functor(rng, p, q, variance="contravariant") -> FunctorModule:
    """Random sum of constant, sign, representables and quotients over Pi(B_G Z/2)."""
    cat = models.fundamental_category_bgz2(p)
    pieces = []
    for _ in range(int(rng.integers(1, 4))):
        kind = int(rng.integers(0, 4))
        if kind == 0:
            f = constant(cat, q, "contravariant")
        elif kind == 1:
            f = models.bgz2_sign(p, q)
        elif kind == 2:
            f = representable(cat, int(rng.integers(0, 2)), q, "contravariant")
        else:
            f = representable(cat, 1, q, "contravariant")
            v = rng.integers(0, q, size=f.dims[1])
            f = f.quotient(f.generated([(1, v)]))[0]
        pieces.append(f)
    out = pieces[0]
    for f in pieces[1:]:
        out = out.direct_sum(f)
    out = conjugate_functor(out, rng)
    return out if variance == "contravariant" else out.dual()
