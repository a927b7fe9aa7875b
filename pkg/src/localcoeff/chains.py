"""Chain complexes, first-quadrant bicomplexes and their spectral sequences.

Pages are computed as explicit subquotients of the total complex,

    E^r_s = Z^r_s / (Z^{r-1}_{s-1} + d Z^{r-1}_{s+r-1}),
    Z^r_s = {x in F_s : dx in F_{s-r}},

so every page comes with representatives and honest matrices for d_r.

Sign convention: bicomplexes store commuting squares and the total
differential is ``d_h + (-1)^p d_v``.  A cohomological bicomplex is handled
by reflecting it into a homological one, running the same engine and
reindexing the result.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from .errors import ConvergenceMismatch, DimensionMismatch, NotABicomplex, NotAComplex
from .fieldlin import FieldMatrix, Subquotient, Subspace, _kernel_array, check_modulus

__all__ = [
    "VectorComplex", "Homology", "homology", "Bicomplex", "total_complex",
    "SpectralPage", "spectral_sequence", "e_infinity", "check_convergence",
]


class VectorComplex:
    """Finite complex of F_q-spaces in degrees ``0..len(dims)-1``.

    For a chain complex ``d[n]`` maps degree n to n-1; for a cochain complex
    it maps degree n to n+1.  Absent differentials are zero.
    """

    def __init__(self, dims, differentials, q, cochain=False, check=True):
        self.q = check_modulus(q)
        self.dims = [int(x) for x in dims]
        self.cochain = bool(cochain)
        self._d = {}
        for n, m in differentials.items():
            if not isinstance(m, FieldMatrix):
                m = FieldMatrix(m, q, shape=self._shape(n))
            if m.shape != self._shape(n):
                raise DimensionMismatch(f"differential in degree {n} has shape {m.shape}, expected {self._shape(n)}")
            self._d[n] = m
        if check:
            self.check()

    def dim(self, n):
        return self.dims[n] if 0 <= n < len(self.dims) else 0

    def _target(self, n):
        return n + 1 if self.cochain else n - 1

    def _shape(self, n):
        return (self.dim(self._target(n)), self.dim(n))

    def d(self, n) -> FieldMatrix:
        """Differential leaving degree n."""
        m = self._d.get(n)
        return m if m is not None else FieldMatrix.zeros(*self._shape(n), self.q)

    @property
    def degrees(self):
        return range(len(self.dims))

    def check(self):
        for n in self.degrees:
            comp = self.d(self._target(n)) @ self.d(n)
            if not comp.is_zero():
                raise NotAComplex(f"d o d is nonzero leaving degree {n}")

    def euler_characteristic(self):
        return sum((-1) ** n * d for n, d in enumerate(self.dims))

    def __repr__(self):
        kind = "cochain" if self.cochain else "chain"
        return f"VectorComplex({kind}, dims={self.dims}, q={self.q})"


@dataclass
class Homology:
    dims: List[int]
    representatives: List[np.ndarray]
    cochain: bool = False

    def __getitem__(self, n):
        return self.dims[n] if 0 <= n < len(self.dims) else 0


def homology(c: VectorComplex, check=True) -> Homology:
    """Graded dimensions of H(c) with representative cycles."""
    if check:
        c.check()
    dims, reps = [], []
    for n in c.degrees:
        cycles = Subspace._trusted(_kernel_array(c.d(n).array, c.q), c.q, c.dim(n))
        src = n - 1 if c.cochain else n + 1
        bounds = Subspace.span(c.d(src).array, c.q, c.dim(n))
        sq = Subquotient(cycles, bounds, check=False)
        dims.append(sq.dim)
        reps.append(sq.reps)
    return Homology(dims, reps, c.cochain)


class Bicomplex:
    """First-quadrant grid ``dims[p, q]`` with commuting horizontal/vertical maps.

    Homological: ``dh[p, q]`` maps (p, q) -> (p-1, q) and ``dv[p, q]`` maps
    (p, q) -> (p, q-1).  Cohomological: (p+1, q) and (p, q+1).
    """

    def __init__(self, dims, dh, dv, q, cohomological=False, check=True):
        self.q = check_modulus(q)
        self.dims = np.array(dims, dtype=np.int64)
        if self.dims.ndim != 2:
            self.dims = self.dims.reshape(0, 0)
        self.cohomological = bool(cohomological)
        step = 1 if cohomological else -1
        self._step = step
        self._dh, self._dv = {}, {}
        for store, maps, off in ((self._dh, dh, (step, 0)), (self._dv, dv, (0, step))):
            for (p, qq), m in maps.items():
                shape = (self.dim(p + off[0], qq + off[1]), self.dim(p, qq))
                if not isinstance(m, FieldMatrix):
                    try:
                        m = FieldMatrix(m, q, shape=shape)
                    except DimensionMismatch:
                        raise NotABicomplex(f"map at {(p, qq)} does not have shape {shape}") from None
                if m.shape != shape:
                    raise NotABicomplex(f"map at {(p, qq)} has shape {m.shape}, expected {shape}")
                store[(p, qq)] = m
        if check:
            self.check()

    @property
    def shape(self):
        return self.dims.shape

    def dim(self, p, q):
        P, Q = self.dims.shape
        return int(self.dims[p, q]) if 0 <= p < P and 0 <= q < Q else 0

    def dh(self, p, q) -> FieldMatrix:
        m = self._dh.get((p, q))
        return m if m is not None else FieldMatrix.zeros(self.dim(p + self._step, q), self.dim(p, q), self.q)

    def dv(self, p, q) -> FieldMatrix:
        m = self._dv.get((p, q))
        return m if m is not None else FieldMatrix.zeros(self.dim(p, q + self._step), self.dim(p, q), self.q)

    def cells(self):
        P, Q = self.dims.shape
        return [(p, q) for p in range(P) for q in range(Q)]

    def check(self):
        s = self._step
        for p, q in self.cells():
            if not (self.dh(p + s, q) @ self.dh(p, q)).is_zero():
                raise NotABicomplex(f"d_h o d_h nonzero at {(p, q)}")
            if not (self.dv(p, q + s) @ self.dv(p, q)).is_zero():
                raise NotABicomplex(f"d_v o d_v nonzero at {(p, q)}")
            if self.dh(p, q + s) @ self.dv(p, q) != self.dv(p + s, q) @ self.dh(p, q):
                raise NotABicomplex(f"square at {(p, q)} does not commute")

    def reflected(self) -> "Bicomplex":
        """Cohomological -> homological by p -> P-1-p, q -> Q-1-q."""
        P, Q = self.dims.shape
        dims = self.dims[::-1, ::-1].copy()
        dh = {(P - 1 - p, Q - 1 - q): m for (p, q), m in self._dh.items()}
        dv = {(P - 1 - p, Q - 1 - q): m for (p, q), m in self._dv.items()}
        return Bicomplex(dims, dh, dv, self.q, cohomological=not self.cohomological, check=False)

    def euler_characteristic(self):
        return int(sum((-1) ** (p + q) * self.dim(p, q) for p, q in self.cells()))

    def __repr__(self):
        kind = "cohomological" if self.cohomological else "homological"
        return f"Bicomplex({kind}, shape={self.shape}, q={self.q})"


def _tot_layout(b: Bicomplex):
    """Per total degree: list of (p, q, offset) blocks, ordered by p."""
    P, Q = b.shape
    layout = {}
    for n in range(P + Q - 1 if P and Q else 0):
        off, blocks = 0, []
        for p in range(P):
            q = n - p
            if 0 <= q < Q:
                blocks.append((p, q, off))
                off += b.dim(p, q)
        layout[n] = (blocks, off)
    return layout


def total_complex(b: Bicomplex) -> VectorComplex:
    """Tot_n = sum over p+q=n, differential d_h + (-1)^p d_v."""
    layout = _tot_layout(b)
    s = b._step
    dims = [layout[n][1] for n in sorted(layout)]
    diffs = {}
    for n in layout:
        tgt = n + s
        if tgt not in layout:
            continue
        blocks, size = layout[n]
        tblocks, tsize = layout[tgt]
        toff = {(p, q): o for p, q, o in tblocks}
        a = np.zeros((tsize, size), dtype=np.int64)
        for p, q, o in blocks:
            w = b.dim(p, q)
            if (p + s, q) in toff:
                t = toff[(p + s, q)]
                a[t:t + b.dim(p + s, q), o:o + w] += b.dh(p, q).array
            if (p, q + s) in toff:
                t = toff[(p, q + s)]
                a[t:t + b.dim(p, q + s), o:o + w] += (-1) ** p * b.dv(p, q).array
        diffs[n] = FieldMatrix(a, b.q)
    return VectorComplex(dims, diffs, b.q, cochain=b.cohomological, check=False)


@dataclass
class SpectralPage:
    """One page E^r.  Cells are indexed (s, t): filtration degree, complement.

    For the column filtration (s, t) = (p, q); for the row filtration
    (s, t) = (q, p).  ``differentials[(s, t)]`` is the matrix of d_r leaving
    that cell, in the bases given by ``representatives``.
    """

    r: int
    filtration: str
    cohomological: bool
    dims: Dict[Tuple[int, int], int]
    differentials: Dict[Tuple[int, int], FieldMatrix] = field(default_factory=dict)
    representatives: Dict[Tuple[int, int], np.ndarray] = field(default_factory=dict)
    shape: Tuple[int, int] = (0, 0)

    @property
    def bidegree(self):
        return (self.r, 1 - self.r) if self.cohomological else (-self.r, self.r - 1)

    def dim(self, s, t):
        return self.dims.get((s, t), 0)

    def grid(self) -> np.ndarray:
        g = np.zeros(self.shape, dtype=np.int64)
        for (s, t), d in self.dims.items():
            g[s, t] = d
        return g

    def total_dims(self) -> Dict[int, int]:
        out: Dict[int, int] = {}
        for (s, t), d in self.dims.items():
            out[s + t] = out.get(s + t, 0) + d
        return out

    def target(self, s, t):
        ds, dt = self.bidegree
        return (s + ds, t + dt)


class _FilteredComplex:
    """Homological bicomplex with the filtration by columns or rows."""

    def __init__(self, b: Bicomplex, by_rows: bool):
        assert not b.cohomological
        self.b = b
        self.q = b.q
        self.by_rows = by_rows
        self.tot = total_complex(b)
        self.layout = _tot_layout(b)
        self.filt = {}
        for n, (blocks, size) in self.layout.items():
            f = np.zeros(size, dtype=np.int64)
            for p, q, o in blocks:
                f[o:o + b.dim(p, q)] = q if by_rows else p
            self.filt[n] = f
        P, Q = b.shape
        self.S = Q if by_rows else P
        self.T = P if by_rows else Q
        self._z = {}
        self._b = {}

    def ndeg(self, n):
        return self.layout[n][1] if n in self.layout else 0

    def Z(self, r, s, n) -> Subspace:
        """Z^r_s in total degree n (r <= 0 gives F_s)."""
        key = (max(r, 0), s, n)
        if key in self._z:
            return self._z[key]
        size = self.ndeg(n)
        f = self.filt.get(n, np.zeros(0, dtype=np.int64))
        cols = np.flatnonzero(f <= s)
        if r <= 0 or n - 1 not in self.layout:
            basis = np.zeros((size, cols.size), dtype=np.int64)
            basis[cols, np.arange(cols.size)] = 1
        else:
            rows = np.flatnonzero(self.filt[n - 1] > s - r)
            sub = self.tot.d(n).array[np.ix_(rows, cols)]
            ker = _kernel_array(sub, self.q)
            basis = np.zeros((size, ker.shape[1]), dtype=np.int64)
            basis[cols] = ker
        z = Subspace.span(basis, self.q, size) if basis.shape[1] else Subspace.zero(size, self.q)
        self._z[key] = z
        return z

    def B(self, r, s, n) -> Subspace:
        key = (r, s, n)
        if key in self._b:
            return self._b[key]
        size = self.ndeg(n)
        lower = self.Z(r - 1, s - 1, n)
        if n + 1 in self.layout:
            src = self.Z(r - 1, s + r - 1, n + 1)
            img = self.tot.d(n + 1).array @ src.array
            bnd = Subspace.span(np.hstack([lower.array, img]), self.q, size)
        else:
            bnd = lower
        self._b[key] = bnd
        return bnd

    def page(self, r, with_maps=True) -> SpectralPage:
        dims, maps, reps, sq = {}, {}, {}, {}
        for s in range(self.S):
            for t in range(self.T):
                n = s + t
                if with_maps:
                    quo = Subquotient(self.Z(r, s, n), self.B(r, s, n), check=False)
                    sq[(s, t)] = quo
                    dims[(s, t)] = quo.dim
                    reps[(s, t)] = quo.reps
                else:
                    dims[(s, t)] = self.Z(r, s, n).dim - self.B(r, s, n).dim
        if with_maps:
            for (s, t), quo in sq.items():
                tgt = (s - r, t + r - 1)
                if tgt in sq and quo.dim and sq[tgt].dim:
                    img = self.tot.d(s + t).array @ quo.reps
                    maps[(s, t)] = FieldMatrix(sq[tgt].coords(img), self.q)
                else:
                    maps[(s, t)] = FieldMatrix.zeros(sq[tgt].dim if tgt in sq else 0, quo.dim, self.q)
        filtration = "rows" if self.by_rows else "columns"
        return SpectralPage(r, filtration, False, dims, maps, reps, (self.S, self.T))


def _reindex_cohomological(page: SpectralPage, S, T) -> SpectralPage:
    def cell(s, t):
        return (S - 1 - s, T - 1 - t)
    dims = {cell(s, t): d for (s, t), d in page.dims.items()}
    maps = {cell(s, t): m for (s, t), m in page.differentials.items()}
    reps = {cell(s, t): m for (s, t), m in page.representatives.items()}
    return SpectralPage(page.r, page.filtration, True, dims, maps, reps, (S, T))


def _normalize_filtration(filtration):
    f = str(filtration).lower().replace("by_", "")
    if f not in ("rows", "columns"):
        raise ValueError(f"filtration must be 'by_rows' or 'by_columns', got {filtration!r}")
    return f


def _engine(b: Bicomplex, filtration):
    by_rows = _normalize_filtration(filtration) == "rows"
    hb = b.reflected() if b.cohomological else b
    return _FilteredComplex(hb, by_rows)


def spectral_sequence(b: Bicomplex, filtration="by_columns", r_max=2, check=True) -> List[SpectralPage]:
    """Pages E^0..E^{r_max} of the spectral sequence of the chosen filtration.

    ``by_columns`` filters by p, so E^1 is vertical (co)homology;
    ``by_rows`` filters by q, so E^1 is horizontal (co)homology.
    """
    if r_max < 0:
        raise ValueError("r_max must be nonnegative")
    if check:
        b.check()
    eng = _engine(b, filtration)
    pages = [eng.page(r) for r in range(r_max + 1)]
    if b.cohomological:
        pages = [_reindex_cohomological(pg, eng.S, eng.T) for pg in pages]
    return pages


def stable_index(b: Bicomplex) -> int:
    """A page index beyond which every filtration has stabilized."""
    return int(max(b.shape) + 1)


def e_infinity(b: Bicomplex, filtration="by_columns", with_maps=False, check=True) -> SpectralPage:
    if check:
        b.check()
    eng = _engine(b, filtration)
    pg = eng.page(stable_index(b), with_maps=with_maps)
    if b.cohomological:
        pg = _reindex_cohomological(pg, eng.S, eng.T)
    return pg


def check_convergence(b: Bicomplex) -> dict:
    """Compare both filtrations' E^infinity with the homology of Tot.

    Returns ``{"tot": {n: dim}, "columns": {n: dim}, "rows": {n: dim}}``;
    raises ConvergenceMismatch naming the first offending degree.
    """
    b.check()
    tot = homology(total_complex(b), check=False)
    report = {"tot": {n: d for n, d in enumerate(tot.dims)}}
    for filt in ("columns", "rows"):
        sums = e_infinity(b, filt, check=False).total_dims()
        report[filt] = {n: sums.get(n, 0) for n in range(len(tot.dims))}
        for n, d in enumerate(tot.dims):
            if sums.get(n, 0) != d:
                raise ConvergenceMismatch(
                    f"{filt} filtration: E^inf total {sums.get(n, 0)} != H_{n}(Tot) = {d}", degree=n)
    return report
