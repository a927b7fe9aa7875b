"""Eilenberg spectral sequences for local coefficients, and the Serre pipelines built on them.

Homology: the bicomplex B_{p,q} = C_q (x) P_p with C the chains of the
universal cover and P_* -> M a projective resolution.  Filtering by p
(columns) gives E^2_{p,q} = Tor_p(H_q(C), M); filtering by q (rows) gives
E^2 = H_q(X; M) on the line p = 0.  Cohomology uses Hom(C_q, I^p) with an
injective resolution N -> I^*.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Union

import numpy as np

from .chains import Bicomplex, SpectralPage, e_infinity, homology, spectral_sequence, total_complex
from .eicat import (EICategory, FunctorComplex, FunctorModule, decompose_into_representables,
                    ext_over_cat, fixed_subfunctor_dim, functor_injective_resolution,
                    functor_projective_resolution, hom_over_cat, tensor_over_cat, tor_over_cat)
from .errors import BadPrimes, ConvergenceMismatch, GroupMismatch, CategoryMismatch
from .fieldlin import is_prime
from .groupring import (FiniteGroup, FreeModuleComplex, GroupRingModule, ext_over_ring,
                        hom_over_ring, homology_modules, injective_resolution,
                        projective_resolution, tensor_over_ring, tor_over_ring)

__all__ = [
    "GroupSpace", "EquivariantSpace", "SSResult", "eilenberg_homology", "eilenberg_cohomology",
    "eq_eilenberg", "serre_e2_page", "SerreE2", "bo2_pipeline", "Bo2Report", "EquivariantEntry",
]


@dataclass
class GroupSpace:
    """A space through the free F_q[pi]-complex of its universal cover (right modules).

    ``valid_through`` is the largest degree in which the finite model agrees
    with the space it stands for.
    """

    group: FiniteGroup
    chains: FreeModuleComplex
    valid_through: Optional[int] = None
    name: str = "space"

    def __post_init__(self):
        if self.chains.side != "right":
            raise GroupMismatch("universal cover chains are right modules")
        if self.valid_through is None:
            self.valid_through = self.chains.top

    @property
    def q(self):
        return self.chains.q

    @property
    def top(self):
        return self.chains.top


@dataclass
class EquivariantSpace:
    """A G-space through its contravariant chain functor on the fundamental EI-category."""

    cat: EICategory
    chains: FunctorComplex
    valid_through: Optional[int] = None
    name: str = "G-space"

    def __post_init__(self):
        if self.chains.variance != "contravariant":
            raise CategoryMismatch("the chain functor of the universal cover is contravariant")
        if self.valid_through is None:
            self.valid_through = self.chains.top

    @property
    def q(self):
        return self.chains.q

    @property
    def top(self):
        return self.chains.top

    def check_free(self):
        """Every chain degree must be a sum of representables; returns the decompositions."""
        return [decompose_into_representables(m) for m in self.chains.modules]


SpaceData = Union[GroupSpace, EquivariantSpace]


@dataclass
class SSResult:
    """Both spectral sequences of the Eilenberg bicomplex and what they converge to.

    ``pages``: filtration by resolution degree (E^2 = Tor/Ext of the homology
    of the cover).  ``row_pages``: filtration by chain degree (E^2 = the
    (co)homology with local coefficients, on one line).  ``target`` is
    computed directly from C (x) M or Hom(C, N); ``expected_e2`` independently
    from Tor/Ext of the homology modules.  Values are meaningful in total
    degrees <= ``valid_through``.
    """

    cohomological: bool
    bicomplex: Bicomplex
    pages: List[SpectralPage]
    row_pages: List[SpectralPage]
    e_infinity: SpectralPage
    row_e_infinity: SpectralPage
    target: List[int]
    tot: List[int]
    expected_e2: Dict[tuple, int]
    valid_through: int
    resolution_length: int
    resolution_complete: bool

    @property
    def e2(self) -> SpectralPage:
        return self.pages[2] if len(self.pages) > 2 else self.pages[-1]

    def e2_dims(self) -> Dict[tuple, int]:
        return {k: v for k, v in self.e2.dims.items() if v}

    @property
    def collapsed(self) -> bool:
        """E^2 = E^infinity in the valid range (no nonzero d_r for r >= 2)."""
        return all(self.e2.dim(s, t) == self.e_infinity.dim(s, t)
                   for (s, t) in self.e2.dims if s + t <= self.valid_through)

    def converges(self) -> bool:
        inf = self.e_infinity.total_dims()
        return all(inf.get(n, 0) == self.target[n] for n in range(self.valid_through + 1))

    def e2_matches_expected(self) -> bool:
        """E^2 of the resolution filtration equals the Tor/Ext table in the valid range."""
        for (s, t), d in self.e2.dims.items():
            if s <= self.resolution_length - 1 and s + t <= self.valid_through:
                if d != self.expected_e2.get((s, t), 0):
                    return False
        return True

    def summary(self) -> Dict[str, Any]:
        return {
            "cohomological": self.cohomological,
            "valid_through": self.valid_through,
            "target": self.target[:self.valid_through + 1],
            "e2": {f"{s},{t}": d for (s, t), d in sorted(self.e2.dims.items())
                   if d and s + t <= self.valid_through},
            "collapsed": self.collapsed,
        }


def _pad(dims, n):
    return [dims[k] if k < len(dims) else 0 for k in range(n + 1)]


def _homological_bicomplex(chain_modules, chain_d, res, tensor, q):
    P = len(res.modules)
    Q = len(chain_modules)
    spaces = [[tensor(chain_modules[j], res.module(i)) for j in range(Q)] for i in range(P)]
    dims = [[spaces[i][j].dim for j in range(Q)] for i in range(P)]
    dh, dv = {}, {}
    for i in range(P):
        for j in range(Q):
            if i >= 1:
                dh[(i, j)] = spaces[i][j].induced(spaces[i - 1][j], None, res.d(i))
            if j >= 1:
                dv[(i, j)] = spaces[i][j].induced(spaces[i][j - 1], chain_d(j), None)
    return Bicomplex(np.array(dims, dtype=np.int64).reshape(P, Q), dh, dv, q)


def _cohomological_bicomplex(chain_modules, chain_d, cores, hom, q):
    P = len(cores.modules)
    Q = len(chain_modules)
    spaces = [[hom(chain_modules[j], cores.module(i)) for j in range(Q)] for i in range(P)]
    dims = [[spaces[i][j].dim for j in range(Q)] for i in range(P)]
    dh, dv = {}, {}
    for i in range(P):
        for j in range(Q):
            if i + 1 < P:
                dh[(i, j)] = spaces[i][j].induced(spaces[i + 1][j], post=cores.d(i))
            if j + 1 < Q:
                dv[(i, j)] = spaces[i][j].induced(spaces[i][j + 1], pre=chain_d(j + 1))
    return Bicomplex(np.array(dims, dtype=np.int64).reshape(P, Q), dh, dv, q, cohomological=True)


def _valid(x, length, complete):
    v = x.valid_through
    return v if complete else min(v, length - 1)


def _finish(b, cohomological, r_max, target, expected, valid, length, complete):
    pages = spectral_sequence(b, "by_columns", r_max, check=False)
    rows = spectral_sequence(b, "by_rows", r_max, check=False)
    inf = e_infinity(b, "by_columns", check=False)
    rinf = e_infinity(b, "by_rows", check=False)
    tot = homology(total_complex(b), check=False).dims
    tot = _pad(tot, max(valid, 0))
    target = _pad(target, max(valid, 0))
    res = SSResult(cohomological, b, pages, rows, inf, rinf, target, tot, expected, valid, length, complete)
    for n in range(valid + 1):
        if tot[n] != target[n]:
            raise ConvergenceMismatch(f"total (co)homology {tot[n]} != direct value {target[n]} in degree {n}", degree=n)
    if not res.converges():
        raise ConvergenceMismatch("E^infinity does not add up to the target")
    return res


def _default_length(x):
    return x.top + 2


def eilenberg_homology(x: GroupSpace, m: GroupRingModule, L: Optional[int] = None, r_max: int = 2) -> SSResult:
    """Both spectral sequences of C_*(X~) (x)_{F_q[pi]} P_*(M), with M a left module."""
    if m.group != x.group or m.q != x.q:
        raise GroupMismatch("coefficient module over a different group or field")
    if m.side != "left":
        raise GroupMismatch("homology coefficients are left modules")
    L = _default_length(x) if L is None else L
    c = x.chains
    res = projective_resolution(m, L)
    b = _homological_bicomplex([c.module(k) for k in range(c.top + 1)], c.expand, res, tensor_over_ring, x.q)
    valid = _valid(x, res.length, res.complete)
    target = homology(c.tensor_with(m), check=False).dims
    hmods = homology_modules(c)
    expected = {}
    for qq, h in enumerate(hmods):
        for p, d in enumerate(tor_over_ring(h, m, max(res.length - 1, 0), resolution=res)):
            expected[(p, qq)] = d
    return _finish(b, False, r_max, target, expected, valid, res.length, res.complete)


def eilenberg_cohomology(x: GroupSpace, n: GroupRingModule, L: Optional[int] = None, r_max: int = 2) -> SSResult:
    """Both spectral sequences of Hom_{F_q[pi]}(C_*(X~), I^*(N)), with N a right module."""
    if n.group != x.group or n.q != x.q:
        raise GroupMismatch("coefficient module over a different group or field")
    if n.side != "right":
        raise GroupMismatch("cohomology coefficients are right modules (same side as the chains)")
    L = _default_length(x) if L is None else L
    c = x.chains
    cores = injective_resolution(n, L)
    b = _cohomological_bicomplex([c.module(k) for k in range(c.top + 1)], c.expand, cores, hom_over_ring, x.q)
    valid = _valid(x, cores.length, cores.complete)
    target = homology(c.hom_into(n), check=False).dims
    hmods = homology_modules(c)
    expected = {}
    for qq, h in enumerate(hmods):
        for p, d in enumerate(ext_over_ring(h, n, max(cores.length - 1, 0), coresolution=cores)):
            expected[(p, qq)] = d
    return _finish(b, True, r_max, target, expected, valid, cores.length, cores.complete)


def eq_eilenberg(x: EquivariantSpace, coeff: FunctorModule, L: Optional[int] = None, r_max: int = 2,
                 check_free=True) -> SSResult:
    """Equivariant version over the fundamental EI-category.

    A covariant coefficient system gives homology (Tor), a contravariant one
    cohomology (Ext).  With ``check_free`` every chain degree is first
    decomposed into representables (raises NotFree otherwise).
    """
    if coeff.cat != x.cat or coeff.q != x.q:
        raise CategoryMismatch("coefficient system over a different category or field")
    if check_free:
        x.check_free()
    L = _default_length(x) if L is None else L
    c = x.chains
    hmods = c.homology()
    mods = [c.module(k) for k in range(c.top + 1)]
    expected = {}
    if coeff.variance == "covariant":
        res = functor_projective_resolution(coeff, L)
        b = _homological_bicomplex(mods, c.d, res, tensor_over_cat, x.q)
        target = homology(c.tensor_with(coeff), check=False).dims
        for qq, h in enumerate(hmods):
            for p, d in enumerate(tor_over_cat(h, coeff, max(res.length - 1, 0), resolution=res)):
                expected[(p, qq)] = d
        return _finish(b, False, r_max, target, expected, _valid(x, res.length, res.complete),
                       res.length, res.complete)
    cores = functor_injective_resolution(coeff, L)
    b = _cohomological_bicomplex(mods, c.d, cores, hom_over_cat, x.q)
    target = homology(c.hom_into(coeff), check=False).dims
    for qq, h in enumerate(hmods):
        for p, d in enumerate(ext_over_cat(h, coeff, max(cores.length - 1, 0), coresolution=cores)):
            expected[(p, qq)] = d
    return _finish(b, True, r_max, target, expected, _valid(x, cores.length, cores.complete),
                   cores.length, cores.complete)


@dataclass
class SerreE2:
    """E_2^{s,t} dimensions of a collapse-case Serre spectral sequence.

    Only the E_2 page is computed; ``collapses`` records whether it is
    concentrated in s = 0, the case in which E_2 is already the answer.
    """

    grid: Dict[tuple, int]
    s_max: int
    labels: List[Any]

    @property
    def collapses(self) -> bool:
        return all(d == 0 for (s, _), d in self.grid.items() if s > 0)

    def dim(self, s, t):
        return self.grid.get((s, t), 0)

    def column(self, s=0):
        return {t: self.grid.get((s, t), 0) for t in self.labels}

    def total_dims(self) -> Dict[int, int]:
        """Sum along s + t (only for integer labels t)."""
        out: Dict[int, int] = {}
        for (s, t), d in self.grid.items():
            out[s + t] = out.get(s + t, 0) + d
        return out


def _coeff_key(m):
    if isinstance(m, GroupRingModule):
        return ("g", m.side, m.dim, tuple(a.array.tobytes() for a in m.action))
    return ("f", m.variance, tuple(m.dims), tuple(a.array.tobytes() for a in m.maps))


def serre_e2_page(base: SpaceData, fiber_coeffs: Dict[Any, Any], s_max: Optional[int] = None,
                  jobs: int = 1, L: Optional[int] = None) -> SerreE2:
    """E_2^{s,t} = H^s(base; coefficients_t) for each supplied label t.

    Each cell column is the target of an Eilenberg spectral sequence of the
    base; identical coefficient systems are computed once.  Independent
    labels may be evaluated on ``jobs`` threads.
    """
    s_max = base.valid_through if s_max is None else min(s_max, base.valid_through)
    labels = list(fiber_coeffs)
    unique: Dict[Any, Any] = {}
    for t in labels:
        unique.setdefault(_coeff_key(fiber_coeffs[t]), fiber_coeffs[t])

    def run(coeff):
        if (coeff.dim if isinstance(coeff, GroupRingModule) else coeff.total_dim) == 0:
            return [0] * (s_max + 1)
        if isinstance(base, GroupSpace):
            r = eilenberg_cohomology(base, coeff, L)
        else:
            r = eq_eilenberg(base, coeff, L, check_free=False)
        return _pad(r.target, s_max)[:s_max + 1]

    keys = list(unique)
    if jobs > 1 and len(keys) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as ex:
            values = list(ex.map(run, [unique[k] for k in keys]))
    else:
        values = [run(unique[k]) for k in keys]
    results = dict(zip(keys, values))
    grid = {}
    for t in labels:
        col = results[_coeff_key(fiber_coeffs[t])]
        for s in range(s_max + 1):
            grid[(s, t)] = col[s]
    return SerreE2(grid, s_max, labels)


@dataclass
class EquivariantEntry:
    label: Any
    degree: Any
    real_dim: int
    sign: int
    e2: List[int]
    fixed: bool


@dataclass
class Bo2Report:
    p: int
    q: int
    t_max: int
    nonequivariant: List[int]
    serre: SerreE2
    equivariant: List[EquivariantEntry]
    fixed_labels: List[Any]
    expected_fixed: List[Any]
    decomposition: Any

    @property
    def fixed_matches(self) -> bool:
        return [str(g) for g in self.fixed_labels] == [str(g) for g in self.expected_fixed]

    @property
    def equivariant_collapses(self) -> bool:
        return all(all(d == 0 for d in e.e2[1:]) for e in self.equivariant)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "p": self.p, "q": self.q, "t_max": self.t_max,
            "nonequivariant": {"degrees": list(range(self.t_max + 1)), "dims": self.nonequivariant,
                               "collapses": self.serre.collapses},
            "equivariant": [{"label": str(e.label), "degree": list(e.degree.mult), "real_dim": e.real_dim,
                             "sign": e.sign, "e2": e.e2, "fixed": e.fixed} for e in self.equivariant],
            "fixed_basis": [str(g) for g in self.fixed_labels],
            "fixed_matches_sign_rule": self.fixed_matches,
            "equivariant_collapses": self.equivariant_collapses,
            "decomposition_passed": self.decomposition.passed,
            "witnesses": {str(lab): {str(g): k for g, k in w.items()} for lab, w in self.decomposition.entries},
        }


def bo2_pipeline(p: int, q: int, t_max: int = 40, jobs: int = 1, s_max_equivariant: int = 3) -> Bo2Report:
    """Collapse-case Serre computation for B_G O(2) -> B_G Z/2 with G = C_p.

    Nonequivariantly: base RP^N (antipodal sphere model, N > t_max) with the
    coefficient system H^t(CP^infinity) twisted by x -> -x; E_2 is
    concentrated in s = 0 and gives H^n(BO(2); F_q).  Equivariantly: the
    base is the two-object fundamental category with the sphere chain
    functor, one generator-level coefficient system per label D_j C^n of
    real dimension <= t_max; the fixed labels are those with E_2^{0} = 1.
    """
    from . import models, rograding
    if not (is_prime(p) and is_prime(q) and p != 2 and q != 2 and p != q):
        raise BadPrimes("p and q must be distinct odd primes")
    base = models.sphere_antipodal(t_max + 1, q)
    coeffs = models.cp_cohomology_with_sign(t_max, q)
    serre = serre_e2_page(base, coeffs, s_max=t_max, jobs=jobs)
    nonequiv = [sum(serre.dim(s, n - s) for s in range(n + 1) if (s, n - s) in serre.grid) for n in range(t_max + 1)]

    eq_base = models.bgz2_sphere(p, q, s_max_equivariant + 1)
    labels = rograding.all_labels(p, max_real_dim=t_max)
    eq_coeffs = {lab: models.serre_coefficient_bgz2(p, q, [lab]) for lab in labels}
    eq_serre = serre_e2_page(eq_base, eq_coeffs, s_max=s_max_equivariant, jobs=jobs)
    entries = []
    for lab in labels:
        col = [eq_serre.dim(s, lab) for s in range(s_max_equivariant + 1)]
        deg = rograding.generator_degree(lab, p)
        entries.append(EquivariantEntry(lab, deg, deg.real_dim, rograding.involution_sign(lab), col, col[0] == 1))
    fixed = [e.label for e in entries if e.fixed]
    expected = rograding.fixed_basis(p, max_real_dim=t_max)
    dec = rograding.generator_decomposition_check(p, labels=fixed)
    return Bo2Report(p, q, t_max, nonequiv, serre, entries, fixed, expected, dec)
