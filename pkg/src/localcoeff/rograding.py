"""Real representation bookkeeping for C_p and the generators D_j C^n.

A virtual real representation of C_p (p odd) is a multiplicity vector over
the real irreducibles: the trivial line and the rotation planes rho_k,
k = 1..(p-1)/2, where rho_k is the realification of both phi_k and
phi_{p-k} (phi_k: g -> e^{2 pi i k / p}).
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Tuple

from .errors import BadParams, ProductNotAvailable
from .fieldlin import is_prime

__all__ = [
    "VirtualRep", "GeneratorLabel", "omega", "omega_closed_form", "regular_real",
    "generator_degree", "involution_sign", "all_labels", "fixed_basis", "odd_basis",
    "fixed_algebra_generators", "generator_decomposition_check", "DecompositionReport",
]


def _check_p(p):
    if p < 3 or not is_prime(p):
        raise BadParams(f"p must be an odd prime, got {p}")
    return p


@dataclass(frozen=True)
class VirtualRep:
    """Multiplicities (trivial, rho_1, ..., rho_{(p-1)/2})."""

    p: int
    mult: Tuple[int, ...]

    def __post_init__(self):
        if len(self.mult) != (self.p + 1) // 2:
            raise BadParams("multiplicity vector has the wrong length")

    @classmethod
    def zero(cls, p):
        return cls(p, (0,) * ((p + 1) // 2))

    @classmethod
    def from_complex(cls, p, counts):
        """Realification of sum counts[k] phi_k (phi_0 gives two trivial lines)."""
        m = [0] * ((p + 1) // 2)
        for k, c in enumerate(counts):
            k %= p
            if k == 0:
                m[0] += 2 * c
            else:
                m[min(k, p - k)] += c
        return cls(p, tuple(m))

    @property
    def real_dim(self):
        return self.mult[0] + 2 * sum(self.mult[1:])

    def _check(self, other):
        if not isinstance(other, VirtualRep) or other.p != self.p:
            raise BadParams("representations of different groups")

    def __add__(self, other):
        self._check(other)
        return VirtualRep(self.p, tuple(a + b for a, b in zip(self.mult, other.mult)))

    def __sub__(self, other):
        self._check(other)
        return VirtualRep(self.p, tuple(a - b for a, b in zip(self.mult, other.mult)))

    def __mul__(self, k: int):
        return VirtualRep(self.p, tuple(k * a for a in self.mult))

    __rmul__ = __mul__

    def is_actual(self):
        return all(a >= 0 for a in self.mult)

    def __str__(self):
        parts = [str(self.mult[0])] if self.mult[0] else []
        for k, a in enumerate(self.mult[1:], start=1):
            if a:
                parts.append(f"rho{k}" if a == 1 else f"{a}rho{k}")
        return " + ".join(parts) if parts else "0"

    def to_json(self):
        return list(self.mult)


@lru_cache(maxsize=None)
def omega(j: int, p: int) -> VirtualRep:
    """Realification of phi_j^{-1} (phi_0 + ... + phi_{j-1})."""
    _check_p(p)
    if j < 0:
        raise BadParams("omega needs j >= 0")
    counts = [0] * p
    for i in range(j):
        counts[(i - j) % p] += 1
    return VirtualRep.from_complex(p, counts)


def regular_real(p: int) -> VirtualRep:
    """Underlying real representation of the complex regular representation."""
    return VirtualRep.from_complex(p, [1] * p)


def omega_closed_form(j: int, p: int) -> VirtualRep:
    """r*lambda + phi_{p-j0} + ... + phi_{p-1} for j = r p + j0."""
    r, j0 = divmod(j, p)
    counts = [r] * p
    for k in range(p - j0, p):
        counts[k] += 1
    return VirtualRep.from_complex(p, counts)


@dataclass(frozen=True, order=True)
class GeneratorLabel:
    """The additive generator D_j C^n (D_0 = 1), 0 <= j < p."""

    j: int
    n: int

    def __post_init__(self):
        if self.j < 0 or self.n < 0:
            raise BadParams("generator indices must be nonnegative")

    def __str__(self):
        if self.j == 0 and self.n == 0:
            return "1"
        d = f"D{self.j}" if self.j else ""
        c = "" if self.n == 0 else ("C" if self.n == 1 else f"C^{self.n}")
        return d + c

    @classmethod
    def parse(cls, text: str) -> "GeneratorLabel":
        import re
        t = text.strip()
        if t == "1":
            return cls(0, 0)
        m = re.fullmatch(r"(?:D(\d+))?(?:C(?:\^(\d+))?)?", t)
        if not m or not t:
            raise BadParams(f"cannot parse generator label {text!r}")
        j = int(m.group(1)) if m.group(1) else 0
        n = 0 if "C" not in t else (int(m.group(2)) if m.group(2) else 1)
        return cls(j, n)

    def __mul__(self, other: "GeneratorLabel") -> "GeneratorLabel":
        if self.j and other.j:
            raise ProductNotAvailable(f"the product {self} * {other} is not available (D_j * D_k relations are not modelled)")
        return GeneratorLabel(self.j + other.j, self.n + other.n)

    @property
    def sign(self):
        return involution_sign(self)

    def restriction_degree(self, p):
        """Power of x that the generator restricts to."""
        return self.j + self.n * p


def generator_degree(label: GeneratorLabel, p: int) -> VirtualRep:
    """omega_j + n omega_p."""
    return omega(label.j, p) + label.n * omega(p, p)


def involution_sign(label: GeneratorLabel) -> int:
    return -1 if (label.j + label.n) % 2 else 1


def all_labels(p: int, max_total: Optional[int] = None, max_real_dim: Optional[int] = None) -> List[GeneratorLabel]:
    """Labels with j + n <= max_total and/or real dimension <= max_real_dim."""
    _check_p(p)
    if max_total is None and max_real_dim is None:
        raise BadParams("a bound (max_total or max_real_dim) is required")
    bounds = []
    if max_total is not None:
        bounds.append(max_total)
    if max_real_dim is not None:
        bounds.append(max_real_dim // (2 * p))
    out = []
    for n in range(min(bounds) + 1):
        for j in range(p):
            if max_total is not None and j + n > max_total:
                continue
            if max_real_dim is not None and 2 * (j + n * p) > max_real_dim:
                continue
            out.append(GeneratorLabel(j, n))
    return sorted(out, key=lambda g: (g.j + g.n * p, g.j))


def fixed_basis(p, max_total=None, max_real_dim=None) -> List[GeneratorLabel]:
    """The labels on which the involution acts by +1."""
    return [g for g in all_labels(p, max_total, max_real_dim) if involution_sign(g) == 1]


def odd_basis(p, max_total=None, max_real_dim=None) -> List[GeneratorLabel]:
    return [g for g in all_labels(p, max_total, max_real_dim) if involution_sign(g) == -1]


def fixed_algebra_generators(p) -> List[GeneratorLabel]:
    """D_2, D_4, ..., D_{p-1}, D_1 C, D_3 C, ..., D_{p-2} C, C^2."""
    _check_p(p)
    gens = [GeneratorLabel(j, 0) for j in range(2, p, 2)]
    gens += [GeneratorLabel(j, 1) for j in range(1, p, 2)]
    gens.append(GeneratorLabel(0, 2))
    return gens


@dataclass
class DecompositionReport:
    p: int
    entries: List[Tuple[GeneratorLabel, Dict[GeneratorLabel, int]]]
    failures: List[GeneratorLabel]

    @property
    def passed(self):
        return not self.failures


def _canonical_witness(label: GeneratorLabel) -> Dict[GeneratorLabel, int]:
    w: Dict[GeneratorLabel, int] = {}
    j, n = label.j, label.n
    if j % 2 == 0:
        if j:
            w[GeneratorLabel(j, 0)] = 1
        if n // 2:
            w[GeneratorLabel(0, 2)] = n // 2
    else:
        w[GeneratorLabel(j, 1)] = 1
        if (n - 1) // 2:
            w[GeneratorLabel(0, 2)] = (n - 1) // 2
    return w


def _search_witness(target: VirtualRep, gens, p) -> Optional[Dict[GeneratorLabel, int]]:
    degs = [(g, generator_degree(g, p)) for g in gens]

    def rec(i, rest):
        if rest == VirtualRep.zero(p):
            return {}
        if i == len(degs) or not rest.is_actual():
            return None
        g, d = degs[i]
        k = 0
        while (rest - k * d).is_actual():
            sub = rec(i + 1, rest - k * d)
            if sub is not None:
                if k:
                    sub[g] = k
                return sub
            k += 1
        return None

    return rec(0, target)


def generator_decomposition_check(p, max_total=None, max_real_dim=None, labels: Iterable[GeneratorLabel] = None) -> DecompositionReport:
    """Write the degree of every fixed label as a sum of fixed generator degrees."""
    _check_p(p)
    labs = list(labels) if labels is not None else fixed_basis(p, max_total, max_real_dim)
    gens = fixed_algebra_generators(p)
    entries, failures = [], []
    for lab in labs:
        if involution_sign(lab) != 1:
            failures.append(lab)
            continue
        w = _canonical_witness(lab)
        total = VirtualRep.zero(p)
        for g, k in w.items():
            total = total + k * generator_degree(g, p)
        ok = all(g in gens for g in w) and total == generator_degree(lab, p)
        if not ok:
            w = _search_witness(generator_degree(lab, p), gens, p)
        if w is None:
            failures.append(lab)
        else:
            entries.append((lab, w))
    return DecompositionReport(p, entries, failures)
