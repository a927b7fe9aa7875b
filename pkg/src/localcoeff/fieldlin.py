"""Exact dense linear algebra over prime fields F_q.

Matrices are numpy int64 arrays of reduced residues.  Every homological
computation in the package reduces to kernels, images and subquotients
computed here.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .errors import BadParams, DimensionMismatch, NoSolution

__all__ = [
    "is_prime", "inverse_table", "mulmod", "FieldElt", "FieldMatrix", "RowReduction",
    "row_reduce", "rank", "kernel_basis", "image_basis", "solve",
    "Subspace", "Subquotient",
]

MAX_MODULUS = 1 << 16
_FLOAT_EXACT = 1 << 53


def mulmod(a, b, q) -> np.ndarray:
    """Exact product of integer arrays reduced mod q.

    Uses float64 BLAS whenever every partial sum stays below 2^53, otherwise
    int64 products over chunks of the inner dimension.
    """
    a = np.mod(np.asarray(a, dtype=np.int64), q)
    b = np.mod(np.asarray(b, dtype=np.int64), q)
    k = a.shape[-1]
    bound = (q - 1) ** 2
    if k * bound < _FLOAT_EXACT:
        return np.mod(a.astype(np.float64) @ b.astype(np.float64), q).astype(np.int64)
    step = max(1, ((1 << 62) // max(bound, 1)))
    out = np.zeros(a.shape[:-1] + b.shape[1:], dtype=np.int64)
    for i in range(0, k, step):
        out = np.mod(out + a[..., i:i + step] @ b[i:i + step], q)
    return out


@lru_cache(maxsize=None)
def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def check_modulus(q: int) -> int:
    q = int(q)
    if not is_prime(q) or q >= MAX_MODULUS:
        raise BadParams(f"field modulus must be a prime below 2**16, got {q}")
    return q


@lru_cache(maxsize=None)
def inverse_table(q: int) -> np.ndarray:
    """``table[a]`` is the inverse of ``a`` mod q (``table[0] = 0``)."""
    table = np.zeros(q, dtype=np.int64)
    for a in range(1, q):
        table[a] = pow(a, q - 2, q)
    table.setflags(write=False)
    return table


@dataclass(frozen=True)
class FieldElt:
    residue: int
    modulus: int

    def __post_init__(self):
        check_modulus(self.modulus)
        object.__setattr__(self, "residue", int(self.residue) % self.modulus)

    def _coerce(self, other):
        if isinstance(other, FieldElt):
            if other.modulus != self.modulus:
                raise DimensionMismatch("field elements over different moduli")
            return other.residue
        return int(other)

    def __add__(self, other):
        return FieldElt(self.residue + self._coerce(other), self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElt(self.residue - self._coerce(other), self.modulus)

    def __rsub__(self, other):
        return FieldElt(self._coerce(other) - self.residue, self.modulus)

    def __mul__(self, other):
        return FieldElt(self.residue * self._coerce(other), self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElt(-self.residue, self.modulus)

    def inverse(self):
        if self.residue == 0:
            raise ZeroDivisionError("zero has no inverse")
        return FieldElt(int(inverse_table(self.modulus)[self.residue]), self.modulus)

    def __truediv__(self, other):
        return self * FieldElt(self._coerce(other), self.modulus).inverse()

    def __int__(self):
        return self.residue


def _as_array(entries, q, shape=None):
    a = np.array(entries, dtype=np.int64)
    if shape is not None:
        if a.size != int(np.prod(shape)):
            raise DimensionMismatch(f"{a.size} entries do not fill shape {tuple(shape)}")
        a = a.reshape(shape)
    if a.ndim != 2:
        if a.size == 0:
            a = a.reshape(0, 0)
        else:
            raise DimensionMismatch(f"matrix entries must form a 2-d grid, got shape {a.shape}")
    return np.mod(a, q)


class FieldMatrix:
    """Immutable dense matrix over F_q."""

    __slots__ = ("q", "_a")

    def __init__(self, entries, q, shape=None):
        self.q = check_modulus(q)
        a = _as_array(entries, self.q, shape)
        a.setflags(write=False)
        self._a = a

    @classmethod
    def _wrap(cls, a, q):
        m = object.__new__(cls)
        m.q = q
        a = np.mod(a, q)
        a.setflags(write=False)
        m._a = a
        return m

    @classmethod
    def zeros(cls, rows, cols, q):
        return cls._wrap(np.zeros((rows, cols), dtype=np.int64), check_modulus(q))

    @classmethod
    def identity(cls, n, q):
        return cls._wrap(np.eye(n, dtype=np.int64), check_modulus(q))

    @classmethod
    def block(cls, blocks, row_dims, col_dims, q):
        """Assemble from a dict ``{(i, j): FieldMatrix}``; missing blocks are zero."""
        a = np.zeros((sum(row_dims), sum(col_dims)), dtype=np.int64)
        r0 = np.concatenate([[0], np.cumsum(row_dims)]).astype(int)
        c0 = np.concatenate([[0], np.cumsum(col_dims)]).astype(int)
        for (i, j), b in blocks.items():
            arr = b.array if isinstance(b, FieldMatrix) else np.asarray(b)
            if arr.shape != (row_dims[i], col_dims[j]):
                raise DimensionMismatch(f"block {(i, j)} has shape {arr.shape}")
            a[r0[i]:r0[i + 1], c0[j]:c0[j + 1]] = arr
        return cls._wrap(a, check_modulus(q))

    @property
    def array(self) -> np.ndarray:
        return self._a

    @property
    def rows(self) -> int:
        return self._a.shape[0]

    @property
    def cols(self) -> int:
        return self._a.shape[1]

    @property
    def shape(self):
        return self._a.shape

    def __getitem__(self, idx):
        out = self._a[idx]
        if np.ndim(out) == 0:
            return FieldElt(int(out), self.q)
        return out

    def _other(self, other):
        if isinstance(other, FieldMatrix):
            if other.q != self.q:
                raise DimensionMismatch("matrices over different fields")
            return other._a
        return np.asarray(other, dtype=np.int64)

    def __matmul__(self, other):
        b = self._other(other)
        if self.cols != b.shape[0]:
            raise DimensionMismatch(f"cannot multiply {self.shape} by {b.shape}")
        out = mulmod(self._a, b, self.q)
        if b.ndim == 1:
            return out
        return FieldMatrix._wrap(out, self.q)

    def __add__(self, other):
        b = self._other(other)
        if b.shape != self.shape:
            raise DimensionMismatch(f"cannot add {self.shape} and {b.shape}")
        return FieldMatrix._wrap(self._a + b, self.q)

    def __sub__(self, other):
        b = self._other(other)
        if b.shape != self.shape:
            raise DimensionMismatch(f"cannot subtract {b.shape} from {self.shape}")
        return FieldMatrix._wrap(self._a - b, self.q)

    def __neg__(self):
        return FieldMatrix._wrap(-self._a, self.q)

    def scale(self, c):
        return FieldMatrix._wrap(self._a * (int(c) % self.q), self.q)

    __rmul__ = scale

    @property
    def T(self):
        return FieldMatrix._wrap(self._a.T.copy(), self.q)

    def hstack(self, *others):
        return FieldMatrix._wrap(np.hstack([self._a] + [self._other(o) for o in others]), self.q)

    def vstack(self, *others):
        return FieldMatrix._wrap(np.vstack([self._a] + [self._other(o) for o in others]), self.q)

    def kron(self, other):
        return FieldMatrix._wrap(np.kron(self._a, self._other(other)), self.q)

    def is_zero(self) -> bool:
        return not self._a.any()

    def is_identity(self) -> bool:
        return self.rows == self.cols and np.array_equal(self._a, np.eye(self.rows, dtype=np.int64))

    def rank(self) -> int:
        return rank(self)

    def inverse(self):
        if self.rows != self.cols:
            raise DimensionMismatch("only square matrices are invertible")
        n = self.rows
        red, piv = _rref(np.hstack([self._a, np.eye(n, dtype=np.int64)]), self.q, ncols=n)
        if len(piv) < n:
            raise NoSolution("matrix is singular")
        return FieldMatrix._wrap(red[:, n:], self.q)

    def tolist(self):
        return self._a.tolist()

    def __eq__(self, other):
        if not isinstance(other, FieldMatrix):
            return NotImplemented
        return self.q == other.q and self.shape == other.shape and np.array_equal(self._a, other._a)

    __hash__ = None

    def __repr__(self):
        return f"FieldMatrix({self._a.tolist()}, q={self.q})"


def _rref(a, q, ncols=None):
    """Gauss-Jordan on a copy of ``a``; pivots searched in the first ``ncols`` columns.

    Pivot rule: first column (left to right) with a nonzero entry among the
    remaining rows, topmost such row.
    """
    a = np.mod(np.array(a, dtype=np.int64), q)
    nrows = a.shape[0]
    ncols = a.shape[1] if ncols is None else ncols
    inv = inverse_table(q)
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        i = r + nz[0]
        if i != r:
            a[[r, i]] = a[[i, r]]
        a[r] = (a[r] * inv[a[r, c]]) % q
        col = a[:, c].copy()
        col[r] = 0
        nzr = np.flatnonzero(col)
        if nzr.size:
            a[nzr] = (a[nzr] - np.outer(col[nzr], a[r])) % q
        pivots.append(c)
        r += 1
    return a, pivots


class RowReduction(NamedTuple):
    rank: int
    rref: FieldMatrix
    pivot_cols: list


def row_reduce(m: FieldMatrix) -> RowReduction:
    red, piv = _rref(m.array, m.q)
    return RowReduction(len(piv), FieldMatrix._wrap(red, m.q), piv)


def rank(m: FieldMatrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    # reduce along the shorter side
    a = m.array if m.rows <= m.cols else m.array.T
    return len(_rref(a, m.q)[1])


def _kernel_array(a, q):
    rows, cols = a.shape
    red, piv = _rref(a, q)
    free = [c for c in range(cols) if c not in set(piv)]
    basis = np.zeros((cols, len(free)), dtype=np.int64)
    for k, f in enumerate(free):
        basis[f, k] = 1
        for i, p in enumerate(piv):
            basis[p, k] = (-red[i, f]) % q
    return basis


def kernel_basis(m: FieldMatrix) -> "Subspace":
    """Basis of the null space; one vector per non-pivot column."""
    return Subspace._trusted(_kernel_array(m.array, m.q), m.q)


def image_basis(m: FieldMatrix) -> "Subspace":
    return Subspace.span(m)


def solve(m: FieldMatrix, b):
    """Return one x with ``m @ x == b``; raise NoSolution if none exists."""
    b = np.mod(np.asarray(b.array if isinstance(b, FieldMatrix) else b, dtype=np.int64).reshape(-1), m.q)
    if b.shape[0] != m.rows:
        raise DimensionMismatch(f"right-hand side has length {b.shape[0]}, expected {m.rows}")
    aug = np.hstack([m.array, b[:, None]])
    red, piv = _rref(aug, m.q)
    if piv and piv[-1] == m.cols:
        raise NoSolution("inconsistent linear system")
    x = np.zeros(m.cols, dtype=np.int64)
    for i, p in enumerate(piv):
        x[p] = red[i, m.cols]
    return x


def _left_inverse(a, q):
    """Left inverse of a full-column-rank matrix."""
    n, k = a.shape
    red, piv = _rref(np.hstack([a, np.eye(n, dtype=np.int64)]), q, ncols=k)
    if len(piv) != k:
        raise DimensionMismatch("columns are not independent")
    return red[:k, k:]


class Subspace:
    """Subspace of F_q^n held by an independent column basis (n x k)."""

    __slots__ = ("q", "ambient_dim", "_basis", "_linv")

    def __init__(self, basis: FieldMatrix):
        sub = Subspace.span(basis)
        self.q, self.ambient_dim, self._basis, self._linv = sub.q, sub.ambient_dim, sub._basis, None

    @classmethod
    def _trusted(cls, basis_array, q, ambient_dim=None):
        s = object.__new__(cls)
        s.q = q
        b = np.mod(np.asarray(basis_array, dtype=np.int64), q)
        if b.ndim != 2:
            b = b.reshape(ambient_dim or 0, -1)
        b.setflags(write=False)
        s._basis = b
        s.ambient_dim = b.shape[0] if ambient_dim is None else ambient_dim
        s._linv = None
        return s

    @classmethod
    def span(cls, vectors, q=None, ambient_dim=None):
        """Span of the columns of ``vectors`` with a canonical (reduced) basis."""
        if isinstance(vectors, FieldMatrix):
            q, a = vectors.q, vectors.array
        else:
            a = np.asarray(vectors, dtype=np.int64)
        if a.ndim == 1:
            a = a[:, None]
        n = a.shape[0] if ambient_dim is None else ambient_dim
        if a.size == 0:
            return cls._trusted(np.zeros((n, 0), dtype=np.int64), q, n)
        a = a.reshape(n, -1)
        if a.shape[1] == 0 or not a.any():
            return cls._trusted(np.zeros((n, 0), dtype=np.int64), q, n)
        red, piv = _rref(a.T, q)
        return cls._trusted(red[:len(piv)].T, q, n)

    @classmethod
    def zero(cls, n, q):
        return cls._trusted(np.zeros((n, 0), dtype=np.int64), q, n)

    @classmethod
    def full(cls, n, q):
        return cls._trusted(np.eye(n, dtype=np.int64), q, n)

    @property
    def basis(self) -> FieldMatrix:
        return FieldMatrix._wrap(self._basis.copy(), self.q)

    @property
    def array(self) -> np.ndarray:
        return self._basis

    @property
    def dim(self) -> int:
        return self._basis.shape[1]

    def __len__(self):
        return self.dim

    def _left_inv(self):
        if self._linv is None:
            self._linv = _left_inverse(self._basis, self.q)
        return self._linv

    def contains(self, v) -> bool:
        v = np.mod(np.asarray(v, dtype=np.int64), self.q)
        if v.ndim == 1:
            v = v[:, None]
        if self.dim == 0:
            return not v.any()
        c = mulmod(self._left_inv(), v, self.q)
        return np.array_equal(mulmod(self._basis, c, self.q), v)

    def coordinates(self, v) -> np.ndarray:
        """Coefficients of ``v`` in the basis; raises NoSolution if v is outside."""
        v = np.mod(np.asarray(v, dtype=np.int64), self.q)
        if self.dim == 0:
            if v.any():
                raise NoSolution("vector not in the zero subspace")
            return np.zeros((0,) + v.shape[1:], dtype=np.int64)
        c = mulmod(self._left_inv(), v, self.q)
        if not np.array_equal(mulmod(self._basis, c, self.q), v):
            raise NoSolution("vector not in subspace")
        return c

    def __add__(self, other: "Subspace") -> "Subspace":
        if other.ambient_dim != self.ambient_dim:
            raise DimensionMismatch("subspaces of different ambient spaces")
        return Subspace.span(np.hstack([self._basis, other._basis]), self.q, self.ambient_dim)

    def intersect(self, other: "Subspace") -> "Subspace":
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.ambient_dim, self.q)
        a = np.hstack([self._basis, -other._basis])
        ker = _kernel_array(a, self.q)
        return Subspace.span(self._basis @ ker[:self.dim], self.q, self.ambient_dim)

    def is_subspace_of(self, other: "Subspace") -> bool:
        return other.contains(self._basis)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.q == other.q and self.ambient_dim == other.ambient_dim
                and np.array_equal(self._basis, other._basis))

    __hash__ = None

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim}, q={self.q})"


class Subquotient:
    """Quotient ``num / den`` of nested subspaces of one ambient space.

    ``reps`` holds representatives of a quotient basis; ``projection`` maps
    any vector of ``num`` to its quotient coordinates.
    """

    def __init__(self, num: Subspace, den: Subspace, check=True):
        if num.ambient_dim != den.ambient_dim:
            raise DimensionMismatch("subquotient of different ambient spaces")
        q = num.q
        if check and not den.is_subspace_of(num):
            raise DimensionMismatch("denominator is not contained in numerator")
        n = num.ambient_dim
        if num.dim == den.dim:
            ext = np.zeros((n, 0), dtype=np.int64)
        else:
            stacked = np.hstack([den.array, num.array])
            _, piv = _rref(stacked, q)
            ext = num.array[:, [p - den.dim for p in piv if p >= den.dim]]
        self.q = q
        self.num, self.den = num, den
        self._reps = ext
        full = np.hstack([den.array, ext])
        self._proj = (_left_inverse(full, q)[den.dim:] if full.shape[1]
                      else np.zeros((0, n), dtype=np.int64))

    @property
    def dim(self) -> int:
        return self._reps.shape[1]

    @property
    def reps(self) -> np.ndarray:
        return self._reps

    @property
    def projection(self) -> np.ndarray:
        return self._proj

    def coords(self, v) -> np.ndarray:
        """Quotient coordinates of vectors in ``num`` (columns of v)."""
        return mulmod(self._proj, v, self.q)
