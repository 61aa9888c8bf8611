"""Exact linear algebra over GF(2) and over the integers.

Binary vectors and matrix rows are Python ints used as bitsets: bit ``j`` of a
row is the entry in column ``j`` (bit 0 is the first coordinate).
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

import numpy as np

__all__ = [
    "BitMatrix",
    "IntMatrix",
    "rank_f2",
    "lempel_factor",
    "rank_exact",
    "bareiss_rank",
    "modular_rank",
    "walsh_transform",
    "walsh_spectrum",
    "parity",
    "dot_f2",
]


def parity(x: int) -> int:
    return x.bit_count() & 1


def dot_f2(x: int, y: int) -> int:
    """Standard dot product of two bit-vectors over GF(2)."""
    return (x & y).bit_count() & 1


def _bits(x: int):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


@dataclass(frozen=True)
class BitMatrix:
    """Dense binary matrix with bit-packed rows."""

    rows: tuple[int, ...]
    ncols: int

    def __post_init__(self):
        object.__setattr__(self, "rows", tuple(int(r) for r in self.rows))
        limit = 1 << self.ncols
        for i, r in enumerate(self.rows):
            if r < 0 or r >= limit:
                raise ValueError(f"row {i} has bits outside {self.ncols} columns")

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), self.ncols)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> BitMatrix:
        return cls((0,) * nrows, ncols)

    @classmethod
    def identity(cls, n: int) -> BitMatrix:
        return cls(tuple(1 << i for i in range(n)), n)

    @classmethod
    def ones(cls, nrows: int, ncols: int) -> BitMatrix:
        return cls(((1 << ncols) - 1,) * nrows, ncols)

    @classmethod
    def from_array(cls, arr) -> BitMatrix:
        a = np.asarray(arr)
        if a.ndim != 2:
            raise ValueError("expected a 2-d array")
        if not np.all((a == 0) | (a == 1)):
            raise ValueError("entries must be 0 or 1")
        rows = [sum(1 << int(j) for j in np.flatnonzero(line)) for line in a]
        return cls(tuple(rows), a.shape[1])

    def to_array(self) -> np.ndarray:
        out = np.zeros(self.shape, dtype=np.int64)
        for i, r in enumerate(self.rows):
            for j in _bits(r):
                out[i, j] = 1
        return out

    def entry(self, i: int, j: int) -> int:
        if not (0 <= i < self.nrows and 0 <= j < self.ncols):
            raise IndexError((i, j))
        return (self.rows[i] >> j) & 1

    def column(self, j: int) -> int:
        """Column ``j`` packed as an int over the row index."""
        c = 0
        for i, r in enumerate(self.rows):
            if (r >> j) & 1:
                c |= 1 << i
        return c

    def transpose(self) -> BitMatrix:
        cols = [0] * self.ncols
        for i, r in enumerate(self.rows):
            for j in _bits(r):
                cols[j] |= 1 << i
        return BitMatrix(tuple(cols), self.nrows)

    def __matmul__(self, other: BitMatrix) -> BitMatrix:
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        out = []
        for r in self.rows:
            acc = 0
            for k in _bits(r):
                acc ^= other.rows[k]
            out.append(acc)
        return BitMatrix(tuple(out), other.ncols)

    def __add__(self, other: BitMatrix) -> BitMatrix:
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return BitMatrix(tuple(a ^ b for a, b in zip(self.rows, other.rows)), self.ncols)

    def is_symmetric(self) -> bool:
        return self.nrows == self.ncols and self.transpose().rows == self.rows

    def diagonal(self) -> int:
        """Diagonal entries packed as an int."""
        d = 0
        for i, r in enumerate(self.rows[: self.ncols]):
            d |= ((r >> i) & 1) << i
        return d

    def to_text(self) -> str:
        lines = [f"{self.nrows} {self.ncols}"]
        for r in self.rows:
            lines.append("".join("1" if (r >> j) & 1 else "0" for j in range(self.ncols)))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> BitMatrix:
        rows_n, cols_n, body = _read_header(text)
        rows = []
        for lineno, line in body:
            s = line.strip()
            if len(s) != cols_n or set(s) - {"0", "1"}:
                raise ValueError(f"line {lineno}: expected {cols_n} characters from '01'")
            rows.append(sum(1 << j for j, ch in enumerate(s) if ch == "1"))
        if len(rows) != rows_n:
            raise ValueError(f"expected {rows_n} rows, found {len(rows)}")
        return cls(tuple(rows), cols_n)


@dataclass(frozen=True)
class IntMatrix:
    """Integer matrix with unbounded entries."""

    rows: tuple[tuple[int, ...], ...]
    ncols: int

    def __post_init__(self):
        rows = tuple(tuple(int(x) for x in r) for r in self.rows)
        for i, r in enumerate(rows):
            if len(r) != self.ncols:
                raise ValueError(f"row {i} has length {len(r)}, expected {self.ncols}")
        object.__setattr__(self, "rows", rows)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), self.ncols)

    @classmethod
    def from_array(cls, arr) -> IntMatrix:
        a = np.asarray(arr)
        if a.ndim != 2:
            raise ValueError("expected a 2-d array")
        return cls(tuple(tuple(int(x) for x in row) for row in a), a.shape[1])

    @classmethod
    def from_bitmatrix(cls, M: BitMatrix) -> IntMatrix:
        return cls(tuple(tuple((r >> j) & 1 for j in range(M.ncols)) for r in M.rows), M.ncols)

    def to_array(self) -> np.ndarray:
        """Entries as int64 when they fit, otherwise as Python ints (object dtype)."""
        big = any(abs(x) >= 2**62 for r in self.rows for x in r)
        return np.array(self.rows, dtype=object if big else np.int64).reshape(self.shape)

    def to_text(self) -> str:
        lines = [f"{self.nrows} {self.ncols}"]
        lines += [" ".join(str(x) for x in r) for r in self.rows]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> IntMatrix:
        rows_n, cols_n, body = _read_header(text)
        rows = []
        for lineno, line in body:
            try:
                vals = tuple(int(tok) for tok in line.split())
            except ValueError:
                raise ValueError(f"line {lineno}: non-integer entry") from None
            if len(vals) != cols_n:
                raise ValueError(f"line {lineno}: expected {cols_n} entries, found {len(vals)}")
            rows.append(vals)
        if len(rows) != rows_n:
            raise ValueError(f"expected {rows_n} rows, found {len(rows)}")
        return cls(tuple(rows), cols_n)


def _read_header(text: str):
    lines = [(i + 1, ln) for i, ln in enumerate(text.splitlines()) if ln.strip()]
    if not lines:
        raise ValueError("line 1: missing 'rows cols' header")
    lineno, head = lines[0]
    parts = head.split()
    if len(parts) != 2 or not all(p.isdigit() for p in parts):
        raise ValueError(f"line {lineno}: header must be 'rows cols'")
    return int(parts[0]), int(parts[1]), lines[1:]


# ---------------------------------------------------------------------------
# GF(2)
# ---------------------------------------------------------------------------


def rank_f2(M: BitMatrix) -> int:
    """Rank over GF(2), by reduction against a basis keyed on leading bit."""
    basis: dict[int, int] = {}
    for row in M.rows:
        while row:
            top = row.bit_length() - 1
            b = basis.get(top)
            if b is None:
                basis[top] = row
                break
            row ^= b
    return len(basis)


def _find_hyperbolic_mix() -> tuple[int, int, int]:
    # Coefficient vectors (bit 0: g, bit 1: a, bit 2: b) of three generators u_k
    # with sum u_k u_k^T = g g^T + a b^T + b a^T.
    target = ((1, 0, 0), (0, 0, 1), (0, 1, 0))
    for triple in itertools.product(range(1, 8), repeat=3):
        gram = tuple(
            tuple(sum(((p >> i) & 1) * ((p >> j) & 1) for p in triple) & 1 for j in range(3))
            for i in range(3)
        )
        if gram == target:
            return triple
    raise AssertionError("no decomposition of <1> + H into three squares")


_HYPERBOLIC_MIX = _find_hyperbolic_mix()


def lempel_factor(M: BitMatrix) -> BitMatrix:
    """Factor a symmetric binary matrix as ``B @ B.T`` with ``rank_f2(M)`` columns.

    ``M`` must be symmetric with at least one nonzero diagonal entry. Pivots are
    taken lowest index first, so the result is reproducible.
    """
    if not M.is_symmetric():
        raise ValueError("matrix is not symmetric")
    n = M.nrows
    R = list(M.rows)
    diag = M.diagonal()
    if not diag:
        raise ValueError("matrix has an all-zero diagonal; no factorization with rank-many columns")

    gens: list[int] = []
    while True:
        if diag:
            i = (diag & -diag).bit_length() - 1
            c = R[i]
            gens.append(c)
            for k in _bits(c):
                R[k] ^= c
            diag ^= c
            continue
        i = next((k for k in range(n) if R[k]), None)
        if i is None:
            break
        # Alternating residual: split off a hyperbolic pair and fold it into an
        # earlier generator g, since <1> + H is congruent to <1, 1, 1>.
        j = (R[i] & -R[i]).bit_length() - 1
        a, b = R[i], R[j]
        for k in _bits(a):
            R[k] ^= b
        for k in _bits(b):
            R[k] ^= a
        g = gens[0]
        basis = (g, a, b)
        mixed = []
        for coeffs in _HYPERBOLIC_MIX:
            u = 0
            for t in _bits(coeffs):
                u ^= basis[t]
            mixed.append(u)
        gens[0:1] = mixed

    rows = [0] * n
    for t, c in enumerate(gens):
        for k in _bits(c):
            rows[k] |= 1 << t
    return BitMatrix(tuple(rows), len(gens))


# ---------------------------------------------------------------------------
# Integers / rationals
# ---------------------------------------------------------------------------


def bareiss_rank(M: IntMatrix) -> int:
    """Rank over Q by Bareiss fraction-free elimination."""
    A = [list(r) for r in M.rows]
    nr, nc = M.shape
    rank = 0
    prev = 1
    for c in range(nc):
        if rank == nr:
            break
        piv = next((i for i in range(rank, nr) if A[i][c]), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        prow = A[rank]
        p = prow[c]
        for i in range(rank + 1, nr):
            row = A[i]
            f = row[c]
            if f:
                for j in range(c + 1, nc):
                    row[j] = (p * row[j] - f * prow[j]) // prev
            else:
                for j in range(c + 1, nc):
                    row[j] = (p * row[j]) // prev
            row[c] = 0
        prev = p
        rank += 1
    return rank


_PRIMES = (2147483647, 2147483629, 2147483587, 2147483579, 2147483563, 2147483549)


def _rref_mod(A: np.ndarray, p: int):
    """Reduced row echelon form mod p; returns (R, pivot columns)."""
    R = A % p
    nr, nc = R.shape
    pivots = []
    r = 0
    for c in range(nc):
        if r == nr:
            break
        nz = np.flatnonzero(R[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            R[[r, piv]] = R[[piv, r]]
        inv = pow(int(R[r, c]), -1, p)
        R[r, c:] = (R[r, c:] * inv) % p
        col = R[:, c].copy()
        col[r] = 0
        rows = np.flatnonzero(col)
        if rows.size:
            R[np.ix_(rows, np.arange(c, nc))] = (
                R[np.ix_(rows, np.arange(c, nc))] - (col[rows, None] * R[r, c:][None, :]) % p
            ) % p
        pivots.append(c)
        r += 1
    return R[:r], pivots


def _ratrecon(a: int, m: int) -> Fraction | None:
    """Rational reconstruction of a mod m with |num|, den <= sqrt(m/2)."""
    bound = isqrt(m // 2)
    r0, r1 = m, a % m
    s0, s1 = 0, 1
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    if gcd(r1, abs(s1)) != 1:
        return None
    return Fraction(r1, s1)


def _kernel_certificate(A: np.ndarray, residues: np.ndarray, pivots: list[int], modulus: int) -> bool:
    """Lift the mod-``modulus`` kernel basis to Q and check it is an exact kernel of A."""
    n = A.shape[1]
    pivot_set = set(pivots)
    free = [c for c in range(n) if c not in pivot_set]
    if not free:
        return True
    neg = (-residues) % modulus
    uniq, inverse = np.unique(neg, return_inverse=True)
    nums, dens = [], []
    for v in uniq:
        v = int(v)
        if v == 0:
            nums.append(0)
            dens.append(1)
            continue
        frac = _ratrecon(v, modulus)
        if frac is None:
            return False
        nums.append(frac.numerator)
        dens.append(frac.denominator)
    inverse = inverse.reshape(neg.shape)
    num = np.array(nums, dtype=object)[inverse]
    den = np.array(dens, dtype=object)[inverse]
    col_den = [1] * len(free)
    for j in range(len(free)):
        for d in set(den[:, j].tolist()):
            col_den[j] = col_den[j] * d // gcd(col_den[j], d)
    col_den = np.array(col_den, dtype=object)
    K = np.zeros((n, len(free)), dtype=object)
    K[pivots, :] = num * (col_den[None, :] // den)
    K[free, np.arange(len(free))] = col_den
    kmax = max(abs(int(x)) for x in K.flat)
    amax = int(np.abs(A).max())
    if kmax * amax * n < 2**52:
        # Every partial sum is an integer below 2^53, so float64 BLAS is exact.
        prod = A.astype(np.float64) @ K.astype(np.float64)
    else:
        prod = A.astype(object) @ K
    return not np.any(prod != 0)


def modular_rank(M: IntMatrix, max_primes: int = 4) -> int | None:
    """Certified rank over Q from modular elimination, or None if no certificate.

    The rank mod p never exceeds the rank over Q. An explicit integer kernel of
    dimension ``ncols - rank_p``, lifted by rational reconstruction and verified
    exactly, bounds the rank from above, so the two agree.
    """
    if M.nrows == 0 or M.ncols == 0:
        return 0
    A = M.to_array()
    if A.dtype == object:
        return None
    best = -1
    crt_mod = 1
    crt_res = None
    best_pivots = None
    for p in _PRIMES[:max_primes]:
        R, pivots = _rref_mod(A.copy(), p)
        rank = len(pivots)
        if rank > best:
            best, best_pivots, crt_mod, crt_res = rank, pivots, 1, None
        if rank < best or pivots != best_pivots:
            continue
        pivot_set = set(pivots)
        free = [c for c in range(M.ncols) if c not in pivot_set]
        block = R[:, free].astype(object)
        if crt_res is None:
            crt_res, crt_mod = block, p
        else:
            inv = pow(crt_mod, -1, p)
            crt_res = crt_res + crt_mod * (((block - crt_res) * inv) % p)
            crt_mod *= p
        if _kernel_certificate(A, crt_res, pivots, crt_mod):
            return best
    return None


def rank_exact(M: IntMatrix, bareiss_limit: int = 160) -> int:
    """Exact rank over the rationals.

    Small matrices go through Bareiss elimination; larger ones use the
    certified modular route, falling back to Bareiss if it cannot certify.
    """
    if min(M.shape) <= bareiss_limit:
        return bareiss_rank(M)
    r = modular_rank(M)
    return bareiss_rank(M) if r is None else r


# ---------------------------------------------------------------------------
# Walsh character sums
# ---------------------------------------------------------------------------


def walsh_transform(n: int, S) -> np.ndarray:
    """``out[v] = sum_{u in S} (-1)^{u.v}`` for every v in F_2^n (fast butterfly)."""
    N = 1 << n
    f = np.zeros(N, dtype=np.int64)
    for u in S:
        u = int(u)
        if u == 0:
            raise ValueError("connection set contains the zero vector")
        if not 0 < u < N:
            raise ValueError(f"vector {u} is not in F_2^{n}")
        f[u] += 1
    h = 1
    while h < N:
        f = f.reshape(-1, 2, h)
        f = np.stack((f[:, 0] + f[:, 1], f[:, 0] - f[:, 1]), axis=1).reshape(N)
        h *= 2
    return f


def walsh_spectrum(n: int, S) -> Counter:
    """Eigenvalue multiset of Cay(F_2^n, S) as ``{eigenvalue: multiplicity}``."""
    vals, counts = np.unique(walsh_transform(n, S), return_counts=True)
    return Counter({int(v): int(c) for v, c in zip(vals, counts)})
