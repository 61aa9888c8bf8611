"""Projective caps over GF(2), polar space parameters, and symplectic spaces.

Binary vectors are ints with bit i holding coordinate i.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from math import isqrt, prod

import numpy as np

from .fields import FieldSpec, galois_field, prime_power
from .graphs import Graph

__all__ = [
    "build_cap",
    "verify_cap",
    "hyperplane_profile",
    "PolarSpaceParams",
    "FAMILIES",
    "polar_params",
    "SymplecticSpace",
    "symplectic_points",
    "collinear",
    "enumerate_generators",
    "generator_point_array",
    "EvenWeightModel",
    "even_weight_model",
    "read_points",
    "write_points",
]


# ---------------------------------------------------------------------------
# The cap  S = (Z ∪ ℓ) \ {P}
# ---------------------------------------------------------------------------


def build_cap(n: int) -> list[int]:
    """Cap of size 2^(n-2) + 1 in PG(n-1, 2).

    Coordinates: M = {x0 = 0}, W = {x0 = x1 = 0}, Z = M minus W, P = e1 and
    ℓ = <e1, all-ones>.
    """
    if n < 3:
        raise ValueError("the cap needs n >= 3")
    P = 0b10
    ones = (1 << n) - 1
    Z = [x for x in range(1 << n) if not x & 1 and x & 0b10]
    line = [P, ones, ones ^ P]
    return sorted((set(Z) | set(line)) - {P})


def verify_cap(S) -> bool:
    """True iff no three distinct vectors of S sum to zero."""
    pts = set(int(s) for s in S)
    if 0 in pts:
        raise ValueError("a cap consists of nonzero vectors")
    ordered = sorted(pts)
    for i, u in enumerate(ordered):
        for v in ordered[i + 1:]:
            w = u ^ v
            if w > v and w in pts:
                return False
    return True


def hyperplane_profile(S, n: int) -> Counter:
    """Tally ``{|H ∩ S|: number of hyperplanes H}`` over all 2^n - 1 hyperplanes.

    Counted directly (v·s parity for every v != 0), independent of the Walsh
    transform; checks the double-counting identity on the way out.
    """
    pts = np.array(sorted(set(int(s) for s in S)), dtype=np.int64)
    vs = np.arange(1, 1 << n, dtype=np.int64)
    tally: Counter = Counter()
    if pts.size == 0:
        tally[0] = len(vs)
        return tally
    chunk = max(1, (1 << 22) // pts.size)
    for start in range(0, len(vs), chunk):
        block = vs[start:start + chunk]
        anded = block[:, None] & pts[None, :]
        par = np.zeros(anded.shape, dtype=np.int64)
        while anded.any():
            par ^= anded & 1
            anded = anded >> 1
        sizes = (par == 0).sum(axis=1)
        for k, c in zip(*np.unique(sizes, return_counts=True)):
            tally[int(k)] += int(c)
    total = sum(k * c for k, c in tally.items())
    if total != pts.size * ((1 << (n - 1)) - 1):
        raise AssertionError("double-counting checksum failed")
    return tally


# ---------------------------------------------------------------------------
# Polar space parameters
# ---------------------------------------------------------------------------

# family -> (type e, vector dimension as a function of rank)
FAMILIES = {
    "symplectic": (Fraction(1), lambda r: 2 * r),
    "hermitian-odd": (Fraction(3, 2), lambda r: 2 * r + 1),
    "hermitian-even": (Fraction(1, 2), lambda r: 2 * r),
    "elliptic": (Fraction(2), lambda r: 2 * r + 2),
    "parabolic": (Fraction(1), lambda r: 2 * r + 1),
    "hyperbolic": (Fraction(0), lambda r: 2 * r),
}

_ALIASES = {
    "W": "symplectic",
    "Sp": "symplectic",
    "H-odd": "hermitian-odd",
    "H-even": "hermitian-even",
    "Q-": "elliptic",
    "Q": "parabolic",
    "Q+": "hyperbolic",
}


def _canonical_family(family: str) -> str:
    fam = _ALIASES.get(family, family)
    if fam not in FAMILIES:
        raise ValueError(f"unknown polar space family {family!r}")
    return fam


@dataclass(frozen=True)
class PolarSpaceParams:
    """A finite classical polar space of given family and rank over GF(q)."""

    family: str
    rank: int
    q: int

    def __post_init__(self):
        object.__setattr__(self, "family", _canonical_family(self.family))
        if self.rank < 1:
            raise ValueError("rank must be positive")
        p, k = prime_power(self.q)
        if self.hermitian and k % 2:
            raise ValueError(f"Hermitian spaces need a square field order, got {self.q}")

    @property
    def hermitian(self) -> bool:
        return self.family.startswith("hermitian")

    @property
    def e(self) -> Fraction:
        return FAMILIES[self.family][0]

    @property
    def n(self) -> int:
        """Dimension of the underlying vector space."""
        return FAMILIES[self.family][1](self.rank)

    @property
    def p(self) -> int:
        return prime_power(self.q)[0]

    @property
    def h(self) -> int:
        """Exponent with q = p^h (for Hermitian spaces, q = p^(2h))."""
        k = prime_power(self.q)[1]
        return k // 2 if self.hermitian else k

    def qpow(self, exponent) -> int:
        """q ** exponent for integral or half-integral exponents, exactly."""
        exponent = Fraction(exponent)
        if exponent.denominator == 1:
            return self.q ** int(exponent)
        if exponent.denominator != 2:
            raise ValueError(f"exponent {exponent} is not half-integral")
        root = isqrt(self.q)
        if root * root != self.q:
            raise ValueError(f"q = {self.q} is not a square")
        return root ** int(2 * exponent)

    def theta(self, i: int) -> int:
        return (self.q**i - 1) // (self.q - 1)

    def sigma(self, i: int) -> int:
        """Ovoid number of the rank-i space of the same type."""
        return self.qpow(i + self.e - 1) + 1

    @property
    def ovoid_number(self) -> int:
        return self.sigma(self.rank)

    @property
    def points(self) -> int:
        return self.theta(self.rank) * self.ovoid_number

    @property
    def generators(self) -> int:
        return prod(self.sigma(i) for i in range(1, self.rank + 1))

    def label(self) -> str:
        n, q = self.n, self.q
        name = {
            "symplectic": f"W({n - 1},{q})",
            "hermitian-odd": f"H({n - 1},{q})",
            "hermitian-even": f"H({n - 1},{q})",
            "elliptic": f"Q-({n - 1},{q})",
            "parabolic": f"Q({n - 1},{q})",
            "hyperbolic": f"Q+({n - 1},{q})",
        }[self.family]
        return name

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "rank": self.rank,
            "q": self.q,
            "e": str(self.e),
            "n": self.n,
            "points": self.points,
            "generators": self.generators,
            "ovoid_number": self.ovoid_number,
        }


def polar_params(family: str, r: int, q: int) -> PolarSpaceParams:
    return PolarSpaceParams(family, r, q)


# ---------------------------------------------------------------------------
# Symplectic spaces W(2r-1, q)
# ---------------------------------------------------------------------------


def _swap_pairs(y: int, r: int) -> int:
    even = int("01" * r, 2) if r else 0
    return ((y & even) << 1) | ((y >> 1) & even)


class SymplecticSpace:
    """W(2r-1, q) with B(x, y) = sum_i (x_{2i} y_{2i+1} - x_{2i+1} y_{2i}).

    Over GF(2) points are bitmask ints; over larger fields they are coordinate
    tuples normalised so that the first nonzero coordinate is 1.
    """

    def __init__(self, r: int, q: int = 2):
        if r < 1:
            raise ValueError("rank must be positive")
        self.r = r
        self.q = q
        self.field: FieldSpec = galois_field(q)
        self.params = PolarSpaceParams("symplectic", r, q)

    def __repr__(self):
        return f"SymplecticSpace(r={self.r}, q={self.q})"

    def __eq__(self, other):
        return isinstance(other, SymplecticSpace) and (self.r, self.q) == (other.r, other.q)

    def __hash__(self):
        return hash((self.r, self.q))

    @property
    def dim(self) -> int:
        return 2 * self.r

    def form(self, x, y) -> int:
        if self.q == 2:
            return (int(x) & _swap_pairs(int(y), self.r)).bit_count() & 1
        F = self.field
        acc = 0
        for i in range(self.r):
            a = F.mul(x[2 * i], y[2 * i + 1])
            b = F.mul(x[2 * i + 1], y[2 * i])
            acc = F.add(acc, F.add(a, F.neg(b)))
        return acc

    def collinear(self, x, y) -> bool:
        return self.form(x, y) == 0

    def normalize(self, x):
        """Canonical representative of the projective point spanned by x."""
        if self.q == 2:
            x = int(x)
            if not 0 < x < (1 << self.dim):
                raise ValueError(f"{x} is not a point of {self.params.label()}")
            return x
        x = tuple(int(c) for c in x)
        if len(x) != self.dim or any(not 0 <= c < self.q for c in x):
            raise ValueError(f"{x} is not a vector of GF({self.q})^{self.dim}")
        lead = next((c for c in x if c), None)
        if lead is None:
            raise ValueError("the zero vector is not a point")
        inv = self.field.inv(lead)
        return tuple(self.field.mul(inv, c) for c in x)

    @cached_property
    def points(self) -> list:
        if self.q not in (2, 3, 4) or self.r > 6:
            raise ValueError("point enumeration supports q in {2, 3, 4} and r <= 6")
        if self.q == 2:
            return list(range(1, 1 << self.dim))
        pts = []
        for v in itertools.product(range(self.q), repeat=self.dim):
            lead = next((c for c in v if c), None)
            if lead == 1:
                pts.append(v)
        return pts

    def collinearity_graph(self, points=None) -> Graph:
        """Points adjacent when distinct and orthogonal."""
        pts = self.points if points is None else [self.normalize(x) for x in points]
        n = len(pts)
        adj = [0] * n
        if self.q == 2:
            swapped = [_swap_pairs(x, self.r) for x in pts]
            for i in range(n):
                for j in range(i + 1, n):
                    if not (pts[i] & swapped[j]).bit_count() & 1:
                        adj[i] |= 1 << j
                        adj[j] |= 1 << i
        else:
            for i in range(n):
                for j in range(i + 1, n):
                    if self.form(pts[i], pts[j]) == 0:
                        adj[i] |= 1 << j
                        adj[j] |= 1 << i
        return Graph(adj, labels=pts, check=False)


def symplectic_points(space: SymplecticSpace) -> list:
    return space.points


def collinear(space: SymplecticSpace, x, y) -> bool:
    return space.collinear(x, y)


def _span(basis) -> list[int]:
    out = [0]
    for b in basis:
        out += [b ^ x for x in out]
    return out[1:]


@lru_cache(maxsize=8)
def _generator_bases(r: int) -> tuple[tuple[int, ...], ...]:
    """Reduced echelon bases of all maximal totally isotropic subspaces of W(2r-1, 2).

    For each choice of pivot (leading-bit) positions, basis vectors are filled
    in from the lowest pivot up; every subspace has exactly one reduced basis,
    so nothing is produced twice.
    """
    dim = 2 * r
    out = []
    for pivots in itertools.combinations(range(dim), r):
        pivot_mask = sum(1 << p for p in pivots)
        choices = []
        for p in pivots:
            free = [b for b in range(p) if not (pivot_mask >> b) & 1]
            vecs = []
            for bits in range(1 << len(free)):
                v = 1 << p
                for k, b in enumerate(free):
                    if (bits >> k) & 1:
                        v |= 1 << b
                vecs.append(v)
            choices.append(vecs)
        swapped_cache = {}

        def extend(k: int, chosen: list[int]):
            if k == r:
                out.append(tuple(chosen))
                return
            for v in choices[k]:
                sv = swapped_cache.get(v)
                if sv is None:
                    sv = swapped_cache[v] = _swap_pairs(v, r)
                if all(not (c & sv).bit_count() & 1 for c in chosen):
                    chosen.append(v)
                    extend(k + 1, chosen)
                    chosen.pop()

        extend(0, [])
    return tuple(out)


def enumerate_generators(space: SymplecticSpace) -> list[tuple[int, ...]]:
    """All generators of W(2r-1, 2), r <= 5, each as the sorted tuple of its points."""
    if space.q != 2 or space.r > 5:
        raise ValueError("generator enumeration supports q = 2 and r <= 5")
    return [tuple(sorted(_span(b))) for b in _generator_bases(space.r)]


@lru_cache(maxsize=8)
def generator_point_array(r: int) -> np.ndarray:
    """Points of every generator of W(2r-1, 2) as rows of an int array.

    Row g lists the 2^r - 1 nonzero combinations of the g-th reduced basis,
    ordered by coefficient vector (not sorted).
    """
    if r > 5:
        raise ValueError("generator enumeration supports r <= 5")
    bases = np.array(_generator_bases(r), dtype=np.int64).reshape(-1, r)
    pts = np.zeros((len(bases), 1 << r), dtype=np.int64)
    for c in range(1, 1 << r):
        low = (c & -c).bit_length() - 1
        pts[:, c] = pts[:, c & (c - 1)] ^ bases[:, low]
    pts = pts[:, 1:]
    pts.setflags(write=False)
    return pts


# ---------------------------------------------------------------------------
# Even-weight model of W(2r-1, 2) inside F_2^(2r+1)
# ---------------------------------------------------------------------------


class EvenWeightModel:
    """Isometry between even-weight vectors of F_2^(2r+1) with the dot product
    and W(2r-1, 2) with its standard form.

    Odd subsets of {1..2r+1} correspond to points through complementation;
    the full set is the only odd subset whose complement is zero.
    """

    def __init__(self, r: int):
        if r < 1:
            raise ValueError("rank must be positive")
        self.r = r
        self.t = 2 * r + 1
        last = 1 << (2 * r)
        pool = [(1 << k) | last for k in range(2 * r)]
        pairs = []
        while pool:
            a = pool.pop(0)
            j = next(i for i, v in enumerate(pool) if (a & v).bit_count() & 1)
            b = pool.pop(j)
            pool = [
                v ^ (a if (v & b).bit_count() & 1 else 0) ^ (b if (v & a).bit_count() & 1 else 0)
                for v in pool
            ]
            pairs.append((a, b))
        self.pairs = tuple(pairs)
        self.space = SymplecticSpace(r, 2)

    def to_point(self, v: int) -> int:
        """Even-weight vector -> point of W(2r-1, 2)."""
        if v.bit_count() & 1 or v >> self.t:
            raise ValueError(f"{v} is not an even-weight vector of F_2^{self.t}")
        x = 0
        for i, (a, b) in enumerate(self.pairs):
            x |= ((v & b).bit_count() & 1) << (2 * i)
            x |= ((a & v).bit_count() & 1) << (2 * i + 1)
        return x

    def from_point(self, x: int) -> int:
        v = 0
        for i, (a, b) in enumerate(self.pairs):
            if (x >> (2 * i)) & 1:
                v ^= a
            if (x >> (2 * i + 1)) & 1:
                v ^= b
        return v

    def odd_set_to_point(self, subset) -> int:
        """Odd proper subset of {1..2r+1} -> point (via its complement)."""
        mask = sum(1 << (i - 1) for i in subset)
        full = (1 << self.t) - 1
        if not mask.bit_count() & 1 or mask >> self.t:
            raise ValueError(f"{sorted(subset)} is not an odd subset of 1..{self.t}")
        if mask == full:
            raise ValueError("the full set has empty complement and is not a point")
        return self.to_point(full ^ mask)

    def point_to_odd_set(self, x: int) -> frozenset[int]:
        full = (1 << self.t) - 1
        mask = full ^ self.from_point(x)
        return frozenset(i + 1 for i in range(self.t) if (mask >> i) & 1)

    def bijection(self) -> dict[frozenset[int], int]:
        return {self.point_to_odd_set(x): x for x in self.space.points}


def even_weight_model(r: int) -> EvenWeightModel:
    return EvenWeightModel(r)


# ---------------------------------------------------------------------------
# Point-set files: one vector per line, "0101..." over GF(2) or "0,2,1,..." otherwise.
# ---------------------------------------------------------------------------


def write_points(points, q: int = 2, dim: int | None = None) -> str:
    lines = []
    for x in points:
        if q == 2:
            if dim is None:
                raise ValueError("dimension required for binary point files")
            lines.append("".join(str((int(x) >> i) & 1) for i in range(dim)))
        else:
            lines.append(",".join(str(c) for c in x))
    return "\n".join(lines) + ("\n" if lines else "")


def read_points(text: str, q: int = 2) -> tuple[list, int]:
    """Parse a point-set file; returns (points, dimension)."""
    pts, dim = [], None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if q == 2:
            if set(line) - {"0", "1"}:
                raise ValueError(f"line {lineno}: expected a 0/1 string")
            vec = sum(1 << i for i, ch in enumerate(line) if ch == "1")
            length = len(line)
        else:
            try:
                vec = tuple(int(tok) for tok in line.split(","))
            except ValueError:
                raise ValueError(f"line {lineno}: expected comma-separated digits") from None
            if any(not 0 <= c < q for c in vec):
                raise ValueError(f"line {lineno}: coordinate outside GF({q})")
            length = len(vec)
        if dim is None:
            dim = length
        elif length != dim:
            raise ValueError(f"line {lineno}: length {length} differs from {dim}")
        pts.append(vec)
    return pts, dim or 0
