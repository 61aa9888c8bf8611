"""Partial m-ovoids, nearly orthogonal sets and generalized Oddtown families.

Over GF(2) the three notions are the same object seen through the even-weight
model of W(2r-1, 2); the verifiers here work on each side independently so
that agreement can be checked.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt

import numpy as np

from .geometry import (
    EvenWeightModel,
    PolarSpaceParams,
    SymplecticSpace,
    _swap_pairs,
    generator_point_array,
)
from .gf2linalg import lempel_factor, rank_f2
from .graphs import (
    Graph,
    bch_cayley,
    clique_census,
    clique_number,
    find_clique,
    iter_cliques,
    strong_power,
)

__all__ = [
    "VectorFamily",
    "OvoidCertificate",
    "verify_partial_m_ovoid",
    "nearly_orthogonal_verify",
    "non_orthogonality_graph",
    "oddtown_verify",
    "family_to_sets",
    "complement_translate",
    "construct_2ovoid_bch",
    "bch_rank_bound",
    "graph_to_vectors",
    "AmplificationResult",
    "amplification_base",
    "amplification_target",
    "amplify_strong_power",
    "default_rho",
    "default_rho_exponent",
    "SampleTrial",
    "sample_trial",
    "random_partial_m_ovoid",
    "embed_to_symplectic",
]

METHODS = ("clique-bound", "generator-exhaustive")


@dataclass(frozen=True)
class VectorFamily:
    """Nonzero binary vectors of length t, stored as ints (bit i = coordinate i).

    Repeats are allowed; a repeated vector is never orthogonal to its copy
    when it has odd weight, so repeats only matter through that pair.
    """

    t: int
    vectors: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "vectors", tuple(int(v) for v in self.vectors))
        for i, v in enumerate(self.vectors):
            if v == 0:
                raise ValueError(f"vector {i} is zero")
            if v >> self.t:
                raise ValueError(f"vector {i} does not fit in dimension {self.t}")

    def __len__(self):
        return len(self.vectors)

    def __iter__(self):
        return iter(self.vectors)

    @property
    def distinct(self) -> bool:
        return len(set(self.vectors)) == len(self.vectors)

    def to_text(self) -> str:
        return "".join(
            "".join(str((v >> i) & 1) for i in range(self.t)) + "\n" for v in self.vectors
        )

    @classmethod
    def from_text(cls, text: str) -> VectorFamily:
        from .geometry import read_points

        pts, dim = read_points(text, q=2)
        for k, v in enumerate(pts):
            if v == 0:
                raise ValueError(f"vector {k + 1}: the zero vector is not allowed")
        return cls(dim, tuple(pts))


# ---------------------------------------------------------------------------
# Certificates
# ---------------------------------------------------------------------------


@dataclass
class OvoidCertificate:
    """Outcome of checking that ``points`` form a partial m-ovoid of ``space``."""

    space: PolarSpaceParams
    m: int
    points: list
    method: str
    verified: bool
    seed: int | list | None = None
    wall_time: float = 0.0
    counters: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.points)

    def _encode_point(self, x):
        if self.space.q == 2:
            return "".join(str((int(x) >> i) & 1) for i in range(self.space.n))
        return [int(c) for c in x]

    def to_dict(self, include_timing: bool = False) -> dict:
        d = {
            "space": self.space.to_dict(),
            "label": self.space.label(),
            "m": self.m,
            "method": self.method,
            "verified": self.verified,
            "size": self.size,
            "seed": self.seed,
            "counters": self.counters,
            "points": [self._encode_point(x) for x in self.points],
        }
        if include_timing:
            d["wall_time"] = self.wall_time
        return d

    def to_json(self, include_timing: bool = False) -> str:
        """Deterministic JSON; wall time is left out unless asked for."""
        return json.dumps(self.to_dict(include_timing), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> OvoidCertificate:
        sp = d["space"]
        space = PolarSpaceParams(sp["family"], int(sp["rank"]), int(sp["q"]))
        if space.q == 2:
            points = [sum(1 << i for i, ch in enumerate(s) if ch == "1") for s in d["points"]]
        else:
            points = [tuple(int(c) for c in x) for x in d["points"]]
        return cls(
            space=space,
            m=int(d["m"]),
            points=points,
            method=d["method"],
            verified=bool(d["verified"]),
            seed=d.get("seed"),
            wall_time=float(d.get("wall_time", 0.0)),
            counters=dict(d.get("counters", {})),
        )

    @classmethod
    def from_json(cls, text: str) -> OvoidCertificate:
        return cls.from_dict(json.loads(text))

    def recheck(self, method: str | None = None) -> bool:
        """Re-run verification from scratch on the stored points."""
        if self.space.family != "symplectic":
            raise ValueError("only symplectic certificates can be rechecked")
        space = SymplecticSpace(self.space.rank, self.space.q)
        return verify_partial_m_ovoid(space, self.points, self.m, method or self.method).verified


# ---------------------------------------------------------------------------
# Verifiers
# ---------------------------------------------------------------------------


def _collinearity_on(space: SymplecticSpace, X: list) -> Graph:
    """Graph on the positions of X; positions adjacent iff the points are
    orthogonal (identical points count as orthogonal)."""
    n = len(X)
    adj = [0] * n
    if space.q == 2:
        sw = [_swap_pairs(x, space.r) for x in X]
        for i in range(n):
            xi = X[i]
            for j in range(i + 1, n):
                if not (xi & sw[j]).bit_count() & 1:
                    adj[i] |= 1 << j
                    adj[j] |= 1 << i
    else:
        for i in range(n):
            for j in range(i + 1, n):
                if space.form(X[i], X[j]) == 0:
                    adj[i] |= 1 << j
                    adj[j] |= 1 << i
    return Graph(adj, check=False)


def _default_method(space: SymplecticSpace) -> str:
    return "clique-bound"


def verify_partial_m_ovoid(space: SymplecticSpace, X, m: int, method: str | None = None) -> OvoidCertificate:
    """Check that X meets every generator of ``space`` in at most m points.

    X is read as a multiset: a repeated point is counted once per copy.
    "clique-bound" bounds the clique number of the collinearity graph on X
    (pairwise orthogonal points span a totally isotropic subspace, which lies
    in a generator); "generator-exhaustive" counts X inside every generator.
    """
    method = method or _default_method(space)
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; choose from {METHODS}")
    if m < 0:
        raise ValueError("m must be non-negative")
    start = time.perf_counter()
    pts = [space.normalize(x) for x in X]
    counters: dict = {"points": len(pts)}
    if method == "clique-bound":
        G = _collinearity_on(space, pts)
        omega = clique_number(G, cap=m)
        verified = omega <= m
        counters["clique_number_capped"] = omega
    else:
        if space.q != 2 or space.r > 5:
            raise ValueError("generator-exhaustive verification needs q = 2 and r <= 5")
        gens = generator_point_array(space.r)
        mult = np.zeros(1 << space.dim, dtype=np.int64)
        np.add.at(mult, np.asarray(pts, dtype=np.int64), 1)
        hits = mult[gens].sum(axis=1) if pts else np.zeros(len(gens), dtype=np.int64)
        worst = int(hits.max()) if len(hits) else 0
        verified = worst <= m
        counters["generators"] = int(len(gens))
        counters["max_meet"] = worst
        counters["violating_generators"] = int((hits > m).sum())
    return OvoidCertificate(
        space=space.params,
        m=m,
        points=pts,
        method=method,
        verified=bool(verified),
        wall_time=time.perf_counter() - start,
        counters=counters,
    )


def non_orthogonality_graph(F: VectorFamily) -> Graph:
    """Positions i != j adjacent iff u_i . u_j = 1."""
    vs = F.vectors
    n = len(vs)
    adj = [0] * n
    for i in range(n):
        vi = vs[i]
        for j in range(i + 1, n):
            if (vi & vs[j]).bit_count() & 1:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    return Graph(adj, check=False)


def nearly_orthogonal_verify(F: VectorFamily, m: int) -> bool:
    """No vector self-orthogonal, and any m+1 of them contain an orthogonal pair."""
    if any(not v.bit_count() & 1 for v in F.vectors):
        return False
    return clique_number(non_orthogonality_graph(F), cap=m) <= m


def family_to_sets(F: VectorFamily) -> list[frozenset[int]]:
    """Supports of the vectors as subsets of {1..t}."""
    return [frozenset(i + 1 for i in range(F.t) if (v >> i) & 1) for v in F.vectors]


def oddtown_verify(sets, m: int) -> bool:
    """All sets odd, and any m+1 of them contain a pair with even intersection."""
    masks = []
    for S in sets:
        S = set(S)
        if any(not isinstance(i, (int, np.integer)) or i < 1 for i in S):
            raise ValueError(f"set {sorted(S)} has elements outside the positive integers")
        mask = sum(1 << (int(i) - 1) for i in S)
        if not mask.bit_count() & 1:
            return False
        masks.append(mask)
    n = len(masks)
    adj = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            if (masks[i] & masks[j]).bit_count() & 1:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    return clique_number(Graph(adj, check=False), cap=m) <= m


def _embedding_rank(t: int) -> int:
    return (t + 1) // 2


def complement_translate(F: VectorFamily) -> list[frozenset[int]]:
    """Route F through the symplectic side and back to a set family.

    Each vector is padded to length 2r+1 and complemented (an even-weight
    vector), sent to its point of W(2r-1, 2), and the point is read back as
    the complement of its even-weight representative. Even-weight vectors
    have no point and come back as their own (even) support.
    """
    r = _embedding_rank(F.t)
    model = EvenWeightModel(r)
    full = (1 << model.t) - 1
    out = []
    for v in F.vectors:
        if v.bit_count() & 1:
            out.append(model.point_to_odd_set(model.to_point(full ^ v)))
        else:
            out.append(frozenset(i + 1 for i in range(F.t) if (v >> i) & 1))
    return out


def embed_to_symplectic(F: VectorFamily, m: int, method: str | None = None) -> OvoidCertificate:
    """Map F into W(2r-1, 2), r = ceil(t/2), and verify there.

    Vectors must have odd weight to correspond to points; even-weight vectors
    are self-orthogonal, so the family is rejected on both sides and the
    certificate is returned unverified without points.
    """
    r = _embedding_rank(F.t)
    model = EvenWeightModel(r)
    space = model.space
    if method is None:
        method = "generator-exhaustive" if r <= 5 else "clique-bound"
    no = nearly_orthogonal_verify(F, m)
    full = (1 << model.t) - 1
    if any(not v.bit_count() & 1 for v in F.vectors):
        cert = OvoidCertificate(space.params, m, [], method, False,
                                counters={"self_orthogonal_vectors": True})
    else:
        pts = [model.to_point(full ^ v) for v in F.vectors]
        cert = verify_partial_m_ovoid(space, pts, m, method)
    cert.counters["embedding_rank"] = r
    cert.counters["nearly_orthogonal"] = no
    cert.counters["agree"] = no == cert.verified
    return cert


# ---------------------------------------------------------------------------
# Lempel embeddings and the BCH family
# ---------------------------------------------------------------------------


def graph_to_vectors(G: Graph) -> VectorFamily:
    """Rows of B with B B^T = A_G + I: unit self-products, orthogonal iff non-adjacent."""
    B = lempel_factor(G.closed_bitmatrix())
    return VectorFamily(B.ncols, B.rows)


def bch_rank_bound(h: int) -> int:
    """floor((1 + sqrt 2)/2 * (2 + sqrt 2)^h), computed exactly."""
    a, b = 1, 0  # (2 + sqrt2)^h = a + b sqrt2
    for _ in range(h):
        a, b = 2 * a + 2 * b, a + 2 * b
    # (1 + sqrt2)(a + b sqrt2) = (a + 2b) + (a + b) sqrt2; halve and floor
    A, Bc = a + 2 * b, a + b
    return (A + isqrt(2 * Bc * Bc)) // 2


def construct_2ovoid_bch(h: int) -> VectorFamily:
    """2-nearly orthogonal family of 4^h vectors from the triangle-free BCH Cayley graph."""
    if not 1 <= h <= 7:
        raise ValueError("h must be in 1..7")
    return graph_to_vectors(bch_cayley(h))


# ---------------------------------------------------------------------------
# Strong-power amplification
# ---------------------------------------------------------------------------


def amplification_base(n: int, census, m: int) -> float:
    """n / (sum_{t<=m} t^(m+1) a_t)^(1/(m+1))."""
    total = sum(t ** (m + 1) * census[t] for t in range(1, m + 1))
    return math.exp(math.log(n) - math.log(total) / (m + 1))


def amplification_target(n: int, census, m: int, h: int) -> float:
    """(1/m) * base^h - 1, the vertex count promised for large h."""
    return amplification_base(n, census, m) ** h / m - 1


@dataclass
class AmplificationResult:
    graph: Graph
    kept: list[int]
    m: int
    h: int
    seed: int
    power_vertices: int
    cliques_hit: int
    clique_number: int
    rank_f2: int
    rank_bound: int
    base: float
    target: float

    @property
    def vertices(self) -> int:
        return self.graph.n

    def summary(self) -> dict:
        return {
            "m": self.m,
            "h": self.h,
            "seed": self.seed,
            "power_vertices": self.power_vertices,
            "vertices": self.vertices,
            "cliques_hit": self.cliques_hit,
            "clique_number": self.clique_number,
            "rank_f2": self.rank_f2,
            "rank_bound": self.rank_bound,
            "base": round(self.base, 6),
            "target": round(self.target, 6),
        }


def amplify_strong_power(G: Graph, m: int, h: int, seed: int = 0,
                         max_vertices: int = 100_000) -> AmplificationResult:
    """Delete vertices of the h-fold strong power of G until no (m+1)-clique is left.

    Greedy hitting set: repeatedly remove the vertex lying in the most
    surviving (m+1)-cliques, ties broken by the seeded generator.
    """
    if m < 2 or h < 1:
        raise ValueError("need m >= 2 and h >= 1")
    if G.n ** h > max_vertices:
        raise ValueError(f"strong power would have {G.n ** h} vertices (limit {max_vertices})")
    rng = np.random.Generator(np.random.PCG64(seed))
    P = strong_power(G, h)
    cliques = [tuple(c) for c in iter_cliques(P, m + 1)]
    alive = np.ones(len(cliques), dtype=bool)
    members = [[] for _ in range(P.n)]
    for k, c in enumerate(cliques):
        for v in c:
            members[v].append(k)
    load = np.array([len(x) for x in members], dtype=np.int64)
    removed = set()
    while alive.any():
        best = load.max()
        ties = np.flatnonzero(load == best)
        v = int(ties[rng.integers(len(ties))])
        removed.add(v)
        for k in members[v]:
            if alive[k]:
                alive[k] = False
                for u in cliques[k]:
                    load[u] -= 1
        load[v] = -1
    kept = [v for v in range(P.n) if v not in removed]
    D = P.induced(kept)
    omega = clique_number(D, cap=m)
    base_rank = rank_f2(G.closed_bitmatrix())
    n_census = clique_census(G, m)
    base = amplification_base(G.n, n_census, m)
    return AmplificationResult(
        graph=D,
        kept=kept,
        m=m,
        h=h,
        seed=seed,
        power_vertices=P.n,
        cliques_hit=len(cliques),
        clique_number=omega,
        rank_f2=rank_f2(D.closed_bitmatrix()),
        rank_bound=base_rank ** h,
        base=base,
        target=base ** h / m - 1,
    )


# ---------------------------------------------------------------------------
# Random partial m-ovoids
# ---------------------------------------------------------------------------


def default_rho_exponent(params: PolarSpaceParams, m: int) -> Fraction:
    r, e = params.rank, params.e
    return Fraction(-r * (r + 1), 2 * (m + 1)) - r * (e - 1) / (m + 1) - r + 1


def default_rho(params: PolarSpaceParams, m: int) -> float:
    """q^(-r(r+1)/(2(m+1)) - r(e-1)/(m+1) - r + 1)."""
    return float(params.q) ** float(default_rho_exponent(params, m))


def _as_space(space) -> SymplecticSpace:
    if isinstance(space, SymplecticSpace):
        return space
    if isinstance(space, PolarSpaceParams):
        if space.family != "symplectic":
            raise ValueError("sampling needs an enumerable (symplectic) space")
        return SymplecticSpace(space.rank, space.q)
    raise TypeError(f"expected a SymplecticSpace or PolarSpaceParams, got {type(space).__name__}")


@dataclass
class SampleTrial:
    index: int
    sampled: int
    unpruned_verified: bool
    pruned: int
    certificate: OvoidCertificate


def _prune(space: SymplecticSpace, pts: list, m: int) -> tuple[list, int]:
    """Remove points until the collinearity graph on pts has no (m+1)-clique.

    Each round deletes, from the first (m+1)-clique found, the point of
    highest degree in the current graph, lowest position on ties.
    """
    removed = 0
    while True:
        G = _collinearity_on(space, pts)
        clique = find_clique(G, m + 1)
        if clique is None:
            return pts, removed
        victim = max(clique, key=lambda v: (G.degree(v), -v))
        pts = pts[:victim] + pts[victim + 1:]
        removed += 1


def sample_trial(space, m: int, rho: float, seed_seq: np.random.SeedSequence,
                 index: int = 0, method: str = "clique-bound") -> SampleTrial:
    """One Bernoulli(rho) sample of the point set, pruned to a partial m-ovoid."""
    space = _as_space(space)
    rng = np.random.Generator(np.random.PCG64(seed_seq))
    points = space.points
    keep = rng.random(len(points)) < rho
    pts = [points[i] for i in np.flatnonzero(keep)]
    raw = verify_partial_m_ovoid(space, pts, m, method)
    pruned = 0
    if not raw.verified:
        pts, pruned = _prune(space, pts, m)
    cert = verify_partial_m_ovoid(space, pts, m, method)
    if not cert.verified:
        raise AssertionError("pruned sample failed verification")
    cert.counters.update({"sampled": int(keep.sum()), "pruned": pruned,
                          "unpruned_verified": raw.verified, "trial": index})
    return SampleTrial(index, int(keep.sum()), raw.verified, pruned, cert)


def random_partial_m_ovoid(space, m: int, rho: float | None = None, trials: int = 1,
                           seed: int = 0, method: str = "clique-bound") -> OvoidCertificate:
    """Best pruned random partial m-ovoid over ``trials`` seeded samples.

    Trial i draws from ``SeedSequence(seed).spawn(trials)[i]``; the winning
    certificate records the master seed and its trial index.
    """
    space = _as_space(space)
    if rho is None:
        rho = default_rho(space.params, m)
    if not 0.0 <= rho <= 1.0:
        raise ValueError("rho must be a probability")
    if trials < 1:
        raise ValueError("need at least one trial")
    target = math.floor(rho * space.params.points)
    start = time.perf_counter()
    best = None
    hits = unpruned = 0
    for i, ss in enumerate(np.random.SeedSequence(seed).spawn(trials)):
        trial = sample_trial(space, m, rho, ss, i, method)
        unpruned += trial.unpruned_verified
        hits += trial.unpruned_verified and trial.sampled >= target
        if best is None or trial.certificate.size > best.certificate.size:
            best = trial
    cert = best.certificate
    cert.seed = [seed, best.index]
    cert.wall_time = time.perf_counter() - start
    cert.counters.update({
        "trials": trials,
        "rho": rho,
        "target_size": target,
        "unpruned_successes": unpruned,
        "unpruned_successes_at_target": hits,
    })
    return cert
