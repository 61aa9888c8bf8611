"""Graphs on bitset adjacency: Cayley graphs over F_2^n, graph products,
clique search and clique counting, complementary ranks.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .fields import gf2h_make
from .gf2linalg import BitMatrix, IntMatrix, rank_exact, rank_f2

__all__ = [
    "Graph",
    "CliqueCensus",
    "cayley_f2n",
    "bch_connection_set",
    "bch_cayley",
    "strong_product",
    "strong_power",
    "tensor_product",
    "complete_graph",
    "empty_graph",
    "clique_number",
    "find_clique",
    "iter_cliques",
    "clique_census",
    "is_triangle_free",
    "complementary_rank_f2",
    "complementary_rank_real",
    "oddtown_graph",
    "read_graph",
    "write_graph",
]

MAX_VERTICES = 1 << 17


def _bits(x: int):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


class Graph:
    """Simple undirected graph; ``adj[v]`` is the neighbour bitset of v."""

    __slots__ = ("adj", "labels")

    def __init__(self, adj, labels=None, check=True):
        self.adj = tuple(int(a) for a in adj)
        self.labels = None if labels is None else tuple(labels)
        if self.labels is not None and len(self.labels) != len(self.adj):
            raise ValueError("one label per vertex required")
        if check:
            for v, a in enumerate(self.adj):
                if (a >> v) & 1:
                    raise ValueError(f"loop at vertex {v}")
                if a >> len(self.adj):
                    raise ValueError(f"vertex {v} has a neighbour out of range")
                for u in _bits(a):
                    if not (self.adj[u] >> v) & 1:
                        raise ValueError(f"edge {v}-{u} is not symmetric")

    @classmethod
    def from_edges(cls, n: int, edges, labels=None) -> Graph:
        adj = [0] * n
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(adj, labels, check=False)

    @property
    def n(self) -> int:
        return len(self.adj)

    def __len__(self):
        return len(self.adj)

    def __eq__(self, other):
        return isinstance(other, Graph) and self.adj == other.adj

    def __hash__(self):
        return hash(self.adj)

    def __repr__(self):
        return f"Graph(n={self.n}, edges={self.num_edges})"

    @property
    def num_edges(self) -> int:
        return sum(a.bit_count() for a in self.adj) // 2

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def degrees(self) -> list[int]:
        return [a.bit_count() for a in self.adj]

    def is_regular(self) -> bool:
        return len(set(self.degrees())) <= 1

    def neighbors(self, v: int) -> list[int]:
        return list(_bits(self.adj[v]))

    def has_edge(self, u: int, v: int) -> bool:
        return bool((self.adj[u] >> v) & 1)

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in _bits(self.adj[u] >> (u + 1) << (u + 1))]

    def adjacency_matrix(self) -> np.ndarray:
        A = np.zeros((self.n, self.n), dtype=np.int64)
        for u, v in self.edges():
            A[u, v] = A[v, u] = 1
        return A

    def closed_bitmatrix(self) -> BitMatrix:
        """A + I as a binary matrix."""
        return BitMatrix(tuple(a | (1 << v) for v, a in enumerate(self.adj)), self.n)

    def induced(self, vertices) -> Graph:
        """Induced subgraph; vertices are renumbered in the given order."""
        vs = list(vertices)
        index = {v: i for i, v in enumerate(vs)}
        adj = []
        for v in vs:
            adj.append(sum(1 << index[u] for u in _bits(self.adj[v]) if u in index))
        labels = None if self.labels is None else [self.labels[v] for v in vs]
        return Graph(adj, labels, check=False)

    def delete(self, vertices) -> Graph:
        drop = set(vertices)
        return self.induced(v for v in range(self.n) if v not in drop)


@dataclass
class CliqueCensus:
    """``counts[i]`` is the number of cliques with i vertices, for 1 <= i <= max_size."""

    counts: dict[int, int] = field(default_factory=dict)
    max_size: int = 0

    def __getitem__(self, i: int) -> int:
        return self.counts.get(i, 0)

    def as_tuple(self) -> tuple[int, ...]:
        top = max((i for i, c in self.counts.items() if c), default=0)
        return tuple(self.counts.get(i, 0) for i in range(1, top + 1))


# ---------------------------------------------------------------------------
# Constructions
# ---------------------------------------------------------------------------


def cayley_f2n(n: int, S) -> Graph:
    """Cay(F_2^n, S); vertex x is the integer whose bit i is coordinate i."""
    S = sorted(set(int(s) for s in S))
    N = 1 << n
    if N > MAX_VERTICES:
        raise ValueError(f"2^{n} vertices exceeds the supported size")
    for s in S:
        if s == 0:
            raise ValueError("connection set contains the zero vector")
        if not 0 < s < N:
            raise ValueError(f"{s} is not a vector of F_2^{n}")
    adj = []
    for x in range(N):
        a = 0
        for s in S:
            a |= 1 << (x ^ s)
        adj.append(a)
    return Graph(adj, labels=range(N), check=False)


def bch_connection_set(h: int) -> list[int]:
    """{(a, a^3) : a != 0} in F_{2^h}^2, packed as a | (a^3 << h)."""
    F = gf2h_make(h)
    return [a | (F.pow(a, 3) << h) for a in range(1, 1 << h)]


def bch_cayley(h: int) -> Graph:
    """Cayley graph on F_{2^h}^2 with the cube-curve connection set."""
    if not 1 <= h <= 8:
        raise ValueError("h must be in 1..8")
    return cayley_f2n(2 * h, bch_connection_set(h))


def complete_graph(n: int) -> Graph:
    if n < 1:
        raise ValueError("complete graph needs at least one vertex")
    full = (1 << n) - 1
    return Graph([full ^ (1 << v) for v in range(n)], check=False)


def empty_graph(n: int) -> Graph:
    return Graph([0] * n, check=False)


def strong_product(G: Graph, H: Graph) -> Graph:
    """G ⊠ H; vertex (g, h) has index g * |H| + h."""
    nG, nH = G.n, H.n
    if nG * nH > MAX_VERTICES:
        raise ValueError(f"{nG * nH} vertices exceeds the supported size")
    closed_h = [a | (1 << v) for v, a in enumerate(H.adj)]
    adj = []
    for g in range(nG):
        closed_g = list(_bits(G.adj[g] | (1 << g)))
        for h in range(nH):
            a = 0
            for g2 in closed_g:
                a |= closed_h[h] << (g2 * nH)
            adj.append(a & ~(1 << (g * nH + h)))
    labels = None
    if G.labels is not None and H.labels is not None:
        labels = [(x, y) for x in G.labels for y in H.labels]
    return Graph(adj, labels, check=False)


def strong_power(G: Graph, h: int) -> Graph:
    if h < 1:
        raise ValueError("power must be at least 1")
    if G.n**h > MAX_VERTICES:
        raise ValueError(f"{G.n}^{h} vertices exceeds the supported size")
    P = G
    for _ in range(h - 1):
        P = strong_product(P, G)
    return P


def tensor_product(G: Graph, H: Graph) -> Graph:
    """Categorical product G × H: (g,h) ~ (g',h') iff g ~ g' and h ~ h'."""
    nG, nH = G.n, H.n
    if nG * nH > MAX_VERTICES:
        raise ValueError(f"{nG * nH} vertices exceeds the supported size")
    adj = []
    for g in range(nG):
        nbrs = list(_bits(G.adj[g]))
        for h in range(nH):
            a = 0
            for g2 in nbrs:
                a |= H.adj[h] << (g2 * nH)
            adj.append(a)
    return Graph(adj, check=False)


def oddtown_graph(t: int) -> Graph:
    """Odd-size proper subsets of {1..t}, adjacent when the intersection is odd.

    Vertex labels are subset masks (bit i-1 stands for element i), ascending.
    """
    if t < 2:
        raise ValueError("t must be at least 2")
    full = (1 << t) - 1
    verts = [s for s in range(1, full + 1) if s.bit_count() & 1 and s != full]
    adj = []
    for s in verts:
        a = 0
        for j, u in enumerate(verts):
            if u != s and (s & u).bit_count() & 1:
                a |= 1 << j
        adj.append(a)
    return Graph(adj, labels=verts, check=False)


# ---------------------------------------------------------------------------
# Cliques
# ---------------------------------------------------------------------------


def _degree_order(G: Graph) -> tuple[list[int], list[int]]:
    # Vertices sorted by non-increasing degree, ties by index; the new index
    # of each vertex is its position, so bit order encodes search order.
    order = sorted(range(G.n), key=lambda v: (-G.adj[v].bit_count(), v))
    pos = [0] * G.n
    for i, v in enumerate(order):
        pos[v] = i
    adj = [0] * G.n
    for i, v in enumerate(order):
        adj[i] = sum(1 << pos[u] for u in _bits(G.adj[v]))
    return order, adj


def _color_sort(P: int, adj: list[int]) -> tuple[list[int], list[int]]:
    """Greedy colouring of P; returns vertices and colours, colours non-decreasing."""
    verts, cols = [], []
    U = P
    color = 0
    while U:
        color += 1
        Q = U
        while Q:
            v = (Q & -Q).bit_length() - 1
            Q &= ~adj[v]
            Q &= ~(1 << v)
            U &= ~(1 << v)
            verts.append(v)
            cols.append(color)
    return verts, cols


def _max_clique(G: Graph, stop_at: int | None = None) -> list[int]:
    """Maximum clique by colour-bounded branch and bound; stops early at ``stop_at``."""
    if G.n == 0:
        return []
    order, adj = _degree_order(G)
    best: list[int] = []
    target = stop_at if stop_at is not None else G.n + 1

    def expand(R: list[int], P: int) -> bool:
        nonlocal best
        verts, cols = _color_sort(P, adj)
        for idx in range(len(verts) - 1, -1, -1):
            if len(R) + cols[idx] <= len(best):
                return False
            v = verts[idx]
            R.append(v)
            NP = P & adj[v]
            if NP:
                if expand(R, NP):
                    return True
            elif len(R) > len(best):
                best = list(R)
                if len(best) >= target:
                    return True
            R.pop()
            P &= ~(1 << v)
        return False

    expand([], (1 << G.n) - 1)
    return sorted(order[v] for v in best)


def clique_number(G: Graph, cap: int | None = None) -> int:
    """Exact clique number, or min(ω, cap + 1) when ``cap`` is given."""
    if G.n == 0:
        return 0
    if cap is None:
        return len(_max_clique(G, None))
    return min(len(_max_clique(G, cap + 1)), cap + 1)


def find_clique(G: Graph, size: int) -> list[int] | None:
    """First clique of exactly ``size`` vertices in lexicographic order, or None."""
    if size <= 0:
        return []

    def search(R: list[int], P: int):
        if len(R) == size:
            return list(R)
        if P.bit_count() < size - len(R):
            return None
        while P:
            v = (P & -P).bit_length() - 1
            P &= ~(1 << v)
            R.append(v)
            found = search(R, P & G.adj[v])
            if found is not None:
                return found
            R.pop()
        return None

    return search([], (1 << G.n) - 1)


def iter_cliques(G: Graph, size: int):
    """Yield every clique with ``size`` vertices as an increasing tuple."""

    def rec(R: tuple, P: int):
        if len(R) == size:
            yield R
            return
        while P:
            if P.bit_count() < size - len(R):
                return
            v = (P & -P).bit_length() - 1
            P &= ~(1 << v)
            yield from rec(R + (v,), P & G.adj[v])

    if size >= 1:
        yield from rec((), (1 << G.n) - 1)


def clique_census(G: Graph, max_size: int) -> CliqueCensus:
    """Number of cliques of each size up to ``max_size`` (counted, never stored)."""
    counts = {i: 0 for i in range(1, max_size + 1)}
    if max_size < 1:
        return CliqueCensus(counts, max_size)
    counts[1] = G.n
    # Forward neighbourhoods: only higher-indexed neighbours, so each clique is
    # reached once through its lowest vertex.
    fwd = [a >> (v + 1) << (v + 1) for v, a in enumerate(G.adj)]

    def rec(P: int, depth: int):
        # depth = size of the current clique; P = common forward neighbours.
        if depth + 1 == max_size:
            counts[max_size] += P.bit_count()
            return
        while P:
            v = (P & -P).bit_length() - 1
            P ^= 1 << v
            counts[depth + 1] += 1
            nxt = P & fwd[v]
            if nxt:
                rec(nxt, depth + 1)

    if max_size >= 2:
        for v in range(G.n):
            if fwd[v]:
                rec(fwd[v], 1)
    return CliqueCensus(counts, max_size)


def is_triangle_free(G: Graph) -> bool:
    fwd = [a >> (v + 1) << (v + 1) for v, a in enumerate(G.adj)]
    for v in range(G.n):
        P = fwd[v]
        while P:
            u = (P & -P).bit_length() - 1
            P ^= 1 << u
            if P & fwd[u]:
                return False
    return True


def complementary_rank_f2(G: Graph) -> int:
    """Rank of A + I over GF(2)."""
    return rank_f2(G.closed_bitmatrix())


def complementary_rank_real(G: Graph) -> int:
    """Rank of A + I over the rationals."""
    return rank_exact(IntMatrix.from_array(G.adjacency_matrix() + np.eye(G.n, dtype=np.int64)))


# ---------------------------------------------------------------------------
# Exchange format: "N", then one "u v" line per edge, sorted.
# ---------------------------------------------------------------------------


def write_graph(G: Graph) -> str:
    lines = [str(G.n)] + [f"{u} {v}" for u, v in G.edges()]
    return "\n".join(lines) + "\n"


def read_graph(text: str) -> Graph:
    lines = [(i + 1, ln.strip()) for i, ln in enumerate(text.splitlines()) if ln.strip()]
    if not lines or not lines[0][1].isdigit():
        raise ValueError(f"line {lines[0][0] if lines else 1}: expected vertex count")
    n = int(lines[0][1])
    edges = []
    for lineno, ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise ValueError(f"line {lineno}: expected 'u v'")
        u, v = int(parts[0]), int(parts[1])
        if u == v or not (u < n and v < n):
            raise ValueError(f"line {lineno}: invalid edge {u} {v}")
        edges.append((u, v))
    return Graph.from_edges(n, edges)
