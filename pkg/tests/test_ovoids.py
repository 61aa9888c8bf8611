import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from movoids.geometry import SymplecticSpace, build_cap, enumerate_generators, polar_params
from movoids.graphs import (
    Graph,
    bch_cayley,
    cayley_f2n,
    clique_number,
    complementary_rank_f2,
    complete_graph,
    empty_graph,
)
from movoids.ovoids import (
    OvoidCertificate,
    VectorFamily,
    amplification_base,
    amplification_target,
    amplify_strong_power,
    bch_rank_bound,
    complement_translate,
    construct_2ovoid_bch,
    default_rho,
    embed_to_symplectic,
    family_to_sets,
    graph_to_vectors,
    nearly_orthogonal_verify,
    oddtown_verify,
    random_partial_m_ovoid,
    verify_partial_m_ovoid,
)
from movoids.graphs import clique_census

from oracles import brute_clique_number


def brute_nearly_orthogonal(vectors, m):
    """Direct definition: no self-orthogonal vector, every (m+1)-subset has an orthogonal pair."""
    dot = lambda a, b: (a & b).bit_count() & 1
    if any(not dot(v, v) for v in vectors):
        return False
    for sub in itertools.combinations(range(len(vectors)), m + 1):
        if all(dot(vectors[i], vectors[j]) for i, j in itertools.combinations(sub, 2)):
            return False
    return True


def brute_generator_meets(space, X):
    return max((sum(x in set(g) for x in X) for g in enumerate_generators(space)), default=0)


# --- VectorFamily -----------------------------------------------------------


def test_vector_family_validation():
    with pytest.raises(ValueError):
        VectorFamily(3, (0b1, 0))
    with pytest.raises(ValueError):
        VectorFamily(3, (0b1000,))
    F = VectorFamily(3, (0b1, 0b110))
    assert VectorFamily.from_text(F.to_text()) == F
    assert F.distinct and not VectorFamily(2, (1, 1)).distinct
    with pytest.raises(ValueError, match="vector 2"):
        VectorFamily.from_text("10\n00\n")


# --- verify_partial_m_ovoid -------------------------------------------------


@pytest.mark.parametrize("method", ["clique-bound", "generator-exhaustive"])
def test_verify_examples(method):
    W = SymplecticSpace(2)
    assert verify_partial_m_ovoid(W, [W.points[3]], 1, method).verified
    g = list(enumerate_generators(W)[0])
    assert not verify_partial_m_ovoid(W, g, 2, method).verified
    assert verify_partial_m_ovoid(W, g, 3, method).verified
    assert verify_partial_m_ovoid(W, [], 0, method).verified


def test_five_point_ovoid_by_exhaustive_search():
    W = SymplecticSpace(2)
    gens = [set(g) for g in enumerate_generators(W)]
    ovoids = [X for X in itertools.combinations(W.points, 5) if all(len(g & set(X)) == 1 for g in gens)]
    assert ovoids
    assert all(len(X) == polar_params("W", 2, 2).ovoid_number for X in ovoids)
    for X in ovoids:
        for method in ("clique-bound", "generator-exhaustive"):
            assert verify_partial_m_ovoid(W, X, 1, method).verified
    # nothing larger meets every generator at most once
    assert not any(all(len(g & set(X)) <= 1 for g in gens) for X in itertools.combinations(W.points, 6))


def test_verify_rejects_unknown_method_and_large_space():
    W = SymplecticSpace(2)
    with pytest.raises(ValueError):
        verify_partial_m_ovoid(W, [1], 1, "magic")
    with pytest.raises(ValueError):
        verify_partial_m_ovoid(SymplecticSpace(2, 3), [(1, 0, 0, 0)], 1, "generator-exhaustive")
    with pytest.raises(ValueError):
        verify_partial_m_ovoid(SymplecticSpace(6), [1], 1, "generator-exhaustive")


@pytest.mark.parametrize("r", [2, 3, 4])
def test_methods_agree_and_match_bruteforce(r):
    W = SymplecticSpace(r)
    rng = np.random.default_rng(100 + r)
    pts = W.points
    for _ in range(60 if r < 4 else 15):
        k = int(rng.integers(0, 3 * 2**r))
        X = [pts[i] for i in rng.integers(0, len(pts), k)]  # with repeats
        truth = brute_generator_meets(W, X) if r <= 3 else None
        for m in range(1, 2**r + 1):
            a = verify_partial_m_ovoid(W, X, m, "clique-bound").verified
            b = verify_partial_m_ovoid(W, X, m, "generator-exhaustive").verified
            assert a == b
            if truth is not None:
                assert a == (truth <= m)


def test_methods_agree_q3_via_clique_oracle():
    W = SymplecticSpace(2, 3)
    rng = np.random.default_rng(3)
    G = W.collinearity_graph()
    for _ in range(40):
        idx = sorted(set(int(i) for i in rng.integers(0, len(W.points), 8)))
        X = [W.points[i] for i in idx]
        omega = brute_clique_number(G.induced(idx).adjacency_matrix())
        for m in (1, 2, 3, 4):
            assert verify_partial_m_ovoid(W, X, m).verified == (omega <= m)


@given(st.integers(0, 2**32 - 1), st.integers(1, 4))
@settings(max_examples=40)
def test_monotonicity_in_m(seed, m):
    W = SymplecticSpace(3)
    rng = np.random.default_rng(seed)
    X = [W.points[i] for i in rng.choice(len(W.points), int(rng.integers(1, 30)), replace=False)]
    if verify_partial_m_ovoid(W, X, m).verified:
        assert verify_partial_m_ovoid(W, X, m + 1).verified
        assert verify_partial_m_ovoid(W, X, m + 1, "generator-exhaustive").verified


# --- nearly orthogonal / oddtown -------------------------------------------


def test_nearly_orthogonal_examples():
    for t in (1, 4, 7):
        assert nearly_orthogonal_verify(VectorFamily(t, [1 << i for i in range(t)]), 1)
    F = VectorFamily(5, (0b00001, 0b00111, 0b11001))  # pairwise non-orthogonal
    assert not nearly_orthogonal_verify(F, 1)
    assert not nearly_orthogonal_verify(F, 2)
    assert nearly_orthogonal_verify(F, 3)
    assert not nearly_orthogonal_verify(VectorFamily(2, (0b11,)), 5)


def test_oddtown_examples():
    assert oddtown_verify([{i} for i in range(1, 8)], 1)
    assert not oddtown_verify([{1}, {1, 2, 3}, {1, 4, 5}], 1)
    assert oddtown_verify([{1}, {1, 2, 3}, {1, 4, 5}], 3)
    assert not oddtown_verify([{1, 2}], 4)
    with pytest.raises(ValueError):
        oddtown_verify([{0, 1, 2}], 1)


@st.composite
def families(draw, max_t=9, max_size=14, odd_only=False):
    t = draw(st.integers(1, max_t))
    vec = st.integers(1, 2**t - 1)
    if odd_only:
        vec = vec.filter(lambda v: v.bit_count() & 1)
    return VectorFamily(t, draw(st.lists(vec, min_size=0, max_size=max_size)))


@given(families(max_t=7, max_size=9), st.integers(1, 3))
def test_nearly_orthogonal_matches_definition(F, m):
    assert nearly_orthogonal_verify(F, m) == brute_nearly_orthogonal(list(F.vectors), m)
    assert oddtown_verify(family_to_sets(F), m) == nearly_orthogonal_verify(F, m)


@given(families(max_t=8, odd_only=True), st.integers(1, 3))
@settings(max_examples=60)
def test_equivalence_triangle_property(F, m):
    a = nearly_orthogonal_verify(F, m)
    b = oddtown_verify(complement_translate(F), m)
    cert = embed_to_symplectic(F, m)
    assert a == b == cert.verified
    assert cert.counters["agree"]


def test_complement_translate_preserves_intersection_parity():
    F = VectorFamily(7, (0b1, 0b111, 0b1010100, 0b1111111))
    T = complement_translate(F)
    assert all(len(S) % 2 for S in T)
    for (u, A), (v, B) in itertools.combinations(zip(F.vectors, T), 2):
        assert ((u & v).bit_count() & 1) == (len(A & B) & 1)


def test_embed_examples():
    cert = embed_to_symplectic(VectorFamily(5, [1 << i for i in range(5)]), 1)
    assert cert.verified and cert.counters["nearly_orthogonal"] and cert.counters["embedding_rank"] == 3
    pm = graph_to_vectors(Graph.from_edges(4, [(0, 1), (2, 3)]))
    cert = embed_to_symplectic(pm, 2)
    assert cert.verified and cert.counters["agree"]
    bad = VectorFamily(5, (0b00001, 0b00111, 0b11001))
    cert = embed_to_symplectic(bad, 1)
    assert not cert.verified and cert.counters["agree"]
    even = VectorFamily(3, (0b011,))
    assert not embed_to_symplectic(even, 3).verified
    assert not oddtown_verify(complement_translate(even), 3)


# --- Lempel embeddings ------------------------------------------------------


def test_graph_to_vectors_examples():
    F = graph_to_vectors(empty_graph(6))
    assert F.t == 6 and sorted(F.vectors) == [1 << i for i in range(6)]
    pm = graph_to_vectors(Graph.from_edges(4, [(0, 1), (2, 3)]))
    assert pm.t == 2 and len(pm) == 4
    dot = lambda a, b: (a & b).bit_count() & 1
    assert dot(pm.vectors[0], pm.vectors[1]) and dot(pm.vectors[2], pm.vectors[3])
    assert not dot(pm.vectors[0], pm.vectors[2])
    cap = graph_to_vectors(cayley_f2n(5, build_cap(5)))
    assert (len(cap), cap.t) == (32, 10)
    assert nearly_orthogonal_verify(cap, 2) and brute_nearly_orthogonal(list(cap.vectors), 2)


def test_graph_to_vectors_pattern_random():
    rng = np.random.default_rng(2024)
    for trial in range(500):
        n = int(rng.integers(1, 65))
        p = rng.random()
        A = np.triu(rng.random((n, n)) < p, 1)
        G = Graph.from_edges(n, zip(*np.nonzero(A)))
        F = graph_to_vectors(G)
        vs = F.vectors
        assert F.t == complementary_rank_f2(G)
        for i in range(n):
            for j in range(n):
                expect = 1 if i == j else int(G.has_edge(i, j))
                assert (vs[i] & vs[j]).bit_count() & 1 == expect


def test_bch_family():
    assert [bch_rank_bound(h) for h in (1, 2, 3, 4)] == [4, 14, 48, 164]
    h1 = construct_2ovoid_bch(1)
    assert (len(h1), h1.t) == (4, 2) and nearly_orthogonal_verify(h1, 2)
    h2 = construct_2ovoid_bch(2)
    assert len(h2) == 16 and h2.t <= 14
    assert brute_nearly_orthogonal(list(h2.vectors), 2)
    assert oddtown_verify(complement_translate(h2), 2)
    with pytest.raises(ValueError):
        construct_2ovoid_bch(0)
    with pytest.raises(ValueError):
        construct_2ovoid_bch(8)


# --- amplification ----------------------------------------------------------


def test_amplification_constant():
    G = cayley_f2n(5, build_cap(5))
    census = clique_census(G, 28)
    assert round(amplification_base(32, census, 28), 2) == 13.48
    # by hand: only a_1 = 32 and a_2 = 144 are nonzero
    base = 32 / (32 + 144 * 2**29) ** (1 / 29)
    assert abs(amplification_base(32, census, 28) - base) < 1e-9
    assert abs(amplification_target(32, census, 28, 2) - (base**2 / 28 - 1)) < 1e-9


@pytest.mark.parametrize("seed", [0, 1, 2, 11])
def test_amplify_postconditions(seed):
    G = bch_cayley(2)
    res = amplify_strong_power(G, 3, 2, seed=seed)
    assert res.clique_number <= 3
    assert clique_number(res.graph) <= 3
    assert res.rank_f2 == complementary_rank_f2(res.graph)
    assert res.rank_f2 <= complementary_rank_f2(G) ** 2 == res.rank_bound
    assert res.power_vertices == 256 and res.vertices == len(res.kept)
    assert res.summary()["seed"] == seed


def test_amplify_deterministic_and_guarded():
    G = Graph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)])
    a = amplify_strong_power(G, 2, 2, seed=5)
    b = amplify_strong_power(G, 2, 2, seed=5)
    assert a.kept == b.kept
    with pytest.raises(ValueError):
        amplify_strong_power(G, 1, 2)
    with pytest.raises(ValueError):
        amplify_strong_power(complete_graph(20), 2, 5)


# --- sampler ----------------------------------------------------------------


def test_default_rho_w72():
    P = polar_params("W", 4, 2)
    assert abs(default_rho(P, 3) - 2**-5.5) < 1e-15
    assert int(default_rho(P, 3) * P.points) == 5


def test_sampler_degenerate_cases():
    W = SymplecticSpace(2)
    full = random_partial_m_ovoid(W, 2, rho=1.0, seed=0)
    assert full.verified and 0 < full.size < 15
    assert full.counters["unpruned_successes"] == 0
    assert full.recheck("generator-exhaustive")
    empty = random_partial_m_ovoid(W, 2, rho=0.0, seed=0)
    assert empty.verified and empty.size == 0
    with pytest.raises(ValueError):
        random_partial_m_ovoid(W, 2, rho=1.5)
    with pytest.raises(ValueError):
        random_partial_m_ovoid(polar_params("Q-", 2, 2), 2)


def test_sampler_certificates_reverify_and_are_deterministic():
    W = SymplecticSpace(3)
    a = random_partial_m_ovoid(W, 2, rho=0.3, trials=8, seed=42)
    b = random_partial_m_ovoid(W, 2, rho=0.3, trials=8, seed=42)
    assert a.to_json() == b.to_json()
    assert a.recheck() and a.recheck("generator-exhaustive")
    assert a.seed[0] == 42


def test_sampler_q3():
    cert = random_partial_m_ovoid(SymplecticSpace(2, 3), 2, rho=0.5, trials=3, seed=1)
    assert cert.verified and cert.recheck()


def test_certificate_json_roundtrip():
    W = SymplecticSpace(2)
    cert = verify_partial_m_ovoid(W, W.points[:4], 3)
    back = OvoidCertificate.from_json(cert.to_json())
    assert back.points == cert.points and back.verified == cert.verified
    assert back.to_json() == cert.to_json()
    assert "wall_time" not in cert.to_dict() and "wall_time" in cert.to_dict(include_timing=True)
    W3 = SymplecticSpace(2, 3)
    c3 = verify_partial_m_ovoid(W3, W3.points[:3], 2)
    assert OvoidCertificate.from_json(c3.to_json()).points == c3.points
