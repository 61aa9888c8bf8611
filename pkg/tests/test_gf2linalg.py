import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from movoids.geometry import build_cap
from movoids.gf2linalg import (
    BitMatrix,
    IntMatrix,
    bareiss_rank,
    lempel_factor,
    modular_rank,
    rank_exact,
    rank_f2,
    walsh_spectrum,
    walsh_transform,
)
from movoids.graphs import cayley_f2n, complementary_rank_f2

from oracles import (
    cayley_adjacency,
    gf2_product,
    naive_character_sums,
    rank_fraction,
    rank_gf2_dense,
)


def bit_matrices(max_n=10):
    return st.integers(1, max_n).flatmap(
        lambda r: st.integers(1, max_n).flatmap(
            lambda c: st.lists(
                st.lists(st.integers(0, 1), min_size=c, max_size=c), min_size=r, max_size=r
            )
        )
    )


def symmetric_with_diagonal(rng, n):
    a = rng.integers(0, 2, (n, n))
    a = np.triu(a) | np.triu(a, 1).T
    if not np.diag(a).any():
        i = rng.integers(n)
        a[i, i] = 1
    return a


# --- BitMatrix basics -------------------------------------------------------


def test_bitmatrix_roundtrip_and_entries():
    a = np.array([[1, 0, 1], [0, 1, 1]])
    M = BitMatrix.from_array(a)
    assert M.shape == (2, 3)
    assert (M.to_array() == a).all()
    assert M.entry(0, 2) == 1 and M.entry(1, 0) == 0
    with pytest.raises(IndexError):
        M.entry(2, 0)
    assert (M.transpose().to_array() == a.T).all()
    assert BitMatrix.from_text(M.to_text()) == M


def test_bitmatrix_text_errors_report_lines():
    with pytest.raises(ValueError, match="line 3"):
        BitMatrix.from_text("2 2\n10\n1x\n")
    with pytest.raises(ValueError):
        BitMatrix.from_text("2 2\n10\n")


def test_intmatrix_text_roundtrip():
    M = IntMatrix.from_array([[1, -2, 3], [0, 10**30, -1]])
    assert IntMatrix.from_text(M.to_text()) == M


@given(st.integers(0, 2**32 - 1), st.integers(1, 9), st.integers(1, 9), st.integers(1, 9))
def test_product_matches_dense(seed, r, k, c):
    rng = np.random.default_rng(seed)
    a, b = rng.integers(0, 2, (r, k)), rng.integers(0, 2, (k, c))
    A, B = BitMatrix.from_array(a), BitMatrix.from_array(b)
    assert ((A @ B).to_array() == gf2_product(a, b)).all()
    assert (A + A) == BitMatrix.zeros(r, k)


# --- rank_f2 ----------------------------------------------------------------


def test_rank_f2_examples():
    assert rank_f2(BitMatrix.identity(4)) == 4
    assert rank_f2(BitMatrix.ones(3, 3)) == 1
    G = cayley_f2n(5, build_cap(5))
    assert rank_f2(G.closed_bitmatrix()) == 10


@given(bit_matrices(12))
def test_rank_f2_matches_dense_reduction(a):
    assert rank_f2(BitMatrix.from_array(a)) == rank_gf2_dense(a)


@given(bit_matrices(10), st.lists(st.tuples(st.integers(0, 9), st.integers(0, 9), st.booleans()), max_size=30))
def test_rank_f2_invariant_under_row_operations(a, ops):
    a = np.array(a)
    r0 = rank_f2(BitMatrix.from_array(a))
    n = len(a)
    for i, j, swap in ops:
        i, j = i % n, j % n
        if swap:
            a[[i, j]] = a[[j, i]]
        elif i != j:
            a[i] ^= a[j]
    assert rank_f2(BitMatrix.from_array(a)) == r0


@given(bit_matrices(8))
def test_rank_f2_at_most_rational_rank(a):
    assert rank_f2(BitMatrix.from_array(a)) <= rank_exact(IntMatrix.from_array(a))


# --- Lempel -----------------------------------------------------------------


def test_lempel_identity():
    for n in (1, 4, 7):
        B = lempel_factor(BitMatrix.identity(n))
        assert B == BitMatrix.identity(n)


def test_lempel_all_ones():
    B = lempel_factor(BitMatrix.ones(2, 2))
    assert B.shape == (2, 1)
    assert (B.to_array() == [[1], [1]]).all()


def test_lempel_alternating_residual_example():
    M = BitMatrix.from_array([[1, 0, 0], [0, 0, 1], [0, 1, 0]])
    stated = np.array([[1, 1, 1], [0, 1, 1], [1, 1, 0]])
    # exhaustive oracle: the stated B is one of the 3x3 factorizations
    solutions = [
        np.array(bits).reshape(3, 3)
        for bits in itertools.product((0, 1), repeat=9)
        if (gf2_product(np.array(bits).reshape(3, 3), np.array(bits).reshape(3, 3).T) == M.to_array()).all()
    ]
    assert any((s == stated).all() for s in solutions)
    B = lempel_factor(M)
    assert B.shape == (3, 3)
    assert ((B @ B.transpose()).to_array() == M.to_array()).all()


def test_lempel_rejects_bad_input():
    with pytest.raises(ValueError, match="symmetric"):
        lempel_factor(BitMatrix.from_array([[1, 1], [0, 1]]))
    with pytest.raises(ValueError, match="diagonal"):
        lempel_factor(BitMatrix.from_array([[0, 1], [1, 0]]))


@given(st.integers(0, 2**32 - 1), st.integers(1, 12))
def test_lempel_property(seed, n):
    rng = np.random.default_rng(seed)
    a = symmetric_with_diagonal(rng, n)
    M = BitMatrix.from_array(a)
    B = lempel_factor(M)
    assert B @ B.transpose() == M
    assert B.ncols == rank_f2(M)


def test_lempel_is_deterministic():
    rng = np.random.default_rng(5)
    M = BitMatrix.from_array(symmetric_with_diagonal(rng, 12))
    assert lempel_factor(M) == lempel_factor(M)


# --- exact rank -------------------------------------------------------------


def test_rank_exact_examples():
    assert rank_exact(IntMatrix.from_array(np.zeros((4, 6), dtype=int))) == 0
    assert rank_exact(IntMatrix.from_array(np.eye(5, dtype=int))) == 5
    G = cayley_f2n(5, build_cap(5))
    A = G.adjacency_matrix() - np.eye(32, dtype=np.int64)
    assert rank_exact(IntMatrix.from_array(A)) == 11


@given(st.integers(0, 2**32 - 1), st.integers(1, 9), st.integers(1, 9), st.integers(0, 8))
def test_bareiss_matches_fraction_oracle(seed, r, c, k):
    rng = np.random.default_rng(seed)
    # random low-rank integer matrix
    k = min(k, r, c)
    a = rng.integers(-5, 6, (r, k)) @ rng.integers(-5, 6, (k, c)) if k else np.zeros((r, c), dtype=int)
    M = IntMatrix.from_array(a)
    assert bareiss_rank(M) == rank_fraction(a)


@pytest.mark.parametrize("seed", range(6))
def test_modular_route_matches_bareiss(seed):
    rng = np.random.default_rng(seed)
    n, k = 40 + 7 * seed, 17 + seed
    a = rng.integers(-3, 4, (n, k)) @ rng.integers(-3, 4, (k, n + 3))
    M = IntMatrix.from_array(a)
    assert modular_rank(M) == bareiss_rank(M) == k
    assert rank_exact(M, bareiss_limit=0) == k


def test_modular_route_on_cap_graph():
    G = cayley_f2n(6, build_cap(6))
    A = G.adjacency_matrix() - np.eye(G.n, dtype=np.int64)
    M = IntMatrix.from_array(A)
    assert modular_rank(M) == bareiss_rank(M)


def test_huge_entries_fall_back_to_bareiss():
    a = [[10**40, 1], [2 * 10**40, 2]]
    assert rank_exact(IntMatrix.from_array(a)) == 1


# --- Walsh ------------------------------------------------------------------


def test_walsh_examples():
    assert sorted(walsh_spectrum(2, [0b11]).elements()) == [-1, -1, 1, 1]
    assert walsh_spectrum(5, build_cap(5)) == {9: 1, 5: 1, 1: 21, -3: 7, -7: 2}
    spec4 = walsh_spectrum(4, build_cap(4))
    assert spec4 == {5: 1, 1: 10, -3: 5}
    assert sum(k * v for k, v in spec4.items()) == 0
    assert sum(k * k * v for k, v in spec4.items()) == 16 * 5


def test_walsh_rejects_zero():
    with pytest.raises(ValueError):
        walsh_spectrum(3, [0, 1])


sets = st.integers(1, 7).flatmap(lambda n: st.tuples(st.just(n), st.sets(st.integers(1, 2**n - 1), min_size=1)))


@given(sets)
def test_walsh_matches_naive_and_traces(ns):
    n, S = ns
    lam = walsh_transform(n, S)
    assert list(lam) == naive_character_sums(n, S)
    assert lam.sum() == 0
    assert (lam.astype(np.int64) ** 2).sum() == (1 << n) * len(S)


@given(sets)
def test_walsh_eigenvectors_exact(ns):
    n, S = ns
    A = cayley_f2n(n, S).adjacency_matrix()
    assert (A == cayley_adjacency(n, S)).all()
    lam = walsh_transform(n, S)
    x = np.arange(1 << n)
    for v in range(1 << n):
        chi = np.array([(-1) ** bin(v & xi).count("1") for xi in x], dtype=np.int64)
        assert (A @ chi == lam[v] * chi).all()


def test_complementary_rank_on_edgeless():
    from movoids.graphs import complementary_rank_real, empty_graph

    G = empty_graph(6)
    assert complementary_rank_f2(G) == complementary_rank_real(G) == 6
