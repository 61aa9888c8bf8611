"""
The cap graph in F_2^5
======================

A cap is a set of points with no three on a line; over F_2 that means no
three of its vectors add up to zero. Using a cap as the connection set of a
Cayley graph on F_2^n gives a triangle-free graph whose complementary rank
is small.
"""

import numpy as np

from movoids.geometry import build_cap, hyperplane_profile, write_points
from movoids.gf2linalg import IntMatrix, rank_exact, walsh_spectrum
from movoids.graphs import cayley_f2n, complementary_rank_f2, is_triangle_free

# the cap, printed coordinate 0 first
S = build_cap(5)
print(write_points(S, q=2, dim=5))

# %% the graph
G = cayley_f2n(5, S)
print(G, "regular of degree", G.degree(0), "triangle-free:", is_triangle_free(G))

# %% Cayley graphs on F_2^n are diagonalised by characters, so the spectrum
# is one Walsh-Hadamard transform of the indicator of S
spec = walsh_spectrum(5, S)
print(sorted(spec.items(), reverse=True))

# %% two ranks: over GF(2) for A + I, over the rationals for A - I
A = G.adjacency_matrix()
print("rank_F2(A+I) =", complementary_rank_f2(G))
print("rank_Q(A-I)  =", rank_exact(IntMatrix.from_array(A - np.eye(G.n, dtype=np.int64))))

# %% how hyperplanes cut the cap; the eigenvalue at v is 2|H_v cap S| - |S|
for n in range(3, 9):
    print(n, dict(sorted(hyperplane_profile(build_cap(n), n).items())))
