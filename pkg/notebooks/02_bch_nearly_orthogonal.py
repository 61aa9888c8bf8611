"""
Nearly orthogonal vectors from the BCH graph
============================================

Take the Cayley graph on F_{2^h}^2 with connection set {(a, a^3)}. It is
triangle-free, so any Gram factorisation of A + I gives vectors among which
every three contain an orthogonal pair.
"""

import math

from movoids.graphs import bch_cayley, clique_number
from movoids.ovoids import (
    bch_rank_bound,
    complement_translate,
    construct_2ovoid_bch,
    embed_to_symplectic,
    nearly_orthogonal_verify,
    oddtown_verify,
)

# %% sizes and dimensions
for h in range(1, 6):
    F = construct_2ovoid_bch(h)
    print(f"h={h}: {len(F):5d} vectors in dimension {F.t:4d} "
          f"(bound {bch_rank_bound(h)}), exponent {math.log(len(F)) / math.log(F.t):.4f}")

# %% clique number 2 is what makes the family 2-nearly orthogonal
G = bch_cayley(3)
F = construct_2ovoid_bch(3)
print("omega =", clique_number(G), " 2-nearly orthogonal:", nearly_orthogonal_verify(F, 2),
      " 1-nearly orthogonal:", nearly_orthogonal_verify(F, 1))

# %% the same family as an Oddtown-type set system, and as points of a symplectic space
F = construct_2ovoid_bch(2)
sets = complement_translate(F)
print(sorted(map(sorted, sets))[:4], "...")
print("oddtown (m=2):", oddtown_verify(sets, 2))
cert = embed_to_symplectic(F, 2)
print("symplectic side:", cert.space.label(), "verified:", cert.verified, cert.counters)
