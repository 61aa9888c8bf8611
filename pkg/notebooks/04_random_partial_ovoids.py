"""
Random partial m-ovoids
=======================

Keep each point of W(7,2) with probability rho, then check whether any
generator picked up more than m of them. Every trial has its own child seed,
so any run can be reproduced from the master seed alone.
"""

import math
from collections import Counter

import numpy as np

from movoids.geometry import SymplecticSpace
from movoids.ovoids import default_rho, random_partial_m_ovoid, sample_trial

W = SymplecticSpace(4)
m = 3
rho = default_rho(W.params, m)
print(f"{W.params.label()}: {W.params.points} points, rho = {rho:.5f}, "
      f"target size {math.floor(rho * W.params.points)}")

# %% sample sizes and how often no pruning was needed
sizes, clean = Counter(), 0
for i, ss in enumerate(np.random.SeedSequence(0).spawn(100)):
    t = sample_trial(W, m, rho, ss, i)
    sizes[t.sampled] += 1
    clean += t.unpruned_verified
print("sample sizes:", dict(sorted(sizes.items())), " verified without pruning:", clean)

# %% the best of the trials, with a certificate that re-checks from scratch
cert = random_partial_m_ovoid(W, m, trials=100, seed=0)
print("best size", cert.size, "seed", cert.seed, "recheck:", cert.recheck("generator-exhaustive"))
print(cert.to_json()[:400], "...")
