"""
Bounds on partial m-ovoids
==========================

Each report lists the m-ovoid size next to the upper bounds that apply, marks
the smallest, and says whether an m-ovoid is ruled out.
"""

from movoids.bounds import bound_report, bounds_grid, report_rows_csv, spectral_2ovoid_bound
from movoids.geometry import polar_params

print(bound_report(polar_params("W", 3, 2), 2).to_table())
print(bound_report(polar_params("Q-", 3, 2), 2).to_table())

# %% the spectral bound three ways; the eigenvalue form never exceeds the others
for fam in ("symplectic", "elliptic", "parabolic", "hyperbolic"):
    sb = spectral_2ovoid_bound(polar_params(fam, 4, 3))
    print(f"{fam:11s} generic={sb.generic} closed={sb.closed_form} "
          f"refined={sb.refined} eigen={float(sb.via_srg):.1f}")

# %% where do 2-ovoids disappear for q = 2?
print(report_rows_csv(bounds_grid("W", range(3, 9), [2], 2)))
