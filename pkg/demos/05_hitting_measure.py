"""
The hitting distribution is the uniform measure
===============================================

The limit cell of a walk at level N is estimated by the first N letters of
its position at depth N + burn.  Its law should give every level-N cell mass
(d+1)^-N, be invariant under the symmetries, and satisfy the self-similar
identity nu(S_0^-1 B) = nu(union of R_0i B).
"""

from gasket_walk.measures import (
    limit_histogram,
    total_variation,
    uniform_dist,
    verify_group_invariance,
    verify_selfsimilar,
)
from gasket_walk.symbolic import GasketConfig

cfg = GasketConfig(2)
h = limit_histogram((), 3, walks=200_000, seed=11, cfg=cfg, burn=15)
print("TV distance to uniform:", round(total_variation(h, uniform_dist(3, cfg)), 5))

rep = verify_group_invariance(3, 200_000, 11, cfg, n_sets=5, histogram=h)
print("group invariance:", "PASS" if rep.passed else "FAIL",
      f"{len(rep.comparisons)} comparisons, largest |z| =",
      round(max(abs(c.z) for c in rep.comparisons), 2))

rep = verify_selfsimilar(3, 200_000, 11, cfg, histogram=h)
for c in rep.comparisons:
    print(f"{c.lhs:>28} {c.estimate_lhs:.4f}   {c.rhs:>32} {c.estimate_rhs:.4f}   z={c.z:+.2f}")
print("self-similar identity:", "PASS" if rep.passed else "FAIL")
