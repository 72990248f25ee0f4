"""
Exact exit laws
===============

The law of the first vertex of length N is the solution of a finite linear
system, solved here over the rationals.
"""

from gasket_walk.exact import exit_distribution, first_step_system
from gasket_walk.symbolic import GasketConfig, format_word

for d in (1, 2, 3):
    cfg = GasketConfig(d)
    dist = exit_distribution((), 4, cfg)
    print(f"d={d}: from the root every level-4 word has probability",
          set(dist.probs), f"({len(dist.support)} words)")

# From the vertex 0 the law is no longer uniform.
cfg = GasketConfig(1)
dist = exit_distribution((0,), 2, cfg)
for w, p in zip(dist.support, dist.probs):
    print(format_word(w), p)

# The coarse first-step equations have the uniform solution 1/(d+1).
for d in range(1, 6):
    print(d, first_step_system(GasketConfig(d)))

# Large systems switch to a sparse float solve with a residual flag.
big = exit_distribution((), 7, GasketConfig(3), exact=False)
print("d=3 N=7 float solve: exact =", big.exact, "residual =", big.residual,
      "max deviation from uniform =", max(abs(p - 4.0 ** -7) for p in big.probs))
