"""
Folding a walk onto 0X
======================

The walk is time-changed to the chain Y_k, and each parity change of Y
multiplies a running permutation by a transposition.  Applying it to Y_k
gives a walk that never leaves the words starting with 0, and that walk is a
simple random walk on that subgraph.
"""

from gasket_walk.coupling import fold, folded_path_law, parse_path, srw_path_law_0x
from gasket_walk.symbolic import GasketConfig, format_word

cfg = GasketConfig(1)
path = parse_path("-,0,-,1,10,100,011,01,00", cfg)
trace = fold(path, cfg)
print(f"{'n':>2} {'Z_n':>4} {'k':>2} {'Y_k':>4} {'L_k':>3} {'G':>5} {'Z~_k':>5}")
for r in trace.rows:
    if r.k is None:
        print(f"{r.n:>2} {format_word(r.z):>4}")
    else:
        print(f"{r.n:>2} {format_word(r.z):>4} {r.k:>2} {format_word(r.y):>4} {r.l:>3} "
              f"{r.g.name():>5} {format_word(r.z_tilde):>5}")

# The law of the folded path, computed exactly, is the simple random walk law
# on 0X: every path has probability prod 1/deg_0(z_k).
law = folded_path_law(5, cfg)
print("folded law == SRW on 0X:", law == srw_path_law_0x(5, cfg), f"({len(law)} paths)")
