"""
The Sierpinski graph as a word tree
===================================

Vertices are words over {0, ..., d}; the root is written "-".  Every word has
a parent (drop the last letter) and d+1 children, and two words of the same
length are joined horizontally when their cells touch.
"""

from gasket_walk.geometry import adjacent_geometric, neighbors
from gasket_walk.symbolic import GasketConfig, cell_vertices, format_word, words

cfg = GasketConfig(1)

# For d = 1 the gasket is the unit interval and the cell of a word is a
# dyadic interval.
for x in words(3, cfg):
    lo, hi = sorted(p.to_unit_interval() for p in cell_vertices(x, cfg))
    print(f"K_{format_word(x)} = [{lo}, {hi}]")

# The neighbors of 10: parent, two children and two horizontal words.
nl = neighbors((1, 0), cfg)
print("parent", format_word(nl.parent), "children", [format_word(c) for c in nl.children],
      "horizontal", [format_word(h) for h in nl.horizontal], "degree", nl.degree)

# Horizontal edges come from the suffix-exchange rule w i j^k ~ w j i^k;
# the geometric check agrees: 100 and 011 share the point 1/2.
print("100 ~ 011:", adjacent_geometric((1, 0, 0), (0, 1, 1), cfg))
print("100 ~ 001:", adjacent_geometric((1, 0, 0), (0, 0, 1), cfg))

# In dimension 2 the level-1 words have degree 2d + 2 = 6.
cfg2 = GasketConfig(2)
for i in range(3):
    print(format_word((i,)), [format_word(y) for y in neighbors((i,), cfg2).all()])
