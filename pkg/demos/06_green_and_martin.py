"""
Green function and Martin kernel of the killed walk
===================================================

G_R(x, y) counts the expected visits to y before the walk first reaches
length R.  The kernel K_R(x, y) = G_R(x, y) / G_R(root, y) is an exploratory
table; its R -> infinity behavior is not asserted here.
"""

from gasket_walk.exact import kernel_table, truncated_green
from gasket_walk.symbolic import GasketConfig, format_word, words

cfg = GasketConfig(1)
for radius in range(2, 7):
    g = truncated_green(radius, cfg)
    print(f"R={radius}: G_R(root, root) = {g((), ())} = {float(g((), ())):.5f}")

g = truncated_green(6, cfg)
# reversibility with respect to the degree
x, y = (0, 1), (1, 0, 0)
print("deg(x)G(x,y) =", g.degrees[x] * g(x, y), " deg(y)G(y,x) =", g.degrees[y] * g(y, x))

for x, y, k in kernel_table(g, [(0,), (1,), (0, 0)], words(4, cfg)):
    if y[:2] == (0, 0):
        print(f"K_6({format_word(x)}, {format_word(y)}) = {float(k):.5f}")
