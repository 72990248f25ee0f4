"""Exact computations for the walk killed at a finite level.

With u(x) = G(start, x) / deg(x), the expected-visit equations of the walk
killed on first reaching length N read

    deg(y) u(y) - sum_{x ~ y, |x| < N} u(x) = [y == start],     |y| < N,

a symmetric integer system.  The exit word w (|w| = N) can only be entered
from its parent, so  P(Z_tau_N = w) = u(parent(w)).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .geometry import horizontal_neighbors
from .linalg import solve_exact, solve_float, solve_rational
from .symbolic import GasketConfig, Word, words

log = logging.getLogger(__name__)

EXACT_BUDGET = 20_000
MAX_STATES = 2_000_000
FLOAT_TOL = 1e-12


class SolverBudgetError(RuntimeError):
    pass


@dataclass
class ExactDist:
    support: list[Word]
    probs: list  # Fraction when exact, float otherwise
    exact: bool = True
    residual: float = 0.0

    def __post_init__(self):
        if len(self.support) != len(self.probs):
            raise ValueError("support and probs differ in length")

    @property
    def level(self) -> int:
        return len(self.support[0]) if self.support else 0

    def as_dict(self) -> dict[Word, Fraction]:
        return dict(zip(self.support, self.probs))

    def prob(self, w: Word):
        return self.as_dict().get(w, 0)

    def total(self):
        return sum(self.probs)


def _state_space(level: int, cfg: GasketConfig, within: Word) -> list[Word]:
    states: list[Word] = []
    for n in range(len(within), level):
        states.extend(within + w for w in words(n - len(within), cfg))
    return states


def _neighbors_inside(x: Word, level: int, cfg: GasketConfig, within: Word,
                      index: dict[Word, int]) -> tuple[list[int], int]:
    """Interior neighbor indices of x and deg(x) in the subgraph of words with
    prefix ``within``."""
    nbrs: list[Word] = []
    if len(x) > len(within):
        nbrs.append(x[:-1])
    children = [x + (s,) for s in range(cfg.d + 1)]
    horiz = [y for y in horizontal_neighbors(x, cfg) if y[:len(within)] == within]
    deg = len(nbrs) + len(children) + len(horiz)
    inner = [index[y] for y in nbrs + children + horiz if len(y) < level]
    return inner, deg


def _system(level: int, cfg: GasketConfig, within: Word):
    states = _state_space(level, cfg, within)
    if len(states) > MAX_STATES:
        raise SolverBudgetError(
            f"{len(states)} transient states exceed the solver budget of {MAX_STATES}")
    index = {x: i for i, x in enumerate(states)}
    matrix = []
    degs = []
    for x in states:
        inner, deg = _neighbors_inside(x, level, cfg, within, index)
        row = {index[x]: deg}
        for j in inner:
            row[j] = row.get(j, 0) - 1
        matrix.append(row)
        degs.append(deg)
    return states, index, matrix, degs


def exit_distribution(start: Word, level: int, cfg: GasketConfig,
                      exact: bool | None = None, within: Word = ()) -> ExactDist:
    """Law of the first vertex of length ``level`` hit from ``start``.

    ``within`` restricts the walk to the induced subgraph of words with that
    prefix (e.g. (0,) for the walk on 0X).  ``exact=None`` picks exact
    arithmetic when the transient state count is within EXACT_BUDGET.
    """
    if len(start) >= level:
        raise ValueError(f"start {start!r} must be shorter than level {level}")
    if start[:len(within)] != within:
        raise ValueError(f"start {start!r} lies outside the subgraph {within!r}")
    states, index, matrix, _ = _system(level, cfg, within)
    if exact is None:
        exact = len(states) <= EXACT_BUDGET
    b = [0] * len(states)
    b[index[start]] = 1
    support = [within + w for w in words(level - len(within), cfg)]
    if exact:
        sol = solve_exact(matrix, [{0: v} if v else {} for v in b])
        u = [s.get(0, Fraction(0)) for s in sol]
        probs = [u[index[w[:-1]]] for w in support]
        return ExactDist(support, probs, exact=True)
    x, res = solve_float(matrix, b, tol=FLOAT_TOL)
    if res > FLOAT_TOL:
        log.warning("float exit solve residual %.3g above %.1g", res, FLOAT_TOL)
    probs = [float(x[index[w[:-1]]]) for w in support]
    return ExactDist(support, probs, exact=False, residual=float(res))


def first_step_system(cfg: GasketConfig) -> list[Fraction]:
    """Solve the coarse first-step equations for the level-2 hitting problem.

        q_root = sum_j q_j / (d+1)
        q_j    = 1/(2d+2) + q_root/(2d+2) + sum_{l != j} q_l/(2d+2)

    Unknowns ordered (q_root, q_0, ..., q_d).
    """
    d = cfg.d
    n = d + 2
    a = [[Fraction(0)] * n for _ in range(n)]
    b = [Fraction(0)] * n
    a[0][0] = Fraction(1)
    for j in range(d + 1):
        a[0][1 + j] = Fraction(-1, d + 1)
    w = Fraction(1, 2 * d + 2)
    for j in range(d + 1):
        r = 1 + j
        a[r][r] = Fraction(1)
        a[r][0] = -w
        for l in range(d + 1):
            if l != j:
                a[r][1 + l] = -w
        b[r] = w
    return solve_rational(a, b)


@dataclass
class TruncatedGreen:
    """Green function of the walk killed on first reaching length ``radius``."""

    radius: int
    d: int
    states: list[Word]
    values: dict[tuple[Word, Word], object] = field(repr=False)
    degrees: dict[Word, int] = field(repr=False)
    exact: bool = True

    def __call__(self, x: Word, y: Word):
        return self.values.get((x, y), Fraction(0))


def truncated_green(radius: int, cfg: GasketConfig, exact: bool | None = None) -> TruncatedGreen:
    """G_R(x, y) = sum_n P^n(x, y) for the killed walk, all |x|, |y| < R.

    With M = D - A on the transient states, G = M^{-1} D.
    """
    if radius < 1:
        raise ValueError("radius must be >= 1")
    states, index, matrix, degs = _system(radius, cfg, ())
    n = len(states)
    if exact is None:
        exact = n <= 2_000
    values: dict[tuple[Word, Word], object] = {}
    if exact:
        inv = solve_exact(matrix, [{i: 1} for i in range(n)])
        for i, x in enumerate(states):
            for k, v in inv[i].items():
                values[(x, states[k])] = v * degs[k]
    else:
        import numpy as np
        inv, res = solve_float(matrix, np.eye(n), tol=FLOAT_TOL)
        if res > FLOAT_TOL:
            log.warning("float Green solve residual %.3g above %.1g", res, FLOAT_TOL)
        for i, x in enumerate(states):
            for k in np.nonzero(inv[i])[0]:
                values[(x, states[k])] = float(inv[i, k]) * degs[k]
    return TruncatedGreen(radius, cfg.d, states, values,
                          {x: degs[i] for i, x in enumerate(states)}, exact)


def martin_kernel(radius: int, x: Word, y: Word, cfg: GasketConfig,
                  green: TruncatedGreen | None = None):
    """K_R(x, y) = G_R(x, y) / G_R(root, y)."""
    if green is None:
        green = truncated_green(radius, cfg)
    if len(x) >= radius or len(y) >= radius:
        raise ValueError("both words must be shorter than the radius")
    den = green((), y)
    if den == 0:
        raise ZeroDivisionError(f"G_R(root, {y!r}) vanishes")
    return green(x, y) / den


def kernel_table(green: TruncatedGreen, xs: Iterable[Word], ys: Iterable[Word]):
    """Rows (x, y, K_R(x, y)) for exploratory output."""
    ys = list(ys)
    return [(x, y, green(x, y) / green((), y)) for x in xs for y in ys]

