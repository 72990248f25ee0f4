"""Simple random walks on Sierpinski graphs and their hitting distributions."""

__version__ = "0.1.0"

from .symbolic import (  # noqa: E402
    ROOT,
    BaryPoint,
    GasketConfig,
    Word,
    ancestor,
    cell_vertices,
    dyadic_point,
    format_word,
    neighbor_set,
    parity,
    parse_word,
)
from .geometry import adjacent_combinatorial, adjacent_geometric, degree, neighbors  # noqa: E402
from .symmetry import (  # noqa: E402
    Permutation,
    act_point,
    act_word,
    random_reflection_product,
    stabilizer_of_zero,
)
from .rng import CounterStream, RngSpec  # noqa: E402
from .walk import WalkPath, limit_cell_estimate, run_to_level, step  # noqa: E402
from .coupling import CouplingTrace, extract_y_chain, fold, folded_walk_endpoint  # noqa: E402
from .exact import (  # noqa: E402
    ExactDist,
    TruncatedGreen,
    exit_distribution,
    first_step_system,
    martin_kernel,
    truncated_green,
)
from .measures import (  # noqa: E402
    CellHistogram,
    CellSet,
    apply_group,
    mu_cell_mass,
    total_variation,
    unfold_selfsimilar,
    verify_group_invariance,
    verify_selfsimilar,
    verify_shift_identity,
)

__all__ = [
    "ROOT", "BaryPoint", "GasketConfig", "Word", "ancestor", "cell_vertices",
    "dyadic_point", "format_word", "neighbor_set", "parity", "parse_word",
    "adjacent_combinatorial", "adjacent_geometric", "degree", "neighbors",
    "Permutation", "act_point", "act_word", "random_reflection_product",
    "stabilizer_of_zero", "CounterStream", "RngSpec", "WalkPath",
    "limit_cell_estimate", "run_to_level", "step", "CouplingTrace",
    "extract_y_chain", "fold", "folded_walk_endpoint", "ExactDist",
    "TruncatedGreen", "exit_distribution", "first_step_system", "martin_kernel",
    "truncated_green", "CellHistogram", "CellSet", "apply_group", "mu_cell_mass",
    "total_variation", "unfold_selfsimilar", "verify_group_invariance",
    "verify_selfsimilar", "verify_shift_identity",
]
