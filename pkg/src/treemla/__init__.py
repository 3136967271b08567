"""Exact minimum linear arrangement of trees via corrected Shiloach recursion."""

from .oracle import (
    OracleResult,
    closed_form_complete_binary,
    exact_anchored_mla,
    exact_mla,
    exact_mla_costs,
)
from .shiloach import (
    FormulaMode,
    MemoLimitExceeded,
    ShiloachSolver,
    SolveResult,
    SolverConfig,
    left_offset,
    mla_anchored,
    mla_free,
    n_star,
    p_candidates,
    s_alpha,
    satisfies_p_inequality,
    solve_type_a,
    solve_type_b,
)
from .tree import (
    AnchorSide,
    Arrangement,
    ArrangementError,
    Subtree,
    SubtreePartition,
    Tree,
    TreeError,
    anchored_cost,
    centroid,
    complete_binary_tree,
    cost,
    generate_tree,
    iter_labeled_trees,
    parse_arrangement,
    parse_tree,
    prufer_decode,
    random_tree,
    remove_center,
    reverse,
    shift,
)

__version__ = "0.1.0"
