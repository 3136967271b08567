"""Shiloach's minimum linear arrangement algorithm for trees, corrected.

The solver recurses over free and right-anchored subproblems. At each
subproblem a center ``v*`` is removed, the resulting subtrees are sorted by
decreasing size, and two layout families are compared:

* type A: the largest subtree ``T_0`` at the far end, the rest after it;
* type B: subtrees ``T_1, T_3, ...`` (right-anchored) to the left of a central
  tree ``T*``, subtrees ``..., T_4, T_2`` (left-anchored) to its right.

``FormulaMode`` selects how the joining constant of type B is computed: the
two equivalent corrections, or the formulas exactly as originally published
(which under-report the cost whenever a type B layout wins).

Subproblems are vertex subsets of the input tree, encoded as bitmasks over
the tree's sorted vertex list.
"""

from __future__ import annotations

import enum
import sys
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Sequence

from .tree import (
    AnchorSide,
    Arrangement,
    SubtreePartition,
    Tree,
    TreeError,
    anchored_cost,
    cost,
    reverse,
)


class FormulaMode(str, enum.Enum):
    FIX_A = "fix_a"
    FIX_B = "fix_b"
    ORIGINAL_BUG = "original_bug"

    @classmethod
    def parse(cls, name: "str | FormulaMode") -> "FormulaMode":
        if isinstance(name, cls):
            return name
        return cls(str(name).replace("-", "_"))


class MemoLimitExceeded(RuntimeError):
    pass


VSTAR_POLICIES = ("centroid", "exhaustive")
P_POLICIES = ("min_over_all", "inequality")


@dataclass(frozen=True)
class SolverConfig:
    """Solver knobs.

    ``p_policy=None`` resolves to ``"inequality"`` for the original-bug mode
    (p is chosen the way the published algorithm chooses it) and to
    ``"min_over_all"`` otherwise.
    """

    mode: FormulaMode = FormulaMode.FIX_B
    vstar_policy: str = "centroid"
    p_policy: str | None = None
    memo_limit: int = 2_000_000
    exhaustive_limit: int = 64

    def __post_init__(self):
        object.__setattr__(self, "mode", FormulaMode.parse(self.mode))
        if self.vstar_policy not in VSTAR_POLICIES:
            raise ValueError(f"unknown vstar policy {self.vstar_policy!r}")
        if self.p_policy is None:
            default = "inequality" if self.mode is FormulaMode.ORIGINAL_BUG else "min_over_all"
            object.__setattr__(self, "p_policy", default)
        if self.p_policy not in P_POLICIES:
            raise ValueError(f"unknown p policy {self.p_policy!r}")


@dataclass
class SolveResult:
    cost: int
    arrangement: Arrangement
    recomputed_cost: int
    mode: FormulaMode
    trace: list[dict[str, Any]] = field(default_factory=list)
    anchor: int | None = None
    side: AnchorSide | None = None

    @property
    def self_check(self) -> bool:
        return self.cost == self.recomputed_cost


# -- formulas ------------------------------------------------------------------


def _sizes(partition: SubtreePartition | Sequence[int]) -> tuple[int, ...]:
    if isinstance(partition, SubtreePartition):
        return partition.sizes
    return tuple(partition)


def _check_p(sizes: Sequence[int], p: int, alpha: int) -> None:
    if alpha not in (0, 1):
        raise ValueError(f"alpha must be 0 or 1, got {alpha}")
    if p < 1 or 2 * p - alpha > len(sizes) - 1:
        raise ValueError(f"p={p} out of range for k={len(sizes) - 1}, alpha={alpha}")


def n_star(partition: SubtreePartition | Sequence[int], p: int, alpha: int, mode: FormulaMode | str) -> int:
    """Size parameter of the central tree.

    ``fix_b`` counts ``T_0`` (the true size of ``T*``); the other modes keep
    the original definition, which also subtracts ``n_0``.
    """
    sizes = _sizes(partition)
    _check_p(sizes, p, alpha)
    n = sum(sizes) + 1
    outer = sum(sizes[1 : 2 * p - alpha + 1])
    if FormulaMode.parse(mode) is FormulaMode.FIX_B:
        return n - outer
    return n - sizes[0] - outer


def satisfies_p_inequality(
    partition: SubtreePartition | Sequence[int], p: int, alpha: int, mode: FormulaMode | str
) -> bool:
    """Whether ``n_i > floor((n_0+2)/2) + floor((m+2)/2)`` with ``i = 2p - alpha``.

    ``m`` is ``n* - n_0`` under the redefined ``n*`` and ``n*`` itself under
    the original definition, so every mode yields the same threshold.
    """
    sizes = _sizes(partition)
    mode = FormulaMode.parse(mode)
    ns = n_star(sizes, p, alpha, mode)
    n0 = sizes[0]
    rest = ns - n0 if mode is FormulaMode.FIX_B else ns
    return sizes[2 * p - alpha] > (n0 + 2) // 2 + (rest + 2) // 2


def p_candidates(
    partition: SubtreePartition | Sequence[int], alpha: int, config: SolverConfig | None = None
) -> list[int]:
    config = config or SolverConfig()
    sizes = _sizes(partition)
    k = len(sizes) - 1
    ps = [p for p in range(1, (k + alpha) // 2 + 1) if 1 <= 2 * p - alpha <= k]
    if config.p_policy == "inequality":
        ps = [p for p in ps if satisfies_p_inequality(sizes, p, alpha, config.mode)]
    return ps


def s_alpha(partition: SubtreePartition | Sequence[int], p: int, alpha: int, mode: FormulaMode | str) -> int:
    """Joining constant of a type B layout.

    Accounts for the part of every subtree-to-center edge outside the
    subtree's own anchor and, when anchored, for the anchor of the whole tree.
    """
    sizes = _sizes(partition)
    mode = FormulaMode.parse(mode)
    ns = n_star(sizes, p, alpha, mode)
    if mode is FormulaMode.FIX_A:
        z = ns + sizes[0]
    else:
        # fix_b: ns is already |T*|; original_bug: |T*| - n_0 as published
        z = ns
    weighted = sum((j - 1) * (sizes[2 * j - 1 - alpha] + sizes[2 * j - alpha]) for j in range(2, p + 1))
    return weighted + p * (z + 1) - alpha


def left_offset(partition: SubtreePartition | Sequence[int], p: int, alpha: int, i: int) -> int:
    """Total size of the blocks placed left of ``T_i`` in a type B layout."""
    sizes = _sizes(partition)
    _check_p(sizes, p, alpha)
    if not 1 <= i <= 2 * p - alpha:
        raise ValueError(f"subtree index {i} outside 1..{2 * p - alpha}")
    if i % 2:
        return sum(sizes[j] for j in range(1, i, 2))
    n = sum(sizes) + 1
    return n - sum(sizes[j] for j in range(2, i + 1, 2))


# -- solver --------------------------------------------------------------------


@lru_cache(maxsize=1 << 16)
def _bits(mask: int) -> tuple[int, ...]:
    """Indices of the set bits, ascending."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


_FREE = -1


class ShiloachSolver:
    """Memoised solver bound to one tree and one configuration.

    Not safe for concurrent use; build one instance per solve.
    """

    def __init__(self, tree: Tree, config: SolverConfig | None = None):
        self.tree = tree
        self.config = config or SolverConfig()
        if self.config.vstar_policy == "exhaustive" and tree.n > self.config.exhaustive_limit:
            raise ValueError(f"exhaustive v* policy limited to n <= {self.config.exhaustive_limit}")
        self._verts = tree.vertices
        self._index = {v: i for i, v in enumerate(self._verts)}
        self._adj = [0] * tree.n
        for u, v in tree.edges:
            iu, iv = self._index[u], self._index[v]
            self._adj[iu] |= 1 << iv
            self._adj[iv] |= 1 << iu
        self.full = (1 << tree.n) - 1
        self._memo: dict[tuple[int, int], tuple[int, tuple]] = {}

    # subproblem machinery

    def mask_of(self, vertices) -> int:
        m = 0
        for v in vertices:
            m |= 1 << self._index[v]
        return m

    def vertices_of(self, mask: int) -> list[int]:
        return [self._verts[i] for i in _bits(mask)]

    def _component(self, mask: int, start: int) -> int:
        comp = frontier = 1 << start
        adj = self._adj
        while frontier:
            nxt = 0
            for i in _bits(frontier):
                nxt |= adj[i]
            frontier = nxt & mask & ~comp
            comp |= frontier
        return comp

    def split(self, mask: int, center: int) -> list[tuple[int, int, int]]:
        """``(size, root, component mask)`` for each component of mask - center."""
        rest = mask & ~(1 << center)
        parts = []
        for r in _bits(self._adj[center] & rest):
            comp = self._component(rest, r)
            parts.append((comp.bit_count(), r, comp))
        parts.sort(key=lambda t: (-t[0], t[1]))
        return parts

    def centroid_of(self, mask: int) -> int:
        root = (mask & -mask).bit_length() - 1
        parent = {root: -1}
        order = [root]
        adj = self._adj
        for u in order:
            for w in _bits(adj[u] & mask):
                if w not in parent:
                    parent[w] = u
                    order.append(w)
        size = dict.fromkeys(order, 1)
        for u in reversed(order):
            if parent[u] >= 0:
                size[parent[u]] += size[u]
        n = len(order)
        best, best_v = n, root
        for u in _bits(mask):
            worst = n - size[u]
            for w in _bits(adj[u] & mask):
                if w != parent[u] and size[w] > worst:
                    worst = size[w]
            if worst < best:
                best, best_v = worst, u
        return best_v

    def _store(self, key, value):
        if len(self._memo) >= self.config.memo_limit:
            raise MemoLimitExceeded(
                f"more than {self.config.memo_limit} distinct subproblems; raise memo_limit"
            )
        self._memo[key] = value
        return value

    def free(self, mask: int) -> tuple[int, tuple]:
        """Optimum (as computed by the mode's formulas) of an unanchored subtree."""
        key = (mask, _FREE)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        if mask & (mask - 1) == 0:
            return self._store(key, (0, ("leaf",)))
        if self.config.vstar_policy == "centroid":
            centers = [self.centroid_of(mask)]
        else:
            centers = list(_bits(mask))
        best = None
        for c in centers:
            for cand in self._candidates(mask, c, 0):
                if best is None or cand[0] < best[0]:
                    best = cand
        return self._store(key, best)

    def anchored(self, mask: int, root: int) -> tuple[int, tuple]:
        """Optimum of a subtree anchored at ``root`` on its right end."""
        key = (mask, root)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        if mask & (mask - 1) == 0:
            return self._store(key, (0, ("leaf",)))
        best = None
        for cand in self._candidates(mask, root, 1):
            if best is None or cand[0] < best[0]:
                best = cand
        return self._store(key, best)

    def _candidates(self, mask: int, center: int, alpha: int):
        parts = self.split(mask, center)
        sizes = [s for s, _, _ in parts]
        # first candidate wins ties, so type B is kept whenever it is as good as A
        for p in p_candidates(sizes, alpha, self.config):
            yield self.type_b(mask, center, parts, alpha, p)
        yield self.type_a(mask, center, parts, alpha)

    def type_a(self, mask: int, center: int, parts, alpha: int) -> tuple[int, tuple]:
        n = mask.bit_count()
        n0, v0, m0 = parts[0]
        rest = mask & ~m0
        c0 = self.anchored(m0, v0)[0]
        blocks = [((m0, v0), False)]
        if alpha == 0:
            c1 = self.anchored(rest, center)[0]
            total = c0 + c1 + 1
            blocks.append(((rest, center), True))
        else:
            c1 = self.free(rest)[0]
            total = c0 + c1 + n - n0
            blocks.append(((rest, _FREE), False))
        return total, ("A", center, alpha, 0, tuple(blocks), tuple(parts))

    def type_b(self, mask: int, center: int, parts, alpha: int, p: int) -> tuple[int, tuple]:
        sizes = [s for s, _, _ in parts]
        last = 2 * p - alpha
        total = s_alpha(sizes, p, alpha, self.config.mode)
        star = mask
        left, right = [], []
        for i in range(1, last + 1):
            _, vi, mi = parts[i]
            star &= ~mi
            total += self.anchored(mi, vi)[0]
            if i % 2:
                left.append(((mi, vi), False))
            else:
                right.append(((mi, vi), True))
        total += self.free(star)[0]
        blocks = left + [((star, _FREE), False)] + right[::-1]
        return total, ("B", center, alpha, p, tuple(blocks), tuple(parts))

    # reconstruction

    def order(self, key: tuple[int, int]) -> list[int]:
        """Vertex indices in arrangement order for a solved subproblem."""
        _, dec = self._memo[key]
        if dec[0] == "leaf":
            return [key[0].bit_length() - 1]
        out: list[int] = []
        for sub, flip in dec[4]:
            seq = self.order(sub)
            out.extend(reversed(seq) if flip else seq)
        return out

    def trace(self, key: tuple[int, int]) -> list[dict[str, Any]]:
        """One record per internal node of the chosen decomposition, pre-order."""
        records: list[dict[str, Any]] = []
        self._trace(key, records)
        return records

    def _trace(self, key, records):
        reported, dec = self._memo[key]
        if dec[0] == "leaf":
            return
        kind, center, alpha, p, blocks, parts = dec
        sizes = [s for s, _, _ in parts]
        rec: dict[str, Any] = {
            "type": kind,
            "p": p if kind == "B" else None,
            "alpha": alpha,
            "center": self._verts[center],
            "anchor": None if key[1] == _FREE else self._verts[key[1]],
            "n": key[0].bit_count(),
            "sizes": sizes,
            "reported_cost": reported,
        }
        if kind == "B":
            local = self.order(key)
            where = {v: i for i, v in enumerate(local)}
            last = 2 * p - alpha
            star = key[0]
            for i in range(1, last + 1):
                star &= ~parts[i][2]
            rec["block_sizes"] = [sub[0].bit_count() for sub, _ in blocks]
            rec["star_size"] = star.bit_count()
            rec["left_offsets"] = {i: left_offset(sizes, p, alpha, i) for i in range(1, last + 1)}
            rec["block_starts"] = {
                i: min(where[b] for b in _bits(parts[i][2])) for i in range(1, last + 1)
            }
        records.append(rec)
        for sub, _ in blocks:
            self._trace(sub, records)

    def arrangement(self, key: tuple[int, int]) -> Arrangement:
        return Arrangement(tuple(self._verts[i] for i in self.order(key)))

    @property
    def memo_size(self) -> int:
        return len(self._memo)


def _deep(tree: Tree) -> None:
    need = max(10_000, 20 * tree.n)
    if sys.getrecursionlimit() < need:
        sys.setrecursionlimit(need)


def mla_free(tree: Tree, config: SolverConfig | None = None, *, with_trace: bool = True) -> SolveResult:
    """Minimum linear arrangement of a free tree."""
    _deep(tree)
    solver = ShiloachSolver(tree, config)
    reported, _ = solver.free(solver.full)
    key = (solver.full, _FREE)
    arr = solver.arrangement(key)
    return SolveResult(
        cost=reported,
        arrangement=arr,
        recomputed_cost=cost(tree, arr),
        mode=solver.config.mode,
        trace=solver.trace(key) if with_trace else [],
    )


def mla_anchored(
    tree: Tree,
    v: int,
    config: SolverConfig | None = None,
    side: AnchorSide | str = AnchorSide.RIGHT,
    *,
    with_trace: bool = True,
) -> SolveResult:
    """Minimum arrangement of ``tree`` anchored at ``v`` on the given side."""
    if v not in tree:
        raise TreeError(f"vertex {v} not in tree")
    side = AnchorSide(side)
    _deep(tree)
    solver = ShiloachSolver(tree, config)
    root = solver._index[v]
    reported, _ = solver.anchored(solver.full, root)
    key = (solver.full, root)
    arr = solver.arrangement(key)
    if side is AnchorSide.LEFT:
        arr = reverse(arr)
    return SolveResult(
        cost=reported,
        arrangement=arr,
        recomputed_cost=anchored_cost(tree, v, side, arr),
        mode=solver.config.mode,
        trace=solver.trace(key) if with_trace else [],
        anchor=v,
        side=side,
    )


def _local_parts(solver: ShiloachSolver, partition: SubtreePartition):
    idx = solver._index
    return [(s.size, idx[s.root], solver.mask_of(s.tree.vertices)) for s in partition.subtrees]


def solve_type_a(
    tree: Tree, partition: SubtreePartition, alpha: int, solver: ShiloachSolver | None = None
) -> tuple[int, Arrangement]:
    """Best type A layout of ``tree`` around ``partition.center``.

    With ``alpha=1`` the tree is anchored at the center on its right end.
    """
    if tree.n < 2:
        raise ValueError("type A needs at least two vertices")
    _deep(tree)
    solver = solver or ShiloachSolver(tree)
    mask = solver.mask_of(tree.vertices)
    total, dec = solver.type_a(mask, solver._index[partition.center], _local_parts(solver, partition), alpha)
    return total, _assemble(solver, dec)


def solve_type_b(
    tree: Tree, partition: SubtreePartition, alpha: int, p: int, solver: ShiloachSolver | None = None
) -> tuple[int, Arrangement]:
    _deep(tree)
    solver = solver or ShiloachSolver(tree)
    _check_p(partition.sizes, p, alpha)
    mask = solver.mask_of(tree.vertices)
    total, dec = solver.type_b(mask, solver._index[partition.center], _local_parts(solver, partition), alpha, p)
    return total, _assemble(solver, dec)


def _assemble(solver: ShiloachSolver, dec: tuple) -> Arrangement:
    out: list[int] = []
    for sub, flip in dec[4]:
        seq = solver.order(sub)
        out.extend(reversed(seq) if flip else seq)
    return Arrangement(tuple(solver._verts[i] for i in out))
