"""Exact reference solvers independent of the Shiloach recursion.

``subset_dp`` uses the prefix-cut identity: in any arrangement the total
edge length equals the sum, over the ``n - 1`` proper prefixes, of the number
of edges leaving the prefix. Minimising over prefix chains is a DP over vertex
subsets. ``factorial`` enumerates every permutation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .tree import AnchorSide, Arrangement, Tree, TreeError, anchored_cost, cost

SUBSET_DP_MAX_N = 24
FACTORIAL_MAX_N = 9


class OracleBoundError(ValueError):
    pass


@dataclass(frozen=True)
class OracleResult:
    cost: int
    arrangement: Arrangement
    method: str


@lru_cache(maxsize=None)
def _layers(n: int) -> tuple[np.ndarray, ...]:
    masks = np.arange(1 << n, dtype=np.int64)
    pop = np.zeros(1 << n, dtype=np.int64)
    for b in range(n):
        pop += (masks >> b) & 1
    return tuple(masks[pop == c] for c in range(n + 1))


def _prefix_weights(n: int, edges: Sequence[tuple[int, int]], anchor: int | None, side: AnchorSide) -> np.ndarray:
    """Per-subset cost contributed when the subset is a proper prefix."""
    masks = np.arange(1 << n, dtype=np.int64)
    w = np.zeros(1 << n, dtype=np.int64)
    for u, v in edges:
        w += ((masks >> u) ^ (masks >> v)) & 1
    if anchor is not None:
        inside = (masks >> anchor) & 1
        # right anchor crosses every prefix that contains v; left, every one that doesn't
        w += inside if side is AnchorSide.RIGHT else 1 - inside
    w[0] = 0
    w[-1] = 0
    return w


def _subset_dp(tree: Tree, anchor: int | None, side: AnchorSide) -> tuple[int, Arrangement]:
    n = tree.n
    verts = tree.vertices
    idx = {v: i for i, v in enumerate(verts)}
    edges = [(idx[u], idx[v]) for u, v in tree.edges]
    w = _prefix_weights(n, edges, None if anchor is None else idx[anchor], side)
    big = np.iinfo(np.int64).max // 4
    dp = np.full(1 << n, big, dtype=np.int64)
    dp[0] = 0
    layers = _layers(n)
    for c in range(1, n + 1):
        layer = layers[c]
        best = np.full(layer.shape, big, dtype=np.int64)
        for b in range(n):
            has = ((layer >> b) & 1).astype(bool)
            cand = np.where(has, dp[layer ^ (1 << b)], big)
            np.minimum(best, cand, out=best)
        dp[layer] = w[layer] + best
    order = []
    s = (1 << n) - 1
    while s:
        for b in range(n):
            bit = 1 << b
            if s & bit and dp[s ^ bit] + w[s] == dp[s]:
                order.append(verts[b])
                s ^= bit
                break
    order.reverse()
    return int(dp[-1]), Arrangement(tuple(order))


def _factorial(tree: Tree, anchor: int | None, side: AnchorSide) -> tuple[int, Arrangement]:
    best = None
    for perm in itertools.permutations(tree.vertices):
        arr = Arrangement(perm)
        c = cost(tree, arr) if anchor is None else anchored_cost(tree, anchor, side, arr)
        if best is None or c < best[0]:
            best = (c, arr)
    return best


def _run(tree: Tree, anchor: int | None, side: AnchorSide, method: str) -> OracleResult:
    if method == "subset_dp":
        bound, fn = SUBSET_DP_MAX_N, _subset_dp
    elif method == "factorial":
        bound, fn = FACTORIAL_MAX_N, _factorial
    else:
        raise ValueError(f"unknown oracle method {method!r}")
    if tree.n > bound:
        raise OracleBoundError(f"{method} oracle limited to n <= {bound}, got n={tree.n}")
    c, arr = fn(tree, anchor, side)
    return OracleResult(c, arr, method)


def exact_mla(tree: Tree, method: str = "subset_dp") -> OracleResult:
    return _run(tree, None, AnchorSide.RIGHT, method)


def exact_anchored_mla(
    tree: Tree, v: int, side: AnchorSide | str = AnchorSide.RIGHT, method: str = "subset_dp"
) -> OracleResult:
    if v not in tree:
        raise TreeError(f"vertex {v} not in tree")
    return _run(tree, v, AnchorSide(side), method)


def exact_mla_costs(trees: Sequence[Tree], chunk: int = 16384) -> np.ndarray:
    """Optimal costs for many trees of the same size, DP vectorised across trees.

    Costs only, no witnesses. Trees must share one vertex set.
    """
    if not trees:
        return np.zeros(0, dtype=np.int64)
    n = trees[0].n
    if n > 12:
        raise OracleBoundError("batched oracle is meant for small trees (n <= 12)")
    out = np.empty(len(trees), dtype=np.int64)
    if n == 1:
        out[:] = 0
        return out
    verts = trees[0].vertices
    idx = {v: i for i, v in enumerate(verts)}
    bits = ((np.arange(1 << n)[None, :] >> np.arange(n)[:, None]) & 1).astype(bool)
    order = [int(m) for layer in _layers(n)[1:] for m in layer]
    for lo in range(0, len(trees), chunk):
        batch = trees[lo : lo + chunk]
        if any(t.vertices != verts for t in batch):
            raise ValueError("batched oracle needs trees over the same vertex set")
        e = np.array([[(idx[u], idx[v]) for u, v in t.edges] for t in batch], dtype=np.int64)
        # rows are subsets, columns are trees
        w = np.zeros((1 << n, len(batch)), dtype=np.int16)
        for j in range(n - 1):
            w += (bits[e[:, j, 0]] ^ bits[e[:, j, 1]]).T
        dp = np.zeros_like(w)
        for s in order:
            m = s & (s - 1)
            best = dp[s ^ (s & -s)].copy()
            while m:
                low = m & -m
                np.minimum(best, dp[s ^ low], out=best)
                m ^= low
            dp[s] = best + w[s]
        out[lo : lo + len(batch)] = dp[-1]
    return out


def closed_form_complete_binary(k: int) -> int:
    """Known optimum for the complete binary tree with ``k`` levels, ``k >= 2``.

    ``2^k (k/3 + 5/18) + (-1)^k 2/9 - 2``, evaluated exactly. ``k = 1`` is
    rejected because the expression gives -1 for a single vertex.
    """
    if k < 2:
        raise ValueError(f"closed form valid for k >= 2 only, got k={k}")
    value = Fraction(2**k) * (Fraction(k, 3) + Fraction(5, 18)) + (-1) ** k * Fraction(2, 9) - 2
    if value.denominator != 1:
        raise ArithmeticError(f"closed form is not integral at k={k}: {value}")
    return int(value)


def closed_form_fraction(k: int) -> Fraction:
    """The raw rational value of the closed form, for any integer ``k``."""
    return Fraction(2**k) * (Fraction(k, 3) + Fraction(5, 18)) + (-1) ** k * Fraction(2, 9) - 2
