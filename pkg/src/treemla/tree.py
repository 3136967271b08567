"""Trees, linear arrangements and the two cost evaluators.

Vertex ids are positive integers. Trees read from edge-list files or built by
the generators are labelled ``1..n``; subtrees keep the ids of the tree they
were cut from.
"""

from __future__ import annotations

import enum
import heapq
import itertools
import random
from collections import Counter, deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence


class TreeError(ValueError):
    """Raised for malformed or invalid tree input."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ArrangementError(ValueError):
    pass


class AnchorSide(str, enum.Enum):
    LEFT = "left"
    RIGHT = "right"

    def reversed(self) -> "AnchorSide":
        return AnchorSide.RIGHT if self is AnchorSide.LEFT else AnchorSide.LEFT


class Tree:
    """An undirected tree over a set of integer vertex ids.

    Construction validates that the edges form a spanning tree of
    ``vertices``: exactly ``n - 1`` edges, no loops or duplicates, connected.
    Instances are immutable.
    """

    __slots__ = ("_vertices", "_adj", "_edges")

    def __init__(self, vertices: Iterable[int], edges: Iterable[tuple[int, int]]):
        verts = tuple(sorted(set(vertices)))
        if not verts:
            raise TreeError("a tree needs at least one vertex")
        adj: dict[int, list[int]] = {v: [] for v in verts}
        seen: set[tuple[int, int]] = set()
        for u, v in edges:
            if u not in adj or v not in adj:
                raise TreeError(f"edge ({u}, {v}) uses an unknown vertex")
            if u == v:
                raise TreeError(f"self-loop at vertex {u}")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise TreeError(f"duplicate edge ({u}, {v})")
            seen.add(key)
            adj[u].append(v)
            adj[v].append(u)
        if len(seen) != len(verts) - 1:
            raise TreeError(
                f"expected {len(verts) - 1} edges for {len(verts)} vertices, got {len(seen)}"
            )
        self._vertices = verts
        self._adj = {v: tuple(sorted(ns)) for v, ns in adj.items()}
        self._edges = tuple(sorted(seen))
        if len(_reachable(self._adj, verts[0])) != len(verts):
            raise TreeError("edges do not connect all vertices")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Tree":
        if n < 1:
            raise TreeError(f"n must be >= 1, got {n}")
        return cls(range(1, n + 1), edges)

    @property
    def n(self) -> int:
        return len(self._vertices)

    @property
    def vertices(self) -> tuple[int, ...]:
        return self._vertices

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        """Edges as ``(u, v)`` pairs with ``u < v``, sorted."""
        return self._edges

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._adj[v]

    @property
    def adjacency(self) -> Mapping[int, tuple[int, ...]]:
        return dict(self._adj)

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def __contains__(self, v: object) -> bool:
        return v in self._adj

    def __len__(self) -> int:
        return len(self._vertices)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Tree):
            return NotImplemented
        return self._vertices == other._vertices and self._edges == other._edges

    def __hash__(self) -> int:
        return hash((self._vertices, self._edges))

    def __repr__(self) -> str:
        return f"Tree(n={self.n}, edges={list(self._edges)})"

    def induced(self, vertices: Iterable[int]) -> "Tree":
        """The subtree induced by a connected vertex subset."""
        vs = set(vertices)
        missing = vs - self._adj.keys()
        if missing:
            raise TreeError(f"vertices not in tree: {sorted(missing)}")
        return Tree(vs, [(u, v) for u, v in self._edges if u in vs and v in vs])

    def relabel(self, mapping: Mapping[int, int]) -> "Tree":
        return Tree(
            (mapping[v] for v in self._vertices),
            ((mapping[u], mapping[v]) for u, v in self._edges),
        )

    def to_text(self) -> str:
        """Edge-list document; only valid for trees labelled ``1..n``."""
        if self._vertices != tuple(range(1, self.n + 1)):
            raise TreeError("edge-list format requires vertex ids 1..n")
        lines = [str(self.n)] + [f"{u} {v}" for u, v in self._edges]
        return "\n".join(lines) + "\n"


def _reachable(adj: Mapping[int, Sequence[int]], start: int) -> set[int]:
    seen = {start}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                queue.append(w)
    return seen


@dataclass(frozen=True)
class Arrangement:
    """A bijection from vertices onto ``[1 - base, n - base]``.

    Stored in inverse form: ``order[i]`` is the vertex at position
    ``i + 1 - base``.
    """

    order: tuple[int, ...]
    base: int = 0
    position: Mapping[int, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        order = tuple(self.order)
        object.__setattr__(self, "order", order)
        pos = {v: i + 1 - self.base for i, v in enumerate(order)}
        if len(pos) != len(order):
            raise ArrangementError("arrangement lists a vertex more than once")
        object.__setattr__(self, "position", pos)

    @classmethod
    def from_positions(cls, positions: Mapping[int, int]) -> "Arrangement":
        if not positions:
            raise ArrangementError("empty arrangement")
        lo = min(positions.values())
        inverse = {p: v for v, p in positions.items()}
        n = len(positions)
        if len(inverse) != n or max(inverse) - lo != n - 1:
            raise ArrangementError("positions are not a contiguous bijection")
        return cls(tuple(inverse[lo + i] for i in range(n)), base=1 - lo)

    @property
    def n(self) -> int:
        return len(self.order)

    @property
    def is_standard(self) -> bool:
        return self.base == 0

    def __getitem__(self, v: int) -> int:
        return self.position[v]

    def vertex_at(self, p: int) -> int:
        i = p - 1 + self.base
        if not 0 <= i < len(self.order):
            raise ArrangementError(f"position {p} out of range")
        return self.order[i]

    @cached_property
    def inverse(self) -> dict[int, int]:
        return {p: v for v, p in self.position.items()}

    def to_text(self) -> str:
        return " ".join(map(str, self.order)) + "\n"


def parse_arrangement(text: str) -> Arrangement:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if len(lines) != 1:
        raise ArrangementError("arrangement must be a single line of vertex ids")
    try:
        order = [int(tok) for tok in lines[0].split()]
    except ValueError as exc:
        raise ArrangementError(f"non-integer vertex id: {exc}") from None
    dup = [v for v, c in Counter(order).items() if c > 1]
    if dup:
        raise ArrangementError(f"duplicate vertex {dup[0]}")
    return Arrangement(tuple(order))


def parse_tree(text: str) -> Tree:
    """Parse an edge-list document: ``n`` then ``n - 1`` lines ``u v``."""
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise TreeError("empty input", line=1)
    try:
        n = int(lines[0].strip())
    except ValueError:
        raise TreeError(f"expected vertex count, got {lines[0]!r}", line=1) from None
    if n < 1:
        raise TreeError(f"n must be >= 1, got {n}", line=1)
    body = lines[1:]

    parent = list(range(n + 1))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    edges = []
    for lineno, line in enumerate(body, start=2):
        parts = line.split(" ")
        if len(parts) != 2:
            raise TreeError(f"expected 'u v', got {line!r}", line=lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise TreeError(f"expected 'u v', got {line!r}", line=lineno) from None
        for w in (u, v):
            if not 1 <= w <= n:
                raise TreeError(f"vertex {w} out of range 1..{n}", line=lineno)
        if u == v:
            raise TreeError(f"self-loop at vertex {u}", line=lineno)
        ru, rv = find(u), find(v)
        if ru == rv:
            raise TreeError(f"cycle detected at edge ({u}, {v})", line=lineno)
        parent[ru] = rv
        edges.append((u, v))
    # acyclic with fewer than n - 1 edges means more than one component
    if len(edges) < n - 1:
        raise TreeError(
            f"disconnected input: expected {n - 1} edge lines, got {len(edges)}", line=len(lines) + 1
        )
    return Tree.from_edges(n, edges)


# -- generators ---------------------------------------------------------------


def path_tree(n: int) -> Tree:
    if n < 1:
        raise TreeError(f"path needs n >= 1, got {n}")
    return Tree.from_edges(n, [(i, i + 1) for i in range(1, n)])


def star_tree(n: int) -> Tree:
    """Star with center 1 and leaves ``2..n``."""
    if n < 1:
        raise TreeError(f"star needs n >= 1, got {n}")
    return Tree.from_edges(n, [(1, i) for i in range(2, n + 1)])


def caterpillar_tree(spine: int, legs: int) -> Tree:
    """A path of ``spine`` vertices, each carrying ``legs`` pendant leaves.

    Spine vertices are ``1..spine``; leaves are numbered after, spine vertex
    by spine vertex.
    """
    if spine < 1 or legs < 0:
        raise TreeError(f"caterpillar needs spine >= 1 and legs >= 0, got {spine}, {legs}")
    edges = [(i, i + 1) for i in range(1, spine)]
    nxt = spine + 1
    for s in range(1, spine + 1):
        for _ in range(legs):
            edges.append((s, nxt))
            nxt += 1
    return Tree.from_edges(nxt - 1, edges)


def complete_kary_tree(arity: int, levels: int) -> Tree:
    """Complete ``arity``-ary tree with ``levels`` levels, labelled breadth-first."""
    if arity < 1 or levels < 1:
        raise TreeError(f"complete tree needs arity >= 1 and levels >= 1, got {arity}, {levels}")
    if arity == 1:
        return path_tree(levels)
    n = (arity**levels - 1) // (arity - 1)
    return Tree.from_edges(n, [((c - 2) // arity + 1, c) for c in range(2, n + 1)])


def complete_binary_tree(levels: int) -> Tree:
    return complete_kary_tree(2, levels)


def prufer_decode(seq: Sequence[int], n: int | None = None) -> Tree:
    """Labelled tree on ``1..n`` for a Prüfer sequence of length ``n - 2``."""
    if n is None:
        n = len(seq) + 2
    if n == 1:
        if seq:
            raise TreeError("a single-vertex tree has an empty Prüfer sequence")
        return Tree.from_edges(1, [])
    if len(seq) != n - 2:
        raise TreeError(f"Prüfer sequence for n={n} must have length {n - 2}")
    degree = [1] * (n + 1)
    for x in seq:
        if not 1 <= x <= n:
            raise TreeError(f"Prüfer entry {x} out of range 1..{n}")
        degree[x] += 1
    leaves = [v for v in range(1, n + 1) if degree[v] == 1]
    heapq.heapify(leaves)
    edges = []
    for x in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, x))
        degree[x] -= 1
        if degree[x] == 1:
            heapq.heappush(leaves, x)
    edges.append((heapq.heappop(leaves), heapq.heappop(leaves)))
    return Tree.from_edges(n, edges)


def iter_labeled_trees(n: int) -> Iterator[Tree]:
    """Every labelled tree on ``1..n`` (``n ** (n - 2)`` of them)."""
    if n <= 2:
        yield prufer_decode((), n)
        return
    for seq in itertools.product(range(1, n + 1), repeat=n - 2):
        yield prufer_decode(seq, n)


def random_tree(n: int, seed: int) -> Tree:
    """Uniform random labelled tree via a seeded Prüfer sequence."""
    if n < 1:
        raise TreeError(f"random tree needs n >= 1, got {n}")
    rng = random.Random(seed)
    return prufer_decode([rng.randint(1, n) for _ in range(max(n - 2, 0))], n)


GENERATOR_KINDS = ("path", "star", "caterpillar", "complete_binary", "complete_kary", "random_prufer")


def generate_tree(kind: str, *params: int, seed: int = 0) -> Tree:
    """Build a tree by kind name.

    ``path n``, ``star n``, ``caterpillar spine legs``, ``complete_binary k``,
    ``complete_kary arity k``, ``random_prufer n`` (uses ``seed``).
    """
    kind = kind.replace("-", "_")
    builders = {
        "path": (path_tree, 1),
        "star": (star_tree, 1),
        "caterpillar": (caterpillar_tree, 2),
        "complete_binary": (complete_binary_tree, 1),
        "complete_kary": (complete_kary_tree, 2),
    }
    if kind == "random_prufer":
        if len(params) != 1:
            raise TreeError("random_prufer takes exactly one parameter (n)")
        return random_tree(params[0], seed)
    if kind not in builders:
        raise TreeError(f"unknown tree kind {kind!r}")
    fn, arity = builders[kind]
    if len(params) != arity:
        raise TreeError(f"{kind} takes {arity} parameter(s), got {len(params)}")
    return fn(*params)


# -- costs ---------------------------------------------------------------------


def _check_cover(tree: Tree, arr: Arrangement) -> None:
    if arr.n != tree.n or any(v not in tree for v in arr.order):
        raise ArrangementError("arrangement does not cover exactly the tree's vertices")


def cost(tree: Tree, arr: Arrangement) -> int:
    """Sum of edge lengths ``|pi(u) - pi(v)|``."""
    _check_cover(tree, arr)
    pos = arr.position
    return sum(abs(pos[u] - pos[v]) for u, v in tree.edges)


def anchored_cost(
    tree: Tree, v: int, side: AnchorSide | str, arr: Arrangement, *, allow_shifted: bool = False
) -> int:
    """Cost plus the anchor length from ``v`` to the chosen end.

    A right anchor adds ``n - pi(v)``, a left anchor ``pi(v) - 1``. ``arr``
    must be standard unless ``allow_shifted`` is set, in which case the same
    expressions are applied to the shifted positions as they are.
    """
    side = AnchorSide(side)
    if v not in tree:
        raise TreeError(f"vertex {v} not in tree")
    if not arr.is_standard and not allow_shifted:
        raise ArrangementError("anchored cost needs a standard arrangement over [1, n]")
    base = cost(tree, arr)
    if side is AnchorSide.RIGHT:
        return base + tree.n - arr[v]
    return base + arr[v] - 1


def shift(arr: Arrangement, a: int) -> Arrangement:
    """``pi_a(v) = pi(v) - a``."""
    return Arrangement(arr.order, arr.base + a)


def reverse(arr: Arrangement) -> Arrangement:
    """Mirror a standard arrangement: ``pi'(v) = n + 1 - pi(v)``."""
    if not arr.is_standard:
        raise ArrangementError("reverse needs a standard arrangement over [1, n]")
    return Arrangement(arr.order[::-1])


# -- decomposition --------------------------------------------------------------


@dataclass(frozen=True)
class Subtree:
    tree: Tree
    size: int
    root: int


@dataclass(frozen=True)
class SubtreePartition:
    """Components of ``T - center`` sorted by decreasing size.

    Equal sizes are ordered by smallest root id.
    """

    center: int
    subtrees: tuple[Subtree, ...]

    @property
    def k(self) -> int:
        """Index of the last subtree; ``-1`` when there are none."""
        return len(self.subtrees) - 1

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(s.size for s in self.subtrees)

    @property
    def n(self) -> int:
        return sum(self.sizes) + 1


def remove_center(tree: Tree, v: int) -> SubtreePartition:
    if v not in tree:
        raise TreeError(f"vertex {v} not in tree")
    parts = []
    for r in tree.neighbors(v):
        seen = {v, r}
        queue = deque([r])
        while queue:
            u = queue.popleft()
            for w in tree.neighbors(u):
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        seen.discard(v)
        parts.append(Subtree(tree.induced(seen), len(seen), r))
    parts.sort(key=lambda s: (-s.size, s.root))
    return SubtreePartition(v, tuple(parts))


def centroid(tree: Tree) -> int:
    """Vertex minimising the largest component of ``T - v``; smallest id on ties."""
    root = tree.vertices[0]
    parent = {root: None}
    order = [root]
    for u in order:
        for w in tree.neighbors(u):
            if w not in parent:
                parent[w] = u
                order.append(w)
    size = dict.fromkeys(order, 1)
    for u in reversed(order):
        p = parent[u]
        if p is not None:
            size[p] += size[u]
    n = tree.n
    best, best_v = n, root
    for u in tree.vertices:
        worst = n - size[u]
        for w in tree.neighbors(u):
            if w != parent[u]:
                worst = max(worst, size[w])
        if worst < best:
            best, best_v = worst, u
    return best_v
