import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from treemla import (
    AnchorSide,
    Arrangement,
    ArrangementError,
    Tree,
    TreeError,
    anchored_cost,
    centroid,
    cost,
    generate_tree,
    iter_labeled_trees,
    parse_arrangement,
    parse_tree,
    prufer_decode,
    remove_center,
    reverse,
    shift,
)

from conftest import trees, trees_with_arrangement


# -- parsing -------------------------------------------------------------------


def test_parse_two_vertices():
    t = parse_tree("2\n1 2")
    assert t.n == 2 and t.edges == ((1, 2),)


def test_parse_single_vertex():
    t = parse_tree("1\n")
    assert t.n == 1 and t.edges == ()


def test_parse_cycle_reports_line():
    with pytest.raises(TreeError, match="cycle") as info:
        parse_tree("3\n1 2\n1 3\n2 3")
    assert info.value.line is not None


@pytest.mark.parametrize(
    "text, needle",
    [
        ("x\n", "vertex count"),
        ("0\n", "n must be"),
        ("3\n1 2\n", "disconnected"),
        ("3\n1 2\n1 4\n", "out of range"),
        ("3\n1 2\n1\n", "expected 'u v'"),
        ("3\n1 2\n2 2\n", "self-loop"),
        ("4\n1 2\n2 1\n3 4\n", "cycle"),
    ],
)
def test_parse_errors(text, needle):
    with pytest.raises(TreeError, match=needle):
        parse_tree(text)


def test_round_trip_text():
    t = generate_tree("random_prufer", 15, seed=3)
    assert parse_tree(t.to_text()) == t


def test_tree_rejects_bad_edge_sets():
    with pytest.raises(TreeError, match="duplicate"):
        Tree([1, 2, 3], [(1, 2), (2, 1)])
    with pytest.raises(TreeError, match="connect"):
        Tree([1, 2, 3, 4], [(1, 2), (2, 3), (3, 1)])
    with pytest.raises(TreeError, match="unknown"):
        Tree([1, 2], [(1, 3)])


@given(trees(max_n=15))
def test_constructed_trees_are_trees(t):
    assert len(t.edges) == t.n - 1
    seen, stack = {1}, [1]
    while stack:
        u = stack.pop()
        for w in t.neighbors(u):
            assert u in t.neighbors(w)
            if w not in seen:
                seen.add(w)
                stack.append(w)
    assert len(seen) == t.n


# -- generators ----------------------------------------------------------------


def test_complete_binary_two_levels():
    t = generate_tree("complete_binary", 2)
    assert t.n == 3 and t.edges == ((1, 2), (1, 3))


def test_path_labels():
    assert generate_tree("path", 5).edges == ((1, 2), (2, 3), (3, 4), (4, 5))


def test_random_prufer_deterministic():
    assert generate_tree("random_prufer", 6, seed=11) == generate_tree("random_prufer", 6, seed=11)
    assert generate_tree("random-prufer", 40, seed=1) != generate_tree("random-prufer", 40, seed=2)


def test_star_and_caterpillar_and_kary():
    assert generate_tree("star", 5).degree(1) == 4
    cat = generate_tree("caterpillar", 3, 2)
    assert cat.n == 9 and cat.degree(2) == 4
    kary = generate_tree("complete_kary", 3, 3)
    assert kary.n == 13 and kary.degree(1) == 3 and kary.degree(2) == 4


@pytest.mark.parametrize("args", [("complete_binary", 0), ("path", 0), ("star", -1), ("bogus", 3), ("path",)])
def test_generator_errors(args):
    with pytest.raises(TreeError):
        generate_tree(*args)


def test_complete_binary_bfs_labels():
    t = generate_tree("complete_binary", 4)
    for c in range(2, 16):
        assert c // 2 in t.neighbors(c)


@pytest.mark.parametrize("n, count", [(1, 1), (2, 1), (3, 3), (4, 16), (5, 125)])
def test_cayley_counts(n, count):
    labelled = set(iter_labeled_trees(n))
    assert len(labelled) == count


# -- costs ---------------------------------------------------------------------


def test_cost_examples():
    path3 = generate_tree("path", 3)
    assert cost(path3, Arrangement((1, 2, 3))) == 2
    star = Tree([1, 2, 3, 4], [(1, 2), (1, 3), (1, 4)])
    # center at 2, leaves at 1, 3, 4
    assert cost(star, Arrangement.from_positions({1: 2, 2: 1, 3: 3, 4: 4})) == 4
    assert cost(Tree([7], []), Arrangement((7,))) == 0


def test_cost_mismatch():
    with pytest.raises(ArrangementError):
        cost(generate_tree("path", 3), Arrangement((1, 2)))
    with pytest.raises(ArrangementError):
        cost(generate_tree("path", 3), Arrangement((1, 2, 4)))


def test_anchored_cost_examples():
    ab = generate_tree("path", 2)
    assert anchored_cost(ab, 1, "right", Arrangement((1, 2))) == 2
    assert anchored_cost(ab, 1, "right", Arrangement((2, 1))) == 1
    t = generate_tree("star", 5)
    arr = Arrangement((1, 3, 2, 5, 4))
    assert anchored_cost(t, 1, AnchorSide.LEFT, arr) == cost(t, arr)


def test_anchored_cost_errors():
    ab = generate_tree("path", 2)
    with pytest.raises(TreeError):
        anchored_cost(ab, 3, "right", Arrangement((1, 2)))
    with pytest.raises(ArrangementError):
        anchored_cost(ab, 1, "right", shift(Arrangement((1, 2)), 1))


def test_shift_examples():
    pi = Arrangement.from_positions({1: 2, 2: 1, 3: 3})
    moved = shift(pi, 1)
    assert dict(moved.position) == {1: 1, 2: 0, 3: 2}
    assert shift(pi, 0) == pi
    assert shift(shift(pi, 5), -5) == pi


def test_reverse_examples():
    pi = Arrangement((1, 2, 3))
    assert reverse(pi).order == (3, 2, 1)
    assert reverse(reverse(pi)) == pi
    with pytest.raises(ArrangementError):
        reverse(shift(pi, 2))


def test_arrangement_validation():
    with pytest.raises(ArrangementError):
        Arrangement((1, 1, 3))
    with pytest.raises(ArrangementError):
        Arrangement.from_positions({1: 1, 2: 3})
    with pytest.raises(ArrangementError, match="duplicate"):
        parse_arrangement("1 1 3\n")
    arr = Arrangement((4, 2, 9))
    assert arr.inverse == {1: 4, 2: 2, 3: 9}
    assert arr.vertex_at(3) == 9


@given(trees_with_arrangement(), st.integers(-50, 50))
def test_shift_preserves_cost(ta, a):
    t, arr = ta
    assert cost(t, shift(arr, a)) == cost(t, arr)


@given(trees_with_arrangement())
def test_reversal_symmetry(ta):
    t, arr = ta
    assert cost(t, reverse(arr)) == cost(t, arr)
    for v in t.vertices[:3]:
        assert anchored_cost(t, v, "left", arr) == anchored_cost(t, v, "right", reverse(arr))


@given(trees_with_arrangement(), st.randoms(use_true_random=False))
def test_relabelling_invariance(ta, r):
    t, arr = ta
    labels = list(range(100, 100 + t.n))
    r.shuffle(labels)
    mapping = dict(zip(t.vertices, labels))
    t2 = t.relabel(mapping)
    arr2 = Arrangement(tuple(mapping[v] for v in arr.order))
    assert cost(t2, arr2) == cost(t, arr)


@given(trees_with_arrangement())
def test_lower_bound(ta):
    t, arr = ta
    assert cost(t, arr) >= t.n - 1


# -- decomposition ---------------------------------------------------------------


def test_remove_center_star():
    part = remove_center(generate_tree("star", 5), 1)
    assert part.sizes == (1, 1, 1, 1) and part.k == 3
    assert [s.root for s in part.subtrees] == [2, 3, 4, 5]


def test_remove_center_path():
    part = remove_center(generate_tree("path", 5), 3)
    assert part.sizes == (2, 2)
    assert [s.root for s in part.subtrees] == [2, 4]
    assert part.subtrees[1].tree.vertices == (4, 5)


def test_remove_center_single_vertex():
    part = remove_center(generate_tree("path", 1), 1)
    assert part.subtrees == () and part.k == -1


@given(trees(min_n=2, max_n=14), st.data())
def test_remove_center_properties(t, data):
    v = data.draw(st.sampled_from(t.vertices))
    part = remove_center(t, v)
    assert sum(part.sizes) == t.n - 1
    assert list(part.sizes) == sorted(part.sizes, reverse=True)
    covered = set()
    for s in part.subtrees:
        assert s.root in t.neighbors(v)
        assert covered.isdisjoint(s.tree.vertices)
        covered |= set(s.tree.vertices)
    assert v not in covered


def test_centroid_examples():
    assert centroid(generate_tree("path", 5)) == 3
    assert centroid(generate_tree("path", 4)) == 2
    assert centroid(generate_tree("star", 9)) == 1
    assert centroid(Tree([5, 6, 7], [(5, 7), (7, 6)])) == 7


@settings(max_examples=50)
@given(trees(max_n=14))
def test_centroid_minimises_largest_component(t):
    def worst(v):
        return max(remove_center(t, v).sizes, default=0)

    c = centroid(t)
    best = min(worst(v) for v in t.vertices)
    assert worst(c) == best
    assert c == min(v for v in t.vertices if worst(v) == best)


def test_prufer_decode_known():
    # sequence (4, 4, 4, 5) on 6 vertices
    t = prufer_decode([4, 4, 4, 5])
    assert t.edges == ((1, 4), (2, 4), (3, 4), (4, 5), (5, 6))
