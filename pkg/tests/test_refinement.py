import pytest
from hypothesis import given, settings as hyp_settings
from hypothesis import strategies as st

from ktinhofer.corpus import random_graph, random_relabel, random_sparse_graph
from ktinhofer.errors import InvalidArgumentError, UnstableColoringError
from ktinhofer.gadgets import gen_cfi
from ktinhofer.graph import ARRAY_MIN_VERTICES, ColoredGraph, builtin
from ktinhofer.refinement import (
    RESERVED_BASE,
    StableColoring,
    dump_coloring,
    dump_quotient,
    ind,
    individualize,
    is_reserved,
    p_set,
    quotient,
    refine,
    refine_joint,
    refine_seq,
)


@st.composite
def graphs(draw, max_n=9):
    n = draw(st.integers(min_value=1, max_value=max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    mults = draw(st.lists(st.integers(1, 2), min_size=len(chosen), max_size=len(chosen)))
    colors = draw(st.lists(st.integers(0, 2), min_size=n, max_size=n))
    return ColoredGraph(n, [(u, v, k) for (u, v), k in zip(chosen, mults)], colors)


def test_cycle_is_stable_immediately(c6):
    pi = refine(c6)
    assert pi.assignment == (0,) * 6
    assert pi.round_count == 1
    assert not pi.is_discrete


def test_path_naming():
    pi = refine(builtin("path", [3]))
    # ends sort before the middle: (0, 1) < (0, 2)
    assert pi.assignment == (1, 2, 1)
    assert pi.round_count == 2
    assert pi.next_id == 3
    assert refine(builtin("path", [4])).assignment == (1, 2, 2, 1)


def test_cfi_gadget_is_stable_with_four_classes():
    g, _ = gen_cfi(3)
    pi = refine(g)
    assert len(pi.classes) == 4
    assert pi.round_count == 1
    assert pi.assignment == (0, 0, 1, 1, 2, 2, 3, 3, 3, 3)


def test_initial_colors_are_ranked():
    g = ColoredGraph(3, [], [7, 3, 7])
    assert refine(g).assignment == (1, 0, 1)


def test_individualize_uses_reserved_identifier():
    pi = refine_seq(builtin("path", [3]), [0])
    assert pi.assignment == (ind(1), 2, 1)
    assert pi.is_discrete
    assert pi.depth == 1
    assert is_reserved(ind(1))
    assert ind(1) == RESERVED_BASE - 1
    assert not is_reserved(pi.next_id)


def test_refine_seq_rejects_repeats(c6):
    with pytest.raises(InvalidArgumentError):
        refine_seq(c6, [1, 1])


def test_individualize_rejects_bad_vertex(c6):
    with pytest.raises(InvalidArgumentError):
        individualize(refine(c6), [6])


def test_p_set_partition():
    c4 = builtin("cycle", [4])
    pi = p_set(c4, [2, 0])
    assert pi.assignment == (ind(1), 0, ind(2), 0)
    assert pi.partition() == frozenset({frozenset({0}), frozenset({2}), frozenset({1, 3})})


def test_p_set_independent_of_reserved_assignment():
    g = random_graph(8, 0.4, seed=3)
    s = [1, 4, 6]
    swapped = list(refine(g).assignment)
    for v, step in zip(s, (3, 1, 2)):
        swapped[v] = ind(step)
    assert refine(g, start=swapped).partition() == p_set(g, s).partition()


def test_p_set_empty_is_refine(c6):
    assert p_set(c6, []).assignment == refine(c6).assignment


def test_quotient_and_dumps():
    g = builtin("path", [3])
    pi = refine(g)
    q = quotient(g, pi)
    assert q.nodes == ((1, 2), (2, 1))
    assert q.arc(1, 2) == 1
    assert q.arc(2, 1) == 2
    assert q.arc(1, 1) == 0
    assert dump_coloring(pi) == "v 1 1\nv 2 2\nv 3 1\n"
    assert dump_quotient(q) == "q 1 2\nq 2 1\na 1 2 1\na 2 1 2\n"


def test_quotient_rejects_unstable_coloring():
    g = builtin("path", [3])
    with pytest.raises(UnstableColoringError):
        quotient(g, StableColoring(g, (0, 0, 0), 0, 1))


def test_joint_refinement_shares_identifiers(c6):
    h, sigma = random_relabel(c6, seed=5)
    pi, offset = refine_joint(c6, h)
    assert offset == 6
    assert pi.graph.n == 12
    assert set(pi.assignment[:6]) == set(pi.assignment[6:])


def test_unknown_engine(c6):
    with pytest.raises(InvalidArgumentError):
        refine(c6, engine="turbo")


@hyp_settings(max_examples=60, deadline=None)
@given(graphs(), st.integers(min_value=0, max_value=2**16))
def test_relabel_invariance(g, seed):
    h, sigma = random_relabel(g, seed)
    left, right = refine(g).assignment, refine(h).assignment
    assert all(left[v] == right[sigma[v]] for v in range(g.n))


@hyp_settings(max_examples=60, deadline=None)
@given(graphs())
def test_engines_agree(g):
    fast = refine(g, engine="fast")
    naive = refine(g, engine="naive")
    assert fast.assignment == naive.assignment
    assert fast.round_count == naive.round_count
    if fast.non_singleton():
        v = fast.classes[fast.non_singleton()[0]][0]
        assert individualize(fast, [v], engine="fast").assignment == individualize(naive, [v], engine="naive").assignment


def _same(a, b):
    return (a.assignment, a.round_count, a.next_id) == (b.assignment, b.round_count, b.next_id)


def test_engines_agree_on_array_sized_graphs():
    g = random_sparse_graph(1200, 3000, seed=3)
    h, sigma = random_relabel(g, seed=5)
    fast, offset = refine_joint(g, h, engine="fast")
    naive, _ = refine_joint(g, h, engine="naive")
    assert fast.graph.n >= ARRAY_MIN_VERTICES
    assert _same(fast, naive)

    v = next(u for u in fast.classes[fast.non_singleton()[0]] if u < offset)
    pair = [v, offset + sigma[v]]
    assert _same(individualize(fast, pair, engine="fast"), individualize(naive, pair, engine="naive"))
    assert _same(individualize(fast, [v], engine="fast"), individualize(naive, [v], engine="naive"))
    assert _same(p_set(fast.graph, pair, engine="fast"), p_set(fast.graph, pair, engine="naive"))


def test_engines_agree_on_colored_array_sized_graph():
    g = random_sparse_graph(2500, 5000, seed=8)
    colored = ColoredGraph(g.n, g.edges, [v % 3 for v in range(g.n)])
    assert _same(refine(colored, engine="fast"), refine(colored, engine="naive"))


@hyp_settings(max_examples=60, deadline=None)
@given(graphs())
def test_result_is_stable_and_refines_input(g):
    pi = refine(g)
    quotient(g, pi)
    for cell in pi.cells():
        assert len({g.colors[v] for v in cell}) == 1


@hyp_settings(max_examples=60, deadline=None)
@given(graphs(), st.integers(min_value=0, max_value=8))
def test_quotient_arcs_balance(g, v):
    pi = refine(g)
    if pi.non_singleton():
        pi = individualize(pi, [v % g.n])
    q = quotient(g, pi)
    colors = [c for c, _ in q.nodes]
    for ci in colors:
        for cj in colors:
            assert q.size(ci) * q.arc(ci, cj) == q.size(cj) * q.arc(cj, ci)
