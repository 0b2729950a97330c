import networkx as nx
import pytest

from ktinhofer.config import Settings
from ktinhofer.corpus import random_graph, random_relabel
from ktinhofer.errors import InvalidArgumentError, ParityError, SizeBoundError
from ktinhofer.gadgets import gen_cfi
from ktinhofer.graph import ColoredGraph, builtin
from ktinhofer.refinement import refine
from ktinhofer.groups import (
    automorphisms,
    brute_force_automorphisms,
    cycle_notation,
    exact_iso,
    flip_parity_report,
    is_refinable,
    orbit_partition,
    stabilizer_orbits,
    verify_isomorphism,
)


def to_nx(g):
    out = nx.Graph()
    for v, c in enumerate(g.colors):
        out.add_node(v, color=c)
    for u, v, k in g.edges:
        out.add_edge(u, v, mult=k)
    return out


def nx_isomorphic(g, h):
    return nx.is_isomorphic(
        to_nx(g),
        to_nx(h),
        node_match=lambda a, b: a["color"] == b["color"],
        edge_match=lambda a, b: a["mult"] == b["mult"],
    )


def test_cycle_group(c6):
    auts = automorphisms(c6)
    assert len(auts) == 12
    assert auts.perms[0] == tuple(range(6))
    assert auts.perms == brute_force_automorphisms(c6).perms
    assert orbit_partition(auts).classes == (tuple(range(6)),)


def test_frucht_is_asymmetric(frucht):
    auts = automorphisms(frucht)
    assert len(auts) == 1
    assert len(orbit_partition(auts).classes) == 12
    assert not is_refinable(frucht)


def test_refinable(c6):
    assert is_refinable(c6)
    assert is_refinable(builtin("path", [5]))


def test_stabilizer_orbits(c6):
    assert stabilizer_orbits(c6, [0]).classes == ((0,), (1, 5), (2, 4), (3,))
    auts = automorphisms(c6, [0])
    assert len(auts) == 2
    assert (0, 5, 4, 3, 2, 1) in auts


def test_brute_force_agrees_on_colored_graph():
    g = ColoredGraph(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3, 2)], [0, 1, 1, 0, 1, 1])
    assert automorphisms(g).perms == brute_force_automorphisms(g).perms
    assert automorphisms(g, [1]).perms == brute_force_automorphisms(g, [1]).perms


def test_brute_force_bound():
    with pytest.raises(SizeBoundError):
        brute_force_automorphisms(builtin("cycle", [9]))


def test_enumeration_bound_names_variable():
    with pytest.raises(SizeBoundError) as info:
        automorphisms(builtin("path", [65]), settings=Settings(enum_bound=64))
    assert info.value.env_var == "KTIN_ENUM_BOUND"
    assert "KTIN_ENUM_BOUND" in str(info.value)


def test_group_cap():
    with pytest.raises(SizeBoundError, match="KTIN_GROUP_CAP"):
        automorphisms(builtin("complete", [5]), settings=Settings(group_cap=10))


def test_exact_iso_relabeled(c6):
    h, _ = random_relabel(c6, seed=11)
    bijection = exact_iso(c6, h)
    assert bijection is not None
    assert verify_isomorphism(c6, h, bijection)


def test_exact_iso_rejects_two_triangles(c6):
    triangles = ColoredGraph(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)])
    assert exact_iso(c6, triangles) is None


@pytest.mark.parametrize("seed", range(12))
def test_exact_iso_matches_networkx(seed):
    g = random_graph(7, 0.4, colors=2, seed=seed)
    h = random_graph(7, 0.4, colors=2, seed=seed + 100)
    same, _ = random_relabel(g, seed)
    assert (exact_iso(g, h) is not None) == nx_isomorphic(g, h)
    assert exact_iso(g, same) is not None


@pytest.mark.parametrize("seed", range(20))
def test_backtracking_matches_brute_force(seed):
    g = random_graph(3 + seed % 6, 0.3 + (seed % 3) * 0.15, colors=1 + seed % 2, seed=seed)
    assert automorphisms(g).perms == brute_force_automorphisms(g).perms
    assert automorphisms(g, [0]).perms == brute_force_automorphisms(g, [0]).perms


@pytest.mark.parametrize("seed", range(20))
def test_automorphisms_form_a_group(seed):
    g = random_graph(4 + seed % 4, 0.4, colors=1 + seed % 2, seed=seed)
    perms = automorphisms(g).perms
    members = set(perms)
    for p in perms[:60]:
        inverse = [0] * g.n
        for v, w in enumerate(p):
            inverse[w] = v
        assert tuple(inverse) in members
        for q in perms:
            assert tuple(p[q[v]] for v in range(g.n)) in members


@pytest.mark.parametrize("seed", range(20))
def test_orbits_lie_in_stable_classes(seed):
    g = random_graph(4 + seed % 5, 0.4, colors=1 + seed % 3, seed=seed)
    stable = refine(g).assignment
    for orbit in orbit_partition(automorphisms(g)).classes:
        assert len({stable[v] for v in orbit}) == 1


def test_verify_isomorphism_checks_colors_and_multiplicity():
    g = ColoredGraph(2, [(0, 1, 2)], [0, 1])
    assert verify_isomorphism(g, g, (0, 1))
    assert not verify_isomorphism(g, g, (1, 0))
    assert not verify_isomorphism(g, ColoredGraph(2, [(0, 1)], [0, 1]), (0, 1))


@pytest.mark.parametrize("k, order", [(2, 2), (3, 4), (4, 8)])
def test_cfi_flips_even_number_of_pairs(k, order):
    g, labels = gen_cfi(k)
    report = flip_parity_report(g, labels.pair_list(f"P{i}" for i in range(1, k + 1)))
    assert len(report) == order
    assert all(len(flipped) % 2 == 0 for _, flipped in report)


def test_flip_report_on_identity_only(frucht):
    assert flip_parity_report(frucht, []) == [(tuple(range(12)), frozenset())]


def test_flip_report_errors(c6):
    with pytest.raises(ParityError):
        flip_parity_report(c6, [(0, 3)])
    g = ColoredGraph(2, [], [0, 1])
    with pytest.raises(InvalidArgumentError):
        flip_parity_report(g, [(0, 1)])
    with pytest.raises(InvalidArgumentError):
        flip_parity_report(c6, [(2, 2)])


def test_flip_report_needs_two_vertex_class():
    # every automorphism of the path fixes {0, 2} setwise, but 1 shares the color
    path = ColoredGraph(3, [(0, 1), (1, 2)])
    with pytest.raises(ParityError, match="3 vertices"):
        flip_parity_report(path, [(0, 2)])
    report = flip_parity_report(path.with_colors([0, 1, 0]), [(0, 2)])
    assert report == [((0, 1, 2), frozenset()), ((2, 1, 0), frozenset({0}))]


def test_cycle_notation():
    assert cycle_notation((0, 1, 2)) == "()"
    assert cycle_notation((1, 0, 2)) == "(1 2)"
    assert cycle_notation((1, 2, 0, 4, 3)) == "(1 2 3)(4 5)"
