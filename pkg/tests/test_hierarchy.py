import logging

import pytest

from ktinhofer.circuit import parse_circuit
from ktinhofer.corpus import random_graph, random_relabel
from ktinhofer.errors import InvalidArgumentError
from ktinhofer.gadgets import gen_hardness, gen_separator
from ktinhofer.graph import builtin
from ktinhofer.hierarchy import (
    check,
    classify,
    deficiency,
    is_k_tinhofer_algebraic,
    is_k_tinhofer_irtree,
    is_k_tinhofer_operational,
    quotient_lemma_check,
    replay_witness,
    tinhofer_threshold,
)
from ktinhofer.tinhofer import CellSelector


@pytest.fixture(scope="module")
def sep1():
    return gen_separator(1)[0]


def test_cycle_is_tinhofer(c6):
    for k in range(0, 7):
        assert is_k_tinhofer_operational(c6, k).member
    assert tinhofer_threshold(c6) == 6
    assert deficiency(c6) is None


def test_frucht_is_not_refinable(frucht):
    assert is_k_tinhofer_operational(frucht, 0).member
    verdict = is_k_tinhofer_operational(frucht, 1)
    assert not verdict.member
    assert len(verdict.witness[0]) == 1
    assert not is_k_tinhofer_algebraic(frucht, 1).member
    assert tinhofer_threshold(frucht) == 0
    assert deficiency(frucht) == 11


def test_classify_reports(c6, frucht):
    report = classify(c6)
    assert (report.n, report.m, report.threshold) == (6, 6, 6)
    assert report.is_refinable and report.is_tinhofer and not report.is_discrete
    assert report.deficiency is None
    assert "deficiency none" in report.render()

    assert classify(frucht).render() == (
        "n 12\nm 18\ndiscrete false\nrefinable false\n"
        "threshold 0\ndeficiency 11\ntinhofer false\n"
    )


def test_separator_level_one(sep1):
    assert sep1.n == 16
    assert is_k_tinhofer_operational(sep1, 1).member
    assert is_k_tinhofer_algebraic(sep1, 1).member

    verdict = is_k_tinhofer_operational(sep1, 2)
    assert not verdict.member
    gamma, mu = verdict.witness
    assert len(gamma) == len(mu) == 2
    assert not replay_witness(sep1, gamma, mu)

    algebraic = is_k_tinhofer_algebraic(sep1, 2)
    assert not algebraic.member
    assert not replay_witness(sep1, *algebraic.witness)


def test_separator_threshold(sep1):
    report = classify(sep1)
    assert report.threshold == 1
    assert report.deficiency == 14
    assert report.is_refinable


def test_separator_two_fails_at_level_two():
    g, _ = gen_separator(2)
    assert g.n == 22
    assert is_k_tinhofer_algebraic(g, 1).member
    verdict = is_k_tinhofer_algebraic(g, 2)
    assert not verdict.member
    assert len(verdict.witness[0]) == 2
    assert not replay_witness(g, *verdict.witness)


def test_pruning_keeps_verdicts(sep1, c6, frucht):
    for g, k in ((sep1, 2), (sep1, 1), (c6, 3), (frucht, 1)):
        plain = is_k_tinhofer_operational(g, k)
        pruned = is_k_tinhofer_operational(g, k, prune=True)
        assert plain.member == pruned.member
        if plain.member:
            assert pruned.nodes <= plain.nodes


@pytest.mark.parametrize("seed", range(15))
def test_operational_matches_algebraic_on_small_graphs(seed):
    g = random_graph(5, 0.5, colors=1 + seed % 2, seed=seed)
    for k in range(0, g.n + 1):
        op = is_k_tinhofer_operational(g, k, prune=True)
        alg = is_k_tinhofer_algebraic(g, k)
        assert op.member == alg.member, (seed, k)


@pytest.mark.parametrize("seed", range(10))
def test_hierarchy_laws(seed):
    g = random_graph(5, 0.4, seed=seed)
    members = [is_k_tinhofer_operational(g, k, prune=True).member for k in range(g.n + 1)]
    assert members[0]
    assert all(members[k] or not members[k + 1] for k in range(g.n))
    assert members[g.n - 1] == members[g.n]


def test_irtree_check(c6, frucht, sep1):
    assert is_k_tinhofer_irtree(c6, 2).member
    assert not is_k_tinhofer_irtree(frucht, 1).member
    assert is_k_tinhofer_irtree(sep1, 1).member
    verdict = is_k_tinhofer_irtree(sep1, 2, CellSelector.MIN_COLOR, seed=4)
    assert not verdict.member
    assert not replay_witness(sep1, *verdict.witness)


def test_check_dispatch(c6):
    assert check(c6, 1, "op").method == "operational"
    assert check(c6, 1, "alg").method == "algebraic"
    assert check(c6, 1, "irtree").method == "irtree"
    with pytest.raises(InvalidArgumentError):
        check(c6, 1, "magic")
    with pytest.raises(InvalidArgumentError):
        check(c6, 7)


def test_replay_with_relabeled_copy(c6):
    h, sigma = random_relabel(c6, seed=1)
    assert replay_witness(c6, (0,), (sigma[0],), h=h)
    with pytest.raises(InvalidArgumentError):
        replay_witness(c6, (0, 1), (0,))


@pytest.mark.parametrize("seed", range(20))
def test_isomorphic_results_have_equal_quotients(seed):
    g = random_graph(7, 0.45, colors=2, seed=seed)
    h, _ = random_relabel(g, seed + 1)
    gamma = tuple((seed + 3 * i) % g.n for i in range(2))
    mu = tuple((seed * 5 + i) % g.n for i in range(2))
    if len(set(gamma)) < 2 or len(set(mu)) < 2:
        return
    iso, q_equal = quotient_lemma_check(g, h, gamma, mu)
    assert q_equal or not iso


def test_equal_quotients_without_isomorphism_are_logged(caplog):
    # no automorphism flips P3 without flipping P0
    g, labels = gen_separator(1)
    a0, _ = labels["P0"]
    a3, b3 = labels["P3"]
    with caplog.at_level(logging.WARNING, logger="ktinhofer.hierarchy"):
        iso, q_equal = quotient_lemma_check(g, g, (a0, a3), (a0, b3))
    assert not iso
    assert q_equal
    assert "quotient graphs agree" in caplog.text


def test_separator_two_operational():
    g, _ = gen_separator(2)
    assert is_k_tinhofer_operational(g, 1, prune=True).member
    verdict = is_k_tinhofer_operational(g, 2, prune=True)
    assert not verdict.member
    assert not replay_witness(g, *verdict.witness)


def test_zero_valued_hardness_graph_is_not_refinable(small_circuit_text):
    g, _ = gen_hardness(parse_circuit(small_circuit_text), 1)
    assert not is_k_tinhofer_operational(g, 1, prune=True).member
    assert not is_k_tinhofer_algebraic(g, 1).member


@pytest.mark.parametrize("seed", range(10))
def test_operational_membership_implies_irtree(seed):
    g = random_graph(5, 0.45, colors=1 + seed % 2, seed=seed)
    for k in range(4):
        if not is_k_tinhofer_operational(g, k, prune=True).member:
            break
        for selector in CellSelector:
            assert is_k_tinhofer_irtree(g, k, selector, seed=seed).member, (seed, k, selector)


@pytest.mark.parametrize("seed", range(12))
def test_pruning_keeps_verdicts_on_random_graphs(seed):
    g = random_graph(5, 0.4, colors=1 + seed % 3, seed=seed)
    for k in range(4):
        plain = is_k_tinhofer_operational(g, k)
        assert is_k_tinhofer_operational(g, k, prune=True).member == plain.member, (seed, k)
