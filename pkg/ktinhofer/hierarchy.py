"""k-Tinhofer membership, threshold and deficiency.

Three independent checks decide whether ``g`` is k-Tinhofer:

* ``operational`` plays every pair of individualization sequences of length
  k on two jointly refined copies of ``g`` and checks the results for
  colored isomorphism;
* ``algebraic`` compares P_S(G) with the orbit partition of Aut_S(G) for
  every S with |S| <= k - 1;
* ``irtree`` walks the selector-driven IR-trees of ``g`` and a relabeled
  copy in lockstep, requiring equal quotient graphs on the way down.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Callable, Sequence

from ktinhofer.config import Settings, get_config
from ktinhofer.corpus import random_relabel
from ktinhofer.errors import InvalidArgumentError, SizeBoundError
from ktinhofer.graph import ColoredGraph
from ktinhofer.groups import automorphisms, exact_iso, is_refinable, orbit_partition
from ktinhofer.refinement import (
    StableColoring,
    halves,
    individualize,
    p_set,
    quotient,
    refine,
    refine_joint,
)
from ktinhofer.tinhofer import CellSelector

logger = logging.getLogger("ktinhofer.hierarchy")

METHODS = ("operational", "algebraic", "irtree")


@dataclass(frozen=True)
class HierarchyVerdict:
    k: int
    member: bool
    method: str
    witness: tuple[tuple[int, ...], tuple[int, ...]] | None = None
    nodes: int = 0


@dataclass(frozen=True)
class ClassificationReport:
    n: int
    m: int
    is_discrete: bool
    is_refinable: bool
    threshold: int
    deficiency: int | None
    is_tinhofer: bool

    def render(self) -> str:
        deficiency = "none" if self.deficiency is None else str(self.deficiency)
        return (
            f"n {self.n}\n"
            f"m {self.m}\n"
            f"discrete {str(self.is_discrete).lower()}\n"
            f"refinable {str(self.is_refinable).lower()}\n"
            f"threshold {self.threshold}\n"
            f"deficiency {deficiency}\n"
            f"tinhofer {str(self.is_tinhofer).lower()}\n"
        )


# ---------------------------------------------------------------------------
# Helpers shared by the search-based checks
# ---------------------------------------------------------------------------

def _half(g: ColoredGraph, pi: StableColoring, assignment: tuple[int, ...]) -> StableColoring:
    return StableColoring(g, assignment, pi.round_count, pi.next_id, pi.depth)


def _sizes(assignment: Sequence[int]) -> dict[int, int]:
    out: dict[int, int] = {}
    for c in assignment:
        out[c] = out.get(c, 0) + 1
    return out


def _colored_iso(g: ColoredGraph, h: ColoredGraph, left, right, settings: Settings) -> bool:
    return exact_iso(g.with_colors(left), h.with_colors(right), settings=settings) is not None


def _orbit_reps(g: ColoredGraph, assignment, cell: Sequence[int], settings: Settings) -> list[int]:
    orbits = orbit_partition(automorphisms(g.with_colors(assignment), settings=settings))
    owner = {v: orbit[0] for orbit in orbits.classes for v in orbit}
    seen: set[int] = set()
    reps: list[int] = []
    for v in cell:
        if owner[v] not in seen:
            seen.add(owner[v])
            reps.append(v)
    return reps


class _Search:
    """Paired depth-first search over jointly refined copies.

    ``cells`` chooses which cells may be individualized at a node;
    ``compare_quotients`` additionally fails nodes whose halves have
    different quotient graphs.
    """

    def __init__(
        self,
        g: ColoredGraph,
        h: ColoredGraph,
        k: int,
        cells: Callable[[dict[int, int]], list[int]],
        prune: bool,
        compare_quotients: bool,
        settings: Settings,
    ):
        self.g, self.h, self.k = g, h, k
        self.cells = cells
        self.prune = prune
        self.compare_quotients = compare_quotients
        self.settings = settings
        self.nodes = 0

    def run(self) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
        pi, offset = refine_joint(self.g, self.h, engine=self.settings.engine)
        self.offset = offset
        return self._visit(pi, (), ())

    def _visit(self, pi: StableColoring, gamma, mu):
        self.nodes += 1
        if self.nodes > self.settings.search_node_cap:
            raise SizeBoundError("hierarchy search", self.settings.search_node_cap, "KTIN_SEARCH_NODE_CAP")

        left, right = halves(pi, self.offset)
        left_sizes = _sizes(left)
        if left_sizes != _sizes(right):
            return gamma, mu
        if self.compare_quotients:
            q_left = quotient(self.g, _half(self.g, pi, left))
            q_right = quotient(self.h, _half(self.h, pi, right))
            if q_left != q_right:
                return gamma, mu

        candidates = self.cells(left_sizes)
        if len(gamma) == self.k or not candidates:
            if _colored_iso(self.g, self.h, left, right, self.settings):
                return None
            return gamma, mu

        for c in candidates:
            cell_g = [v for v, col in enumerate(left) if col == c]
            cell_h = [v for v, col in enumerate(right) if col == c]
            if self.prune:
                cell_g = _orbit_reps(self.g, left, cell_g, self.settings)
                cell_h = _orbit_reps(self.h, right, cell_h, self.settings)
            for u in cell_g:
                for v in cell_h:
                    child = individualize(pi, [u, v + self.offset], engine=self.settings.engine)
                    found = self._visit(child, gamma + (u,), mu + (v,))
                    if found is not None:
                        return found
        return None


def _all_cells(sizes: dict[int, int]) -> list[int]:
    return sorted(c for c, s in sizes.items() if s > 1)


def _check_k(g: ColoredGraph, k: int, low: int = 0) -> None:
    if not low <= k <= g.n:
        raise InvalidArgumentError(f"k must lie in {low}..{g.n}, got {k}")


# ---------------------------------------------------------------------------
# Membership checks
# ---------------------------------------------------------------------------

def is_k_tinhofer_operational(
    g: ColoredGraph,
    k: int,
    h: ColoredGraph | None = None,
    prune: bool = False,
    settings: Settings | None = None,
) -> HierarchyVerdict:
    """Exhaustive adversarial search over paired sequences of length ``k``.

    ``h`` defaults to ``g`` itself; any relabeled copy gives the same bit.
    With ``prune`` only one vertex per automorphism orbit of each copy's
    current colored graph is tried.
    """
    settings = settings or get_config()
    _check_k(g, k)
    search = _Search(g, h or g, k, _all_cells, prune, False, settings)
    witness = search.run()
    logger.info("operational k=%d: member=%s (%d nodes)", k, witness is None, search.nodes)
    return HierarchyVerdict(k, witness is None, "operational", witness, search.nodes)


def is_k_tinhofer_algebraic(
    g: ColoredGraph,
    k: int,
    settings: Settings | None = None,
) -> HierarchyVerdict:
    """P_S(G) equals Orb(Aut_S(G)) for every S with |S| <= k - 1.

    A failing S yields the witness ``(S + (u,), S + (v,))`` where u and v
    share a P_S cell but lie in different Aut_S orbits.
    """
    settings = settings or get_config()
    _check_k(g, k)
    checked = 0
    for size in range(0, k):
        for s in itertools.combinations(range(g.n), size):
            checked += 1
            cells = p_set(g, s, engine=settings.engine).cells()
            orbits = orbit_partition(automorphisms(g, s, settings=settings))
            owner = {v: i for i, orbit in enumerate(orbits.classes) for v in orbit}
            for cell in cells:
                u = cell[0]
                other = next((v for v in cell if owner[v] != owner[u]), None)
                if other is not None:
                    logger.info("algebraic k=%d: S=%s splits cell at %d/%d", k, s, u, other)
                    return HierarchyVerdict(k, False, "algebraic", (s + (u,), s + (other,)), checked)
    return HierarchyVerdict(k, True, "algebraic", None, checked)


def is_k_tinhofer_irtree(
    g: ColoredGraph,
    k: int,
    sel: CellSelector = CellSelector.MIN_COLOR,
    seed: int = 0,
    prune: bool = False,
    settings: Settings | None = None,
) -> HierarchyVerdict:
    """Lockstep walk of the IR-trees of ``g`` and a relabeled copy.

    Cells are chosen by ``sel``; every vertex pair of the cell is followed,
    quotient graphs must agree at every node and the colored graphs must be
    isomorphic at depth ``k``. Only this one selector is covered.
    """
    settings = settings or get_config()
    _check_k(g, k)
    h, sigma = random_relabel(g, seed)

    def selected(sizes: dict[int, int]) -> list[int]:
        c = sel.select(sizes)
        return [] if c is None else [c]

    search = _Search(g, h, k, selected, prune, True, settings)
    witness = search.run()
    if witness is not None:
        # report the h-side in g's labels
        inverse = {w: v for v, w in enumerate(sigma)}
        witness = (witness[0], tuple(inverse[w] for w in witness[1]))
    return HierarchyVerdict(k, witness is None, "irtree", witness, search.nodes)


def check(g: ColoredGraph, k: int, method: str = "operational", **kwargs) -> HierarchyVerdict:
    """Dispatch on ``method``."""
    if method in ("op", "operational"):
        return is_k_tinhofer_operational(g, k, **kwargs)
    if method in ("alg", "algebraic"):
        return is_k_tinhofer_algebraic(g, k, **kwargs)
    if method == "irtree":
        return is_k_tinhofer_irtree(g, k, **kwargs)
    raise InvalidArgumentError(f"unknown method {method!r} (op, alg, irtree)")


# ---------------------------------------------------------------------------
# Witnesses and quotient comparisons
# ---------------------------------------------------------------------------

def _joint_run(g: ColoredGraph, h: ColoredGraph, gamma, mu, settings: Settings):
    if len(gamma) != len(mu):
        raise InvalidArgumentError("sequences must have equal length")
    pi, offset = refine_joint(g, h, engine=settings.engine)
    for u, v in zip(gamma, mu):
        pi = individualize(pi, [u, v + offset], engine=settings.engine)
    return pi, offset


def replay_witness(
    g: ColoredGraph,
    gamma: Sequence[int],
    mu: Sequence[int],
    h: ColoredGraph | None = None,
    settings: Settings | None = None,
) -> bool:
    """True iff the two colored graphs produced by the sequences are isomorphic."""
    settings = settings or get_config()
    h = h or g
    pi, offset = _joint_run(g, h, gamma, mu, settings)
    left, right = halves(pi, offset)
    return _colored_iso(g, h, left, right, settings)


def quotient_lemma_check(
    g: ColoredGraph,
    h: ColoredGraph,
    gamma: Sequence[int],
    mu: Sequence[int],
    settings: Settings | None = None,
) -> tuple[bool, bool]:
    """``(colored isomorphism, quotient equality)`` after the two sequences.

    Quotient-equal but non-isomorphic results are logged as warnings.
    """
    settings = settings or get_config()
    pi, offset = _joint_run(g, h, gamma, mu, settings)
    left, right = halves(pi, offset)
    iso = _colored_iso(g, h, left, right, settings)
    q_equal = quotient(g, _half(g, pi, left)) == quotient(h, _half(h, pi, right))
    if q_equal and not iso:
        logger.warning(
            "quotient graphs agree but colored graphs are not isomorphic: gamma=%s mu=%s",
            [v + 1 for v in gamma], [v + 1 for v in mu],
        )
    return iso, q_equal


# ---------------------------------------------------------------------------
# Threshold, deficiency, classification
# ---------------------------------------------------------------------------

def tinhofer_threshold(g: ColoredGraph, prune: bool = True, settings: Settings | None = None) -> int:
    """Largest j with ``g`` j-Tinhofer, by iterative deepening."""
    settings = settings or get_config()
    for j in range(1, g.n + 1):
        if not is_k_tinhofer_operational(g, j, prune=prune, settings=settings).member:
            return j - 1
    return g.n


def deficiency(g: ColoredGraph, settings: Settings | None = None) -> int | None:
    """``n - 1 - j*``, or None for Tinhofer graphs."""
    j = tinhofer_threshold(g, settings=settings)
    return None if j == g.n else g.n - 1 - j


def classify(g: ColoredGraph, settings: Settings | None = None) -> ClassificationReport:
    settings = settings or get_config()
    threshold = tinhofer_threshold(g, settings=settings)
    refinable = is_refinable(g, settings=settings)
    if refinable != (threshold >= 1):
        logger.error("refinable=%s disagrees with threshold %d", refinable, threshold)
    report = ClassificationReport(
        n=g.n,
        m=g.m,
        is_discrete=refine(g, engine=settings.engine).is_discrete,
        is_refinable=refinable,
        threshold=threshold,
        deficiency=None if threshold == g.n else g.n - 1 - threshold,
        is_tinhofer=threshold == g.n,
    )
    logger.info("classified n=%d: threshold %d", g.n, threshold)
    return report
