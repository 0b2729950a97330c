"""Exact automorphism enumeration, orbit partitions and the isomorphism oracle.

Everything here is exhaustive: these are the ground-truth engines the
heuristic verdicts elsewhere are checked against. Searches individualize a
fixed vertex of the smallest non-singleton cell on the left and every
candidate of the matching cell on the right, pruning with refinement.
"""

from __future__ import annotations

import itertools
import logging
from collections import Counter
from dataclasses import dataclass
from typing import Iterator, Sequence

from ktinhofer.config import Settings, get_config
from ktinhofer.errors import InvalidArgumentError, ParityError, SizeBoundError
from ktinhofer.graph import ColoredGraph, vertex_set
from ktinhofer.refinement import StableColoring, individualize, p_set, refine

logger = logging.getLogger("ktinhofer.groups")

BRUTE_FORCE_BOUND = 8

Permutation = tuple[int, ...]


@dataclass(frozen=True)
class AutomorphismSet:
    n: int
    perms: tuple[Permutation, ...]
    fixed: tuple[int, ...] = ()

    def __len__(self):
        return len(self.perms)

    def __contains__(self, perm):
        return tuple(perm) in set(self.perms)


@dataclass(frozen=True)
class OrbitPartition:
    """Orbits ordered by their smallest member; each orbit sorted."""

    classes: tuple[tuple[int, ...], ...]

    def partition(self) -> frozenset[frozenset[int]]:
        return frozenset(frozenset(c) for c in self.classes)


def _check_bound(g: ColoredGraph, settings: Settings) -> None:
    if g.n > settings.enum_bound:
        raise SizeBoundError(f"graph with {g.n} vertices", settings.enum_bound, "KTIN_ENUM_BOUND")


def verify_isomorphism(g: ColoredGraph, h: ColoredGraph, bijection: Sequence[int]) -> bool:
    """True iff ``bijection`` maps g onto h preserving colors and multiplicities."""
    if g.n != h.n or len(bijection) != g.n or sorted(bijection) != list(range(g.n)):
        return False
    if g.m != h.m:
        return False
    for v in range(g.n):
        if g.colors[v] != h.colors[bijection[v]]:
            return False
    for u, v, k in g.edges:
        if h.mult(bijection[u], bijection[v]) != k:
            return False
    return True


def _target_cell(pi: StableColoring) -> int | None:
    best = None
    for c, cell in pi.classes.items():
        if len(cell) > 1 and (best is None or len(cell) < len(pi.classes[best])):
            best = c
    return best


def _matchings(
    g: ColoredGraph,
    h: ColoredGraph,
    left: StableColoring,
    right: StableColoring,
    engine: str,
) -> Iterator[Permutation]:
    """Yield every verified isomorphism g -> h compatible with the colorings."""
    if left.color_multiset() != right.color_multiset():
        return
    c = _target_cell(left)
    if c is None:
        position = {col: cell[0] for col, cell in right.classes.items()}
        bijection = tuple(position[col] for col in left.assignment)
        if verify_isomorphism(g, h, bijection):
            yield bijection
        return
    u = left.classes[c][0]
    left_next = individualize(left, [u], engine=engine)
    for v in right.classes[c]:
        right_next = individualize(right, [v], engine=engine)
        yield from _matchings(g, h, left_next, right_next, engine)


def automorphisms(
    g: ColoredGraph,
    fixed: Sequence[int] = (),
    settings: Settings | None = None,
) -> AutomorphismSet:
    """All color-preserving automorphisms of ``g`` fixing ``fixed`` pointwise."""
    settings = settings or get_config()
    _check_bound(g, settings)
    fixed = vertex_set(fixed, g.n)
    start = p_set(g, fixed, engine=settings.engine)
    perms = []
    for perm in _matchings(g, g, start, start, settings.engine):
        perms.append(perm)
        if len(perms) > settings.group_cap:
            raise SizeBoundError("automorphism group", settings.group_cap, "KTIN_GROUP_CAP")
    perms.sort()
    logger.debug("|Aut_S| = %d for n=%d, |S|=%d", len(perms), g.n, len(fixed))
    return AutomorphismSet(g.n, tuple(perms), fixed)


def brute_force_automorphisms(g: ColoredGraph, fixed: Sequence[int] = ()) -> AutomorphismSet:
    """Plain n! enumeration; only for tiny graphs."""
    if g.n > BRUTE_FORCE_BOUND:
        raise SizeBoundError(f"brute force on {g.n} vertices", BRUTE_FORCE_BOUND, "BRUTE_FORCE_BOUND")
    fixed = vertex_set(fixed, g.n)
    perms = [
        perm
        for perm in itertools.permutations(range(g.n))
        if all(perm[s] == s for s in fixed) and verify_isomorphism(g, g, perm)
    ]
    return AutomorphismSet(g.n, tuple(sorted(perms)), fixed)


def orbit_partition(auts: AutomorphismSet) -> OrbitPartition:
    if not auts.perms:
        raise InvalidArgumentError("automorphism set is empty (it must contain the identity)")
    parent = list(range(auts.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for perm in auts.perms:
        for v, w in enumerate(perm):
            a, b = find(v), find(w)
            if a != b:
                parent[max(a, b)] = min(a, b)

    groups: dict[int, list[int]] = {}
    for v in range(auts.n):
        groups.setdefault(find(v), []).append(v)
    return OrbitPartition(tuple(tuple(groups[r]) for r in sorted(groups)))


def stabilizer_orbits(g: ColoredGraph, s: Sequence[int] = (), settings: Settings | None = None) -> OrbitPartition:
    """Orb(Aut_S(G))."""
    return orbit_partition(automorphisms(g, s, settings=settings))


def exact_iso(
    g: ColoredGraph,
    h: ColoredGraph,
    settings: Settings | None = None,
) -> Permutation | None:
    """A color-, adjacency- and multiplicity-preserving bijection g -> h, or None."""
    settings = settings or get_config()
    _check_bound(g, settings)
    _check_bound(h, settings)
    if g.n != h.n or g.m != h.m or sorted(g.colors) != sorted(h.colors):
        return None
    left = refine(g, engine=settings.engine)
    right = refine(h, engine=settings.engine)
    return next(_matchings(g, h, left, right, settings.engine), None)


def is_refinable(g: ColoredGraph, settings: Settings | None = None) -> bool:
    settings = settings or get_config()
    stable = refine(g, engine=settings.engine).partition()
    return stable == orbit_partition(automorphisms(g, settings=settings)).partition()


def flip_parity_report(
    g: ColoredGraph,
    pairs: Sequence[tuple[int, int]],
    settings: Settings | None = None,
) -> list[tuple[Permutation, frozenset[int]]]:
    """For every automorphism, the indices of the pairs it flips.

    A pair ``(a, b)`` is flipped when the automorphism sends ``a`` to ``b``.
    Every pair must be a whole color class of two vertices, so each
    automorphism either fixes or swaps it.
    """
    class_size = Counter(g.colors)
    for i, (a, b) in enumerate(pairs):
        if a == b or g.colors[a] != g.colors[b]:
            raise InvalidArgumentError(f"pair ({a}, {b}) does not share a color")
        if class_size[g.colors[a]] != 2:
            raise ParityError(
                f"pair {i} ({a}, {b}) lies in a color class of {class_size[g.colors[a]]} vertices,"
                " automorphisms may move it off itself"
            )
    report = []
    for perm in automorphisms(g, settings=settings).perms:
        flipped = frozenset(i for i, (a, b) in enumerate(pairs) if perm[a] == b)
        report.append((perm, flipped))
    return report


def cycle_notation(perm: Sequence[int]) -> str:
    """1-based cycle notation, fixed points omitted; the identity is ``()``."""
    seen = set()
    out = []
    for start in range(len(perm)):
        if start in seen or perm[start] == start:
            continue
        cycle = []
        v = start
        while v not in seen:
            seen.add(v)
            cycle.append(v + 1)
            v = perm[v]
        out.append("(" + " ".join(str(x) for x in cycle) + ")")
    return "".join(out) or "()"
