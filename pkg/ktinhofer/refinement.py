"""Canonical color refinement (1-WL), individualization and quotient graphs.

Color identifiers depend only on the refinement history, so colorings of
isomorphic graphs (refined separately) carry the same identifiers on
corresponding vertices, and quotient graphs can be compared with ``==``.

Naming rules:

* round 0 maps the distinct input colors, ascending, to ``0, 1, ...``;
* a class that does not split keeps its identifier;
* every part of a split class gets a fresh identifier above all identifiers
  used so far, handed out in ascending order of the full signature
  ``(color, ((neighbor color, weighted count), ...))`` across the round;
* the vertex individualized at step ``i`` receives ``IND_i``
  (``RESERVED_BASE - i``), the same value in every graph.

Two engines produce identical output. ``naive`` recomputes every signature
each round. ``fast`` counts only edges into the classes created in the
previous round, skipping the largest part of each split class, and computes
full signatures for one representative per new part when naming. Graphs
with at least ``ARRAY_MIN_VERTICES`` vertices run both kernels on numpy
arrays.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from ktinhofer.config import ENGINES, Settings, get_config
from ktinhofer.errors import InvalidArgumentError, UnstableColoringError
from ktinhofer.graph import ARRAY_MIN_VERTICES, ColoredGraph, disjoint_union, vertex_set

logger = logging.getLogger("ktinhofer.refinement")

RESERVED_BASE = 1 << 62


def ind(step: int) -> int:
    """Reserved identifier for the vertex individualized at ``step`` (1-based)."""
    if step < 1:
        raise InvalidArgumentError(f"individualization steps are 1-based, got {step}")
    return RESERVED_BASE - step


def is_reserved(color: int) -> bool:
    return color > RESERVED_BASE // 2


# ---------------------------------------------------------------------------
# Domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class StableColoring:
    """Stable vertex coloring of ``graph`` with canonical identifiers.

    ``next_id`` is the first fresh identifier not yet used and ``depth`` the
    number of individualization steps already applied; both are needed to
    continue refining in a way that stays comparable across graphs.
    """

    graph: ColoredGraph
    assignment: tuple[int, ...]
    round_count: int
    next_id: int
    depth: int = 0

    @cached_property
    def classes(self) -> dict[int, tuple[int, ...]]:
        members: dict[int, list[int]] = {}
        for v, c in enumerate(self.assignment):
            members.setdefault(c, []).append(v)
        return {c: tuple(members[c]) for c in sorted(members)}

    def cells(self) -> list[tuple[int, ...]]:
        """Classes in ascending color order."""
        return list(self.classes.values())

    def partition(self) -> frozenset[frozenset[int]]:
        return frozenset(frozenset(cell) for cell in self.classes.values())

    def color_multiset(self) -> tuple[tuple[int, int], ...]:
        return tuple((c, len(cell)) for c, cell in self.classes.items())

    @property
    def is_discrete(self) -> bool:
        return len(self.classes) == self.graph.n

    def non_singleton(self) -> list[int]:
        return [c for c, cell in self.classes.items() if len(cell) > 1]


@dataclass(frozen=True)
class QuotientGraph:
    """Labeled digraph on color classes.

    ``nodes`` holds ``(color, size)`` and ``arcs`` holds
    ``((color_i, color_j), count)``: each vertex of class i has ``count``
    weighted neighbors in class j. Zero arcs are omitted.
    """

    nodes: tuple[tuple[int, int], ...]
    arcs: tuple[tuple[tuple[int, int], int], ...] = field(default=())

    def arc(self, ci: int, cj: int) -> int:
        return dict(self.arcs).get((ci, cj), 0)

    def size(self, c: int) -> int:
        return dict(self.nodes)[c]


# ---------------------------------------------------------------------------
# Engine
# ---------------------------------------------------------------------------

def _rank(colors: Sequence[int]) -> tuple[list[int], int]:
    order = {c: i for i, c in enumerate(sorted(set(colors)))}
    return [order[c] for c in colors], len(order)


def _signature(g: ColoredGraph, ids: list[int], v: int) -> tuple:
    counts: dict[int, int] = {}
    for w, k in g.adj[v]:
        c = ids[w]
        counts[c] = counts.get(c, 0) + k
    return ids[v], tuple(sorted(counts.items()))


def _run_naive(g: ColoredGraph, ids: list[int], next_id: int) -> tuple[list[int], int, int]:
    """Recompute every signature each round; the reference for ``_run_fast``."""
    members: dict[int, list[int]] = {}
    for v, c in enumerate(ids):
        members.setdefault(c, []).append(v)

    rounds = 0
    while True:
        rounds += 1
        splits: list[tuple[tuple, list[int]]] = []
        retired: list[int] = []
        for c, vs in members.items():
            if len(vs) == 1:
                continue
            groups: dict[tuple, list[int]] = {}
            for v in vs:
                groups.setdefault(_signature(g, ids, v), []).append(v)
            if len(groups) > 1:
                splits.extend(groups.items())
                retired.append(c)
        if not splits:
            break

        splits.sort(key=lambda item: item[0])
        for c in retired:
            del members[c]
        for _sig, vs in splits:
            for v in vs:
                ids[v] = next_id
            members[next_id] = vs
            next_id += 1
        logger.debug("round %d: %d classes split into %d", rounds, len(retired), len(splits))

    return ids, next_id, rounds


# -- array kernels ----------------------------------------------------------
#
# Both kernels aggregate weighted adjacency entries per (owner, color) and
# return, per owner, the ``((color, count), ...)`` tuple sorted by color.
# Small graphs use plain loops; graphs with precomputed arrays go through
# numpy.

def _dense_colors(ids_arr: np.ndarray, next_id: int) -> tuple[np.ndarray, int]:
    """Order-preserving map of the identifiers onto ``0 .. span-1``."""
    dense = ids_arr.copy()
    reserved = ids_arr > RESERVED_BASE // 2
    if not reserved.any():
        return dense, next_id
    steps = RESERVED_BASE - ids_arr[reserved]
    top = int(steps.max())
    dense[reserved] = next_id + top - steps
    return dense, next_id + top + 1


def _gather(g: ColoredGraph, vertices: list[int]):
    """Adjacency entries of ``vertices``: (position in ``vertices``, neighbor, multiplicity)."""
    indptr, nbr, wt = g.csr()
    src = np.asarray(vertices, dtype=np.int64)
    starts = indptr[src]
    lens = indptr[src + 1] - starts
    total = int(lens.sum())
    owner = np.repeat(np.arange(len(src), dtype=np.int64), lens)
    idx = np.repeat(starts - (np.cumsum(lens) - lens), lens) + np.arange(total, dtype=np.int64)
    return owner, nbr[idx], wt[idx]


def _aggregate(owner: np.ndarray, color: np.ndarray, dense: np.ndarray, span: int, weight: np.ndarray):
    """Per distinct owner (ascending): the sorted ``((color, count), ...)`` tuple."""
    if len(owner) == 0:
        return [], []
    order = np.argsort(owner * span + dense, kind="stable")
    owner, color, dense, weight = owner[order], color[order], dense[order], weight[order]
    run = np.empty(len(owner), dtype=bool)
    run[0] = True
    run[1:] = (owner[1:] != owner[:-1]) | (dense[1:] != dense[:-1])
    starts = np.flatnonzero(run)
    counts = np.add.reduceat(weight, starts)
    run_owner = owner[starts]
    first = np.empty(len(run_owner), dtype=bool)
    first[0] = True
    first[1:] = run_owner[1:] != run_owner[:-1]
    bounds = np.flatnonzero(first).tolist()
    pairs = list(zip(color[starts].tolist(), counts.tolist()))
    keys = [tuple(pairs[a:b]) for a, b in zip(bounds, bounds[1:] + [len(pairs)])]
    return run_owner[first].tolist(), keys


def _signatures(g: ColoredGraph, ids: list[int], next_id: int, vertices: list[int]) -> list[tuple]:
    """Full refinement signatures of ``vertices``."""
    if g.n < ARRAY_MIN_VERTICES or not vertices:
        return [_signature(g, ids, v) for v in vertices]
    ids_arr = np.asarray(ids, dtype=np.int64)
    dense_arr, span = _dense_colors(ids_arr, next_id)
    owner, nbr, wt = _gather(g, vertices)
    owners, keys = _aggregate(owner, ids_arr[nbr], dense_arr[nbr], span, wt)
    profile = dict(zip(owners, keys))
    return [(ids[v], profile.get(i, ())) for i, v in enumerate(vertices)]


def _splitter_counts(
    g: ColoredGraph,
    ids: list[int],
    next_id: int,
    sources: list[int],
    open_vertices: set[int] | None,
) -> dict[int, tuple]:
    """For every neighbor of ``sources``: its weighted counts into the sources' colors.

    ``open_vertices``, when given, restricts the result to those neighbors.
    """
    if g.n < ARRAY_MIN_VERTICES:
        counts: dict[int, dict[int, int]] = {}
        for v in sources:
            c = ids[v]
            for w, k in g.adj[v]:
                if open_vertices is not None and w not in open_vertices:
                    continue
                d = counts.get(w)
                if d is None:
                    counts[w] = {c: k}
                else:
                    d[c] = d.get(c, 0) + k
        return {w: tuple(sorted(d.items())) for w, d in counts.items()}

    ids_arr = np.asarray(ids, dtype=np.int64)
    dense_arr, span = _dense_colors(ids_arr, next_id)
    src = np.asarray(sources, dtype=np.int64)
    owner, nbr, wt = _gather(g, sources)
    color = ids_arr[src][owner]
    dense = dense_arr[src][owner]
    if open_vertices is not None:
        mask = np.zeros(g.n, dtype=bool)
        mask[np.fromiter(open_vertices, dtype=np.int64, count=len(open_vertices))] = True
        keep = mask[nbr]
        nbr, color, dense, wt = nbr[keep], color[keep], dense[keep], wt[keep]
    targets, keys = _aggregate(nbr, color, dense, span, wt)
    return dict(zip(targets, keys))


# -- fast engine ------------------------------------------------------------

def _full_groups(g: ColoredGraph, ids: list[int], next_id: int, members, classes) -> dict[int, list]:
    vertices = [v for c in classes for v in members[c]]
    groups: dict[int, dict[tuple, list[int]]] = {}
    for v, sig in zip(vertices, _signatures(g, ids, next_id, vertices)):
        groups.setdefault(sig[0], {}).setdefault(sig, []).append(v)
    return {c: list(parts.items()) for c, parts in groups.items()}


def _splitter_groups(g: ColoredGraph, ids: list[int], next_id: int, members, splitters) -> dict[int, list]:
    """Split classes by their counts into ``splitters``.

    Valid when every class already has uniform counts into the classes the
    splitters were carved from.
    """
    sources = [v for c in splitters for v in members[c]]
    open_vertices = None
    if g.n >= ARRAY_MIN_VERTICES:
        open_vertices = {v for vs in members.values() if len(vs) > 1 for v in vs}
    by_class: dict[int, dict[tuple, list[int]]] = {}
    for w, key in _splitter_counts(g, ids, next_id, sources, open_vertices).items():
        c = ids[w]
        if len(members[c]) > 1:
            by_class.setdefault(c, {}).setdefault(key, []).append(w)

    out: dict[int, list] = {}
    for c, parts in by_class.items():
        touched = sum(len(vs) for vs in parts.values())
        if touched < len(members[c]):
            seen = {v for vs in parts.values() for v in vs}
            parts[()] = [v for v in members[c] if v not in seen]
        if len(parts) > 1:
            out[c] = [(None, vs) for vs in parts.values()]
    return out


def _run_fast(
    g: ColoredGraph,
    ids: list[int],
    next_id: int,
    changed: set[int] | None,
) -> tuple[list[int], int, int]:
    """Splitter-driven rounds with the same output as ``_run_naive``.

    After a round only the new parts act as splitters, and the largest part
    of each split class is left out: counts into it follow from the uniform
    count into the class it came from. The first round after an
    individualization uses every changed class as a splitter and regroups the
    individualized class by full signatures.
    """
    members: dict[int, list[int]] = {}
    for v, c in enumerate(ids):
        members.setdefault(c, []).append(v)

    splitters: list[int] | None = None
    full: list[int] = []
    if changed is not None:
        splitters = [c for c in sorted(changed) if c in members]
        full = [c for c in splitters if is_reserved(c) and len(members[c]) > 1]

    rounds = 0
    while True:
        rounds += 1
        if splitters is None:
            groups = _full_groups(g, ids, next_id, members, [c for c, vs in members.items() if len(vs) > 1])
        else:
            groups = _splitter_groups(g, ids, next_id, members, splitters)
            groups.update(_full_groups(g, ids, next_id, members, full))
            full = []
        splits = {c: parts for c, parts in groups.items() if len(parts) > 1}
        if not splits:
            break

        entries = [(sig, vs) for parts in splits.values() for sig, vs in parts if sig is not None]
        pending = [vs for parts in splits.values() for sig, vs in parts if sig is None]
        if pending:
            sigs = _signatures(g, ids, next_id, [vs[0] for vs in pending])
            entries.extend(zip(sigs, pending))
        entries.sort(key=lambda item: item[0])

        for c in splits:
            del members[c]
        largest: dict[int, tuple[int, int]] = {}
        created: list[int] = []
        for sig, vs in entries:
            for v in vs:
                ids[v] = next_id
            members[next_id] = vs
            created.append(next_id)
            if len(vs) > largest.get(sig[0], (0, -1))[0]:
                largest[sig[0]] = (len(vs), next_id)
            next_id += 1
        skipped = {new_id for _size, new_id in largest.values()}
        splitters = [c for c in created if c not in skipped]
        logger.debug("round %d: %d classes split into %d", rounds, len(splits), len(entries))

    return ids, next_id, rounds


def _run(
    g: ColoredGraph,
    ids: list[int],
    next_id: int,
    engine: str,
    changed: set[int] | None = None,
) -> tuple[list[int], int, int]:
    """Refine ``ids`` in place until a round produces no split.

    ``changed`` lists the classes that differ from the last stable coloring;
    ``None`` means nothing is known to be stable yet.
    """
    if engine == "naive":
        return _run_naive(g, ids, next_id)
    return _run_fast(g, ids, next_id, changed)


def _engine(engine: str | None, settings: Settings | None) -> str:
    if engine is None:
        engine = (settings or get_config()).engine
    if engine not in ENGINES:
        raise InvalidArgumentError(f"unknown refinement engine {engine!r}")
    return engine


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------

def refine(
    g: ColoredGraph,
    start: Sequence[int] | None = None,
    engine: str | None = None,
    settings: Settings | None = None,
) -> StableColoring:
    """Stable coloring of ``g`` refining ``start`` (default: ``g.colors``)."""
    engine = _engine(engine, settings)
    colors = g.colors if start is None else tuple(start)
    if len(colors) != g.n:
        raise InvalidArgumentError(f"start coloring has {len(colors)} entries, graph has {g.n} vertices")
    ids, next_id = _rank(colors)
    ids, next_id, rounds = _run(g, ids, next_id, engine)
    return StableColoring(g, tuple(ids), rounds, next_id)


def individualize(
    pi: StableColoring,
    vertices: Sequence[int],
    engine: str | None = None,
    settings: Settings | None = None,
) -> StableColoring:
    """Give ``vertices`` the next step's reserved identifier and re-refine.

    Several vertices share the identifier when one vertex per graph of a
    disjoint union is individualized at the same step.
    """
    engine = _engine(engine, settings)
    step = pi.depth + 1
    target = ind(step)
    ids = list(pi.assignment)
    changed = {target}
    for v in vertices:
        if not 0 <= v < pi.graph.n:
            raise InvalidArgumentError(f"vertex {v} out of range for n={pi.graph.n}")
        changed.add(ids[v])
        ids[v] = target
    ids, next_id, rounds = _run(pi.graph, ids, pi.next_id, engine, changed)
    return StableColoring(pi.graph, tuple(ids), pi.round_count + rounds, next_id, step)


def refine_seq(
    g: ColoredGraph,
    gamma: Sequence[int],
    engine: str | None = None,
    settings: Settings | None = None,
) -> StableColoring:
    """Individualize ``gamma`` one vertex at a time, refining after each."""
    if len(set(gamma)) != len(gamma):
        raise InvalidArgumentError(f"individualization sequence repeats a vertex: {list(gamma)}")
    pi = refine(g, engine=engine, settings=settings)
    for v in gamma:
        pi = individualize(pi, [v], engine=engine, settings=settings)
    return pi


def p_set(
    g: ColoredGraph,
    s: Iterable[int],
    engine: str | None = None,
    settings: Settings | None = None,
) -> StableColoring:
    """P_S(G): individualize all of ``s`` at once, then refine."""
    engine = _engine(engine, settings)
    members = vertex_set(s, g.n)
    base = refine(g, engine=engine)
    if not members:
        return base
    ids = list(base.assignment)
    changed: set[int] = set()
    for step, v in enumerate(members, start=1):
        changed.add(ids[v])
        ids[v] = ind(step)
        changed.add(ids[v])
    ids, next_id, rounds = _run(g, ids, base.next_id, engine, changed)
    return StableColoring(g, tuple(ids), base.round_count + rounds, next_id, len(members))


def refine_joint(
    g: ColoredGraph,
    h: ColoredGraph,
    engine: str | None = None,
    settings: Settings | None = None,
) -> tuple[StableColoring, int]:
    """Refine the disjoint union so both graphs share color identifiers.

    Returns the union's coloring and the offset of ``h``'s vertices.
    """
    union, offset = disjoint_union(g, h)
    return refine(union, engine=engine, settings=settings), offset


def halves(pi: StableColoring, offset: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Split a joint assignment into the two graphs' assignments."""
    return pi.assignment[:offset], pi.assignment[offset:]


def quotient(g: ColoredGraph, pi: StableColoring) -> QuotientGraph:
    """Quotient graph of a stable coloring.

    Raises ``UnstableColoringError`` if two vertices of one class disagree on
    a neighbor count.
    """
    ids = pi.assignment
    if len(ids) != g.n:
        raise InvalidArgumentError("coloring does not belong to this graph")
    arcs: dict[tuple[int, int], int] = {}
    nodes = []
    for c, cell in pi.classes.items():
        nodes.append((c, len(cell)))
        reference = None
        for v in cell:
            counts: Counter = Counter()
            for w, k in g.adj[v]:
                counts[ids[w]] += k
            if reference is None:
                reference = counts
            elif counts != reference:
                raise UnstableColoringError(
                    f"class {c} is not stable: vertices {cell[0]} and {v} have different neighbor counts"
                )
        for cj, count in reference.items():
            arcs[(c, cj)] = count
    return QuotientGraph(tuple(nodes), tuple(sorted(arcs.items())))


def is_discrete(pi: StableColoring) -> bool:
    return pi.is_discrete


def dump_coloring(pi: StableColoring) -> str:
    """``v <vertex> <color>`` lines, 1-based vertices."""
    return "".join(f"v {v + 1} {c}\n" for v, c in enumerate(pi.assignment))


def dump_quotient(q: QuotientGraph) -> str:
    lines = [f"q {c} {size}\n" for c, size in q.nodes]
    lines += [f"a {ci} {cj} {count}\n" for (ci, cj), count in q.arcs]
    return "".join(lines)
