"""Vertex-colored multigraphs, builtin families and the ``cgraph`` text format.

Vertices are ``0..n-1`` internally and 1-based in files.
"""

from __future__ import annotations

import logging
from itertools import chain
from typing import Iterable, Sequence

import numpy as np

from ktinhofer.errors import GraphFormatError, InvalidArgumentError

logger = logging.getLogger("ktinhofer.graph")

# LCF notation of the Frucht graph on the 12-cycle.
FRUCHT_LCF = (-5, -2, -4, 2, 5, -2, 2, 5, -2, -5, 4, 2)

BUILTINS = ("cycle", "path", "complete", "frucht")

# Graphs at least this large get their adjacency as numpy arrays on construction.
ARRAY_MIN_VERTICES = 2048


def _build_csr(adj) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    lens = np.fromiter(map(len, adj), dtype=np.int64, count=len(adj))
    indptr = np.zeros(len(adj) + 1, dtype=np.int64)
    np.cumsum(lens, out=indptr[1:])
    flat = np.fromiter(
        chain.from_iterable(chain.from_iterable(adj)), dtype=np.int64, count=2 * int(indptr[-1])
    )
    return indptr, flat[0::2].copy(), flat[1::2].copy()


class ColoredGraph:
    """Undirected vertex-colored multigraph without self-loops.

    Immutable once built: ``edges`` holds ``(u, v, mult)`` with ``u < v`` in
    lexicographic order and ``adj[v]`` holds ``(neighbor, mult)`` sorted by
    neighbor.
    """

    __slots__ = ("n", "colors", "edges", "adj", "_mult", "_hash", "_csr")

    def __init__(
        self,
        n: int,
        edges: Iterable[tuple[int, ...]] = (),
        colors: Sequence[int] | None = None,
    ):
        if n < 0:
            raise InvalidArgumentError(f"vertex count must be nonnegative, got {n}")
        if colors is None:
            colors = (0,) * n
        if len(colors) != n:
            raise InvalidArgumentError(f"expected {n} colors, got {len(colors)}")
        for v, c in enumerate(colors):
            if c < 0:
                raise InvalidArgumentError(f"vertex {v} has negative color {c}")

        mult: dict[tuple[int, int], int] = {}
        for edge in edges:
            u, v = edge[0], edge[1]
            k = edge[2] if len(edge) > 2 else 1
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidArgumentError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise InvalidArgumentError(f"self-loop at vertex {u}")
            if k <= 0:
                raise InvalidArgumentError(f"edge ({u}, {v}) has non-positive multiplicity {k}")
            key = (u, v) if u < v else (v, u)
            mult[key] = mult.get(key, 0) + k

        adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        for (u, v), k in mult.items():
            adj[u].append((v, k))
            adj[v].append((u, k))

        self.n = n
        self.colors = tuple(int(c) for c in colors)
        self.edges = tuple(sorted((u, v, k) for (u, v), k in mult.items()))
        self.adj = tuple(tuple(sorted(row)) for row in adj)
        self._mult = mult
        self._hash = None
        self._csr = _build_csr(self.adj) if n >= ARRAY_MIN_VERTICES else None

    @property
    def m(self) -> int:
        """Number of distinct adjacent pairs (not the multiplicity sum)."""
        return len(self.edges)

    def mult(self, u: int, v: int) -> int:
        if u == v:
            return 0
        return self._mult.get((u, v) if u < v else (v, u), 0)

    def csr(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """``(indptr, neighbors, multiplicities)`` in compressed sparse row form."""
        if self._csr is None:
            self._csr = _build_csr(self.adj)
        return self._csr

    def degree(self, v: int) -> int:
        """Multiplicity-weighted degree."""
        return sum(k for _, k in self.adj[v])

    def with_colors(self, colors: Sequence[int]) -> "ColoredGraph":
        return ColoredGraph(self.n, self.edges, colors)

    def __eq__(self, other):
        if not isinstance(other, ColoredGraph):
            return NotImplemented
        return self.n == other.n and self.colors == other.colors and self.edges == other.edges

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, self.colors, self.edges))
        return self._hash

    def __repr__(self):
        return f"ColoredGraph(n={self.n}, m={self.m}, colors={len(set(self.colors))} distinct)"


def vertex_set(members: Iterable[int], n: int) -> tuple[int, ...]:
    """Sorted duplicate-free vertex tuple, checked against ``n``."""
    out = tuple(sorted(set(members)))
    for v in out:
        if not 0 <= v < n:
            raise InvalidArgumentError(f"vertex {v} out of range for n={n}")
    return out


# ---------------------------------------------------------------------------
# cgraph text format
# ---------------------------------------------------------------------------

def _int(token: str, lineno: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise GraphFormatError(f"{what} is not an integer: {token!r}", lineno) from None


def parse_graph(text: bytes | str) -> ColoredGraph:
    """Parse ``cgraph`` text into a graph.

    Unlisted colors default to 0 and edge multiplicity defaults to 1.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")

    n = m = None
    colors: list[int] = []
    seen: set[tuple[int, int]] = set()
    edges: list[tuple[int, int, int]] = []

    def vertex(token: str, lineno: int) -> int:
        v = _int(token, lineno, "vertex")
        if not 1 <= v <= n:
            raise GraphFormatError(f"vertex index {v} out of range 1..{n}", lineno)
        return v - 1

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        kind = parts[0]

        if n is None:
            if kind != "p" or len(parts) != 4 or parts[1] != "cgraph":
                raise GraphFormatError("expected header 'p cgraph <n> <m>'", lineno)
            n = _int(parts[2], lineno, "vertex count")
            m = _int(parts[3], lineno, "edge count")
            if n < 0 or m < 0:
                raise GraphFormatError("header counts must be nonnegative", lineno)
            colors = [0] * n
            continue

        if kind == "p":
            raise GraphFormatError("duplicate header", lineno)
        elif kind == "c":
            if len(parts) != 3:
                raise GraphFormatError("expected 'c <v> <color>'", lineno)
            v = vertex(parts[1], lineno)
            color = _int(parts[2], lineno, "color")
            if color < 0:
                raise GraphFormatError(f"negative color {color}", lineno)
            colors[v] = color
        elif kind == "e":
            if len(parts) not in (3, 4):
                raise GraphFormatError("expected 'e <u> <v> [mult]'", lineno)
            u = vertex(parts[1], lineno)
            v = vertex(parts[2], lineno)
            k = _int(parts[3], lineno, "multiplicity") if len(parts) == 4 else 1
            if u == v:
                raise GraphFormatError(f"self-loop at vertex {u + 1}", lineno)
            if k <= 0:
                raise GraphFormatError(f"multiplicity must be positive, got {k}", lineno)
            key = (min(u, v), max(u, v))
            if key in seen:
                raise GraphFormatError(f"duplicate edge {key[0] + 1} {key[1] + 1}", lineno)
            seen.add(key)
            edges.append((u, v, k))
        else:
            raise GraphFormatError(f"unknown line type {kind!r}", lineno)

    if n is None:
        raise GraphFormatError("missing header 'p cgraph <n> <m>'")
    if len(edges) != m:
        raise GraphFormatError(f"header announces {m} edge lines, found {len(edges)}")

    return ColoredGraph(n, edges, colors)


def serialize_graph(g: ColoredGraph) -> str:
    lines = [f"p cgraph {g.n} {g.m}"]
    for v, c in enumerate(g.colors):
        if c:
            lines.append(f"c {v + 1} {c}")
    for u, v, k in g.edges:
        lines.append(f"e {u + 1} {v + 1} {k}" if k > 1 else f"e {u + 1} {v + 1}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Builtin families and combinators
# ---------------------------------------------------------------------------

def builtin(name: str, params: Sequence[int] = ()) -> ColoredGraph:
    """Return the uncolored named graph."""
    params = list(params)

    def one(lo: int) -> int:
        if len(params) != 1:
            raise InvalidArgumentError(f"{name} takes exactly one parameter, got {len(params)}")
        if params[0] < lo:
            raise InvalidArgumentError(f"{name} needs a parameter >= {lo}, got {params[0]}")
        return params[0]

    if name == "cycle":
        n = one(3)
        return ColoredGraph(n, [(i, (i + 1) % n) for i in range(n)])
    if name == "path":
        n = one(1)
        return ColoredGraph(n, [(i, i + 1) for i in range(n - 1)])
    if name == "complete":
        n = one(1)
        return ColoredGraph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])
    if name == "frucht":
        if params:
            raise InvalidArgumentError("frucht takes no parameters")
        n = len(FRUCHT_LCF)
        pairs = {(i, (i + 1) % n) for i in range(n)}
        for i, jump in enumerate(FRUCHT_LCF):
            j = (i + jump) % n
            pairs.add((min(i, j), max(i, j)))
        pairs = {(min(u, v), max(u, v)) for u, v in pairs}
        return ColoredGraph(n, sorted(pairs))

    available = ", ".join(BUILTINS)
    raise InvalidArgumentError(f"Unknown builtin '{name}'. Available: {available}")


def disjoint_union(g: ColoredGraph, h: ColoredGraph) -> tuple[ColoredGraph, int]:
    """Place ``h`` after ``g``; returns the union and ``h``'s offset."""
    offset = g.n
    edges = list(g.edges) + [(u + offset, v + offset, k) for u, v, k in h.edges]
    return ColoredGraph(g.n + h.n, edges, g.colors + h.colors), offset


def relabel(g: ColoredGraph, perm: Sequence[int]) -> ColoredGraph:
    """Graph ``h`` with vertex ``v`` of ``g`` renamed ``perm[v]``."""
    if sorted(perm) != list(range(g.n)):
        raise InvalidArgumentError("relabeling is not a permutation of the vertices")
    colors = [0] * g.n
    for v, c in enumerate(g.colors):
        colors[perm[v]] = c
    return ColoredGraph(g.n, [(perm[u], perm[v], k) for u, v, k in g.edges], colors)
