"""Seeded random graphs, relabelings and circuits.

All randomness goes through ``numpy.random.default_rng`` so a seed fixes
the output on every platform.
"""

from __future__ import annotations

import numpy as np

from ktinhofer.circuit import AND, CONST0, CONST1, OR, Circuit, Gate
from ktinhofer.errors import InvalidArgumentError
from ktinhofer.graph import ColoredGraph, relabel


def random_graph(n: int, p: float, colors: int = 1, seed: int = 0) -> ColoredGraph:
    """G(n, p) with vertex colors drawn uniformly from ``0..colors-1``."""
    if n < 0 or not 0.0 <= p <= 1.0 or colors < 1:
        raise InvalidArgumentError(f"bad random graph parameters n={n} p={p} colors={colors}")
    rng = np.random.default_rng(seed)
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    palette = rng.integers(colors, size=n) if n else []
    return ColoredGraph(n, edges, [int(c) for c in palette])


def random_sparse_graph(n: int, m: int, seed: int = 0) -> ColoredGraph:
    """Uniform random simple graph with exactly ``m`` edges."""
    if m > n * (n - 1) // 2:
        raise InvalidArgumentError(f"{m} edges do not fit on {n} vertices")
    rng = np.random.default_rng(seed)
    chosen: set[tuple[int, int]] = set()
    while len(chosen) < m:
        batch = rng.integers(n, size=(2 * (m - len(chosen)) + 16, 2))
        for u, v in batch.tolist():
            if u != v:
                chosen.add((u, v) if u < v else (v, u))
                if len(chosen) == m:
                    break
    return ColoredGraph(n, sorted(chosen))


def random_permutation(n: int, seed: int = 0) -> list[int]:
    return [int(x) for x in np.random.default_rng(seed).permutation(n)]


def random_relabel(g: ColoredGraph, seed: int = 0) -> tuple[ColoredGraph, list[int]]:
    """``(h, sigma)`` with vertex ``v`` of ``g`` named ``sigma[v]`` in ``h``."""
    sigma = random_permutation(g.n, seed)
    return relabel(g, sigma), sigma


def random_circuit(gates: int, seed: int = 0, require_const0: bool = True) -> Circuit:
    """Random monotone circuit; the last gate is the output.

    At least two constants come first, then AND/OR gates over earlier gates.
    """
    if gates < 3:
        raise InvalidArgumentError(f"a circuit with an AND/OR gate needs at least 3 gates, got {gates}")
    rng = np.random.default_rng(seed)
    n_const = int(rng.integers(2, gates)) if gates > 3 else 2
    out: list[Gate] = []
    for i in range(n_const):
        out.append(Gate(CONST0 if rng.random() < 0.5 else CONST1))
    if require_const0 and all(gate.kind != CONST0 for gate in out):
        out[int(rng.integers(n_const))] = Gate(CONST0)
    for i in range(n_const, gates):
        a, b = (int(x) for x in rng.choice(i, size=2, replace=False))
        out.append(Gate(AND if rng.random() < 0.5 else OR, min(a, b), max(a, b)))
    return Circuit(tuple(out), gates - 1)
