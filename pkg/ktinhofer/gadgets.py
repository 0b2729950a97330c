"""Generators for CFI gadgets, IMP gadgets, the separating graph H and the
circuit-reduction graph N.

Colors are handed out in construction order (pairs first, then gadget
internals), so every generator is deterministic.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field

from ktinhofer.circuit import AND, CONST0, CONST1, OPERATORS, Circuit
from ktinhofer.errors import GraphFormatError, InvalidArgumentError
from ktinhofer.graph import ColoredGraph

logger = logging.getLogger("ktinhofer.gadgets")

Pair = tuple[int, int]


@dataclass
class PairMap:
    """Labels of the external pairs and intermediate sets of a gadget."""

    pairs: dict[str, Pair] = field(default_factory=dict)
    sets: dict[str, tuple[int, ...]] = field(default_factory=dict)

    def __getitem__(self, label: str) -> Pair:
        return self.pairs[label]

    def pair_list(self, labels) -> list[Pair]:
        return [self.pairs[label] for label in labels]


class _Builder:
    def __init__(self):
        self.n = 0
        self.colors: list[int] = []
        self.edges: list[tuple[int, int, int]] = []
        self.next_color = 0
        self.labels = PairMap()

    def color(self) -> int:
        c = self.next_color
        self.next_color += 1
        return c

    def vertices(self, count: int, color: int) -> list[int]:
        out = list(range(self.n, self.n + count))
        self.n += count
        self.colors.extend([color] * count)
        return out

    def pair(self, label: str, colors: tuple[int, int] | None = None) -> Pair:
        if colors is None:
            c = self.color()
            colors = (c, c)
        a = self.vertices(1, colors[0])[0]
        b = self.vertices(1, colors[1])[0]
        self.labels.pairs[label] = (a, b)
        return a, b

    def edge(self, u: int, v: int, mult: int = 1) -> None:
        self.edges.append((u, v, mult))

    def cfi(self, pairs: list[Pair], label: str) -> list[int]:
        """CFI gadget on ``pairs``: one intermediate per even-weight bit string."""
        k = len(pairs)
        strings = [bits for bits in itertools.product((0, 1), repeat=k) if sum(bits) % 2 == 0]
        middle = self.vertices(len(strings), self.color())
        for x, bits in zip(middle, strings):
            for (a, b), bit in zip(pairs, bits):
                self.edge(x, a if bit == 0 else b)
        self.labels.sets[label] = tuple(middle)
        return middle

    def imp_wire(self, p0: Pair, p1: Pair, p2: Pair) -> None:
        """a0-a1, a0-a2, b0-b1, b0-b2."""
        for target in (p1, p2):
            self.edge(p0[0], target[0])
            self.edge(p0[1], target[1])

    def build(self) -> tuple[ColoredGraph, PairMap]:
        return ColoredGraph(self.n, self.edges, self.colors), self.labels


def _need(k: int, low: int, what: str) -> None:
    if k < low:
        raise InvalidArgumentError(f"{what} needs k >= {low}, got {k}")


def gen_cfi(k: int) -> tuple[ColoredGraph, PairMap]:
    """X_k on pairs P1..Pk with intermediate set F."""
    _need(k, 2, "gen_cfi")
    b = _Builder()
    pairs = [b.pair(f"P{i}") for i in range(1, k + 1)]
    b.cfi(pairs, "F")
    return b.build()


def gen_imp(k: int) -> tuple[ColoredGraph, PairMap]:
    """Y_k: X_k plus P0 wired to P1 and P2 with matched polarity."""
    _need(k, 2, "gen_imp")
    b = _Builder()
    pairs = [b.pair(f"P{i}") for i in range(1, k + 1)]
    b.cfi(pairs, "F")
    p0 = b.pair("P0")
    b.imp_wire(p0, pairs[0], pairs[1])
    return b.build()


def gen_separator(k: int) -> tuple[ColoredGraph, PairMap]:
    """H: X3 on (P1, P2, P0) and X_{k+2} on (P1, P2, P3, ..., P_{k+2}).

    P0 and the X_{k+2} outputs get the smallest colors, so the min-color
    selector reaches them before the shared inputs.
    """
    _need(k, 1, "gen_separator")
    b = _Builder()
    p0 = b.pair("P0")
    outputs = [b.pair(f"P{i}") for i in range(3, k + 3)]
    p1 = b.pair("P1")
    p2 = b.pair("P2")
    b.cfi([p1, p2, p0], "F")
    b.cfi([p1, p2] + outputs, "F'")
    g, labels = b.build()
    logger.info("separator k=%d: %d vertices, %d edges", k, g.n, g.m)
    return g, labels


def gen_hardness(c: Circuit, k: int, per_gate_pm: bool = False) -> tuple[ColoredGraph, PairMap]:
    """The reduction graph N for circuit ``c`` and level ``k``.

    Gate ``i`` (1-based) owns pair ``P<i>``. AND gates become X3 gadgets, OR
    gates two IMP gadgets sharing the output pair. Every AND/OR output pair
    drives an IMP gadget ``g<i>.Y`` over X_{k+4}, whose last two pairs feed an
    X3 with output ``Pm`` (one shared pair, or ``g<i>.Pm`` per gate). Pm is
    joined to every CONST0 pair with matched polarity at multiplicity 2.
    """
    _need(k, 1, "gen_hardness")
    if not c.count(*OPERATORS):
        raise InvalidArgumentError("circuit needs at least one AND/OR gate")
    for i, gate in enumerate(c.gates, start=1):
        if gate.kind in OPERATORS and gate.a == gate.b:
            raise InvalidArgumentError(f"gate {i} uses the same input twice")

    b = _Builder()
    zero = None
    gate_pairs: list[Pair] = []
    for i, gate in enumerate(c.gates, start=1):
        if gate.kind == CONST0:
            if zero is None:
                zero = b.color()
            gate_pairs.append(b.pair(f"P{i}", (zero, zero)))
        elif gate.kind == CONST1:
            gate_pairs.append(b.pair(f"P{i}", (b.color(), b.color())))
        else:
            gate_pairs.append(b.pair(f"P{i}"))

    for i, gate in enumerate(c.gates, start=1):
        if gate.kind in (CONST0, CONST1):
            continue
        out = gate_pairs[i - 1]
        left, right = gate_pairs[gate.a], gate_pairs[gate.b]
        if gate.kind == AND:
            b.cfi([left, right, out], f"g{i}.F")
        else:
            for name, source in ((gate.a + 1, left), (gate.b + 1, right)):
                first = b.pair(f"g{i}.P{name}'")
                second = b.pair(f"g{i}.P{name}''")
                b.imp_wire(source, first, second)
                b.cfi([first, second, out], f"g{i}.F{name}")

    shared_pm = None
    pm_pairs: list[Pair] = []
    for i, gate in enumerate(c.gates, start=1):
        if gate.kind not in OPERATORS:
            continue
        out = gate_pairs[i - 1]
        d = b.pair(f"g{i}.Y.P0")
        b.edge(out[0], d[0])
        b.edge(out[1], d[1])
        qs = [b.pair(f"g{i}.Y.P{j}") for j in range(1, k + 5)]
        b.imp_wire(d, qs[0], qs[1])
        b.cfi(qs, f"g{i}.Y.F")
        if per_gate_pm:
            pm = b.pair(f"g{i}.Pm")
            pm_pairs.append(pm)
        else:
            if shared_pm is None:
                shared_pm = b.pair("Pm")
                pm_pairs.append(shared_pm)
            pm = shared_pm
        b.cfi([qs[-2], qs[-1], pm], f"g{i}.Y.F'")

    for i, gate in enumerate(c.gates, start=1):
        if gate.kind != CONST0:
            continue
        a, z = gate_pairs[i - 1]
        for am, bm in pm_pairs:
            b.edge(am, a, 2)
            b.edge(bm, z, 2)

    g, labels = b.build()
    logger.info("hardness k=%d: %d gates -> %d vertices, %d edges", k, len(c.gates), g.n, g.m)
    return g, labels


def hardness_witness(
    c: Circuit,
    labels: PairMap,
    k: int,
    gate: int | None = None,
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Sequences of length k+1 that separate two copies of N.

    Different vertices of the gate's Pm, then the first vertex of
    ``Y.P3 .. Y.P{k+2}`` in both copies.
    """
    if gate is None:
        gate = c.output + 1
    if c.gates[gate - 1].kind not in OPERATORS:
        raise InvalidArgumentError(f"gate {gate} is not an AND/OR gate")
    pm = labels.pairs.get(f"g{gate}.Pm") or labels.pairs["Pm"]
    same = tuple(labels[f"g{gate}.Y.P{j}"][0] for j in range(3, k + 3))
    return (pm[0],) + same, (pm[1],) + same


def gadget_pairs(labels: PairMap, prefix: str = "") -> list[str]:
    """Pair labels under ``prefix`` in insertion order."""
    return [label for label in labels.pairs if label.startswith(prefix)]


# ---------------------------------------------------------------------------
# Sidecar label files
# ---------------------------------------------------------------------------

def write_labels(labels: PairMap) -> str:
    lines = [f"pair {label} {a + 1} {b + 1}" for label, (a, b) in labels.pairs.items()]
    lines += [
        f"set {label} " + " ".join(str(v + 1) for v in members)
        for label, members in labels.sets.items()
    ]
    return "\n".join(lines) + "\n"


def parse_labels(text: str) -> PairMap:
    labels = PairMap()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        parts = raw.split()
        if not parts or parts[0].startswith("#"):
            continue
        try:
            if parts[0] == "pair" and len(parts) == 4:
                labels.pairs[parts[1]] = (int(parts[2]) - 1, int(parts[3]) - 1)
            elif parts[0] == "set" and len(parts) >= 3:
                labels.sets[parts[1]] = tuple(int(t) - 1 for t in parts[2:])
            else:
                raise GraphFormatError(f"unexpected label line {raw!r}", lineno)
        except ValueError as e:
            if isinstance(e, GraphFormatError):
                raise
            raise GraphFormatError(f"bad vertex in {raw!r}", lineno) from None
    return labels
