"""Tinhofer's isomorphism test, IR-trees and the FPT isomorphism algorithm.

The two input graphs are always refined jointly (as a disjoint union), so a
cell of ``g`` and a cell of ``h`` correspond exactly when they carry the
same color identifier.
"""

from __future__ import annotations

import itertools
import logging
import os
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterator, Sequence

import numpy as np
from jinja2 import Environment, FileSystemLoader

from ktinhofer.config import Settings, get_config
from ktinhofer.errors import GraphFormatError, InvalidArgumentError, PolicyError, SizeBoundError
from ktinhofer.graph import ColoredGraph
from ktinhofer.groups import verify_isomorphism
from ktinhofer.refinement import (
    QuotientGraph,
    StableColoring,
    halves,
    individualize,
    quotient,
    refine,
    refine_joint,
)

logger = logging.getLogger("ktinhofer.tinhofer")

TEMPLATE_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "templates")


# ---------------------------------------------------------------------------
# Cell selectors and choice policies
# ---------------------------------------------------------------------------

class CellSelector(str, Enum):
    MIN_COLOR = "min-color"
    MAX_SIZE = "max-size"
    FIRST = "first"

    def select(self, sizes: dict[int, int]) -> int | None:
        """Pick a non-singleton cell from ``color -> size``; None if discrete."""
        candidates = [(c, s) for c, s in sizes.items() if s > 1]
        if not candidates:
            return None
        if self is CellSelector.MIN_COLOR:
            return min(c for c, _ in candidates)
        if self is CellSelector.MAX_SIZE:
            return min(candidates, key=lambda cs: (-cs[1], cs[0]))[0]
        return min(candidates, key=lambda cs: (cs[1], cs[0]))[0]


def _sizes(assignment: Sequence[int]) -> dict[int, int]:
    out: dict[int, int] = {}
    for c in assignment:
        out[c] = out.get(c, 0) + 1
    return out


Chooser = Callable[[tuple[int, ...], int], int]


@dataclass(frozen=True)
class ChoicePolicy:
    """How a vertex is picked from the selected cell.

    ``kind`` is ``first-vertex``, ``seeded-random`` or ``scripted``.
    """

    kind: str = "first-vertex"
    seed: int = 0
    script: tuple[int, ...] = ()

    @classmethod
    def first(cls) -> "ChoicePolicy":
        return cls("first-vertex")

    @classmethod
    def random(cls, seed: int) -> "ChoicePolicy":
        return cls("seeded-random", seed=seed)

    @classmethod
    def scripted(cls, vertices: Sequence[int]) -> "ChoicePolicy":
        return cls("scripted", script=tuple(vertices))

    @classmethod
    def parse(cls, text: str, seed: int = 0) -> "ChoicePolicy":
        """``first``, ``random`` or ``scripted:<1-based,comma,separated>``."""
        if text in ("first", "first-vertex"):
            return cls.first()
        if text in ("random", "seeded-random"):
            return cls.random(seed)
        if text.startswith("scripted:"):
            body = text.split(":", 1)[1]
            try:
                return cls.scripted([int(t) - 1 for t in body.split(",") if t.strip()])
            except ValueError:
                raise InvalidArgumentError(f"bad scripted policy {text!r}") from None
        raise InvalidArgumentError(f"unknown policy {text!r} (first, random, scripted:<v,...>)")

    def chooser(self) -> Chooser:
        """A fresh stateful chooser for one run."""
        if self.kind == "first-vertex":
            return lambda cell, step: cell[0]
        if self.kind == "seeded-random":
            rng = np.random.default_rng(self.seed)
            return lambda cell, step: cell[int(rng.integers(len(cell)))]
        if self.kind == "scripted":
            script = self.script

            def choose(cell: tuple[int, ...], step: int) -> int:
                if step > len(script):
                    raise PolicyError(f"script has no entry for step {step}")
                v = script[step - 1]
                if v not in cell:
                    raise PolicyError(
                        f"step {step}: scripted vertex {v + 1} is not in the selected cell "
                        f"{[x + 1 for x in cell]}"
                    )
                return v

            return choose
        raise InvalidArgumentError(f"unknown policy kind {self.kind!r}")


# ---------------------------------------------------------------------------
# Tinhofer's algorithm
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TranscriptStep:
    color: int
    g_vertex: int
    h_vertex: int
    sizes: tuple[int, ...]


@dataclass
class RunTranscript:
    steps: list[TranscriptStep] = field(default_factory=list)
    isomorphic: bool = False
    reason: str = ""

    def render(self) -> str:
        lines = [
            f"step {i} color {s.color} g {s.g_vertex + 1} h {s.h_vertex + 1}\n"
            for i, s in enumerate(self.steps, start=1)
        ]
        lines.append(f"verdict {'isomorphic' if self.isomorphic else 'not-isomorphic'}\n")
        return "".join(lines)

    def policies(self) -> tuple[ChoicePolicy, ChoicePolicy]:
        """Scripted policies that replay this run."""
        return (
            ChoicePolicy.scripted([s.g_vertex for s in self.steps]),
            ChoicePolicy.scripted([s.h_vertex for s in self.steps]),
        )


def parse_transcript(text: str) -> RunTranscript:
    """Read back the ``step ...`` lines written by ``RunTranscript.render``."""
    transcript = RunTranscript()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        parts = raw.split()
        if not parts or parts[0].startswith("#"):
            continue
        if parts[0] == "step" and len(parts) == 8:
            try:
                transcript.steps.append(
                    TranscriptStep(int(parts[3]), int(parts[5]) - 1, int(parts[7]) - 1, ())
                )
            except ValueError:
                raise GraphFormatError("malformed step line", lineno) from None
        elif parts[0] == "verdict" and len(parts) == 2:
            transcript.isomorphic = parts[1] == "isomorphic"
        elif parts[0] == "bijection":
            continue
        else:
            raise GraphFormatError(f"unexpected transcript line {raw!r}", lineno)
    return transcript


@dataclass(frozen=True)
class Verdict:
    isomorphic: bool
    bijection: tuple[int, ...] | None = None


def _bijection(left: Sequence[int], right: Sequence[int]) -> tuple[int, ...]:
    position = {c: v for v, c in enumerate(right)}
    return tuple(position[c] for c in left)


def _joint_steps(
    g: ColoredGraph,
    h: ColoredGraph,
    sel: CellSelector,
    choose_g: Chooser,
    choose_h: Chooser,
    max_steps: int,
    transcript: RunTranscript,
    engine: str,
) -> tuple[StableColoring | None, int]:
    """Run up to ``max_steps`` joint individualization steps.

    Returns the final joint coloring (None once the color multisets differ)
    and ``h``'s offset in the union.
    """
    pi, offset = refine_joint(g, h, engine=engine)
    step = 0
    while True:
        left, right = halves(pi, offset)
        left_sizes, right_sizes = _sizes(left), _sizes(right)
        if left_sizes != right_sizes:
            transcript.reason = f"color multisets differ after step {step}"
            return None, offset
        if step >= max_steps:
            return pi, offset
        c = sel.select(left_sizes)
        if c is None:
            return pi, offset
        step += 1
        cell_g = tuple(v for v, col in enumerate(left) if col == c)
        cell_h = tuple(v for v, col in enumerate(right) if col == c)
        u = choose_g(cell_g, step)
        v = choose_h(cell_h, step)
        pi = individualize(pi, [u, v + offset], engine=engine)
        sizes = tuple(sorted(_sizes(pi.assignment[:offset]).values(), reverse=True))
        transcript.steps.append(TranscriptStep(c, u, v, sizes))
        logger.debug("step %d: cell %d, g %d, h %d", step, c, u, v)


def tinhofer_iso(
    g: ColoredGraph,
    h: ColoredGraph,
    sel: CellSelector = CellSelector.MIN_COLOR,
    pol_g: ChoicePolicy | None = None,
    pol_h: ChoicePolicy | None = None,
    settings: Settings | None = None,
) -> tuple[Verdict, RunTranscript]:
    """Tinhofer's individualization-refinement isomorphism test.

    An ``Isomorphic`` verdict always carries a bijection that was verified
    edge by edge. For graphs that are not Tinhofer a ``NotIsomorphic``
    verdict may be wrong when ``g`` and ``h`` are in fact isomorphic.
    """
    settings = settings or get_config()
    pol_g = pol_g or ChoicePolicy.first()
    pol_h = pol_h or ChoicePolicy.first()
    transcript = RunTranscript()
    if g.n != h.n:
        transcript.reason = f"vertex counts differ ({g.n} vs {h.n})"
        return Verdict(False), transcript

    pi, offset = _joint_steps(
        g, h, sel, pol_g.chooser(), pol_h.chooser(), g.n, transcript, settings.engine
    )
    if pi is None:
        return Verdict(False), transcript

    left, right = halves(pi, offset)
    bijection = _bijection(left, right)
    if verify_isomorphism(g, h, bijection):
        transcript.isomorphic = True
        logger.info("isomorphic after %d steps", len(transcript.steps))
        return Verdict(True, bijection), transcript
    transcript.reason = "final color-matching bijection is not an isomorphism"
    return Verdict(False), transcript


def fpt_iso(
    g: ColoredGraph,
    h: ColoredGraph,
    budget: int,
    sel: CellSelector = CellSelector.MIN_COLOR,
    pol_g: ChoicePolicy | None = None,
    pol_h: ChoicePolicy | None = None,
    settings: Settings | None = None,
) -> Verdict:
    """Individualize ``n - budget`` times, then brute-force the remainder.

    Correct whenever ``g`` is ``(n - budget)``-Tinhofer; that precondition is
    not checked here.
    """
    settings = settings or get_config()
    if not 0 <= budget <= g.n:
        raise InvalidArgumentError(f"budget must lie in 0..{g.n}, got {budget}")
    if g.n != h.n:
        return Verdict(False)

    pol_g = pol_g or ChoicePolicy.first()
    pol_h = pol_h or ChoicePolicy.first()
    transcript = RunTranscript()
    pi, offset = _joint_steps(
        g, h, sel, pol_g.chooser(), pol_h.chooser(), g.n - budget, transcript, settings.engine
    )
    if pi is None:
        return Verdict(False)

    left, right = halves(pi, offset)
    g_cells: dict[int, list[int]] = {}
    h_cells: dict[int, list[int]] = {}
    for v, c in enumerate(left):
        g_cells.setdefault(c, []).append(v)
    for v, c in enumerate(right):
        h_cells.setdefault(c, []).append(v)

    colors = sorted(g_cells)
    free = [c for c in colors if len(g_cells[c]) > 1]
    logger.debug(
        "fpt: %d steps done, %d vertices left to brute-force",
        len(transcript.steps), sum(len(g_cells[c]) for c in free),
    )
    base = [0] * g.n
    for c in colors:
        if len(g_cells[c]) == 1:
            base[g_cells[c][0]] = h_cells[c][0]

    for images in itertools.product(*(itertools.permutations(h_cells[c]) for c in free)):
        bijection = list(base)
        for c, image in zip(free, images):
            for u, w in zip(g_cells[c], image):
                bijection[u] = w
        if verify_isomorphism(g, h, bijection):
            return Verdict(True, tuple(bijection))
    return Verdict(False)


# ---------------------------------------------------------------------------
# IR-trees
# ---------------------------------------------------------------------------

@dataclass
class IRNode:
    gamma: tuple[int, ...]
    coloring: StableColoring
    quotient: QuotientGraph
    cell: int | None = None
    children: list["IRNode"] = field(default_factory=list)

    @property
    def profile(self) -> tuple[int, ...]:
        return tuple(sorted((len(c) for c in self.coloring.cells()), reverse=True))


@dataclass
class IRTree:
    root: IRNode
    selector: CellSelector
    depth: int

    def nodes(self) -> Iterator[IRNode]:
        """Preorder, children in ascending vertex order."""
        stack = [self.root]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def leaves(self) -> list[IRNode]:
        return [node for node in self.nodes() if not node.children]

    def level(self, depth: int) -> list[IRNode]:
        return [node for node in self.nodes() if len(node.gamma) == depth]

    @property
    def size(self) -> int:
        return sum(1 for _ in self.nodes())


def build_ir_tree(
    g: ColoredGraph,
    sel: CellSelector = CellSelector.MIN_COLOR,
    depth: int = 1,
    settings: Settings | None = None,
) -> IRTree:
    """Breadth-complete IR-tree of ``g`` down to ``depth`` (or discreteness)."""
    settings = settings or get_config()
    if depth < 0:
        raise InvalidArgumentError(f"depth must be nonnegative, got {depth}")

    root_coloring = refine(g, engine=settings.engine)
    root = IRNode((), root_coloring, quotient(g, root_coloring))
    count = 1
    frontier = [root]
    for _ in range(depth):
        next_frontier = []
        for node in frontier:
            node.cell = sel.select(_sizes(node.coloring.assignment))
            if node.cell is None:
                continue
            for v in node.coloring.classes[node.cell]:
                count += 1
                if count > settings.tree_node_cap:
                    raise SizeBoundError("IR-tree", settings.tree_node_cap, "KTIN_TREE_NODE_CAP")
                coloring = individualize(node.coloring, [v], engine=settings.engine)
                child = IRNode(node.gamma + (v,), coloring, quotient(g, coloring))
                node.children.append(child)
                next_frontier.append(child)
        frontier = next_frontier
    logger.debug("IR-tree: %d nodes to depth %d", count, depth)
    return IRTree(root, sel, depth)


_env = Environment(
    loader=FileSystemLoader(TEMPLATE_DIR),
    keep_trailing_newline=True,
    trim_blocks=True,
    lstrip_blocks=True,
    autoescape=False,
)


def export_dot(t: IRTree) -> str:
    """Deterministic DOT digraph; labels show the sequence and class sizes."""
    index: dict[int, int] = {}
    nodes = []
    edges = []
    for i, node in enumerate(t.nodes()):
        index[id(node)] = i
        gamma = "(" + " ".join(str(v + 1) for v in node.gamma) + ")"
        nodes.append({"id": i, "gamma": gamma, "profile": ",".join(str(s) for s in node.profile)})
    for node in t.nodes():
        for child in node.children:
            edges.append((index[id(node)], index[id(child)]))
    return _env.get_template("irtree.dot.j2").render(
        selector=t.selector.value, depth=t.depth, nodes=nodes, edges=edges
    )
