"""Command-line front end.

Every subcommand writes its verdict lines to stdout and returns an exit
code: 0 for a positive verdict (isomorphic / member / discrete), 1 for a
negative one, 2 for usage or input errors. ``-`` reads standard input.
"""

from __future__ import annotations

import argparse
import io
import logging
import sys
from contextlib import redirect_stdout
from pathlib import Path

from ktinhofer import __version__
from ktinhofer.circuit import eval_circuit, parse_circuit
from ktinhofer.config import get_config
from ktinhofer.corpus import random_graph
from ktinhofer.errors import KTinhoferError
from ktinhofer.gadgets import gen_cfi, gen_hardness, gen_imp, gen_separator, write_labels
from ktinhofer.graph import BUILTINS, builtin, parse_graph, serialize_graph
from ktinhofer.groups import automorphisms, cycle_notation, exact_iso, orbit_partition
from ktinhofer.hierarchy import check, classify, tinhofer_threshold
from ktinhofer.refinement import dump_coloring, dump_quotient, quotient, refine
from ktinhofer.report import write_classification_workbook
from ktinhofer.tinhofer import (
    CellSelector,
    ChoicePolicy,
    build_ir_tree,
    export_dot,
    fpt_iso,
    parse_transcript,
    tinhofer_iso,
)

logger = logging.getLogger("ktinhofer.cli")

SELECTORS = [s.value for s in CellSelector]


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _load(path: str):
    return parse_graph(_read(path))


def _vertices(text: str | None) -> list[int]:
    if not text:
        return []
    return [int(t) - 1 for t in text.split(",") if t.strip()]


def _seq(vertices) -> str:
    return ",".join(str(v + 1) for v in vertices)


def _bijection_line(bijection) -> str:
    return "bijection " + " ".join(str(w + 1) for w in bijection)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_refine(args, settings) -> int:
    pi = refine(_load(args.graph), engine=args.engine or settings.engine)
    print(dump_coloring(pi), end="")
    return 0 if pi.is_discrete else 1


def cmd_quotient(args, settings) -> int:
    g = _load(args.graph)
    print(dump_quotient(quotient(g, refine(g, engine=settings.engine))), end="")
    return 0


def _policies(args):
    if args.policy.startswith("scripted:"):
        source = args.policy.split(":", 1)[1]
        if source == "-" or Path(source).is_file():
            return parse_transcript(_read(source)).policies()
    return (
        ChoicePolicy.parse(args.policy, seed=args.seed),
        ChoicePolicy.parse(args.policy, seed=args.seed + 1),
    )


def cmd_iso(args, settings) -> int:
    g, h = _load(args.graph), _load(args.other)
    sel = CellSelector(args.selector)
    if args.method == "tinhofer":
        pol_g, pol_h = _policies(args)
        verdict, transcript = tinhofer_iso(g, h, sel, pol_g, pol_h, settings=settings)
        print(transcript.render(), end="")
        if transcript.reason:
            logger.info("tinhofer: %s", transcript.reason)
        bijection = verdict.bijection
        isomorphic = verdict.isomorphic
    else:
        if args.method == "fpt":
            pol_g, pol_h = _policies(args)
            budget = g.n if args.budget is None else args.budget
            verdict = fpt_iso(g, h, budget, sel, pol_g, pol_h, settings=settings)
            bijection, isomorphic = verdict.bijection, verdict.isomorphic
        else:
            bijection = exact_iso(g, h, settings=settings)
            isomorphic = bijection is not None
        print(f"verdict {'isomorphic' if isomorphic else 'not-isomorphic'}")
    if isomorphic:
        print(_bijection_line(bijection))
    return 0 if isomorphic else 1


def cmd_aut(args, settings) -> int:
    auts = automorphisms(_load(args.graph), _vertices(args.fix), settings=settings)
    for perm in auts.perms:
        print(cycle_notation(perm))
    return 0


def cmd_orbits(args, settings) -> int:
    auts = automorphisms(_load(args.graph), _vertices(args.fix), settings=settings)
    for orbit in orbit_partition(auts).classes:
        print(" ".join(str(v + 1) for v in orbit))
    return 0


def cmd_ktin(args, settings) -> int:
    g = _load(args.graph)
    kwargs = {"settings": settings}
    if args.method in ("op", "irtree"):
        kwargs["prune"] = args.prune
    if args.method == "irtree":
        kwargs["sel"] = CellSelector(args.selector)
        kwargs["seed"] = args.seed
    verdict = check(g, args.k, args.method, **kwargs)
    print(f"member {str(verdict.member).lower()}")
    if verdict.witness is not None:
        gamma, mu = verdict.witness
        print(f"witness g={_seq(gamma)} h={_seq(mu)}")
    return 0 if verdict.member else 1


def cmd_classify(args, settings) -> int:
    report = classify(_load(args.graph), settings=settings)
    print(report.render(), end="")
    if args.xlsx:
        write_classification_workbook([(args.graph, report)], args.xlsx)
    return 0


def cmd_deficiency(args, settings) -> int:
    g = _load(args.graph)
    j = tinhofer_threshold(g, settings=settings)
    print(f"threshold {j}")
    print(f"deficiency {'none' if j == g.n else g.n - 1 - j}")
    return 0


def cmd_irtree(args, settings) -> int:
    tree = build_ir_tree(_load(args.graph), CellSelector(args.selector), args.depth, settings=settings)
    if args.dot:
        print(export_dot(tree), end="")
        return 0
    for d in range(args.depth + 1):
        level = tree.level(d)
        if not level:
            break
        print(f"level {d} nodes {len(level)}")
    leaves = tree.leaves()
    discrete = sum(1 for leaf in leaves if leaf.coloring.is_discrete)
    print(f"leaves {len(leaves)} discrete {discrete}")
    return 0


def cmd_gen(args, settings) -> int:
    labels = None
    if args.family == "cfi":
        g, labels = gen_cfi(args.k)
    elif args.family == "imp":
        g, labels = gen_imp(args.k)
    elif args.family == "sep":
        g, labels = gen_separator(args.k)
    elif args.family == "hard":
        g, labels = gen_hardness(parse_circuit(_read(args.circuit)), args.k, args.per_gate_pm)
    elif args.family == "builtin":
        g = builtin(args.name, args.params)
    else:
        g = random_graph(args.n, args.p, args.colors, args.seed)
    print(serialize_graph(g), end="")
    if labels is not None and args.labels:
        Path(args.labels).write_text(write_labels(labels), encoding="utf-8")
    return 0


def cmd_circuit_eval(args, settings) -> int:
    print(f"value {eval_circuit(parse_circuit(_read(args.circuit)))}")
    return 0


def cmd_serve(args, settings) -> int:
    import uvicorn

    uvicorn.run("service.app:app", host=args.host, port=args.port)
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ktinhofer", description="k-Tinhofer graph analysis toolkit")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="more logging (repeatable)")
    sub = parser.add_subparsers(dest="command", required=True)

    def graph_cmd(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("graph", help="cgraph file, or - for stdin")
        p.set_defaults(func=func)
        return p

    p = graph_cmd("refine", cmd_refine, "stable coloring")
    p.add_argument("--engine", choices=["fast", "naive"])
    graph_cmd("quotient", cmd_quotient, "quotient graph of the stable coloring")

    p = sub.add_parser("iso", help="isomorphism test")
    p.add_argument("graph")
    p.add_argument("other")
    p.add_argument("--method", choices=["tinhofer", "fpt", "exact"], default="tinhofer")
    p.add_argument("--selector", choices=SELECTORS, default=CellSelector.MIN_COLOR.value)
    p.add_argument("--policy", default="first", help="first, random, scripted:<v,...> or scripted:<transcript>")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int)
    p.set_defaults(func=cmd_iso)

    for name, func in (("aut", cmd_aut), ("orbits", cmd_orbits)):
        p = graph_cmd(name, func, f"automorphism {name}")
        p.add_argument("--fix", help="1-based vertices fixed pointwise, comma separated")

    p = graph_cmd("ktin", cmd_ktin, "k-Tinhofer membership")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--method", choices=["op", "alg", "irtree"], default="op")
    p.add_argument("--selector", choices=SELECTORS, default=CellSelector.MIN_COLOR.value)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--prune", action="store_true", help="try one vertex per automorphism orbit")

    p = graph_cmd("classify", cmd_classify, "refinable / threshold / deficiency report")
    p.add_argument("--xlsx", help="also write the report to this workbook")
    graph_cmd("deficiency", cmd_deficiency, "Tinhofer deficiency")

    p = graph_cmd("irtree", cmd_irtree, "IR-tree summary or DOT export")
    p.add_argument("--depth", type=int, default=1)
    p.add_argument("--selector", choices=SELECTORS, default=CellSelector.MIN_COLOR.value)
    p.add_argument("--dot", action="store_true")

    gen = sub.add_parser("gen", help="graph generators")
    gen.set_defaults(func=cmd_gen)
    families = gen.add_subparsers(dest="family", required=True)
    for family in ("cfi", "imp", "sep"):
        p = families.add_parser(family)
        p.add_argument("k", type=int)
        p.add_argument("--labels", help="write the pair labels here")
    p = families.add_parser("hard")
    p.add_argument("circuit")
    p.add_argument("k", type=int)
    p.add_argument("--per-gate-pm", action="store_true")
    p.add_argument("--labels")
    p = families.add_parser("builtin")
    p.add_argument("name", choices=BUILTINS)
    p.add_argument("params", type=int, nargs="*")
    p = families.add_parser("random")
    p.add_argument("n", type=int)
    p.add_argument("p", type=float)
    p.add_argument("--colors", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("circuit-eval", help="evaluate a monotone circuit")
    p.add_argument("circuit")
    p.set_defaults(func=cmd_circuit_eval)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8090)
    p.set_defaults(func=cmd_serve)
    return parser


def _setup_logging(verbose: int, level_name: str) -> None:
    level = {0: getattr(logging, level_name, logging.WARNING), 1: logging.INFO}.get(verbose, logging.DEBUG)
    logging.basicConfig(format="%(levelname)s %(name)s: %(message)s")
    logging.getLogger().setLevel(level)


def run(argv: list[str]) -> tuple[int, str]:
    """Execute one invocation; returns ``(exit code, stdout text)``."""
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return (e.code if isinstance(e.code, int) else 2), ""

    try:
        settings = get_config()
    except ValueError as e:
        print(f"configuration error: {e}", file=sys.stderr)
        return 2, ""
    _setup_logging(args.verbose, settings.log_level)
    if args.command == "serve":
        return cmd_serve(args, settings), ""

    buffer = io.StringIO()
    try:
        with redirect_stdout(buffer):
            code = args.func(args, settings)
    except (KTinhoferError, KeyError, OSError, ValueError) as e:
        message = e.args[0] if isinstance(e, KeyError) and e.args else e
        print(f"error: {message}", file=sys.stderr)
        return 2, ""
    return code, buffer.getvalue()


def main(argv: list[str] | None = None) -> None:
    code, output = run(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(output)
    sys.exit(code)


if __name__ == "__main__":
    main()
