"""Command-line surface.

Exit codes: 0 success / decision true; 1 decision false / no protocol;
2 usage or validation error; 3 budget exceeded.  All output is
deterministic for a given input and flag set.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import formula as fm
from . import planner as pl
from . import protocol as ps
from . import scenario as sc
from .automata import dfa_to_dot, shortest_accepted
from .errors import BudgetExceeded, DelplanError
from .models import iterate
from .satcompile import SatCompiler
from .structure import build_representation, verify_against_oracle

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="delplan",
        description="Epistemic planning and protocol synthesis over automata-"
        "compiled history forests.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser) -> None:
        p.add_argument("file", help="scenario JSON file")
        p.add_argument("--max-states", type=int, default=10**6,
                       help="state budget per subset construction")

    p_check = sub.add_parser("check", help="model-check a formula at a world")
    add_common(p_check)
    p_check.add_argument("--formula", required=True)
    p_check.add_argument("--world", help="defaults to the scenario point")

    p_product = sub.add_parser("product", help="print the n-fold update product")
    add_common(p_product)
    p_product.add_argument("-n", type=int, default=1, help="number of iterations")
    p_product.add_argument("--max-worlds", type=int, default=10**6)

    p_compile = sub.add_parser("compile", help="build the automata representation")
    add_common(p_compile)
    p_compile.add_argument("--dot", metavar="DIR", help="dump DOT files to DIR")

    p_plan = sub.add_parser("plan", help="solve the planning problem")
    add_common(p_plan)
    p_plan.add_argument("--goal", help="overrides the scenario goal")
    p_plan.add_argument("--enumerate", action="store_true", dest="enumerate_plans")
    p_plan.add_argument("--max-len", type=int, default=8)
    p_plan.add_argument("--max-plans", type=int, default=100)
    p_plan.add_argument("--dot", metavar="FILE", help="write plan automaton DOT")
    p_plan.add_argument("--json", metavar="FILE", help="write plan automaton JSON")
    p_plan.add_argument("--emit-sat-dot", metavar="DIR",
                        help="dump every memoized satisfaction automaton")

    p_synth = sub.add_parser("synth", help="synthesize an epistemic protocol")
    add_common(p_synth)
    p_synth.add_argument("--goal", help="temporal goal, overrides the scenario goal")
    p_synth.add_argument("--serial", choices=["on", "off"],
                         help="require every protocol node to be extendable")
    p_synth.add_argument("--max-depth", type=int, default=5,
                         help="depth bound for printed histories")
    p_synth.add_argument("--dot", metavar="FILE")
    p_synth.add_argument("--json", metavar="FILE")

    p_explore = sub.add_parser("explore", help="per-level forest statistics")
    add_common(p_explore)
    p_explore.add_argument("--depth", type=int, required=True)
    p_explore.add_argument("--verify", action="store_true",
                           help="cross-check the automata against brute force")
    p_explore.add_argument("--max-worlds", type=int, default=10**6)

    p_report = sub.add_parser(
        "report", help="write size and blowup reports (TSV + PNG figures)"
    )
    add_common(p_report)
    p_report.add_argument("--goal", help="formula for the blowup report")
    p_report.add_argument("--out", required=True, metavar="DIR")
    return parser


def _load(path: str) -> sc.Scenario:
    return sc.load(path)


def cmd_check(args) -> int:
    scen = _load(args.file)
    f = fm.parse_formula(args.formula, set(scen.ap), set(scen.agents))
    world = args.world or scen.model.point
    if world is None:
        print("error: no world given and the scenario has no point", file=sys.stderr)
        return EXIT_USAGE
    result = scen.model.check(world, f)
    print("true" if result else "false")
    return EXIT_OK if result else EXIT_NEGATIVE


def cmd_product(args) -> int:
    scen = _load(args.file)
    m = iterate(scen.model, scen.events, args.n, max_worlds=args.max_worlds)
    print(f"level {args.n}: {len(m.worlds)} worlds, {m.size} edges")
    for w in m.worlds:
        val = ",".join(sorted(m.val_of(w)))
        print(f"{w}\t{{{val}}}")
    return EXIT_OK


def cmd_compile(args) -> int:
    scen = _load(args.file)
    rep = build_representation(scen.model, scen.events)
    sys.stdout.write(rep.size_report())
    if args.dot:
        out = Path(args.dot)
        out.mkdir(parents=True, exist_ok=True)
        for name, dot in rep.to_dot().items():
            (out / f"{name}.dot").write_text(dot)
        print(f"wrote {len(rep.to_dot())} DOT files to {out}")
    return EXIT_OK


def cmd_plan(args) -> int:
    scen = _load(args.file)
    goal = None
    if args.goal is not None:
        goal = fm.parse_formula(args.goal, set(scen.ap), set(scen.agents))
    inst = scen.planning_instance(goal)
    rep = build_representation(scen.model, scen.events)
    compiler = SatCompiler(rep, max_states=args.max_states)
    pa = pl.synthesize_plans(inst, rep=rep, compiler=compiler, max_states=args.max_states)
    if args.emit_sat_dot:
        out = Path(args.emit_sat_dot)
        out.mkdir(parents=True, exist_ok=True)
        for idx, (text, dfa) in enumerate(sorted(compiler.memoized().items())):
            (out / f"sat_{idx:03d}.dot").write_text(dfa_to_dot(dfa, f"sat_{idx:03d}"))
    if args.dot:
        Path(args.dot).write_text(pa.to_dot())
    if args.json:
        Path(args.json).write_text(pa.to_json())
    word = shortest_accepted(pa.dfa)
    if word is None:
        print("no plan")
        return EXIT_NEGATIVE
    plan = pa.dfa.alphabet.spell(word)
    print("plan " + (" ".join(plan) if plan else "<empty>"))
    if args.enumerate_plans:
        plans, truncated = pl.enumerate_plans(pa, args.max_len, args.max_plans)
        for p in plans:
            print(" ".join(p) if p else "<empty>")
        if truncated:
            print(f"... truncated at {args.max_plans} plans")
    return EXIT_OK


def cmd_synth(args) -> int:
    scen = _load(args.file)
    goal_text = args.goal or scen.goal_text
    if goal_text is None:
        print("error: no goal given", file=sys.stderr)
        return EXIT_USAGE
    goal = fm.parse_goal(goal_text, set(scen.ap), set(scen.agents))
    serial = None if args.serial is None else args.serial == "on"
    rep = build_representation(scen.model, scen.events)
    compiler = SatCompiler(rep, max_states=args.max_states)
    pa = ps.synthesize_protocol(
        scen.model, scen.events, goal, serial=serial, rep=rep, compiler=compiler
    )
    if pa is None:
        print("no protocol")
        return EXIT_NEGATIVE
    if args.dot:
        Path(args.dot).write_text(pa.to_dot())
    if args.json:
        Path(args.json).write_text(pa.to_json(args.max_depth))
    print(f"protocol (histories up to depth {args.max_depth}):")
    for h in pa.words(args.max_depth):
        print(" ".join(h))
    return EXIT_OK


def cmd_explore(args) -> int:
    scen = _load(args.file)
    m = scen.model
    for n in range(args.depth + 1):
        level = iterate(scen.model, scen.events, n, max_worlds=args.max_worlds)
        print(f"level {n}\t{len(level.worlds)} worlds\t{level.size} edges")
    if args.verify:
        rep = build_representation(scen.model, scen.events)
        report = verify_against_oracle(rep, scen.model, scen.events, args.depth)
        print(str(report))
        return EXIT_OK if report.ok else EXIT_NEGATIVE
    return EXIT_OK


def cmd_report(args) -> int:
    from .report import write_blowup_report, write_size_report

    scen = _load(args.file)
    rep = build_representation(scen.model, scen.events)
    written = write_size_report(rep, args.out)
    goal_text = args.goal or scen.goal_text
    if goal_text is not None:
        goal = fm.parse_goal(goal_text, set(scen.ap), set(scen.agents))
        compiler = SatCompiler(rep, max_states=args.max_states)
        blowup = compiler.blowup_report(goal.body)
        written += write_blowup_report(blowup, args.out)
    for path in written:
        print(f"wrote {path}")
    return EXIT_OK


_COMMANDS = {
    "check": cmd_check,
    "product": cmd_product,
    "compile": cmd_compile,
    "plan": cmd_plan,
    "synth": cmd_synth,
    "explore": cmd_explore,
    "report": cmd_report,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return _COMMANDS[args.command](args)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except DelplanError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
