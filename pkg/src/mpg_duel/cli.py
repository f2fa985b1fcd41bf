"""Command-line front end: ``mpg-duel <command> ...``.

Reports are JSON on stdout (schema ``mpg-duel/1``), logs go to stderr.
Exit codes: 0 success, 1 failed gallery check, 2 usage or input error,
3 domain error, 4 resource guard.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from pathlib import Path
from typing import Optional, Sequence

from mpg_duel.asymptotic_solver import (
    BoundsConfig,
    alice_equilibrium_stream,
    block_schedule,
    bob_equilibrium_response,
    simulate,
    start_components,
    value_alt_infinite,
    value_nonalt_bounds,
)
from mpg_duel.constrained_codes import (
    ForbiddenSet,
    asymptotic_covering_radius_bounds,
    brute_covering_radius,
    covering_radius,
)
from mpg_duel.errors import DomainError, InstanceError, ResourceLimitError
from mpg_duel.finite_solver import DEFAULT_NODE_CAP, SolverConfig, value_alt_finite, value_nonalt_finite
from mpg_duel.gallery import NAMES, build_example
from mpg_duel.graph_core import (
    EXACT,
    GameInstance,
    StartSpec,
    instance_to_document,
    parse_instance,
    period,
    product_components,
    strongly_connected_components,
    validate_walk,
)
from mpg_duel.numbers import render

SCHEMA = "mpg-duel/1"
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_DOMAIN, EXIT_RESOURCE = 0, 1, 2, 3, 4

log = logging.getLogger("mpg_duel")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def number(x, mode: str, exact: bool = True) -> dict:
    return {"value": render(x), "mode": mode, "exact": bool(exact)}


def build_parser() -> argparse.ArgumentParser:
    def global_flags(sp, default):
        sp.add_argument("--pretty", action="store_true", default=default, help="human-readable table instead of JSON")
        sp.add_argument("--timing", action="store_true", default=default, help="include wall time (makes output run-dependent)")
        sp.add_argument("-v", "--verbose", action="store_true", default=default)

    p = _Parser(prog="mpg-duel", description="Alternating and non-alternating mean payoff game solver")
    global_flags(p, False)
    # leaf commands accept the global flags too; SUPPRESS keeps the top-level value when absent
    common = _Parser(add_help=False)
    global_flags(common, argparse.SUPPRESS)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def instance_args(sp, start=True):
        sp.add_argument("--file", required=True, help="instance document (JSON)")
        if start:
            sp.add_argument("--start-edges", help="e0,f0")
            sp.add_argument("--start-vertices", help="v0,u0")

    solve = sub.add_parser("solve", help="finite or infinite game value")
    ssub = solve.add_subparsers(dest="horizon", required=True, parser_class=_Parser)
    fin = ssub.add_parser("finite", parents=[common])
    instance_args(fin)
    fin.add_argument("--rounds", type=int, required=True)
    fin.add_argument("--mode", choices=("alt", "non-alt"), default="non-alt")
    fin.add_argument("--node-cap", type=int)
    inf = ssub.add_parser("infinite", parents=[common])
    instance_args(inf)
    inf.add_argument("--mode", choices=("alt", "non-alt"), default="non-alt")
    inf.add_argument("--budget", type=int, default=12)
    inf.add_argument("--iters", type=int)
    inf.add_argument("--node-cap", type=int)

    tr = sub.add_parser("trace", parents=[common], help="simulate the block equilibrium strategies")
    instance_args(tr)
    tr.add_argument("--steps", type=int)
    tr.add_argument("--blocks", type=int, default=5, help="simulate to the end of this block when --steps is absent")
    tr.add_argument("--budget", type=int, default=12)
    tr.add_argument("--node-cap", type=int)

    cr = sub.add_parser("covering-radius", parents=[common], help="covering radius of a binary constrained system")
    cr.add_argument("--forbidden", default="", help='comma-separated patterns, e.g. "00,11"')
    cr.add_argument("--k", type=int, help="pattern length when no patterns are given")
    cr.add_argument("--n", type=int)
    cr.add_argument("--brute", action="store_true", help="use the exhaustive oracle")
    cr.add_argument("--asymptotic", action="store_true")
    cr.add_argument("--budget", type=int, default=12)

    gal = sub.add_parser("gallery", parents=[common], help="run a named example's checklist")
    gal.add_argument("name", help=f"one of {', '.join(NAMES)}, or all")
    gal.add_argument("--export", action="store_true", help="print the instance documents instead")

    ins = sub.add_parser("inspect", parents=[common], help="components, periods and padding constants")
    instance_args(ins, start=False)
    return p


# helpers ---------------------------------------------------------------------


def _load(path: str) -> GameInstance:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InstanceError(f"cannot read {path}: {exc.strerror}") from None
    return parse_instance(text)


def _pair(text: str, flag: str) -> tuple[str, str]:
    parts = [s.strip() for s in text.split(",")]
    if len(parts) != 2 or not all(parts):
        raise UsageError(f"{flag} expects two comma-separated ids")
    return parts[0], parts[1]


def _start(args, instance: GameInstance) -> StartSpec:
    if args.start_edges and args.start_vertices:
        raise UsageError("give --start-edges or --start-vertices, not both")
    if args.start_edges:
        return StartSpec.edges(*_pair(args.start_edges, "--start-edges"))
    if args.start_vertices:
        return StartSpec.vertices(*_pair(args.start_vertices, "--start-vertices"))
    if instance.start is not None:
        return instance.start
    raise UsageError("no start given: use --start-edges or --start-vertices, or put a start in the instance")


def _node_cap(args) -> int:
    if getattr(args, "node_cap", None):
        return args.node_cap
    env = os.environ.get("MPG_NODE_CAP")
    if env:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"MPG_NODE_CAP must be an integer, got {env!r}") from None
    return DEFAULT_NODE_CAP


def _digest(instance: GameInstance) -> dict:
    g, h = instance.graph_g, instance.graph_h
    return {
        "g": {"vertices": len(g.vertices), "edges": len(g.edges), "irreducible": g.is_irreducible()},
        "h": {"vertices": len(h.vertices), "edges": len(h.edges), "irreducible": h.is_irreducible()},
        "numeric_mode": instance.numeric_mode,
    }


def _bounds_doc(b, mode: str) -> dict:
    doc = {
        "lower": number(b.lower, mode, mode == EXACT),
        "upper": number(b.upper, mode, mode == EXACT),
        "value": number(b.value, mode, True) if b.value is not None else None,
        "horizon_used": b.horizon_used,
    }
    if b.constant_C is not None:
        doc["C"] = number(b.constant_C, mode, mode == EXACT)
    if b.escalations:
        doc["escalations"] = [{"kind": e.kind, "at": e.detail, "needed": render(e.needed)} for e in b.escalations]
    extra = {}
    for key, val in b.sources.items():
        extra[key] = val if isinstance(val, (int, str)) else render(val)
    if extra:
        doc["sources"] = extra
    return doc


# commands ---------------------------------------------------------------------


def cmd_solve_finite(args) -> tuple[dict, int]:
    inst = _load(args.file)
    start = _start(args, inst)
    if args.rounds < 0:
        raise UsageError("--rounds must be nonnegative")
    mode = inst.numeric_mode
    result: dict = {"rounds": args.rounds, "game": args.mode, "start": start.to_document()}
    if args.mode == "alt":
        val = value_alt_finite(inst, args.rounds, start)
        result["value"] = number(val, mode, inst.exact)
    else:
        res = value_nonalt_finite(inst, args.rounds, start, SolverConfig(node_cap=_node_cap(args)))
        alice, bob = list(res.witness_alice.edges), list(res.witness_bob.edges)
        v0, us = start.resolve(inst)
        validate_walk(inst.graph_g, alice, inst.graph_g.vertices[v0])
        validate_walk(inst.graph_h, bob)
        replay = inst.replay(alice, bob)
        result.update(
            value=number(res.value, mode, inst.exact),
            witness_alice=alice,
            witness_bob=bob,
            replay_matches=replay == res.value,
            nodes_expanded=res.nodes_expanded,
        )
    return {"instance": _digest(inst), "result": result}, EXIT_OK


def cmd_solve_infinite(args) -> tuple[dict, int]:
    inst = _load(args.file)
    start = _start(args, inst)
    mode = inst.numeric_mode
    digest = _digest(inst)
    if args.mode == "alt":
        b = value_alt_infinite(inst, start, args.iters)
        return {"instance": digest, "result": {"game": "alt", **_bounds_doc(b, mode)}}, EXIT_OK
    cfg = BoundsConfig(alt_iterations=args.iters, solver=SolverConfig(node_cap=_node_cap(args), canonical_witness=False))
    b = value_nonalt_bounds(inst, start, args.budget, cfg)
    sched = block_schedule(inst, start_components(inst, start))
    digest.update(p=sched.p, D=sched.D)
    return {"instance": digest, "result": {"game": "non-alt", "budget": args.budget, **_bounds_doc(b, mode)}}, EXIT_OK


def cmd_trace(args) -> tuple[dict, int]:
    inst = _load(args.file)
    start = _start(args, inst)
    if not start.is_edge_form:
        raise UsageError("trace needs --start-edges e0,f0")
    comps = start_components(inst, start)
    sched = block_schedule(inst, comps)
    steps = args.steps if args.steps is not None else sched.b(args.blocks)
    alice = alice_equilibrium_stream(inst, start, sched, SolverConfig(node_cap=_node_cap(args), canonical_witness=False))
    bob = bob_equilibrium_response(inst, start, sched, alice)
    records = simulate(inst, alice, bob, steps, start)
    bounds = value_nonalt_bounds(inst, start, args.budget)
    mode = inst.numeric_mode
    rows = [[r.step, r.alice_edge, r.bob_edge, render(r.cumulative), render(r.average)] for r in records]
    digest = _digest(inst)
    digest.update(p=sched.p, D=sched.D)
    boundaries = [sched.b(k) for k in range(1, 10**6) if sched.b(k) <= steps]
    result = {
        "steps": steps,
        "block_ends": boundaries,
        "columns": ["step", "alice", "bob", "cumulative", "average"],
        "records": rows,
        "final_average": number(records[-1].average, mode, inst.exact) if records else None,
        "bounds": _bounds_doc(bounds, mode),
    }
    return {"instance": digest, "result": result}, EXIT_OK


def cmd_covering(args) -> tuple[dict, int]:
    forbidden = ForbiddenSet.parse(args.forbidden, args.k)
    result: dict = {"forbidden": sorted(forbidden.patterns), "k": forbidden.k}
    if args.n is None and not args.asymptotic:
        raise UsageError("covering-radius needs --n or --asymptotic")
    if args.n is not None:
        res = brute_covering_radius(forbidden, args.n) if args.brute else covering_radius(forbidden, args.n)
        result.update(n=res.n, radius=res.radius, witness_u=res.witness_u, mode=res.mode)
        if res.note:
            result["note"] = res.note
    if args.asymptotic:
        b = asymptotic_covering_radius_bounds(forbidden, args.budget)
        result["asymptotic"] = _bounds_doc(b, EXACT)
    return {"result": result}, EXIT_OK


def cmd_gallery(args) -> tuple[dict, int]:
    names = NAMES if args.name == "all" else (args.name,)
    if any(n not in NAMES for n in names):
        raise UsageError(f"unknown gallery example {args.name!r}; known: {', '.join(NAMES)}, all")
    entries = [build_example(n) for n in names]
    if args.export:
        docs = {e.name: instance_to_document(e.instance) for e in entries}
        return {"result": {"instances": docs}}, EXIT_OK
    out, ok = [], True
    for entry in entries:
        checks = entry.run_checklist()
        ok = ok and all(c.passed for c in checks)
        out.append(
            {
                "name": entry.name,
                "reducible": entry.reducible,
                "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in checks],
            }
        )
    return {"result": {"examples": out, "all_passed": ok}}, (EXIT_OK if ok else EXIT_FAIL)


def cmd_inspect(args) -> tuple[dict, int]:
    inst = _load(args.file)
    doc = {}
    for name, gr in (("g", inst.graph_g), ("h", inst.graph_h)):
        comps = []
        for c in strongly_connected_components(gr):
            comps.append(
                {
                    "vertices": sorted(map(str, c.vertices)),
                    "nontrivial": c.nontrivial,
                    "period": period(gr, c) if c.nontrivial else None,
                }
            )
        doc[name] = comps
    doc["product"] = [
        {
            "pairs": sorted([str(v), str(u)] for v, u in pc.pairs),
            "edge_pairs": pc.size,
            "period": pc.period,
            "padding_D": pc.padding,
            "diameter": pc.diameter,
        }
        for pc in product_components(inst)
    ]
    return {"instance": _digest(inst), "result": doc}, EXIT_OK


COMMANDS = {
    "finite": cmd_solve_finite,
    "infinite": cmd_solve_infinite,
    "trace": cmd_trace,
    "covering-radius": cmd_covering,
    "gallery": cmd_gallery,
    "inspect": cmd_inspect,
}


# output -------------------------------------------------------------------------


def _pretty(doc, prefix: str = "") -> list[str]:
    lines = []
    if isinstance(doc, dict):
        if set(doc) == {"value", "mode", "exact"}:
            tag = "" if doc["exact"] else " (approx)"
            return [f"{prefix}: {doc['value']}{tag}"]
        for key, val in doc.items():
            lines.extend(_pretty(val, f"{prefix}.{key}" if prefix else str(key)))
    elif isinstance(doc, list) and doc and isinstance(doc[0], (dict, list)):
        for i, val in enumerate(doc):
            lines.extend(_pretty(val, f"{prefix}[{i}]"))
    else:
        lines.append(f"{prefix}: {json.dumps(doc) if not isinstance(doc, str) else doc}")
    return lines


def execute(argv: Sequence[str]) -> tuple[dict, int]:
    """Run one command; returns the report and the exit code."""
    argv = list(argv)
    report: dict = {"schema": SCHEMA, "command": argv}
    start = time.perf_counter()
    args = None
    try:
        args = build_parser().parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr)
        key = args.horizon if args.command == "solve" else args.command
        body, code = COMMANDS[key](args)
        report.update(body)
    except UsageError as exc:
        report["error"] = {"kind": "usage", "message": str(exc)}
        code = EXIT_USAGE
    except InstanceError as exc:
        report["error"] = {"kind": "input", "message": str(exc)}
        code = EXIT_USAGE
    except DomainError as exc:
        report["error"] = {"kind": "domain", "message": str(exc)}
        code = EXIT_DOMAIN
    except ResourceLimitError as exc:
        report["error"] = {"kind": "resource", "message": str(exc)}
        if exc.best_lower_bound is not None:
            report["error"]["best_lower_bound"] = {"value": render(exc.best_lower_bound), "exact": False}
        code = EXIT_RESOURCE
    if args is not None and args.timing:
        report["wall_time_s"] = round(time.perf_counter() - start, 6)
    return report, code


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    report, code = execute(argv)
    if "error" in report:
        print(f"mpg-duel: {report['error']['message']}", file=sys.stderr)
    if "--pretty" in argv:
        print("\n".join(_pretty(report)))
    else:
        print(json.dumps(report, indent=2))
    return code


if __name__ == "__main__":
    sys.exit(main())
