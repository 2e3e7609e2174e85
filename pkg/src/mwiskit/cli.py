"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 input error, 3 internal
verification failure (the end-to-end solution check — this indicates a
bug, never bad user input).
"""

from __future__ import annotations

import argparse
import os
import sys

from .bench import (
    VerificationError,
    maximalize,
    perf_profile,
    pipeline_solve,
    plot_profile,
    read_records,
    verify_solution,
    write_profile,
)
from .chils import ChilsConfig, run_chils
from .exact import Budget
from .gnn import load_model
from .graphs import (
    ParseError,
    StaticGraph,
    parse_graph,
    read_solution,
    write_graph,
    write_solution,
)
from .labelgen import generate_labels, write_labels
from .localsearch import DEFAULT_MQ, run_baseline
from .reductions import EXPENSIVE_RULES, ALL_RULE_NAMES, ReducerBudgets
from .scheduler import ScreeningMode, run_reduce, screen

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INPUT = 2
EXIT_VERIFY = 3

_MODES = {m.value: m for m in ScreeningMode}


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # noqa: A003 - argparse API
        raise UsageError(message)


def _load_graph(path: str) -> StaticGraph:
    try:
        with open(path, "rb") as f:
            return parse_graph(f.read())
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}")
    except ParseError as e:
        raise InputError(f"{path}: {e}")


def _load_solution(path: str) -> set[int]:
    try:
        with open(path, "rb") as f:
            return set(read_solution(f.read()))
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}")
    except ValueError as e:
        raise InputError(f"{path}: {e}")


def _load_models(args) -> object | None:
    if getattr(args, "model", None):
        try:
            return load_model(args.model)
        except (OSError, ValueError) as e:
            raise InputError(f"{args.model}: {e}")
    if getattr(args, "models", None):
        out = {}
        for name, _fn, _g in EXPENSIVE_RULES:
            path = os.path.join(args.models, f"{name}.model")
            try:
                out[name] = load_model(path)
            except (OSError, ValueError) as e:
                raise InputError(f"{path}: {e}")
        return out
    return None


def _budgets(args) -> ReducerBudgets:
    try:
        return ReducerBudgets(
            enumeration_limit=args.enum_limit,
            oracle_node_budget=args.node_budget,
            per_vertex_time_cap=args.time_cap,
            global_fraction=args.global_frac,
        )
    except ValueError as e:
        raise InputError(str(e))


def _add_budget_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--enum-limit", type=int, default=16)
    p.add_argument("--node-budget", type=int, default=1_000_000)
    p.add_argument("--time-cap", type=float, default=0.1)
    p.add_argument("--global-frac", type=float, default=0.01)


def _write(path: str, data: bytes | str) -> None:
    mode = "wb" if isinstance(data, bytes) else "w"
    try:
        with open(path, mode) as f:
            f.write(data)
    except OSError as e:
        raise InputError(f"cannot write {path}: {e.strerror}")


def _build_parser() -> _Parser:
    parser = _Parser(prog="mwiskit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reduce", help="apply the data-reduction engine")
    p.add_argument("graph")
    p.add_argument("--mode", choices=sorted(_MODES), default="never")
    p.add_argument("--model", help="one screening model for all expensive rules")
    p.add_argument("--models", help="directory of per-rule <rule>.model files")
    p.add_argument("-o", "--output", help="kernel graph file")
    p.add_argument("-l", "--log", help="reduction trace file")
    p.add_argument("-s", "--stats", help="statistics file")
    _add_budget_flags(p)

    p = sub.add_parser("solve-exact", help="exact solve, optionally after reduction")
    p.add_argument("graph")
    p.add_argument("--reduce", choices=sorted(_MODES), help="reduce first")
    p.add_argument("--model")
    p.add_argument("--models")
    p.add_argument("--solver-nodes", type=int, default=100_000_000)
    p.add_argument("-o", "--output", help="solution file")
    _add_budget_flags(p)

    p = sub.add_parser("baseline", help="iterated local search")
    p.add_argument("graph")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mq", type=int, default=DEFAULT_MQ)
    p.add_argument("--time", type=float, help="wall-time budget in seconds")
    p.add_argument("--iters", type=int, help="iteration budget")
    p.add_argument("--warm", help="initial solution file")
    p.add_argument("-o", "--output", help="solution file")

    p = sub.add_parser("chils", help="concurrent difference-core search")
    p.add_argument("graph")
    p.add_argument("-p", "--portfolio", type=int, default=16)
    p.add_argument("--tg", type=float, default=10.0)
    p.add_argument("--tc", type=float, default=10.0)
    p.add_argument("--mq", type=int, default=DEFAULT_MQ)
    p.add_argument("--time", type=float, help="total wall-time budget")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--warm", help="initial solution file")
    p.add_argument(
        "--deterministic",
        nargs=2,
        type=int,
        metavar=("LS_ITERS", "CHILS_ITERS"),
        help="iteration-counted mode, reproducible across thread counts",
    )
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("-o", "--output", help="solution file")
    p.add_argument("--trace", help="per-iteration trace file")

    p = sub.add_parser("labels", help="generate per-vertex training labels")
    p.add_argument("graph")
    p.add_argument("--rule", required=True, choices=ALL_RULE_NAMES)
    p.add_argument(
        "--after-cheap",
        action="store_true",
        help="run the cheap rules to exhaustion before labeling",
    )
    p.add_argument("--name", help="instance name for the CSV (default: file stem)")
    p.add_argument("-o", "--output", required=True)
    _add_budget_flags(p)

    p = sub.add_parser("screen", help="print model-suggested vertices")
    p.add_argument("graph")
    p.add_argument("--model", required=True)

    p = sub.add_parser("profile", help="performance profiles from run records")
    p.add_argument("records")
    p.add_argument("--kind", choices=["quality", "time"], default="quality")
    p.add_argument("-o", "--output", required=True, help="profile CSV")
    p.add_argument(
        "--plot", help="figure file (default: CSV path with .png suffix)"
    )

    p = sub.add_parser("verify", help="check a solution file against a graph")
    p.add_argument("graph")
    p.add_argument("solution")

    return parser


def _emit_solution(g: StaticGraph, members: set[int], args) -> None:
    weight = verify_solution(g, members)
    print(f"weight {weight}")
    if args.output:
        _write(args.output, write_solution(sorted(members)))


def _cmd_reduce(args) -> int:
    g = _load_graph(args.graph)
    mode = _MODES[args.mode]
    models = _load_models(args)
    if mode.uses_models and models is None:
        raise InputError(f"mode {args.mode} requires --model or --models")
    if not mode.uses_models and models is not None:
        raise InputError(f"mode {args.mode} does not take models")
    dyn, log, stats = run_reduce(g, mode, _budgets(args), models)
    kernel, _ids = dyn.active_snapshot()
    print(f"kernel_n {kernel.n}")
    print(f"kernel_m {kernel.m}")
    print(f"offset {log.offset}")
    if args.output:
        _write(args.output, write_graph(kernel))
    if args.log:
        lines = [f"offset {log.offset}"]
        lines += [f"event {e.rule} {e}" for e in log.events]
        _write(args.log, "\n".join(lines) + "\n")
    if args.stats:
        _write(args.stats, stats.to_text())
    return EXIT_OK


def _cmd_solve_exact(args) -> int:
    g = _load_graph(args.graph)
    models = _load_models(args)
    mode = _MODES[args.reduce] if args.reduce else ScreeningMode.NEVER
    if args.reduce:
        if mode.uses_models and models is None:
            raise InputError(f"mode {args.reduce} requires --model or --models")
        weight, members, _stats = pipeline_solve(
            g,
            mode,
            "exact",
            _budgets(args),
            models,
            solver_budget=Budget(args.solver_nodes),
        )
    else:
        from .exact import solve_exact

        if g.n > 63:
            raise InputError(
                f"graph has {g.n} vertices; use --reduce for instances over 63"
            )
        result = solve_exact(g, Budget(args.solver_nodes))
        if not result.optimal:
            raise InputError("solver node budget exhausted; raise --solver-nodes")
        members = set(result.vertices)
        weight = result.weight
    _emit_solution(g, members, args)
    _ = weight
    return EXIT_OK


def _cmd_baseline(args) -> int:
    g = _load_graph(args.graph)
    if args.time is None and args.iters is None:
        raise UsageError("baseline needs --time or --iters")
    warm = _load_solution(args.warm) if args.warm else None
    if warm is not None:
        try:
            verify_solution(g, warm)
        except VerificationError as e:
            raise InputError(f"warm-start solution: {e}")
    res = run_baseline(
        g,
        initial=warm,
        m_q=args.mq,
        iterations=args.iters,
        time_limit=args.time,
        seed=args.seed,
    )
    members = maximalize(g, res.members)
    _emit_solution(g, members, args)
    return EXIT_OK


def _cmd_chils(args) -> int:
    g = _load_graph(args.graph)
    if args.time is None and args.deterministic is None:
        raise UsageError("chils needs --time or --deterministic")
    warm = _load_solution(args.warm) if args.warm else None
    if warm is not None:
        try:
            verify_solution(g, warm)
        except VerificationError as e:
            raise InputError(f"warm-start solution: {e}")
    try:
        cfg = ChilsConfig(
            p=args.portfolio,
            m_q_base=args.mq,
            t_g=args.tg,
            t_c=args.tc,
            total_time=args.time,
            deterministic=tuple(args.deterministic) if args.deterministic else None,
            seed=args.seed,
            threads=args.threads,
        )
    except ValueError as e:
        raise UsageError(str(e))
    res = run_chils(g, cfg, warm)
    members = maximalize(g, res.members)
    if args.trace:
        rows = ["iteration,best_weight,core_size"] + [
            f"{i},{w},{c}" for i, w, c in res.trace
        ]
        _write(args.trace, "\n".join(rows) + "\n")
    _emit_solution(g, members, args)
    return EXIT_OK


def _cmd_labels(args) -> int:
    g = _load_graph(args.graph)
    name = args.name or os.path.splitext(os.path.basename(args.graph))[0]
    budgets = _budgets(args)
    if args.after_cheap:
        dyn, _log, _stats = run_reduce(g, ScreeningMode.NO_GNN_RED, budgets)
        g, _ids = dyn.active_snapshot()
    records = generate_labels(g, args.rule, budgets, name)
    try:
        write_labels(records, args.output)
    except OSError as e:
        raise InputError(f"cannot write {args.output}: {e.strerror}")
    print(f"labels {len(records)}")
    return EXIT_OK


def _cmd_screen(args) -> int:
    g = _load_graph(args.graph)
    model = _load_models(args)
    try:
        suggested = screen(model, g)
    except ValueError as e:
        raise InputError(str(e))
    for v in sorted(suggested):
        print(v + 1)
    return EXIT_OK


def _cmd_profile(args) -> int:
    try:
        records = read_records(args.records)
        curves = perf_profile(records, args.kind)
    except (OSError, ValueError) as e:
        raise InputError(str(e))
    write_profile(curves, args.output)
    plot_path = args.plot or os.path.splitext(args.output)[0] + ".png"
    plot_profile(curves, args.kind, plot_path)
    print(f"profile {args.output}")
    print(f"figure {plot_path}")
    return EXIT_OK


def _cmd_verify(args) -> int:
    g = _load_graph(args.graph)
    members = _load_solution(args.solution)
    try:
        weight = verify_solution(g, members)
    except VerificationError as e:
        raise InputError(f"invalid solution: {e}")
    print(f"weight {weight}")
    return EXIT_OK


_COMMANDS = {
    "reduce": _cmd_reduce,
    "solve-exact": _cmd_solve_exact,
    "baseline": _cmd_baseline,
    "chils": _cmd_chils,
    "labels": _cmd_labels,
    "screen": _cmd_screen,
    "profile": _cmd_profile,
    "verify": _cmd_verify,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except InputError as e:
        print(f"input error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except VerificationError as e:
        print(f"internal verification failure: {e}", file=sys.stderr)
        return EXIT_VERIFY


if __name__ == "__main__":
    sys.exit(main())
