"""Command-line front end: generate, traverse, simulate, duel, tree, bench.

Exit codes: 0 success, 2 validation failure, 3 budget exhausted, 4 I/O error.
All randomness flows from --seed (or the NNTRAV_SEED environment variable,
default 0); identical inputs and seed give byte-identical outputs.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import random
import sys
from pathlib import Path

from .games import (
    CliqueAdversary,
    DfsRestartAgent,
    KillerAdversary,
    NnAgent,
    NullAdversary,
    ScheduleAdversary,
    clique_stage_lengths,
    killer_script,
    play_game,
)
from .graph import (
    Graph,
    GraphError,
    check_triangle,
    complete_graph,
    cost_of,
    CostFunction,
    graph_to_dot,
    instance_from_json_obj,
    instance_to_json_obj,
    path_graph,
    random_metric_cost,
    validate_traversal,
)
from .layered_ring import (
    build_dfs_killer,
    build_lr,
    canonical_nn_route,
    hamiltonian_route,
    pad_to_n,
)
from .nn import (
    LowestId,
    OPT_ORACLE_LIMIT,
    Scripted,
    SeededRandom,
    aspect_ratio_bound,
    lambda_profile,
    nn_traversal,
    nn_upper_bound,
    opt_traversal,
)
from .simulator import FailureSchedule, check_progress, check_r1_r2, run_sim
from .tree import identity_ranks, mst_cost, nn_tree, nnt_bound_check, shuffled_ranks

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_BUDGET = 3
EXIT_IO = 4

GENERATE_FAMILIES = (
    "lr-pow2", "lr-general", "lr-padded", "dfs-killer", "complete", "path", "random-metric",
)


def split_seed(seed: int, tag: str) -> int:
    """Derive an independent child seed; stable across runs and platforms."""
    digest = hashlib.sha256(f"{seed}/{tag}".encode()).hexdigest()
    return int(digest[:16], 16)


def _resolve_seed(args: argparse.Namespace) -> int:
    if getattr(args, "seed", None) is not None:
        return args.seed
    env = os.environ.get("NNTRAV_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise GraphError(f"NNTRAV_SEED must be an integer, got {env!r}") from None
    return 0


def _dump_json(obj: object) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _read_json(path: str) -> object:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _write_text(path: str | None, text: str) -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _sidecar_path(output: str) -> Path:
    p = Path(output)
    return p.with_name(p.stem + ".sidecar.json")


def _load_instance(path: str) -> tuple[Graph, CostFunction, dict]:
    """Read an instance file; returns graph, cost function, and any sidecar found.

    The sidecar comes from an embedded "sidecar" key or a neighboring
    <stem>.sidecar.json file.
    """
    obj = _read_json(path)
    graph, cost = instance_from_json_obj(obj)
    if cost is None:
        cost = CostFunction.hop_metric(graph)
    sidecar = obj.get("sidecar") if isinstance(obj, dict) else None
    if sidecar is None:
        side_path = _sidecar_path(path)
        if side_path.exists():
            sidecar = _read_json(str(side_path))
    return graph, cost, sidecar if isinstance(sidecar, dict) else {}


def _parse_ties(spec: str, seed: int):
    if spec == "lowest-id":
        return LowestId()
    if spec == "random":
        return SeededRandom(seed)
    if spec.startswith("scripted:"):
        path = spec.split(":", 1)[1]
        obj = _read_json(path)
        if isinstance(obj, dict):
            obj = obj.get("preference", obj.get("scripted_ties"))
        if not isinstance(obj, list):
            raise GraphError(
                f"scripted ties file {path!r} must hold a list "
                '(or {"preference": [...]} / {"scripted_ties": [...]})')
        return Scripted(obj)
    raise GraphError(f"unknown tie policy {spec!r}")


# --- generate ----------------------------------------------------------------


def _lr_sidecar(lr) -> dict:
    return {
        "nu": lr.nu,
        "k": lr.k,
        "positions": list(lr.positions),
        "layer_ids": {str(i): list(ids) for i, ids in lr.layer_ids.items()},
        "layer_positions": {
            str(i): list(lr.layer_sets[i - 1]) for i in range(1, lr.k + 1)
        },
        "routes": {"nn": canonical_nn_route(lr), "hamiltonian": hamiltonian_route(lr)},
        "costs": {"nn": (lr.k + 1) * (lr.nu + 1) - 1, "opt": lr.n - 1},
        "scripted_ties": canonical_nn_route(lr),
    }


def _require(args: argparse.Namespace, family: str, *names: str) -> list[int]:
    values = []
    for name in names:
        val = getattr(args, name.replace("-", "_"))
        if val is None:
            raise GraphError(f"generate {family} requires --{name}")
        values.append(val)
    return values


def cmd_generate(args: argparse.Namespace) -> int:
    seed = _resolve_seed(args)
    family = args.family
    cost = None
    params: dict = {}
    if family == "lr-pow2":
        m, k = _require(args, family, "m", "k")
        if m < 1:
            raise GraphError(f"need m >= 1, got {m}")
        lr = build_lr(1 << m, k)
        graph, sidecar, params = lr.graph, _lr_sidecar(lr), {"m": m, "k": k}
    elif family == "lr-general":
        nu, k = _require(args, family, "nu", "k")
        lr = build_lr(nu, k)
        graph, sidecar, params = lr.graph, _lr_sidecar(lr), {"nu": nu, "k": k}
    elif family == "lr-padded":
        nu, k, n = _require(args, family, "nu", "k", "n")
        pr = pad_to_n(nu, k, n)
        graph = pr.graph
        params = {"nu": nu, "k": k, "n": n}
        sidecar = {
            "nu": nu,
            "k": k,
            "base_n": pr.base.n,
            "extras": list(pr.extras),
            "routes": {"nn": pr.nn_route, "hamiltonian": pr.hamiltonian},
            "costs": {
                "nn": len(pr.extras) + (k + 1) * (nu + 1) - 1,
                "opt": graph.n - 1,
            },
            "scripted_ties": pr.nn_route,
        }
    elif family == "dfs-killer":
        (n,) = _require(args, family, "n")
        trap = build_dfs_killer(n)
        graph = trap.graph
        params = {"n": n}
        sidecar = {
            "clique_a": list(trap.clique_a),
            "clique_b": list(trap.clique_b),
            "path_nodes": list(trap.path_nodes),
            "tree_edges": [list(e) for e in sorted(trap.tree_edges)],
            "rule": trap.rule,
            "script": killer_script(trap).to_json_obj(),
        }
    elif family == "complete":
        (n,) = _require(args, family, "n")
        graph = complete_graph(n)
        params = {"n": n}
        order = list(range(n))
        sidecar = {"routes": {"nn": order, "hamiltonian": order}, "scripted_ties": order}
    elif family == "path":
        (n,) = _require(args, family, "n")
        graph = path_graph(n)
        params = {"n": n}
        order = list(range(n))
        sidecar = {"routes": {"nn": order, "hamiltonian": order}, "scripted_ties": order}
    else:  # random-metric
        (n,) = _require(args, family, "n")
        eff = split_seed(seed, f"random-metric/{n}")
        cost = random_metric_cost(n, random.Random(eff), args.max_cost)
        graph = complete_graph(n)
        params = {"n": n, "max_cost": args.max_cost}
        sidecar = {"seed": seed, "derived_seed": eff}

    if args.format == "dot":
        _write_text(args.output, graph_to_dot(graph))
        return EXIT_OK
    doc = instance_to_json_obj(graph, cost)
    doc["family"] = family
    doc["params"] = params
    if args.output:
        _write_text(args.output, _dump_json(doc))
        _write_text(str(_sidecar_path(args.output)), _dump_json(sidecar))
    else:
        doc["sidecar"] = sidecar
        _write_text(None, _dump_json(doc))
    return EXIT_OK


# --- traverse ----------------------------------------------------------------


def _certified_opt(graph: Graph, cost: CostFunction, sidecar: dict) -> int | None:
    """A verified adjacency-only full route pins the optimal cost at n − 1."""
    route = sidecar.get("routes", {}).get("hamiltonian")
    if cost.kind != "hop" or not isinstance(route, list):
        return None
    try:
        validate_traversal(route, graph.n)
    except GraphError:
        return None
    if all(graph.has_edge(route[i], route[i + 1]) for i in range(len(route) - 1)):
        return graph.n - 1
    return None


def cmd_traverse(args: argparse.Namespace) -> int:
    seed = _resolve_seed(args)
    graph, cost, sidecar = _load_instance(args.input)
    ties = _parse_ties(args.ties, seed)
    order = nn_traversal(cost, args.start, ties)
    total = cost_of(order, cost)
    profile = lambda_profile(order, cost)
    metric = cost.is_metric()
    violation = None if metric else check_triangle(cost)

    opt = None
    opt_source = None
    if cost.n <= OPT_ORACLE_LIMIT:
        opt, _ = opt_traversal(cost)
        opt_source = "oracle"
    else:
        certified = _certified_opt(graph, cost, sidecar)
        if certified is not None:
            opt = certified
            opt_source = "certificate"

    report = {
        "n": cost.n,
        "start": args.start,
        "ties": args.ties,
        "order": order,
        "cost": total,
        "lambda": profile.as_json_obj(),
        "metric": metric,
        "triangle_violation": list(violation) if violation else None,
        "opt": opt,
        "opt_source": opt_source,
        "ratio": f"{total}/{opt}" if opt else None,
        "nn_bound": None,
        "within_nn_bound": None,
        "aspect_bound": None,
        "within_aspect_bound": None,
    }
    if opt is not None and cost.n >= 2:
        bound = nn_upper_bound(cost.n, opt)
        report["nn_bound"] = bound
        report["within_nn_bound"] = total <= bound
        lo, _ = cost.pair_cost_extremes()
        if lo > 0:
            # computed even when the triangle inequality fails; the metric flag
            # and violation triple say whether the bound is actually claimed
            abound = aspect_ratio_bound(cost, opt)
            report["aspect_bound"] = abound
            report["within_aspect_bound"] = total <= abound
    _write_text(args.output, _dump_json(report))
    return EXIT_OK


# --- simulate ----------------------------------------------------------------


def cmd_simulate(args: argparse.Namespace) -> int:
    graph, cost, _ = _load_instance(args.input)
    if cost.kind != "hop":
        raise GraphError("simulate runs on plain graphs, not explicit cost matrices")
    schedule = FailureSchedule.empty()
    if args.schedule:
        schedule = FailureSchedule.from_json_obj(_read_json(args.schedule))
    trace = run_sim(graph, args.start, schedule, args.budget)
    lines = "\n".join(trace.to_json_lines()) + "\n"
    summary = {
        "outcome": trace.outcome,
        "iterations": trace.iterations,
        "explored": trace.final.exp,
        "n": trace.n,
        "r1_r2": check_r1_r2(trace, graph) or "ok",
        "progress": check_progress(trace) or "ok",
    }
    if args.output:
        _write_text(args.output, lines)
        _write_text(None, _dump_json(summary))
    else:
        _write_text(None, lines)
    return EXIT_BUDGET if trace.outcome == "budget-exhausted" else EXIT_OK


# --- duel --------------------------------------------------------------------


def _make_agent(name: str):
    if name == "nn":
        return NnAgent()
    if name == "dfs-restart":
        return DfsRestartAgent()
    raise GraphError(f"unknown agent {name!r} (expected nn or dfs-restart)")


def cmd_duel(args: argparse.Namespace) -> int:
    agent = _make_agent(args.agent)
    spec = args.adversary
    graph = None
    if args.input:
        graph, cost, sidecar = _load_instance(args.input)
        if cost.kind != "hop":
            raise GraphError("duels run on plain graphs, not explicit cost matrices")
    if spec == "none":
        adv = NullAdversary()
        if graph is None and args.n is not None:
            graph = complete_graph(args.n)
    elif spec == "clique":
        adv = CliqueAdversary()
        if graph is None:
            if args.n is None:
                raise GraphError("duel with the clique adversary needs --n or --input")
            graph = complete_graph(args.n)
    elif spec == "killer":
        if args.input:
            obj = _read_json(args.input)
            if not (isinstance(obj, dict) and obj.get("family") == "dfs-killer"):
                raise GraphError("killer duels need a dfs-killer instance (or --n)")
            trap = build_dfs_killer(obj["params"]["n"])
            if trap.graph != graph:
                raise GraphError("input graph does not match its dfs-killer parameters")
        else:
            if args.n is None:
                raise GraphError("duel with the killer adversary needs --n or --input")
            trap = build_dfs_killer(args.n)
        graph = trap.graph
        adv = KillerAdversary(trap)
    elif spec.startswith("schedule:"):
        schedule = FailureSchedule.from_json_obj(_read_json(spec.split(":", 1)[1]))
        adv = ScheduleAdversary(schedule)
    else:
        raise GraphError(
            f"unknown adversary {spec!r} (expected none, clique, killer, or schedule:FILE)")
    if graph is None:
        raise GraphError("duel needs a graph: pass --input or --n")

    trace = play_game(agent, adv, graph, args.start, args.budget)
    summary = {
        "agent": trace.agent,
        "adversary": trace.adversary,
        "n": trace.n,
        "steps": trace.step_count,
        "outcome": trace.outcome,
        "visited": len(trace.visited),
        "bound": None,
        "bound_ok": None,
    }
    if isinstance(adv, CliqueAdversary):
        bound = graph.n * (graph.n - 1) // 2
        summary["bound"] = bound
        summary["bound_ok"] = trace.step_count >= bound
        summary["stages"] = clique_stage_lengths(trace)
    lines = "\n".join(trace.to_json_lines()) + "\n"
    if args.output:
        _write_text(args.output, lines)
        _write_text(None, _dump_json(summary))
    else:
        _write_text(None, lines)
    return EXIT_BUDGET if trace.outcome == "budget-exhausted" else EXIT_OK


# --- tree --------------------------------------------------------------------


def cmd_tree(args: argparse.Namespace) -> int:
    seed = _resolve_seed(args)
    graph, cost, _ = _load_instance(args.input)
    if args.ranks == "identity":
        ranks = identity_ranks(cost.n)
    else:
        ranks = shuffled_ranks(cost.n, random.Random(split_seed(seed, "ranks")))
    tree = nn_tree(cost, ranks)
    mst, mst_edges = mst_cost(cost)
    metric = cost.is_metric()
    report = {
        "n": cost.n,
        "ranks": list(ranks),
        "root": tree.root,
        "edges": [[u, v, tree.costs[(u, v)]] for u, v in tree.edges],
        "total": tree.total,
        "mst": mst,
        "mst_edges": [list(e) for e in mst_edges],
        "metric": metric,
        "budget": None,
        "bound_ok": None,
    }
    if metric:
        check = nnt_bound_check(cost, ranks)
        report["budget"] = check.budget
        report["bound_ok"] = check.ok
    _write_text(args.output, _dump_json(report))
    return EXIT_OK


# --- bench -------------------------------------------------------------------

BENCH_COLUMNS = ("family", "n", "m", "k", "agent", "adversary", "value", "bound", "ratio", "seed")


def _bench_row(row: dict, index: int, seed: int) -> dict:
    kind = row.get("kind")
    out = dict.fromkeys(BENCH_COLUMNS, "")
    if kind == "lr-ratio":
        m, k = row["m"], row["k"]
        lr = build_lr(1 << m, k)
        value = (k + 1) * ((1 << m) + 1) - 1
        bound = lr.n - 1
        out.update(family="lr-pow2", n=lr.n, m=m, k=k,
                   value=value, bound=bound, ratio=f"{value}/{bound}")
    elif kind == "duel":
        agent = _make_agent(row["agent"])
        n = row["n"]
        spec = row["adversary"]
        if spec == "clique":
            graph, adv, bound = complete_graph(n), CliqueAdversary(), n * (n - 1) // 2
        elif spec == "killer":
            trap = build_dfs_killer(n)
            graph, adv, bound = trap.graph, KillerAdversary(trap), 2 * (n - 1)
        elif spec == "none":
            graph, adv, bound = complete_graph(n), NullAdversary(), n - 1
        else:
            raise GraphError(f"bench duel row has unknown adversary {spec!r}")
        trace = play_game(agent, adv, graph, row.get("start", 0), row.get("budget"))
        out.update(family="duel", n=n, agent=row["agent"], adversary=spec,
                   value=trace.step_count, bound=bound,
                   ratio=f"{trace.step_count}/{bound}")
    elif kind == "random-metric":
        n = row["n"]
        eff = split_seed(seed, f"bench/{index}/random-metric/{n}")
        cost = random_metric_cost(n, random.Random(eff), row.get("max_cost", 9))
        order = nn_traversal(cost, row.get("start", 0))
        value = cost_of(order, cost)
        opt, _ = opt_traversal(cost)
        out.update(family="random-metric", n=n, value=value,
                   bound=nn_upper_bound(n, opt), ratio=f"{value}/{opt}", seed=eff)
    else:
        raise GraphError(f"bench row {index} has unknown kind {kind!r}")
    return out


def cmd_bench(args: argparse.Namespace) -> int:
    seed = _resolve_seed(args)
    suite = _read_json(args.suite)
    if not isinstance(suite, dict) or not isinstance(suite.get("rows"), list):
        raise GraphError('bench suite must be {"rows": [...]}')
    buf = io.StringIO()
    buf.write("# nntrav bench csv v1\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(BENCH_COLUMNS)
    for index, row in enumerate(suite["rows"]):
        result = _bench_row(row, index, seed)
        writer.writerow([result[col] for col in BENCH_COLUMNS])
    _write_text(args.output, buf.getvalue())
    return EXIT_OK


# --- parser / entry ----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nntrav",
        description="Greedy graph traversal worst cases, failure-round simulation, "
                    "edge-deletion games, and rank-greedy trees.",
    )
    sub = parser.add_subparsers(dest="cmd", required=True)

    g = sub.add_parser("generate", help="emit an instance of a named family")
    g.add_argument("family", choices=GENERATE_FAMILIES)
    g.add_argument("--m", type=int, help="ring exponent (lr-pow2)")
    g.add_argument("--nu", type=int, help="ring size (lr-general, lr-padded)")
    g.add_argument("--k", type=int, help="layer count (lr families)")
    g.add_argument("--n", type=int, help="node count (most families)")
    g.add_argument("--max-cost", type=int, default=9, help="random-metric cost cap")
    g.add_argument("--seed", type=int)
    g.add_argument("--output")
    g.add_argument("--format", choices=("json", "dot"), default="json")

    t = sub.add_parser("traverse", help="greedy traversal with profile and bound report")
    t.add_argument("--input", required=True)
    t.add_argument("--start", type=int, default=0)
    t.add_argument("--ties", default="lowest-id",
                   help="lowest-id, random, or scripted:FILE")
    t.add_argument("--seed", type=int)
    t.add_argument("--output")

    s = sub.add_parser("simulate", help="run the round simulator under a failure schedule")
    s.add_argument("--input", required=True)
    s.add_argument("--start", type=int, default=0)
    s.add_argument("--schedule", help="failure schedule JSON")
    s.add_argument("--budget", type=int, help="override the 4n² iteration budget")
    s.add_argument("--output", help="trace JSONL path (summary then goes to stdout)")

    d = sub.add_parser("duel", help="agent versus adversary on a graph")
    d.add_argument("agent", help="nn or dfs-restart")
    d.add_argument("adversary", help="none, clique, killer, or schedule:FILE")
    d.add_argument("--n", type=int, help="size for a generated arena")
    d.add_argument("--input", "--graph", dest="input", help="instance JSON to play on")
    d.add_argument("--start", type=int, default=0)
    d.add_argument("--budget", type=int, help="override the 8n² step budget")
    d.add_argument("--output", help="trace JSONL path (summary then goes to stdout)")

    r = sub.add_parser("tree", help="rank-greedy spanning tree with MST bound report")
    r.add_argument("--input", required=True)
    r.add_argument("--ranks", choices=("identity", "shuffle"), default="identity")
    r.add_argument("--seed", type=int)
    r.add_argument("--output")

    b = sub.add_parser("bench", help="run a suite of rows into a CSV table")
    b.add_argument("--suite", required=True)
    b.add_argument("--seed", type=int)
    b.add_argument("--output")
    b.add_argument("--format", choices=("csv",), default="csv")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "generate": cmd_generate,
        "traverse": cmd_traverse,
        "simulate": cmd_simulate,
        "duel": cmd_duel,
        "tree": cmd_tree,
        "bench": cmd_bench,
    }
    try:
        return handlers[args.cmd](args)
    except GraphError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_VALIDATION
    except json.JSONDecodeError as err:
        print(f"i/o error: invalid JSON: {err}", file=sys.stderr)
        return EXIT_IO
    except OSError as err:
        print(f"i/o error: {err}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
