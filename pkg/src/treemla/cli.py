"""Command-line front end.

Exit codes: 0 success, 2 input error, 3 self-check failure or discrepancy.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from pathlib import Path
from typing import Any, Callable

from .oracle import (
    SUBSET_DP_MAX_N,
    OracleBoundError,
    closed_form_complete_binary,
    exact_anchored_mla,
    exact_mla,
)
from .shiloach import FormulaMode, MemoLimitExceeded, SolverConfig, mla_anchored, mla_free
from .tree import (
    ArrangementError,
    Tree,
    TreeError,
    cost,
    generate_tree,
    parse_arrangement,
    parse_tree,
    random_tree,
)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_CHECK = 3

P_FLAGS = {"min": "min_over_all", "inequality": "inequality"}


class InputError(Exception):
    pass


def parse_gen(spec: str, seed: int = 0) -> tuple[Tree, dict[str, Any]]:
    """``kind:p1,p2`` such as ``complete-binary:5`` or ``random-prufer:12``."""
    kind, _, rest = spec.partition(":")
    kind = kind.strip().replace("-", "_")
    try:
        params = [int(x) for x in rest.split(",")] if rest else []
    except ValueError:
        raise InputError(f"bad generator parameters in {spec!r}") from None
    try:
        tree = generate_tree(kind, *params, seed=seed)
    except TreeError as exc:
        raise InputError(str(exc)) from None
    info = {"kind": kind, "params": params, "seed": seed if kind == "random_prufer" else None}
    return tree, info


def _load_tree(args) -> tuple[Tree, dict[str, Any]]:
    if args.gen:
        tree, info = parse_gen(args.gen, args.seed)
    elif args.input:
        try:
            text = Path(args.input).read_text(encoding="utf-8")
        except OSError as exc:
            raise InputError(f"cannot read {args.input}: {exc}") from None
        try:
            tree = parse_tree(text)
        except TreeError as exc:
            raise InputError(f"{args.input}: {exc}") from None
        info = {"kind": "file", "params": [], "seed": None, "path": args.input}
    else:
        raise InputError("give an input file or --gen")
    info["n"] = tree.n
    return tree, info


def _mode(name: str) -> FormulaMode:
    try:
        return FormulaMode.parse(name)
    except ValueError:
        raise InputError(f"unknown mode {name!r}; use fix-a, fix-b or original-bug") from None


def _config(mode: FormulaMode, args) -> SolverConfig:
    p = P_FLAGS[args.p] if getattr(args, "p", None) else None
    return SolverConfig(mode=mode, vstar_policy=getattr(args, "vstar", "centroid"), p_policy=p)


def _solve(tree: Tree, config: SolverConfig, anchor: int | None, side: str = "right"):
    if anchor is None:
        return mla_free(tree, config)
    return mla_anchored(tree, anchor, config, side)


def _reference(tree: Tree, info: dict[str, Any], anchor: int | None = None, side: str = "right"):
    """Independent optimum when one is affordable: ``(cost, method)`` or ``(None, None)``."""
    if tree.n <= SUBSET_DP_MAX_N:
        if anchor is None:
            return exact_mla(tree).cost, "subset_dp"
        return exact_anchored_mla(tree, anchor, side).cost, "subset_dp"
    if anchor is None and info.get("kind") == "complete_binary" and info["params"][0] >= 2:
        return closed_form_complete_binary(info["params"][0]), "closed_form"
    return None, None


def _mode_record(res) -> dict[str, Any]:
    return {
        "cost": res.cost,
        "recomputed_cost": res.recomputed_cost,
        "self_check": "pass" if res.self_check else "fail",
    }


def _emit(report: dict[str, Any], as_json: bool, text: Callable[[dict[str, Any]], str]) -> None:
    if as_json:
        print(json.dumps(report, indent=2, sort_keys=False))
    else:
        print(text(report))


# -- solve ---------------------------------------------------------------------


def cmd_solve(args) -> dict[str, Any]:
    tree, info = _load_tree(args)
    mode = _mode(args.mode)
    if args.anchor is not None and args.anchor not in tree:
        raise InputError(f"anchor {args.anchor} not in tree")
    if args.vstar == "exhaustive" and tree.n > SolverConfig().exhaustive_limit:
        raise InputError(f"--vstar exhaustive limited to n <= {SolverConfig().exhaustive_limit}")
    if args.oracle and tree.n > SUBSET_DP_MAX_N:
        raise InputError(f"--oracle limited to n <= {SUBSET_DP_MAX_N}")
    res = _solve(tree, _config(mode, args), args.anchor, args.side)
    report: dict[str, Any] = {
        "command": "solve",
        "tree": info,
        "anchor": args.anchor,
        "side": args.side if args.anchor is not None else None,
        "results": {mode.value: _mode_record(res)},
        "arrangement": list(res.arrangement.order),
        "trace": res.trace if args.trace else None,
        "oracle": None,
    }
    status = EXIT_OK if res.self_check else EXIT_CHECK
    if args.oracle:
        ref, method = _reference(tree, info, args.anchor, args.side)
        report["oracle"] = {"cost": ref, "method": method, "match": ref == res.cost}
        if ref != res.cost:
            status = EXIT_CHECK
    report["exit_status"] = status
    return report


def _solve_text(rep: dict[str, Any]) -> str:
    (mode, r), = rep["results"].items()
    lines = [
        f"n = {rep['tree']['n']}  mode = {mode}",
        f"cost = {r['cost']}",
        f"arrangement = {' '.join(map(str, rep['arrangement']))}",
        f"recomputed = {r['recomputed_cost']}  self-check {r['self_check']}",
    ]
    if rep["oracle"]:
        o = rep["oracle"]
        lines.append(f"oracle = {o['cost']} ({o['method']})  {'match' if o['match'] else 'MISMATCH'}")
    return "\n".join(lines)


# -- generate / check ----------------------------------------------------------------


def cmd_generate(args) -> dict[str, Any]:
    tree, info = parse_gen(args.spec, args.seed)
    text = tree.to_text()
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return {"command": "generate", "tree": {**info, "n": tree.n}, "exit_status": EXIT_OK}


def cmd_check(args) -> dict[str, Any]:
    try:
        tree = parse_tree(Path(args.tree).read_text(encoding="utf-8"))
        arr = parse_arrangement(Path(args.arrangement).read_text(encoding="utf-8"))
        d = cost(tree, arr)
    except OSError as exc:
        raise InputError(str(exc)) from None
    except (TreeError, ArrangementError) as exc:
        raise InputError(str(exc)) from None
    return {
        "command": "check",
        "tree": {"n": tree.n, "kind": "file", "path": args.tree},
        "arrangement": list(arr.order),
        "cost": d,
        "exit_status": EXIT_OK,
    }


# -- difftest ------------------------------------------------------------------


def _discrepancy(tree: Tree, mode: FormulaMode, args, info, reference: bool = True):
    """Solve and classify: ``(result, None)`` or ``(result, discrepancy record)``.

    A self-check failure needs no oracle; with ``reference=False`` none is run
    for it, which keeps shrinking cheap.
    """
    res = _solve(tree, _config(mode, args), None)
    if not res.self_check:
        record = {"kind": "self_check", "reported": res.cost, "recomputed": res.recomputed_cost}
        if reference:
            record["oracle"], record["oracle_method"] = _reference(tree, info)
        return res, record
    ref, method = _reference(tree, info)
    if ref is not None and ref != res.cost:
        return res, {"kind": "oracle_mismatch", "reported": res.cost, "oracle": ref, "oracle_method": method}
    return res, None


def _delete_leaf(tree: Tree, leaf: int) -> Tree:
    keep = [v for v in tree.vertices if v != leaf]
    relabel = {v: i + 1 for i, v in enumerate(keep)}
    return Tree.from_edges(
        len(keep), [(relabel[u], relabel[v]) for u, v in tree.edges if leaf not in (u, v)]
    )


def shrink(tree: Tree, still_fails: Callable[[Tree], bool]) -> Tree:
    """Delete leaves one at a time while ``still_fails`` holds; returns a leaf-minimal tree."""
    changed = True
    while changed and tree.n > 1:
        changed = False
        for leaf in [v for v in tree.vertices if tree.degree(v) <= 1]:
            smaller = _delete_leaf(tree, leaf)
            if still_fails(smaller):
                tree, changed = smaller, True
                break
    return tree


def cmd_difftest(args) -> dict[str, Any]:
    modes = [_mode(m) for m in args.modes.split(",") if m]
    if not modes:
        raise InputError("--modes needs at least one mode")
    if args.gen is None and args.nmax > SUBSET_DP_MAX_N:
        raise InputError(f"--nmax limited to {SUBSET_DP_MAX_N} when comparing against the oracle")
    if args.nmin < 1 or args.nmin > args.nmax:
        raise InputError("need 1 <= --nmin <= --nmax")

    cases: list[tuple[int, int | None, Tree, dict[str, Any]]] = []
    if args.gen:
        tree, info = parse_gen(args.gen, args.seed)
        cases.append((0, None, tree, {**info, "n": tree.n}))
    else:
        for i in range(args.trials):
            rng = random.Random(f"{args.seed}:{i}")
            n = rng.randint(args.nmin, args.nmax)
            sub = rng.getrandbits(64)
            tree = random_tree(n, sub)
            cases.append((i, sub, tree, {"kind": "random_prufer", "params": [n], "seed": sub, "n": n}))

    discrepancies = []
    costs_by_mode: dict[str, list[int]] = {m.value: [] for m in modes}
    for trial, sub, tree, info in cases:
        for mode in modes:
            res, found = _discrepancy(tree, mode, args, info)
            costs_by_mode[mode.value].append(res.cost)
            if found is None:
                continue

            def still_fails(t: Tree, mode=mode, kind=found["kind"]) -> bool:
                d = _discrepancy(t, mode, args, {"kind": "shrunk"}, reference=kind != "self_check")[1]
                return d is not None and d["kind"] == kind

            small = shrink(tree, still_fails)
            entry = {
                "trial": trial,
                "seed": sub,
                "n": tree.n,
                "mode": mode.value,
                **found,
                "shrunk_n": small.n,
                "shrunk_tree": small.to_text(),
                "shrunk": _discrepancy(small, mode, args, {"kind": "shrunk"}, reference=found["kind"] != "self_check")[1],
            }
            if args.out:
                out = Path(args.out)
                out.mkdir(parents=True, exist_ok=True)
                name = f"cx_trial{trial}_{mode.value}.txt"
                (out / name).write_text(small.to_text(), encoding="utf-8")
                entry["fixture"] = name
            discrepancies.append(entry)

    agree = None
    if len(modes) > 1:
        first = costs_by_mode[modes[0].value]
        agree = all(costs_by_mode[m.value] == first for m in modes[1:])
    return {
        "command": "difftest",
        "modes": [m.value for m in modes],
        "trials": len(cases),
        "seed": args.seed,
        "nmin": args.nmin,
        "nmax": args.nmax,
        "discrepancy_count": len(discrepancies),
        "discrepancies": discrepancies,
        "modes_agree": agree,
        "exit_status": EXIT_CHECK if discrepancies else EXIT_OK,
    }


def _difftest_text(rep: dict[str, Any]) -> str:
    lines = [f"{rep['trials']} trial(s), modes {','.join(rep['modes'])}: {rep['discrepancy_count']} discrepancy(ies)"]
    for d in rep["discrepancies"]:
        ref = d["oracle"] if d.get("oracle") is not None else d.get("recomputed")
        lines.append(
            f"  trial {d['trial']} n={d['n']} {d['mode']}: {d['kind']} reported {d['reported']} vs {ref}; "
            f"shrunk to n={d['shrunk_n']}"
        )
    if rep["modes_agree"] is not None:
        lines.append(f"modes agree on all trials: {rep['modes_agree']}")
    return "\n".join(lines)


# -- bugdemo -------------------------------------------------------------------


def cmd_bugdemo(args) -> dict[str, Any]:
    rows = []
    ok = True
    for k in range(args.kmin, args.kmax + 1):
        tree = generate_tree("complete_binary", k)
        row: dict[str, Any] = {"k": k, "n": tree.n, "closed_form": closed_form_complete_binary(k)}
        for mode in FormulaMode:
            res = mla_free(tree, SolverConfig(mode=mode), with_trace=False)
            row[mode.value] = _mode_record(res)
            if mode is not FormulaMode.ORIGINAL_BUG:
                ok = ok and res.self_check and res.cost == row["closed_form"]
        rows.append(row)
    return {"command": "bugdemo", "rows": rows, "exit_status": EXIT_OK if ok else EXIT_CHECK}


def _bugdemo_text(rep: dict[str, Any]) -> str:
    head = f"{'k':>2} {'n':>5} {'closed':>7} {'fix-a':>7} {'fix-b':>7} {'orig-bug':>9} {'recomputed':>10}  self-checks"
    lines = [head]
    for r in rep["rows"]:
        fa, fb, ob = r["fix_a"], r["fix_b"], r["original_bug"]
        checks = "/".join(x["self_check"] for x in (fa, fb, ob))
        lines.append(
            f"{r['k']:>2} {r['n']:>5} {r['closed_form']:>7} {fa['cost']:>7} {fb['cost']:>7} "
            f"{ob['cost']:>9} {ob['recomputed_cost']:>10}  {checks}"
        )
    return "\n".join(lines)


# -- entry point ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="treemla", description="Minimum linear arrangement of trees.")
    sub = parser.add_subparsers(dest="command", required=True)

    def tree_source(p):
        p.add_argument("input", nargs="?", help="edge-list file")
        p.add_argument("--gen", help="generator spec, e.g. complete-binary:5, path:7, random-prufer:12")
        p.add_argument("--seed", type=int, default=0)

    s = sub.add_parser("solve", help="solve one tree")
    tree_source(s)
    s.add_argument("--mode", default="fix-b", help="fix-a, fix-b or original-bug")
    s.add_argument("--vstar", choices=("centroid", "exhaustive"), default="centroid")
    s.add_argument("--p", choices=tuple(P_FLAGS), default=None)
    s.add_argument("--anchor", type=int, default=None)
    s.add_argument("--side", choices=("left", "right"), default="right")
    s.add_argument("--oracle", action="store_true", help="cross-check against an exact oracle")
    s.add_argument("--trace", action="store_true", help="include the decomposition trace in --json")
    s.add_argument("--json", action="store_true")

    g = sub.add_parser("generate", help="write a generated tree as an edge list")
    g.add_argument("spec")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out")

    c = sub.add_parser("check", help="evaluate an arrangement")
    c.add_argument("tree")
    c.add_argument("arrangement")
    c.add_argument("--json", action="store_true")

    d = sub.add_parser("difftest", help="randomised comparison against the oracle")
    d.add_argument("--trials", type=int, default=100)
    d.add_argument("--nmin", type=int, default=2)
    d.add_argument("--nmax", type=int, default=12)
    d.add_argument("--seed", type=int, default=0)
    d.add_argument("--modes", default="fix-a,fix-b")
    d.add_argument("--gen", default=None, help="test one generated tree instead of random ones")
    d.add_argument("--vstar", choices=("centroid", "exhaustive"), default="centroid")
    d.add_argument("--p", choices=tuple(P_FLAGS), default=None)
    d.add_argument("--out", help="directory for shrunk counterexample fixtures")
    d.add_argument("--json", action="store_true")

    b = sub.add_parser("bugdemo", help="complete binary trees in all three modes")
    b.add_argument("--kmin", type=int, default=2)
    b.add_argument("--kmax", type=int, default=6)
    b.add_argument("--json", action="store_true")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    handlers = {
        "solve": (cmd_solve, _solve_text),
        "generate": (cmd_generate, None),
        "check": (cmd_check, lambda r: str(r["cost"])),
        "difftest": (cmd_difftest, _difftest_text),
        "bugdemo": (cmd_bugdemo, _bugdemo_text),
    }
    fn, text = handlers[args.command]
    start = time.perf_counter()
    try:
        report = fn(args)
    except (InputError, OracleBoundError, MemoLimitExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    report["command_line"] = ["treemla", *(argv if argv is not None else sys.argv[1:])]
    report["wall_time"] = round(time.perf_counter() - start, 6)
    if text is not None:
        _emit(report, getattr(args, "json", False), text)
    return report["exit_status"]


if __name__ == "__main__":
    sys.exit(main())
