"""Command-line entry point.

Every subcommand prints one JSON document (``--json``) or a one-line summary.
Exit codes: 0 solved, 1 valid but infeasible, 2 input error, 3 budget error.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

from . import oracle
from .errors import BudgetError, NoSolution, RepfamError, UsageError
from .matroid import GraphSpec, LinearMatroid, elements_of, graphic_matroid, mask_of, uniform_matroid
from .ffmat import FieldMatrix
from .repset import WeightedFamily, compute_repset_linear
from .sepcol import DEFAULT_DEPTH, SeparatingCollection, build_collection, compute_repset_uniform

EXIT_OK, EXIT_INFEASIBLE, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


@dataclass
class RunConfig:
    subcommand: str
    action: str | None = None
    inputs: dict[str, str] = field(default_factory=dict)
    k: int | None = None
    q: int | None = None
    mode: str = "min"
    seed: int = 0
    x: str | None = None
    depth: int = DEFAULT_DEPTH
    algo: str | None = None
    shrink: str = "product"
    verify: bool = False
    output: str | None = None
    json: bool = False
    timing: bool = False
    extra: dict[str, Any] = field(default_factory=dict)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}\n{self.format_usage()}")


def _common(p: argparse.ArgumentParser, seed=True):
    if seed:
        p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true", help="print the JSON result document")
    p.add_argument("--out", help="also write the JSON document to this file")
    p.add_argument("--timing", action="store_true", help="include elapsed_ms (breaks byte-identity)")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="repfam", description="Representative families and their applications.")
    sub = ap.add_subparsers(dest="subcommand", parser_class=_Parser)
    sub.required = True

    rs = sub.add_parser("repset", help="representative family of a family or a product")
    rs_sub = rs.add_subparsers(dest="action", parser_class=_Parser)
    rs_sub.required = True
    core = rs_sub.add_parser("core", help="q-representative subfamily")
    core.add_argument("--input", required=True, help="JSON instance (matroid + family)")
    core.add_argument("--q", type=int, required=True)
    product = rs_sub.add_parser("product", help="representative family of left . right")
    product.add_argument("--input", required=True, help="JSON instance (matroid + left + right)")
    product.add_argument("--k", type=int, required=True)
    for p in (core, product):
        p.add_argument("--mode", choices=("min", "max"), default="min")
        p.add_argument("--algo", choices=("linear", "uniform"), default="linear")
        p.add_argument("--depth", type=int, default=DEFAULT_DEPTH)
        p.add_argument("--verify", action="store_true", help="check the output with the oracle")
        _common(p)

    sc = sub.add_parser("sepcol", help="separating collections")
    sc_sub = sc.add_subparsers(dest="action", parser_class=_Parser)
    sc_sub.required = True
    build = sc_sub.add_parser("build")
    for name in ("--n", "--p", "--q"):
        build.add_argument(name, type=int, required=True)
    build.add_argument("--x", default="1/2")
    build.add_argument("--depth", type=int, default=DEFAULT_DEPTH)
    build.add_argument("--s", type=int, default=None, help="override the splitting block count")
    _common(build)
    for name in ("verify", "dump"):
        p = sc_sub.add_parser(name)
        p.add_argument("--collection", required=True)
        _common(p, seed=False)

    mld = sub.add_parser("mld", help="lightest k-multilinear monomial of a circuit")
    mld.add_argument("--circuit", required=True)
    mld.add_argument("--k", type=int, required=True)
    mld.add_argument("--matroid", help="restrict monomials to independent variable sets")
    mld.add_argument("--mode", choices=("min", "max"), default="min")
    mld.add_argument("--depth", type=int, default=DEFAULT_DEPTH)
    mld.add_argument("--verify", action="store_true")
    _common(mld)

    for name in ("steiner", "fvs"):
        p = sub.add_parser(name)
        p.add_argument("--graph", required=True)
        p.add_argument("--td", help="PACE tree decomposition (default: greedy)")
        p.add_argument("--shrink", choices=("product", "naive"), default="product")
        p.add_argument("--verify", action="store_true")
        _common(p)

    kp = sub.add_parser("kpath", help="lightest simple path on k vertices")
    kp.add_argument("--graph", required=True)
    kp.add_argument("--k", type=int, required=True)
    kp.add_argument("--unweighted", action="store_true")
    kp.add_argument("--x", help="replace the per-level x schedule by this constant")
    kp.add_argument("--depth", type=int, default=DEFAULT_DEPTH)
    kp.add_argument("--verify", action="store_true")
    _common(kp)

    vf = sub.add_parser("verify", help="brute-force oracles for fixture regeneration")
    vf_sub = vf.add_subparsers(dest="action", parser_class=_Parser)
    vf_sub.required = True
    for name in ("steiner", "fvs"):
        p = vf_sub.add_parser(name)
        p.add_argument("--graph", required=True)
        _common(p, seed=False)
    p = vf_sub.add_parser("kpath")
    p.add_argument("--graph", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--unweighted", action="store_true")
    _common(p, seed=False)
    p = vf_sub.add_parser("mld")
    p.add_argument("--circuit", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--matroid")
    _common(p, seed=False)
    p = vf_sub.add_parser("repset", help="check a candidate family against an original")
    p.add_argument("--input", required=True, help="JSON instance with 'family' and 'candidate'")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--mode", choices=("min", "max"), default="min")
    _common(p, seed=False)
    return ap


_INPUT_KEYS = ("input", "collection", "circuit", "matroid", "graph", "td")


def parse_args(argv: list[str] | None = None) -> RunConfig:
    ns = build_parser().parse_args(argv)
    d = vars(ns)
    cfg = RunConfig(
        subcommand=d["subcommand"], action=d.get("action"),
        inputs={k: d[k] for k in _INPUT_KEYS if d.get(k)},
        k=d.get("k"), q=d.get("q"), mode=d.get("mode") or "min", seed=d.get("seed") or 0,
        x=d.get("x"), depth=d.get("depth", DEFAULT_DEPTH), algo=d.get("algo"),
        shrink=d.get("shrink") or "product", verify=bool(d.get("verify")), output=d.get("out"),
        json=d["json"], timing=d["timing"],
        extra={k: d[k] for k in ("n", "p", "s", "unweighted") if k in d},
    )
    if cfg.depth is not None and not 0 <= cfg.depth <= 3:
        raise UsageError("--depth must be between 0 and 3")
    return cfg


# ---------------------------------------------------------------- results

def make_result(problem: str, found: bool, weight=None, witness=None, seed=None, **stats) -> dict:
    st = {"family_sizes": stats.pop("family_sizes", None),
          "collection_sizes": stats.pop("collection_sizes", None),
          "seed": seed, "x_values": stats.pop("x_values", None)}
    st.update(stats)
    return {"problem": problem, "found": found, "weight": weight, "witness": witness, "stats": st}


def emit_result(result: dict, config: RunConfig, elapsed_ms: float | None = None) -> str:
    if config.timing and elapsed_ms is not None:
        result["stats"]["elapsed_ms"] = round(elapsed_ms, 3)
    text = json.dumps(result, separators=(",", ":"))
    if config.output:
        try:
            Path(config.output).write_text(text + "\n")
        except OSError as exc:
            raise RepfamError(f"cannot write {config.output}: {exc}") from None
    return text


def parse_result(text: str) -> dict:
    return json.loads(text)


def _summary(result: dict) -> str:
    if not result["found"]:
        return f"{result['problem']}: no solution"
    return f"{result['problem']}: weight={result['weight']} witness={result['witness']}"


# ---------------------------------------------------------------- inputs

def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


def _json_input(path: str) -> dict:
    try:
        return json.loads(_read(path))
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc})") from None


def load_matroid(doc: dict) -> LinearMatroid:
    """``{"kind": "uniform", "n", "k"}``, ``{"kind": "graphic", "vertices", "edges"}``
    or ``{"kind": "matrix", "modulus", "rows"}``."""
    kind = doc.get("kind")
    if kind == "uniform":
        return uniform_matroid(int(doc["n"]), int(doc["k"]), doc.get("modulus"))
    if kind == "graphic":
        return graphic_matroid(GraphSpec(int(doc["vertices"]), [(u, v, 0) for u, v in doc["edges"]]))
    if kind == "matrix":
        rows = doc["rows"]
        p = int(doc["modulus"])
        return LinearMatroid.from_matrix(FieldMatrix.from_rows(rows, p))
    raise UsageError(f"unknown matroid kind {kind!r}")


def load_family(items, n: int) -> WeightedFamily:
    """List of ``[weight, [elements...]]`` pairs."""
    sets, weights = [], []
    for item in items:
        w, elems = item
        sets.append(mask_of(elems))
        weights.append(int(w))
    return WeightedFamily(n, sets, weights)


def _family_out(fam: WeightedFamily) -> list:
    return [[w, elements_of(s)] for s, w in zip(fam.sets, fam.weights)]


# ---------------------------------------------------------------- commands

def _cmd_repset(cfg: RunConfig) -> dict:
    doc = _json_input(cfg.inputs["input"])
    m = load_matroid(doc["matroid"])
    n = max(m.ground) + 1 if m.ground else 0
    left = load_family(doc.get("family", doc.get("left", [])), n)
    check = m if cfg.algo == "linear" else "uniform"
    if cfg.action == "core":
        if cfg.algo == "linear":
            res = compute_repset_linear(m, left, cfg.q, cfg.mode, cfg.seed)
            extra = {}
        else:
            res = compute_repset_uniform(left, cfg.q, cfg.mode, seed=cfg.seed, depth=cfg.depth)
            extra = {"collection_sizes": [res.meta.get("collection_size")], "x_values": [res.meta.get("x")]}
        out = res.family(left)
        q, orig = cfg.q, left
    else:
        from .product import ProductSpec, naive_product, product_repset_linear, trim_product_uniform
        right = load_family(doc["right"], n)
        spec = ProductSpec(left, right, cfg.k, cfg.mode)
        pst: dict = {}
        if cfg.algo == "linear":
            out = product_repset_linear(m, spec, cfg.seed, pst)
            extra = {}
        else:
            out = trim_product_uniform(spec, seed=cfg.seed, depth=cfg.depth, stats=pst)
            extra = {"collection_sizes": [pst.get("F_size"), pst.get("H_size")],
                     "x_values": [pst.get("x1"), pst.get("x2")]}
        q = spec.q
        orig = naive_product(left, right, cfg.mode, m.independent if cfg.algo == "linear" else None)
    if cfg.verify:
        extra["verified"] = oracle.verify_representative(check, orig, out, q, cfg.mode).ok
    return make_result(f"repset-{cfg.action}", True, None, _family_out(out), cfg.seed,
                       family_sizes=[len(orig), len(out)], **extra)


def _cmd_sepcol(cfg: RunConfig) -> dict:
    if cfg.action == "build":
        n, p, q = cfg.extra["n"], cfg.extra["p"], cfg.q
        x = Fraction(cfg.x)
        c = build_collection(n, p, q, x, cfg.seed, cfg.depth, cfg.extra.get("s"))
        doc = json.loads(c.to_json())
        return make_result("sepcol-build", True, None, doc, cfg.seed, collection_sizes=[len(c)],
                           x_values=[str(x)], stages=c.meta.get("stages"))
    doc = _json_input(cfg.inputs["collection"])
    if isinstance(doc, dict) and isinstance(doc.get("witness"), dict):
        doc = doc["witness"]  # a saved `sepcol build` result
    c = SeparatingCollection.from_json(json.dumps(doc))
    if cfg.action == "verify":
        rep = oracle.verify_separating(c)
        return make_result("sepcol-verify", rep.ok, None,
                           None if rep.ok else [str(v) for v in rep.first_violation], c.seed,
                           collection_sizes=[len(c)], checked=rep.checked_count)
    return make_result("sepcol-dump", True, None, [elements_of(s) for s in c.sets], c.seed,
                       collection_sizes=[len(c)])


def _load_circuit_and_matroid(cfg: RunConfig):
    from .mld import parse_circuit, parse_matroid
    c = parse_circuit(_read(cfg.inputs["circuit"]))
    m = parse_matroid(_read(cfg.inputs["matroid"]), c.variables) if "matroid" in cfg.inputs else None
    return c, m


def _cmd_mld(cfg: RunConfig) -> dict:
    from .mld import solve_kwmld, solve_kwmmld
    c, m = _load_circuit_and_matroid(cfg)
    st: dict = {}
    if m is None:
        ans = solve_kwmld(c, cfg.k, cfg.mode, cfg.seed, cfg.depth, st)
    else:
        ans = solve_kwmmld(c, m, cfg.k, cfg.mode, cfg.seed, st)
    extra = {}
    if cfg.verify and cfg.mode == "min":
        ref = oracle.brute_mld(c, cfg.k, oracle.matrix_independence(m) if m is not None else None)
        extra["verified"] = (ref is None) == (ans is None) and (ans is None or ref[0] == ans[1])
    sizes = st.get("family_sizes", {})
    return make_result("mld", ans is not None, ans[1] if ans else None, ans[0] if ans else None, cfg.seed,
                       family_sizes=[sizes[k] for k in sorted(sizes)], x_values=st.get("x_values"), **extra)


def _load_graph(cfg: RunConfig) -> GraphSpec:
    from .twdp import parse_graph
    return parse_graph(_read(cfg.inputs["graph"]))


def _cmd_treewidth(cfg: RunConfig) -> dict:
    from .twdp import (DPStats, feedback_vertex_set, greedy_decomposition, make_nice, parse_td,
                       steiner_tree)
    g = _load_graph(cfg)
    td = parse_td(_read(cfg.inputs["td"])) if "td" in cfg.inputs else greedy_decomposition(g)
    ntd = make_nice(td, g)
    st = DPStats()
    extra: dict = {}
    if cfg.subcommand == "steiner":
        try:
            w, wit = steiner_tree(g, ntd, cfg.shrink, cfg.seed, True, st)
        except NoSolution:
            w, wit = None, None
        if cfg.verify:
            ref = oracle.brute_steiner(g)
            extra["verified"] = (ref[0] if ref else None) == w
        if wit is None:
            return make_result("steiner", False, None, None, cfg.seed, width=st.width)
        wit = [[g.edges[i][0] + 1, g.edges[i][1] + 1] for i in wit]
    else:
        w, wit = feedback_vertex_set(g, ntd, cfg.shrink, cfg.seed, True, st)
        if cfg.verify:
            extra["verified"] = oracle.brute_fvs(g)[0] == w
        wit = [v + 1 for v in wit]
    return make_result(cfg.subcommand, True, w, wit, cfg.seed, family_sizes=st.family_sizes,
                       width=st.width, invariant_violations=st.invariant_violations, **extra)


def _cmd_kpath(cfg: RunConfig) -> dict:
    from .kpath import k_path
    g = _load_graph(cfg)
    weighted = not cfg.extra.get("unweighted")
    st: dict = {}
    ans = k_path(g, cfg.k, weighted, cfg.seed, cfg.depth, cfg.x, st)
    extra = {}
    if cfg.verify:
        gw = g if weighted else GraphSpec(g.n, g.edges, (), [0] * g.n)
        ref = oracle.brute_kpath(gw, cfg.k)
        extra["verified"] = (ref is None) == (ans is None) and (ans is None or ref[0] == ans[1])
    return make_result("kpath", ans is not None, ans[1] if ans else None,
                       [v + 1 for v in ans[0]] if ans else None, cfg.seed,
                       family_sizes=st.get("family_sizes"), x_values=st.get("x_values"), **extra)


def _cmd_verify(cfg: RunConfig) -> dict:
    a = cfg.action
    if a == "steiner":
        g = _load_graph(cfg)
        ref = oracle.brute_steiner(g)
        return make_result("verify-steiner", ref is not None, ref[0] if ref else None,
                           [[g.edges[i][0] + 1, g.edges[i][1] + 1] for i in ref[1]] if ref else None)
    if a == "fvs":
        w, vs = oracle.brute_fvs(_load_graph(cfg))
        return make_result("verify-fvs", True, w, [v + 1 for v in vs])
    if a == "kpath":
        g = _load_graph(cfg)
        if cfg.extra.get("unweighted"):
            g = GraphSpec(g.n, g.edges, (), [0] * g.n)
        ref = oracle.brute_kpath(g, cfg.k)
        return make_result("verify-kpath", ref is not None, ref[0] if ref else None,
                           [v + 1 for v in ref[1]] if ref else None)
    if a == "mld":
        c, m = _load_circuit_and_matroid(cfg)
        ref = oracle.brute_mld(c, cfg.k, oracle.matrix_independence(m) if m is not None else None)
        return make_result("verify-mld", ref is not None, ref[0] if ref else None, ref[1] if ref else None)
    doc = _json_input(cfg.inputs["input"])
    m = load_matroid(doc["matroid"])
    n = max(m.ground) + 1 if m.ground else 0
    rep = oracle.verify_representative(m, load_family(doc["family"], n),
                                       load_family(doc["candidate"], n), cfg.q, cfg.mode)
    return make_result("verify-repset", rep.ok, None,
                       None if rep.ok else [str(v) for v in rep.first_violation], checked=rep.checked_count)


_COMMANDS = {"repset": _cmd_repset, "sepcol": _cmd_sepcol, "mld": _cmd_mld, "steiner": _cmd_treewidth,
             "fvs": _cmd_treewidth, "kpath": _cmd_kpath, "verify": _cmd_verify}


def run(cfg: RunConfig) -> tuple[dict, float]:
    t0 = time.perf_counter()
    result = _COMMANDS[cfg.subcommand](cfg)
    return result, (time.perf_counter() - t0) * 1000


def main(argv: list[str] | None = None) -> int:
    try:
        cfg = parse_args(argv)
        result, ms = run(cfg)
        text = emit_result(result, cfg, ms)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_INPUT
    except BudgetError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (RepfamError, ValueError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(text if cfg.json else _summary(result))
    return EXIT_OK if result["found"] else EXIT_INFEASIBLE


if __name__ == "__main__":
    sys.exit(main())
