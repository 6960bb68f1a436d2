"""End-to-end acceptance checks; each test reports one pass/fail line."""
import random
import subprocess
import sys
import time
from fractions import Fraction
from itertools import combinations
from math import comb

import pytest

from repfam import oracle
from repfam.cli import parse_result
from repfam.generators import random_circuit, random_graph, random_partial_ktree
from repfam.kpath import k_path
from repfam.matroid import GraphSpec, contract, graphic_matroid, mask_of, uniform_matroid
from repfam.mld import format_circuit, solve_kwmld, solve_kwmmld
from repfam.product import (ProductSpec, product_repset_all_sizes, product_repset_linear,
                            product_repset_uniform, slice_repset, trim_product_uniform)
from repfam.repset import WeightedFamily, compute_repset_linear
from repfam.sepcol import (build_base_collection, build_collection, build_hash_family,
                           reduce_universe, split_collection)
from repfam.twdp import (DPStats, RawDecomposition, feedback_vertex_set, format_graph, format_td,
                         make_nice, steiner_tree)


# ---------------------------------------------------------------- instance suites

def _connected_graph(rng, nv, max_edges):
    edges = [(v, rng.randrange(v), 1) for v in range(1, nv)]
    others = [(u, v) for u, v in combinations(range(nv), 2)]
    rng.shuffle(others)
    for u, v in others[:rng.randint(0, max(0, max_edges - len(edges)))]:
        edges.append((u, v, 1))
    return GraphSpec(nv, edges)


def _sample_sets(rng, n, p, indep, count, tries=200):
    found = {}
    for _ in range(tries):
        if len(found) >= count:
            break
        s = mask_of(rng.sample(range(n), p))
        if indep(s):
            found.setdefault(s, rng.randint(0, 20))
    sets = sorted(found)
    return WeightedFamily(n, sets, [found[s] for s in sets])


def linear_suite(count=200, seed=2024):
    """(matroid, independence oracle, family, p, q, mode); half graphic, half uniform."""
    rng = random.Random(seed)
    out = []
    for idx in range(count):
        p, q = rng.randint(1, 4), rng.randint(0, 4)
        if idx % 2 == 0:
            nv = rng.randint(p + q + 1, 9)
            g = _connected_graph(rng, nv, 12)
            m = graphic_matroid(g)
            indep = oracle.forest_independence([(u, v) for u, v, _ in g.edges])
        else:
            n = rng.randint(max(p + q, 2), 12)
            k = rng.randint(p + q, min(n, p + q + 2))
            m = uniform_matroid(n, k)
            indep = (lambda s, k=k: s.bit_count() <= k)
        fam = _sample_sets(rng, len(m.ground), p, indep, rng.randint(1, 30))
        out.append((m, indep, fam, p, q, "min" if idx % 3 else "max"))
    return out


def _target(left, right, mode, indep=None):
    """Brute-force product family: best weight per disjoint (independent) union."""
    best = {}
    for a, wa in left:
        for b, wb in right:
            if a & b or (indep is not None and not indep(a | b)):
                continue
            w = wa + wb
            if a | b not in best or (w < best[a | b] if mode == "min" else w > best[a | b]):
                best[a | b] = w
    sets = sorted(best)
    return WeightedFamily(left.n, sets, [best[s] for s in sets])


def _capped(rng, n, p, indep, k):
    return _sample_sets(rng, n, p, indep, min(6, comb(k + 1, p)))


# ---------------------------------------------------------------- criteria

def test_criterion_01_size_bound(record):
    t0 = time.perf_counter()
    bad = 0
    suite = linear_suite()
    for m, _, fam, p, q, mode in suite:
        out = compute_repset_linear(m, fam, q, mode).family(fam)
        bad += len(out) > comb(p + q, p)
    dt = time.perf_counter() - t0
    ok = bad == 0 and dt < 30
    record(1, ok, f"{len(suite)} instances, {bad} over the bound, {dt:.1f}s (limit 30s)")
    assert ok


def test_criterion_02_representativity(record):
    t0 = time.perf_counter()
    rng = random.Random(77)
    failures: dict[str, int] = {}
    checks: dict[str, int] = {}

    def check(name, report):
        checks[name] = checks.get(name, 0) + 1
        if not report.ok:
            failures[name] = failures.get(name, 0) + 1

    from repfam.sepcol import compute_repset_uniform
    for m, indep, fam, p, q, mode in linear_suite():
        n = len(m.ground)
        k = p + q
        check("compute_repset_linear",
              oracle.verify_representative(indep, fam, compute_repset_linear(m, fam, q, mode).family(fam), q, mode))
        if p + q <= n:
            check("compute_repset_uniform", oracle.verify_representative(
                "uniform", fam, compute_repset_uniform(fam, q, mode, seed=p).family(fam), q, mode))
        p1 = max(1, p // 2)
        left = _capped(rng, n, p1, indep, k)
        right = _capped(rng, n, p - p1, indep, k) if p > p1 else WeightedFamily(n, [0], [0])
        if not len(left) or not len(right):
            continue
        spec = ProductSpec(left, right, k, mode)
        full = _target(left, right, mode, indep)
        check("product_repset_linear",
              oracle.verify_representative(indep, full, product_repset_linear(m, spec, seed=q), q, mode))
        for s, ws in list(right)[:2]:
            sl = slice_repset(m, left, s, mode, k, ws)
            check("slice_repset", oracle.verify_representative(
                indep, _target(left, WeightedFamily(n, [s], [ws]), mode, indep), sl, q, mode))
        uni = _target(left, right, mode)
        check("product_repset_uniform", oracle.verify_representative(
            "uniform", uni, product_repset_uniform(spec, seed=q), q, mode))
        check("trim_product_uniform", oracle.verify_representative(
            "uniform", uni, trim_product_uniform(spec, seed=q), q, mode))
        # mixed-size factors: add the empty set and a few singletons
        ml, mr = WeightedFamily(n), WeightedFamily(n)
        for dst, src in ((ml, left), (mr, right)):
            for s, w in src:
                dst.append(s, w)
        ml.append(0, rng.randint(0, 20)) if 0 not in ml.sets else None
        room = comb(k + 1, 1) - sum(1 for s in mr.sets if s.bit_count() == 1)
        for s, w in list(_capped(rng, n, 1, indep, k))[:max(0, room)]:
            if s not in mr.sets:
                mr.append(s, w)
        table = product_repset_all_sizes(m, ml, mr, k, mode)
        lc, rc = ml.by_size(), mr.by_size()
        for (i, j), out in table.items():
            check("product_repset_all_sizes", oracle.verify_representative(
                indep, _target(lc[i], rc[j], mode, indep), out, k - i - j, mode))
    dt = time.perf_counter() - t0
    missing = {"compute_repset_linear", "compute_repset_uniform", "slice_repset", "product_repset_linear",
               "product_repset_uniform", "trim_product_uniform", "product_repset_all_sizes"} - set(checks)
    ok = not failures and not missing and dt < 300
    record(2, ok, f"{sum(checks.values())} checks over 7 functions, violations {failures or 0}, {dt:.1f}s (limit 300s)")
    assert ok


def test_criterion_03_separating(record):
    t0 = time.perf_counter()
    bad, built = [], 0
    xs = [Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)]
    for n in range(1, 11):
        for p in range(0, 7):
            for q in range(0, 7 - p):
                if p + q > n:
                    continue
                for x in xs:
                    for depth in (0, 1):
                        c = build_collection(n, p, q, x, seed=n + p + q, depth=depth)
                        built += 1
                        if not oracle.verify_separating(c).ok:
                            bad.append(("pipeline", n, p, q, x, depth))
    # explicit composition: universe reduction and splitting
    for n, p, q in [(8, 1, 1), (9, 2, 1), (10, 1, 2), (10, 2, 2)]:
        k = p + q
        hf = build_hash_family(n, k, seed=3)
        inner = build_base_collection(k * k, p, q, Fraction(1, 2), seed=4)
        lifted = reduce_universe(inner, hf)
        built += 1
        if not oracle.verify_separating(lifted).ok:
            bad.append(("reduce", n, p, q))
    for n, p, q in [(6, 2, 2), (8, 3, 2), (10, 2, 3), (10, 3, 3)]:
        sp = split_collection(n, p, q, lambda a, b, n=n: build_base_collection(n, a, b, Fraction(1, 2), seed=a * 7 + b))
        built += 1
        if not oracle.verify_separating(sp).ok:
            bad.append(("split", n, p, q))
    dt = time.perf_counter() - t0
    ok = not bad and dt < 120
    record(3, ok, f"{built} collections, violations {bad[:3] or 0}, {dt:.1f}s (limit 120s)")
    assert ok


def test_criterion_04_contraction(record):
    bad = checks = 0
    for nv in (4, 5):
        g = GraphSpec(nv, [(u, v, 1) for u, v in combinations(range(nv), 2)])
        m = graphic_matroid(g)
        indep = oracle.forest_independence([(u, v) for u, v, _ in g.edges])
        e = len(g.edges)
        full = (1 << e) - 1
        for size in range(3):
            for s in map(mask_of, combinations(range(e), size)):
                if not indep(s):
                    continue
                ms = contract(m, s)
                rest = full & ~s
                x = rest
                while True:
                    checks += 1
                    bad += ms.independent(x) != indep(x | s)
                    if x == 0:
                        break
                    x = (x - 1) & rest
    ok = bad == 0
    record(4, ok, f"{checks} (S, X) pairs on K4 and K5, {bad} mismatches")
    assert ok


def circuit_suite(count=100, seed=31):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        nv = rng.randint(1, 10)
        c = random_circuit(rng, nv, rng.randint(1, 25), max_weight=9)
        k = rng.randint(1, min(5, nv))
        # most circuits get a k at which a multilinear monomial exists
        degrees = sorted({sum(m) for m, co in oracle.expand_circuit(c, max_degree=5).items()
                          if co and max(m, default=0) <= 1 and sum(m) >= 1})
        if degrees and rng.random() < 0.75:
            k = rng.choice(degrees)
        out.append((c, k))
    return out


REGRESSION = ("var x1 weight=5\nvar x2 weight=1\nvar x3 weight=1\n"
              "add a x1 x2\nadd b x1 x3\nmul out a b\noutput out\n")


def test_criterion_05_mld(record):
    from repfam.mld import parse_circuit
    agree = positives = 0
    suite = circuit_suite()
    for i, (c, k) in enumerate(suite):
        ref = oracle.brute_mld(c, k)
        got = solve_kwmld(c, k, seed=i)
        positives += ref is not None
        agree += (ref is None and got is None) or (ref is not None and got is not None and got[1] == ref[0])
    reg = solve_kwmld(parse_circuit(REGRESSION), 2)
    reg_ok = reg == (["x2", "x3"], 2)
    ok = agree == len(suite) and reg_ok
    record(5, ok, f"{agree}/{len(suite)} agree ({positives} with a monomial), regression {'ok' if reg_ok else reg}")
    assert ok


def test_criterion_06_matroidal_mld(record):
    rng = random.Random(8)
    suite = circuit_suite()
    same = indep_ok = graphic_runs = 0
    for i, (c, k) in enumerate(suite):
        nv = len(c.variables)
        a = solve_kwmld(c, k, seed=i)
        b = solve_kwmmld(c, uniform_matroid(nv, k), k, seed=i)
        same += (a is None and b is None) or (a is not None and b is not None and a[1] == b[1])
        # graphic: variable j labels edge j; the first k edges form a path so the rank is >= k
        vert = nv + 1
        edges = [(j, j + 1, 1) for j in range(k)]
        edges += [tuple(rng.sample(range(vert), 2)) + (1,) for _ in range(nv - k)]
        g = GraphSpec(vert, edges)
        res = solve_kwmmld(c, graphic_matroid(g), k, seed=i)
        graphic_runs += 1
        ref = oracle.brute_mld(c, k, oracle.forest_independence([(u, v) for u, v, _ in edges]))
        if (res is None) != (ref is None):
            continue
        if res is None:
            indep_ok += 1
            continue
        pos = {name: j for j, name in enumerate(c.variables)}
        chosen = [edges[pos[name]][:2] for name in res[0]]
        indep_ok += oracle.is_forest(vert, chosen) and res[1] == ref[0]
    ok = same == len(suite) and indep_ok == graphic_runs
    record(6, ok, f"uniform agreement {same}/{len(suite)}, graphic witnesses independent and optimal {indep_ok}/{graphic_runs}")
    assert ok


# ---------------------------------------------------------------- treewidth DP

def tw_suite(count=100, seed=555):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.randint(2, 12)
        g, bags, edges = random_partial_ktree(rng, n, rng.randint(1, 3), max_weight=20)
        t = rng.sample(range(n), rng.randint(1, min(n, 4)))
        g = GraphSpec(g.n, g.edges, t, [rng.randint(0, 20) for _ in range(n)])
        td = RawDecomposition({i: frozenset(b) for i, b in enumerate(bags)}, edges)
        out.append((g, td))
    return out


@pytest.fixture(scope="module")
def tw_runs():
    suite = tw_suite()
    res = {"steiner": [], "fvs": [], "stats": [], "time": {}}
    t0 = time.perf_counter()
    for i, (g, td) in enumerate(suite):
        st = DPStats()
        res["steiner"].append((g, steiner_tree(g, make_nice(td, g), seed=i, stats=st)))
        res["stats"].append(st)
    res["time"]["steiner"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    for i, (g, td) in enumerate(suite):
        st = DPStats()
        res["fvs"].append((g, feedback_vertex_set(g, make_nice(td, g), seed=i, stats=st)))
        res["stats"].append(st)
    res["time"]["fvs"] = time.perf_counter() - t0
    return res


def _connected_cover(g, chosen):
    parent = list(range(g.n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a
    for idx in chosen:
        u, v, _ = g.edges[idx]
        parent[find(u)] = find(v)
    return len({find(t) for t in g.terminals}) == 1


def test_criterion_07_steiner(record, tw_runs):
    good = 0
    for g, (w, chosen) in tw_runs["steiner"]:
        ref = oracle.brute_steiner(g)
        good += (ref is not None and w == ref[0] and sum(g.edges[i][2] for i in chosen) == w
                 and _connected_cover(g, chosen))
    dt = tw_runs["time"]["steiner"]
    ok = good == len(tw_runs["steiner"]) and dt < 120
    record(7, ok, f"{good}/{len(tw_runs['steiner'])} optimal with valid witness, {dt:.1f}s (limit 120s)")
    assert ok


def test_criterion_08_fvs(record, tw_runs):
    good = 0
    for g, (w, removed) in tw_runs["fvs"]:
        ref = oracle.brute_fvs(g)
        keep = set(range(g.n)) - set(removed)
        rest = [(u, v) for u, v, _ in g.edges if u in keep and v in keep]
        good += (w == ref[0] and sum(g.weight_of_vertex(v) for v in removed) == w
                 and oracle.is_forest(g.n, rest))
    ok = good == len(tw_runs["fvs"])
    record(8, ok, f"{good}/{len(tw_runs['fvs'])} optimal with acyclic complement, {tw_runs['time']['fvs']:.1f}s")
    assert ok


def test_criterion_09_kpath(record):
    rng = random.Random(99)
    agree = stable = positives = 0
    total = 100
    for i in range(total):
        n, k = rng.randint(1, 14), rng.randint(1, 6)
        g = random_graph(rng, n, rng.choice([0.15, 0.25, 0.4]), 9)
        ref = oracle.brute_kpath(g, k)
        got = k_path(g, k, seed=i)
        half = k_path(g, k, seed=i, x_override=Fraction(1, 2))
        positives += ref is not None
        agree += (ref is None and got is None) or (ref is not None and got is not None and got[1] == ref[0])
        stable += (got is None) == (half is None) and (got is None or got[1] == half[1])
    ok = agree == total and stable == total
    record(9, ok, f"{agree}/{total} agree with DFS ({positives} positive), x=1/2 unchanged {stable}/{total}")
    assert ok


def test_criterion_10_size_invariant(record, tw_runs):
    checks = sum(s.invariant_checks for s in tw_runs["stats"])
    viol = sum(s.invariant_violations for s in tw_runs["stats"])
    ok = viol == 0 and checks > 0
    record(10, ok, f"{checks} node checks across Steiner and FVS runs, {viol} violations")
    assert ok


# ---------------------------------------------------------------- determinism

@pytest.fixture(scope="module")
def cli_files(tmp_path_factory):
    d = tmp_path_factory.mktemp("cli")
    rng = random.Random(4)
    g, bags, edges = random_partial_ktree(rng, 9, 2, max_weight=9)
    g = GraphSpec(g.n, g.edges, (0, 4, 7), [rng.randint(1, 9) for _ in range(g.n)])
    (d / "g.txt").write_text(format_graph(g))
    (d / "g.td").write_text(format_td(RawDecomposition({i: frozenset(b) for i, b in enumerate(bags)}, edges), g.n))
    (d / "c.txt").write_text(format_circuit(random_circuit(random.Random(5), 6, 14)))
    (d / "m.txt").write_text("uniform 3\n")
    import json
    k4 = [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]]
    fam = [[3, [0, 1]], [1, [2, 3]], [2, [0, 5]], [4, [1, 4]], [0, [3, 4]]]
    (d / "r.json").write_text(json.dumps({"matroid": {"kind": "graphic", "vertices": 4, "edges": k4},
                                          "family": fam, "candidate": fam[:3],
                                          "left": [[1, [0]], [2, [1]], [0, [5]]], "right": [[1, [2]], [3, [4]]]}))
    (d / "u.json").write_text(json.dumps({"matroid": {"kind": "uniform", "n": 8, "k": 4},
                                          "family": [[i, [i, (i + 3) % 8]] for i in range(8)]}))
    return d


def _commands(d):
    g, c, r = str(d / "g.txt"), str(d / "c.txt"), str(d / "r.json")
    return [
        ["repset", "core", "--input", r, "--q", "1"],
        ["repset", "core", "--input", str(d / "u.json"), "--q", "2", "--algo", "uniform"],
        ["repset", "product", "--input", r, "--k", "3"],
        ["repset", "product", "--input", r, "--k", "3", "--algo", "uniform"],
        ["sepcol", "build", "--n", "10", "--p", "2", "--q", "2", "--x", "1/3", "--out", str(d / "col.json")],
        ["sepcol", "verify", "--collection", str(d / "col.json")],
        ["sepcol", "dump", "--collection", str(d / "col.json")],
        ["mld", "--circuit", c, "--k", "3"],
        ["mld", "--circuit", c, "--k", "3", "--matroid", str(d / "m.txt")],
        ["steiner", "--graph", g, "--td", str(d / "g.td")],
        ["steiner", "--graph", g],
        ["fvs", "--graph", g, "--td", str(d / "g.td")],
        ["kpath", "--graph", g, "--k", "4"],
        ["verify", "steiner", "--graph", g],
        ["verify", "fvs", "--graph", g],
        ["verify", "kpath", "--graph", g, "--k", "4"],
        ["verify", "mld", "--circuit", c, "--k", "3"],
        ["verify", "repset", "--input", r, "--q", "1"],
    ]


def _run(argv):
    seeded = argv[0] != "verify" and argv[:2] not in (["sepcol", "verify"], ["sepcol", "dump"])
    extra = ["--seed", "11"] if seeded else []
    proc = subprocess.run([sys.executable, "-m", "repfam", *argv, "--json", *extra],
                          capture_output=True, timeout=120)
    return proc.returncode, proc.stdout


def test_criterion_11_determinism(record, cli_files):
    cmds = _commands(cli_files)
    identical, failed = 0, []
    for argv in cmds:
        a, b = _run(argv), _run(argv)
        if a == b and a[0] in (0, 1) and parse_result(a[1].decode())["problem"]:
            identical += 1
        else:
            failed.append(" ".join(argv[:2]))
    ok = identical == len(cmds)
    record(11, ok, f"{identical}/{len(cmds)} subcommand invocations byte-identical across two runs {failed or ''}")
    assert ok
