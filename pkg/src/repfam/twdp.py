"""Steiner Tree and Feedback Vertex Set over nice tree decompositions.

For every node t and every Z inside the bag we keep partial solutions of the
part of the graph below t.  A partial solution is summarized by its
*boundary forest*: one star per connected component, on the bag vertices that
component touches, centred at the smallest of them.  Two partial solutions
with the same boundary forest behave identically for the rest of the graph,
and a completion fits a partial solution exactly when the two boundary
forests are disjoint with an acyclic union.  That is independence in the
graphic matroid of the complete graph on Z, so representative families in
that matroid bound the number of partial solutions kept per class.

Steiner Tree forgets and joins combine two families, and the shrinking is
done on the product directly (``shrink="product"``).  ``shrink="naive"``
materializes the product first and is kept as a cross-check.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Iterable

from .errors import InputError, InvalidDecomposition, NoSolution
from .matroid import GraphSpec, LinearMatroid, graphic_matroid
from .product import product_repset_all_sizes
from .repset import WeightedFamily, better, compute_repset_linear

CLASS_SLACK = 2


# ---------------------------------------------------------------- decompositions

@dataclass
class RawDecomposition:
    bags: dict[int, frozenset[int]]
    edges: list[tuple[int, int]]

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags.values()), default=0) - 1


@dataclass
class NiceNode:
    kind: str  # base | introduce | forget | join
    bag: frozenset[int]
    vertex: int | None = None
    children: tuple[int, ...] = ()


@dataclass
class NiceTreeDecomposition:
    nodes: list[NiceNode]
    root: int

    @property
    def width(self) -> int:
        return max((len(nd.bag) for nd in self.nodes), default=0) - 1

    def postorder(self) -> list[int]:
        order, stack = [], [(self.root, False)]
        while stack:
            t, done = stack.pop()
            if done:
                order.append(t)
                continue
            stack.append((t, True))
            for c in reversed(self.nodes[t].children):
                stack.append((c, False))
        return order


def _tree_components(ids: Iterable[int], edges: list[tuple[int, int]]) -> list[list[int]]:
    adj: dict[int, list[int]] = {i: [] for i in ids}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    seen: set[int] = set()
    comps = []
    for s in adj:
        if s in seen:
            continue
        comp, stack = [], [s]
        seen.add(s)
        while stack:
            u = stack.pop()
            comp.append(u)
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        comps.append(comp)
    return comps


def validate_decomposition(td: RawDecomposition, g: GraphSpec) -> None:
    """Raise InvalidDecomposition naming the violated condition."""
    ids = set(td.bags)
    for a, b in td.edges:
        if a not in ids or b not in ids:
            raise InvalidDecomposition(f"tree edge ({a},{b}) uses an unknown bag")
    comps = _tree_components(ids, td.edges)
    if len(td.edges) != len(ids) - len(comps):
        raise InvalidDecomposition("decomposition graph is not a tree (it has a cycle)")
    covered = set().union(*td.bags.values()) if td.bags else set()
    for v in range(g.n):
        if v not in covered:
            raise InvalidDecomposition(f"vertex coverage: vertex {v} is in no bag")
    for u, v, _ in g.edges:
        if not any(u in b and v in b for b in td.bags.values()):
            raise InvalidDecomposition(f"edge coverage: edge ({u},{v}) is in no bag")
    for v in covered:
        holders = [i for i, b in td.bags.items() if v in b]
        sub = [(a, b) for a, b in td.edges if v in td.bags[a] and v in td.bags[b]]
        if len(_tree_components(holders, sub)) != 1:
            raise InvalidDecomposition(f"connectivity: bags holding vertex {v} are not connected")


def make_nice(td: RawDecomposition, g: GraphSpec) -> NiceTreeDecomposition:
    """Nice decomposition of the same width with an empty root bag.

    A decomposition forest (disconnected graph) is first linked into a tree.
    """
    validate_decomposition(td, g)
    nodes: list[NiceNode] = []

    def add(kind, bag, vertex=None, children=()):
        nodes.append(NiceNode(kind, frozenset(bag), vertex, tuple(children)))
        return len(nodes) - 1

    if not td.bags:
        return NiceTreeDecomposition([NiceNode("base", frozenset())], 0)
    edges = list(td.edges)
    comps = _tree_components(td.bags, edges)
    for a, b in zip(comps, comps[1:]):
        edges.append((a[0], b[0]))
    adj: dict[int, list[int]] = {i: [] for i in td.bags}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    root = min(td.bags)

    def morph(node: int, src: frozenset, dst: frozenset) -> int:
        """Chain of forgets then introduces turning bag src into dst."""
        cur = set(src)
        for v in sorted(src - dst):
            cur.discard(v)
            node = add("forget", cur, v, (node,))
        for v in sorted(dst - src):
            cur.add(v)
            node = add("introduce", cur, v, (node,))
        return node

    # iterative post-order over the raw tree
    parent = {root: None}
    order, stack = [], [root]
    while stack:
        u = stack.pop()
        order.append(u)
        for w in sorted(adj[u]):
            if w not in parent:
                parent[w] = u
                stack.append(w)
    built: dict[int, int] = {}
    for u in reversed(order):
        bag = td.bags[u]
        kids = [w for w in sorted(adj[u]) if parent.get(w) == u]
        if not kids:
            tops = [morph(add("base", ()), frozenset(), bag)]
        else:
            tops = [morph(built[w], td.bags[w], bag) for w in kids]
        while len(tops) > 1:
            nxt = [add("join", bag, None, (tops[i], tops[i + 1])) for i in range(0, len(tops) - 1, 2)]
            if len(tops) % 2:
                nxt.append(tops[-1])
            tops = nxt
        built[u] = tops[0]
    top = morph(built[root], td.bags[root], frozenset())
    ntd = NiceTreeDecomposition(nodes, top)
    check_nice(ntd, g)
    return ntd


def check_nice(ntd: NiceTreeDecomposition, g: GraphSpec) -> None:
    """Verify decomposition axioms and the node-kind shape rules."""
    nodes = ntd.nodes
    if nodes[ntd.root].bag:
        raise InvalidDecomposition("root bag must be empty")
    for nd in nodes:
        kids = [nodes[c] for c in nd.children]
        if nd.kind == "base":
            ok = not kids and not nd.bag
        elif nd.kind == "introduce":
            ok = len(kids) == 1 and nd.vertex in nd.bag and kids[0].bag == nd.bag - {nd.vertex}
        elif nd.kind == "forget":
            ok = len(kids) == 1 and nd.vertex not in nd.bag and kids[0].bag == nd.bag | {nd.vertex}
        elif nd.kind == "join":
            ok = len(kids) == 2 and kids[0].bag == nd.bag == kids[1].bag
        else:
            ok = False
        if not ok:
            raise InvalidDecomposition(f"malformed {nd.kind} node")
    edges = [(t, c) for t, nd in enumerate(nodes) for c in nd.children]
    validate_decomposition(RawDecomposition({i: nd.bag for i, nd in enumerate(nodes)}, edges), g)


def greedy_decomposition(g: GraphSpec) -> RawDecomposition:
    """Min-degree elimination ordering; width is not guaranteed optimal."""
    adj = [set() for _ in range(g.n)]
    for u, v, _ in g.edges:
        if u != v:
            adj[u].add(v)
            adj[v].add(u)
    alive = set(range(g.n))
    order, bags = [], {}
    while alive:
        v = min(alive, key=lambda x: (len(adj[x] & alive), x))
        nb = adj[v] & alive
        bags[v] = frozenset(nb | {v})
        for a in nb:
            adj[a] |= nb - {a}
        alive.discard(v)
        order.append(v)
    pos = {v: i for i, v in enumerate(order)}
    edges = []
    for v in order:
        later = [u for u in bags[v] if u != v]
        if later:
            edges.append((v, min(later, key=lambda u: pos[u])))
    return RawDecomposition(bags, edges)


# ---------------------------------------------------------------- boundary forests

_K_CACHE: dict[int, LinearMatroid] = {}


def complete_graph_matroid(k: int) -> LinearMatroid:
    """Graphic matroid of K_k; pair (i, j), i < j, is the element pair_index(i, j, k)."""
    if k not in _K_CACHE:
        pairs = list(combinations(range(k), 2))
        _K_CACHE[k] = graphic_matroid(GraphSpec(k, [(i, j, 0) for i, j in pairs]))
    return _K_CACHE[k]


def pair_index(i: int, j: int, k: int) -> int:
    if i > j:
        i, j = j, i
    return i * (2 * k - i - 1) // 2 + (j - i - 1)


class _DSU:
    def __init__(self):
        self.parent: dict[int, int] = {}

    def find(self, a: int) -> int:
        p = self.parent
        p.setdefault(a, a)
        while p[a] != a:
            p[a] = p[p[a]]
            a = p[a]
        return a

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[ra] = rb
        return True


def star_forest(groups: Iterable[Iterable[int]], zpos: dict[int, int]) -> int:
    """Bitmask over K[Z] edges of one star per group, centred at the group's least vertex."""
    k = len(zpos)
    mask = 0
    for grp in groups:
        pos = sorted(zpos[v] for v in grp)
        for other in pos[1:]:
            mask |= 1 << pair_index(pos[0], other, k)
    return mask


def _groups(dsu: _DSU, z: Iterable[int]) -> list[list[int]]:
    out: dict[int, list[int]] = {}
    for v in z:
        out.setdefault(dsu.find(v), []).append(v)
    return list(out.values())


def shrink_family(z: frozenset[int], entries: dict[int, int], forest_of, mode: str = "min",
                  seed: int = 0) -> dict[int, int]:
    """Representative subset of partial solutions for class Z.

    ``entries`` maps a partial solution (bitmask) to its weight and
    ``forest_of(entry)`` gives its boundary forest on K[Z].  Each class of
    forests with d edges is cut down with q = |Z| - 1 - d.
    """
    k = len(z)
    best_by_forest: dict[int, tuple[int, int]] = {}
    for e, w in entries.items():
        f = forest_of(e)
        cur = best_by_forest.get(f)
        if cur is None or better(w, cur[0], mode) or (w == cur[0] and e < cur[1]):
            best_by_forest[f] = (w, e)
    if k <= 1:
        if not best_by_forest:
            return {}
        w, e = best_by_forest[0]
        return {e: w}
    m = complete_graph_matroid(k)
    classes: dict[int, list[int]] = {}
    for f in best_by_forest:
        classes.setdefault(f.bit_count(), []).append(f)
    out: dict[int, int] = {}
    for d, forests in classes.items():
        forests.sort()
        fam = WeightedFamily(comb(k, 2), forests,
                             [best_by_forest[f][0] for f in forests])
        res = compute_repset_linear(m, fam, m.rank_k - d, mode, seed)
        for i in res.kept:
            w, e = best_by_forest[forests[i]]
            out[e] = w
    return out


def _invariant_violations(z: frozenset[int], entries: dict[int, int], forest_of) -> int:
    k = len(z)
    counts: dict[int, int] = {}
    for e in entries:
        i = k - forest_of(e).bit_count()
        counts[i] = counts.get(i, 0) + 1
    return sum(1 for i, c in counts.items() if c > comb(k, i))


@dataclass
class DPStats:
    nodes: int = 0
    width: int = 0
    max_family: int = 0
    invariant_checks: int = 0
    invariant_violations: int = 0
    family_sizes: list[int] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {"nodes": self.nodes, "width": self.width, "max_family": self.max_family,
                "invariant_checks": self.invariant_checks,
                "invariant_violations": self.invariant_violations}


# ---------------------------------------------------------------- Steiner Tree

class _SteinerContext:
    def __init__(self, g: GraphSpec):
        self.g = g
        self.terminals = frozenset(g.terminals)
        self.incident: list[list[int]] = [[] for _ in range(g.n)]
        for i, (u, v, _) in enumerate(g.edges):
            if u != v:
                self.incident[u].append(i)
                self.incident[v].append(i)
        self.weight = [w for _, _, w in g.edges]

    def dsu(self, emask: int) -> _DSU | None:
        """Union-find of the edge set, or None if it has a cycle."""
        d = _DSU()
        edges = self.g.edges
        while emask:
            low = emask & -emask
            u, v, _ = edges[low.bit_length() - 1]
            if not d.union(u, v):
                return None
            emask ^= low
        return d

    def touched(self, emask: int) -> set[int]:
        out = set()
        edges = self.g.edges
        while emask:
            low = emask & -emask
            u, v, _ = edges[low.bit_length() - 1]
            out.add(u)
            out.add(v)
            emask ^= low
        return out

    def forest(self, emask: int, z: frozenset[int]) -> int:
        d = self.dsu(emask)
        touched = self.touched(emask)
        zpos = {v: i for i, v in enumerate(sorted(z))}
        return star_forest(_groups(d, [v for v in zpos if v in touched]), zpos)

    def weight_of(self, emask: int) -> int:
        total = 0
        while emask:
            low = emask & -emask
            total += self.weight[low.bit_length() - 1]
            emask ^= low
        return total

    def is_solution(self, emask: int) -> bool:
        if not emask:
            return False
        d = self.dsu(emask)
        if d is None:
            return False
        touched = self.touched(emask)
        if not self.terminals <= touched:
            return False
        return len({d.find(v) for v in touched}) == 1


def steiner_tree(g: GraphSpec, ntd: NiceTreeDecomposition | None = None, shrink: str = "product",
                 seed: int = 0, check_invariants: bool = True, stats: DPStats | None = None
                 ) -> tuple[int, list[int]]:
    """Minimum-weight tree spanning the terminals: (weight, sorted edge indices)."""
    if not g.terminals:
        raise InputError("Steiner Tree needs at least one terminal")
    if len(g.terminals) == 1:
        return 0, []
    if shrink not in ("product", "naive"):
        raise InputError("shrink must be 'product' or 'naive'")
    if ntd is None:
        ntd = make_nice(greedy_decomposition(g), g)
    ctx = _SteinerContext(g)
    stats = stats if stats is not None else DPStats()
    stats.width = ntd.width
    completed: list[tuple[int, int]] = []
    tables: dict[int, dict[frozenset, dict[int, int]]] = {}

    for t in ntd.postorder():
        nd = ntd.nodes[t]
        if nd.kind == "base":
            table = {frozenset(): {0: 0}}
        elif nd.kind == "introduce":
            table = _steiner_introduce(ctx, nd, tables.pop(nd.children[0]))
        elif nd.kind == "forget":
            table = _steiner_forget(ctx, nd, tables.pop(nd.children[0]), shrink, seed, completed)
        else:
            table = _steiner_join(ctx, nd, tables.pop(nd.children[0]), tables.pop(nd.children[1]),
                                  shrink, seed)
        for z, entries in table.items():
            for e in entries:
                assert ctx.dsu(e) is not None, "stored Steiner entry must be a forest"
            if check_invariants:
                stats.invariant_checks += 1
                stats.invariant_violations += _invariant_violations(z, entries, lambda e: ctx.forest(e, z))
        size = sum(len(v) for v in table.values())
        stats.family_sizes.append(size)
        stats.max_family = max(stats.max_family, size)
        stats.nodes += 1
        tables[t] = table
    if not completed:
        raise NoSolution("terminals lie in different components")
    w, e = min(completed)
    return w, [i for i in range(len(g.edges)) if e >> i & 1]


def _steiner_introduce(ctx, nd, child):
    v = nd.vertex
    table = {}
    for z, entries in child.items():
        if v not in ctx.terminals:
            table[z] = dict(entries)
        table[z | {v}] = dict(entries)
    return table


def _steiner_forget(ctx, nd, child, shrink, seed, completed):
    v = nd.vertex
    bag = nd.bag
    table: dict[frozenset, dict[int, int]] = {}
    for zp, entries in child.items():
        if v not in zp:
            if v not in ctx.terminals:
                _merge(table.setdefault(zp, {}), entries, "min")
            continue
        z = zp - {v}
        cands = _forget_candidates(ctx, v, z, zp, entries, shrink, seed)
        keep = {}
        for e, w in cands.items():
            if ctx.is_solution(e):
                completed.append((w, e))
            d = ctx.dsu(e)
            if d is None or v not in ctx.touched(e):
                continue
            if not any(d.find(u) == d.find(v) for u in z if u in ctx.touched(e)):
                continue
            keep[e] = w
        if keep:
            _merge(table.setdefault(z, {}), keep, "min")
    return {z: shrink_family(z, ents, lambda e, z=z: ctx.forest(e, z), "min", seed)
            for z, ents in table.items() if ents and z <= bag}


def _forget_candidates(ctx, v, z, zp, entries, shrink, seed) -> dict[int, int]:
    """Partial solutions E' + Y with Y a set of edges from v into Z (before filtering)."""
    star = [i for i in ctx.incident[v] if (ctx.g.edges[i][0] if ctx.g.edges[i][1] == v else ctx.g.edges[i][1]) in z]
    ys: dict[int, int] = {}
    for r in range(len(star) + 1):
        for combo in combinations(star, r):
            y = sum(1 << i for i in combo)
            ys[y] = ctx.weight_of(y)
    if shrink == "naive" or len(zp) <= 1:
        out: dict[int, int] = {}
        for e, w in entries.items():
            for y, wy in ys.items():
                u = e | y
                if ctx.dsu(u) is None:
                    continue
                if u not in out or w + wy < out[u]:
                    out[u] = w + wy
        return out
    zpos = {u: i for i, u in enumerate(sorted(zp))}
    k = len(zp)
    other = {i: (ctx.g.edges[i][0] if ctx.g.edges[i][1] == v else ctx.g.edges[i][1]) for i in star}
    right = _forest_family(ys, lambda y: _star_edges(y, v, other, zpos, k))
    left = _forest_family(entries, lambda e: ctx.forest(e, zp))
    return _product_pairs(k - 1, left, right, seed)


def _star_edges(y: int, v: int, other: dict[int, int], zpos: dict[int, int], k: int) -> int | None:
    mask = 0
    while y:
        low = y & -y
        bit = 1 << pair_index(zpos[v], zpos[other[low.bit_length() - 1]], k)
        if mask & bit:
            return None  # parallel edges to the same vertex close a cycle
        mask |= bit
        y ^= low
    return mask


def _forest_family(entries: dict[int, int], forest_of):
    """Best entry per boundary forest: (forests, weights, originating entries)."""
    best: dict[int, tuple[int, int]] = {}
    for e, w in entries.items():
        f = forest_of(e)
        if f is None:
            continue
        cur = best.get(f)
        if cur is None or w < cur[0] or (w == cur[0] and e < cur[1]):
            best[f] = (w, e)
    forests = sorted(best)
    return forests, [best[f][0] for f in forests], [best[f][1] for f in forests]


def _product_pairs(rank: int, left, right, seed, mode: str = "min", combine=None) -> dict[int, int]:
    """Representative pairs from the product of two forest families on K_{rank+1}."""
    lf, lw, le = left
    rf, rw, re_ = right
    if not lf or not rf:
        return {}
    m = complete_graph_matroid(rank + 1)
    n = comb(rank + 1, 2)
    table = product_repset_all_sizes(m, WeightedFamily(n, list(lf), list(lw)),
                                     WeightedFamily(n, list(rf), list(rw)), rank, mode,
                                     c=CLASS_SLACK, seed=seed)
    out: dict[int, int] = {}
    for fam in table.values():
        for (i, j), w in zip(fam.tags, fam.weights):
            e = combine(le[i], re_[j]) if combine else le[i] | re_[j]
            if e not in out or better(w, out[e], mode):
                out[e] = w
    return out


def _steiner_join(ctx, nd, left, right, shrink, seed):
    table = {}
    for z in left.keys() & right.keys():
        a, b = left[z], right[z]
        if shrink == "naive" or len(z) <= 1:
            cands = {}
            for e1, w1 in a.items():
                for e2, w2 in b.items():
                    u = e1 | e2
                    if ctx.dsu(u) is None:
                        continue
                    if u not in cands or w1 + w2 < cands[u]:
                        cands[u] = w1 + w2
        else:
            cands = _product_pairs(len(z) - 1, _forest_family(a, lambda e: ctx.forest(e, z)),
                                   _forest_family(b, lambda e: ctx.forest(e, z)), seed)
            for e in cands:
                assert ctx.dsu(e) is not None, "join of acyclic boundary forests must be a forest"
        if cands:
            table[z] = shrink_family(z, cands, lambda e, z=z: ctx.forest(e, z), "min", seed)
    return table


def _merge(dst: dict[int, int], src: dict[int, int], mode: str) -> None:
    for e, w in src.items():
        if e not in dst or better(w, dst[e], mode):
            dst[e] = w


# ---------------------------------------------------------------- Feedback Vertex Set

class _FVSContext:
    def __init__(self, g: GraphSpec):
        self.g = g
        self.adj: list[list[int]] = [[] for _ in range(g.n)]
        for u, v, _ in g.edges:
            self.adj[u].append(v)
            if u != v:
                self.adj[v].append(u)
        self.w = [g.weight_of_vertex(v) for v in range(g.n)]

    def dsu(self, umask: int, skip_inside: frozenset[int] = frozenset()) -> _DSU | None:
        """Union-find of G[U] (minus edges with both ends in skip_inside); None on a cycle."""
        d = _DSU()
        for u, v, _ in self.g.edges:
            if umask >> u & 1 and umask >> v & 1:
                if u in skip_inside and v in skip_inside:
                    continue
                if not d.union(u, v):
                    return None
        return d

    def forest(self, umask: int, z: frozenset[int], skip_inside: frozenset[int] = frozenset()) -> int:
        d = self.dsu(umask, skip_inside)
        zpos = {v: i for i, v in enumerate(sorted(z))}
        return star_forest(_groups(d, zpos), zpos)

    def weight_of(self, umask: int) -> int:
        return sum(self.w[v] for v in range(self.g.n) if umask >> v & 1)


def feedback_vertex_set(g: GraphSpec, ntd: NiceTreeDecomposition | None = None, shrink: str = "product",
                        seed: int = 0, check_invariants: bool = True, stats: DPStats | None = None
                        ) -> tuple[int, list[int]]:
    """Minimum-weight vertex set meeting every cycle: (weight, sorted vertices).

    Computed as the complement of a maximum-weight induced forest.
    """
    if shrink not in ("product", "naive"):
        raise InputError("shrink must be 'product' or 'naive'")
    if g.n == 0:
        return 0, []
    if ntd is None:
        ntd = make_nice(greedy_decomposition(g), g)
    ctx = _FVSContext(g)
    stats = stats if stats is not None else DPStats()
    stats.width = ntd.width
    tables: dict[int, dict[frozenset, dict[int, int]]] = {}

    def shrink_z(z, ents):
        return shrink_family(z, ents, lambda u: ctx.forest(u, z), "max", seed)

    for t in ntd.postorder():
        nd = ntd.nodes[t]
        if nd.kind == "base":
            table = {frozenset(): {0: 0}}
        elif nd.kind == "introduce":
            v = nd.vertex
            table = {}
            for z, entries in tables.pop(nd.children[0]).items():
                table[z] = dict(entries)
                grown = {}
                for u, w in entries.items():
                    nu = u | 1 << v
                    if ctx.dsu(nu) is not None:
                        grown[nu] = w + ctx.w[v]
                if grown:
                    table[z | {v}] = shrink_z(z | {v}, grown)
        elif nd.kind == "forget":
            v = nd.vertex
            table = {}
            for zp, entries in tables.pop(nd.children[0]).items():
                _merge(table.setdefault(zp - {v}, {}), entries, "max")
            table = {z: shrink_z(z, ents) for z, ents in table.items()}
        else:
            left, right = tables.pop(nd.children[0]), tables.pop(nd.children[1])
            table = {}
            for z in left.keys() & right.keys():
                cands = _fvs_join(ctx, z, left[z], right[z], shrink, seed)
                if cands:
                    table[z] = shrink_z(z, cands)
        for z, entries in table.items():
            for u in entries:
                assert ctx.dsu(u) is not None, "stored FVS entry must induce a forest"
            if check_invariants:
                stats.invariant_checks += 1
                stats.invariant_violations += _invariant_violations(z, entries, lambda u: ctx.forest(u, z))
        size = sum(len(v) for v in table.values())
        stats.family_sizes.append(size)
        stats.max_family = max(stats.max_family, size)
        stats.nodes += 1
        tables[t] = table
    final = tables[ntd.root].get(frozenset(), {})
    best_u = max(final.items(), key=lambda item: (item[1], -item[0]))[0]
    removed = [v for v in range(g.n) if not best_u >> v & 1]
    return sum(ctx.w[v] for v in removed), removed


def _fvs_join(ctx, z, a, b, shrink, seed) -> dict[int, int]:
    zmask = sum(1 << v for v in z)
    wz = ctx.weight_of(zmask)
    if shrink == "naive" or len(z) <= 1:
        out = {}
        for u1, w1 in a.items():
            for u2, w2 in b.items():
                u = u1 | u2
                if ctx.dsu(u) is None:
                    continue
                w = w1 + w2 - wz
                if u not in out or w > out[u]:
                    out[u] = w
        return out
    # right side: forests of G[U2] without the edges inside Z, weighted by w(U2 - Z)
    right_entries = {u: w - wz for u, w in b.items()}
    right_forest = lambda u: ctx.forest(u, z, skip_inside=z)
    right_entries = shrink_family(z, right_entries, right_forest, "max", seed)
    out = _product_pairs(len(z) - 1,
                         _forest_family_max(a, lambda u: ctx.forest(u, z)),
                         _forest_family_max(right_entries, right_forest), seed, "max")
    for u in out:
        assert ctx.dsu(u) is not None, "join of acyclic boundary forests must induce a forest"
    return out


def _forest_family_max(entries, forest_of):
    best: dict[int, tuple[int, int]] = {}
    for e, w in entries.items():
        f = forest_of(e)
        cur = best.get(f)
        if cur is None or w > cur[0] or (w == cur[0] and e < cur[1]):
            best[f] = (w, e)
    forests = sorted(best)
    return forests, [best[f][0] for f in forests], [best[f][1] for f in forests]


# ---------------------------------------------------------------- file formats

def parse_graph(text: str) -> GraphSpec:
    """``p n m`` header, ``e u v w`` edges, ``t v`` terminals, ``w v x`` vertex weights (1-based)."""
    n = None
    edges, terms, vw = [], [], {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        tok = raw.split("#", 1)[0].split()
        if not tok or tok[0] == "c":
            continue
        try:
            if tok[0] == "p":
                n = int(tok[1])
            elif tok[0] == "e":
                w = int(tok[3]) if len(tok) > 3 else 1
                edges.append((int(tok[1]) - 1, int(tok[2]) - 1, w))
            elif tok[0] == "t":
                terms.append(int(tok[1]) - 1)
            elif tok[0] == "w":
                vw[int(tok[1]) - 1] = int(tok[2])
            else:
                raise InputError(f"line {lineno}: unknown directive {tok[0]!r}")
        except (IndexError, ValueError):
            raise InputError(f"line {lineno}: malformed line {raw.strip()!r}") from None
    if n is None:
        raise InputError("graph file lacks a 'p <n> <m>' header")
    weights = None
    if vw:
        weights = [1] * n
        for v, x in vw.items():
            if not 0 <= v < n:
                raise InputError(f"vertex weight for out-of-range vertex {v + 1}")
            weights[v] = x
    return GraphSpec(n, edges, terms, weights)


def format_graph(g: GraphSpec) -> str:
    lines = [f"p {g.n} {len(g.edges)}"]
    lines += [f"e {u + 1} {v + 1} {w}" for u, v, w in g.edges]
    lines += [f"t {t + 1}" for t in g.terminals]
    if g.vertex_weights is not None:
        lines += [f"w {v + 1} {x}" for v, x in enumerate(g.vertex_weights)]
    return "\n".join(lines) + "\n"


def parse_td(text: str) -> RawDecomposition:
    """PACE ``.td`` format: ``s td <bags> <width+1> <n>``, ``b id v...``, then tree edges."""
    bags: dict[int, frozenset[int]] = {}
    edges = []
    header = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        tok = raw.split()
        if not tok or tok[0] == "c":
            continue
        try:
            if tok[0] == "s":
                header = (int(tok[2]), int(tok[3]), int(tok[4]))
            elif tok[0] == "b":
                bags[int(tok[1])] = frozenset(int(v) - 1 for v in tok[2:])
            else:
                edges.append((int(tok[0]), int(tok[1])))
        except (IndexError, ValueError):
            raise InputError(f"line {lineno}: malformed line {raw.strip()!r}") from None
    if header is None:
        raise InputError("decomposition file lacks an 's td' header")
    if header[0] != len(bags):
        raise InputError(f"header announces {header[0]} bags, found {len(bags)}")
    return RawDecomposition(bags, edges)


def format_td(td: RawDecomposition, n: int) -> str:
    ids = sorted(td.bags)
    renum = {b: i + 1 for i, b in enumerate(ids)}
    lines = [f"s td {len(ids)} {td.width + 1} {n}"]
    for b in ids:
        lines.append(" ".join(["b", str(renum[b])] + [str(v + 1) for v in sorted(td.bags[b])]))
    lines += [f"{renum[a]} {renum[b]}" for a, b in td.edges]
    return "\n".join(lines) + "\n"
