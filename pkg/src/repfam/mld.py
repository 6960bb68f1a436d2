"""Weighted multilinear monomial detection in arithmetic circuits.

Each gate keeps, per degree j <= k, a family of j-sets of variables that
occur as multilinear monomials of the polynomial computed at that gate.
Sums merge the children's families, products combine them pairwise, and
every family is cut back to a representative one so that sets able to
complete a degree-k monomial higher up are never lost.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from graphlib import CycleError, TopologicalSorter
from typing import Sequence

from .errors import CyclicCircuit, InputError, KTooLarge, NoOutput, NegativeConstant, RankTooSmall
from .matroid import GraphSpec, LinearMatroid, graphic_matroid, uniform_matroid, elements_of
from .ffmat import FieldMatrix
from .product import ProductSpec, naive_product, product_repset_all_sizes, trim_product_uniform
from .repset import (WeightedFamily, add_weights, check_mode, compute_repset_linear, truncate,
                     union_families)
from .sepcol import DEFAULT_DEPTH, compute_repset_uniform

MAX_K = 8
MAX_VARIABLES = 64


@dataclass(frozen=True)
class Gate:
    kind: str  # var | const | add | mul
    inputs: tuple[str, ...] = ()
    value: int | None = None


@dataclass
class Circuit:
    gates: dict[str, Gate]
    variables: tuple[str, ...]
    weights: tuple[int, ...]
    output: str | None

    def var_index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.variables)}

    def order(self) -> list[str]:
        """Gates reachable from the output, children first."""
        if self.output is None:
            raise NoOutput("circuit has no output gate")
        if self.output not in self.gates:
            raise InputError(f"output gate {self.output!r} is undefined")
        deps: dict[str, tuple[str, ...]] = {}
        stack = [self.output]
        while stack:
            g = stack.pop()
            if g in deps:
                continue
            if g not in self.gates:
                raise InputError(f"gate {g!r} is undefined")
            deps[g] = self.gates[g].inputs
            stack.extend(self.gates[g].inputs)
        try:
            return list(TopologicalSorter(deps).static_order())
        except CycleError as exc:
            raise CyclicCircuit(f"cycle through gates {exc.args[1]}") from None

    def evaluate(self, point: Sequence[int], modulus: int) -> int:
        vals: dict[str, int] = {}
        idx = self.var_index()
        for g in self.order():
            gate = self.gates[g]
            if gate.kind == "var":
                vals[g] = point[idx[g]] % modulus
            elif gate.kind == "const":
                vals[g] = gate.value % modulus
            elif gate.kind == "add":
                vals[g] = sum(vals[i] for i in gate.inputs) % modulus
            else:
                acc = 1
                for i in gate.inputs:
                    acc = acc * vals[i] % modulus
                vals[g] = acc
        return vals[self.output]


def parse_circuit(text: str) -> Circuit:
    """Read the one-directive-per-line circuit format (``#`` starts a comment)."""
    gates: dict[str, Gate] = {}
    variables: list[str] = []
    weights: list[int] = []
    output = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        head = tok[0]
        try:
            if head == "var":
                name = tok[1]
                w = 0
                for extra in tok[2:]:
                    m = re.fullmatch(r"weight=(\d+)", extra)
                    if not m:
                        raise InputError(f"bad variable attribute {extra!r}")
                    w = int(m.group(1))
                gate = Gate("var")
                variables.append(name)
                weights.append(w)
            elif head == "const":
                name = tok[1]
                value = int(tok[2])
                if value <= 0:
                    raise NegativeConstant(f"constants must be positive integers, got {value}")
                gate = Gate("const", (), value)
            elif head in ("add", "mul"):
                name = tok[1]
                if len(tok) < 3:
                    raise InputError(f"{head} gate needs inputs")
                gate = Gate(head, tuple(tok[2:]))
            elif head == "output":
                output = tok[1]
                continue
            else:
                raise InputError(f"unknown directive {head!r}")
        except (IndexError, ValueError) as exc:
            if isinstance(exc, InputError):
                raise type(exc)(f"line {lineno}: {exc}") from None
            raise InputError(f"line {lineno}: malformed directive {line!r}") from None
        if name in gates:
            raise InputError(f"line {lineno}: gate {name!r} defined twice")
        gates[name] = gate
    return Circuit(gates, tuple(variables), tuple(weights), output)


def format_circuit(c: Circuit) -> str:
    lines = []
    idx = c.var_index()
    for name, g in c.gates.items():
        if g.kind == "var":
            lines.append(f"var {name} weight={c.weights[idx[name]]}")
        elif g.kind == "const":
            lines.append(f"const {name} {g.value}")
        else:
            lines.append(f"{g.kind} {name} {' '.join(g.inputs)}")
    if c.output is not None:
        lines.append(f"output {c.output}")
    return "\n".join(lines) + "\n"


def normalize_circuit(raw: Circuit) -> Circuit:
    """Equivalent circuit whose gates have fan-in at most two."""
    raw.order()  # raises on missing output or cycles
    for g in raw.gates.values():
        if g.kind == "const" and (g.value is None or g.value <= 0):
            raise NegativeConstant("constants must be positive integers")
    gates: dict[str, Gate] = {}
    fresh = 0
    for name, g in raw.gates.items():
        if g.kind in ("add", "mul") and len(g.inputs) > 2:
            level = list(g.inputs)
            while len(level) > 2:
                nxt = []
                for i in range(0, len(level) - 1, 2):
                    while f"{name}#{fresh}" in raw.gates:
                        fresh += 1
                    aux = f"{name}#{fresh}"
                    fresh += 1
                    gates[aux] = Gate(g.kind, (level[i], level[i + 1]))
                    nxt.append(aux)
                if len(level) % 2:
                    nxt.append(level[-1])
                level = nxt
            gates[name] = Gate(g.kind, tuple(level))
        else:
            gates[name] = g
    return Circuit(gates, raw.variables, raw.weights, raw.output)


# ---------------------------------------------------------------- dynamic program

def _check_k(c: Circuit, k: int) -> None:
    if k < 0:
        raise InputError("k must be non-negative")
    if k > MAX_K:
        raise KTooLarge(f"k = {k} above the supported ceiling {MAX_K}")
    if len(c.variables) > MAX_VARIABLES:
        raise InputError(f"at most {MAX_VARIABLES} variables supported")


def _merge_by_size(parts: list[WeightedFamily], n: int, mode: str) -> dict[int, WeightedFamily]:
    if not parts:
        return {}
    merged = union_families(parts, mode)
    return merged.by_size()


def _leaf(c: Circuit, name: str, k: int, n: int, keep=None) -> dict[int, WeightedFamily]:
    g = c.gates[name]
    if g.kind == "const":
        return {0: WeightedFamily(n, [0], [0])}
    i = c.var_index()[name]
    if k < 1 or (keep is not None and not keep(1 << i)):
        return {}
    return {1: WeightedFamily(n, [1 << i], [c.weights[i]])}


def _answer(c: Circuit, table: dict[int, WeightedFamily], k: int, mode: str):
    fam = table.get(k)
    if fam is None or not len(fam):
        return None
    s, w, _ = fam.best(mode)
    return [c.variables[i] for i in elements_of(s)], w


def solve_kwmld(c: Circuit, k: int, mode: str = "min", seed: int = 0, depth: int = DEFAULT_DEPTH,
                stats: dict | None = None, product: str = "fast"):
    """Lightest degree-k multilinear monomial of the circuit, or None.

    Returns (variable names, weight).  ``product="naive"`` materializes each
    product before trimming instead of using the separating-collection product.
    """
    check_mode(mode)
    if product not in ("fast", "naive"):
        raise InputError("product must be 'fast' or 'naive'")
    c = normalize_circuit(c)
    _check_k(c, k)
    n = len(c.variables)
    tables: dict[str, dict[int, WeightedFamily]] = {}
    sizes: dict[str, int] = {}
    xs: list[str] = []
    for name in c.order():
        g = c.gates[name]
        if g.kind in ("var", "const"):
            table = _leaf(c, name, k, n)
        elif g.kind == "add":
            parts = [f for i in g.inputs for f in tables[i].values()]
            table = {}
            for p, fam in _merge_by_size(parts, n, mode).items():
                table[p] = compute_repset_uniform(fam, k - p, mode, seed=seed, depth=depth).family(fam)
        else:
            table = tables[g.inputs[0]]
            for other in g.inputs[1:]:
                right = tables[other]
                parts = []
                for p1, f1 in table.items():
                    for p2, f2 in right.items():
                        if p1 + p2 > k:
                            continue
                        pstats: dict = {}
                        if product == "naive":
                            prod = naive_product(f1, f2, mode)
                        else:
                            prod = trim_product_uniform(ProductSpec(f1, f2, k, mode), seed=seed,
                                                        depth=depth, stats=pstats)
                        if "x1" in pstats:
                            xs.append(f"{pstats['x1']},{pstats['x2']}")
                        prod.tags = None
                        parts.append(prod)
                table = {}
                for p, fam in _merge_by_size(parts, n, mode).items():
                    table[p] = compute_repset_uniform(fam, k - p, mode, seed=seed, depth=depth).family(fam)
        tables[name] = table
        sizes[name] = sum(len(f) for f in table.values())
    if stats is not None:
        stats["family_sizes"] = sizes
        stats["x_values"] = sorted(set(xs))
    return _answer(c, tables[c.output], k, mode)


def solve_kwmmld(c: Circuit, m: LinearMatroid, k: int, mode: str = "min", seed: int = 0,
                 stats: dict | None = None):
    """As solve_kwmld, but the monomial's variable set must be independent in m.

    Matroid labels are variable indices (declaration order).
    """
    check_mode(mode)
    c = normalize_circuit(c)
    _check_k(c, k)
    n = len(c.variables)
    if m.rank_k < k:
        raise RankTooSmall(f"matroid rank {m.rank_k} below k = {k}")
    mk = truncate(m, k, seed) if m.rank_k > k else m
    tables: dict[str, dict[int, WeightedFamily]] = {}
    sizes: dict[str, int] = {}

    def trim(fams: dict[int, WeightedFamily]) -> dict[int, WeightedFamily]:
        return {p: compute_repset_linear(mk, f, k - p, mode, seed).family(f) for p, f in fams.items()}

    for name in c.order():
        g = c.gates[name]
        if g.kind in ("var", "const"):
            table = _leaf(c, name, k, n, keep=mk.independent)
        elif g.kind == "add":
            table = trim(_merge_by_size([f for i in g.inputs for f in tables[i].values()], n, mode))
        else:
            table = tables[g.inputs[0]]
            for other in g.inputs[1:]:
                right = tables[other]
                left_all = union_families(list(table.values()), mode) if table else WeightedFamily(n)
                right_all = union_families(list(right.values()), mode) if right else WeightedFamily(n)
                left_all.tags = right_all.tags = None
                grid = product_repset_all_sizes(mk, left_all, right_all, k, mode, seed=seed)
                parts = []
                for fam in grid.values():
                    fam.tags = None
                    parts.append(fam)
                table = trim(_merge_by_size(parts, n, mode))
        tables[name] = table
        sizes[name] = sum(len(f) for f in table.values())
    if stats is not None:
        stats["family_sizes"] = sizes
    return _answer(c, tables[c.output], k, mode)


def parse_matroid(text: str, variables: Sequence[str]) -> LinearMatroid:
    """Matroid over circuit variables.

    Accepted forms::

        uniform <k> [modulus]
        field <p>            followed by   row <one entry per variable>
        graphic <vertices>   followed by   edge <variable> <u> <v>
    """
    lines = [ln.split("#", 1)[0].split() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise InputError("empty matroid file")
    nv = len(variables)
    head = lines[0]
    try:
        if head[0] == "uniform":
            mod = int(head[2]) if len(head) > 2 else None
            return uniform_matroid(nv, int(head[1]), mod)
        if head[0] == "field":
            p = int(head[1])
            rows = [[int(v) for v in ln[1:]] for ln in lines[1:] if ln[0] == "row"]
            if any(len(r) != nv for r in rows):
                raise InputError("each row needs one entry per variable")
            return LinearMatroid.from_matrix(FieldMatrix.from_rows(rows, p, cols=nv))
        if head[0] == "graphic":
            nverts = int(head[1])
            idx = {v: i for i, v in enumerate(variables)}
            ends: dict[int, tuple[int, int]] = {}
            for ln in lines[1:]:
                if ln[0] != "edge":
                    raise InputError(f"unexpected line {' '.join(ln)!r}")
                ends[idx[ln[1]]] = (int(ln[2]) - 1, int(ln[3]) - 1)
            if len(ends) != nv:
                raise InputError("every variable needs an edge")
            g = GraphSpec(nverts, [(*ends[i], 0) for i in range(nv)])
            return graphic_matroid(g)
    except (IndexError, KeyError, ValueError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"malformed matroid file: {exc}") from None
    raise InputError(f"unknown matroid kind {head[0]!r}")
