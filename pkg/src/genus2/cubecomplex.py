"""The cube complex CPT₂ of marked pants decompositions.

A marked vertex is an ordered pants decomposition X = (δ₁, δ₂, δ₃) of
non-separating meridians with a dual system Δ = (β₁, β₂, β₃): βᵢ meets δᵢ
twice and misses the other two.  Twist edges apply T_{δᵢ}^{±1} to Δ; the
switch edge at i exchanges δᵢ and βᵢ and cleans up the remaining duals.

Cleanup picks, among all duals ν of δⱼ in the switched decomposition (one
T_{δⱼ}-orbit), the one minimizing (i(ν, βⱼ), i(ν, δᵢ), i(ν, β_l)).  Every
entry is preserved by twisting about δⱼ together with βⱼ, and about the
untouched δ_l, so switches commute with twists in other slots.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence

import networkx as nx

from .annular import round_half_up, winding
from .pantsgraph import (
    MOVES,
    ROUND_DUALS,
    PantsVertex,
    base_vertex,
    dual_system,
    geodesic,
    is_vertex,
    orbit_argmin,
    straighten,
)
from .surface import MulticurveClass, curve, dehn_twist, intersection_number

DEFAULT_MAX_VERTICES = 5000


class CubeComplexError(ValueError):
    def __init__(self, code: str, message: str = "", witness=None):
        super().__init__(f"{code}: {message}" if message else code)
        self.code = code
        self.witness = witness


# ---------------------------------------------------------------- duals


def is_dual(X: Sequence[MulticurveClass], i: int, b: MulticurveClass) -> bool:
    return (b.is_curve and b.kind == "nonsep" and intersection_number(b, X[i]) == 2
            and all(intersection_number(b, X[j]) == 0 for j in range(3) if j != i))


def make_dual(X: Sequence[MulticurveClass], i: int, seed: int = 0) -> MulticurveClass:
    """A curve dual to X[i].  Different seeds shuffle the straightening
    moves, so outputs may differ by powers of T_{X[i]}."""
    X = list(X)
    if seed:
        moves = list(MOVES)
        random.Random(seed).shuffle(moves)
        st = straighten(X, moves=moves)
    else:
        st = straighten(X)
    b = curve(st.pull_back(ROUND_DUALS[st.target][st.slots[i]]))
    if not is_dual(X, i, b):
        raise CubeComplexError("NOT_A_DUAL", f"slot {i}")
    return b


@lru_cache(maxsize=4096)
def _duals_of(X: tuple) -> tuple:
    return dual_system(list(X))


def cleanup(X: Sequence[MulticurveClass], D: Sequence[MulticurveClass], i: int, j: int) -> MulticurveClass:
    """The dual of δⱼ after switching slot i of (X, Δ).

    X, D are the marked vertex before the switch; j ≠ i.
    """
    if i == j or not is_dual(X, j, D[j]):
        raise CubeComplexError("NOT_A_DUAL", f"slot {j}")
    l = 3 - i - j
    Xn = list(X)
    Xn[i] = D[i]
    if is_dual(Xn, j, D[j]):
        seed = D[j]
    else:
        seed = _duals_of(tuple(Xn))[j]
    _, c = orbit_argmin(Xn[j], seed, lambda nu: (intersection_number(nu, D[j]),
                                                 intersection_number(nu, X[i]),
                                                 intersection_number(nu, D[l])))
    if not is_dual(Xn, j, c):
        raise CubeComplexError("NOT_A_DUAL", f"cleanup slot {j}")
    return c


# ------------------------------------------------------------- vertices


@dataclass(frozen=True)
class DualSystem:
    curves: tuple[MulticurveClass, MulticurveClass, MulticurveClass]

    def check(self, X: Sequence[MulticurveClass]) -> bool:
        return all(is_dual(X, i, b) for i, b in enumerate(self.curves))


@dataclass(frozen=True)
class MarkedVertex:
    X: tuple[MulticurveClass, MulticurveClass, MulticurveClass]
    D: tuple[MulticurveClass, MulticurveClass, MulticurveClass]

    @property
    def pants(self) -> PantsVertex:
        return PantsVertex.of(self.X)

    def validate(self) -> bool:
        return is_vertex(self.X) and DualSystem(self.D).check(self.X) and fills(self.X, self.D)

    def curves(self) -> tuple[MulticurveClass, ...]:
        return self.X + self.D

    def to_json(self) -> str:
        return json.dumps({"X": [list(c.edges) for c in self.X], "D": [list(c.edges) for c in self.D]})

    def __repr__(self) -> str:
        return "MarkedVertex(" + ", ".join(str(c.word) for c in self.X) + " | " + \
            ", ".join(str(c.word) for c in self.D) + ")"


def fills(X: Sequence[MulticurveClass], D: Sequence[MulticurveClass]) -> bool:
    """Does X ∪ Δ cut Σ into disks?

    A region that is not a disk contains an essential curve missing X ∪ Δ.
    Missing the pants decomposition X forces that curve to be some δₖ,
    which meets βₖ.  So filling holds iff no δₖ misses all of Δ.
    """
    return all(any(intersection_number(d, b) for b in D) for d in X)


def base_marked_vertex() -> MarkedVertex:
    X = base_vertex().curves
    return MarkedVertex(X, tuple(_duals_of(X)))


def twist(v: MarkedVertex, i: int, sign: int) -> MarkedVertex:
    d = v.X[i]
    return MarkedVertex(v.X, tuple(dehn_twist(d, sign, b) for b in v.D))


def switch(v: MarkedVertex, i: int) -> MarkedVertex:
    X, D = list(v.X), list(v.D)
    newD = [cleanup(X, D, i, j) if j != i else X[i] for j in range(3)]
    X[i] = D[i]
    return MarkedVertex(tuple(X), tuple(newD))


# ---------------------------------------------------------------- moves


@dataclass(frozen=True)
class Move:
    kind: str  # "T" or "S"
    slot: int
    sign: int = 0

    def inverse(self) -> "Move":
        return Move(self.kind, self.slot, -self.sign)

    def __str__(self) -> str:
        if self.kind == "S":
            return f"S{self.slot + 1}"
        return f"T{self.slot + 1}{'+' if self.sign > 0 else '-'}"


def Twist(i: int, sign: int) -> Move:
    return Move("T", i, sign)


def Switch(i: int) -> Move:
    return Move("S", i)


ALL_MOVES = tuple([Twist(i, s) for i in range(3) for s in (1, -1)] + [Switch(i) for i in range(3)])


def apply_moves(v: MarkedVertex, word: Iterable[Move]) -> MarkedVertex:
    for m in word:
        v = _step(v, m)
    return v


@lru_cache(maxsize=50_000)
def _step(v: MarkedVertex, m: Move) -> MarkedVertex:
    return twist(v, m.slot, m.sign) if m.kind == "T" else switch(v, m.slot)


def neighbors(v: MarkedVertex) -> list[tuple[Move, MarkedVertex]]:
    return [(m, _step(v, m)) for m in ALL_MOVES]


def normalize(word: Sequence[Move]) -> list[Move]:
    """Normal form: switches cancel in pairs, twists move left past
    switches of other slots, runs of twists are sorted by slot and cancel."""
    w = list(word)
    changed = True
    while changed:
        changed = False
        k = 0
        while k < len(w) - 1:
            a, b = w[k], w[k + 1]
            cancels = a == b.inverse() if a.kind == "T" else b == a
            if cancels:
                del w[k:k + 2]
                changed = True
                k = max(k - 1, 0)
                continue
            swap = (a.kind == "S" and b.kind == "T" and a.slot != b.slot) or \
                   (a.kind == "T" and b.kind == "T" and a.slot > b.slot)
            if swap:
                w[k], w[k + 1] = b, a
                changed = True
            k += 1
    return w


def words_agree(v: MarkedVertex, w1: Sequence[Move], w2: Sequence[Move]) -> bool:
    return apply_moves(v, w1) == apply_moves(v, w2)


# ----------------------------------------------------------------- balls


def ball(v: MarkedVertex | None = None, radius: int = 1, max_vertices: int = DEFAULT_MAX_VERTICES,
         moves: Sequence[Move] = ALL_MOVES) -> nx.Graph:
    """All marked vertices within `radius` moves of v (moves from `moves`)."""
    v = v or base_marked_vertex()
    depth = {v: 0}
    order = [v]
    edges = []
    frontier = [v]
    for d in range(1, radius + 1):
        nxt = []
        for u in frontier:
            for m in moves:
                y = _step(u, m)
                edges.append((u, y, m))
                if y not in depth:
                    depth[y] = d
                    order.append(y)
                    nxt.append(y)
                    if len(depth) > max_vertices:
                        raise CubeComplexError("CAP_EXCEEDED", f"more than {max_vertices} vertices")
        frontier = nxt
    index = {u: k for k, u in enumerate(order)}
    g = nx.Graph(root=0, radius=radius)
    for u, k in index.items():
        g.add_node(k, vertex=u, depth=depth[u])
    for u, y, m in edges:
        g.add_edge(index[u], index[y], kind=m.kind, slot=m.slot)
    return g


def _edge_type(g: nx.Graph, a: int, b: int) -> tuple[str, int]:
    e = g.edges[a, b]
    return e["kind"], e["slot"]


def square_pattern_ok(g: nx.Graph, cycle: Sequence[int]) -> bool:
    """Only twists, or exactly two non-adjacent switch edges."""
    types = [_edge_type(g, cycle[k], cycle[(k + 1) % 4]) for k in range(4)]
    kinds = [t[0] for t in types]
    if kinds == ["T"] * 4:
        return True
    return kinds in (["S", "T", "S", "T"], ["T", "S", "T", "S"])


def is_glued_square(g: nx.Graph, cycle: Sequence[int]) -> bool:
    """A 4-cycle is glued if opposite edges carry the same slot and kind and
    the two slots differ (commuting moves in distinct slots)."""
    types = [_edge_type(g, cycle[k], cycle[(k + 1) % 4]) for k in range(4)]
    return types[0] == types[2] and types[1] == types[3] and types[0][1] != types[1][1] \
        and not (types[0][0] == "S" and types[1][0] == "S")


def four_cycles(g: nx.Graph) -> list[tuple[int, int, int, int]]:
    """Every induced-or-not 4-cycle, listed once."""
    out = set()
    for a in g:
        for b, c in combinations(sorted(g[a]), 2):
            for d in set(g[b]) & set(g[c]):
                if d == a:
                    continue
                cyc = (a, b, d, c)
                k = cyc.index(min(cyc))
                cyc = cyc[k:] + cyc[:k]
                if cyc[1] > cyc[3]:
                    cyc = (cyc[0], cyc[3], cyc[2], cyc[1])
                out.add(cyc)
    return sorted(out)


# ------------------------------------------------------------------ links


@dataclass(frozen=True)
class FlagResult:
    flag: bool
    witness: tuple | None = None


def flag_witness(link: nx.Graph, filled: set[frozenset]) -> FlagResult:
    """A link is flag when every triangle of its 1-skeleton is filled."""
    for a, b, c in sorted(t for t in nx.enumerate_all_cliques(link) if len(t) == 3):
        if frozenset((a, b, c)) not in filled:
            return FlagResult(False, (a, b, c))
    return FlagResult(True)


def link(v: MarkedVertex) -> tuple[nx.Graph, set[frozenset]]:
    """The link of v: vertices are moves at v, edges the squares at v, and
    filled triangles the cubes at v, all found from the moves themselves."""
    ends = {m: _step(v, m) for m in ALL_MOVES}
    second = {m: {y for _, y in neighbors(ends[m])} - {v} for m in ALL_MOVES}
    L = nx.Graph()
    L.add_nodes_from(str(m) for m in ALL_MOVES)
    corner = {}
    for a, b in combinations(ALL_MOVES, 2):
        if ends[a] == ends[b]:
            continue
        common = second[a] & second[b]
        if common:
            L.add_edge(str(a), str(b))
            corner[frozenset((a, b))] = common
    filled = set()
    for t in nx.enumerate_all_cliques(L):
        if len(t) != 3:
            continue
        ms = [next(m for m in ALL_MOVES if str(m) == s) for s in t]
        for x in corner[frozenset(ms[:2])]:
            for y in corner[frozenset(ms[1:])]:
                for z in corner[frozenset((ms[0], ms[2]))]:
                    if {x, y, z} & {v}:
                        continue
                    far = {u for _, u in neighbors(x)} & {u for _, u in neighbors(y)} & {u for _, u in neighbors(z)}
                    if far - {ends[m] for m in ms}:
                        filled.add(frozenset(t))
    return L, filled


def link_is_flag(v: MarkedVertex) -> FlagResult:
    return flag_witness(*link(v))


# ------------------------------------------------------------- distances


def threshold(x: int, C: int) -> int:
    """[x]_C: x when x ≥ C, else 0."""
    return x if x >= C else 0


def projection_diameter(alpha: MulticurveClass, curves: Iterable[MulticurveClass]) -> int | None:
    """diam π_α of a family: spread of the windings of its members about α."""
    hits = sorted({c for c in curves if intersection_number(alpha, c)}, key=lambda c: c.edges)
    if not hits:
        return None
    ws = [winding(alpha, hits[0], c) for c in hits]
    return round_half_up(max(ws) - min(ws))


@dataclass(frozen=True)
class DistanceEstimate:
    lower: int
    upper: int | None
    formula: int
    pants_distance: int
    annular: dict


def annular_terms(v1: MarkedVertex, v2: MarkedVertex) -> dict:
    """d_α(X∪Δ_X, Y∪Δ_Y) for α on the CP₂ geodesic and in both vertices."""
    path = geodesic(v1.pants, v2.pants)
    alphas = {c for X in path for c in X.curves} | set(v1.X) | set(v2.X)
    out = {}
    for alpha in sorted(alphas, key=lambda c: c.edges):
        d = projection_diameter(alpha, v1.curves() + v2.curves())
        if d is not None:
            out[alpha] = d
    return out


def formula_value(v1: MarkedVertex, v2: MarkedVertex, C: int, terms: dict | None = None) -> int:
    terms = annular_terms(v1, v2) if terms is None else terms
    dp = len(geodesic(v1.pants, v2.pants)) - 1
    return dp + sum(threshold(d, C) for d in terms.values())


def search_distance(v1: MarkedVertex, v2: MarkedVertex, limit: int) -> int | None:
    """Exact move distance by bidirectional search, or None beyond limit."""
    if v1 == v2:
        return 0
    left, right = {v1: 0}, {v2: 0}
    fl, fr = [v1], [v2]
    for step in range(1, limit + 1):
        grow_left = len(fl) <= len(fr)
        seen, other, front = (left, right, fl) if grow_left else (right, left, fr)
        nxt = []
        for u in front:
            for _, y in neighbors(u):
                if y in other:
                    return seen[u] + 1 + other[y]
                if y not in seen:
                    seen[y] = seen[u] + 1
                    nxt.append(y)
        if grow_left:
            fl = nxt
        else:
            fr = nxt
        if not nxt:
            return None
    return None


def ball_depths(v: MarkedVertex, radius: int, max_vertices: int = 20000) -> "BallDepths":
    """Exact distances from v to everything within radius, for reuse."""
    g = ball(v, radius, max_vertices)
    return BallDepths(v, radius, {g.nodes[n]["vertex"]: g.nodes[n]["depth"] for n in g})


@dataclass(frozen=True)
class BallDepths:
    center: MarkedVertex
    radius: int
    depth: dict

    def distance(self, v: MarkedVertex) -> int | None:
        return self.depth.get(v)


def distance_estimate(v1: MarkedVertex, v2: MarkedVertex, C: int = 3, word: Sequence[Move] | None = None,
                      search: int = 2, known: BallDepths | None = None) -> DistanceEstimate:
    """(lower, upper, formula-value).

    The lower bound is exact when a search of the given depth reaches v2
    (or v2 lies in `known`, a ball about v1); the upper bound is that exact
    value or the normalized word length.
    """
    if v1 == v2:
        return DistanceEstimate(0, 0, 0, 0, {})
    if known is not None:
        if known.center != v1:
            raise CubeComplexError("BAD_BALL", "ball is not centred at v1")
        search = known.radius
        exact = known.distance(v2)
    else:
        exact = search_distance(v1, v2, search)
    if exact is not None:
        lower = upper = exact
    else:
        lower = search + 1
        upper = len(normalize(word)) if word is not None else None
    terms = annular_terms(v1, v2)
    dp = len(geodesic(v1.pants, v2.pants)) - 1
    return DistanceEstimate(lower, upper, formula_value(v1, v2, C, terms), dp,
                            {str(a.word): d for a, d in terms.items()})


def fit_constants(samples: Sequence[tuple[int, dict, int]], Cs: Iterable[int] = range(1, 11)) -> tuple[float, int]:
    """Fit (c, C) for samples (pants distance, annular terms, distance).

    For each threshold C the least c with F/c − c ≤ d ≤ c·F + c over all
    samples is found; the C giving the least c wins.
    """
    best = None
    for C in Cs:
        c = 1.0
        for dp, terms, d in samples:
            F = dp + sum(threshold(x, C) for x in terms.values())
            c = max(c, _least_c(F, d))
        if best is None or c < best[0]:
            best = (c, C)
    return best


def _least_c(F: int, d: int) -> float:
    """Least c ≥ 1 with F/c − c ≤ d and d ≤ c·F + c."""
    lo, hi = 1.0, float(max(F, d) + 1)
    for _ in range(60):
        mid = (lo + hi) / 2
        if F / mid - mid <= d <= mid * F + mid:
            hi = mid
        else:
            lo = mid
    return hi


def twist_grid(radius: int) -> nx.Graph:
    """The ℤ³ Cayley graph restricted to the L¹ ball."""
    pts = [(a, b, c) for a in range(-radius, radius + 1) for b in range(-radius, radius + 1)
           for c in range(-radius, radius + 1) if abs(a) + abs(b) + abs(c) <= radius]
    g = nx.Graph()
    g.add_nodes_from(pts)
    s = set(pts)
    for p in pts:
        for k in range(3):
            q = list(p)
            q[k] += 1
            if tuple(q) in s:
                g.add_edge(p, tuple(q))
    return g


def move_word_to_json(word: Sequence[Move]) -> str:
    return json.dumps([str(m) for m in word])


def to_json(g: nx.Graph) -> str:
    nodes = [{"id": n, "depth": g.nodes[n]["depth"], "vertex": json.loads(g.nodes[n]["vertex"].to_json())}
             for n in sorted(g.nodes)]
    edges = sorted((min(a, b), max(a, b), g.edges[a, b]["kind"], g.edges[a, b]["slot"]) for a, b in g.edges)
    return json.dumps({"root": g.graph.get("root", 0), "nodes": nodes, "edges": edges})


def to_dot(g: nx.Graph, name: str = "CPT2") -> str:
    lines = [f"graph {name} {{"]
    for n in sorted(g.nodes):
        lines.append(f'  {n} [label="{n}"];')
    for a, b in sorted(tuple(sorted(e)) for e in g.edges):
        e = g.edges[a, b]
        lines.append(f'  {a} -- {b} [label="{e["kind"]}{e["slot"] + 1}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
