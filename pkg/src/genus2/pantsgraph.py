"""The non-separating meridional pants graph CP₂.

Vertices are pants decompositions by three non-separating meridians; X and
X′ are joined when they share two curves and the exchanged curves meet
twice.  Any two curves of a vertex form a cut system Z, and the vertices
containing Z form a copy of the wave graph W(Z).

Neighbors of X in the slot of δ are the twist orbit T_δ^m(β) of one dual
curve β.  Duals are found by straightening: a sequence of half twists and
three-point disk twists carrying the triple to one of two round
configurations in the quotient sphere, whose duals are tabulated.
"""

from __future__ import annotations

import json
from functools import lru_cache
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Sequence

import networkx as nx

from .handlebody import BAND_WORD, CutSystem, base_cut_system, find_waves, is_cut_system, surgery
from .surface import (
    MulticurveClass,
    Word,
    artin,
    canonical_cyclic,
    curve,
    dehn_twist,
    intersection_number,
    round_curve,
    sphere_half_twist,
    sphere_twist,
)
from .wavegraph import WaveGraphError, certify_tree  # noqa: F401  (re-exported)

DEFAULT_CAP = 40
DEFAULT_MAX_VERTICES = 20000


class PantsGraphError(ValueError):
    def __init__(self, code: str, message: str = ""):
        super().__init__(f"{code}: {message}" if message else code)
        self.code = code


# ------------------------------------------------------------- vertices


def _enc(c: MulticurveClass) -> tuple:
    return c.edges


@dataclass(frozen=True)
class PantsVertex:
    curves: tuple[MulticurveClass, MulticurveClass, MulticurveClass]

    @classmethod
    def of(cls, curves: Iterable[MulticurveClass]) -> "PantsVertex":
        cs = tuple(sorted(curves, key=_enc))
        if len(cs) != 3:
            raise PantsGraphError("BAD_VERTEX", "need three curves")
        return cls(cs)

    def __contains__(self, c: MulticurveClass) -> bool:
        return c in self.curves

    def contains(self, Z: CutSystem) -> bool:
        return Z.alpha1 in self.curves and Z.alpha2 in self.curves

    def cut_systems(self) -> list[CutSystem]:
        return [CutSystem(a, b) for a, b in combinations(self.curves, 2)]

    def other(self, Z: CutSystem) -> MulticurveClass:
        rest = [c for c in self.curves if c not in Z.curves]
        if len(rest) != 1:
            raise PantsGraphError("NOT_CONTAINED")
        return rest[0]

    def replace(self, old: MulticurveClass, new: MulticurveClass) -> "PantsVertex":
        return PantsVertex.of([new if c == old else c for c in self.curves])

    def to_json(self) -> list:
        return [json.loads(c.to_json()) for c in self.curves]

    def __repr__(self) -> str:
        return "PantsVertex(" + ", ".join(str(c.word) for c in self.curves) + ")"


def is_vertex(triple: Sequence[MulticurveClass]) -> bool:
    cs = list(triple)
    if len(cs) != 3 or len(set(cs)) != 3:
        return False
    if not all(c.is_curve and c.kind == "nonsep" for c in cs):
        return False
    if any(intersection_number(a, b) for a, b in combinations(cs, 2)):
        return False
    # all three pairs are cut systems (this also checks the meridian condition)
    return all(is_cut_system(a, b) for a, b in combinations(cs, 2))


def exchanged(X: PantsVertex, Y: PantsVertex) -> tuple[MulticurveClass, MulticurveClass] | None:
    a = [c for c in X.curves if c not in Y.curves]
    b = [c for c in Y.curves if c not in X.curves]
    if len(a) != 1:
        return None
    return a[0], b[0]


def is_edge(X: PantsVertex, Y: PantsVertex) -> bool:
    ex = exchanged(X, Y)
    return ex is not None and intersection_number(*ex) == 2


def base_vertex() -> PantsVertex:
    Z = base_cut_system()
    return PantsVertex.of([Z.alpha1, Z.alpha2, curve(BAND_WORD)])


# --------------------------------------------------------- straightening
#
# Moves act on quotient words.  ("h", i) is the half twist exchanging
# p_i, p_(i+1); ("c",) the half twist exchanging p6, p1 behind the others;
# ("t", i) the full twist of the disk around p_i, p_(i+1), p_(i+2).

_R25 = round_curve(2, 5)
MOVES = ([("h", i, s) for i in range(1, 6) for s in (1, -1)]
         + [("c", 0, s) for s in (1, -1)]
         + [("t", i, s) for i in range(1, 5) for s in (1, -1)])

ROUND = (
    (round_curve(1, 2), round_curve(3, 4), round_curve(5, 6)),
    (round_curve(2, 3), round_curve(4, 5), round_curve(2, 5)),
)
ROUND_DUALS = (
    ((1, 4, -1, 2, -4), (2, 3, -4, -3), (2, 5, -2, 4, -5)),
    ((1, -2, 5, -3, 2, -5), (1, -3, 4, -1, 5, -4), (1, 3, -5, -3)),
)


def apply_move(m: tuple, w: Sequence[int]) -> Word:
    kind, i, s = m
    if kind == "h":
        return artin(i, w, inverse_move=s > 0)
    if kind == "c":
        return canonical_cyclic(sphere_half_twist(_R25, w, s))
    return canonical_cyclic(sphere_twist(round_curve(i, i + 2), w, s))


def _inverse_move(m: tuple) -> tuple:
    return (m[0], m[1], -m[2])


@dataclass(frozen=True)
class Straightening:
    moves: tuple  # applied first to last
    target: int  # index into ROUND
    slots: tuple[int, int, int]  # input curve k ends on ROUND[target][slots[k]]

    def pull_back(self, w: Sequence[int]) -> Word:
        for m in reversed(self.moves):
            w = apply_move(_inverse_move(m), w)
        return canonical_cyclic(w)


def _size(ws) -> int:
    return sum(len(w) for w in ws)


def straighten(curves: Sequence[MulticurveClass], lookahead: int = 2, moves: Sequence[tuple] = MOVES) -> Straightening:
    ws = tuple(c.word for c in curves)
    applied: list = []
    while True:
        cur = _size(ws)
        best = None
        frontier = [(ws, ())]
        for _ in range(lookahead):
            nxt = []
            for st, path in frontier:
                for m in moves:
                    n = tuple(apply_move(m, w) for w in st)
                    size = _size(n)
                    if size < cur and (best is None or size < best[0]):
                        best = (size, n, path + (m,))
                    nxt.append((n, path + (m,)))
            if best:
                break
            frontier = nxt
        if best is None:
            break
        ws = best[1]
        applied.extend(best[2])
    for t, target in enumerate(ROUND):
        if set(ws) == set(target):
            return Straightening(tuple(applied), t, tuple(target.index(w) for w in ws))
    raise PantsGraphError("STRAIGHTEN_FAILED", f"stuck at {ws}")


def dual_curve(curves: Sequence[MulticurveClass], i: int, st: Straightening | None = None) -> MulticurveClass:
    """A dual to curves[i]: meets it twice, misses the other two."""
    st = st or straighten(curves)
    c = curve(st.pull_back(ROUND_DUALS[st.target][st.slots[i]]))
    ok = (intersection_number(c, curves[i]) == 2 and c.kind == "nonsep"
          and all(intersection_number(c, curves[j]) == 0 for j in range(3) if j != i))
    if not ok:
        raise PantsGraphError("BAD_DUAL", f"slot {i}")
    return c


def dual_system(curves: Sequence[MulticurveClass]) -> tuple[MulticurveClass, ...]:
    st = straighten(curves)
    return tuple(dual_curve(curves, i, st) for i in range(3))


# ----------------------------------------------------------- twist orbits


def orbit_argmin(center: MulticurveClass, seed: MulticurveClass, key, ties: str = "raise") -> tuple[int, MulticurveClass]:
    """argmin of key over T_center^m(seed), m ∈ ℤ.

    The first component of key must be convex in m (intersection numbers
    along a twist orbit are); ties in it are broken by the rest of the key
    on the plateau.  A remaining tie raises, or with ties="least" goes to
    the least |m| (then the least m).
    """
    cache: dict[int, tuple] = {}

    def at(m):
        if m not in cache:
            c = dehn_twist(center, m, seed)
            cache[m] = (key(c), c)
        return cache[m]

    def f(m):
        return at(m)[0][0]

    step = 1 if f(1) < f(0) else (-1 if f(-1) < f(0) else 0)
    m = 0
    if step:
        jump = 1
        while f(m + step * jump) < f(m):
            m += step * jump
            jump *= 2
        # descend by shrinking steps; the last jump may have overshot
        while jump > 1:
            jump //= 2
            for d in (jump, -jump):
                while f(m + d) < f(m):
                    m += d
    lo = m
    while f(lo - 1) == f(m):
        lo -= 1
    hi = m
    while f(hi + 1) == f(m):
        hi += 1
    cands = sorted(range(lo, hi + 1), key=lambda k: (at(k)[0], abs(k), k))
    if ties == "raise" and len(cands) > 1 and at(cands[0])[0] == at(cands[1])[0]:
        raise PantsGraphError("TIE", "orbit minimum not unique")
    return cands[0], at(cands[0])[1]


# -------------------------------------------------------------- wave trees


def wave_neighbor_seed(Z: CutSystem, a: MulticurveClass) -> MulticurveClass:
    return dual_curve([Z.alpha1, Z.alpha2, a], 2)


def wave_step(Z: CutSystem, a: MulticurveClass, b: MulticurveClass) -> MulticurveClass:
    """The neighbor of a in W(Z) on the way to b."""
    iab = intersection_number(a, b)
    if iab == 2:
        return b
    seed = wave_neighbor_seed(Z, a)
    _, y = orbit_argmin(a, seed, lambda c: (intersection_number(c, b), c.edges))
    if intersection_number(y, b) >= iab:
        raise PantsGraphError("NO_STEP", "no neighbor closer to the target")
    return y


def wave_geodesic(Z: CutSystem, a: MulticurveClass, b: MulticurveClass, limit: int = 200) -> list[MulticurveClass]:
    path = [a]
    while path[-1] != b:
        path.append(wave_step(Z, path[-1], b))
        if len(path) > limit:
            raise PantsGraphError("CAP_EXCEEDED", "wave geodesic too long")
    return path


# -------------------------------------------------------------- projection


def _new_curve(Z: CutSystem, Z2: CutSystem) -> MulticurveClass:
    return next(c for c in Z2.curves if c not in Z.curves)


def surgery_curves(Z: CutSystem, X: PantsVertex) -> set[MulticurveClass]:
    """Surgery curves from the waves of every curve of X meeting Z."""
    out = set()
    for x in X.curves:
        if Z.intersection(x):
            for w in find_waves(Z, x):
                out.add(_new_curve(Z, surgery(Z, w)))
    return out


def project(Z: CutSystem, X: PantsVertex) -> PantsVertex:
    """π_Z(X)."""
    if all(Z.intersection(x) == 0 for x in X.curves):
        return X
    x = next(x for x in X.curves if Z.intersection(x))
    delta = _new_curve(Z, surgery(Z, find_waves(Z, x)[0]))
    return PantsVertex.of([Z.alpha1, Z.alpha2, delta])


# -------------------------------------------------------------- paths


def _least_pair(X: PantsVertex) -> CutSystem:
    a, b = min(combinations(X.curves, 2), key=lambda p: (_enc(p[0]), _enc(p[1])))
    return CutSystem(a, b)


def surgery_toward(Z: CutSystem, Y: PantsVertex) -> list[CutSystem]:
    seq = [Z]
    while True:
        hit = [y for y in Y.curves if seq[-1].intersection(y)]
        if not hit:
            return seq
        seq.append(surgery(seq[-1], find_waves(seq[-1], hit[0])[0]))


def connect(X: PantsVertex, Y: PantsVertex) -> list[PantsVertex]:
    """The path of the connectivity argument: surgery toward Y, with
    geodesics inside each CP₂(Z_i) between consecutive steps."""
    if X == Y:
        return [X]
    seq = surgery_toward(_least_pair(X), Y)
    path = [X]
    for Zi, Zn in zip(seq, seq[1:]):
        target = _new_curve(Zi, Zn)
        for c in wave_geodesic(Zi, path[-1].other(Zi), target)[1:]:
            path.append(PantsVertex.of([Zi.alpha1, Zi.alpha2, c]))
    Zn = seq[-1]
    for c in wave_geodesic(Zn, path[-1].other(Zn), Y.other(Zn))[1:]:
        path.append(PantsVertex.of([Zn.alpha1, Zn.alpha2, c]))
    return path


def reduce_path(path: Sequence[PantsVertex]) -> list[PantsVertex]:
    out: list[PantsVertex] = []
    for v in path:
        if out and out[-1] == v:
            continue
        if len(out) >= 2 and out[-2] == v:
            out.pop()
            continue
        out.append(v)
    return out


def geodesic(X: PantsVertex, Y: PantsVertex, cap: int = 1000) -> list[PantsVertex]:
    path = reduce_path(connect(X, Y))
    if len(path) - 1 > cap:
        raise PantsGraphError("CAP_EXCEEDED", f"geodesic longer than {cap}")
    return path


def path_to_json(path: Sequence[PantsVertex]) -> str:
    items = []
    for k, v in enumerate(path):
        item = {"vertex": v.to_json()}
        if k:
            old, new = exchanged(path[k - 1], v)
            item["exchanged"] = [list(old.edges), list(new.edges)]
        items.append(item)
    return json.dumps(items)


# -------------------------------------------------------------- balls


@dataclass(frozen=True)
class Reference:
    """Curves against which vertex complexity is measured."""

    curves: tuple[MulticurveClass, ...]

    @classmethod
    def standard(cls) -> "Reference":
        X0 = base_vertex()
        return cls(X0.curves + dual_system(X0.curves))

    def curve_complexity(self, c: MulticurveClass) -> int:
        return _curve_complexity(self.curves, c)

    def complexity(self, X: PantsVertex) -> int:
        return sum(self.curve_complexity(c) for c in X.curves) // 2


@lru_cache(maxsize=200_000)
def _curve_complexity(ref: tuple, c: MulticurveClass) -> int:
    return sum(intersection_number(c, r) for r in ref)


class DualOracle:
    """Dual systems by straightening, shared along twist orbits.

    If Y = T_δ^m(Y₀) then T_δ^m carries duals of Y₀ to duals of Y, so one
    straightening serves a whole orbit.  Twisted duals are formed lazily.
    """

    def __init__(self):
        self._known: dict[PantsVertex, dict] = {}
        self._pending: dict[PantsVertex, tuple] = {}

    def __call__(self, X: PantsVertex) -> dict[MulticurveClass, MulticurveClass]:
        if X not in self._known:
            if X in self._pending:
                Y0, delta, m = self._pending.pop(X)
                self._known[X] = {dehn_twist(delta, m, c): dehn_twist(delta, m, d)
                                  for c, d in self(Y0).items()}
            else:
                self._known[X] = dict(zip(X.curves, dual_system(X.curves)))
        return self._known[X]

    def slot_orbit(self, X: PantsVertex, delta: MulticurveClass, ref: Reference, cap: int) -> list[PantsVertex]:
        """Neighbors of X exchanging δ whose complexity is at most cap."""
        beta = self(X)[delta]
        Y0 = X.replace(delta, beta)
        out = []
        for step in (1, -1):
            m, prev = (0 if step == 1 else -1), None
            while True:
                Y = Y0 if m == 0 else X.replace(delta, dehn_twist(delta, m, beta))
                size = ref.complexity(Y)
                if size <= cap:
                    out.append(Y)
                    if m and Y not in self._known:
                        self._pending.setdefault(Y, (Y0, delta, m))
                elif prev is not None and size > prev:
                    break
                prev = size
                m += step
        return out


def neighbors(X: PantsVertex, cap: int = DEFAULT_CAP, ref: Reference | None = None,
              oracle: DualOracle | None = None) -> list[PantsVertex]:
    ref = ref or Reference.standard()
    oracle = oracle or DualOracle()
    out = []
    for delta in X.curves:
        out.extend(oracle.slot_orbit(X, delta, ref, cap))
    return out


def ball(X: PantsVertex | None = None, radius: int = 1, cap: int = DEFAULT_CAP,
         max_vertices: int = DEFAULT_MAX_VERTICES, ref: Reference | None = None) -> nx.Graph:
    """Vertices within `radius` of X through vertices of complexity ≤ cap.

    Edges are recomputed with is_edge over all pairs sharing two curves.
    """
    X = X or base_vertex()
    ref = ref or Reference.standard()
    if radius < 0:
        raise PantsGraphError("BAD_RADIUS")
    oracle = DualOracle()
    depth = {X: 0}
    frontier = [X]
    for d in range(1, radius + 1):
        nxt = []
        for v in frontier:
            for y in neighbors(v, cap, ref, oracle):
                if y not in depth:
                    depth[y] = d
                    nxt.append(y)
                    if len(depth) > max_vertices:
                        raise PantsGraphError("CAP_EXCEEDED", f"more than {max_vertices} vertices")
        frontier = nxt
    verts = sorted(depth, key=lambda v: (depth[v], ref.complexity(v), [c.edges for c in v.curves]))
    g = nx.Graph(root=0, cap=cap, radius=radius)
    index = {}
    for k, v in enumerate(verts):
        g.add_node(k, vertex=v, depth=depth[v])
        index[v] = k
    by_pair: dict[frozenset, list[int]] = {}
    for v, k in index.items():
        for a, b in combinations(v.curves, 2):
            by_pair.setdefault(frozenset((a, b)), []).append(k)
    for ks in by_pair.values():
        for a, b in combinations(ks, 2):
            if is_edge(verts[a], verts[b]):
                g.add_edge(a, b)
    return g


def subtree_nodes(g: nx.Graph, Z: CutSystem) -> set[int]:
    return {n for n in g if g.nodes[n]["vertex"].contains(Z)}


def cut_systems_in(g: nx.Graph) -> set[frozenset]:
    out = set()
    for n in g:
        for a, b in combinations(g.nodes[n]["vertex"].curves, 2):
            out.add(frozenset((a, b)))
    return out


def subtree_overlaps(g: nx.Graph) -> int:
    """Largest number of vertices shared by two distinct CP₂(Z) in g."""
    members: dict[frozenset, set[int]] = {}
    for n in g:
        for a, b in combinations(g.nodes[n]["vertex"].curves, 2):
            members.setdefault(frozenset((a, b)), set()).add(n)
    worst = 0
    keys = list(members)
    for i, p in enumerate(keys):
        for q in keys[i + 1:]:
            worst = max(worst, len(members[p] & members[q]))
    return worst


def curve_star_connected(g: nx.Graph, alpha: MulticurveClass) -> bool:
    """CP₂(α) ∩ g, the vertices containing α, is connected."""
    nodes = [n for n in g if alpha in g.nodes[n]["vertex"]]
    return not nodes or nx.is_connected(g.subgraph(nodes))


def to_json(g: nx.Graph) -> str:
    nodes = [{"id": n, "depth": g.nodes[n]["depth"], "vertex": g.nodes[n]["vertex"].to_json()}
             for n in sorted(g.nodes)]
    return json.dumps({"root": g.graph.get("root", 0), "nodes": nodes,
                       "edges": sorted(tuple(sorted(e)) for e in g.edges)})


def to_dot(g: nx.Graph, name: str = "CP2") -> str:
    lines = [f"graph {name} {{"]
    for n in sorted(g.nodes):
        v = g.nodes[n]["vertex"]
        label = " | ".join("".join(map(str, c.word))[:24] for c in v.curves)
        lines.append(f'  {n} [label="{label}"];')
    for a, b in sorted(tuple(sorted(e)) for e in g.edges):
        lines.append(f"  {a} -- {b};")
    lines.append("}")
    return "\n".join(lines) + "\n"
