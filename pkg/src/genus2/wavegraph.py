"""The wave graph W(Z) of a cut system.

Vertices are admissible waves: arcs in the four-holed sphere S = Σ − Z with
both ends on the boundary copy ∂₀ = α1⁺, separating the two copies of α2.
Each is the boundary-parallel arc of a unique non-separating curve δ ⊂ S,
so vertices are stored through δ.  Two waves are disjoint iff their
curves meet twice.

Curves in S are charted by Farey slopes.  A frame of three curves in S
meeting pairwise twice fixes slopes 1/0, 0/1 and 1/1; then

    i(δ, 1/0) = 2|q|,  i(δ, 0/1) = 2|p|,  i(δ, 1/1) = 2|p − q|,

which reads off p/q up to a global sign.  The 1/1 class is separating on Σ
and never a vertex.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import gcd
from typing import Iterable, Sequence

import networkx as nx

from .handlebody import BAND_WORD, CutSystem, base_cut_system, is_cut_system
from .surface import (
    MappingClassWord,
    MulticurveClass,
    curve,
    dehn_twist,
    homology_class,
    intersection_number,
)

BOUNDARY = "alpha1+"
# δ0 (slope 1/0) puts α2⁺ on the ∂₀ side; slope class 0/1 puts α2⁻ there.
ENCLOSED = {(1, 0): "alpha2+", (0, 1): "alpha2-"}

NEIGHBOR_WORD = (1, 4, -3)
DIAGONAL_WORD = (3,)

DEFAULT_CAP = 30
DEFAULT_MAX_VERTICES = 5000


class WaveGraphError(ValueError):
    def __init__(self, code: str, message: str = "", witness=None):
        super().__init__(f"{code}: {message}" if message else code)
        self.code = code
        self.witness = witness


# ------------------------------------------------------------------ slopes


@dataclass(frozen=True, order=True)
class Slope:
    p: int
    q: int

    def __post_init__(self):
        p, q = self.p, self.q
        if gcd(abs(p), abs(q)) != 1:
            raise WaveGraphError("BAD_SLOPE", f"{p}/{q} not primitive")
        if q < 0 or (q == 0 and p < 0):
            object.__setattr__(self, "p", -p)
            object.__setattr__(self, "q", -q)

    @property
    def parity(self) -> tuple[int, int]:
        return (self.p % 2, self.q % 2)

    @property
    def complexity(self) -> int:
        return abs(self.p) + abs(self.q)

    def det(self, other: "Slope") -> int:
        return self.p * other.q - self.q * other.p

    def farey_adjacent(self, other: "Slope") -> bool:
        return abs(self.det(other)) == 1

    def __str__(self) -> str:
        return f"{self.p}/{self.q}"


EXCLUDED_PARITY = (1, 1)


def _reduction(s: Slope) -> tuple[list[tuple[int, int]], tuple[int, int]]:
    """Moves taking the frame curve to slope s.

    Twisting about 1/0 acts by (p, q) ↦ (p + 2q, q), about 0/1 by
    (p, q) ↦ (p, q − 2p).  Returns [(frame index, exponent)] to apply
    in order, and the starting frame slope.
    """
    p, q = s.p, s.q
    moves = []
    while not (abs(p) + abs(q) == 1 or abs(p) == abs(q) == 1):
        if abs(p) > abs(q):
            k = round(p / (2 * q))
            p -= 2 * k * q
            moves.append((0, k))
        else:
            k = round(q / (2 * p))
            q -= 2 * k * p
            moves.append((1, -k))
    return moves[::-1], (p, q)


# ------------------------------------------------------------------- chart


@dataclass(frozen=True)
class WaveChart:
    """A cut system with a slope frame on its complement."""

    Z: CutSystem
    base: MulticurveClass
    neighbor: MulticurveClass
    diagonal: MulticurveClass

    @classmethod
    def standard(cls) -> "WaveChart":
        return cls(base_cut_system(), curve(BAND_WORD), curve(NEIGHBOR_WORD), curve(DIAGONAL_WORD))

    def transport(self, phi: MappingClassWord) -> "WaveChart":
        return WaveChart(CutSystem(*(phi(a) for a in self.Z.curves)),
                         phi(self.base), phi(self.neighbor), phi(self.diagonal))

    def check(self) -> None:
        frame = (self.base, self.neighbor, self.diagonal)
        if any(self.Z.intersection(c) for c in frame):
            raise WaveGraphError("BAD_CHART", "frame curve meets Z")
        pairs = [(0, 1), (0, 2), (1, 2)]
        if any(intersection_number(frame[i], frame[j]) != 2 for i, j in pairs):
            raise WaveGraphError("BAD_CHART", "frame curves must meet pairwise twice")
        if self.diagonal.kind != "sep":
            raise WaveGraphError("BAD_CHART", "diagonal must be separating")

    def slope(self, c: MulticurveClass) -> Slope:
        q = intersection_number(c, self.base) // 2
        p = intersection_number(c, self.neighbor) // 2
        if p == 0 or q == 0:
            return Slope(p, q)
        d = intersection_number(c, self.diagonal) // 2
        return Slope(p, q) if d == abs(p - q) else Slope(-p, q)

    def complexity(self, c: MulticurveClass) -> int:
        return (intersection_number(c, self.base) + intersection_number(c, self.neighbor)) // 2

    def curve_at(self, s: Slope) -> MulticurveClass:
        moves, start = _reduction(s)
        frame = (self.base, self.neighbor)
        if abs(start[0]) == abs(start[1]):
            c = self.diagonal if start[0] == start[1] else dehn_twist(self.base, -1, self.diagonal)
        else:
            c = self.base if start[1] == 0 else self.neighbor
        for i, k in moves:
            c = dehn_twist(frame[i], k, c)
        return c

    def excluded_parity(self) -> tuple[int, int]:
        """Parity class whose curves are separating on Σ, found by homology."""
        out = set()
        for s in (Slope(1, 0), Slope(0, 1), Slope(1, 1), Slope(3, 2), Slope(2, 3), Slope(3, 5)):
            if homology_class(self.curve_at(s)) == (0, 0, 0, 0):
                out.add(s.parity)
        if len(out) != 1:
            raise WaveGraphError("BAD_CHART", f"separating classes {sorted(out)}")
        return out.pop()


# ------------------------------------------------------------------- waves


@dataclass(frozen=True)
class AdmissibleWave:
    """A wave at ∂₀, kept as its chart arc (slope, enclosed boundary) and its curve."""

    meridian: MulticurveClass
    slope: Slope
    boundary: str = BOUNDARY

    @property
    def encloses(self) -> str:
        return ENCLOSED[self.slope.parity]

    def to_json(self) -> dict:
        return {"slope": [self.slope.p, self.slope.q], "boundary": self.boundary,
                "encloses": self.encloses, "meridian": json.loads(self.meridian.to_json())}


@dataclass(frozen=True)
class WaveProjectionArc:
    """An arc of A(w), named by the unique neighbor of w it misses."""

    base: AdmissibleWave
    partner: AdmissibleWave


def meridian_to_wave(Z: CutSystem, delta: MulticurveClass, chart: WaveChart | None = None) -> AdmissibleWave:
    chart = chart or WaveChart.standard()
    if Z.intersection(delta):
        raise WaveGraphError("NOT_DISJOINT")
    if delta.kind == "sep" or not is_cut_system(Z.alpha1, delta):
        raise WaveGraphError("SEPARATING")
    return AdmissibleWave(delta, chart.slope(delta))


def wave_to_meridian(Z: CutSystem, w: AdmissibleWave, chart: WaveChart | None = None) -> MulticurveClass:
    """Rebuild the curve from the chart arc alone."""
    chart = chart or WaveChart.standard()
    return chart.curve_at(w.slope)


def are_adjacent(w1: AdmissibleWave, w2: AdmissibleWave) -> bool:
    """Disjointness of the arcs: slopes at Farey distance one."""
    return w1.slope.farey_adjacent(w2.slope)


def meridians_meet_twice(w1: AdmissibleWave, w2: AdmissibleWave) -> bool:
    return intersection_number(w1.meridian, w2.meridian) == 2


def _some_neighbor(chart: WaveChart, w: AdmissibleWave) -> AdmissibleWave:
    p, q = w.slope.p, w.slope.q
    # extended Euclid: r, s with p s − q r = 1
    r0, s0, a, b = 0, 1, p, q
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        t = a // b
        a, b = b, a - t * b
        x0, x1 = x1, x0 - t * x1
        y0, y1 = y1, y0 - t * y1
    # x0 p + y0 q = ±1, so (r, s) = (−y0, x0) works up to sign
    r, s = -y0, x0
    if Slope(r, s).parity in (EXCLUDED_PARITY, w.slope.parity):
        r, s = r + p, s + q
    n = Slope(r, s)
    return AdmissibleWave(chart.curve_at(n), n)


def _twist_orbit_min(w: MulticurveClass, start: MulticurveClass, f) -> tuple[int, MulticurveClass]:
    """Minimise f over T_w^m(start), m ∈ ℤ, for f convex in m."""
    cache = {}

    def at(m):
        if m not in cache:
            c = dehn_twist(w, m, start)
            cache[m] = (f(c), c)
        return cache[m]

    if at(1)[0] < at(0)[0]:
        step = 1
    elif at(-1)[0] < at(0)[0]:
        step = -1
    else:
        return 0, at(0)[1]
    lo, hi = 0, step
    while at(2 * hi)[0] < at(hi)[0]:
        lo, hi = hi, 2 * hi
    # minimum lies strictly between lo and 2·hi
    a, b = sorted((lo, 2 * hi))
    while b - a > 2:
        m1 = (2 * a + b) // 3
        m2 = (a + 2 * b) // 3
        if at(m1)[0] <= at(m2)[0]:
            b = m2
        else:
            a = m1
    m = min(range(a, b + 1), key=lambda k: (at(k)[0], abs(k)))
    return m, at(m)[1]


def project_wave(w: AdmissibleWave, x: AdmissibleWave, chart: WaveChart | None = None) -> WaveProjectionArc:
    """π_w(x).

    A neighbor of x is its own projection.  Otherwise the initial segment
    of x up to w misses exactly one neighbor of w: the one meeting x less
    than w does.
    """
    chart = chart or WaveChart.standard()
    if x.meridian == w.meridian:
        raise WaveGraphError("SELF")
    iw = intersection_number(x.meridian, w.meridian)
    if iw == 2:
        return WaveProjectionArc(w, x)
    y0 = _some_neighbor(chart, w)
    _, y = _twist_orbit_min(w.meridian, y0.meridian, lambda c: intersection_number(x.meridian, c))
    if intersection_number(x.meridian, y) >= iw:
        raise WaveGraphError("NO_PROJECTION", "no neighbor of w closer to x")
    return WaveProjectionArc(w, AdmissibleWave(y, chart.slope(y)))


# -------------------------------------------------------------------- balls


def _twist_neighbors(chart: WaveChart, v: MulticurveClass, seed: MulticurveClass, cap: int) -> list[MulticurveClass]:
    """All T_v^m(seed) of complexity ≤ cap (complexity is convex in m)."""
    out = []
    for step in (1, -1):
        m, prev = (0 if step == 1 else -1), None
        while True:
            c = dehn_twist(v, m, seed)
            k = chart.complexity(c)
            if k <= cap:
                out.append(c)
            elif prev is not None and k > prev:
                break
            prev = k
            m += step
    return out


def ball(chart: WaveChart | None = None, radius: int = 2, cap: int = DEFAULT_CAP,
         max_vertices: int = DEFAULT_MAX_VERTICES) -> nx.Graph:
    """Vertices within `radius` of the base, through vertices of complexity ≤ cap.

    Neighbors of v are generated as the twist orbit of one known neighbor;
    edges of the result are recomputed from intersection numbers over all
    pairs, so the graph is the induced subgraph.
    """
    chart = chart or WaveChart.standard()
    if radius < 0:
        raise WaveGraphError("BAD_RADIUS")
    root = chart.base
    depth = {root: 0}
    parent = {root: chart.neighbor}
    frontier = [root]
    for d in range(1, radius + 1):
        nxt = []
        for v in frontier:
            for c in _twist_neighbors(chart, v, parent[v], cap):
                if c not in depth:
                    depth[c] = d
                    parent[c] = v
                    nxt.append(c)
                    if len(depth) > max_vertices:
                        raise WaveGraphError("CAP_EXCEEDED", f"more than {max_vertices} vertices")
        frontier = nxt
    verts = sorted(depth, key=lambda c: (depth[c], chart.complexity(c), c.edges))
    g = nx.Graph(root=0, boundary=BOUNDARY, cap=cap, radius=radius)
    for k, c in enumerate(verts):
        g.add_node(k, curve=c, slope=chart.slope(c), depth=depth[c])
    for a in range(len(verts)):
        for b in range(a + 1, len(verts)):
            if intersection_number(verts[a], verts[b]) == 2:
                g.add_edge(a, b)
    return g


def farey_neighbors(s: Slope, cap: int, excluded: tuple[int, int] = EXCLUDED_PARITY) -> list[Slope]:
    """Slopes r/t with |p t − q r| = 1, outside the excluded class, complexity ≤ cap."""
    out = []
    for t in range(0, cap + 1):
        for r in range(-(cap - t), cap - t + 1):
            if gcd(abs(r), t) != 1 or (r % 2, t % 2) == excluded:
                continue
            n = Slope(r, t)
            if n.complexity <= cap and s.farey_adjacent(n):
                out.append(n)
    return sorted(set(out))


def farey_ball(radius: int, cap: int = DEFAULT_CAP, excluded: tuple[int, int] = EXCLUDED_PARITY) -> nx.Graph:
    """The same ball in the pure slope model."""
    root = Slope(1, 0)
    depth = {root: 0}
    frontier = [root]
    for d in range(1, radius + 1):
        nxt = []
        for v in frontier:
            for n in farey_neighbors(v, cap, excluded):
                if n not in depth:
                    depth[n] = d
                    nxt.append(n)
        frontier = nxt
    verts = sorted(depth, key=lambda s: (depth[s], s.complexity, s))
    g = nx.Graph(root=0)
    for k, s in enumerate(verts):
        g.add_node(k, slope=s, depth=depth[s])
    for a in range(len(verts)):
        for b in range(a + 1, len(verts)):
            if verts[a].farey_adjacent(verts[b]):
                g.add_edge(a, b)
    return g


def rooted_isomorphic(g: nx.Graph, h: nx.Graph) -> bool:
    for x, r in ((g, g.graph["root"]), (h, h.graph["root"])):
        for n in x.nodes:
            x.nodes[n]["is_root"] = n == r
    return nx.is_isomorphic(g, h, node_match=lambda a, b: a["is_root"] == b["is_root"])


def slopes_match(g: nx.Graph, h: nx.Graph) -> bool:
    """Stronger than isomorphism: identical slope-labelled graphs."""
    def labelled(x):
        return ({x.nodes[n]["slope"] for n in x.nodes},
                {frozenset((x.nodes[a]["slope"], x.nodes[b]["slope"])) for a, b in x.edges})
    return labelled(g) == labelled(h)


# ---------------------------------------------------------- certification


@dataclass(frozen=True)
class TreeCertificate:
    status: str  # "ACYCLIC" or "CYCLE"
    witness: tuple  # spanning-tree edges, or the cycle's vertices

    @property
    def is_tree(self) -> bool:
        return self.status == "ACYCLIC"


def certify_tree(g: nx.Graph) -> TreeCertificate:
    if g.number_of_nodes() == 0:
        raise WaveGraphError("EMPTY")
    comps = list(nx.connected_components(g))
    if len(comps) > 1:
        raise WaveGraphError("DISCONNECTED", f"{len(comps)} components",
                             witness=tuple(sorted(min(c) for c in comps)))
    if g.number_of_edges() == g.number_of_nodes() - 1:
        start = min(g.nodes)
        return TreeCertificate("ACYCLIC", tuple(nx.bfs_edges(g, start)))
    cycle = nx.find_cycle(g)
    return TreeCertificate("CYCLE", tuple(e[0] for e in cycle))


def link_is_discrete(g: nx.Graph) -> bool:
    """No edge joins two neighbors of one vertex."""
    return all(not g.has_edge(a, b) for v in g for a in g[v] for b in g[v] if a < b)


# ----------------------------------------------------------------- export


def to_json(g: nx.Graph) -> str:
    nodes = []
    for n in sorted(g.nodes):
        d = g.nodes[n]
        item = {"id": n, "slope": str(d["slope"]), "depth": d["depth"]}
        if "curve" in d:
            item["curve"] = json.loads(d["curve"].to_json())
        nodes.append(item)
    return json.dumps({"root": g.graph.get("root", 0), "nodes": nodes,
                       "edges": sorted(tuple(sorted(e)) for e in g.edges)})


def to_dot(g: nx.Graph, name: str = "W") -> str:
    lines = [f"graph {name} {{"]
    for n in sorted(g.nodes):
        d = g.nodes[n]
        extra = ""
        if "curve" in d:
            extra = "\\n" + " ".join(map(str, d["curve"].edges))
        lines.append(f'  {n} [label="{d["slope"]}{extra}"];')
    for a, b in sorted(tuple(sorted(e)) for e in g.edges):
        lines.append(f"  {a} -- {b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def waves(g: nx.Graph) -> Iterable[AdmissibleWave]:
    for n in sorted(g.nodes):
        yield AdmissibleWave(g.nodes[n]["curve"], g.nodes[n]["slope"])
