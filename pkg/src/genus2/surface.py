"""Curves on the closed genus-2 surface through its hyperelliptic quotient.

The surface Σ is the branched double cover of a sphere S with six marked
points p1..p6 on the real axis.  Every simple closed curve on Σ is isotopic
to a curve preserved by the hyperelliptic involution, so isotopy classes of
essential curves on Σ correspond to curves on S - {p1..p6} that enclose
two or three marked points:

* a curve around 2 points (a "2|4 curve") lifts to two parallel copies of a
  non-separating curve;
* a curve around 3 points (a "3|3 curve") lifts to one separating curve.

Downstairs, π₁(S - {p}) is free on x1..x5, where x_i crosses the arc
e_i = [p_i, p_(i+1)] upward and is a counterclockwise loop around p1..p_i.
A curve is a cyclically reduced word (ints ±1..±5).  Cutting S along the
five arcs leaves one polygon R whose ten sides in counterclockwise order are
the tops T1..T5 followed by the bottoms B5..B1.

Intersection numbers come from drawing curves in R: two strands on an arc
are ordered as if they crossed in the middle of the segment they share, and
two chords of R cross iff their endpoints interleave.  Dehn twists are computed by splicing copies of the
twisting curve in at every crossing.
"""

from __future__ import annotations

import functools
import json
import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

Word = tuple[int, ...]

NPUNCT = 6
NARCS = 5
NSIDES = 10
MODEL_ID = "hyperelliptic-decagon-v1"

# Flip to swap which twist direction counts as positive.
LEFT_TWIST = True


class SurfaceError(ValueError):
    code = "SURFACE_ERROR"

    def __init__(self, code: str, message: str = ""):
        super().__init__(f"{code}: {message}" if message else code)
        self.code = code


# ---------------------------------------------------------------- words


def free_reduce(w: Iterable[int]) -> Word:
    out: list[int] = []
    for x in w:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_reduce(w: Iterable[int]) -> Word:
    w = free_reduce(w)
    i, j = 0, len(w) - 1
    while i < j and w[i] == -w[j]:
        i += 1
        j -= 1
    return w[i:j + 1]


def inverse(w: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(w))


def _key(x: int) -> int:
    return 2 * abs(x) - (x > 0)


def _least_rotation(s: Sequence[int]) -> int:
    """Booth's algorithm: start index of the lexicographically least rotation."""
    n = len(s)
    if n == 0:
        return 0
    ss = list(s) + list(s)
    f = [-1] * (2 * n)
    k = 0
    for j in range(1, 2 * n):
        sj = ss[j]
        i = f[j - k - 1]
        while i != -1 and sj != ss[k + i + 1]:
            if sj < ss[k + i + 1]:
                k = j - i - 1
            i = f[i]
        if sj != ss[k + i + 1]:
            if sj < ss[k]:
                k = j
            f[j - k] = -1
        else:
            f[j - k] = i + 1
    return k


def canonical_cyclic(w: Sequence[int]) -> Word:
    """Canonical representative of the unoriented conjugacy class of w."""
    w = cyclic_reduce(w)
    if not w:
        return ()
    best = None
    for v in (w, inverse(w)):
        k = _least_rotation([_key(x) for x in v])
        r = tuple(v[k:] + v[:k])
        kr = [_key(x) for x in r]
        if best is None or kr < best[0]:
            best = (kr, r)
    return best[1]


def round_curve(i: int, j: int) -> Word:
    """Word of the round curve enclosing p_i..p_j (1 ≤ i ≤ j ≤ 6)."""
    w = []
    if i > 1:
        w.append(-(i - 1))
    if j < 6:
        w.append(j)
    return canonical_cyclic(w)


# ----------------------------------------------------- puncture sides


def exponent_sums(w: Sequence[int]) -> list[int]:
    s = [0] * (NARCS + 1)
    for x in w:
        s[abs(x)] += 1 if x > 0 else -1
    return s


def windings(w: Sequence[int]) -> list[int]:
    """Winding number of w about p1..p6 (relative to the point at infinity)."""
    s = exponent_sums(w)
    out = []
    for j in range(1, NPUNCT + 1):
        out.append(sum(s[i] for i in range(j, NARCS + 1)))
    return out


def puncture_split(w: Sequence[int]) -> tuple[frozenset[int], frozenset[int]]:
    """(left, right) sets of marked points for a simple closed curve w."""
    wn = windings(w)
    vals = set(wn)
    if not vals <= {0, 1} and not vals <= {0, -1}:
        raise SurfaceError("NOT_SIMPLE", f"winding numbers {wn}")
    if vals <= {0, 1} and 1 in vals:
        left = frozenset(j + 1 for j, v in enumerate(wn) if v == 1)
    else:
        left = frozenset(j + 1 for j, v in enumerate(wn) if v == 0)
    right = frozenset(range(1, NPUNCT + 1)) - left
    return left, right


def small_side(w: Sequence[int]) -> frozenset[int]:
    left, right = puncture_split(w)
    return left if len(left) <= len(right) else right


def kind(w: Sequence[int]) -> str:
    """'trivial', 'peripheral', 'nonsep' (2|4) or 'sep' (3|3)."""
    if not w:
        return "trivial"
    n = len(small_side(w))
    return {0: "trivial", 1: "peripheral", 2: "nonsep", 3: "sep"}[n]


# ------------------------------------------------------------- drawing
#
# Half-edge (side of R) of a letter: where the path arrives after it.
# Sides are numbered 0..9 counterclockwise: T_i -> i-1, B_i -> 10-i.


def arrive_side(x: int) -> int:
    return abs(x) - 1 if x > 0 else NSIDES - abs(x)


def exit_side(x: int) -> int:
    return arrive_side(-x)


def _ccw_from(o: int, s: int) -> int:
    return (s - o) % NSIDES


class Drawing:
    """Simultaneous minimal-position drawing of a family of distinct curves.

    For every crossing of a curve with an arc e_i we record its rank along
    e_i, counted from p_i.  A chord of R runs between consecutive crossings.
    """

    def __init__(self, curves: Sequence[Word]):
        self.curves = [tuple(c) for c in curves]
        # strands[i] = list of (curve index, position) crossing e_{i}
        per_arc: dict[int, list[tuple[int, int]]] = {i: [] for i in range(1, NARCS + 1)}
        for ci, w in enumerate(self.curves):
            for k, x in enumerate(w):
                per_arc[abs(x)].append((ci, k))
        self.rank: dict[tuple[int, int], int] = {}
        self.count = {i: len(v) for i, v in per_arc.items()}
        for i, lst in per_arc.items():
            lst.sort(key=functools.cmp_to_key(self._cmp))
            for r, s in enumerate(lst):
                self.rank[s] = r

    @functools.cached_property
    def _inverses(self) -> list[Word]:
        return [inverse(w) for w in self.curves]

    @functools.cached_property
    def _ext(self) -> dict:
        return {}

    def _extended(self, W: Word, inverted: bool) -> Word:
        """W (or its inverse) repeated past any scan limit."""
        key = (id(W), inverted)  # W is one of the stored words or inverses
        if key not in self._ext:
            longest = max(len(c) for c in self.curves)
            base = inverse(W) if inverted else W
            self._ext[key] = base * (4 + (4 * longest + 4) // len(W))
        return self._ext[key]

    def _oriented(self, ci: int, k: int, direction: int) -> tuple[Word, int]:
        w = self.curves[ci]
        if (w[k] > 0) == (direction > 0):
            return w, k
        return self._inverses[ci], len(w) - 1 - k

    def _cmp(self, s: tuple[int, int], t: tuple[int, int]) -> int:
        """Left-to-right order of two strands on one arc.

        The strands share a maximal segment through this arc.  If they are
        linked they cross once, in the middle of that segment, so the order
        here is read off at the nearer end.  At the exact middle the end is
        picked from the segment word (reduced segments are never
        self-inverse).  Checked against :func:`linked_pairs` in the tests.
        """
        if s == t:
            return 0
        W, k = self._oriented(*s, 1)
        V, j = self._oriented(*t, 1)
        nW, nV = len(W), len(V)
        limit = 2 * (nW + nV) + 2
        # scanning back along W is scanning forward along its inverse
        back = _first_mismatch(self._extended(W, True), nW - 1 - k, self._extended(V, True), nV - 1 - j, limit)
        if back is None:
            return -1 if s < t else 1
        fwd = _first_mismatch(self._extended(W, False), k, self._extended(V, False), j, limit)
        if back != fwd:
            use_past = back < fwd
        else:
            seg = [W[(k + d) % nW] for d in range(1 - back, fwd)]
            use_past = [_key(x) for x in seg] < [_key(x) for x in inverse(seg)]
        if use_past:
            direction, m = 1, back
        else:
            direction, m = -1, fwd
            W, k = self._oriented(*s, -1)
            V, j = self._oriented(*t, -1)
        a, b = W[(k - m) % nW], V[(j - m) % nV]
        e = exit_side(W[(k - m + 1) % nW])
        s_left = _ccw_from(e, arrive_side(a)) < _ccw_from(e, arrive_side(b))
        # left of upward travel is toward p_i, i.e. lower rank
        return -1 if s_left == (direction > 0) else 1

    def point(self, x: int, r: int) -> tuple[int, int]:
        """Boundary position of the rank-r crossing of arc |x| on the side of
        R where a path arrives after letter x."""
        i = abs(x)
        if x > 0:
            return (i - 1, r)
        return (NSIDES - i, self.count[i] - 1 - r)

    def chords(self, ci: int) -> list[tuple[tuple[int, int], tuple[int, int]]]:
        """Chord k of curve ci runs from the arrival after letter k to the
        exit before letter k+1."""
        w = self.curves[ci]
        n = len(w)
        out = []
        for k in range(n):
            x, y = w[k], w[(k + 1) % n]
            p1 = self.point(x, self.rank[(ci, k)])
            p2 = self.point(-y, self.rank[(ci, (k + 1) % n)])
            out.append((p1, p2))
        return out

    def _flat(self, p: tuple[int, int]) -> int:
        side, pos = p
        return side * (self._width + 1) + pos

    @functools.cached_property
    def _width(self) -> int:
        return max(self.count.values(), default=0) + 1

    def chord_array(self, ci: int) -> np.ndarray:
        ch = self.chords(ci)
        if not ch:
            return np.zeros((0, 2), dtype=np.int64)
        return np.array([[self._flat(p), self._flat(q)] for p, q in ch], dtype=np.int64)

    def crossings(self, ci: int, cj: int) -> list[tuple[int, int]]:
        """Pairs (chord of ci, chord of cj) that cross."""
        A, B = self.chord_array(ci), self.chord_array(cj)
        if len(A) == 0 or len(B) == 0:
            return []
        lo = np.minimum(A[:, 0], A[:, 1])[:, None]
        hi = np.maximum(A[:, 0], A[:, 1])[:, None]
        in1 = (B[None, :, 0] > lo) & (B[None, :, 0] < hi)
        in2 = (B[None, :, 1] > lo) & (B[None, :, 1] < hi)
        idx = np.nonzero(in1 != in2)
        return list(zip(idx[0].tolist(), idx[1].tolist()))

    def flat(self, p: tuple[int, int]) -> int:
        return self._flat(p)


def _first_mismatch(E: Word, a: int, F: Word, b: int, limit: int) -> int | None:
    """Least m in [1, limit) with E[a+m] != F[b+m], by galloping on slices."""
    lo, step = 1, 1
    while lo < limit:
        hi = min(lo + step, limit)
        if E[a + lo:a + hi] == F[b + lo:b + hi]:
            lo, step = hi, step * 2
            continue
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if E[a + lo:a + mid] == F[b + lo:b + mid]:
                lo = mid
            else:
                hi = mid
        return lo
    return None


def _between_ccw(a: int, x: int, b: int) -> bool:
    """x strictly inside the counterclockwise arc from a to b (sides)."""
    return 0 < (x - a) % NSIDES < (b - a) % NSIDES


def linked_pairs(u: Sequence[int], v: Sequence[int]) -> int:
    """Count linked pairs of lifts of two cyclic words in the ribbon rose.

    Independent of :class:`Drawing`: walks maximal common segments of the
    two periodic words (in both relative directions) and compares the side
    on which they arrive with the side on which they leave.
    """
    u, v = cyclic_reduce(u), cyclic_reduce(v)
    n, m = len(u), len(v)
    if n == 0 or m == 0 or canonical_cyclic(u) == canonical_cyclic(v):
        return 0
    total = 0
    for rev, V in ((False, v), (True, inverse(v))):
        for i in range(n):
            iu, ou = arrive_side(u[i - 1]), exit_side(u[i])
            for j in range(m):
                iv, ov = arrive_side(V[j - 1]), exit_side(V[j])
                if iu == iv:
                    continue
                if ou != ov:
                    if rev or len({iu, ou, iv, ov}) < 4:
                        continue
                    if _between_ccw(iu, iv, ou) != _between_ccw(iu, ov, ou):
                        total += 1
                    continue
                t = 0
                while u[(i + t) % n] == V[(j + t) % m]:
                    t += 1
                    if t > n + m:
                        raise SurfaceError("NOT_PRIMITIVE", "words share a power")
                start_left = _ccw_from(ou, iu) < _ccw_from(ou, iv)
                inn = arrive_side(u[(i + t - 1) % n])
                eu, ev = exit_side(u[(i + t) % n]), exit_side(V[(j + t) % m])
                end_left = _ccw_from(inn, ev) < _ccw_from(inn, eu)
                if start_left != end_left:
                    total += 1
    return total


def sphere_intersection(u: Sequence[int], v: Sequence[int]) -> int:
    """Geometric intersection number of two curves on the punctured sphere."""
    u, v = canonical_cyclic(u), canonical_cyclic(v)
    if not u or not v or u == v:
        return 0
    return _sphere_intersection(*sorted((u, v)))


@functools.lru_cache(maxsize=1 << 16)
def _sphere_intersection(u: Word, v: Word) -> int:
    d = Drawing([u, v])
    return len(d.crossings(0, 1))


def self_crossings(u: Sequence[int]) -> int:
    d = Drawing([canonical_cyclic(u)])
    return len(d.crossings(0, 0)) // 2


# ------------------------------------------------------------ splicing


def crossing_table(d: Drawing, ci: int, cj: int) -> list[dict]:
    """Crossings of curves ci ("g") and cj ("e") of a drawing.

    Each entry gives the chord index on both curves, the point's position
    along each curve as (chord, offset) and the crossing directions.
    """
    L = NSIDES * (d._width + 1)
    gch = [(d.flat(p), d.flat(q)) for p, q in d.chords(ci)]
    ech = [(d.flat(p), d.flat(q)) for p, q in d.chords(cj)]
    out = []
    for kg, ke in d.crossings(ci, cj):
        Q1, Q2 = gch[kg]
        P1, P2 = ech[ke]
        # offset of the crossing along each chord, measured by where the
        # other chord meets the counterclockwise arc from its start
        dq = min(x for x in ((P1 - Q1) % L, (P2 - Q1) % L) if x < (Q2 - Q1) % L)
        dp = min(x for x in ((Q1 - P1) % L, (Q2 - P1) % L) if x < (P2 - P1) % L)
        g_r2l = 0 < (Q1 - P1) % L < (P2 - P1) % L  # g crosses e right->left
        e_r2l = 0 < (P1 - Q1) % L < (Q2 - Q1) % L  # e crosses g right->left
        out.append({"kg": kg, "ke": ke, "gpos": (kg, dq), "epos": (ke, dp),
                    "g_r2l": g_r2l, "e_r2l": e_r2l})
    return out


class _Scene:
    """Two curves drawn together, with their crossings located along both."""

    def __init__(self, gamma: Word, eta: Word):
        self.g, self.e = gamma, eta
        self.d = Drawing([gamma, eta])
        self.cross = crossing_table(self.d, 0, 1)


def path_letters(word: Word, a: tuple[int, int], b: tuple[int, int]) -> list[int]:
    """Letters crossed going forward along a cyclic word from point a to b.

    Points are (chord index, offset within chord)."""
    n = len(word)
    ka, kb = a[0], b[0]
    count = (kb - ka) % n
    if count == 0 and b[1] <= a[1]:
        count = n
    return [word[(ka + 1 + t) % n] for t in range(count)]


def _loop(word: Word, k: int, positive: bool) -> list[int]:
    n = len(word)
    loop = [word[(k + 1 + t) % n] for t in range(n)]
    return loop if positive else list(inverse(loop))


def sphere_twist(gamma: Sequence[int], eta: Sequence[int], n: int = 1) -> Word:
    """T_gamma^n(eta) on the punctured sphere; n > 0 is a left twist."""
    gamma, eta = canonical_cyclic(gamma), canonical_cyclic(eta)
    if n == 0 or not gamma or not eta or gamma == eta:
        return eta
    sc = _Scene(gamma, eta)
    if not sc.cross:
        return eta
    left = (n > 0) == LEFT_TWIST
    inserts: dict[int, list[tuple[int, list[int]]]] = {}
    for c in sc.cross:
        positive = c["g_r2l"] == left
        piece = _loop(gamma, c["kg"], positive) * abs(n)
        inserts.setdefault(c["ke"], []).append((c["epos"][1], piece))
    out: list[int] = []
    for k, x in enumerate(eta):
        out.append(x)
        for _, piece in sorted(inserts.get(k, []), key=lambda t: t[0]):
            out.extend(piece)
    return canonical_cyclic(out)


# direction of the collar spiral; calibrated so that H_gamma^2 = T_gamma
_HALF_DIR = -1


def _half_once(gamma: Word, eta: Word, sign: int) -> Word:
    sc = _Scene(gamma, eta)
    cr = sc.cross
    if not cr:
        return eta
    N = len(cr)
    if N % 2:
        raise SurfaceError("NOT_SIMPLE", "odd crossing count with a separating curve")
    k = N // 2
    gorder = sorted(range(N), key=lambda t: cr[t]["gpos"])
    eorder = sorted(range(N), key=lambda t: cr[t]["epos"])
    gidx = {c: i for i, c in enumerate(gorder)}
    eidx = {c: i for i, c in enumerate(eorder)}
    left, _ = puncture_split(gamma)
    disk_left = len(left) == 2
    inside_after = {t: cr[t]["e_r2l"] == disk_left for t in range(N)}

    def gpath(a: int, b: int) -> list[int]:
        return path_letters(gamma, cr[a]["gpos"], cr[b]["gpos"])

    def epath(a: int, b: int) -> list[int]:
        return path_letters(eta, cr[a]["epos"], cr[b]["epos"])

    def rot(t: int) -> int:
        return gorder[(gidx[t] + k) % N]

    d = sign * _HALF_DIR * (1 if disk_left else -1) * (1 if LEFT_TWIST else -1)

    def spiral(a: int) -> list[int]:
        b = rot(a)
        return gpath(a, b) if d > 0 else list(inverse(gpath(b, a)))

    def inside(a: int, b: int) -> list[int]:
        nxt = eorder[(eidx[a] + 1) % N]
        prv = eorder[(eidx[a] - 1) % N]
        if inside_after[a] and nxt == b:
            return epath(a, b)
        if inside_after[b] and prv == b:
            return list(inverse(epath(b, a)))
        raise SurfaceError("HALF_TWIST", "inside arcs are not rotation invariant")

    out: list[int] = []
    for i in range(N):
        a, b = eorder[i], eorder[(i + 1) % N]
        if not inside_after[a]:
            out.extend(epath(a, b))
            continue
        ra, rb = rot(a), rot(b)
        out.extend(spiral(a))
        out.extend(inside(ra, rb))
        out.extend(inverse(spiral(b)))
    return canonical_cyclic(out)


def sphere_half_twist(gamma: Sequence[int], eta: Sequence[int], n: int = 1) -> Word:
    """H_gamma^n(eta) for a curve gamma around two marked points."""
    gamma, eta = canonical_cyclic(gamma), canonical_cyclic(eta)
    if kind(gamma) != "nonsep":
        raise SurfaceError("NOT_NONSEP", "half twists need a 2|4 curve")
    if n == 0 or not eta or gamma == eta:
        return eta
    full, rest = divmod(abs(n), 2)
    sgn = 1 if n > 0 else -1
    if full:
        eta = sphere_twist(gamma, eta, sgn * full)
    if rest:
        eta = _half_once(gamma, eta, sgn)
    return eta


def artin(i: int, w: Sequence[int], inverse_move: bool = False) -> Word:
    """Braid generator swapping p_i and p_(i+1), acting on a cyclic word."""
    def img(x: int) -> list[int]:
        j = abs(x)
        if j != i:
            out = [j]
        else:
            hi = [i + 1] if i < NARCS else []
            if inverse_move:
                out = ([i - 1] if i > 1 else []) + [-i] + hi
            else:
                out = hi + [-i] + ([i - 1] if i > 1 else [])
        return out if x > 0 else list(inverse(out))

    res: list[int] = []
    for x in w:
        res.extend(img(x))
    return canonical_cyclic(res)


# ------------------------------------------------- normal coordinates
#
# Fan triangulation of R: decagon vertices v0..v9 are the marked points
# p1,p2,p3,p4,p5,p6,p5,p4,p3,p2; side s joins v_s to v_(s+1); diagonals
# v0-v_j for j = 2..8.  Edge indices: 0..4 are the arcs e1..e5 and 3+j is
# the diagonal v0-v_j.  Triangles are (v0, v_j, v_(j+1)) for j = 1..8.

NEDGES = NARCS + 7
DIAGONALS = tuple(range(2, 9))


def side_edge(s: int) -> int:
    """Edge index of polygon side s."""
    return s if s < NARCS else NSIDES - 1 - s


def diagonal_edge(j: int) -> int:
    return 3 + j


def _side_letter(s: int) -> int:
    """Letter recorded when a path leaves R through side s."""
    return -(s + 1) if s < NARCS else NSIDES - s


def _word_coordinates(w: Word) -> list[int]:
    x = [0] * NEDGES
    n = len(w)
    for k in range(n):
        x[abs(w[k]) - 1] += 1
        a, b = arrive_side(w[k]), exit_side(w[(k + 1) % n])
        for j in DIAGONALS:
            if (a < j) != (b < j):
                x[diagonal_edge(j)] += 1
    return x


def _triangles() -> list[tuple[tuple[str, int], tuple[str, int], tuple[str, int]]]:
    """Edges (A, B, C) of triangle j: A = v0v_j, B = v_jv_(j+1), C = v0v_(j+1)."""
    out = []
    for j in range(1, 9):
        A = ("s", 0) if j == 1 else ("d", j)
        C = ("s", 9) if j == 8 else ("d", j + 1)
        out.append((A, ("s", j), C))
    return out


TRIANGLES = _triangles()


def _weight(x: Sequence[int], e: tuple[str, int]) -> int:
    return x[side_edge(e[1])] if e[0] == "s" else x[diagonal_edge(e[1])]


def _trace(x: Sequence[int]) -> list[Word]:
    """Split normal coordinates into the words of their components."""
    if len(x) != NEDGES or any(v < 0 for v in x):
        raise SurfaceError("NON_NORMAL", "need twelve non-negative weights")
    # arcs[(edge, pos)] lists the normal-arc neighbours of a point; points
    # on a side are ordered from v_s, on a diagonal from v0.
    arcs: dict[tuple, list[tuple]] = {}

    def fix(p: tuple) -> tuple:
        # side 9 runs v9 -> v0 but the fan counts its points from v0
        if p[0] == ("s", 9):
            return (p[0], x[0] - 1 - p[1])
        return p

    def join(p: tuple, q: tuple) -> None:
        p, q = fix(p), fix(q)
        arcs.setdefault(p, []).append(q)
        arcs.setdefault(q, []).append(p)

    for A, B, C in TRIANGLES:
        a, b, c = _weight(x, A), _weight(x, B), _weight(x, C)
        if (a + b + c) % 2 or a > b + c or b > a + c or c > a + b:
            raise SurfaceError("NON_NORMAL", f"triangle weights {(a, b, c)}")
        c0, cj = (a + c - b) // 2, (a + b - c) // 2
        c1 = (b + c - a) // 2
        for r in range(c0):
            join((A, r), (C, r))
        for t in range(cj):
            join((A, a - 1 - t), (B, t))
        for t in range(c1):
            join((B, b - 1 - t), (C, c - 1 - t))

    def glued(p: tuple) -> tuple:
        (_, s), r = p
        w = x[side_edge(s)]
        mate = NSIDES - 1 - s
        return (("s", mate), w - 1 - r)

    seen: set = set()
    words: list[Word] = []
    for start in sorted(arcs):
        if start in seen or start[0][0] != "s":
            continue
        word: list[int] = []
        p = start
        while True:
            # p is a point where the path enters R through a side
            seen.add(p)
            prev, q = p, arcs[p][0]
            while q[0][0] == "d":
                seen.add(q)
                nxt = arcs[q][0] if arcs[q][0] != prev else arcs[q][1]
                prev, q = q, nxt
            seen.add(q)
            word.append(_side_letter(q[0][1]))
            p = glued(q)
            if p == start:
                break
        words.append(tuple(word))
    return words


def _parts_from_words(words: Iterable[Sequence[int]]) -> tuple[tuple[Word, int], ...]:
    counts: dict[Word, int] = {}
    for w in words:
        w = canonical_cyclic(w)
        if kind(w) in ("trivial", "peripheral"):
            continue
        counts[w] = counts.get(w, 0) + 1
    return tuple(sorted(counts.items()))


# ----------------------------------------------------- classes on Σ


@dataclass(frozen=True)
class MulticurveClass:
    """Isotopy class of a multicurve on Σ.

    ``edges`` are the normal coordinates of its image in the quotient
    sphere (one weight per edge of the fan triangulation, twelve in all).
    Each non-separating component α is stored through the 2|4 curve it
    double covers, each separating one through its 3|3 image.  Trivial and
    peripheral pieces are stripped, so equal coordinates mean equal classes.
    """

    edges: tuple[int, ...]
    model: str = field(default=MODEL_ID, compare=False)

    @functools.cached_property
    def parts(self) -> tuple[tuple[Word, int], ...]:
        """(curve word, multiplicity) pairs."""
        return _parts_from_words(_trace(self.edges))

    @property
    def is_empty(self) -> bool:
        return not any(self.edges)

    @property
    def is_curve(self) -> bool:
        return len(self.parts) == 1 and self.parts[0][1] == 1

    @property
    def word(self) -> Word:
        """Quotient word of a single curve."""
        if not self.is_curve:
            raise SurfaceError("NOT_SINGLE", "expected one simple closed curve")
        return self.parts[0][0]

    @property
    def kind(self) -> str:
        """'nonsep' or 'sep' for a single curve."""
        return kind(self.word)

    @classmethod
    def from_word(cls, w: Sequence[int]) -> "MulticurveClass":
        return cls.from_words([w])

    @classmethod
    def from_words(cls, words: Iterable[Sequence[int]]) -> "MulticurveClass":
        x = [0] * NEDGES
        for w, m in _parts_from_words(words):
            for e, v in enumerate(_word_coordinates(w)):
                x[e] += m * v
        return cls(tuple(x))

    def to_json(self) -> str:
        return json.dumps({"edges": list(self.edges), "model": self.model})

    @classmethod
    def from_json(cls, s: str) -> "MulticurveClass":
        d = json.loads(s)
        if d.get("model") != MODEL_ID:
            raise SurfaceError("MODEL_MISMATCH", f"model {d.get('model')!r}")
        return canonicalize(d["edges"])

    def __repr__(self) -> str:
        return f"MulticurveClass({list(self.edges)})"


def canonicalize(raw: Sequence[int]) -> MulticurveClass:
    """Canonical class of raw normal coordinates (raises NON_NORMAL)."""
    return MulticurveClass.from_words(_trace([int(v) for v in raw]))


def components(c: MulticurveClass) -> list[MulticurveClass]:
    out = []
    for w, m in c.parts:
        out.extend([MulticurveClass.from_word(w)] * m)
    return out


def curve(w: Sequence[int]) -> MulticurveClass:
    """Single curve from its quotient word; rejects anything else."""
    c = MulticurveClass.from_word(w)
    if not c.is_curve:
        raise SurfaceError("NOT_SINGLE", f"{tuple(w)} is not an essential curve")
    return c


GENERATOR_WORDS = {
    "a1": round_curve(1, 2),
    "b1": round_curve(2, 3),
    "a2": round_curve(4, 5),
    "b2": round_curve(5, 6),
}
# Humphries chain: lifts of the round curves around consecutive points.
CHAIN_WORDS = tuple(round_curve(i, i + 1) for i in range(1, NPUNCT))


def generator(name: str) -> MulticurveClass:
    return curve(GENERATOR_WORDS[name])


def separating_curve() -> MulticurveClass:
    """Boundary of a neighbourhood of a1 ∪ b1."""
    return curve(round_curve(1, 3))


def _scale(ka: str, kb: str) -> tuple[int, int]:
    """i_Σ = i_S * num / den for the given kinds."""
    n = (ka == "sep") + (kb == "sep")
    return {0: (1, 2), 1: (1, 1), 2: (2, 1)}[n]


def intersection_number(c1: MulticurveClass, c2: MulticurveClass) -> int:
    """Geometric intersection number on Σ (additive over components)."""
    total = 0
    for u, m in c1.parts:
        for v, n in c2.parts:
            if u == v:
                continue
            num, den = _scale(kind(u), kind(v))
            total += m * n * sphere_intersection(u, v) * num // den
    return total


# ------------------------------------------------------------ twists


def _round_index(w: Word) -> int | None:
    for i, r in enumerate(CHAIN_WORDS, start=1):
        if w == r:
            return i
    return None


def _half_twist_word(gamma: Word, eta: Word, n: int) -> Word:
    i = _round_index(gamma)
    if i is None:
        return sphere_half_twist(gamma, eta, n)
    # the braid generator sigma_i^-1 is the positive half twist
    for _ in range(abs(n)):
        eta = artin(i, eta, inverse_move=(n > 0) == LEFT_TWIST)
    return eta


def dehn_twist(alpha: MulticurveClass, n: int, c: MulticurveClass) -> MulticurveClass:
    """T_alpha^n(c).

    A twist about a non-separating α is the half twist about its 2|4 image;
    a twist about a separating curve is the square of the full twist about
    its 3|3 image.
    """
    g = alpha.word
    if n == 0:
        return c
    if kind(g) == "nonsep":
        f = lambda w: _half_twist_word(g, w, n)
    else:
        f = lambda w: sphere_twist(g, w, 2 * n)
    words = []
    for w, m in c.parts:
        words.extend([f(w)] * m)
    return MulticurveClass.from_words(words)


@dataclass(frozen=True)
class MappingClassWord:
    """Product of Dehn twists; the rightmost factor acts first."""

    factors: tuple[tuple[MulticurveClass, int], ...] = ()

    def __post_init__(self):
        for a, e in self.factors:
            if not a.is_curve or e == 0:
                raise SurfaceError("BAD_FACTOR", "factors are (curve, nonzero exponent)")

    def __matmul__(self, other: "MappingClassWord") -> "MappingClassWord":
        return MappingClassWord(self.factors + other.factors)

    def inverse(self) -> "MappingClassWord":
        return MappingClassWord(tuple((a, -e) for a, e in reversed(self.factors)))

    def __call__(self, c: MulticurveClass) -> MulticurveClass:
        return apply(self, c)

    def __len__(self) -> int:
        return len(self.factors)


def apply(phi: MappingClassWord, c: MulticurveClass) -> MulticurveClass:
    for a, e in reversed(phi.factors):
        c = dehn_twist(a, e, c)
    return c


def random_word(rng: random.Random, length: int) -> MappingClassWord:
    """Random word of chain twists with exponents ±1."""
    chain = [curve(w) for w in CHAIN_WORDS]
    return MappingClassWord(
        tuple((rng.choice(chain), rng.choice((1, -1))) for _ in range(length))
    )


def random_curve(seed: int, bound: int) -> MulticurveClass:
    """Image of a generator curve under a random word of `bound` chain twists."""
    if bound < 0:
        raise SurfaceError("BAD_BOUND", "bound must be non-negative")
    rng = random.Random(seed)
    start = generator(rng.choice(sorted(GENERATOR_WORDS)))
    return apply(random_word(rng, bound), start)


# ---------------------------------------------------------- π₁ and H₁
#
# Upstairs letters: 1 = a1, 2 = b1, 3 = a2, 4 = b2.  Cutting Σ along the
# lifts of e1..e5 leaves two decagons R0, R1 (the sheets); crossing a lift
# of e_i with an odd index swaps sheets.  E[(i, s)] is the π₁ element of
# crossing the lift of e_i upward out of sheet s, with the lift of e3 out of
# sheet 1 chosen as the tree edge joining the two sheets.

UPSTAIRS_NAMES = {1: "a1", 2: "b1", 3: "a2", 4: "b2"}
SURFACE_RELATOR: Word = (1, 2, -1, -2, 3, 4, -3, -4)

E_TABLE: dict[tuple[int, int], Word] = {
    (1, 0): (-2,),
    (1, 1): (2,),
    (2, 0): (1,),
    (2, 1): (2, -1, -2),
    (3, 0): (1, 2, -1, -2),
    (3, 1): (),
    (4, 0): (4,),
    (4, 1): (3, -4, -3),
    (5, 0): (-3,),
    (5, 1): (3,),
}


def lift_letters(w: Sequence[int], sheet: int = 0) -> tuple[list[tuple[int, int, int]], int]:
    """Lift a quotient path starting in `sheet`.

    Returns [(i, s, ±1)] (arc, sheet below, direction) and the final sheet.
    """
    out = []
    for x in w:
        i = abs(x)
        flip = i % 2
        if x > 0:
            out.append((i, sheet, 1))
            sheet ^= flip
        else:
            sheet ^= flip
            out.append((i, sheet, -1))
    return out, sheet


def lift_word(w: Sequence[int]) -> Word:
    """Closed lift of a quotient curve as a word in a1, b1, a2, b2 (unreduced
    by the surface relation)."""
    w = tuple(w)
    steps, end = lift_letters(w)
    if end != 0:
        more, end = lift_letters(w, end)
        steps += more
    out: list[int] = []
    for i, s, d in steps:
        piece = E_TABLE[(i, s)]
        out.extend(piece if d > 0 else inverse(piece))
    return cyclic_reduce(out)


def _relator_pieces() -> list[Word]:
    r = SURFACE_RELATOR
    out = []
    for base in (r, inverse(r)):
        for k in range(len(base)):
            out.append(base[k:] + base[:k])
    return out


_RELATOR_ROTATIONS = _relator_pieces()


def dehn_reduce(w: Sequence[int]) -> Word:
    """Cyclic Dehn's algorithm for the genus-2 surface group.

    Replaces any cyclic subword that is more than half of a relator by the
    inverse of the remaining part, until none is left.  The result is empty
    iff the word is trivial in π₁(Σ).
    """
    w = list(cyclic_reduce(w))
    L = len(SURFACE_RELATOR)
    changed = True
    while changed and w:
        changed = False
        n = len(w)
        for rot in _RELATOR_ROTATIONS:
            for start in range(n):
                k = 0
                while k < min(n, L) and w[(start + k) % n] == rot[k]:
                    k += 1
                if 2 * k > L:
                    repl = list(inverse(rot[k:]))
                    rest = [w[(start + k + t) % n] for t in range(n - k)]
                    w = list(cyclic_reduce(repl + rest))
                    changed = True
                    break
            if changed:
                break
    return tuple(w)


def pi1_word(c: MulticurveClass) -> Word:
    """Free-homotopy class of a curve as a cyclic word in a1, b1, a2, b2.

    Dehn-reduced, then the least rotation of the word or its inverse.
    Orientation is not part of a MulticurveClass, so w and w^-1 agree.
    """
    return canonical_cyclic(dehn_reduce(lift_word(c.word)))


def format_upstairs(w: Sequence[int]) -> str:
    if not w:
        return "1"
    return " ".join(UPSTAIRS_NAMES[abs(x)] + ("^-1" if x < 0 else "") for x in w)


def abelianize(w: Sequence[int]) -> tuple[int, int, int, int]:
    v = [0, 0, 0, 0]
    for x in w:
        v[abs(x) - 1] += 1 if x > 0 else -1
    return tuple(v)


def _sign_normalize(v: Sequence[int]) -> tuple[int, ...]:
    for t in v:
        if t:
            return tuple(v) if t > 0 else tuple(-u for u in v)
    return tuple(v)


def homology_class(c: MulticurveClass, orientation: int = 1) -> tuple[int, int, int, int]:
    """Class in H₁(Σ) in the basis (a1, b1, a2, b2).

    orientation=+1 picks the representative whose first nonzero entry is
    positive; -1 the opposite one.
    """
    v = _sign_normalize(abelianize(lift_word(c.word)))
    return tuple(orientation * t for t in v)


def algebraic_intersection(u: Sequence[int], v: Sequence[int]) -> int:
    """Symplectic pairing with <a_k, b_k> = 1."""
    return u[0] * v[1] - u[1] * v[0] + u[2] * v[3] - u[3] * v[2]


# -------------------------------------------------------- the model


@dataclass(frozen=True)
class SurfaceModel:
    """Triangulation of Σ lifted from the fan triangulation of the sphere.

    Vertices are the six branch points.  Edge (e, s) is the lift of quotient
    edge e lying in sheet s (for an arc: the sheet below it).  Triangle
    (j, s) is fan triangle j in sheet s, listed counterclockwise as
    edge-sides (edge, sheet).
    """

    model_id: str = MODEL_ID

    @functools.cached_property
    def triangles(self) -> dict[tuple[int, int], tuple[tuple[int, int], ...]]:
        out = {}
        for s in (0, 1):
            for j, (A, B, C) in enumerate(TRIANGLES, start=1):
                out[(j, s)] = tuple(self._lift_side(e, s) for e in (A, B, C))
        return out

    @staticmethod
    def _lift_side(e: tuple[str, int], sheet: int) -> tuple[int, int]:
        kind_, k = e
        if kind_ == "d":
            return (diagonal_edge(k), sheet)
        i = side_edge(k) + 1
        if k >= NARCS:  # bottom side of e_i: this sheet lies below it
            return (i - 1, sheet)
        return (i - 1, sheet ^ (i % 2))  # top side: the sheet below differs

    @functools.cached_property
    def edges(self) -> list[tuple[int, int]]:
        return [(e, s) for e in range(NEDGES) for s in (0, 1)]

    @property
    def vertices(self) -> list[int]:
        return list(range(1, NPUNCT + 1))

    def euler_characteristic(self) -> int:
        return len(self.vertices) - len(self.edges) + len(self.triangles)

    def edge_incidences(self) -> dict[tuple[int, int], int]:
        count = {e: 0 for e in self.edges}
        for sides in self.triangles.values():
            for e in sides:
                count[e] += 1
        return count

    def is_connected(self) -> bool:
        adj: dict = {}
        for t, sides in self.triangles.items():
            for e in sides:
                adj.setdefault(e, []).append(t)
        start = next(iter(self.triangles))
        seen, todo = {start}, [start]
        while todo:
            t = todo.pop()
            for e in self.triangles[t]:
                for u in adj[e]:
                    if u not in seen:
                        seen.add(u)
                        todo.append(u)
        return len(seen) == len(self.triangles)

    def is_orientable(self) -> bool:
        """Each edge is traversed once in each direction by the
        counterclockwise triangle boundaries."""
        label = (1, 2, 3, 4, 5, 6, 5, 4, 3, 2)
        seen: dict = {}
        for (j, s), sides in self.triangles.items():
            corners = (0, j, (j + 1) % NSIDES)
            for t, e in enumerate(sides):
                a, b = corners[t], corners[(t + 1) % 3]
                if t == 2:
                    a, b = corners[2], corners[0]
                seen.setdefault(e, []).append((label[a], label[b]))
        return all(len(v) == 2 and v[0] == v[1][::-1] for v in seen.values())

    def generator_words(self) -> dict[str, Word]:
        """Quotient words of the generator curves."""
        return dict(GENERATOR_WORDS)

    def relation_is_trivial(self) -> bool:
        return dehn_reduce(SURFACE_RELATOR) == ()

    def branch_loops_trivial(self) -> bool:
        """A loop twice around each marked point lifts to a trivial loop."""
        for j in range(1, NPUNCT + 1):
            g = ([-(j - 1)] if j > 1 else []) + ([j] if j < NPUNCT else [])
            if dehn_reduce(lift_word(free_reduce(g + g))) != ():
                return False
        return True
