"""The genus-2 handlebody bounded by Σ: meridians, cut systems, waves.

π₁ of the handlebody is free on x, y; the boundary map sends a1 ↦ x,
b1 ↦ 1, a2 ↦ y, b2 ↦ 1.  A curve is a meridian iff its π₁ word dies in
⟨x, y⟩ (Dehn's lemma).

Waves are found in the quotient sphere.  The images γ1, γ2 of a cut system
bound disjoint disks D1, D2 with two marked points each; the remaining two
points q1, q2 lie in the region P between them, and Σ − (α1 ∪ α2) is the
double cover of P.  An arc of β in P from γ_i back to γ_i lifts to an arc
joining one boundary circle of the cut surface to itself iff it crosses
the sheet-swapping arcs an even number of times when closed up along γ_i.
Its two lifts are the waves b⁺ and b⁻ at the two sides of α_i.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from .surface import (
    Drawing,
    MappingClassWord,
    MulticurveClass,
    SurfaceError,
    Word,
    abelianize,
    apply,
    canonical_cyclic,
    crossing_table,
    curve,
    cyclic_reduce,
    dehn_twist,
    free_reduce,
    generator,
    homology_class,
    intersection_number,
    inverse,
    kind,
    path_letters,
    pi1_word,
    puncture_split,
    round_curve,
    small_side,
)

# F2 letters: 1 = x, 2 = y
F2_IMAGE: dict[int, Word] = {1: (1,), 2: (), 3: (2,), 4: ()}

# Band sum of b1 and b2: the meridian around p1, p4 missing both.
BAND_WORD: Word = (1, -3, 4)
# Boundary of a neighbourhood of a1 ∪ b1, bounding a separating disk.
SEPARATING_MERIDIAN_WORD: Word = round_curve(1, 3)


class HandlebodyError(ValueError):
    def __init__(self, code: str, message: str = ""):
        super().__init__(f"{code}: {message}" if message else code)
        self.code = code


def f2_image(w: Sequence[int]) -> Word:
    """Image of a π₁(Σ) word in π₁(V) = ⟨x, y⟩, cyclically reduced."""
    out: list[int] = []
    for x in w:
        piece = F2_IMAGE[abs(x)]
        out.extend(piece if x > 0 else inverse(piece))
    return cyclic_reduce(free_reduce(out))


def is_meridian(c: MulticurveClass) -> bool:
    return f2_image(pi1_word(c)) == ()


@dataclass(frozen=True)
class HandlebodyStructure:
    images: tuple[tuple[str, str], ...] = (("a1", "x"), ("b1", "1"), ("a2", "y"), ("b2", "1"))

    @property
    def base(self) -> "CutSystem":
        return CutSystem(generator("b1"), generator("b2"))

    def relation_image(self) -> Word:
        from .surface import SURFACE_RELATOR

        return f2_image(SURFACE_RELATOR)


@dataclass(frozen=True)
class CutSystem:
    alpha1: MulticurveClass
    alpha2: MulticurveClass

    @property
    def curves(self) -> tuple[MulticurveClass, MulticurveClass]:
        return (self.alpha1, self.alpha2)

    def replace(self, i: int, c: MulticurveClass) -> "CutSystem":
        cs = list(self.curves)
        cs[i] = c
        return CutSystem(*cs)

    def unordered(self) -> frozenset:
        return frozenset(self.curves)

    def intersection(self, beta: MulticurveClass) -> int:
        return sum(intersection_number(a, beta) for a in self.curves)

    def to_json(self) -> list:
        return [{"edges": list(a.edges), "model": a.model} for a in self.curves]


def base_cut_system() -> CutSystem:
    return HandlebodyStructure().base


def _mod2(v: Sequence[int]) -> tuple[int, ...]:
    return tuple(x % 2 for x in v)


def complement_connected(curves: Sequence[MulticurveClass]) -> bool:
    """Σ minus disjoint curves is connected iff no nonempty subfamily is
    null-homologous mod 2."""
    hs = [_mod2(homology_class(c)) for c in curves]
    n = len(hs)
    for mask in range(1, 1 << n):
        s = [0, 0, 0, 0]
        for k in range(n):
            if mask >> k & 1:
                s = [(a + b) % 2 for a, b in zip(s, hs[k])]
        if not any(s):
            return False
    return True


def is_cut_system(a1: MulticurveClass, a2: MulticurveClass) -> bool:
    if not (a1.is_curve and a2.is_curve) or a1 == a2:
        return False
    if intersection_number(a1, a2) != 0:
        return False
    if not (is_meridian(a1) and is_meridian(a2)):
        return False
    return complement_connected([a1, a2])


# --------------------------------------------------------------- waves


@dataclass(frozen=True)
class Wave:
    """A wave of β with respect to a cut system.

    ``base`` is the index of the cut curve it starts and ends on, ``side``
    picks the boundary circle α_base^± of the cut surface.  The arc class
    is recorded by the two curves obtained by closing it up along either
    piece of α_base (quotient words): one is parallel to the other cut
    curve, the other is the surgery curve.
    """

    base: int
    side: int
    loops: tuple[Word, Word]
    arc: Word = field(default=(), compare=False)

    def separates(self, Z: CutSystem) -> bool:
        """The arc cuts the four-holed sphere into an annulus around one
        side of the other cut curve and a pair of pants."""
        other = Z.curves[1 - self.base].word
        q = _free_points(Z)
        a, b = self.loops
        ok = lambda u, v: u == other and kind(v) == "nonsep" and small_side(v) == q
        return ok(a, b) or ok(b, a)


def _free_points(Z: CutSystem) -> frozenset[int]:
    used = small_side(Z.alpha1.word) | small_side(Z.alpha2.word)
    return frozenset(range(1, 7)) - used


def _sheet_parity(w: Sequence[int]) -> int:
    return sum(1 for x in w if abs(x) % 2) % 2


def _disk_on_left(g: Word) -> bool:
    left, _ = puncture_split(g)
    return len(left) == 2


def wave_arcs(Z: CutSystem, beta: MulticurveClass) -> list[Wave]:
    """Every arc of β in the cut surface that is a wave, one Wave (side +1)
    per quotient arc."""
    g = [a.word for a in Z.curves]
    e = beta.word
    if any(kind(w) != "nonsep" for w in g):
        raise HandlebodyError("NOT_CUT_SYSTEM", "cut curves must be non-separating")
    if Z.intersection(beta) == 0:
        raise HandlebodyError("DISJOINT", "β misses the cut system")
    d = Drawing([g[0], g[1], e])
    events = []
    for i in (0, 1):
        left = _disk_on_left(g[i])
        for c in crossing_table(d, i, 2):
            events.append((c["epos"], i, c["gpos"], c["e_r2l"] == left))
    events.sort(key=lambda t: t[0])
    out = []
    n = len(events)
    for k in range(n):
        pa, ia, ga, inside = events[k]
        pb, ib, gb, _ = events[(k + 1) % n]
        if inside or ia != ib:
            continue
        arc = path_letters(e, pa, pb)
        one = arc + path_letters(g[ia], gb, ga)
        two = arc + list(inverse(path_letters(g[ia], ga, gb)))
        if _sheet_parity(one) % 2:
            continue  # lifts join α_i^+ to α_i^-
        loops = tuple(canonical_cyclic(cyclic_reduce(free_reduce(w))) for w in (one, two))
        if any(kind(w) in ("trivial", "peripheral") for w in loops):
            continue  # inessential in the cut surface
        out.append(Wave(ia, 1, tuple(sorted(loops)), tuple(arc)))
    return out


def find_waves(Z: CutSystem, beta: MulticurveClass) -> list[Wave]:
    """The two wave classes b⁺, b⁻ of a meridian β."""
    arcs = wave_arcs(Z, beta)
    classes = {(w.base, w.loops) for w in arcs}
    if len(classes) != 1:
        raise HandlebodyError("WAVE_UNIQUENESS", f"{len(classes)} wave classes on one side")
    w = arcs[0]
    return [w, Wave(w.base, -1, w.loops, w.arc)]


def surgery(Z: CutSystem, w: Wave) -> CutSystem:
    """Replace the based cut curve by whichever closed-up arc gives a cut
    system."""
    results = []
    for loop in w.loops:
        try:
            c = curve(loop)
        except SurfaceError:
            continue
        Zn = Z.replace(w.base, c)
        if is_cut_system(*Zn.curves):
            results.append(Zn)
    if len(results) != 1:
        raise HandlebodyError("INVALID_WAVE", f"{len(results)} valid replacements")
    return results[0]


def surgery_sequence(Z: CutSystem, beta: MulticurveClass) -> list[CutSystem]:
    seq = [Z]
    while seq[-1].intersection(beta) > 0:
        seq.append(surgery(seq[-1], find_waves(seq[-1], beta)[0]))
    return seq


# ------------------------------------------------ handlebody elements


def meridian_pool() -> list[MulticurveClass]:
    """Pairwise disjoint meridians: b1, b2, their band sum and the
    separating meridian."""
    return [generator("b1"), generator("b2"), curve(BAND_WORD), curve(SEPARATING_MERIDIAN_WORD)]


# (α, β, δ) bounding a pair of pants with δ a meridian; α, β are not.
ANNULUS_PANTS: tuple[tuple[Word, Word, Word], ...] = (
    (round_curve(4, 5), round_curve(2, 5), round_curve(2, 3)),
    (round_curve(1, 2), round_curve(3, 4), round_curve(5, 6)),
)


def handlebody_generators() -> list[MappingClassWord]:
    """Twists about the pool meridians and the annulus twists T_α T_β⁻¹."""
    gens = [MappingClassWord(((m, 1),)) for m in meridian_pool()]
    for a, b, _ in ANNULUS_PANTS:
        gens.append(MappingClassWord(((curve(a), 1), (curve(b), -1))))
    return gens


def random_handlebody_word(rng: random.Random, length: int) -> MappingClassWord:
    gens = handlebody_generators()
    out = MappingClassWord()
    for _ in range(length):
        g = rng.choice(gens)
        out = out @ (g if rng.random() < 0.5 else g.inverse())
    return out


def random_meridian(seed: int, bound: int, separating: bool = False) -> MulticurveClass:
    rng = random.Random(seed)
    start = curve(SEPARATING_MERIDIAN_WORD) if separating else rng.choice(meridian_pool()[:3])
    return apply(random_handlebody_word(rng, bound), start)


def random_cut_system(seed: int, bound: int) -> CutSystem:
    rng = random.Random(seed)
    phi = random_handlebody_word(rng, bound)
    Z = base_cut_system()
    return CutSystem(apply(phi, Z.alpha1), apply(phi, Z.alpha2))


def bound_pants(a: MulticurveClass, b: MulticurveClass, d: MulticurveClass) -> bool:
    """Do three disjoint curves on Σ cobound a pair of pants?

    On genus 2 this happens exactly when they are three distinct
    non-separating curves, or one separating curve and two parallel copies
    of a non-separating curve on one side of it.
    """
    cs = [a, b, d]
    if not all(c.is_curve for c in cs):
        return False
    for x in range(3):
        for y in range(x + 1, 3):
            if intersection_number(cs[x], cs[y]):
                return False
    seps = [c for c in cs if c.kind == "sep"]
    rest = [c for c in cs if c.kind != "sep"]
    if not seps:
        return len(set(cs)) == 3
    return len(seps) == 1 and rest[0] == rest[1]


def annulus_twist_check(alpha: MulticurveClass, beta: MulticurveClass, delta: MulticurveClass,
                        samples: int = 200, seed: int = 0, bound: int = 3) -> bool:
    """Check that T_α T_β⁻¹ maps sampled meridians to meridians."""
    if not bound_pants(alpha, beta, delta):
        raise HandlebodyError("BAD_PANTS", "curves do not cobound a pair of pants")
    if not is_meridian(delta):
        raise HandlebodyError("NOT_MERIDIAN", "δ must bound a disk")
    phi = MappingClassWord(((alpha, 1), (beta, -1)))
    rng = random.Random(seed)
    for _ in range(samples):
        m = random_meridian(rng.randrange(1 << 30), rng.randint(0, bound), rng.random() < 0.2)
        if not is_meridian(apply(phi, m)):
            return False
    return True


def twist_preserves_meridians(m: MulticurveClass, samples: int, seed: int = 0) -> bool:
    rng = random.Random(seed)
    for _ in range(samples):
        x = random_meridian(rng.randrange(1 << 30), rng.randint(0, 3))
        if not is_meridian(dehn_twist(m, rng.choice((1, -1)), x)):
            return False
    return True


def homology_mod2(c: MulticurveClass) -> tuple[int, ...]:
    return _mod2(abelianize(pi1_word(c)))
