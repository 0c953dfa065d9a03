"""Annular projections about non-separating meridians.

The relative twisting of β₂ against β₁ around α is read off the function
f(n) = i(T_α^n β₁, β₂).  For large |n| it is linear of slope
s = i(α, β₁)·i(α, β₂) on both sides, f(n) = s·|n − t| + e, and the kink t
is the relative winding of the two projections in the annular cover.
The distance d_α is |t| rounded, so d_α(β, T_α^n β) = |n| exactly.

As a second route the integer minimizer of f (f is convex in n) must sit
within one of t; `RelativeTwist.consistent` checks it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import floor
from typing import Sequence

from .pantsgraph import PantsVertex, orbit_argmin
from .surface import MulticurveClass, dehn_twist, intersection_number


class AnnularError(ValueError):
    def __init__(self, code: str, message: str = ""):
        super().__init__(f"{code}: {message}" if message else code)
        self.code = code


@lru_cache(maxsize=100_000)
def _f(alpha: MulticurveClass, beta1: MulticurveClass, beta2: MulticurveClass, n: int) -> int:
    return intersection_number(dehn_twist(alpha, n, beta1), beta2)


@dataclass(frozen=True)
class RelativeTwist:
    """Twisting of β₂ relative to β₁ around α."""

    kink: Fraction  # t in f(n) = s|n - t| + e for |n| large
    argmin: int  # least-|n| minimizer of f
    slope: int  # s = i(α, β₁)·i(α, β₂)

    @property
    def consistent(self) -> bool:
        return abs(self.kink - self.argmin) <= 1


def _check(alpha: MulticurveClass, beta: MulticurveClass) -> int:
    k = intersection_number(alpha, beta)
    if k == 0:
        raise AnnularError("UNDEFINED_PROJECTION", "curve misses the core")
    return k


def orbit_representative(alpha: MulticurveClass, beta: MulticurveClass) -> tuple[int, MulticurveClass]:
    """(k, β′) with β = T_α^k β′ and β′ locally shortest in its twist orbit.

    Length along the orbit is eventually linear, so after one step the
    remaining distance to the bottom is estimated and jumped (halving on
    overshoot); only a few twists are applied to a long word.
    """
    k, cur, size = 0, beta, len(beta.word)
    while True:
        steps = {d: dehn_twist(alpha, d, cur) for d in (-1, 1)}
        d = min(steps, key=lambda e: (len(steps[e].word), e))
        nxt = steps[d]
        if len(nxt.word) >= size:
            return -k, cur
        drop = size - len(nxt.word)
        j = max(1, len(nxt.word) // drop)
        while j > 1:
            far = dehn_twist(alpha, d * j, cur)
            if len(far.word) < len(nxt.word):
                nxt = far
                break
            j //= 2
        k += d * j
        cur, size = nxt, len(nxt.word)


def relative_twist(alpha: MulticurveClass, beta1: MulticurveClass, beta2: MulticurveClass) -> RelativeTwist:
    """Twisting shifts the kink exactly, so both curves are first replaced by
    short orbit representatives and the shift is added back."""
    s = _check(alpha, beta1) * _check(alpha, beta2)
    k1, b1 = orbit_representative(alpha, beta1)
    k2, b2 = orbit_representative(alpha, beta2)
    r = _relative_twist(alpha, b1, b2, s)
    return RelativeTwist(r.kink - k1 + k2, r.argmin - k1 + k2, s)


def _relative_twist(alpha: MulticurveClass, beta1: MulticurveClass, beta2: MulticurveClass, s: int) -> RelativeTwist:

    def f(n):
        return _f(alpha, beta1, beta2, n)

    m, _ = orbit_argmin(alpha, beta1, lambda c: (intersection_number(c, beta2),), ties="least")
    N = abs(m) + 2
    # widen until both sides are linear with the asymptotic slope
    while f(N + 1) - f(N) != s or f(-N - 1) - f(-N) != s:
        N += 2
        if N > abs(m) + 64:
            raise AnnularError("NOT_LINEAR", "twist orbit did not straighten")
    return RelativeTwist(Fraction(f(-N) - f(N), 2 * s), m, s)


def round_half_up(x: Fraction) -> int:
    return floor(x + Fraction(1, 2))


def annular_distance(alpha: MulticurveClass, beta1: MulticurveClass, beta2: MulticurveClass) -> int:
    """d_α(β₁, β₂); d_α(β, β) = 0."""
    return round_half_up(abs(relative_twist(alpha, beta1, beta2).kink))


def winding(alpha: MulticurveClass, ref: MulticurveClass, beta: MulticurveClass) -> Fraction:
    """Signed position of π_α(β) measured from π_α(ref)."""
    return relative_twist(alpha, ref, beta).kink


@dataclass(frozen=True)
class Profile:
    values: tuple[int | None, ...]  # None where α ∈ X_i
    interval: tuple[int, int] | None  # first and last index with α ∈ X_i

    @property
    def diameter(self) -> int:
        vs = [v for v in self.values if v is not None]
        return max(vs) - min(vs) if vs else 0

    @property
    def contiguous(self) -> bool:
        hits = [i for i, v in enumerate(self.values) if v is None]
        return not hits or hits == list(range(hits[0], hits[-1] + 1))

    def bounded_by(self, K: int) -> bool:
        """Diameter at most K on each side of the interval containing α."""
        if self.interval is None:
            return self.diameter <= K
        a, b = self.interval
        return all(Profile(part, None).diameter <= K for part in (self.values[:a], self.values[b + 1:]))

    def to_json(self) -> str:
        return json.dumps({"values": list(self.values), "interval": self.interval})


def _meeting(alpha: MulticurveClass, X: PantsVertex) -> MulticurveClass | None:
    hits = [c for c in X.curves if intersection_number(alpha, c)]
    return min(hits, key=lambda c: c.edges) if hits else None


def geodesic_projection_profile(alpha: MulticurveClass, path: Sequence[PantsVertex]) -> Profile:
    """Rounded winding of each vertex around α, measured from the first
    vertex that meets α."""
    reps = [None if alpha in X else _meeting(alpha, X) for X in path]
    ref = next((r for r in reps if r is not None), None)
    values = tuple(None if r is None else round_half_up(winding(alpha, ref, r)) for r in reps)
    hits = [i for i, r in enumerate(reps) if r is None]
    return Profile(values, (hits[0], hits[-1]) if hits else None)


def fit_K(profiles: Sequence[Profile]) -> int:
    """Smallest K with every profile K-bounded off its α-interval."""
    K = 0
    for p in profiles:
        while not p.bounded_by(K):
            K += 1
    return K
