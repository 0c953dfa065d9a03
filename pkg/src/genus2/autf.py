"""Free-group endomorphisms given by basis images.

Words are tuples of nonzero ints: ``k`` is the k-th basis letter and ``-k``
its inverse.  Letters 1, 2, 3 print as a, b, c; higher letters as x4, x5, ...

Besides explicit endomorphisms this module carries a compressed form for the
subgroup of automorphisms that act on <a, b> by a power of T and send
c to L c R with L, R in <a, b>.  The A/B/T word family lives there, which is
what makes n = 64 checkable: T^64(a) has about 10^27 letters.
"""

from __future__ import annotations

import re
import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence

Word = tuple[int, ...]


class RankMismatch(ValueError):
    code = "RANK_MISMATCH"


def reduce(w: Iterable[int]) -> Word:
    out: list[int] = []
    for x in w:
        if x == 0:
            raise ValueError("0 is not a letter")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def inverse(w: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(w))


def letter_name(k: int) -> str:
    k = abs(k)
    return "abc"[k - 1] if k <= 3 else f"x{k}"


def format_word(w: Sequence[int]) -> str:
    if not w:
        return "1"
    parts = []
    i = 0
    while i < len(w):
        j = i
        while j < len(w) and w[j] == w[i]:
            j += 1
        e = (j - i) * (1 if w[i] > 0 else -1)
        name = letter_name(w[i])
        parts.append(name if e == 1 else f"{name}^{e}")
        i = j
    return " ".join(parts)


_TOKEN = re.compile(r"(x\d+|[a-cA-C])(\^(-?\d+)|⁻¹)?")


def parse_word(s: str) -> Word:
    """Parse "a^2 b", "a a^-1 b", "aAb" or "x4^-1 c" into a reduced word."""
    s = s.replace(" ", "").replace("*", "").replace(".", "")
    out: list[int] = []
    pos = 0
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if not m:
            raise ValueError(f"cannot parse word at {s[pos:]!r}")
        name, exp = m.group(1), 1
        if m.group(2) == "⁻¹":
            exp = -1
        elif m.group(3) is not None:
            exp = int(m.group(3))
        if name.startswith("x"):
            k = int(name[1:])
        else:
            k = "abc".index(name.lower()) + 1
            if name.isupper():
                exp = -exp
        out.extend([k if exp > 0 else -k] * abs(exp))
        pos = m.end()
    return reduce(out)


def _check_word(w: Sequence[int], rank: int) -> None:
    for x in w:
        if not 1 <= abs(x) <= rank:
            raise RankMismatch(f"letter {x} outside rank {rank}")


@dataclass(frozen=True)
class BasisEndo:
    """Endomorphism x_i -> images[i-1] of the free group of the given rank."""

    rank: int
    images: tuple[Word, ...]
    inverse_images: tuple[Word, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        if len(self.images) != self.rank:
            raise RankMismatch("need one image per basis letter")
        for w in self.images:
            _check_word(w, self.rank)
        object.__setattr__(self, "images", tuple(reduce(w) for w in self.images))
        if self.inverse_images is not None:
            if len(self.inverse_images) != self.rank:
                raise RankMismatch("inverse witness has wrong length")
            object.__setattr__(
                self, "inverse_images", tuple(reduce(w) for w in self.inverse_images)
            )

    @classmethod
    def identity(cls, rank: int) -> BasisEndo:
        basis = tuple((i,) for i in range(1, rank + 1))
        return cls(rank, basis, basis)

    def __call__(self, w: Sequence[int]) -> Word:
        return apply_endo(self, w)

    def __matmul__(self, other: BasisEndo) -> BasisEndo:
        return compose(self, other)

    def is_identity(self) -> bool:
        return all(img == (i,) for i, img in enumerate(self.images, 1))

    def inverse(self) -> BasisEndo:
        if self.inverse_images is None:
            raise ValueError("no inverse witness stored")
        return BasisEndo(self.rank, self.inverse_images, self.images)

    def verify_inverse(self) -> bool:
        if self.inverse_images is None:
            return False
        inv = BasisEndo(self.rank, self.inverse_images)
        plain = BasisEndo(self.rank, self.images)
        return compose(plain, inv).is_identity() and compose(inv, plain).is_identity()

    def power(self, n: int) -> BasisEndo:
        base = self if n >= 0 else self.inverse()
        out = BasisEndo.identity(self.rank)
        for _ in range(abs(n)):
            out = compose(out, base)
        return out

    def __str__(self) -> str:
        return ", ".join(
            f"{letter_name(i)} -> {format_word(w)}" for i, w in enumerate(self.images, 1)
        )


def apply_endo(f: BasisEndo, w: Sequence[int]) -> Word:
    _check_word(w, f.rank)
    out: list[int] = []
    for x in w:
        img = f.images[x - 1] if x > 0 else inverse(f.images[-x - 1])
        for y in img:
            if out and out[-1] == -y:
                out.pop()
            else:
                out.append(y)
    return tuple(out)


def compose(f: BasisEndo, g: BasisEndo) -> BasisEndo:
    """f after g: the right factor acts first."""
    if f.rank != g.rank:
        raise RankMismatch(f"ranks {f.rank} and {g.rank}")
    images = tuple(apply_endo(f, w) for w in g.images)
    inv = None
    if f.inverse_images is not None and g.inverse_images is not None:
        finv = BasisEndo(f.rank, f.inverse_images)
        inv = tuple(apply_endo(BasisEndo(g.rank, g.inverse_images), w) for w in finv.images)
    return BasisEndo(f.rank, images, inv)


def conjugation(w: Sequence[int], rank: int) -> BasisEndo:
    """x -> w x w^-1."""
    w = reduce(w)
    _check_word(w, rank)
    imgs = tuple(reduce(w + (i,) + inverse(w)) for i in range(1, rank + 1))
    inv = tuple(reduce(inverse(w) + (i,) + w) for i in range(1, rank + 1))
    return BasisEndo(rank, imgs, inv)


def _extend(rank: int, first: Sequence[Word]) -> tuple[Word, ...]:
    return tuple(first) + tuple((i,) for i in range(len(first) + 1, rank + 1))


a, b, c = 1, 2, 3


def standard_generators(rank: int = 3) -> tuple[BasisEndo, BasisEndo, BasisEndo]:
    """A: c -> ac, B: c -> cb, T: a -> a^2 b, b -> ab; higher letters fixed."""
    if rank < 3:
        raise RankMismatch("the family needs rank at least 3")
    A = BasisEndo(rank, _extend(rank, [(a,), (b,), (a, c)]),
                  _extend(rank, [(a,), (b,), (-a, c)]))
    B = BasisEndo(rank, _extend(rank, [(a,), (b,), (c, b)]),
                  _extend(rank, [(a,), (b,), (c, -b)]))
    T = BasisEndo(rank, _extend(rank, [(a, a, b), (a, b), (c,)]),
                  _extend(rank, [(a, -b), (b, -a, b), (c,)]))
    return A, B, T


def beta_hat(rank: int = 3) -> BasisEndo:
    """a -> b a b^-1, b -> b, c -> b c."""
    return BasisEndo(rank, _extend(rank, [(b, a, -b), (b,), (b, c)]),
                     _extend(rank, [(-b, a, b), (b,), (-b, c)]))


def word_w_explicit(n: int, rank: int = 3) -> BasisEndo:
    A, B, T = standard_generators(rank)
    Tn, Tm = T.power(n), T.power(-n)
    factors = [Tn, A, Tm, B, Tn, A.inverse(), Tm, B.inverse()]
    out = BasisEndo.identity(rank)
    for f in factors:
        out = compose(out, f)
    return out


# Compressed form.  A factor (k, w) stands for T^k(w) with w in <a, b>.

Factor = tuple[int, Word]


def _push(prod: list[Factor], fac: Factor) -> None:
    k, w = fac
    if prod and prod[-1][0] == k:
        w = reduce(prod.pop()[1] + w)
    if w:
        prod.append((k, w))


def _normal(factors: Iterable[Factor]) -> tuple[Factor, ...]:
    out: list[Factor] = []
    for f in factors:
        _push(out, f)
    return tuple(out)


@dataclass(frozen=True)
class CompressedEndo:
    """a, b -> T^k(a), T^k(b); c -> L c R; letters above c fixed.

    L and R are formal products of factors T^j(w).  Adjacent factors with
    the same j are merged and reduced, which is exact free reduction after
    applying the automorphism T^-j.
    """

    rank: int
    k: int = 0
    left: tuple[Factor, ...] = ()
    right: tuple[Factor, ...] = ()

    def __matmul__(self, g: CompressedEndo) -> CompressedEndo:
        f = self
        if f.rank != g.rank:
            raise RankMismatch(f"ranks {f.rank} and {g.rank}")
        left = [(j + f.k, w) for j, w in g.left] + list(f.left)
        right = list(f.right) + [(j + f.k, w) for j, w in g.right]
        return CompressedEndo(f.rank, f.k + g.k, _normal(left), _normal(right))

    def is_identity(self) -> bool:
        return self.k == 0 and not self.left and not self.right

    def expand(self) -> BasisEndo:
        """Explicit images; only sensible for small twist exponents."""
        _, _, T = standard_generators(self.rank)
        cache: dict[int, BasisEndo] = {}

        def img(fs):
            out: Word = ()
            for j, w in fs:
                if j not in cache:
                    cache[j] = T.power(j)
                out = reduce(out + cache[j](w))
            return out

        Tk = T.power(self.k)
        cimg = reduce(img(self.left) + (c,) + img(self.right))
        return BasisEndo(self.rank, _extend(self.rank, [Tk.images[0], Tk.images[1], cimg]))


def compressed_generators(rank: int = 3) -> dict[str, CompressedEndo]:
    if rank < 3:
        raise RankMismatch("the family needs rank at least 3")
    return {
        "A": CompressedEndo(rank, 0, ((0, (a,)),), ()),
        "A-": CompressedEndo(rank, 0, ((0, (-a,)),), ()),
        "B": CompressedEndo(rank, 0, (), ((0, (b,)),)),
        "B-": CompressedEndo(rank, 0, (), ((0, (-b,)),)),
        "T": CompressedEndo(rank, 1),
        "T-": CompressedEndo(rank, -1),
    }


def family_letters(n: int) -> list[str]:
    """Generator spelling of T^n A T^-n B T^n A^-1 T^-n B^-1."""
    return (["T"] * n + ["A"] + ["T-"] * n + ["B"]
            + ["T"] * n + ["A-"] + ["T-"] * n + ["B-"])


def word_w(n: int, rank: int = 3) -> tuple[CompressedEndo, int]:
    if n < 0:
        raise ValueError("n must be non-negative")
    gens = compressed_generators(rank)
    letters = family_letters(n)
    out = CompressedEndo(rank)
    for name in letters:
        out = out @ gens[name]
    return out, len(letters)


def conjugated_A_commutes(n: int, rank: int = 3) -> bool:
    """T^n A T^-n and B commute, compared as compressed normal forms."""
    gens = compressed_generators(rank)
    P = CompressedEndo(rank)
    for name in ["T"] * n + ["A"] + ["T-"] * n:
        P = P @ gens[name]
    return P @ gens["B"] == gens["B"] @ P


def verify_words(max_n: int = 64, ranks: Iterable[int] = (3, 4, 5, 6),
                 explicit_up_to: int = 6) -> list[dict]:
    """Triviality and length of w_n; explicit composition cross-check for small n."""
    rows = []
    for rank in ranks:
        for n in range(max_n + 1):
            t0 = time.perf_counter()
            wn, length = word_w(n, rank)
            row = {
                "rank": rank,
                "n": n,
                "trivial": wn.is_identity(),
                "length": length,
                "length_ok": length == 4 * n + 4,
            }
            if n <= explicit_up_to:
                row["explicit_trivial"] = word_w_explicit(n, rank).is_identity()
            row["seconds"] = time.perf_counter() - t0
            rows.append(row)
    return rows


def verify_realization_lemmas(max_n: int = 64) -> dict:
    A, B, T = standard_generators(3)
    conj = conjugation((-b,), 3)
    report = {
        "conj_binv_beta_hat_is_B": compose(conj, beta_hat(3)) == B,
        "inverse_witnesses": all(g.verify_inverse() for g in (A, B, T, beta_hat(3))),
        "T_c_fixed": T((c,)) == (c,),
        "A_c": A((c,)) == (a, c),
        "B_c": B((c,)) == (c, b),
    }
    report["commutator_trivial"] = all(
        conjugated_A_commutes(n) for n in range(max_n + 1)
    )
    small = True
    for n in range(4):
        Tn = T.power(n)
        P = compose(compose(Tn, A), T.power(-n))
        small &= compose(P, B) == compose(B, P)
    report["commutator_explicit_small_n"] = small
    return report
