import pytest
from hypothesis import given, settings, strategies as st

from genus2.autf import (
    BasisEndo,
    CompressedEndo,
    RankMismatch,
    apply_endo,
    beta_hat,
    compose,
    compressed_generators,
    conjugated_A_commutes,
    conjugation,
    format_word,
    parse_word,
    reduce,
    standard_generators,
    verify_realization_lemmas,
    verify_words,
    word_w,
    word_w_explicit,
)


def words(rank, max_size=8):
    letters = [i for i in range(1, rank + 1)] + [-i for i in range(1, rank + 1)]
    return st.lists(st.sampled_from(letters), max_size=max_size).map(reduce)


def endos(rank):
    A, B, T = standard_generators(rank)
    pool = [A, B, T, A.inverse(), B.inverse(), T.inverse(), beta_hat(rank)]
    return st.lists(st.sampled_from(pool), min_size=1, max_size=4).map(_product)


def _product(fs):
    out = fs[0]
    for f in fs[1:]:
        out = compose(out, f)
    return out


def test_reduce_cancels():
    assert reduce(parse_word("a a^-1 b")) == parse_word("b")
    assert format_word(reduce(parse_word("a a^-1 b"))) == "b"
    assert reduce(()) == ()


def test_parse_and_format_round_trip():
    for s in ["a^2 b", "a^-1 c", "x4 b^-3", "1"]:
        w = parse_word(s) if s != "1" else ()
        assert format_word(w) == s


def test_T_on_a():
    _, _, T = standard_generators(3)
    assert format_word(T(parse_word("a"))) == "a^2 b"
    assert format_word(T(parse_word("b"))) == "a b"


def test_A_B_on_c():
    A, B, _ = standard_generators(3)
    assert format_word(A(parse_word("c"))) == "a c"
    assert format_word(B(parse_word("c"))) == "c b"


def test_higher_letters_fixed():
    A, B, T = standard_generators(5)
    for f in (A, B, T):
        assert f((4,)) == (4,)
        assert f((5,)) == (5,)


def test_inverse_witnesses():
    for rank in (3, 4, 6):
        for f in standard_generators(rank):
            assert f.verify_inverse()
            assert compose(f, f.inverse()).is_identity()
    assert beta_hat(3).verify_inverse()


def test_rank_mismatch():
    A3 = standard_generators(3)[0]
    A4 = standard_generators(4)[0]
    with pytest.raises(RankMismatch):
        compose(A3, A4)
    with pytest.raises(RankMismatch):
        apply_endo(A3, (4,))


def test_w0_is_trivial():
    assert word_w_explicit(0).is_identity()
    wn, length = word_w(0)
    assert wn.is_identity() and length == 4


@pytest.mark.parametrize("rank", [3, 4, 5, 6])
def test_family_trivial_and_length(rank):
    for n in range(65):
        wn, length = word_w(n, rank)
        assert wn.is_identity()
        assert length == 4 * n + 4


def test_compressed_matches_explicit():
    gens = compressed_generators(3)
    A, B, T = standard_generators(3)
    explicit = {"A": A, "A-": A.inverse(), "B": B, "B-": B.inverse(), "T": T, "T-": T.inverse()}
    seq = ["T", "A", "T", "B-", "T-", "A-", "B", "T"]
    comp, expl = CompressedEndo(3), BasisEndo.identity(3)
    for name in seq:
        comp = comp @ gens[name]
        expl = compose(expl, explicit[name])
        assert comp.expand() == expl


def test_explicit_family_small_n():
    for n in range(5):
        assert word_w_explicit(n, 4).is_identity()


def test_commutation():
    assert all(conjugated_A_commutes(n) for n in range(65))


def test_beta_hat_point_push():
    B = standard_generators(3)[1]
    assert compose(conjugation(parse_word("b^-1"), 3), beta_hat(3)) == B
    assert compose(conjugation(parse_word("b^-1"), 3), beta_hat(3)) != standard_generators(3)[0]


def test_realization_report():
    report = verify_realization_lemmas(16)
    assert all(report.values()), report


def test_verify_words_report():
    rows = verify_words(8, ranks=(3, 5))
    assert len(rows) == 18
    assert all(r["trivial"] and r["length_ok"] and r.get("explicit_trivial", True) for r in rows)


@settings(max_examples=60, deadline=None)
@given(endos(4), endos(4), endos(4))
def test_compose_associative(f, g, h):
    assert compose(compose(f, g), h) == compose(f, compose(g, h))


@settings(max_examples=60, deadline=None)
@given(endos(3), endos(3), words(3))
def test_homomorphism_law(f, g, w):
    assert apply_endo(compose(f, g), w) == apply_endo(f, apply_endo(g, w))


@settings(max_examples=40, deadline=None)
@given(endos(3))
def test_composed_witness_is_inverse(f):
    assert f.verify_inverse()


def test_family_restricts_to_rank_three():
    for n in range(4):
        w6 = word_w_explicit(n, 6)
        w3 = word_w_explicit(n, 3)
        assert w6.images[:3] == w3.images
        assert w6.images[3:] == ((4,), (5,), (6,))
