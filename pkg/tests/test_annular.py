import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from genus2.annular import (
    AnnularError,
    Profile,
    annular_distance,
    fit_K,
    geodesic_projection_profile,
    orbit_representative,
    relative_twist,
)
from genus2.handlebody import random_handlebody_word
from genus2.pantsgraph import PantsVertex, base_vertex, dual_system, geodesic
from genus2.surface import apply, dehn_twist, intersection_number

X0 = base_vertex()


def random_vertex(seed, length=4):
    phi = random_handlebody_word(random.Random(seed), length)
    return PantsVertex.of(apply(phi, c) for c in X0.curves)


def crossing_triples(count, seed=0):
    """(α, β₁, β₂): α a curve of one random vertex, β's meeting it."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        alpha = rng.choice(random_vertex(rng.randrange(10**6), 3).curves)
        b1, b2 = (rng.choice(random_vertex(rng.randrange(10**6), 3).curves) for _ in range(2))
        if intersection_number(alpha, b1) and intersection_number(alpha, b2):
            out.append((alpha, b1, b2))
    return out


def test_self_distance():
    for alpha, b, _ in crossing_triples(5):
        assert annular_distance(alpha, b, b) <= 1


def test_undefined_projection():
    b1, b2, d = X0.curves
    with pytest.raises(AnnularError) as e:
        annular_distance(b1, b2, dual_system(X0.curves)[0])
    assert e.value.code == "UNDEFINED_PROJECTION"


@settings(max_examples=12, deadline=None)
@given(st.integers(0, 10**6), st.integers(-12, 12))
def test_twist_linearity(seed, n):
    alpha, b, _ = crossing_triples(1, seed)[0]
    assert abs(annular_distance(alpha, b, dehn_twist(alpha, n, b)) - abs(n)) <= 3


def test_large_twist():
    alpha, b, _ = crossing_triples(1, 5)[0]
    assert annular_distance(alpha, b, dehn_twist(alpha, 50, b)) == 50


def test_kink_and_argmin_agree():
    # two routes to the relative twist: asymptotic kink vs integer minimizer
    for alpha, b1, b2 in crossing_triples(12, 1):
        r = relative_twist(alpha, b1, b2)
        assert r.consistent
        assert r.slope == intersection_number(alpha, b1) * intersection_number(alpha, b2)


def test_twist_shifts_kink():
    for alpha, b1, b2 in crossing_triples(3, 2):
        t = relative_twist(alpha, b1, b2).kink
        assert relative_twist(alpha, dehn_twist(alpha, 3, b1), dehn_twist(alpha, -2, b2)).kink == t - 5


def test_orbit_representative():
    alpha, b, _ = crossing_triples(1, 3)[0]
    k, short = orbit_representative(alpha, dehn_twist(alpha, 9, b))
    assert dehn_twist(alpha, k, short) == dehn_twist(alpha, 9, b)
    assert len(short.word) <= len(b.word) or k != 9


def test_symmetric():
    for alpha, b1, b2 in crossing_triples(6, 4):
        assert annular_distance(alpha, b1, b2) == annular_distance(alpha, b2, b1)


def test_naturality():
    rng = random.Random(5)
    for alpha, b1, b2 in crossing_triples(5, 5):
        phi = random_handlebody_word(rng, 3)
        moved = [apply(phi, c) for c in (alpha, b1, b2)]
        assert annular_distance(*moved) == annular_distance(alpha, b1, b2)


def test_disjoint_curves_close():
    # disjoint curves share every arc of their union, so the projections are near
    rng = random.Random(6)
    seen = 0
    while seen < 8:
        X = random_vertex(rng.randrange(10**6), 3)
        alpha = rng.choice(random_vertex(rng.randrange(10**6), 3).curves)
        hit = [c for c in X.curves if intersection_number(alpha, c)]
        if len(hit) >= 2:
            assert annular_distance(alpha, hit[0], hit[1]) <= 5
            seen += 1


def test_constant_path_profile():
    alpha = crossing_triples(1, 7)[0][0]
    X = random_vertex(9)
    if alpha in X:
        X = X0
    p = geodesic_projection_profile(alpha, [X, X, X])
    assert len(set(p.values)) == 1 and p.diameter == 0


def test_profile_interval_contiguous():
    Y = random_vertex(11, 12)
    path = geodesic(X0, Y)
    for X in path:
        for alpha in X.curves:
            p = geodesic_projection_profile(alpha, path)
            assert p.contiguous and p.values[p.interval[0]] is None


def test_fit_K():
    profs = [Profile((0, 1, 3), None), Profile((2, None, None, 0, 4), (1, 2))]
    assert fit_K(profs) == 4
    assert json.loads(profs[1].to_json())["interval"] == [1, 2]
