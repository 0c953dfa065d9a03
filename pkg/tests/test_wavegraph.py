import json
import random
from functools import lru_cache

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from genus2.handlebody import base_cut_system, is_meridian
from genus2.surface import dehn_twist, intersection_number, separating_curve
from genus2.wavegraph import (
    AdmissibleWave,
    Slope,
    WaveChart,
    WaveGraphError,
    are_adjacent,
    ball,
    certify_tree,
    farey_ball,
    farey_neighbors,
    link_is_discrete,
    meridian_to_wave,
    meridians_meet_twice,
    project_wave,
    rooted_isomorphic,
    slopes_match,
    to_dot,
    to_json,
    wave_to_meridian,
    waves,
)

Z0 = base_cut_system()
CHART = WaveChart.standard()


@lru_cache(maxsize=None)
def small_ball(radius=3, cap=12):
    return ball(CHART, radius, cap)


def random_frame_curve(rng, length=4):
    """A curve of S built from frame twists only, never from slopes."""
    frame = (CHART.base, CHART.neighbor, CHART.diagonal)
    c = rng.choice(frame[:2])
    for _ in range(rng.randint(0, length)):
        c = dehn_twist(rng.choice(frame), rng.choice((-2, -1, 1, 2)), c)
    return c


def test_chart_frame():
    CHART.check()
    assert CHART.excluded_parity() == (1, 1)


def test_frame_slopes():
    assert CHART.slope(CHART.base) == Slope(1, 0)
    assert CHART.slope(CHART.neighbor) == Slope(0, 1)
    assert CHART.slope(CHART.diagonal) == Slope(1, 1)


def test_base_wave():
    w = meridian_to_wave(Z0, CHART.base)
    assert w.slope == Slope(1, 0) and w.boundary == "alpha1+" and w.encloses == "alpha2+"
    assert meridian_to_wave(Z0, CHART.neighbor).encloses == "alpha2-"


def test_twist_acts_by_shear():
    # twisting about 1/0 adds twice the base slope
    for m in range(-4, 5):
        assert CHART.slope(dehn_twist(CHART.base, m, CHART.neighbor)) == Slope(2 * m, 1)


def test_separating_rejected():
    with pytest.raises(WaveGraphError) as e:
        meridian_to_wave(Z0, CHART.diagonal)
    assert e.value.code == "SEPARATING"
    assert separating_curve() == CHART.diagonal


def test_not_disjoint():
    from genus2.surface import generator

    with pytest.raises(WaveGraphError) as e:
        meridian_to_wave(Z0, generator("a1"))
    assert e.value.code == "NOT_DISJOINT"


def test_round_trip_500():
    rng = random.Random(0)
    done = 0
    while done < 500:
        delta = random_frame_curve(rng)
        w = meridian_to_wave(Z0, delta)
        assert wave_to_meridian(Z0, w) == delta
        done += 1


def test_slope_classes_never_excluded():
    rng = random.Random(1)
    for _ in range(100):
        delta = random_frame_curve(rng)
        assert meridian_to_wave(Z0, delta).slope.parity != (1, 1)
        assert is_meridian(delta)


def test_slope_examples():
    assert Slope(0, 1).farey_adjacent(Slope(1, 0))
    assert Slope(0, 1).det(Slope(2, 1)) == -2
    assert not Slope(0, 1).farey_adjacent(Slope(2, 1))
    assert Slope(0, 1).farey_adjacent(Slope(1, 2))  # |0·2 − 1·1| = 1
    assert Slope(-3, -2) == Slope(3, 2)
    with pytest.raises(WaveGraphError):
        Slope(2, 4)


@settings(max_examples=40, deadline=None)
@given(st.integers(-9, 9), st.integers(0, 9))
def test_curve_at_reads_back(p, q):
    from math import gcd

    if gcd(abs(p), q) != 1:
        return
    s = Slope(p, q)
    assert CHART.slope(CHART.curve_at(s)) == s


def test_adjacency_two_routes():
    rng = random.Random(2)
    pairs = 0
    for _ in range(150):
        w1 = meridian_to_wave(Z0, random_frame_curve(rng, 3))
        w2 = meridian_to_wave(Z0, random_frame_curve(rng, 3))
        if w1 == w2:
            assert not are_adjacent(w1, w2)
            continue
        assert are_adjacent(w1, w2) == meridians_meet_twice(w1, w2)
        pairs += are_adjacent(w1, w2)
    g = small_ball()
    for a, b in g.edges:
        x, y = (AdmissibleWave(g.nodes[n]["curve"], g.nodes[n]["slope"]) for n in (a, b))
        assert are_adjacent(x, y) and meridians_meet_twice(x, y)


def test_self_not_adjacent():
    w = meridian_to_wave(Z0, CHART.base)
    assert not are_adjacent(w, w)


# ------------------------------------------------------------------ balls


def test_radius_zero():
    g = ball(CHART, 0)
    assert g.number_of_nodes() == 1 and g.nodes[0]["curve"] == CHART.base


def test_radius_one_star():
    g = ball(CHART, 1, 14)
    assert g.number_of_edges() == g.number_of_nodes() - 1
    assert all(g.has_edge(0, n) for n in g if n)
    assert link_is_discrete(g)


def test_small_ball_is_tree_and_matches_model():
    g = small_ball()
    assert certify_tree(g).is_tree
    assert link_is_discrete(g)
    h = farey_ball(3, 12)
    assert rooted_isomorphic(g, h)
    assert slopes_match(g, h)


def test_ball_vertices_are_meridians_and_round_trip():
    g = small_ball()
    for w in waves(g):
        assert is_meridian(w.meridian) and Z0.intersection(w.meridian) == 0
        assert wave_to_meridian(Z0, meridian_to_wave(Z0, w.meridian)) == w.meridian


def test_ball_deterministic():
    assert to_json(ball(CHART, 2, 10)) == to_json(ball(CHART, 2, 10))


def test_cap_exceeded():
    with pytest.raises(WaveGraphError) as e:
        ball(CHART, 3, 12, max_vertices=5)
    assert e.value.code == "CAP_EXCEEDED"


def test_farey_neighbors():
    ns = farey_neighbors(Slope(1, 0), 7)
    assert ns == sorted(Slope(2 * k, 1) for k in range(-3, 4))


def test_transported_chart():
    from genus2.handlebody import handlebody_generators

    phi = handlebody_generators()[-1]
    chart = CHART.transport(phi)
    chart.check()
    g = ball(chart, 2, 8)
    assert rooted_isomorphic(g, farey_ball(2, 8))


# ----------------------------------------------------------- certification


def test_certify_single_edge():
    g = nx.Graph([(0, 1)])
    c = certify_tree(g)
    assert c.status == "ACYCLIC" and c.witness == ((0, 1),)


def test_certify_triangle():
    c = certify_tree(nx.cycle_graph(3))
    assert c.status == "CYCLE" and len(c.witness) == 3


def test_certify_disconnected():
    g = nx.Graph([(0, 1), (2, 3)])
    with pytest.raises(WaveGraphError) as e:
        certify_tree(g)
    assert e.value.code == "DISCONNECTED" and e.value.witness == (0, 2)


# ------------------------------------------------------------- projection


@lru_cache(maxsize=None)
def projection(w, x):
    g = small_ball()
    return project_wave(*(AdmissibleWave(g.nodes[n]["curve"], g.nodes[n]["slope"]) for n in (w, x)), CHART).partner


def test_projection_self():
    w = meridian_to_wave(Z0, CHART.base)
    with pytest.raises(WaveGraphError) as e:
        project_wave(w, w)
    assert e.value.code == "SELF"


@pytest.mark.parametrize("w", [0, 1, 2, 5])
def test_projection_propositions(w):
    g = small_ball()
    link = set(g[w])
    for x, y in g.edges:
        if w in (x, y):
            continue
        if x not in link and y not in link:
            assert projection(w, x) == projection(w, y)
        elif x in link and y in link:
            pytest.fail("two neighbors of w adjacent")
        else:
            out, inn = (x, y) if y in link else (y, x)
            assert projection(w, out) == projection(w, inn)
    partners = [projection(w, y) for y in sorted(link)]
    assert len(set(partners)) == len(partners)


def test_projection_matches_tree_geodesic():
    g = small_ball()
    for x in g:
        if x == 0:
            continue
        first = nx.shortest_path(g, 0, x)[1]
        assert projection(0, x).meridian == g.nodes[first]["curve"]


# ---------------------------------------------------------------- export


def test_exports():
    g = ball(CHART, 1, 6)
    data = json.loads(to_json(g))
    assert data["root"] == 0 and len(data["nodes"]) == g.number_of_nodes()
    assert data["nodes"][0]["slope"] == "1/0"
    dot = to_dot(g)
    assert dot.startswith("graph W {") and dot.count("--") == g.number_of_edges()
