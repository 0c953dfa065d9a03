import json

import pytest

from genus2.cli import BallCache, RunConfig, graph_from_json, main, parse_moves


@pytest.fixture
def run(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("GENUS2_CACHE", raising=False)

    def go(*args):
        return main(["--out", str(tmp_path / "r"), *args])

    go.out = tmp_path / "r"
    return go


def test_verify_words(run):
    assert run("verify-words", "--max-n", "10") == 0
    rows = json.loads((run.out / "words.json").read_text())["rows"]
    assert all(r["trivial"] for r in rows)


def test_certify_wave_tree(run):
    assert run("certify-tree", "--graph", "wave", "--radius", "2") == 0
    assert json.loads((run.out / "certificate.json").read_text())["status"] == "ACYCLIC"


def test_cycle_fixture_is_a_violation(run, tmp_path):
    fixture = tmp_path / "cycle.json"
    fixture.write_text(json.dumps({"nodes": [{"id": i} for i in range(4)],
                                   "edges": [[0, 1], [1, 2], [2, 3], [3, 0]]}))
    assert run("certify-tree", "--fixture", str(fixture)) == 2
    witness = json.loads((run.out / "witness.json").read_text())
    assert witness["witness"]["status"] == "CYCLE"
    assert sorted(witness["witness"]["witness"]) == [0, 1, 2, 3]


def test_disconnected_fixture(run, tmp_path):
    fixture = tmp_path / "split.json"
    fixture.write_text(json.dumps({"nodes": [{"id": 0}, {"id": 1}], "edges": []}))
    assert run("certify-tree", "--fixture", str(fixture)) == 2


def test_usage_errors(run):
    assert run("no-such-command") == 1
    assert run("surgery", "--beta", "1,2") == 1
    assert run("distance", "--word", "X9") == 1
    assert run("wave-ball", "--radius", "-1") == 1


def test_cap_exceeded_is_distinct(run):
    assert run("wave-ball", "--radius", "3", "--max-vertices", "10") == 3


def test_reports_deterministic(run):
    assert run("wave-ball", "--radius", "2") == 0
    first = (run.out / "wave_ball.json").read_bytes()
    assert run("wave-ball", "--radius", "2") == 0
    assert (run.out / "wave_ball.json").read_bytes() == first


def test_ball_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("GENUS2_CACHE", str(tmp_path / "cache"))
    cfg = RunConfig()
    assert cfg.cache_dir == str(tmp_path / "cache")
    cache = BallCache(tmp_path / "cache")
    calls = []

    def build():
        calls.append(1)
        return "{}"

    assert cache.get_or_build("wave", "Z0", 2, 30, build) == "{}"
    assert cache.get_or_build("wave", "Z0", 2, 30, build) == "{}"
    assert len(calls) == 1 and cache.hits == 1
    assert BallCache.key("wave", "Z0", 2, 30) != BallCache.key("wave", "Z0", 3, 30)


def test_cached_ball_bit_identical(run, monkeypatch, tmp_path):
    monkeypatch.setenv("GENUS2_CACHE", str(tmp_path / "cache"))
    assert run("pants-ball", "--radius", "1", "--cap", "10") == 0
    first = (run.out / "pants_ball.json").read_bytes()
    assert len(list((tmp_path / "cache").iterdir())) == 1
    assert run("pants-ball", "--radius", "1", "--cap", "10") == 0
    assert (run.out / "pants_ball.json").read_bytes() == first


def test_ball_exports(run):
    assert run("cpt-ball", "--radius", "1") == 0
    g = graph_from_json((run.out / "cpt_ball.json").read_text())
    assert g.number_of_nodes() == 10 and g.number_of_edges() == 9
    assert run("export-dot", "--graph", "cpt", "--radius", "1") == 0
    assert (run.out / "cpt_ball.dot").read_text().startswith("graph CPT2 {")


def test_surgery_and_projection(run):
    assert run("surgery", "--beta", "1,-2,-4,2,-3,4") == 0
    report = json.loads((run.out / "surgery.json").read_text())
    assert report["intersections"][-1] == 0
    assert run("project", "--z", "1,-3;4", "--x", "4;1,-3;1,-3,4") == 0
    assert run("project", "--z", "1,-3;1,-3", "--x", "4;1,-3;1,-3,4") == 1


def test_distance(run):
    assert run("distance", "--word", "T2+ T2+ T2+ T2+ T2+") == 0
    d = json.loads((run.out / "distance.json").read_text())
    assert d["upper"] == 5 and d["normalized"] == ["T2+"] * 5


def test_flag_check(run):
    assert run("flag-check", "--radius", "1") == 0


def test_fit_constants_and_plot(run, tmp_path):
    assert run("--plot", "fit-constants", "--samples", "3", "--max-length", "3") == 0
    assert json.loads((tmp_path / "constants.json").read_text())["c"] >= 1
    assert (run.out / "fit.png").stat().st_size > 0


def test_plot_ball(run):
    assert run("--plot", "wave-ball", "--radius", "1") == 0
    assert (run.out / "wave_ball.png").read_bytes()[:4] == b"\x89PNG"


def test_config_file(run, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"radius": 1, "wave_cap": 10}))
    assert run("--config", str(cfg), "wave-ball") == 0
    cfg.write_text(json.dumps({"nonsense": 1}))
    assert run("--config", str(cfg), "wave-ball") == 1


def test_parse_moves():
    assert [str(m) for m in parse_moves("S1, T3-")] == ["S1", "T3-"]
