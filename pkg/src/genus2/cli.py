"""Command line: ball enumeration, certification and reports.

Exit status is 0 on success, 2 when a checked property fails (a witness
file is written next to the report), 3 when an enumeration cap is hit and
1 on usage errors.  Reports are JSON with sorted keys; the same
invocation always writes the same bytes.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
import os
import random
import sys
from dataclasses import dataclass, field
from pathlib import Path

import click
import networkx as nx

from . import cubecomplex, pantsgraph, wavegraph
from .autf import verify_realization_lemmas, verify_words
from .handlebody import CutSystem, HandlebodyError, base_cut_system, is_cut_system, is_meridian, surgery_sequence
from .surface import MODEL_ID, SurfaceError, curve

CACHE_ENV = "GENUS2_CACHE"
EXIT_OK, EXIT_USAGE, EXIT_VIOLATION, EXIT_CAP = 0, 1, 2, 3

# configs of the invocations in this process; the witness goes beside the last
_CONFIG_SEEN: list["RunConfig"] = []


class Violation(Exception):
    def __init__(self, message: str, witness):
        super().__init__(message)
        self.witness = witness


class CapExceeded(Exception):
    pass


@dataclass
class RunConfig:
    seed: int = 0
    wave_cap: int = 30
    pants_cap: int = 20
    radius: int = 2
    max_vertices: int = 5000
    samples: int = 20
    constants_path: str = "constants.json"
    cache_dir: str | None = None
    out_dir: str = "reports"
    plot: bool = False

    def __post_init__(self):
        if min(self.wave_cap, self.pants_cap, self.max_vertices) <= 0:
            raise click.UsageError("caps must be positive")
        if self.radius < 0:
            raise click.UsageError("radius must be non-negative")
        if self.cache_dir is None:
            self.cache_dir = os.environ.get(CACHE_ENV)

    @classmethod
    def from_file(cls, path: str, **overrides) -> "RunConfig":
        data = json.loads(Path(path).read_text())
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise click.UsageError(f"unknown config keys: {sorted(unknown)}")
        data.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**data)


@dataclass
class BallCache:
    """Ball JSON stored under a hash of what determines it."""

    root: Path | None
    hits: int = field(default=0)

    @staticmethod
    def key(kind: str, base: str, radius: int, cap) -> str:
        blob = json.dumps([kind, base, radius, cap, MODEL_ID])
        return hashlib.sha256(blob.encode()).hexdigest()

    def get_or_build(self, kind: str, base: str, radius: int, cap, build) -> str:
        if self.root is None:
            return build()
        path = self.root / f"{self.key(kind, base, radius, cap)}.json"
        if path.exists():
            self.hits += 1
            return path.read_text()
        text = build()
        self.root.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
        return text


def graph_from_json(text: str) -> nx.Graph:
    """Topology of any exported ball."""
    data = json.loads(text)
    g = nx.Graph()
    g.add_nodes_from(n["id"] for n in data["nodes"])
    g.add_edges_from((e[0], e[1]) for e in data["edges"])
    return g


# ------------------------------------------------------------------ inputs


def parse_curve(text: str):
    try:
        return curve(tuple(int(x) for x in text.replace(" ", "").split(",") if x))
    except (ValueError, SurfaceError) as e:
        raise click.UsageError(f"bad curve word {text!r}: {e}")


def parse_moves(text: str) -> list[cubecomplex.Move]:
    out = []
    for tok in text.replace(",", " ").split():
        try:
            if tok[0] == "S" and len(tok) == 2:
                out.append(cubecomplex.Switch(int(tok[1]) - 1))
            elif tok[0] == "T" and len(tok) == 3 and tok[2] in "+-":
                out.append(cubecomplex.Twist(int(tok[1]) - 1, 1 if tok[2] == "+" else -1))
            else:
                raise ValueError
        except (ValueError, IndexError):
            raise click.UsageError(f"bad move {tok!r}; use S1..S3 or T1+..T3-")
        if not 0 <= out[-1].slot < 3:
            raise click.UsageError(f"bad slot in {tok!r}")
    return out


# ----------------------------------------------------------------- output


def dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1, default=str) + "\n"


def write(cfg: RunConfig, name: str, obj) -> Path:
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / name
    path.write_text(obj if isinstance(obj, str) else dump(obj))
    return path


def plot_tree(g: nx.Graph, path: Path, title: str) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 6))
    pos = nx.kamada_kawai_layout(g) if g.number_of_nodes() > 1 else {n: (0, 0) for n in g}
    nx.draw_networkx(g, pos, ax=ax, node_size=30, with_labels=False, node_color="0.2", edge_color="0.6")
    ax.set_title(title)
    ax.set_axis_off()
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)


def plot_fit(rows: list[dict], c: float, C: int, path: Path) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5, 5))
    xs = [r["formula"][str(C)] for r in rows]
    ys = [r["distance"] for r in rows]
    ax.scatter(xs, ys, s=12, color="0.2")
    top = max(xs + ys + [1])
    ax.plot([0, top], [c, c * top + c], color="0.6", lw=1)
    ax.plot([0, top], [0, max(0.0, top / c - c)], color="0.6", lw=1)
    ax.set_xlabel(f"formula value, threshold {C}")
    ax.set_ylabel("distance")
    ax.set_title(f"c = {c:.3f}")
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)


# ---------------------------------------------------------------- builders


def build_ball(kind: str, cfg: RunConfig, cache: BallCache) -> str:
    if kind == "wave":
        chart = wavegraph.WaveChart.standard()
        return cache.get_or_build("wave", "Z0", cfg.radius, [cfg.wave_cap, cfg.max_vertices],
                                  lambda: wavegraph.to_json(_capped(wavegraph.ball, chart, cfg.radius, cfg.wave_cap,
                                                                    cfg.max_vertices)))
    if kind == "pants":
        return cache.get_or_build("pants", "X0", cfg.radius, [cfg.pants_cap, cfg.max_vertices],
                                  lambda: pantsgraph.to_json(_capped(pantsgraph.ball, None, cfg.radius, cfg.pants_cap,
                                                                     cfg.max_vertices)))
    if kind == "cpt":
        return cache.get_or_build("cpt", "V0", cfg.radius, [cfg.max_vertices],
                                  lambda: cubecomplex.to_json(_capped(cubecomplex.ball, None, cfg.radius,
                                                                      cfg.max_vertices)))
    raise click.UsageError(f"unknown graph kind {kind!r}")


def _capped(fn, *args):
    try:
        return fn(*args)
    except (wavegraph.WaveGraphError, pantsgraph.PantsGraphError, cubecomplex.CubeComplexError) as e:
        if e.code == "CAP_EXCEEDED":
            raise CapExceeded(str(e))
        raise


def _dot(kind: str, cfg: RunConfig) -> str:
    if kind == "wave":
        return wavegraph.to_dot(wavegraph.ball(None, cfg.radius, cfg.wave_cap, cfg.max_vertices))
    if kind == "pants":
        return pantsgraph.to_dot(pantsgraph.ball(None, cfg.radius, cfg.pants_cap, cfg.max_vertices))
    return cubecomplex.to_dot(cubecomplex.ball(None, cfg.radius, cfg.max_vertices))


# ---------------------------------------------------------------- commands


pass_cfg = click.make_pass_decorator(RunConfig)


@click.group()
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), help="JSON RunConfig file.")
@click.option("--seed", type=int)
@click.option("--out", "out_dir", type=click.Path(file_okay=False), help="Report directory.")
@click.option("--cache-dir", type=click.Path(file_okay=False), help=f"Ball cache (default ${CACHE_ENV}).")
@click.option("--plot/--no-plot", default=None, help="Render matplotlib figures into the report directory.")
@click.pass_context
def cli(ctx, config_path, seed, out_dir, cache_dir, plot):
    """Genus-2 handlebody: wave graphs, pants graphs and the cube complex."""
    overrides = {"seed": seed, "out_dir": out_dir, "cache_dir": cache_dir, "plot": plot}
    if config_path:
        ctx.obj = RunConfig.from_file(config_path, **overrides)
    else:
        ctx.obj = RunConfig(**{k: v for k, v in overrides.items() if v is not None})
    _CONFIG_SEEN.append(ctx.obj)


def _ball_options(f):
    f = click.option("--radius", type=click.IntRange(0), default=None)(f)
    f = click.option("--cap", type=click.IntRange(1), default=None, help="Complexity bound.")(f)
    return f


def _max_vertices(f):
    return click.option("--max-vertices", type=click.IntRange(1), default=None,
                        help="Stop with exit 3 beyond this many vertices.")(f)


def _apply(cfg: RunConfig, kind: str, radius, cap, max_vertices=None) -> None:
    if max_vertices is not None:
        cfg.max_vertices = max_vertices
    if radius is not None:
        cfg.radius = radius
    if cap is not None:
        if kind == "wave":
            cfg.wave_cap = cap
        else:
            cfg.pants_cap = cap


def _ball_command(kind: str, cfg: RunConfig, radius, cap, max_vertices) -> None:
    _apply(cfg, kind, radius, cap, max_vertices)
    cache = BallCache(Path(cfg.cache_dir) if cfg.cache_dir else None)
    text = build_ball(kind, cfg, cache)
    g = graph_from_json(text)
    path = write(cfg, f"{kind}_ball.json", text)
    if cfg.plot:
        plot_tree(g, Path(cfg.out_dir) / f"{kind}_ball.png", f"{kind} ball, radius {cfg.radius}")
    click.echo(f"{kind} ball: {g.number_of_nodes()} vertices, {g.number_of_edges()} edges -> {path}")


@cli.command("wave-ball")
@_ball_options
@_max_vertices
@pass_cfg
def wave_ball(cfg, radius, cap, max_vertices):
    """Enumerate a ball of the wave graph W(Z₀)."""
    _ball_command("wave", cfg, radius, cap, max_vertices)


@cli.command("pants-ball")
@_ball_options
@_max_vertices
@pass_cfg
def pants_ball(cfg, radius, cap, max_vertices):
    """Enumerate a ball of the pants graph CP₂."""
    _ball_command("pants", cfg, radius, cap, max_vertices)


@cli.command("cpt-ball")
@click.option("--radius", type=click.IntRange(0), default=None)
@_max_vertices
@pass_cfg
def cpt_ball(cfg, radius, max_vertices):
    """Enumerate a ball of the cube complex CPT₂."""
    _ball_command("cpt", cfg, radius, None, max_vertices)


@cli.command("certify-tree")
@click.option("--graph", "kind", type=click.Choice(["wave", "pants"]), default="wave")
@click.option("--fixture", type=click.Path(exists=True, dir_okay=False), help="Certify an exported graph instead.")
@_ball_options
@_max_vertices
@pass_cfg
def certify_tree_cmd(cfg, kind, fixture, radius, cap, max_vertices):
    """Certify that a ball is connected and acyclic."""
    _apply(cfg, kind, radius, cap, max_vertices)
    if fixture:
        g = graph_from_json(Path(fixture).read_text())
    else:
        g = graph_from_json(build_ball(kind, cfg, BallCache(Path(cfg.cache_dir) if cfg.cache_dir else None)))
    try:
        cert = wavegraph.certify_tree(g)
    except wavegraph.WaveGraphError as e:
        raise Violation(f"{e.code}", {"status": e.code, "witness": e.witness})
    report = {"graph": kind, "status": cert.status, "vertices": g.number_of_nodes(),
              "edges": g.number_of_edges(), "radius": cfg.radius}
    if not cert.is_tree:
        raise Violation("CYCLE", {"status": "CYCLE", "witness": list(cert.witness)})
    write(cfg, "certificate.json", report)
    click.echo(f"{cert.status}: {g.number_of_nodes()} vertices")


@cli.command("flag-check")
@click.option("--radius", type=click.IntRange(0), default=None)
@pass_cfg
def flag_check(cfg, radius):
    """Check flag links and square patterns in a CPT₂ ball."""
    if radius is not None:
        cfg.radius = radius
    g = _capped(cubecomplex.ball, None, cfg.radius, cfg.max_vertices)
    for n in sorted(g):
        r = cubecomplex.link_is_flag(g.nodes[n]["vertex"])
        if not r.flag:
            raise Violation("link not flag", {"vertex": n, "triangle": list(r.witness)})
    cycles = cubecomplex.four_cycles(g)
    for c in cycles:
        if not (cubecomplex.square_pattern_ok(g, c) and cubecomplex.is_glued_square(g, c)):
            raise Violation("bad square", {"cycle": list(c)})
    write(cfg, "flag_check.json", {"vertices": g.number_of_nodes(), "squares": len(cycles), "flag": True})
    click.echo(f"flag at {g.number_of_nodes()} vertices; {len(cycles)} squares glued")


@cli.command()
@click.option("--beta", required=True, help="Quotient word of a meridian, e.g. '1,-2,3'.")
@pass_cfg
def surgery(cfg, beta):
    """Surgery sequence of the standard cut system toward a meridian."""
    b = parse_curve(beta)
    if not b.is_curve or not is_meridian(b):
        raise click.UsageError("--beta must be a single meridian")
    try:
        seq = surgery_sequence(base_cut_system(), b)
    except HandlebodyError as e:
        raise Violation(e.code, {"beta": beta})
    for Z, Zn in zip(seq, seq[1:]):
        if Zn.intersection(b) >= Z.intersection(b):
            raise Violation("intersection did not drop", {"step": [Z.to_json(), Zn.to_json()]})
    write(cfg, "surgery.json", {"beta": list(b.word), "steps": [Z.to_json() for Z in seq],
                                "intersections": [Z.intersection(b) for Z in seq]})
    click.echo(" -> ".join(str(Z.intersection(b)) for Z in seq))


@cli.command()
@click.option("--z", "zs", required=True, help="Cut system as 'w1;w2'.")
@click.option("--x", "xs", required=True, help="Pants decomposition as 'w1;w2;w3'.")
@pass_cfg
def project(cfg, zs, xs):
    """The projection π_Z(X) into CP₂(Z)."""
    Z = [parse_curve(w) for w in zs.split(";")]
    X = [parse_curve(w) for w in xs.split(";")]
    if len(Z) != 2 or len(X) != 3 or not pantsgraph.is_vertex(X):
        raise click.UsageError("need two curves for --z and a pants decomposition for --x")
    if not is_cut_system(*Z):
        raise click.UsageError("--z is not a cut system")
    p = pantsgraph.project(CutSystem(*Z), pantsgraph.PantsVertex.of(X))
    write(cfg, "projection.json", {"projection": [list(c.word) for c in p.curves]})
    click.echo("; ".join(",".join(map(str, c.word)) for c in p.curves))


@cli.command()
@click.option("--word", required=True, help="Moves from the base marked vertex, e.g. 'S1 T2+ T2+'.")
@click.option("--threshold", "C", type=click.IntRange(1), default=3)
@pass_cfg
def distance(cfg, word, C):
    """Distance estimate from the base marked vertex."""
    w = parse_moves(word)
    v0 = cubecomplex.base_marked_vertex()
    e = cubecomplex.distance_estimate(v0, cubecomplex.apply_moves(v0, w), C, w)
    report = {"word": [str(m) for m in w], "normalized": [str(m) for m in cubecomplex.normalize(w)],
              "lower": e.lower, "upper": e.upper, "formula": e.formula, "pants_distance": e.pants_distance,
              "annular": e.annular}
    write(cfg, "distance.json", report)
    click.echo(f"lower {e.lower}  upper {e.upper}  formula {e.formula}")


def distance_samples(cfg: RunConfig, max_length: int) -> list[dict]:
    rng = random.Random(cfg.seed)
    v0 = cubecomplex.base_marked_vertex()
    rows = []
    for _ in range(cfg.samples):
        w = [rng.choice(cubecomplex.ALL_MOVES) for _ in range(rng.randint(1, max_length))]
        v = cubecomplex.apply_moves(v0, w)
        norm = cubecomplex.normalize(w)
        exact = cubecomplex.search_distance(v0, v, 2)
        d = exact if exact is not None else len(norm)
        terms = cubecomplex.annular_terms(v0, v)
        dp = len(pantsgraph.geodesic(v0.pants, v.pants)) - 1
        rows.append({"word": [str(m) for m in w], "distance": d, "exact": exact is not None,
                     "pants_distance": dp, "annular": sorted(terms.values()),
                     "formula": {str(C): dp + sum(cubecomplex.threshold(x, C) for x in terms.values())
                                 for C in range(1, 11)}})
    return rows


@cli.command("fit-constants")
@click.option("--samples", type=click.IntRange(1), default=None)
@click.option("--max-length", type=click.IntRange(1), default=20)
@pass_cfg
def fit_constants_cmd(cfg, samples, max_length):
    """Fit (c, C) in the distance formula over random move words."""
    if samples is not None:
        cfg.samples = samples
    rows = distance_samples(cfg, max_length)
    data = [(r["pants_distance"], dict(enumerate(r["annular"])), r["distance"]) for r in rows]
    c, C = cubecomplex.fit_constants(data)
    report = {"c": round(c, 6), "C": C, "samples": rows}
    write(cfg, "fit.json", report)
    Path(cfg.constants_path).parent.mkdir(parents=True, exist_ok=True)
    Path(cfg.constants_path).write_text(dump({"c": round(c, 6), "C": C}))
    if cfg.plot:
        plot_fit(rows, c, C, Path(cfg.out_dir) / "fit.png")
    click.echo(f"c = {c:.3f}, C = {C}")


@cli.command("verify-words")
@click.option("--max-n", type=click.IntRange(0), default=64)
@pass_cfg
def verify_words_cmd(cfg, max_n):
    """Check that the word family w_n is trivial in Aut(F_g)."""
    rows = verify_words(max_n)
    lemmas = verify_realization_lemmas(max_n)
    for r in rows:
        r.pop("seconds")
    bad = [r for r in rows if not (r["trivial"] and r["length_ok"] and r.get("explicit_trivial", True))]
    if bad or not all(lemmas.values()):
        raise Violation("word family check failed", {"rows": bad, "lemmas": lemmas})
    write(cfg, "words.json", {"rows": rows, "lemmas": lemmas})
    click.echo(f"{len(rows)} words trivial; lemmas hold")


@cli.command("export-dot")
@click.option("--graph", "kind", type=click.Choice(["wave", "pants", "cpt"]), default="wave")
@_ball_options
@_max_vertices
@pass_cfg
def export_dot(cfg, kind, radius, cap, max_vertices):
    """Write a ball as a DOT file."""
    _apply(cfg, kind, radius, cap, max_vertices)
    path = write(cfg, f"{kind}_ball.dot", _capped(_dot, kind, cfg))
    click.echo(str(path))


# ------------------------------------------------------------------- entry


def main(argv=None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False, obj=None)
    except click.exceptions.Exit as e:
        return e.exit_code
    except click.ClickException as e:
        e.show()
        return EXIT_USAGE
    except click.Abort:
        return EXIT_USAGE
    except CapExceeded as e:
        click.echo(str(e) if str(e).startswith("CAP_EXCEEDED") else f"CAP_EXCEEDED: {e}", err=True)
        return EXIT_CAP
    except Violation as e:
        path = write(_CONFIG_SEEN[-1] if _CONFIG_SEEN else RunConfig(), "witness.json", {"violation": str(e), "witness": e.witness})
        click.echo(f"VIOLATION: {e} (witness in {path})", err=True)
        return EXIT_VIOLATION
    return EXIT_OK


def main_exit() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
