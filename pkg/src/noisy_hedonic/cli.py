"""``nhg`` command line.

Exit codes: 0 ok, 2 bad configuration, 3 missing value, 4 enumeration too large.
"""

from __future__ import annotations

import os
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import click
import numpy as np

from . import agreement as ag
from . import io as nio
from . import pac, regimes, two_agent
from .errors import EnumerationTooLarge, HedonicError, MissingValue
from .game import Coalition, all_coalitions, find_core_partition
from .sampling import SamplingSpec

EXIT_CONFIG = 2
EXIT_MISSING = 3
EXIT_ENUMERATION = 4


def workers() -> int:
    try:
        cap = int(os.environ.get("NHG_THREADS", "1"))
    except ValueError:
        cap = 1
    return max(cap, 1)


def _fail(code, msg):
    click.echo(f"error: {msg}", err=True)
    sys.exit(code)


def _run(fn):
    """Map library errors onto the exit codes."""
    try:
        return fn()
    except MissingValue as exc:
        _fail(EXIT_MISSING, str(exc))
    except EnumerationTooLarge as exc:
        _fail(EXIT_ENUMERATION, str(exc))
    except (HedonicError, ValueError, KeyError, TypeError, OSError) as exc:
        _fail(EXIT_CONFIG, f"{type(exc).__name__}: {exc}")


def _emit(text: str, out):
    if out:
        nio.write_atomic(out, text)
    else:
        click.echo(text, nl=False)


def _coalition(text: str) -> Coalition:
    return Coalition.from_members(int(x) for x in text.replace(" ", "").split(",") if x)


def _two_agent(path):
    return two_agent.TwoAgentGame.from_game(nio.game_from_dict(nio.read_json(path)))


def _branches(game_path, alpha, branch):
    if branch:
        for b in branch:
            if b not in two_agent.BRANCH_CURVES:
                raise ValueError(f"unknown branch {b!r}; choose from {sorted(two_agent.BRANCH_CURVES)}")
        return list(branch)
    if game_path and alpha is not None:
        return [two_agent.branch_of(_two_agent(game_path), nio.parse_number(alpha))]
    raise ValueError("give --branch, or --game with --alpha")


@click.group()
def main():
    """Noise robustness of core-stable partitions in hedonic games."""


@main.command()
@click.option("--game", "game_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--noise", "noise_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--partition", "partition_path", type=click.Path(exists=True, dir_okay=False),
              help="noisy partition; defaults to the game's core partition")
@click.option("--coalition", "coalitions", multiple=True, help="comma-separated members, repeatable")
@click.option("--eps-tilde", type=float, default=0.05, show_default=True)
@click.option("--zeta", type=click.FloatRange(0, 1, min_open=True), default=0.9, show_default=True)
@click.option("--eta", type=click.FloatRange(0, 1, min_open=True), default=None)
@click.option("--out", type=click.Path(dir_okay=False))
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json")
def analyze(game_path, noise_path, partition_path, coalitions, eps_tilde, zeta, eta, out, fmt):
    """Agreement probabilities and prediction error per coalition."""

    def go():
        game = nio.game_from_dict(nio.read_json(game_path))
        spec = nio.noise_spec_from_dict(nio.read_json(noise_path))
        if partition_path:
            pi = nio.partition_from_dict(nio.read_json(partition_path), game.n)
        else:
            pi = find_core_partition(game)
        Ts = [_coalition(c) for c in coalitions] or list(all_coalitions(game.n))
        with ThreadPoolExecutor(max_workers=workers()) as pool:
            rows = list(pool.map(lambda T: ag.coalition_report(game, pi, T, spec, eps_tilde, zeta, eta), Ts))
        f_min = min(r["f_oracle"] for r in rows)
        if fmt == "csv":
            keys = ["coalition", "R_size", "f_closed", "f_oracle", "h_closed", "h_oracle", "epsilon", "verdict"]
            body = nio.csv_text(keys, ([" ".join(map(str, r["coalition"]))] + [r[k] for k in keys[1:]] for r in rows))
        else:
            body = nio.dumps({
                "partition": pi.as_lists(),
                "noise": nio.noise_spec_to_dict(spec),
                "coalitions": rows,
                "min_f_oracle": f_min,
                "epsilon_worst": ag.prediction_epsilon(eps_tilde, f_min),
            })
        _emit(body, out)

    _run(go)


@main.command()
@click.option("--game", "game_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--alpha", type=str, default=None)
@click.option("--branch", multiple=True)
@click.option("--resolution", type=click.IntRange(1), default=100, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False))
def curves(game_path, alpha, branch, resolution, out):
    """CSV of (branch, p, probability) on an even grid of p."""

    def go():
        names = _branches(game_path, alpha, branch)
        rows = []
        for b in names:
            fn = two_agent.BRANCH_CURVES[b]
            for j in range(resolution + 1):
                p = j / resolution
                rows.append((b, p, float(fn(p))))
        _emit(nio.csv_text(["branch", "p", "probability"], rows), out)

    _run(go)


@main.command("regimes")
@click.option("--game", "game_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--alpha", type=str, default=None)
@click.option("--branch", multiple=True)
@click.option("--zeta", type=click.FloatRange(0, 1), default=0.9, show_default=True)
@click.option("--resolution", type=int, default=None, help="10000 in 1D, 400 on the simplex")
@click.option("--simplex", is_flag=True, help="three-point support region of g(p1, p2)")
@click.option("--out", type=click.Path(dir_okay=False))
def regimes_cmd(game_path, alpha, branch, zeta, resolution, simplex, out):
    """Noise regime where the prediction probability reaches zeta."""

    def go():
        if simplex:
            reg = regimes.superlevel_region_2d(two_agent.g, zeta, resolution or regimes.DEFAULT_RESOLUTION_2D)
            d = nio.region_to_dict(reg)
            d.update({"zeta": zeta, "fraction": reg.fraction(), "covers_simplex": reg.covers_simplex()})
            _emit(nio.dumps(d), out)
            return
        names = _branches(game_path, alpha, branch)
        res = resolution or regimes.DEFAULT_RESOLUTION_1D
        found = {b: two_agent.branch_regime(b, zeta, res) for b in names}
        report = {b: nio.region_to_dict(r) for b, r in found.items()}
        if len(found) > 1:
            report["intersection"] = nio.region_to_dict(regimes.intersect_regions(found.values()))
        report["zeta"] = zeta
        _emit(nio.dumps(report), out)

    _run(go)


@main.command()
@click.option("--game", "game_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--alpha", type=str, default=None)
@click.option("--branch", multiple=True)
@click.option("--simplex", is_flag=True, help="minimum of g over the simplex")
@click.option("--resolution", type=int, default=None)
@click.option("--out", type=click.Path(dir_okay=False))
def safety(game_path, alpha, branch, simplex, resolution, out):
    """Minimum prediction probability and where it is attained."""

    def go():
        if simplex:
            (p1, p2), v = regimes.simplex_minimum(two_agent.g, resolution or regimes.DEFAULT_RESOLUTION_2D)
            report = {"simplex": {"p1": p1, "p2": p2, "value": v}}
            lines = [f"simplex p*=({p1:.6f}, {p2:.6f}) value={v:.6f}"]
        else:
            report, lines = {}, []
            for b in _branches(game_path, alpha, branch):
                p, v = regimes.safety_value_1d(two_agent.BRANCH_CURVES[b],
                                               resolution or regimes.DEFAULT_RESOLUTION_1D)
                report[b] = {"p_star": p, "value": v}
                lines.append(f"{b} p*={p:.6f} value={v:.6f}")
        if out:
            nio.write_atomic(out, nio.dumps(report))
        click.echo("\n".join(lines))

    _run(go)


@main.command()
@click.option("--game", "game_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--backend", type=click.Choice(["exact", "top_cover"]), default="top_cover", show_default=True)
@click.option("--samples", "m", type=click.IntRange(0), default=0, show_default=True,
              help="number of sampled coalitions; 0 observes every coalition once")
@click.option("--sampling", "sampling_path", type=click.Path(exists=True, dir_okay=False),
              help='JSON {"kind": ..., "coalitions": [...], "weights": [...]}; default uniform')
@click.option("--eval-game", "eval_path", type=click.Path(exists=True, dir_okay=False),
              help="game used to score the learned partition; defaults to --game")
@click.option("--m-eval", type=click.IntRange(1), default=10_000, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False))
def learn(game_path, backend, m, sampling_path, eval_path, m_eval, seed, out):
    """Learn a partition from sampled coalitions and score it."""

    def go():
        game = nio.game_from_dict(nio.read_json(game_path))
        if sampling_path:
            d = nio.read_json(sampling_path)
            spec = SamplingSpec(game.n, d.get("kind", "list"), tuple(d.get("coalitions", ())),
                                tuple(d.get("weights", ())), seed)
        else:
            spec = SamplingSpec(game.n, "uniform", seed=seed)
        sample = pac.full_sample(game) if m == 0 else pac.draw_sample(game, spec, m)
        pi = pac.learn_partition(sample, game.n, backend)
        target = nio.game_from_dict(nio.read_json(eval_path)) if eval_path else game
        # evaluation draws use a seed derived from, but distinct from, the sample seed
        eval_seed = int(np.random.SeedSequence(seed).spawn(1)[0].generate_state(1)[0])
        rate = pac.empirical_blocking_rate(pi, spec, target, m_eval, eval_seed)
        report = {"backend": backend, "partition": pi.as_lists(), "blocking_rate": rate,
                  "samples": len(sample), "m_eval": m_eval, "seed": seed}
        if out:
            nio.write_atomic(out, nio.dumps(report))
        click.echo(f"partition={pi.as_lists()} blocking_rate={rate:.6f}")

    _run(go)


@main.command()
@click.option("--game", "game_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--noise", "noise_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out", type=click.Path(dir_okay=False))
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="csv")
def enumerate(game_path, noise_path, out, fmt):
    """Case table of every noise assignment for a two-agent game."""

    def go():
        game = _two_agent(game_path)
        spec = nio.noise_spec_from_dict(nio.read_json(noise_path))
        cases = two_agent.enumerate_cases(game, spec)
        if fmt == "csv":
            rows = [(c.alphas[0], c.alphas[1], c.alphas[2], c.probability,
                     "|".join(" ".join(map(str, b)) for b in c.partition.as_lists()), c.agrees)
                    for c in cases]
            body = nio.csv_text(["alpha_1_coal", "alpha_2_coal", "alpha_12_coal",
                                 "probability", "partition", "agrees"], rows)
        else:
            body = nio.dumps({
                "game_id": game.game_id,
                "cases": [{"case": c.number, "label": c.label, "alphas": list(c.alphas),
                           "probability": c.probability, "partition": c.partition.as_lists(),
                           "agrees": c.agrees} for c in cases],
                "agreeing": two_agent.agreeing_case_numbers(cases),
                "probability": two_agent.agreement_probability(cases),
            })
        _emit(body, out)

    _run(go)


if __name__ == "__main__":
    main()
