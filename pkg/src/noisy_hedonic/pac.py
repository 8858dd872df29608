"""Learning a partition from sampled coalitions, and the sample-size formulas.

``log`` in every bound is the natural logarithm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from sklearn.base import BaseEstimator, ClusterMixin
from sklearn.utils.validation import check_is_fitted

from .errors import CoverageInsufficient, EmptySample, MissingValue
from .game import Coalition, HedonicGame, Partition, core_blocks, find_core_partition
from .sampling import SamplingSpec, sample_coalitions


@dataclass(frozen=True)
class PacParams:
    eps_tilde: float
    delta: float
    zeta: float = 1.0
    n: int = 1
    eps: float | None = None

    def __post_init__(self):
        if not 0 < self.eps_tilde < 1:
            raise ValueError("eps_tilde must be in (0, 1)")
        if not 0 < self.delta < 1:
            raise ValueError("delta must be in (0, 1)")
        if not 0 < self.zeta <= 1:
            raise ValueError("zeta must be in (0, 1]")
        if self.n < 1:
            raise ValueError("n must be positive")
        if self.eps is not None and not 0 < self.eps < 1:
            raise ValueError("eps must be in (0, 1)")


@dataclass(frozen=True)
class Sample:
    """Observed coalitions with every member's (noisy) value."""

    items: tuple
    seed: int | None = None

    def __post_init__(self):
        rows = []
        for S, vals in self.items:
            S = S if isinstance(S, Coalition) else Coalition.from_members(S)
            vals = {int(i): v for i, v in dict(vals).items()}
            if set(vals) != set(S.members):
                raise ValueError(f"sample row for {S} must value exactly its members")
            if any(not v > 0 for v in vals.values()):
                raise ValueError(f"non-positive value in sample row for {S}")
            rows.append((S, vals))
        object.__setattr__(self, "items", tuple(rows))

    def __len__(self):
        return len(self.items)

    def coalitions(self) -> list[Coalition]:
        return [S for S, _ in self.items]

    def value_table(self) -> dict:
        return {(i, S.mask): v for S, vals in self.items for i, v in vals.items()}

    def induced_game(self, n: int) -> HedonicGame:
        table = self.value_table()
        full = len(table) == n * (1 << (n - 1))
        return HedonicGame(n, table, "full" if full else "partial")


def sample_from_game(game: HedonicGame, coalitions: Iterable[Coalition], seed=None) -> Sample:
    return Sample(tuple((S, {i: game.value(i, S) for i in S}) for S in coalitions), seed)


def draw_sample(game: HedonicGame, spec: SamplingSpec, m: int) -> Sample:
    return sample_from_game(game, sample_coalitions(spec, m), spec.seed)


def full_sample(game: HedonicGame) -> Sample:
    """Every coalition once, in mask order."""
    return sample_from_game(game, [Coalition(m) for m in range(1, 1 << game.n)])


def empirical_blocking_rate(pi: Partition, draws, game: HedonicGame, m_eval: int = 10_000,
                            seed: int | None = None) -> float:
    """Fraction of coalitions in ``draws`` that core-block ``pi`` in ``game``.

    ``draws`` is a :class:`SamplingSpec` (``m_eval`` fresh draws), a
    :class:`Sample` or a plain list of coalitions.
    """
    if isinstance(draws, SamplingSpec):
        coals = sample_coalitions(draws, m_eval, seed)
    elif isinstance(draws, Sample):
        coals = draws.coalitions()
    else:
        coals = list(draws)
    if not coals:
        raise EmptySample("no coalitions to evaluate")
    hits = 0
    cache: dict[int, bool] = {}
    for T in coals:
        b = cache.get(T.mask)
        if b is None:
            b = cache[T.mask] = core_blocks(game, pi, T)
        hits += b
    return hits / len(coals)


def _top_cover(sample: Sample, n: int) -> Partition:
    remaining = set(range(n))
    obs = list(sample.items)
    blocks = []
    while remaining:
        choice = {}
        for i in sorted(remaining):
            best = None
            for S, vals in obs:
                if i in vals:
                    key = (vals[i], -S.mask)
                    if best is None or key > best[0]:
                        best = (key, S)
            choice[i] = best[1] if best else Coalition.of(i)
        closures = []
        for i in sorted(remaining):
            group = Coalition.of(i)
            while True:
                grown = group
                for j in group:
                    grown = grown | choice[j]
                if grown == group:
                    break
                group = grown
            closures.append((len(group), i, group))
        _, _, block = min(closures)
        blocks.append(block)
        remaining -= set(block.members)
        obs = [(S, vals) for S, vals in obs if not S & block]
    return Partition(tuple(blocks), n)


def learn_partition(sample: Sample, n: int, backend: str = "exact") -> Partition:
    """Estimate a core-stable partition from a sample.

    ``exact`` needs every coalition observed and solves the induced game;
    ``top_cover`` repeatedly fixes the smallest group closed under each
    agent's best observed coalition.
    """
    if not len(sample):
        raise EmptySample("cannot learn from an empty sample")
    if backend == "exact":
        game = sample.induced_game(n)
        if game.coverage != "full":
            raise CoverageInsufficient("the exact backend needs every coalition in the sample")
        return find_core_partition(game)
    if backend == "top_cover":
        return _top_cover(sample, n)
    raise ValueError(f"unknown backend {backend!r}")


def _k(n: int) -> int:
    return 2 * n**3 + 2 * n**4


def sample_complexity_top_responsive(n: int, eps: float, delta: float) -> int:
    """``ceil((2n^3 + 2n^4) / eps * ln(2n^3 / delta))``."""
    if n < 1 or not 0 < eps < 1 or not 0 < delta < 1:
        raise ValueError("need n >= 1 and eps, delta in (0, 1)")
    return math.ceil(_k(n) / eps * math.log(2 * n**3 / delta))


def sample_bounds(m: int, params: PacParams) -> tuple[float, float]:
    """Lower and upper bound on the noisy sample size given ``m``."""
    n, et, z = params.n, params.eps_tilde, params.zeta
    extra = _k(n) * ((1 - et) + et * z) / (et * (1 + et * z)) * math.log(2 * n**3 / params.delta)
    return m * z, m + extra


def epsilon_after_more_samples(eps_tilde, eps_tilde_prime, agreement):
    """Error after more samples cut the noisy error by ``eps_tilde_prime``."""
    if not 0 <= eps_tilde_prime <= eps_tilde < 1:
        raise ValueError("need 0 <= eps_tilde_prime <= eps_tilde < 1")
    if not 0 <= agreement <= 1:
        raise ValueError("agreement must be in [0, 1]")
    return 1 - (1 - (eps_tilde - eps_tilde_prime)) * agreement


class PartitionLearner(ClusterMixin, BaseEstimator):
    """Estimator wrapper around :func:`learn_partition`.

    ``fit`` takes a :class:`Sample` (or a list of ``(coalition, values)`` rows);
    ``labels_`` holds the block label of each agent.
    """

    def __init__(self, n_agents=None, backend="top_cover"):
        self.n_agents = n_agents
        self.backend = backend

    def fit(self, X, y=None):
        sample = X if isinstance(X, Sample) else Sample(tuple(X))
        n = self.n_agents
        if n is None:
            n = max((S.mask.bit_length() for S in sample.coalitions()), default=0)
        self.partition_ = learn_partition(sample, n, self.backend)
        self.labels_ = list(self.partition_.labels())
        self.values_ = sample.value_table()
        self.n_agents_ = n
        return self

    def score(self, X, y=None):
        """One minus the share of sampled coalitions that block the fit.

        Coalitions whose values (or their members' block values) are unknown
        are skipped.
        """
        check_is_fitted(self, "partition_")
        sample = X if isinstance(X, Sample) else Sample(tuple(X))
        table = dict(self.values_)
        table.update(sample.value_table())
        game = HedonicGame(self.n_agents_, table, "partial")
        seen = blocked = 0
        for T in sample.coalitions():
            try:
                blocked += core_blocks(game, self.partition_, T)
            except MissingValue:
                continue
            seen += 1
        if not seen:
            raise EmptySample("no sampled coalition could be evaluated")
        return 1 - blocked / seen
