"""Cardinalized three-agent motivating games and a few small fixtures.

The ordinal rankings are turned into values 4 > 3 > 2 > 1 down each agent's
list.  Agents are 0-based, so the pair ``{0,1}`` is the first two agents.
"""

from __future__ import annotations

from .game import Coalition, HedonicGame, Partition

# agent -> ranking from best to worst
NOISY_RANKINGS = {
    0: [(0, 1), (0,), (0, 1, 2), (0, 2)],
    1: [(0, 1), (1,), (0, 1, 2), (1, 2)],
    2: [(0, 1, 2), (1, 2), (0, 2), (2,)],
}

NOISE_FREE_RANKINGS = {
    0: [(0,), (0, 1), (0, 1, 2), (0, 2)],
    1: NOISY_RANKINGS[1],
    2: NOISY_RANKINGS[2],
}


def _cardinalize(rankings: dict) -> HedonicGame:
    rows = []
    for i, ranking in rankings.items():
        top = len(ranking)
        for k, members in enumerate(ranking):
            rows.append((i, members, float(top - k)))
    return HedonicGame.from_table(3, rows, "full")


def noisy_game() -> HedonicGame:
    """Observed game; its core partition is ``{{0,1},{2}}``."""
    return _cardinalize(NOISY_RANKINGS)


def noise_free_game() -> HedonicGame:
    """Underlying game; only the singletons are core-stable."""
    return _cardinalize(NOISE_FREE_RANKINGS)


def noisy_partition() -> Partition:
    return Partition.from_blocks([[0, 1], [2]], 3)


# coalitions used for the blocking-rate example
FOUR_COALITIONS = [Coalition.of(0), Coalition.of(1), Coalition.of(2), Coalition.of(0, 1)]


def top_responsive_pairs() -> HedonicGame:
    """Four agents where {0,1} and {2,3} are mutual tops.

    Each agent values a coalition by whether its partner is in it, then by size
    (smaller is better), so the choice set of agent ``i`` within any ``S`` is
    ``{i, partner}`` when the partner is present and ``{i}`` otherwise.
    """
    partner = {0: 1, 1: 0, 2: 3, 3: 2}

    def value(i, S: Coalition):
        return (10.0 if partner[i] in S else 0.0) + 5.0 - len(S)

    return HedonicGame.from_function(4, value)
