"""Two-agent games with full information.

Agents are 0 and 1 and the only coalitions are ``{0}``, ``{1}`` and ``{0,1}``.
Games are numbered by the observed preferences:

* game 1: both agents prefer the pair,
* game 2: both prefer being alone,
* game 3: agent 0 prefers alone, agent 1 the pair,
* game 4: the mirror of game 3.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable

from .errors import EnumerationTooLarge, InvalidAlpha, TieEncountered, UnsupportedGame
from .game import Coalition, HedonicGame, Partition, find_core_partition
from .noise import NoiseSpec, three_support, two_support
from .regimes import Region1D, superlevel_region_1d

S0 = Coalition.of(0)
S1 = Coalition.of(1)
S01 = Coalition.of(0, 1)
CASE_COALITIONS = (S0, S1, S01)
MAX_CASES = 10**6

# Case numbering for {1, A} and {B, 1, A}, written as labels of
# (alpha({0}), alpha({1}), alpha({0,1})).
CASES_2 = ["111", "11A", "1A1", "A11", "1AA", "A1A", "AA1", "AAA"]
CASES_3 = CASES_2 + [
    "11B", "1B1", "B11", "1BB", "B1B", "BB1",
    "1AB", "1BA", "A1B", "B1A", "AB1", "BA1",
    "AAB", "ABA", "ABB", "BAA", "BAB", "BBA", "BBB",
]


@dataclass(frozen=True)
class TwoAgentGame:
    """Observed values ``v0({0}), v1({1}), v0({0,1}), v1({0,1})``."""

    v0_single: float
    v1_single: float
    v0_pair: float
    v1_pair: float

    def __post_init__(self):
        vals = (self.v0_single, self.v1_single, self.v0_pair, self.v1_pair)
        if any(not v > 0 for v in vals):
            raise ValueError("values must be positive")
        if self.v0_pair == self.v0_single or self.v1_pair == self.v1_single:
            raise TieEncountered("game id needs strict preferences for both agents")

    @classmethod
    def from_game(cls, game: HedonicGame) -> "TwoAgentGame":
        if game.n != 2:
            raise ValueError("need a two-agent game")
        return cls(game.value(0, S0), game.value(1, S1), game.value(0, S01), game.value(1, S01))

    def to_game(self) -> HedonicGame:
        return HedonicGame(2, {(0, S0.mask): self.v0_single, (1, S1.mask): self.v1_single,
                               (0, S01.mask): self.v0_pair, (1, S01.mask): self.v1_pair})

    @property
    def ratio0(self):
        return self.v0_pair / self.v0_single

    @property
    def ratio1(self):
        return self.v1_pair / self.v1_single

    @property
    def r_max(self):
        return max(self.ratio0, self.ratio1)

    @property
    def r_min(self):
        return min(self.ratio0, self.ratio1)

    @property
    def game_id(self) -> int:
        pair0 = self.v0_pair > self.v0_single
        pair1 = self.v1_pair > self.v1_single
        return {(True, True): 1, (False, False): 2, (False, True): 3, (True, False): 4}[(pair0, pair1)]

    def noisy_partition(self) -> Partition:
        if self.game_id == 1:
            return Partition.grand(2)
        return Partition.singletons(2)


@dataclass(frozen=True)
class ThreeSupportSpec:
    """Support ``{alpha_down, 1, alpha_up}`` with ``P[alpha_up] = p_up``."""

    alpha_up: float
    alpha_down: float
    p_up: float
    p_down: float

    def __post_init__(self):
        three_support(self.alpha_up, self.alpha_down, self.p_up, self.p_down)

    def noise_spec(self) -> NoiseSpec:
        return three_support(self.alpha_up, self.alpha_down, self.p_up, self.p_down)


def _check(p, alpha):
    if not 0 <= p <= 1:
        raise ValueError(f"p = {p!r} is outside [0, 1]")
    if not alpha > 1:
        raise InvalidAlpha(f"alpha = {alpha!r} must exceed 1")


def branch_of(game: TwoAgentGame, alpha) -> str:
    """Name of the piecewise branch that ``alpha`` selects for ``game``."""
    if not alpha > 1:
        raise InvalidAlpha(f"alpha = {alpha!r} must exceed 1")
    k = game.game_id
    if k == 1:
        if alpha >= game.r_max:
            return "game1-top"
        if alpha >= game.r_min:
            return "game1-mid"
        return "game1-low"
    if k == 2:
        return "game2-strict" if 1 / alpha < game.r_min else "game2-loose"
    ratio = game.ratio0 if k == 3 else game.ratio1
    return f"game{k}-strict" if 1 / alpha < ratio else f"game{k}-loose"


# Prediction probability curves, one per branch.
BRANCH_CURVES: dict[str, Callable] = {
    "game1-top": lambda p: 1 - p * (1 - p * p),
    "game1-mid": lambda p: 1 - p * (1 - p),
    "game1-low": lambda p: 1 + 0 * p,
    "game2-strict": lambda p: 1 - p * p * (1 - p),
    "game2-loose": lambda p: 1 + 0 * p,
    "game3-strict": lambda p: 1 - p * (1 - p),
    "game3-loose": lambda p: 1 + 0 * p,
    "game4-strict": lambda p: 1 - p * (1 - p),
    "game4-loose": lambda p: 1 + 0 * p,
}


def predict_prob_2support(game: TwoAgentGame, p, alpha):
    """Probability that the noise-free core partition equals the observed one."""
    _check(p, alpha)
    return BRANCH_CURVES[branch_of(game, alpha)](p)


def g(p1, p2):
    """Prediction probability on the strict three-support branch of game 1."""
    q = 1 - p1 - p2
    return p2 + q * (1 - p2) ** 2 + p1 * p1 * p1


def g_expanded(p1, p2):
    return p1**3 - p1 * p2**2 + 2 * p1 * p2 - p1 - p2**3 + 3 * p2**2 - 2 * p2 + 1


def g_hessian(p1, p2):
    """Analytic second partials of ``g``."""
    return [[6 * p1, 2 - 2 * p2], [2 - 2 * p2, -2 * p1 - 6 * p2 + 6]]


def three_support_branch(game: TwoAgentGame, spec: ThreeSupportSpec) -> str:
    a1, a2 = spec.alpha_up, spec.alpha_down
    ratios = (a1, 1 / a2, a1 / a2)
    if all(x >= game.r_max for x in ratios):
        return "strict"
    if all(x < game.r_min for x in ratios):
        return "loose"
    return "other"


def predict_prob_3support(game: TwoAgentGame, spec: ThreeSupportSpec):
    if game.game_id != 1:
        raise UnsupportedGame("the three-support closed form covers game 1 only")
    branch = three_support_branch(game, spec)
    if branch == "strict":
        return g(spec.p_up, spec.p_down)
    if branch == "loose":
        return 1
    return agreement_probability(enumerate_cases(game, spec.noise_spec()))


@dataclass(frozen=True)
class Case:
    number: int
    label: str
    alphas: tuple
    probability: object
    partition: Partition
    agrees: bool


def _labels(spec: NoiseSpec):
    a = spec.support
    if len(a) == 2 and a[0] == 1:
        return {a[0]: "1", a[1]: "A"}, CASES_2
    if len(a) == 3 and a[1] == 1:
        return {a[0]: "B", a[1]: "1", a[2]: "A"}, CASES_3
    return None, None


def _core_of(vals: dict) -> Partition:
    # de-noised two-agent game; exact ties are refused
    if vals[(0, S0.mask)] == vals[(0, S01.mask)] or vals[(1, S1.mask)] == vals[(1, S01.mask)]:
        raise TieEncountered("de-noised values tie; the core depends on tie-breaking")
    return find_core_partition(HedonicGame(2, vals))


def enumerate_cases(game: TwoAgentGame, spec: NoiseSpec) -> list[Case]:
    """Every joint assignment to ``{0}, {1}, {0,1}`` with its outcome.

    Case numbers follow the conventional listing for the supports ``{1, A}``
    and ``{B, 1, A}``; other supports are listed in lexicographic index order.
    """
    l = spec.size
    if l**3 > MAX_CASES:
        raise EnumerationTooLarge(f"{l}^3 cases exceed the cap of {MAX_CASES}")
    names, order = _labels(spec)
    prob = dict(zip(spec.support, spec.probs))
    if names is None:
        combos = list(itertools.product(spec.support, repeat=3))
        labels = ["".join(str(spec.index_of(x)) for x in c) for c in combos]
    else:
        back = {v: k for k, v in names.items()}
        combos = [tuple(back[ch] for ch in lab) for lab in order]
        labels = list(order)
    target = game.noisy_partition()
    out = []
    for num, (label, (a0, a1, a01)) in enumerate(zip(labels, combos), start=1):
        vals = {
            (0, S0.mask): game.v0_single / a0,
            (1, S1.mask): game.v1_single / a1,
            (0, S01.mask): game.v0_pair / a01,
            (1, S01.mask): game.v1_pair / a01,
        }
        part = _core_of(vals)
        pr = prob[a0] * prob[a1] * prob[a01]
        out.append(Case(num, label, (a0, a1, a01), pr, part, part == target))
    return out


def agreement_probability(cases) -> object:
    total = 0
    for c in cases:
        if c.agrees:
            total += c.probability
    return total


def agreeing_case_numbers(cases) -> list[int]:
    return [c.number for c in cases if c.agrees]


def curve_for(game: TwoAgentGame, alpha) -> Callable:
    return BRANCH_CURVES[branch_of(game, alpha)]


def regime_1d_two_agent(game: TwoAgentGame, alpha, zeta, resolution: int = 10_000) -> Region1D:
    """Noise probabilities where the prediction probability reaches ``zeta``."""
    return superlevel_region_1d(curve_for(game, alpha), zeta, resolution)


def branch_regime(branch: str, zeta, resolution: int = 10_000) -> Region1D:
    try:
        fn = BRANCH_CURVES[branch]
    except KeyError:
        raise ValueError(f"unknown branch {branch!r}; choose from {sorted(BRANCH_CURVES)}") from None
    return superlevel_region_1d(fn, zeta, resolution)


# A concrete game-1 instance for each 2-support branch at alpha = 2.
# ratios are 3/2 and 5/4, so alpha = 2 is above both, 1.3 sits between
# them and 1.1 is below both.
def example_game1() -> TwoAgentGame:
    return TwoAgentGame(2, 4, 3, 5)


def example_game(k: int) -> TwoAgentGame:
    """Small representative of game ``k`` (ratios 3/2 and 5/4 or inverses)."""
    return {
        1: TwoAgentGame(2, 4, 3, 5),
        2: TwoAgentGame(3, 5, 2, 4),
        3: TwoAgentGame(3, 4, 2, 5),
        4: TwoAgentGame(2, 5, 3, 4),
    }[k]


def two_support_for(alpha, p) -> NoiseSpec:
    return two_support(alpha, p)
