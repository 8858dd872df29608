"""Multiplicative noise on coalition values.

Every coalition ``S`` draws one factor ``alpha(S)`` that scales the values of
all its members: ``noisy_v_i(S) = alpha(S) * v_i(S)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import MissingAssignment
from .game import Coalition, HedonicGame

PROB_TOL = 1e-12


@dataclass(frozen=True)
class NoiseSpec:
    """Finite-support noise distribution: ``P[alpha = support[j]] = probs[j]``.

    Values may be floats or :class:`fractions.Fraction`; with Fractions every
    downstream probability is computed exactly.
    """

    support: tuple
    probs: tuple

    def __post_init__(self):
        support = tuple(self.support)
        probs = tuple(self.probs)
        if not support:
            raise ValueError("noise support must be non-empty")
        if len(support) != len(probs):
            raise ValueError("support and probs differ in length")
        if any(not a > 0 for a in support):
            raise ValueError("noise values must be positive")
        if any(not b > a for a, b in zip(support, support[1:])):
            raise ValueError("noise support must be strictly increasing")
        if any(p < 0 for p in probs):
            raise ValueError("probabilities must be non-negative")
        total = sum(probs)
        if isinstance(total, Fraction) or all(isinstance(p, int) for p in probs):
            if total != 1:
                raise ValueError(f"probabilities sum to {total}, not 1")
        elif abs(total - 1) > PROB_TOL:
            raise ValueError(f"probabilities sum to {total!r}, not 1")
        object.__setattr__(self, "support", support)
        object.__setattr__(self, "probs", probs)

    @property
    def size(self) -> int:
        return len(self.support)

    def __len__(self) -> int:
        return len(self.support)

    def index_of(self, alpha) -> int:
        return self.support.index(alpha)

    def is_exact(self) -> bool:
        return all(isinstance(x, (int, Fraction)) for x in self.support + self.probs)


def two_support(alpha, p) -> NoiseSpec:
    """Support ``{1, alpha}`` with ``P[alpha] = p``; ``alpha`` must exceed 1."""
    if not alpha > 1:
        raise ValueError("the inflating noise value must exceed 1")
    return NoiseSpec((1, alpha), (1 - p, p))


def three_support(alpha_up, alpha_down, p_up, p_down) -> NoiseSpec:
    """Support ``{alpha_down, 1, alpha_up}`` with ``alpha_down < 1 < alpha_up``."""
    if not alpha_up > 1 or not 0 < alpha_down < 1:
        raise ValueError("need 0 < alpha_down < 1 < alpha_up")
    if p_up < 0 or p_down < 0 or p_up + p_down > 1:
        raise ValueError("need p_up, p_down >= 0 and p_up + p_down <= 1")
    return NoiseSpec((alpha_down, 1, alpha_up), (p_down, 1 - p_up - p_down, p_up))


@dataclass(frozen=True)
class NoiseAssignment:
    """Chosen noise factor per coalition (keyed by bitmask)."""

    alphas: Mapping[int, object]

    def __post_init__(self):
        table = {}
        for key, a in dict(self.alphas).items():
            mask = key.mask if isinstance(key, Coalition) else int(key)
            if not a > 0:
                raise ValueError(f"noise factor for {Coalition(mask)} must be positive")
            table[mask] = a
        object.__setattr__(self, "alphas", MappingProxyType(table))

    @classmethod
    def constant(cls, coalitions: Iterable[Coalition], alpha) -> "NoiseAssignment":
        return cls({S.mask: alpha for S in coalitions})

    def __getitem__(self, S: Coalition):
        try:
            return self.alphas[S.mask]
        except KeyError:
            raise MissingAssignment(f"no noise factor assigned to {S}") from None

    def __contains__(self, S: Coalition) -> bool:
        return S.mask in self.alphas

    def __len__(self) -> int:
        return len(self.alphas)

    def items(self):
        return ((Coalition(m), a) for m, a in sorted(self.alphas.items()))

    def within(self, spec: NoiseSpec) -> bool:
        allowed = set(spec.support)
        return all(a in allowed for a in self.alphas.values())


def apply_noise(game: HedonicGame, assignment: NoiseAssignment) -> HedonicGame:
    """Scale every stored ``v_i(S)`` by ``assignment[S]``."""
    return game.map_values(lambda i, S, v: assignment[S] * v)


def remove_noise(noisy: HedonicGame, assignment: NoiseAssignment) -> HedonicGame:
    """Inverse of :func:`apply_noise`: divide each value by its factor."""
    return noisy.map_values(lambda i, S, v: v / assignment[S])


def coalition_rng(seed: int, S: Coalition) -> np.random.Generator:
    # Keyed by (seed, mask) so a coalition's draw does not depend on order.
    return np.random.default_rng([int(seed) & (2**64 - 1), S.mask])


def draw_noise(spec: NoiseSpec, coalitions: Sequence[Coalition], seed: int) -> NoiseAssignment:
    """Independent draw of ``alpha(S)`` for each coalition."""
    probs = np.array([float(p) for p in spec.probs])
    probs = probs / probs.sum()
    cdf = np.cumsum(probs)
    out = {}
    for S in coalitions:
        u = coalition_rng(seed, S).random()
        j = int(np.searchsorted(cdf, u, side="right"))
        out[S.mask] = spec.support[min(j, spec.size - 1)]
    return NoiseAssignment(out)


@dataclass(frozen=True)
class AdditiveGame:
    """Value table on the additive scale; entries may be any finite real."""

    n: int
    values: Mapping[tuple[int, int], float]
    coverage: str = "full"

    def __post_init__(self):
        table = {}
        for (i, m), v in dict(self.values).items():
            mask = m.mask if isinstance(m, Coalition) else int(m)
            if not mask >> i & 1:
                raise ValueError(f"agent {i} is not in coalition {Coalition(mask)}")
            if not math.isfinite(v):
                raise ValueError(f"value for agent {i} in {Coalition(mask)} is not finite")
            table[(i, mask)] = v
        object.__setattr__(self, "values", MappingProxyType(table))

    def add_noise(self, levels: Mapping) -> "AdditiveGame":
        """``v_i(S) + levels[S]`` for every stored entry.

        ``levels`` maps coalitions (or masks) to real shifts, possibly negative.
        """
        shift = _by_mask(levels)
        try:
            values = {(i, m): v + shift[m] for (i, m), v in self.values.items()}
        except KeyError as exc:
            raise MissingAssignment(f"no noise level for {Coalition(exc.args[0])}") from None
        return AdditiveGame(self.n, values, self.coverage)


def additive_to_multiplicative(game) -> HedonicGame:
    """Exponentiate every value so additive noise becomes multiplicative.

    Accepts an :class:`AdditiveGame` or a :class:`HedonicGame`.  Noise ``c`` added
    on the original scale becomes the factor ``exp(c)`` on the lifted game.
    Raises :class:`OverflowError` when ``exp(v)`` is not representable.
    """
    values = {}
    for (i, m), v in game.values.items():
        try:
            lifted = math.exp(v)
        except OverflowError:
            raise OverflowError(
                f"exp(v_{i}({Coalition(m)})) overflows for v = {v!r}; rescale first"
            ) from None
        if lifted == 0.0:
            raise OverflowError(
                f"exp(v_{i}({Coalition(m)})) underflows to 0 for v = {v!r}; rescale first"
            )
        values[(i, m)] = lifted
    return HedonicGame(game.n, values, game.coverage)


def _by_mask(levels: Mapping) -> dict[int, float]:
    if isinstance(levels, NoiseAssignment):
        return dict(levels.alphas)
    return {(k.mask if isinstance(k, Coalition) else int(k)): v for k, v in levels.items()}


def exp_assignment(levels: Mapping) -> NoiseAssignment:
    """Additive noise levels mapped to their multiplicative factors."""
    return NoiseAssignment({m: math.exp(a) for m, a in _by_mask(levels).items()})
