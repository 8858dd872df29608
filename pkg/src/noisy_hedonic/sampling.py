"""Distributions over coalitions and reproducible i.i.d. draws."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .game import Coalition

WEIGHT_TOL = 1e-12


@dataclass(frozen=True)
class SamplingSpec:
    """Distribution over coalitions of ``0..n-1`` plus a seed.

    ``kind`` is one of ``"uniform"`` (all non-empty subsets), ``"list"``
    (uniform over ``coalitions``) or ``"weights"`` (``coalitions`` with
    explicit ``weights``).
    """

    n: int
    kind: str = "uniform"
    coalitions: tuple = ()
    weights: tuple = ()
    seed: int = 0

    def __post_init__(self):
        coals = tuple(c if isinstance(c, Coalition) else Coalition.from_members(c)
                      for c in self.coalitions)
        object.__setattr__(self, "coalitions", coals)
        object.__setattr__(self, "weights", tuple(self.weights))
        if self.kind == "uniform":
            if self.n < 1:
                raise ValueError("need at least one agent")
        elif self.kind == "list":
            if not coals:
                raise ValueError("an empty coalition list has no distribution")
        elif self.kind == "weights":
            if len(self.weights) != len(coals) or not coals:
                raise ValueError("weights and coalitions differ in length")
            if any(w < 0 for w in self.weights):
                raise ValueError("weights must be non-negative")
            if abs(math.fsum(self.weights) - 1) > WEIGHT_TOL:
                raise ValueError("weights must sum to 1")
        else:
            raise ValueError(f"unknown sampling kind {self.kind!r}")
        for c in coals:
            if not c or c.mask >> self.n:
                raise ValueError(f"coalition {c} is not a non-empty subset of 0..{self.n - 1}")

    def support(self) -> list[Coalition]:
        if self.kind == "uniform":
            return [Coalition(m) for m in range(1, 1 << self.n)]
        return list(self.coalitions)

    def probabilities(self) -> np.ndarray:
        if self.kind == "weights":
            w = np.asarray(self.weights, dtype=float)
            return w / w.sum()
        k = (1 << self.n) - 1 if self.kind == "uniform" else len(self.coalitions)
        return np.full(k, 1.0 / k)


def sample_coalitions(spec: SamplingSpec, m: int, seed: int | None = None) -> list[Coalition]:
    """``m`` i.i.d. coalitions; the same spec and seed give the same list."""
    if m < 0:
        raise ValueError("m must be non-negative")
    rng = np.random.default_rng(spec.seed if seed is None else seed)
    if spec.kind == "uniform":
        masks = rng.integers(1, 1 << spec.n, size=m)
        return [Coalition(int(x)) for x in masks]
    support = spec.support()
    idx = rng.choice(len(support), size=m, p=spec.probabilities())
    return [support[int(j)] for j in idx]


def split_seeds(seed: int, k: int) -> list[int]:
    """Child seeds for ``k`` parallel workers, independent of scheduling."""
    ss = np.random.SeedSequence(seed)
    return [int(s.generate_state(1, np.uint64)[0]) for s in ss.spawn(k)]


def empirical_frequencies(draws: Sequence[Coalition], support: Sequence[Coalition]) -> np.ndarray:
    index = {c.mask: j for j, c in enumerate(support)}
    counts = np.zeros(len(support))
    for c in draws:
        counts[index[c.mask]] += 1
    return counts / max(len(draws), 1)
