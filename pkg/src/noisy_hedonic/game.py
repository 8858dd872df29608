"""Coalitions, hedonic games, partitions and exact core-stability checks.

Agents are the integers ``0..n-1``.  A coalition is stored as a bitmask so
that subset scans over ``2**n`` coalitions are plain integer loops.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Callable, Iterable, Iterator, Mapping

import numpy as np

from .errors import (
    AgentNotMember,
    CoverageInsufficient,
    EmptyCore,
    InstanceTooLarge,
    MissingValue,
)

MAX_SCAN_AGENTS = 24
MAX_PARTITION_AGENTS = 12


@dataclass(frozen=True, order=True)
class Coalition:
    """A set of agents in bitmask form."""

    mask: int

    def __post_init__(self):
        if self.mask < 0:
            raise ValueError("coalition mask must be non-negative")

    @classmethod
    def of(cls, *members: int) -> "Coalition":
        return cls.from_members(members)

    @classmethod
    def from_members(cls, members: Iterable[int]) -> "Coalition":
        mask = 0
        for i in members:
            if i < 0:
                raise ValueError(f"agent index must be non-negative, got {i}")
            mask |= 1 << int(i)
        return cls(mask)

    @property
    def members(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.mask.bit_length()) if self.mask >> i & 1)

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def __contains__(self, agent: int) -> bool:
        return agent >= 0 and bool(self.mask >> agent & 1)

    def __bool__(self) -> bool:
        return self.mask != 0

    def issubset(self, other: "Coalition") -> bool:
        return self.mask & ~other.mask == 0

    def __or__(self, other: "Coalition") -> "Coalition":
        return Coalition(self.mask | other.mask)

    def __and__(self, other: "Coalition") -> "Coalition":
        return Coalition(self.mask & other.mask)

    def __sub__(self, other: "Coalition") -> "Coalition":
        return Coalition(self.mask & ~other.mask)

    def __repr__(self) -> str:
        return "{" + ",".join(map(str, self.members)) + "}"


def all_coalitions(n: int) -> Iterator[Coalition]:
    """Every non-empty coalition of ``n`` agents, in increasing mask order."""
    for mask in range(1, 1 << n):
        yield Coalition(mask)


def coalitions_containing(agent: int, n: int) -> Iterator[Coalition]:
    bit = 1 << agent
    for mask in range(1, 1 << n):
        if mask & bit:
            yield Coalition(mask)


@dataclass(frozen=True)
class HedonicGame:
    """Cardinal value table ``v_i(S)`` for agents ``i`` in coalitions ``S``.

    ``coverage`` is ``"full"`` when every (agent, coalition containing it)
    pair has a value, otherwise ``"partial"``.  Noisy games use the same type.
    """

    n: int
    values: Mapping[tuple[int, int], float]
    coverage: str = "full"

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("a game needs at least one agent")
        if self.coverage not in ("full", "partial"):
            raise ValueError(f"unknown coverage {self.coverage!r}")
        table = {}
        for (i, mask), v in dict(self.values).items():
            if isinstance(mask, Coalition):
                mask = mask.mask
            if not 0 <= i < self.n:
                raise ValueError(f"agent {i} outside 0..{self.n - 1}")
            if mask >> self.n:
                raise ValueError(f"coalition {Coalition(mask)} has agents outside 0..{self.n - 1}")
            if not mask >> i & 1:
                raise AgentNotMember(f"agent {i} is not in coalition {Coalition(mask)}")
            if not v > 0:
                raise ValueError(f"v_{i}({Coalition(mask)}) = {v!r} is not positive")
            table[(i, mask)] = v
        if self.coverage == "full":
            expected = self.n * (1 << (self.n - 1))
            if len(table) != expected:
                raise CoverageInsufficient(
                    f"full coverage needs {expected} values, got {len(table)}"
                )
        object.__setattr__(self, "values", MappingProxyType(table))

    @classmethod
    def from_function(cls, n: int, fn: Callable[[int, Coalition], float]) -> "HedonicGame":
        """Build a full game by calling ``fn(i, S)`` for every ``i in S``."""
        values = {}
        for S in all_coalitions(n):
            for i in S:
                values[(i, S.mask)] = fn(i, S)
        return cls(n, values, "full")

    @classmethod
    def from_table(cls, n: int, rows: Iterable[tuple[int, Iterable[int], float]],
                   coverage: str | None = None) -> "HedonicGame":
        values = {(i, Coalition.from_members(S).mask): v for i, S, v in rows}
        if coverage is None:
            coverage = "full" if len(values) == n * (1 << (n - 1)) else "partial"
        return cls(n, values, coverage)

    @property
    def agents(self) -> range:
        return range(self.n)

    def has_value(self, i: int, S: Coalition) -> bool:
        return (i, S.mask) in self.values

    def value(self, i: int, S: Coalition):
        if i not in S:
            raise AgentNotMember(f"agent {i} is not in coalition {S}")
        try:
            return self.values[(i, S.mask)]
        except KeyError:
            raise MissingValue(i, S) from None

    def coalitions(self) -> list[Coalition]:
        """Distinct coalitions that carry at least one stored value."""
        return [Coalition(m) for m in sorted({m for _, m in self.values})]

    def map_values(self, fn: Callable[[int, Coalition, float], float]) -> "HedonicGame":
        return HedonicGame(
            self.n,
            {(i, m): fn(i, Coalition(m), v) for (i, m), v in self.values.items()},
            self.coverage,
        )

    def restrict(self, pairs: Iterable[tuple[int, Coalition]]) -> "HedonicGame":
        """Partial game holding only the listed (agent, coalition) values."""
        values = {(i, S.mask): self.value(i, S) for i, S in pairs}
        return HedonicGame(self.n, values, "partial")


@dataclass(frozen=True)
class Partition:
    """Exact cover of ``0..n-1`` by disjoint non-empty blocks."""

    blocks: tuple[Coalition, ...]
    n: int = field(default=-1)

    def __post_init__(self):
        blocks = tuple(b if isinstance(b, Coalition) else Coalition.from_members(b)
                       for b in self.blocks)
        blocks = tuple(sorted(blocks, key=lambda b: (b.mask & -b.mask)))
        seen = 0
        for b in blocks:
            if not b:
                raise ValueError("partition blocks must be non-empty")
            if seen & b.mask:
                raise ValueError(f"block {b} overlaps another block")
            seen |= b.mask
        n = self.n if self.n >= 0 else seen.bit_length()
        if seen != (1 << n) - 1:
            raise ValueError(f"blocks {blocks} do not cover agents 0..{n - 1}")
        object.__setattr__(self, "blocks", blocks)
        object.__setattr__(self, "n", n)
        lookup = [0] * n
        for k, b in enumerate(blocks):
            for i in b:
                lookup[i] = k
        object.__setattr__(self, "_lookup", tuple(lookup))

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[int]], n: int | None = None) -> "Partition":
        return cls(tuple(Coalition.from_members(b) for b in blocks), -1 if n is None else n)

    @classmethod
    def singletons(cls, n: int) -> "Partition":
        return cls(tuple(Coalition.of(i) for i in range(n)), n)

    @classmethod
    def grand(cls, n: int) -> "Partition":
        return cls((Coalition((1 << n) - 1),), n)

    @classmethod
    def from_labels(cls, labels: Iterable[int]) -> "Partition":
        groups: dict[int, int] = {}
        labels = list(labels)
        for i, lab in enumerate(labels):
            groups[lab] = groups.get(lab, 0) | 1 << i
        return cls(tuple(Coalition(m) for m in groups.values()), len(labels))

    def block_index(self, i: int) -> int:
        return self._lookup[i]

    def block_of(self, i: int) -> Coalition:
        return self.blocks[self._lookup[i]]

    def labels(self) -> tuple[int, ...]:
        """Restricted-growth encoding: blocks numbered by first appearance."""
        return self._lookup

    def as_lists(self) -> list[list[int]]:
        return [list(b.members) for b in self.blocks]

    def __len__(self) -> int:
        return len(self.blocks)

    def __iter__(self) -> Iterator[Coalition]:
        return iter(self.blocks)

    def __repr__(self) -> str:
        return "Partition(" + ", ".join(map(repr, self.blocks)) + ")"


class Ordering(enum.Enum):
    S_BETTER = "S-better"
    T_BETTER = "T-better"
    INDIFFERENT = "indifferent"


def prefers(game: HedonicGame, i: int, S: Coalition, T: Coalition) -> Ordering:
    """Compare ``v_i(S)`` with ``v_i(T)``; equality is indifference."""
    vs, vt = game.value(i, S), game.value(i, T)
    if vs > vt:
        return Ordering.S_BETTER
    if vt > vs:
        return Ordering.T_BETTER
    return Ordering.INDIFFERENT


def core_blocks(game: HedonicGame, pi: Partition, T: Coalition) -> bool:
    """True iff every member of ``T`` strictly prefers ``T`` to its block."""
    if not T:
        raise ValueError("the empty coalition cannot block")
    for i in T:
        if not game.value(i, T) > game.value(i, pi.block_of(i)):
            return False
    return True


def _check_full(game: HedonicGame, limit: int):
    if game.coverage != "full":
        raise CoverageInsufficient("exact core checks need a full-coverage game")
    if game.n > limit:
        raise InstanceTooLarge(f"n = {game.n} exceeds the limit of {limit} agents")


def is_core_stable(game: HedonicGame, pi: Partition) -> bool:
    """Exhaustive scan of all ``2**n - 1`` coalitions for a core-blocker."""
    _check_full(game, MAX_SCAN_AGENTS)
    if pi.n != game.n:
        raise ValueError("partition and game disagree on the number of agents")
    return not any(core_blocks(game, pi, T) for T in all_coalitions(game.n))


def blocking_coalitions(game: HedonicGame, pi: Partition) -> list[Coalition]:
    _check_full(game, MAX_SCAN_AGENTS)
    return [T for T in all_coalitions(game.n) if core_blocks(game, pi, T)]


class _BetterSets:
    """Per-agent bitsets over coalition masks.

    ``better[i][S]`` has bit ``T`` set iff ``i`` is not in ``T`` or
    ``v_i(T) > v_i(S)``.  A partition is blocked by ``T`` iff bit ``T`` survives
    the AND of ``better[i][pi(i)]`` over all agents.
    """

    def __init__(self, game: HedonicGame):
        n = game.n
        self.n = n
        self.better: list[dict[int, int]] = []
        for i in range(n):
            bit = 1 << i
            without_i = 0
            for m in range(1 << n):
                if not m & bit:
                    without_i |= 1 << m
            coals = [m for m in range(1, 1 << n) if m & bit]
            coals.sort(key=lambda m: game.values[(i, m)], reverse=True)
            table = {}
            acc = 0
            k = 0
            while k < len(coals):
                v = game.values[(i, coals[k])]
                j = k
                while j < len(coals) and game.values[(i, coals[j])] == v:
                    j += 1
                for m in coals[k:j]:
                    table[m] = acc | without_i
                for m in coals[k:j]:
                    acc |= 1 << m
                k = j
            self.better.append(table)
        self._subset_bits: dict[int, int] = {}

    def subsets_of(self, mask: int) -> int:
        bits = self._subset_bits.get(mask)
        if bits is None:
            bits = 0
            sub = mask
            while sub:
                bits |= 1 << sub
                sub = (sub - 1) & mask
            self._subset_bits[mask] = bits
        return bits


def _stable_partitions(game: HedonicGame, first_only: bool = False):
    sets = _BetterSets(game)
    n = game.n
    full = (1 << n) - 1
    everything = (1 << (1 << n)) - 1
    found: list[tuple[int, ...]] = []

    def rec(assigned: int, alive: int, blocks: list[int]):
        if assigned == full:
            found.append(tuple(blocks))
            return first_only
        low = (~assigned & full) & -(~assigned & full)
        rest = full & ~assigned & ~low
        sub = rest
        while True:
            block = sub | low
            cand = alive
            for i in range(n):
                if block >> i & 1:
                    cand &= sets.better[i][block]
            covered = assigned | block
            if not cand & sets.subsets_of(covered) & ~1:
                blocks.append(block)
                if rec(covered, cand, blocks):
                    return True
                blocks.pop()
            if sub == 0:
                break
            sub = (sub - 1) & rest
        return False

    rec(0, everything, [])
    return found


def _labels_of(blocks: tuple[int, ...], n: int) -> tuple[int, ...]:
    return Partition(tuple(Coalition(b) for b in blocks), n).labels()


def core_stable_partitions(game: HedonicGame) -> list[Partition]:
    """Every core-stable partition, sorted by restricted-growth encoding."""
    _check_full(game, MAX_PARTITION_AGENTS)
    found = _stable_partitions(game)
    parts = [Partition(tuple(Coalition(b) for b in blocks), game.n) for blocks in found]
    return sorted(parts, key=Partition.labels)


def find_core_partition(game: HedonicGame) -> Partition:
    """Core-stable partition with the lexicographically smallest encoding.

    Raises :class:`EmptyCore` when the enumeration finds no stable partition.
    """
    _check_full(game, MAX_PARTITION_AGENTS)
    found = _stable_partitions(game)
    if not found:
        raise EmptyCore("no core-stable partition exists")
    best = min(found, key=lambda b: _labels_of(b, game.n))
    return Partition(tuple(Coalition(b) for b in best), game.n)


def value_array(game: HedonicGame) -> np.ndarray:
    """Dense ``n x 2**n`` float array of values, NaN where absent."""
    arr = np.full((game.n, 1 << game.n), np.nan)
    for (i, m), v in game.values.items():
        arr[i, m] = float(v)
    return arr
