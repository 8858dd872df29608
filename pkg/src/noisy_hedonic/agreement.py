"""Agreement events between a noisy game and the noise-free game behind it.

For a coalition ``T`` and the noisy partition ``pi``, ``R`` is the set of
blocks ``pi(i)`` for ``i`` in ``T``.  The event M says every ``i`` in ``T``
weakly prefers its block to ``T`` both before and after removing the noise;
F is the same with ``T`` preferred.  ``f_T = P[M]`` and ``h_T = P[F]``.

Closed forms work from block counts only.  The oracles enumerate every joint
noise assignment to ``T`` and the blocks of ``R`` and test the event directly.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import EnumerationTooLarge
from .game import Coalition, HedonicGame, Partition
from .noise import NoiseSpec

MAX_ENUMERATION = 10**7


@dataclass(frozen=True)
class AgreementContext:
    """Blocks met by ``T`` and the value ratios the index sets are built from.

    ``ratios[B]`` is the smallest ``v_i(B) / v_i(T)`` over members ``i`` of ``T``
    whose block is ``B`` and ``ratios_max[B]`` the largest; the first decides
    membership in the f-side sets and the second in the h-side sets.
    """

    T: Coalition
    pi_tilde: Partition
    R: tuple
    ratios: dict
    ratios_max: dict
    degenerate: bool

    @property
    def R_size(self) -> int:
        return len(self.R)


def build_context(noisy_game: HedonicGame, pi_tilde: Partition, T: Coalition) -> AgreementContext:
    if not T:
        raise ValueError("T must be non-empty")
    lo: dict = {}
    hi: dict = {}
    for i in T:
        B = pi_tilde.block_of(i)
        r = noisy_game.value(i, B) / noisy_game.value(i, T)
        lo[B] = r if B not in lo else min(lo[B], r)
        hi[B] = r if B not in hi else max(hi[B], r)
    R = tuple(sorted(lo))
    degenerate = R == (T,)
    return AgreementContext(T, pi_tilde, R, lo, hi, degenerate)


@dataclass(frozen=True)
class IndexSets:
    """Sizes of the f-side and h-side block sets for each pair ``a_r > a_s``.

    Keys are ``(r, s)`` indices into the support.
    """

    I_sizes: dict = field(default_factory=dict)
    J_sizes: dict = field(default_factory=dict)


def _pairs(spec: NoiseSpec):
    a = spec.support
    return [(r, s) for r in range(len(a)) for s in range(len(a)) if a[r] > a[s]]


def index_sets(spec: NoiseSpec, ctx: AgreementContext) -> IndexSets:
    a = spec.support
    I, J = {}, {}
    for r, s in _pairs(spec):
        up = a[r] / a[s]
        down = a[s] / a[r]
        I[(r, s)] = sum(1 for B in ctx.R if ctx.ratios[B] >= up)
        # F needs v_i(B)/v_i(T) <= a(B)/a(T); with a(T)=a_r, a(B)=a_s that is `down`
        J[(r, s)] = sum(1 for B in ctx.R if ctx.ratios_max[B] <= down)
    return IndexSets(I, J)


def _pair_sum(spec, sizes, k, lead_is_r):
    p = spec.probs
    total = 0
    for (r, s), m in sizes.items():
        lead, other = (p[r], p[s]) if lead_is_r else (p[s], p[r])
        total += lead ** (k - m + 1) * ((lead + other) ** m - lead ** m)
    return total


def f_T_closed(spec: NoiseSpec, ctx: AgreementContext, sets: IndexSets | None = None):
    """Pairwise-sum formula for ``P[M]``; 1 for a degenerate context."""
    if ctx.degenerate:
        return 1
    sets = sets or index_sets(spec, ctx)
    k = ctx.R_size
    p = spec.probs
    base = sum(p[a] * sum(p[: a + 1]) ** k for a in range(len(p)))
    return _pair_sum(spec, sets.I_sizes, k, lead_is_r=False) + base


def h_T_closed(spec: NoiseSpec, ctx: AgreementContext, sets: IndexSets | None = None):
    """Pairwise-sum formula for ``P[F]``; 1 for a degenerate context."""
    if ctx.degenerate:
        return 1
    sets = sets or index_sets(spec, ctx)
    k = ctx.R_size
    p = spec.probs
    base = sum(p[a] * sum(p[a:]) ** k for a in range(len(p)))
    return _pair_sum(spec, sets.J_sizes, k, lead_is_r=True) + base


def f_two_support(p, R_size: int, I_size: int):
    """``p + (1-p)**(|R| - |I| + 1)`` for support ``{1, alpha}``."""
    return p + (1 - p) ** (R_size - I_size + 1)


def h_two_support(p, R_size: int, J_size: int):
    return (1 - p) + p ** (R_size - J_size + 1)


def _oracle(noisy_game, pi_tilde, T, spec, blocks_first: bool):
    ctx = build_context(noisy_game, pi_tilde, T)
    coals = [T] + [B for B in ctx.R if B != T]
    l = spec.size
    if l ** len(coals) > MAX_ENUMERATION:
        raise EnumerationTooLarge(
            f"{l}^{len(coals)} assignments exceed the cap of {MAX_ENUMERATION}"
        )
    members = {B: [i for i in T if pi_tilde.block_of(i) == B] for B in ctx.R}
    vt = {i: noisy_game.value(i, T) for i in T}
    vb = {i: noisy_game.value(i, pi_tilde.block_of(i)) for i in T}

    # noisy half of the event does not depend on the assignment
    if blocks_first:
        noisy_ok = all(vb[i] >= vt[i] for i in T)
    else:
        noisy_ok = all(vt[i] >= vb[i] for i in T)

    a, probs = spec.support, spec.probs
    exact = spec.is_exact()
    terms = []
    total_mass = []
    for combo in itertools.product(range(l), repeat=len(coals)):
        pr = 1
        for j in combo:
            pr *= probs[j]
        total_mass.append(pr)
        if not noisy_ok:
            continue
        aT = a[combo[0]]
        alpha = dict(zip(coals, (a[j] for j in combo)))
        ok = True
        for B, ms in members.items():
            aB = alpha[B]
            for i in ms:
                # v_i(B) vs v_i(T) after removing noise, cross-multiplied
                lhs, rhs = vb[i] * aT, vt[i] * aB
                if (blocks_first and lhs < rhs) or (not blocks_first and rhs < lhs):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            terms.append(pr)
    if exact:
        return Fraction(sum(terms)), Fraction(sum(total_mass))
    return math.fsum(terms), math.fsum(total_mass)


def f_T_oracle(noisy_game: HedonicGame, pi_tilde: Partition, T: Coalition, spec: NoiseSpec):
    """``P[M]`` by enumerating every assignment to ``T`` and the blocks of ``R``."""
    return _oracle(noisy_game, pi_tilde, T, spec, True)[0]


def h_T_oracle(noisy_game: HedonicGame, pi_tilde: Partition, T: Coalition, spec: NoiseSpec):
    """``P[F]`` by the same enumeration with the preferences reversed."""
    return _oracle(noisy_game, pi_tilde, T, spec, False)[0]


def noisy_premise(noisy_game, pi_tilde, T, blocks_first: bool = True) -> bool:
    """Whether the observed half of M (or of F, when ``blocks_first`` is false) holds.

    When it fails the oracle is 0 while the closed form still counts blocks.
    """
    pairs = [(noisy_game.value(i, pi_tilde.block_of(i)), noisy_game.value(i, T)) for i in T]
    if blocks_first:
        return all(b >= t for b, t in pairs)
    return all(t >= b for b, t in pairs)


def oracle_mass(noisy_game, pi_tilde, T, spec):
    """Total probability of all enumerated assignments (should be 1)."""
    return _oracle(noisy_game, pi_tilde, T, spec, True)[1]


def prediction_epsilon(eps_tilde, agreement):
    """``1 - (1 - eps_tilde) * agreement``."""
    _unit(eps_tilde, "eps_tilde")
    _unit(agreement, "agreement")
    return 1 - (1 - eps_tilde) * agreement


def _unit(x, name):
    if not 0 <= x <= 1:
        raise ValueError(f"{name} = {x!r} is outside [0, 1]")


@dataclass(frozen=True)
class PredictionReport:
    eps_tilde: float
    agreement: float
    threshold: float
    mode: str
    epsilon: float
    verdict: bool


def robustness_verdict(eps_tilde, agreement, threshold, mode: str = "stable") -> PredictionReport:
    """Check ``agreement >= threshold`` and report the error it guarantees.

    ``mode`` is ``"stable"`` (threshold plays the role of zeta) or
    ``"non-stable"`` (eta); the arithmetic is the same for both.
    """
    if mode not in ("stable", "non-stable"):
        raise ValueError(f"unknown mode {mode!r}")
    _unit(threshold, "threshold")
    eps = prediction_epsilon(eps_tilde, threshold)
    return PredictionReport(eps_tilde, agreement, threshold, mode, eps, agreement >= threshold)


def ratio_fixture(ratios, value_T=Fraction(1), coverage="partial"):
    """Game, partition and ``T`` realizing the given per-block ratios.

    Agent ``j < k`` sits in block ``{j, k + j}`` and ``T = {0..k-1}``, so ``T``
    meets ``k`` distinct blocks and block ``j`` has ratio ``ratios[j]``.
    """
    k = len(ratios)
    if k < 1:
        raise ValueError("need at least one block")
    T = Coalition((1 << k) - 1)
    values = {}
    blocks = []
    for j, rho in enumerate(ratios):
        B = Coalition.of(j, k + j)
        blocks.append(B)
        values[(j, T.mask)] = value_T
        values[(j, B.mask)] = value_T * rho
        values[(k + j, B.mask)] = value_T
    game = HedonicGame(2 * k, values, coverage)
    return game, Partition(tuple(blocks), 2 * k), T


def coalition_report(noisy_game, pi_tilde, T, spec, eps_tilde, zeta, eta=None) -> dict:
    """Closed forms, oracles and the stable-mode verdict for one coalition.

    The oracle value is used for the error and the verdict.
    """
    ctx = build_context(noisy_game, pi_tilde, T)
    sets = index_sets(spec, ctx)
    f_o = f_T_oracle(noisy_game, pi_tilde, T, spec)
    h_o = h_T_oracle(noisy_game, pi_tilde, T, spec)
    verdict = robustness_verdict(eps_tilde, f_o, zeta, "stable")
    rep = {
        "coalition": list(T.members),
        "R_size": ctx.R_size,
        "degenerate": ctx.degenerate,
        "premise_f": noisy_premise(noisy_game, pi_tilde, T, True),
        "premise_h": noisy_premise(noisy_game, pi_tilde, T, False),
        "I_sizes": {f"{r},{s}": v for (r, s), v in sets.I_sizes.items()},
        "J_sizes": {f"{r},{s}": v for (r, s), v in sets.J_sizes.items()},
        "f_closed": f_T_closed(spec, ctx, sets),
        "f_oracle": f_o,
        "h_closed": h_T_closed(spec, ctx, sets),
        "h_oracle": h_o,
        "epsilon": prediction_epsilon(eps_tilde, f_o),
        "verdict": verdict.verdict,
    }
    if eta is not None:
        rep["verdict_non_stable"] = robustness_verdict(eps_tilde, h_o, eta, "non-stable").verdict
    return rep
