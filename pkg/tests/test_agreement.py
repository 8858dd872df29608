from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from noisy_hedonic import agreement as ag
from noisy_hedonic import presets
from noisy_hedonic.errors import EnumerationTooLarge
from noisy_hedonic.game import Coalition, HedonicGame, Partition
from noisy_hedonic.noise import NoiseSpec, two_support


def test_context_examples(noisy):
    pi = presets.noisy_partition()
    c = ag.build_context(noisy, pi, Coalition.of(0, 1))
    assert c.degenerate and c.R == (Coalition.of(0, 1),)
    c = ag.build_context(noisy, pi, Coalition.of(0, 2))
    assert set(c.R) == {Coalition.of(0, 1), Coalition.of(2)} and c.R_size == 2
    c = ag.build_context(noisy, Partition.singletons(3), Coalition.of(0, 1, 2))
    assert c.R_size == 3


def test_degenerate_is_one(noisy):
    pi = presets.noisy_partition()
    T = Coalition.of(0, 1)
    spec = two_support(F(2), F(1, 3))
    ctx = ag.build_context(noisy, pi, T)
    assert ag.f_T_closed(spec, ctx) == 1 == ag.h_T_closed(spec, ctx)
    assert ag.f_T_oracle(noisy, pi, T, spec) == 1 == ag.h_T_oracle(noisy, pi, T, spec)


def test_reference_values():
    spec = two_support(2.0, 0.5)
    g, pi, T = ag.ratio_fixture([F(3, 2)])
    ctx = ag.build_context(g, pi, T)
    assert ag.f_T_closed(spec, ctx) == pytest.approx(0.75)
    g, pi, T = ag.ratio_fixture([F(3), F(3, 2)])
    ctx = ag.build_context(g, pi, T)
    assert ag.index_sets(spec, ctx).I_sizes[(1, 0)] == 1
    assert ag.f_T_closed(spec, ctx) == pytest.approx(0.75) == ag.f_T_oracle(g, pi, T, spec)
    g, pi, T = ag.ratio_fixture([F(3, 4)])
    ctx = ag.build_context(g, pi, T)
    assert ag.h_T_closed(spec, ctx) == pytest.approx(0.75)


@pytest.mark.parametrize("p", [F(0), F(1)])
def test_endpoints(p):
    spec = two_support(F(2), p)
    for ratios in ([F(1)], [F(1), F(3)], [F(3, 2)] * 3):
        g, pi, T = ag.ratio_fixture(ratios)
        ctx = ag.build_context(g, pi, T)
        assert ag.f_T_closed(spec, ctx) == 1 == ag.f_T_oracle(g, pi, T, spec)
    for ratios in ([F(1)], [F(1, 3), F(1)]):
        g, pi, T = ag.ratio_fixture(ratios)
        ctx = ag.build_context(g, pi, T)
        assert ag.h_T_closed(spec, ctx) == 1 == ag.h_T_oracle(g, pi, T, spec)


ratio_f = st.sampled_from([F(1), F(3, 2), F(2), F(5, 2), F(4)])
ratio_h = st.sampled_from([F(1), F(2, 3), F(1, 2), F(2, 5), F(1, 4)])
alpha_s = st.sampled_from([F(3, 2), F(2), F(3)])
p_s = st.integers(0, 20).map(lambda k: F(k, 20))


@settings(max_examples=60, deadline=None)
@given(st.lists(ratio_f, min_size=1, max_size=4), alpha_s, p_s)
def test_f_closed_equals_oracle(ratios, alpha, p):
    spec = two_support(alpha, p)
    g, pi, T = ag.ratio_fixture(ratios)
    ctx = ag.build_context(g, pi, T)
    I = ag.index_sets(spec, ctx).I_sizes[(1, 0)]
    closed = ag.f_T_closed(spec, ctx)
    assert closed == ag.f_T_oracle(g, pi, T, spec) == ag.f_two_support(p, len(ratios), I)
    assert ag.oracle_mass(g, pi, T, spec) == 1


@settings(max_examples=60, deadline=None)
@given(st.lists(ratio_h, min_size=1, max_size=4), alpha_s, p_s)
def test_h_closed_equals_oracle(ratios, alpha, p):
    spec = two_support(alpha, p)
    g, pi, T = ag.ratio_fixture(ratios)
    ctx = ag.build_context(g, pi, T)
    J = ag.index_sets(spec, ctx).J_sizes[(1, 0)]
    assert ag.h_T_closed(spec, ctx) == ag.h_T_oracle(g, pi, T, spec) == ag.h_two_support(p, len(ratios), J)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5), st.integers(0, 5), p_s)
def test_two_support_monotone(R, I, p):
    I = min(I, R)
    if I < R:
        assert ag.f_two_support(p, R, I + 1) >= ag.f_two_support(p, R, I)
    assert ag.f_two_support(p, R + 1, I) <= ag.f_two_support(p, R, I)


def test_index_set_order_on_ratios_above_one():
    spec = NoiseSpec((F(1, 2), F(1), F(2)), (F(1, 4), F(1, 2), F(1, 4)))
    g, pi, T = ag.ratio_fixture([F(1), F(3), F(5)])
    ctx = ag.build_context(g, pi, T)
    s = ag.index_sets(spec, ctx)
    for key, m in s.I_sizes.items():
        assert 0 <= m <= ctx.R_size


def test_minimum_ratio_rule():
    # two members of T share a block; the weaker ratio decides membership
    T = Coalition.of(0, 1)
    B = Coalition.of(0, 1, 2)
    values = {(0, T.mask): 1, (1, T.mask): 1, (0, B.mask): 3, (1, B.mask): F(3, 2), (2, B.mask): 1}
    g = HedonicGame(3, values, "partial")
    pi = Partition((B,), 3)
    ctx = ag.build_context(g, pi, T)
    assert ctx.ratios[B] == F(3, 2)
    spec = two_support(F(2), F(1, 2))
    assert ag.index_sets(spec, ctx).I_sizes[(1, 0)] == 0
    assert ag.f_T_closed(spec, ctx) == ag.f_T_oracle(g, pi, T, spec)


def test_three_support_closed_is_lower_bound():
    spec = NoiseSpec((F(1, 2), F(1), F(2)), (F(1, 5), F(1, 2), F(3, 10)))
    g, pi, T = ag.ratio_fixture([F(2), F(2)])
    ctx = ag.build_context(g, pi, T)
    assert ag.f_T_oracle(g, pi, T, spec) > ag.f_T_closed(spec, ctx)


def test_premise_failure_gives_zero(noisy):
    pi = presets.noisy_partition()
    T = Coalition.of(0, 2)
    spec = two_support(F(2), F(1, 2))
    assert not ag.noisy_premise(noisy, pi, T)
    assert ag.f_T_oracle(noisy, pi, T, spec) == 0


def test_enumeration_cap():
    spec = NoiseSpec(tuple(range(1, 11)), (F(1, 10),) * 10)
    g, pi, T = ag.ratio_fixture([F(1)] * 7)
    with pytest.raises(EnumerationTooLarge):
        ag.f_T_oracle(g, pi, T, spec)


def test_prediction_epsilon():
    assert ag.prediction_epsilon(0.3, 1) == pytest.approx(0.3)
    assert ag.prediction_epsilon(0, 0.8) == pytest.approx(0.2)
    assert ag.prediction_epsilon(0.1, 0.9) == pytest.approx(0.19)
    assert ag.prediction_epsilon(0.1, 0.5) > ag.prediction_epsilon(0.1, 0.6)
    assert ag.prediction_epsilon(0.2, 0.5) > ag.prediction_epsilon(0.1, 0.5)


def test_verdicts():
    r = ag.robustness_verdict(0.2, 1, 1)
    assert r.verdict and r.epsilon == pytest.approx(0.2)
    assert not ag.robustness_verdict(0.05, 0.75, 0.9).verdict
    assert ag.robustness_verdict(0.05, 0.95, 0.9).epsilon == pytest.approx(0.145)
    assert ag.robustness_verdict(0.05, 0.95, 0.9, "non-stable").verdict
    with pytest.raises(ValueError):
        ag.robustness_verdict(0.05, 0.95, 0.9, "sideways")
