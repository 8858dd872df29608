import math

import numpy as np
import pytest

from noisy_hedonic.game import Coalition
from noisy_hedonic.sampling import SamplingSpec, empirical_frequencies, sample_coalitions, split_seeds


def test_empty_draw():
    assert sample_coalitions(SamplingSpec(3), 0) == []


def test_list_frequencies():
    coals = (Coalition.of(0), Coalition.of(1, 2), Coalition.of(0, 1, 2))
    spec = SamplingSpec(3, "list", coals, seed=4)
    m = 10_000
    freq = empirical_frequencies(sample_coalitions(spec, m), coals)
    sigma = math.sqrt((1 / 3) * (2 / 3) / m)
    assert np.all(np.abs(freq - 1 / 3) <= 3 * sigma)


def test_determinism():
    spec = SamplingSpec(5, seed=99)
    assert sample_coalitions(spec, 50) == sample_coalitions(spec, 50)
    assert all(c and c.mask < 32 for c in sample_coalitions(spec, 200))


def test_weights():
    spec = SamplingSpec(2, "weights", ([0], [1]), (0.0, 1.0), seed=1)
    assert set(sample_coalitions(spec, 20)) == {Coalition.of(1)}
    with pytest.raises(ValueError):
        SamplingSpec(2, "weights", ([0], [1]), (0.5, 0.6))
    with pytest.raises(ValueError):
        SamplingSpec(2, "weights", ([0], [1]), (-0.5, 1.5))


def test_split_seeds_stable():
    assert split_seeds(3, 4) == split_seeds(3, 4)
    assert len(set(split_seeds(3, 4))) == 4
