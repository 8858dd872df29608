import pytest

from noisy_hedonic import presets


@pytest.fixture
def noisy():
    return presets.noisy_game()


@pytest.fixture
def clean():
    return presets.noise_free_game()
