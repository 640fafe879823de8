import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from aces import ArithmeticChannel, RandomSource, keygen

# Desk-scale parameters: big enough for every noise bound to have headroom,
# small enough that exhaustive plaintext sweeps are instant.
DESK = dict(p=2, q=15015, omega=1, u=(-1, 0, 0, 0, 1), n=3, big_n=2, k0=1)

# Micro parameters for brute-force oracle comparisons.
MICRO = dict(p=2, q=105, omega=1, u=(-1, 0, 1), n=2, big_n=1, k0=1)


@pytest.fixture(scope="session")
def desk_channel():
    return ArithmeticChannel(**DESK).require_valid()


@pytest.fixture(scope="session")
def micro_channel():
    return ArithmeticChannel(**MICRO).require_valid()


@pytest.fixture(scope="session")
def desk_bundle(desk_channel):
    return keygen(desk_channel, RandomSource(b"desk-fixture"))


@pytest.fixture(scope="session")
def micro_bundle(micro_channel):
    return keygen(micro_channel, RandomSource(b"micro-fixture"))


@pytest.fixture()
def rng():
    return RandomSource(b"per-test")
