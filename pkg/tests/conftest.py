import random

import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def codes(s: str) -> list[int]:
    return [ord(c) for c in s]


def random_string(rng: random.Random, n: int, sigma: int) -> list[int]:
    return [rng.randrange(sigma) for _ in range(n)]


@pytest.fixture
def rng():
    return random.Random(12345)
