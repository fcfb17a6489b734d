"""
Shared fixtures: isolated settings and the small named instances.
"""

import os
import random
from fractions import Fraction

import pytest

from src.config import get_preset_by_id, preset_instance, reset_settings
from src.services.generator import random_instance

K_CHOICES = (Fraction(2), Fraction(3), Fraction(5, 2))


@pytest.fixture(autouse=True)
def isolated_settings(monkeypatch):
    """Every test starts from default settings, whatever the shell exports."""
    for name in list(os.environ):
        if name.upper().startswith("FAIRDIV_"):
            monkeypatch.delenv(name, raising=False)
    reset_settings()
    yield
    reset_settings()


@pytest.fixture
def table1():
    return preset_instance("table1")


@pytest.fixture
def table1_owners():
    return get_preset_by_id("table1").owner_override


@pytest.fixture
def toy():
    return preset_instance("gm-terminating-toy")


@pytest.fixture
def chain3():
    return preset_instance("chain3")


def random_instances(count, seed, n_range=(1, 4), m_range=(0, 8)):
    """Seeded stream of random instances with mixed k and weight schemes."""
    rng = random.Random(seed)
    for _ in range(count):
        n = rng.randint(*n_range)
        m = rng.randint(*m_range)
        k = rng.choice(K_CHOICES)
        weights = rng.choice(("equal", "random"))
        yield random_instance(rng, n, m, k, weights)
