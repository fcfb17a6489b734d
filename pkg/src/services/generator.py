"""
Seeded random bivalued instances.
"""

import random
from fractions import Fraction
from typing import Literal, Optional

from ..models.files import AgentEntry, InstanceFile, InstanceMeta
from ..models.instance import Instance
from .core import validate_instance

WeightScheme = Literal["equal", "random"]


def random_instance_file(
    rng: random.Random,
    n: int,
    m: int,
    k: Fraction,
    weights: WeightScheme = "equal",
    seed: Optional[int] = None,
) -> InstanceFile:
    """
    Draw an instance document.

    Each value is 1 or k with probability 1/2. Weights are all 1, or
    integers 1..9 when ``weights`` is "random".

    Args:
        rng: Random source; all randomness comes from it
        n: Number of agents (at least 1)
        m: Number of goods
        k: High value, greater than 1
        weights: "equal" or "random"
        seed: Seed echoed into meta

    Returns:
        InstanceFile with meta.k = k
    """
    if n < 1:
        raise ValueError("need at least one agent")
    if m < 0:
        raise ValueError("number of goods cannot be negative")
    if weights not in ("equal", "random"):
        raise ValueError(f"Unknown weight scheme: {weights}")

    agents = []
    for i in range(n):
        values = [k if rng.random() < 0.5 else Fraction(1) for _ in range(m)]
        weight = Fraction(rng.randint(1, 9)) if weights == "random" else Fraction(1)
        agents.append(AgentEntry(id=f"a{i + 1}", weight=weight, values=values))
    return InstanceFile(
        agents=agents,
        goods=[f"e{e + 1}" for e in range(m)],
        meta=InstanceMeta(k=k, seed=seed),
    )


def random_instance(
    rng: random.Random,
    n: int,
    m: int,
    k: Fraction,
    weights: WeightScheme = "equal",
) -> Instance:
    """Draw and validate an instance."""
    return validate_instance(random_instance_file(rng, n, m, k, weights))
