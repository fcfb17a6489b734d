"""
Named instance presets.
"""

from dataclasses import dataclass, field
from typing import Optional

from ..models.files import AgentEntry, InstanceFile, InstanceMeta


@dataclass
class InstancePreset:
    """A fixed instance that can be generated or solved by id."""
    id: str
    name: str
    values: list[list[str]]
    weights: list[str]
    description: str = ""
    k: Optional[str] = None
    owner_override: Optional[tuple[int, ...]] = None  # Initial owner per good, when the default tie-break is not wanted
    agent_ids: list[str] = field(default_factory=list)
    good_ids: list[str] = field(default_factory=list)

    def to_instance_file(self) -> InstanceFile:
        """Build the instance document for this preset."""
        m = len(self.values[0]) if self.values else 0
        agent_ids = self.agent_ids or [f"a{i + 1}" for i in range(len(self.values))]
        good_ids = self.good_ids or [f"e{e + 1}" for e in range(m)]
        return InstanceFile(
            agents=[
                AgentEntry(id=agent_id, weight=weight, values=row)
                for agent_id, weight, row in zip(agent_ids, self.weights, self.values)
            ],
            goods=good_ids,
            meta=InstanceMeta(k=self.k),
        )


# Presets shipped with the toolkit
PRESETS: list[InstancePreset] = [
    InstancePreset(
        id="table1",
        name="GM counterexample",
        description=(
            "Two agents, five goods, k = 5; the GM price dynamic multiplies all prices "
            "by 5 every two rounds from the listed initial owners"
        ),
        values=[
            ["5", "5", "5", "1", "1"],
            ["1", "1", "1", "1", "5"],
        ],
        weights=["1", "1"],
        owner_override=(0, 0, 0, 1, 1),
    ),
    InstancePreset(
        id="gm-terminating-toy",
        name="Two identical agents, two goods",
        description="Both agents value both goods k = 2; GM returns after one step",
        values=[
            ["2", "2"],
            ["2", "2"],
        ],
        weights=["1", "1"],
        k="2",
    ),
    InstancePreset(
        id="chain3",
        name="Three-agent MBB chain",
        description="a3 -> a2 -> a1 is a chain of MBB edges in the welfare-maximizing equilibrium",
        values=[
            ["2", "1", "1"],
            ["2", "2", "1"],
            ["1", "2", "2"],
        ],
        weights=["1", "1", "1"],
    ),
]


def get_preset_by_id(preset_id: str) -> Optional[InstancePreset]:
    """Get a preset by its ID."""
    for preset in PRESETS:
        if preset.id == preset_id:
            return preset
    return None


def get_all_presets() -> list[InstancePreset]:
    """Get all presets."""
    return PRESETS


def preset_instance(preset_id: str):
    """
    Validated Instance for a preset.

    Raises:
        KeyError: Unknown preset id
    """
    from ..services.core import validate_instance

    preset = get_preset_by_id(preset_id)
    if preset is None:
        raise KeyError(f"Unknown preset: {preset_id}")
    return validate_instance(preset.to_instance_file())
