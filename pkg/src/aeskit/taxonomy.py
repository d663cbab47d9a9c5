"""Two-level hardware component taxonomy and multi-hot configurations.

Level-1 groups components into 9 functional categories; level-2 refines
them into 45. Raw component names (as authors wrote them) are normalized
into taxonomy slots via an exact lookup table after lowercasing/trimming.
Names with no mapping are reported back to the caller, never dropped or
guessed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np

L1_CATEGORIES = [
    "Actuators",
    "Arduino",
    "Communications",
    "Electronics",
    "Human Machine Interface",
    "Materials",
    "Memory",
    "Power",
    "Sensors",
]

L2_CATEGORIES = [
    "Actuators.acoustic",
    "Actuators.air",
    "Actuators.flow",
    "Actuators.motor",
    "Arduino.large",
    "Arduino.medium",
    "Arduino.other",
    "Arduino.small",
    "Communications.ethernet",
    "Communications.optical",
    "Communications.radio",
    "Communications.serial",
    "Communications.wifi",
    "Electronics.capacitor",
    "Electronics.diode",
    "Electronics.relay",
    "Electronics.resistor",
    "Electronics.transistor",
    "Human Machine Interface.button",
    "Human Machine Interface.display",
    "Human Machine Interface.input",
    "Human Machine Interface.led",
    "Materials.adapter",
    "Materials.board",
    "Materials.screw",
    "Materials.solder",
    "Materials.wiring",
    "Memory.solid",
    "Power.battery",
    "Power.regulator",
    "Power.shifter",
    "Power.supply",
    "Power.transformer",
    "Sensors.accel",
    "Sensors.acoustic",
    "Sensors.camera",
    "Sensors.encoder",
    "Sensors.fluid",
    "Sensors.gps",
    "Sensors.misc",
    "Sensors.optical",
    "Sensors.photo",
    "Sensors.pv",
    "Sensors.rfid",
    "Sensors.temp",
]

LEVEL_SIZES = {"L1": 9, "L2": 45}


@dataclass
class Taxonomy:
    """Ordered category list plus the raw-name normalization table.

    Slot order is fixed: vector position i always refers to categories[i].
    Mapping keys are stored lowercased and stripped.
    """

    level: str
    categories: list[str]
    mapping: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        if self.level not in LEVEL_SIZES:
            raise ValueError(f"level must be 'L1' or 'L2', got {self.level!r}")
        expected = LEVEL_SIZES[self.level]
        if len(self.categories) != expected:
            raise ValueError(
                f"{self.level} taxonomy must have {expected} categories, "
                f"got {len(self.categories)}"
            )
        if len(set(self.categories)) != len(self.categories):
            raise ValueError("duplicate category names")
        for name, idx in self.mapping.items():
            if not 0 <= idx < expected:
                raise ValueError(f"mapping for {name!r} targets invalid slot {idx}")

    @property
    def n_slots(self) -> int:
        return len(self.categories)

    def slot_of(self, category: str) -> int:
        return self.categories.index(category)


@dataclass
class HardwareConfig:
    """Multi-hot presence vector over one taxonomy level."""

    level: str
    present: np.ndarray

    def __post_init__(self):
        self.present = np.asarray(self.present, dtype=np.uint8)
        if self.present.shape != (LEVEL_SIZES[self.level],):
            raise ValueError(
                f"{self.level} config must have length {LEVEL_SIZES[self.level]}, "
                f"got shape {self.present.shape}"
            )

    @property
    def n_present(self) -> int:
        return int(self.present.sum())

    def present_categories(self, tax: Taxonomy) -> list[str]:
        return [tax.categories[i] for i in np.flatnonzero(self.present)]

    def copy(self) -> "HardwareConfig":
        return HardwareConfig(self.level, self.present.copy())


def normalize_components(
    raw: list[str], tax: Taxonomy
) -> tuple[HardwareConfig, list[str]]:
    """Map raw component names onto taxonomy slots.

    Lookup is exact after lowercasing and trimming. Returns the multi-hot
    config and the list of names that had no mapping entry (original
    spelling, first occurrence order, deduplicated).
    """
    present = np.zeros(tax.n_slots, dtype=np.uint8)
    unmapped: list[str] = []
    seen_unmapped: set[str] = set()
    for name in raw:
        key = name.strip().lower()
        idx = tax.mapping.get(key)
        if idx is None:
            if key not in seen_unmapped:
                seen_unmapped.add(key)
                unmapped.append(name)
        else:
            present[idx] = 1
    return HardwareConfig(tax.level, present), unmapped


def load_taxonomy(path: str | Path) -> Taxonomy:
    """Read a taxonomy JSON file: {"level", "categories", "mapping"}.

    Mapping values are category names (not indices) so the file stays
    readable and extendable by hand; they are resolved to slot indices here.
    """
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    categories = list(data["categories"])
    index = {c: i for i, c in enumerate(categories)}
    mapping = {}
    for name, cat in data.get("mapping", {}).items():
        if cat not in index:
            raise ValueError(f"mapping for {name!r} targets unknown category {cat!r}")
        mapping[name.strip().lower()] = index[cat]
    return Taxonomy(level=data["level"], categories=categories, mapping=mapping)


def builtin_taxonomy(level: str) -> Taxonomy:
    """Load the taxonomy shipped with the package (L1 or L2)."""
    if level not in LEVEL_SIZES:
        raise ValueError(f"level must be 'L1' or 'L2', got {level!r}")
    fname = "taxonomy_l1.json" if level == "L1" else "taxonomy_l2.json"
    ref = resources.files("aeskit.data").joinpath(fname)
    with resources.as_file(ref) as path:
        return load_taxonomy(path)


def save_taxonomy(tax: Taxonomy, path: str | Path) -> None:
    data = {
        "level": tax.level,
        "categories": tax.categories,
        "mapping": {
            name: tax.categories[idx] for name, idx in sorted(tax.mapping.items())
        },
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(data, fh, indent=2, ensure_ascii=False)
        fh.write("\n")
