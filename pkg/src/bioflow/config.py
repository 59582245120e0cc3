"""Run configuration: efficiencies, cost rates and scenario knobs.

Values here are engineering defaults, not published data; every field can be
overridden through the flat key=value config file documented in the README.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Mapping

from .conversion import EfficiencySet
from .datamodel import parse_config_file
from .errors import BadUnit
from .transport import TruckSpec, default_flatbed, default_tanker

DEMAND_EQUALITY = "equality"
DEMAND_AT_LEAST = "at-least"

# Mid-range LCOE per power technology, USD/kWh. The anaerobic-digestion rate
# reuses the gasification mid-range for lack of a published figure.
DEFAULT_LCOE_USD_PER_KWH = {1: 0.085, 2: 0.195, 3: 0.18, 4: 0.195}


@dataclass(frozen=True)
class ScenarioConfig:
    efficiencies: EfficiencySet = field(default_factory=EfficiencySet)
    fx_rate: float = 33.0                      # THB per USD
    lcoe_usd_per_kwh: Mapping[int, float] = field(
        default_factory=lambda: dict(DEFAULT_LCOE_USD_PER_KWH))
    ethanol_op_cost_thb_per_l: float = 3.0
    availability_factor: float = 0.89          # maintenance derating of capacity
    epsilon_operation: float = 0.05            # per-plant minimum operation share
    demand_mode: str = DEMAND_EQUALITY
    initial_inventory: float = 0.0             # tons per (biomass, plant)
    molasses_per_sugarcane: float = 0.046      # t molasses per t sugarcane
    default_holding_cost: float = 50.0         # THB/(ton*month) when plant omits it
    road_winding_factor: float = 1.3
    flatbed: TruckSpec = field(default_factory=default_flatbed)
    tanker: TruckSpec = field(default_factory=default_tanker)
    new_plant_cap_mw: float | None = None      # optional cap on each new plant
    distance_fallback: str = "haversine"       # or "error" for strict matrices

    def validate(self) -> None:
        self.efficiencies.validate()
        self.flatbed.validate()
        self.tanker.validate()
        if self.fx_rate <= 0:
            raise BadUnit("fx_rate must be > 0", field="fx_rate")
        if not 0 < self.availability_factor <= 1:
            raise BadUnit("availability_factor must be in (0, 1]",
                          field="availability_factor")
        if not 0 <= self.epsilon_operation <= 1:
            raise BadUnit("epsilon_operation must be in [0, 1]",
                          field="epsilon_operation")
        if self.demand_mode not in (DEMAND_EQUALITY, DEMAND_AT_LEAST):
            raise BadUnit(f"demand_mode must be '{DEMAND_EQUALITY}' or "
                          f"'{DEMAND_AT_LEAST}'", field="demand_mode")
        if self.initial_inventory < 0:
            raise BadUnit("initial_inventory must be >= 0", field="initial_inventory")
        if self.molasses_per_sugarcane <= 0:
            raise BadUnit("molasses_per_sugarcane must be > 0",
                          field="molasses_per_sugarcane")
        if self.default_holding_cost < 0:
            raise BadUnit("default_holding_cost must be >= 0",
                          field="default_holding_cost")
        for q in (1, 2, 3, 4):
            if q not in self.lcoe_usd_per_kwh or self.lcoe_usd_per_kwh[q] < 0:
                raise BadUnit(f"lcoe.q{q} missing or negative", field=f"lcoe.q{q}")
        if self.distance_fallback not in ("haversine", "error"):
            raise BadUnit("distance.fallback must be 'haversine' or 'error'",
                          field="distance.fallback")

    def operating_cost_per_unit(self, technology: int) -> float:
        """THB per MWh for power technologies, THB per liter for fermentation."""
        if technology == 5:
            return self.ethanol_op_cost_thb_per_l
        return self.lcoe_usd_per_kwh[technology] * self.fx_rate * 1000.0


# Keys consumed by load_dataset / the expansion CLI rather than ScenarioConfig.
_PASSTHROUGH_PREFIXES = ("demand.", "expand.")

_FLOAT_KEYS = {
    "fx_rate", "ethanol_op_cost", "availability_factor", "epsilon_operation",
    "initial_inventory", "molasses_per_sugarcane", "default_holding_cost",
    "road_winding_factor", "truck.payload", "truck.cargo_volume",
    "truck.cost_per_km", "tanker.payload", "tanker.cost_per_km",
    "new_plant_cap_mw",
    "efficiency.q1", "efficiency.q2", "efficiency.q3", "efficiency.q4",
    "lcoe.q1", "lcoe.q2", "lcoe.q3", "lcoe.q4",
}
_STR_KEYS = {"demand_mode", "distance.fallback"}


def config_from_mapping(mapping: Mapping[str, str] | None) -> ScenarioConfig:
    """Build a ScenarioConfig from parsed key=value text; unknown keys fail."""
    cfg = ScenarioConfig()
    if not mapping:
        cfg.validate()
        return cfg
    floats: dict[str, float] = {}
    strs: dict[str, str] = {}
    for key, raw in mapping.items():
        if any(key.startswith(p) for p in _PASSTHROUGH_PREFIXES):
            continue
        if key in _FLOAT_KEYS:
            try:
                floats[key] = float(raw)
            except ValueError:
                raise BadUnit(f"cannot parse {raw!r} as a number", field=key)
        elif key in _STR_KEYS:
            strs[key] = str(raw).strip()
        else:
            raise BadUnit(f"unknown config key {key!r}", field=key)

    eff = EfficiencySet(
        direct_firing=floats.get("efficiency.q1", cfg.efficiencies.direct_firing),
        gasification=floats.get("efficiency.q2", cfg.efficiencies.gasification),
        cogeneration=floats.get("efficiency.q3", cfg.efficiencies.cogeneration),
        biogas_engine=floats.get("efficiency.q4", cfg.efficiencies.biogas_engine),
    )
    lcoe = dict(DEFAULT_LCOE_USD_PER_KWH)
    for q in (1, 2, 3, 4):
        if f"lcoe.q{q}" in floats:
            lcoe[q] = floats[f"lcoe.q{q}"]
    flatbed = replace(
        default_flatbed(),
        payload=floats.get("truck.payload", cfg.flatbed.payload),
        cargo_volume=floats.get("truck.cargo_volume", cfg.flatbed.cargo_volume),
        cost_per_km=floats.get("truck.cost_per_km", cfg.flatbed.cost_per_km))
    tanker = replace(
        default_tanker(),
        payload=floats.get("tanker.payload", cfg.tanker.payload),
        cost_per_km=floats.get("tanker.cost_per_km", cfg.tanker.cost_per_km))

    out = ScenarioConfig(
        efficiencies=eff,
        fx_rate=floats.get("fx_rate", cfg.fx_rate),
        lcoe_usd_per_kwh=lcoe,
        ethanol_op_cost_thb_per_l=floats.get("ethanol_op_cost",
                                             cfg.ethanol_op_cost_thb_per_l),
        availability_factor=floats.get("availability_factor", cfg.availability_factor),
        epsilon_operation=floats.get("epsilon_operation", cfg.epsilon_operation),
        demand_mode=strs.get("demand_mode", cfg.demand_mode),
        initial_inventory=floats.get("initial_inventory", cfg.initial_inventory),
        molasses_per_sugarcane=floats.get("molasses_per_sugarcane",
                                          cfg.molasses_per_sugarcane),
        default_holding_cost=floats.get("default_holding_cost",
                                        cfg.default_holding_cost),
        road_winding_factor=floats.get("road_winding_factor", cfg.road_winding_factor),
        flatbed=flatbed,
        tanker=tanker,
        new_plant_cap_mw=floats.get("new_plant_cap_mw"),
        distance_fallback=strs.get("distance.fallback", cfg.distance_fallback),
    )
    out.validate()
    return out


def config_from_file(path: str | Path) -> ScenarioConfig:
    return config_from_mapping(parse_config_file(path))
