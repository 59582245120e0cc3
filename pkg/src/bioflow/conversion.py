"""Biomass-to-energy yields for the five conversion technologies.

Power technologies turn stored heat (direct heat capacity for techs 1-3,
biogas heat equivalent for tech 4) into electricity through an efficiency
fraction; fermentation (tech 5) converts mass straight to liters.
"""

from __future__ import annotations

from dataclasses import dataclass

from .datamodel import (
    BIOMASS_POWER_TECHS,
    BiomassSpec,
    PlantKind,
    TECH_ANAEROBIC_DIGESTION,
    TECH_COGENERATION,
    TECH_DIRECT_FIRING,
    TECH_FERMENTATION,
    TECH_GASIFICATION,
)
from .errors import BadUnit, IneligibleBiomass

MJ_PER_MWH = 3600.0

# One liter of bio-ethanol in electricity-equivalent terms.
ETHANOL_MWH_PER_LITER = 5.9313e-3


@dataclass(frozen=True)
class MethaneConstants:
    """Physical constants of methane as printed in the source tables."""

    density: float = 0.657   # kg/m3
    cv: float = 1.709        # kJ/(kg K)
    cp: float = 2.232        # kJ/(kg K)


# Ratio biogas_heat_equiv / methane_content shared by all biogas-capable
# biomass; checked as a table-consistency invariant, not re-derived.
BIOGAS_HEAT_PER_METHANE = 478.05  # MJ*kg/(m3*ton)


@dataclass(frozen=True)
class EfficiencySet:
    """Electric conversion efficiency per power technology (1..4).

    The defaults are engineering assumptions, not published values; override
    per run via config or per plant via efficiency_override.
    """

    direct_firing: float = 0.25
    gasification: float = 0.30
    cogeneration: float = 0.35
    biogas_engine: float = 0.35

    def validate(self) -> None:
        for name, eta in self.items():
            if not 0 < eta <= 1:
                raise BadUnit(f"efficiency {name} must be in (0, 1]", field=name)

    def items(self):
        return (("direct_firing", self.direct_firing),
                ("gasification", self.gasification),
                ("cogeneration", self.cogeneration),
                ("biogas_engine", self.biogas_engine))

    def for_technology(self, q: int) -> float:
        etas = {TECH_DIRECT_FIRING: self.direct_firing,
                TECH_GASIFICATION: self.gasification,
                TECH_COGENERATION: self.cogeneration,
                TECH_ANAEROBIC_DIGESTION: self.biogas_engine}
        if q not in etas:
            raise BadUnit(f"no efficiency defined for technology {q}")
        return etas[q]


def heat_output(biomass: BiomassSpec, tons: float) -> float:
    """Heat released by burning `tons` of biomass, MJ."""
    if tons < 0:
        raise BadUnit("tons must be >= 0")
    if biomass.heat_capacity is None:
        raise IneligibleBiomass(f"{biomass.id.value} has no heat conversion use")
    return biomass.heat_capacity * tons


def biogas_output(biomass: BiomassSpec, tons: float) -> float:
    """Heat equivalent of the biogas digested from `tons` of biomass, MJ."""
    if tons < 0:
        raise BadUnit("tons must be >= 0")
    if biomass.biogas_heat_equiv is None or TECH_ANAEROBIC_DIGESTION not in biomass.eligible_techs:
        raise IneligibleBiomass(f"{biomass.id.value} has no biogas conversion use")
    return biomass.biogas_heat_equiv * tons


def ethanol_output(biomass: BiomassSpec, tons: float) -> float:
    """Liters of bio-ethanol fermented from `tons` of biomass."""
    if tons < 0:
        raise BadUnit("tons must be >= 0")
    if biomass.ethanol_coeff is None:
        raise IneligibleBiomass(f"{biomass.id.value} has no bioethanol conversion use")
    return tons * 1000.0 / biomass.ethanol_coeff


def electricity_mwh(heat_mj: float, eta: float) -> float:
    """Electricity from heat at conversion efficiency `eta`."""
    if heat_mj < 0:
        raise BadUnit("heat must be >= 0")
    if not 0 < eta <= 1:
        raise BadUnit("eta must be in (0, 1]")
    return heat_mj * eta / MJ_PER_MWH


def mwh_equivalent(kind: str | PlantKind, amount: float) -> float:
    """Common MWh scale: electricity passes through, ethanol liters convert."""
    if amount < 0:
        raise BadUnit("amount must be >= 0")
    if kind in ("ethanol", PlantKind.ETHANOL):
        return amount * ETHANOL_MWH_PER_LITER
    if kind in ("electricity", PlantKind.BIOMASS_POWER, PlantKind.BIOGAS_POWER):
        return amount
    raise BadUnit(f"unknown energy kind {kind!r}")


def yield_per_ton(biomass: BiomassSpec, technology: int, efficiencies: EfficiencySet,
                  efficiency_override: float | None = None) -> float:
    """Output per ton consumed: MWh/ton for power techs, liters/ton for
    fermentation. Raises IneligibleBiomass for pairs that cannot convert."""
    if technology not in biomass.eligible_techs:
        raise IneligibleBiomass(
            f"{biomass.id.value} is not eligible for technology {technology}")
    if technology == TECH_FERMENTATION:
        return ethanol_output(biomass, 1.0)
    eta = efficiency_override if efficiency_override is not None \
        else efficiencies.for_technology(technology)
    if technology in BIOMASS_POWER_TECHS:
        return electricity_mwh(heat_output(biomass, 1.0), eta)
    return electricity_mwh(biogas_output(biomass, 1.0), eta)
