"""Domain types, built-in biomass tables, dataset ingestion and synthesis.

Everything constructed here is immutable after validation and safe to share
across threads. Loading and generation are pure functions of their inputs.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from .errors import (
    BadUnit,
    DataError,
    EligibilityViolation,
    MissingColumn,
    SizeOutOfRange,
    UnknownBiomass,
)

# Energy conversion technology codes.
TECH_DIRECT_FIRING = 1
TECH_GASIFICATION = 2
TECH_COGENERATION = 3
TECH_ANAEROBIC_DIGESTION = 4
TECH_FERMENTATION = 5

BIOMASS_POWER_TECHS = frozenset({TECH_DIRECT_FIRING, TECH_GASIFICATION, TECH_COGENERATION})


class Biomass(str, Enum):
    """The 17 biomass types handled by the planner."""

    RICE_STRAW = "rice straw"
    RICE_HUSK = "rice husk"
    SUGARCANE_LEAVES = "sugarcane leaves"
    BAGASSE = "bagasse"
    MOLASSES = "molasses"
    CORN_LEAVES_AND_TOPS = "corn leaves and tops"
    CORN_COB = "corn cob"
    PEELED_CASSAVA = "peeled cassava"
    CASSAVA_RHIZOME = "cassava rhizome"
    CASSAVA_FIBER = "cassava fiber"
    CASSAVA_PEELS = "cassava peels"
    OIL_PALM_BUNCH = "oil palm bunch"
    OIL_PALM_FIBER = "oil palm fiber"
    OIL_PALM_SHELL = "oil palm shell"
    COCONUT_BUNCH = "coconut bunch"
    COCONUT_BRACT = "coconut bract"
    COCONUT_SHELL = "coconut shell"

    @property
    def slug(self) -> str:
        """Identifier-safe name, e.g. ``rice_husk`` (used in LP column names)."""
        return self.value.replace(" ", "_")

    @classmethod
    def parse(cls, text: str) -> "Biomass":
        norm = " ".join(text.strip().lower().replace("_", " ").split())
        for member in cls:
            if member.value == norm:
                return member
        raise ValueError(f"unknown biomass {text!r}")


class PlantKind(str, Enum):
    BIOMASS_POWER = "biomass-power"
    BIOGAS_POWER = "biogas-power"
    ETHANOL = "ethanol"


def kind_for_technology(q: int) -> PlantKind:
    if q in BIOMASS_POWER_TECHS:
        return PlantKind.BIOMASS_POWER
    if q == TECH_ANAEROBIC_DIGESTION:
        return PlantKind.BIOGAS_POWER
    if q == TECH_FERMENTATION:
        return PlantKind.ETHANOL
    raise ValueError(f"unknown technology code {q}")


_ETHANOL_ONLY = frozenset({Biomass.MOLASSES, Biomass.PEELED_CASSAVA})
_NO_BIOGAS = frozenset({
    Biomass.OIL_PALM_SHELL,
    Biomass.COCONUT_BUNCH,
    Biomass.COCONUT_BRACT,
    Biomass.COCONUT_SHELL,
})


@dataclass(frozen=True)
class BiomassSpec:
    """Per-biomass physical and economic parameters.

    Quantities that do not apply to a biomass (e.g. heat capacity of molasses)
    are stored as None, never as zero, so misuse fails loudly.
    """

    id: Biomass
    price: float                      # THB/ton
    density: float                    # kg/m3
    heat_capacity: float | None       # MJ/ton
    methane_content: float | None     # m3/kg
    biogas_heat_equiv: float | None   # MJ/ton
    ethanol_coeff: float | None       # kg of biomass per liter of ethanol
    eligible_techs: frozenset[int]

    def validate(self) -> None:
        if self.price < 0:
            raise BadUnit(f"{self.id.value}: price must be >= 0", field="price")
        if self.density <= 0:
            raise BadUnit(f"{self.id.value}: density must be > 0", field="density")
        if not self.eligible_techs <= {1, 2, 3, 4, 5}:
            raise EligibilityViolation(
                f"{self.id.value}: technologies must be within 1..5", field="eligible_techs")
        if self.id in _ETHANOL_ONLY:
            if self.eligible_techs != {TECH_FERMENTATION}:
                raise EligibilityViolation(
                    f"{self.id.value}: must be eligible for fermentation only",
                    field="eligible_techs")
            if self.heat_capacity is not None:
                raise EligibilityViolation(
                    f"{self.id.value}: has no heat conversion use", field="heat_capacity")
        if self.id in _NO_BIOGAS and TECH_ANAEROBIC_DIGESTION in self.eligible_techs:
            raise EligibilityViolation(
                f"{self.id.value}: has no biogas conversion use", field="eligible_techs")
        has_gas = self.biogas_heat_equiv is not None
        gas_ok = self.methane_content is not None and TECH_ANAEROBIC_DIGESTION in self.eligible_techs
        if has_gas != gas_ok:
            raise EligibilityViolation(
                f"{self.id.value}: biogas heat equivalent must be present exactly when "
                "methane content is present and anaerobic digestion is eligible",
                field="biogas_heat_equiv")
        if (TECH_FERMENTATION in self.eligible_techs) != (self.ethanol_coeff is not None):
            raise EligibilityViolation(
                f"{self.id.value}: ethanol coefficient must be present exactly when "
                "fermentation is eligible", field="ethanol_coeff")
        if (self.eligible_techs & BIOMASS_POWER_TECHS) and self.heat_capacity is None:
            raise EligibilityViolation(
                f"{self.id.value}: heat capacity required for power technologies",
                field="heat_capacity")


# (price THB/t, heat MJ/t, methane m3/kg, biogas heat MJ/t, density kg/m3, kg/L)
_POWER_AND_GAS = frozenset({1, 2, 3, 4})
_POWER_ONLY = frozenset({1, 2, 3})
_FERMENT_ONLY = frozenset({5})

_BIOMASS_TABLE: tuple[tuple, ...] = (
    (Biomass.RICE_STRAW, 2000.0, 12330.0, 0.226, 108.0402, 178.255, None, _POWER_AND_GAS),
    (Biomass.RICE_HUSK, 1500.0, 13520.0, 0.019, 9.0830, 356.065, None, _POWER_AND_GAS),
    (Biomass.SUGARCANE_LEAVES, 800.0, 15480.0, 0.148, 70.7520, 190.43, None, _POWER_AND_GAS),
    (Biomass.BAGASSE, 500.0, 7370.0, 0.185, 88.4400, 160.0, None, _POWER_AND_GAS),
    (Biomass.MOLASSES, 10410.0, None, 0.324, None, 1441.0, 3.8, _FERMENT_ONLY),
    (Biomass.CORN_LEAVES_AND_TOPS, 1500.0, 9830.0, 0.199, 95.1327, 81.61, None, _POWER_AND_GAS),
    (Biomass.CORN_COB, 500.0, 9620.0, 0.1, 47.8054, 182.38, None, _POWER_AND_GAS),
    (Biomass.PEELED_CASSAVA, 2700.0, None, 0.262, None, 637.38, 5.975, _FERMENT_ONLY),
    (Biomass.CASSAVA_RHIZOME, 1800.0, 5490.0, 0.09676, 46.2565, 238.0, None, _POWER_AND_GAS),
    (Biomass.CASSAVA_FIBER, 3300.0, 1470.0, 0.167, 79.8350, 712.50, None, _POWER_AND_GAS),
    (Biomass.CASSAVA_PEELS, 2800.0, 1490.0, 0.078, 37.2882, 247.87, None, _POWER_AND_GAS),
    (Biomass.OIL_PALM_BUNCH, 50.0, 7240.0, 0.1996, 95.4196, 380.0, None, _POWER_AND_GAS),
    (Biomass.OIL_PALM_FIBER, 1500.0, 11400.0, 0.1664, 79.5482, 250.0, None, _POWER_AND_GAS),
    (Biomass.OIL_PALM_SHELL, 3200.0, 16900.0, None, None, 400.0, None, _POWER_ONLY),
    (Biomass.COCONUT_BUNCH, 1000.0, 15400.0, None, None, 355.0, None, _POWER_ONLY),
    (Biomass.COCONUT_BRACT, 5000.0, 16230.0, None, None, 151.91, None, _POWER_ONLY),
    (Biomass.COCONUT_SHELL, 1000.0, 17930.0, None, None, 920.53, None, _POWER_ONLY),
)


def builtin_biomass_table() -> list[BiomassSpec]:
    """The 17 built-in biomass parameter sets."""
    specs = [
        BiomassSpec(id=b, price=price, density=density, heat_capacity=heat,
                    methane_content=methane, biogas_heat_equiv=gas_equiv,
                    ethanol_coeff=coeff, eligible_techs=frozenset(techs))
        for b, price, heat, methane, gas_equiv, density, coeff, techs in _BIOMASS_TABLE
    ]
    for spec in specs:
        spec.validate()
    return specs


@dataclass(frozen=True)
class SupplierProfile:
    """A province with coordinates and monthly per-biomass availability in tons."""

    province_id: int
    name: str
    location: tuple[float, float]     # (lat, lon) degrees
    availability: Mapping[Biomass, tuple[float, ...]]  # 12 monthly values each

    def validate(self) -> None:
        lat, lon = self.location
        if not (-90.0 <= lat <= 90.0) or not (-180.0 <= lon <= 180.0):
            raise BadUnit(f"supplier {self.province_id}: coordinates out of range",
                          field="lat/lon")
        for b, months in self.availability.items():
            if len(months) != 12:
                raise BadUnit(
                    f"supplier {self.province_id}, {b.value}: needs 12 monthly values",
                    field="availability")
            for t, tons in enumerate(months, start=1):
                if not math.isfinite(tons) or tons < 0:
                    raise BadUnit(
                        f"supplier {self.province_id}, {b.value}, month {t}: "
                        f"availability {tons} must be finite and >= 0",
                        field="available_tons")

    def tons(self, biomass: Biomass, month: int) -> float:
        """Available tons of `biomass` in `month` (1..12); 0 if not carried."""
        months = self.availability.get(biomass)
        return 0.0 if months is None else months[month - 1]


@dataclass(frozen=True)
class Plant:
    """A bio-energy facility.

    capacity is MW for power kinds and liters/day for ethanol plants.
    holding_cost of None means "not provided"; scenarios substitute their
    configured default and reports flag the substitution.
    """

    plant_id: str
    kind: PlantKind
    technology: int
    capacity: float
    max_inventory: float              # tons
    holding_cost: float | None        # THB/(ton*month)
    location: tuple[float, float]
    efficiency_override: float | None = None

    def validate(self) -> None:
        try:
            expected = kind_for_technology(self.technology)
        except ValueError as exc:
            raise EligibilityViolation(str(exc), field="technology") from exc
        if expected is not self.kind:
            raise EligibilityViolation(
                f"plant {self.plant_id}: kind {self.kind.value} incompatible with "
                f"technology {self.technology}", field="technology")
        if self.capacity <= 0:
            raise BadUnit(f"plant {self.plant_id}: capacity must be > 0", field="capacity")
        if self.max_inventory < 0:
            raise BadUnit(f"plant {self.plant_id}: max_inventory must be >= 0",
                          field="max_inventory_tons")
        if self.holding_cost is not None and self.holding_cost < 0:
            raise BadUnit(f"plant {self.plant_id}: holding cost must be >= 0",
                          field="holding_cost_thb_ton_month")
        if self.efficiency_override is not None and not (0 < self.efficiency_override <= 1):
            raise BadUnit(f"plant {self.plant_id}: efficiency override must be in (0, 1]",
                          field="efficiency_override")
        lat, lon = self.location
        if not (-90.0 <= lat <= 90.0) or not (-180.0 <= lon <= 180.0):
            raise BadUnit(f"plant {self.plant_id}: coordinates out of range", field="lat/lon")


@dataclass(frozen=True)
class DemandTargets:
    """National demand levels the scenarios plan against."""

    d_biomass_elec: float = 0.0   # MW
    d_biogas_elec: float = 0.0    # MW
    d_ethanol: float = 0.0        # million liters per day

    def validate(self) -> None:
        for name, v in (("d_biomass_elec", self.d_biomass_elec),
                        ("d_biogas_elec", self.d_biogas_elec),
                        ("d_ethanol", self.d_ethanol)):
            if not math.isfinite(v) or v < 0:
                raise BadUnit(f"demand {name} must be finite and >= 0", field=name)


@dataclass(frozen=True)
class MonthPeriod:
    index: int    # 1..12
    days: int
    hours: int


@dataclass(frozen=True)
class TimeGrid:
    """Twelve monthly periods covering one non-leap year."""

    months: tuple[MonthPeriod, ...]

    def validate(self) -> None:
        if len(self.months) != 12:
            raise BadUnit("timegrid must have 12 months", field="months")
        if [m.index for m in self.months] != list(range(1, 13)):
            raise BadUnit("months must be indexed 1..12 in order", field="months")
        for m in self.months:
            if m.hours != 24 * m.days:
                raise BadUnit(f"month {m.index}: hours must equal 24*days", field="hours")
        if sum(m.days for m in self.months) != 365:
            raise BadUnit("days must sum to 365", field="days")
        if sum(m.hours for m in self.months) != 8760:
            raise BadUnit("hours must sum to 8760", field="hours")

    @classmethod
    def civil(cls) -> "TimeGrid":
        days = (31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31)
        return cls(months=tuple(
            MonthPeriod(index=i, days=d, hours=24 * d) for i, d in enumerate(days, start=1)))


@dataclass(frozen=True)
class Dataset:
    """A fully validated planning instance."""

    biomass: tuple[BiomassSpec, ...]
    suppliers: tuple[SupplierProfile, ...]
    plants: tuple[Plant, ...]
    timegrid: TimeGrid
    demand: DemandTargets

    def validate(self) -> None:
        for spec in self.biomass:
            spec.validate()
        ids = [s.id for s in self.biomass]
        if len(set(ids)) != len(ids):
            raise BadUnit("duplicate biomass ids in dataset", field="biomass")
        known = set(ids)
        sup_ids = [s.province_id for s in self.suppliers]
        if len(set(sup_ids)) != len(sup_ids):
            raise BadUnit("duplicate supplier province_ids", field="province_id")
        for s in self.suppliers:
            s.validate()
            for b in s.availability:
                if b not in known:
                    raise UnknownBiomass(
                        f"supplier {s.province_id} references {b.value} which is not "
                        "in the dataset biomass list", field="biomass")
        plant_ids = [p.plant_id for p in self.plants]
        if len(set(plant_ids)) != len(plant_ids):
            raise BadUnit("duplicate plant ids", field="plant_id")
        for p in self.plants:
            p.validate()
        self.timegrid.validate()
        self.demand.validate()
        kinds = {p.kind for p in self.plants}
        for target, kind in ((self.demand.d_biomass_elec, PlantKind.BIOMASS_POWER),
                             (self.demand.d_biogas_elec, PlantKind.BIOGAS_POWER),
                             (self.demand.d_ethanol, PlantKind.ETHANOL)):
            if target > 0 and kind not in kinds:
                raise EligibilityViolation(
                    f"demand for {kind.value} is positive but the dataset has no "
                    f"{kind.value} plant", field="demand")

    def spec_of(self, biomass: Biomass) -> BiomassSpec:
        for s in self.biomass:
            if s.id is biomass:
                return s
        raise KeyError(biomass)

    def spec_index(self) -> dict[Biomass, BiomassSpec]:
        return {s.id: s for s in self.biomass}

    def carried_biomass(self) -> tuple[Biomass, ...]:
        """Biomass actually offered by at least one supplier, in table order."""
        offered = set()
        for s in self.suppliers:
            offered.update(s.availability.keys())
        return tuple(spec.id for spec in self.biomass if spec.id in offered)


# ---------------------------------------------------------------------------
# Config file (flat "key = value" text)

def parse_config_text(text: str, *, file: str = "<config>") -> dict[str, str]:
    """Parse the flat key=value config format. '#' starts a comment."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DataError(f"expected 'key = value', got {raw!r}", file=file, row=lineno)
        key, value = line.split("=", 1)
        key, value = key.strip(), value.strip()
        if not key:
            raise DataError("empty key", file=file, row=lineno)
        if key in out:
            raise DataError(f"duplicate key {key!r}", file=file, row=lineno)
        out[key] = value
    return out


def parse_config_file(path: str | Path) -> dict[str, str]:
    p = Path(path)
    return parse_config_text(p.read_text(encoding="utf-8"), file=str(p))


# ---------------------------------------------------------------------------
# CSV ingestion

SUPPLIER_COLUMNS = ("province_id", "name", "lat", "lon", "biomass", "month", "available_tons")
PLANT_COLUMNS = ("plant_id", "kind", "technology", "capacity", "capacity_unit",
                 "max_inventory_tons", "holding_cost_thb_ton_month", "lat", "lon")


def _check_columns(fieldnames: Iterable[str] | None, required: tuple[str, ...],
                   file: str) -> None:
    have = set(fieldnames or ())
    for col in required:
        if col not in have:
            raise MissingColumn(f"missing column {col!r}", file=file, field=col)


def _parse_float(raw: str, *, file: str, row: int, field: str) -> float:
    try:
        v = float(raw)
    except (TypeError, ValueError):
        raise BadUnit(f"cannot parse {raw!r} as a number", file=file, row=row, field=field)
    if not math.isfinite(v):
        raise BadUnit(f"value {raw!r} is not finite", file=file, row=row, field=field)
    return v


def _parse_int(raw: str, *, file: str, row: int, field: str) -> int:
    try:
        return int(raw)
    except (TypeError, ValueError):
        raise BadUnit(f"cannot parse {raw!r} as an integer", file=file, row=row, field=field)


def _read_suppliers(path: str | Path) -> list[SupplierProfile]:
    fname = str(path)
    rows: dict[int, dict] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        _check_columns(reader.fieldnames, SUPPLIER_COLUMNS, fname)
        for lineno, rec in enumerate(reader, start=2):
            pid = _parse_int(rec["province_id"], file=fname, row=lineno, field="province_id")
            try:
                biomass = Biomass.parse(rec["biomass"])
            except ValueError:
                raise UnknownBiomass(f"unknown biomass {rec['biomass']!r}",
                                     file=fname, row=lineno, field="biomass")
            month = _parse_int(rec["month"], file=fname, row=lineno, field="month")
            if not 1 <= month <= 12:
                raise BadUnit(f"month {month} out of 1..12", file=fname, row=lineno,
                              field="month")
            tons = _parse_float(rec["available_tons"], file=fname, row=lineno,
                                field="available_tons")
            if tons < 0:
                raise BadUnit(f"available_tons {tons} must be >= 0", file=fname,
                              row=lineno, field="available_tons")
            lat = _parse_float(rec["lat"], file=fname, row=lineno, field="lat")
            lon = _parse_float(rec["lon"], file=fname, row=lineno, field="lon")
            entry = rows.setdefault(pid, {
                "name": rec["name"], "lat": lat, "lon": lon, "avail": {}})
            if entry["name"] != rec["name"] or entry["lat"] != lat or entry["lon"] != lon:
                raise BadUnit(f"supplier {pid} has conflicting name/coordinates",
                              file=fname, row=lineno, field="province_id")
            months = entry["avail"].setdefault(biomass, [0.0] * 12)
            if months[month - 1] != 0.0:
                raise BadUnit(f"duplicate cell for supplier {pid}, {biomass.value}, "
                              f"month {month}", file=fname, row=lineno, field="available_tons")
            months[month - 1] = tons
    suppliers = []
    for pid in sorted(rows):
        entry = rows[pid]
        suppliers.append(SupplierProfile(
            province_id=pid, name=entry["name"], location=(entry["lat"], entry["lon"]),
            availability={b: tuple(v) for b, v in entry["avail"].items()}))
    return suppliers


_KIND_UNITS = {PlantKind.BIOMASS_POWER: "MW", PlantKind.BIOGAS_POWER: "MW",
               PlantKind.ETHANOL: "L_per_day"}


def _read_plants(path: str | Path) -> list[Plant]:
    fname = str(path)
    plants: list[Plant] = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        _check_columns(reader.fieldnames, PLANT_COLUMNS, fname)
        for lineno, rec in enumerate(reader, start=2):
            try:
                kind = PlantKind(rec["kind"].strip())
            except ValueError:
                raise BadUnit(f"unknown plant kind {rec['kind']!r}", file=fname,
                              row=lineno, field="kind")
            tech = _parse_int(rec["technology"], file=fname, row=lineno, field="technology")
            try:
                expected_kind = kind_for_technology(tech)
            except ValueError:
                raise EligibilityViolation(f"technology {tech} out of 1..5", file=fname,
                                           row=lineno, field="technology")
            if expected_kind is not kind:
                raise EligibilityViolation(
                    f"kind {kind.value} incompatible with technology {tech}",
                    file=fname, row=lineno, field="technology")
            unit = rec["capacity_unit"].strip()
            if unit != _KIND_UNITS[kind]:
                raise BadUnit(f"capacity_unit {unit!r} invalid for kind {kind.value} "
                              f"(expected {_KIND_UNITS[kind]})", file=fname, row=lineno,
                              field="capacity_unit")
            holding_raw = (rec.get("holding_cost_thb_ton_month") or "").strip()
            holding = None if holding_raw == "" else _parse_float(
                holding_raw, file=fname, row=lineno, field="holding_cost_thb_ton_month")
            override_raw = (rec.get("efficiency_override") or "").strip()
            override = None if override_raw == "" else _parse_float(
                override_raw, file=fname, row=lineno, field="efficiency_override")
            plant = Plant(
                plant_id=rec["plant_id"].strip(),
                kind=kind,
                technology=tech,
                capacity=_parse_float(rec["capacity"], file=fname, row=lineno,
                                      field="capacity"),
                max_inventory=_parse_float(rec["max_inventory_tons"], file=fname,
                                           row=lineno, field="max_inventory_tons"),
                holding_cost=holding,
                location=(_parse_float(rec["lat"], file=fname, row=lineno, field="lat"),
                          _parse_float(rec["lon"], file=fname, row=lineno, field="lon")),
                efficiency_override=override,
            )
            try:
                plant.validate()
            except DataError as exc:
                raise type(exc)(str(exc), file=fname, row=lineno, field=exc.field)
            plants.append(plant)
    return plants


def demand_from_config(config: Mapping[str, str] | None) -> DemandTargets:
    cfg = config or {}

    def get(key: str) -> float:
        raw = cfg.get(key)
        if raw is None:
            return 0.0
        return _parse_float(str(raw), file="<config>", row=0, field=key)

    return DemandTargets(
        d_biomass_elec=get("demand.biomass_mw"),
        d_biogas_elec=get("demand.biogas_mw"),
        d_ethanol=get("demand.ethanol_ml_day"),
    )


def load_dataset(supplier_file: str | Path, plant_file: str | Path,
                 config: Mapping[str, str] | str | Path | None = None) -> Dataset:
    """Load and fully validate a dataset from the documented CSV schemas.

    `config` may be a parsed key-value mapping or a path to a config file;
    only the demand.* keys are consumed here.
    """
    if isinstance(config, (str, Path)):
        config = parse_config_file(config)
    dataset = Dataset(
        biomass=tuple(builtin_biomass_table()),
        suppliers=tuple(_read_suppliers(supplier_file)),
        plants=tuple(_read_plants(plant_file)),
        timegrid=TimeGrid.civil(),
        demand=demand_from_config(config),
    )
    dataset.validate()
    return dataset


# ---------------------------------------------------------------------------
# Synthetic desk-scale datasets

# Thailand-ish bounding box for generated coordinates.
_LAT_RANGE = (6.0, 19.5)
_LON_RANGE = (98.0, 105.0)

# Harvest seasonality: 4 contiguous peak months carry this share of the year.
PEAK_SEASON_MONTHS = 4
PEAK_SEASON_SHARE = 0.70


def _season_profile(start: int) -> np.ndarray:
    """Monthly share vector: 4 peak months from `start` (0-based), rest uniform."""
    prof = np.full(12, (1.0 - PEAK_SEASON_SHARE) / (12 - PEAK_SEASON_MONTHS))
    for k in range(PEAK_SEASON_MONTHS):
        prof[(start + k) % 12] = PEAK_SEASON_SHARE / PEAK_SEASON_MONTHS
    return prof


def synth_dataset(seed: int, n_suppliers: int, n_biomass: int, n_plants: int) -> Dataset:
    """Generate a deterministic desk-scale dataset.

    Biomass are drawn from the built-in table so that every generated plant
    kind has at least one eligible feedstock; demand targets are sized at
    roughly half of a conservative feasibility bound so the cost scenarios
    are solvable out of the box.
    """
    if n_suppliers < 1 or n_biomass < 1 or n_plants < 1:
        raise SizeOutOfRange("all sizes must be >= 1")
    if n_biomass > 17:
        raise SizeOutOfRange("n_biomass must be <= 17")
    rng = np.random.default_rng(seed)
    table = {s.id: s for s in builtin_biomass_table()}

    gas_capable = [b for b, s in table.items() if s.biogas_heat_equiv is not None]
    eth_capable = [b for b in _ETHANOL_ONLY]
    all_ids = list(table)

    chosen: list[Biomass] = []
    chosen.append(gas_capable[int(rng.integers(len(gas_capable)))])
    if n_biomass >= 2:
        chosen.append(sorted(eth_capable)[int(rng.integers(len(eth_capable)))])
    while len(chosen) < n_biomass:
        pick = all_ids[int(rng.integers(len(all_ids)))]
        if pick not in chosen:
            chosen.append(pick)
    chosen_set = set(chosen)
    specs = tuple(s for b, s in table.items() if b in chosen_set)  # table order

    heat_ok = any(table[b].heat_capacity is not None for b in chosen)
    gas_ok = any(table[b].biogas_heat_equiv is not None for b in chosen)
    eth_ok = any(table[b].ethanol_coeff is not None for b in chosen)
    kinds = [k for k, ok in ((PlantKind.BIOMASS_POWER, heat_ok),
                             (PlantKind.BIOGAS_POWER, gas_ok),
                             (PlantKind.ETHANOL, eth_ok)) if ok]

    # Harvest season start month per biomass (shared by all suppliers).
    season_start = {b: int(rng.integers(12)) for b in chosen}

    suppliers = []
    for i in range(1, n_suppliers + 1):
        lat = rng.uniform(*_LAT_RANGE)
        lon = rng.uniform(*_LON_RANGE)
        avail: dict[Biomass, tuple[float, ...]] = {}
        for b in chosen:
            annual = rng.uniform(8_000.0, 25_000.0)
            monthly = annual * _season_profile(season_start[b])
            avail[b] = tuple(float(x) for x in monthly)
        suppliers.append(SupplierProfile(
            province_id=i, name=f"province{i:02d}", location=(float(lat), float(lon)),
            availability=avail))

    plants = []
    for j in range(1, n_plants + 1):
        kind = kinds[(j - 1) % len(kinds)]
        if kind is PlantKind.BIOMASS_POWER:
            tech = int(rng.choice((TECH_DIRECT_FIRING, TECH_GASIFICATION,
                                   TECH_COGENERATION)))
            capacity = float(rng.uniform(4.0, 12.0))          # MW
        elif kind is PlantKind.BIOGAS_POWER:
            tech = TECH_ANAEROBIC_DIGESTION
            capacity = float(rng.uniform(0.03, 0.10))         # MW
        else:
            tech = TECH_FERMENTATION
            capacity = float(rng.uniform(10_000.0, 30_000.0))  # L/day
        plants.append(Plant(
            plant_id=f"plant{j:02d}",
            kind=kind,
            technology=tech,
            capacity=capacity,
            max_inventory=float(rng.uniform(20_000.0, 50_000.0)),
            holding_cost=float(rng.uniform(20.0, 80.0)),
            location=(float(rng.uniform(*_LAT_RANGE)), float(rng.uniform(*_LON_RANGE))),
        ))

    demand = _synthetic_demand(specs, suppliers, plants)
    dataset = Dataset(biomass=specs, suppliers=tuple(suppliers), plants=tuple(plants),
                      timegrid=TimeGrid.civil(), demand=demand)
    dataset.validate()
    return dataset


# Default efficiencies used only to size synthetic demand; the scenario
# configuration owns the authoritative values.
_SIZING_ETA = {TECH_DIRECT_FIRING: 0.25, TECH_GASIFICATION: 0.30,
               TECH_COGENERATION: 0.35, TECH_ANAEROBIC_DIGESTION: 0.35}
_AVAILABILITY_FACTOR_SIZING = 0.89

# Demand is sized at this fraction of min(capacity bound, supply-share bound).
_DEMAND_FRACTION = 0.5
# Conservative shares of the (partly shared) feedstock pool per kind.
_SUPPLY_SHARE = {PlantKind.BIOMASS_POWER: 0.70, PlantKind.BIOGAS_POWER: 0.10,
                 PlantKind.ETHANOL: 0.80}


def _synthetic_demand(specs: tuple[BiomassSpec, ...], suppliers: list[SupplierProfile],
                      plants: list[Plant]) -> DemandTargets:
    annual = {s.id: 0.0 for s in specs}
    for sup in suppliers:
        for b, months in sup.availability.items():
            annual[b] += sum(months)

    def supply_mwh(kind: PlantKind) -> float:
        total = 0.0
        for s in specs:
            if kind is PlantKind.BIOMASS_POWER and s.heat_capacity is not None:
                total += annual[s.id] * s.heat_capacity * _SIZING_ETA[TECH_COGENERATION] / 3600.0
            elif kind is PlantKind.BIOGAS_POWER and s.biogas_heat_equiv is not None:
                total += annual[s.id] * s.biogas_heat_equiv * \
                    _SIZING_ETA[TECH_ANAEROBIC_DIGESTION] / 3600.0
        return total

    def supply_liters() -> float:
        return sum(annual[s.id] * 1000.0 / s.ethanol_coeff
                   for s in specs if s.ethanol_coeff is not None)

    cap_mwh = {PlantKind.BIOMASS_POWER: 0.0, PlantKind.BIOGAS_POWER: 0.0}
    cap_liters = 0.0
    for p in plants:
        if p.kind is PlantKind.ETHANOL:
            cap_liters += p.capacity * 365.0
        else:
            cap_mwh[p.kind] += p.capacity * 8760.0 * _AVAILABILITY_FACTOR_SIZING

    kinds = {p.kind for p in plants}
    d_biomass = d_biogas = d_eth = 0.0
    if PlantKind.BIOMASS_POWER in kinds:
        mwh = _DEMAND_FRACTION * min(cap_mwh[PlantKind.BIOMASS_POWER],
                                     _SUPPLY_SHARE[PlantKind.BIOMASS_POWER]
                                     * supply_mwh(PlantKind.BIOMASS_POWER))
        d_biomass = mwh / 8760.0
    if PlantKind.BIOGAS_POWER in kinds:
        mwh = _DEMAND_FRACTION * min(cap_mwh[PlantKind.BIOGAS_POWER],
                                     _SUPPLY_SHARE[PlantKind.BIOGAS_POWER]
                                     * supply_mwh(PlantKind.BIOGAS_POWER))
        d_biogas = mwh / 8760.0
    if PlantKind.ETHANOL in kinds:
        liters = _DEMAND_FRACTION * min(cap_liters,
                                        _SUPPLY_SHARE[PlantKind.ETHANOL] * supply_liters())
        d_eth = liters / 365.0 / 1e6
    return DemandTargets(d_biomass_elec=d_biomass, d_biogas_elec=d_biogas, d_ethanol=d_eth)
