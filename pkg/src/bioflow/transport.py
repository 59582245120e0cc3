"""Truck loading, per-biomass transport costs and supplier-plant distances.

The variable transport cost of a biomass is the truck's cost per km divided
by the tons one truck can load, where the load is limited either by weight
(payload) or by cargo volume times bulk density. Costs are kept unrounded
internally; round only for display.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Mapping

from .datamodel import Biomass, BiomassSpec, Dataset
from .errors import BadUnit, DistanceBackendError, MissingMatrixEntry

EARTH_RADIUS_KM = 6371.0

# Default road-distance multiplier applied on top of great-circle distance.
DEFAULT_WINDING_FACTOR = 1.3

TRUCK_COST_THB_PER_KM = 6.561


@dataclass(frozen=True)
class TruckSpec:
    """A transport vehicle: payload in tons, cargo volume in m3 (None for
    weight-limited-only tankers), variable cost in THB/km."""

    name: str
    payload: float
    cargo_volume: float | None
    cost_per_km: float

    def validate(self) -> None:
        if self.payload <= 0:
            raise BadUnit(f"truck {self.name}: payload must be > 0", field="payload")
        if self.cost_per_km <= 0:
            raise BadUnit(f"truck {self.name}: cost_per_km must be > 0",
                          field="cost_per_km")
        if self.cargo_volume is not None and self.cargo_volume <= 0:
            raise BadUnit(f"truck {self.name}: cargo_volume must be > 0",
                          field="cargo_volume")


# Payload and cargo volume are back-solved so the computed unit costs match
# the published per-biomass transport cost table at 2 decimals.
def default_flatbed() -> TruckSpec:
    return TruckSpec(name="flatbed10w", payload=16.0, cargo_volume=36.4,
                     cost_per_km=TRUCK_COST_THB_PER_KM)


def default_tanker() -> TruckSpec:
    return TruckSpec(name="tanker", payload=28.5, cargo_volume=None,
                     cost_per_km=TRUCK_COST_THB_PER_KM)


def truck_for(biomass: Biomass, flatbed: TruckSpec | None = None,
              tanker: TruckSpec | None = None) -> TruckSpec:
    """Molasses moves in tank trucks; everything else on the 10-wheel flatbed."""
    if biomass is Biomass.MOLASSES:
        return tanker or default_tanker()
    return flatbed or default_flatbed()


def truck_load(biomass: BiomassSpec, truck: TruckSpec) -> float:
    """Tons one truck can carry: min of payload and volumetric load."""
    if truck.cargo_volume is None:
        return truck.payload
    volumetric = biomass.density * truck.cargo_volume / 1000.0
    return min(truck.payload, volumetric)


def unit_cost(biomass: BiomassSpec, truck: TruckSpec) -> float:
    """Variable transport cost in THB per km per ton, unrounded."""
    return truck.cost_per_km / truck_load(biomass, truck)


def display_unit_cost(biomass: BiomassSpec, truck: TruckSpec) -> float:
    return round(unit_cost(biomass, truck), 2)


def shipment_cost(biomass: BiomassSpec, tons: float, km: float,
                  truck: TruckSpec | None = None) -> float:
    if tons < 0 or km < 0:
        raise BadUnit("tons and km must be >= 0")
    truck = truck or truck_for(biomass.id)
    return unit_cost(biomass, truck) * tons * km


def haversine_km(a: tuple[float, float], b: tuple[float, float]) -> float:
    """Great-circle distance between two (lat, lon) points in degrees."""
    lat1, lon1 = map(math.radians, a)
    lat2, lon2 = map(math.radians, b)
    dlat = lat2 - lat1
    dlon = lon2 - lon1
    s = math.sin(dlat / 2.0) ** 2 + math.cos(lat1) * math.cos(lat2) * math.sin(dlon / 2.0) ** 2
    return 2.0 * EARTH_RADIUS_KM * math.asin(min(1.0, math.sqrt(s)))


RoutingFn = Callable[[tuple[float, float], tuple[float, float]], float]


@dataclass(frozen=True)
class DistanceProvider:
    """Supplier-to-plant road distances.

    mode "matrix-file" looks entries up in a (supplier_id, plant_id) -> km
    table; "haversine" computes great-circle distance times a road-winding
    factor; "routing-adapter" delegates to a user-supplied callable. Missing
    matrix entries fall back to haversine only when `allow_fallback` is set,
    otherwise they raise.
    """

    mode: str = "haversine"
    matrix: Mapping[tuple[int, str], float] | None = None
    winding_factor: float = DEFAULT_WINDING_FACTOR
    allow_fallback: bool = False
    routing_fn: RoutingFn | None = None

    def __post_init__(self) -> None:
        if self.mode not in ("matrix-file", "haversine", "routing-adapter"):
            raise BadUnit(f"unknown distance mode {self.mode!r}", field="mode")
        if self.mode == "matrix-file" and self.matrix is None:
            raise BadUnit("matrix-file mode needs a matrix", field="matrix")
        if self.mode == "routing-adapter" and self.routing_fn is None:
            raise BadUnit("routing-adapter mode needs a routing callable",
                          field="routing_fn")
        if self.winding_factor <= 0:
            raise BadUnit("winding factor must be > 0", field="winding_factor")

    def _great_circle(self, sup_loc: tuple[float, float],
                      plant_loc: tuple[float, float]) -> float:
        return haversine_km(sup_loc, plant_loc) * self.winding_factor

    def distance(self, supplier_id: int, plant_id: str,
                 sup_loc: tuple[float, float], plant_loc: tuple[float, float]) -> float:
        if self.mode == "matrix-file":
            assert self.matrix is not None
            km = self.matrix.get((supplier_id, plant_id))
            if km is not None:
                return km
            if self.allow_fallback:
                return self._great_circle(sup_loc, plant_loc)
            raise MissingMatrixEntry(
                f"no distance entry for supplier {supplier_id} -> plant {plant_id}")
        if self.mode == "routing-adapter":
            assert self.routing_fn is not None
            try:
                km = self.routing_fn(sup_loc, plant_loc)
            except Exception as exc:
                if self.allow_fallback:
                    return self._great_circle(sup_loc, plant_loc)
                raise DistanceBackendError(f"routing backend failed: {exc}") from exc
            if km < 0 or not math.isfinite(km):
                raise DistanceBackendError(f"routing backend returned invalid km {km}")
            return km
        return self._great_circle(sup_loc, plant_loc)


def distance(provider: DistanceProvider, dataset: Dataset, supplier_id: int,
             plant_id: str) -> float:
    sup = next(s for s in dataset.suppliers if s.province_id == supplier_id)
    plant = next(p for p in dataset.plants if p.plant_id == plant_id)
    return provider.distance(supplier_id, plant_id, sup.location, plant.location)


def distance_table(provider: DistanceProvider,
                   dataset: Dataset) -> dict[tuple[int, str], float]:
    """All supplier-plant distances for a dataset, computed once."""
    out = {}
    for sup in dataset.suppliers:
        for plant in dataset.plants:
            out[(sup.province_id, plant.plant_id)] = provider.distance(
                sup.province_id, plant.plant_id, sup.location, plant.location)
    return out


def load_distance_matrix(path: str | Path) -> dict[tuple[int, str], float]:
    """Read distances.csv (supplier_id,plant_id,km); sparse files are allowed."""
    fname = str(path)
    matrix: dict[tuple[int, str], float] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        for col in ("supplier_id", "plant_id", "km"):
            if col not in (reader.fieldnames or ()):
                raise BadUnit(f"missing column {col!r}", file=fname, field=col)
        for lineno, rec in enumerate(reader, start=2):
            try:
                sid = int(rec["supplier_id"])
                km = float(rec["km"])
            except (TypeError, ValueError):
                raise BadUnit("cannot parse supplier_id/km", file=fname, row=lineno,
                              field="km")
            if km < 0 or not math.isfinite(km):
                raise BadUnit(f"km {km} must be finite and >= 0", file=fname,
                              row=lineno, field="km")
            matrix[(sid, rec["plant_id"].strip())] = km
    return matrix
