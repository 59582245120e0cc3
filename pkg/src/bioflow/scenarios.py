"""Scenario builders: translate a Dataset into multi-period LPs and read
solved models back into reports.

Every builder shares the same flow core over monthly periods:

  C1  shipments out of a supplier never exceed its availability,
  C2  end-of-month inventory balances inflow minus consumption,
  C3  total plant inventory stays under the plant cap,
  C4  plant output equals consumption times the per-ton yield,
  C5  output stays under (derated) capacity,

with all quantities non-negative and shipment/consumption columns existing
only for biomass-technology pairs that can actually convert.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

import numpy as np

from .config import DEMAND_AT_LEAST, DEMAND_EQUALITY, ScenarioConfig
from .conversion import ETHANOL_MWH_PER_LITER, mwh_equivalent, yield_per_ton
from .datamodel import (
    Biomass,
    BiomassSpec,
    Dataset,
    DemandTargets,
    Plant,
    PlantKind,
    TECH_ANAEROBIC_DIGESTION,
    TECH_GASIFICATION,
)
from .errors import AllZeroWeights, BadUnit, IneligibleBiomass, NoEligibleFeedstock, NonOptimalSolution
from .lp import (
    EQUAL,
    GREATER_EQUAL,
    INF,
    LESS_EQUAL,
    LpModel,
    MAXIMIZE,
    MINIMIZE,
    Solution,
    SolveStatus,
    SolverOptions,
    solve,
)
from .transport import DistanceProvider, truck_for, unit_cost


@dataclass(frozen=True)
class CandidateSite:
    """A location where the expansion scenario may install a new plant.

    New biomass power plants use gasification; new biogas plants use
    anaerobic digestion. max_inventory of None means uncapped storage.
    """

    site_id: str
    kind: PlantKind
    location: tuple[float, float]
    max_inventory: float | None = None

    @property
    def technology(self) -> int:
        if self.kind is PlantKind.BIOMASS_POWER:
            return TECH_GASIFICATION
        if self.kind is PlantKind.BIOGAS_POWER:
            return TECH_ANAEROBIC_DIGESTION
        raise BadUnit("new plants can only be power plants", field="kind")


@dataclass
class BuiltModel:
    """An LpModel plus the index maps tying columns back to planning
    quantities. Every column belongs to exactly one map."""

    scenario: str
    model: LpModel
    dataset: Dataset
    config: ScenarioConfig
    x_index: dict[tuple[int, Biomass, str, int], int] = field(default_factory=dict)
    u_index: dict[tuple[Biomass, str, int], int] = field(default_factory=dict)
    v_index: dict[tuple[Biomass, str, int], int] = field(default_factory=dict)
    e_index: dict[tuple[str, int], int] = field(default_factory=dict)
    extra_index: dict[str, int] = field(default_factory=dict)   # D_*, M_peak
    splus_index: dict[tuple[int, Biomass], int] = field(default_factory=dict)
    pnew_index: dict[str, int] = field(default_factory=dict)
    demand_rows: list[tuple[int, str]] = field(default_factory=list)
    new_sites: tuple[CandidateSite, ...] = ()
    # cost coefficients used both for the objective and for report recomputation
    purchase_coef: dict[int, float] = field(default_factory=dict)
    transport_coef: dict[int, float] = field(default_factory=dict)
    operating_coef: dict[int, float] = field(default_factory=dict)
    holding_coef: dict[int, float] = field(default_factory=dict)
    defaulted_holding_plants: tuple[str, ...] = ()
    distances: dict[tuple[int, str], float] = field(default_factory=dict)
    yields: dict[tuple[Biomass, str], float] = field(default_factory=dict)
    plant_kinds: dict[str, PlantKind] = field(default_factory=dict)

    def column_maps(self) -> tuple[dict, ...]:
        return (self.x_index, self.u_index, self.v_index, self.e_index,
                self.extra_index, self.splus_index, self.pnew_index)

    def check_column_coverage(self) -> None:
        seen: set[int] = set()
        for mp in self.column_maps():
            for col in mp.values():
                if col in seen:
                    raise BadUnit(f"column {col} appears in two index maps")
                seen.add(col)
        if seen != set(range(self.model.num_vars)):
            raise BadUnit("index maps do not cover the model columns exactly")

    def cost_objective(self) -> dict[int, float]:
        obj: dict[int, float] = {}
        for part in (self.purchase_coef, self.transport_coef,
                     self.operating_coef, self.holding_coef):
            for j, a in part.items():
                obj[j] = obj.get(j, 0.0) + a
        return obj


def _effective_holding(plant: Plant, config: ScenarioConfig) -> tuple[float, bool]:
    if plant.holding_cost is None:
        return config.default_holding_cost, True
    return plant.holding_cost, False


def _plant_cap(plant_kind: PlantKind, capacity: float, month_hours: int,
               month_days: int, config: ScenarioConfig) -> float:
    if plant_kind is PlantKind.ETHANOL:
        return capacity * month_days
    return capacity * month_hours * config.availability_factor


class _FlowBuilder:
    """Shared machinery for all scenario builders."""

    def __init__(self, scenario: str, sense: str, dataset: Dataset,
                 config: ScenarioConfig, provider: DistanceProvider | None,
                 new_sites: Sequence[CandidateSite] = ()):
        config.validate()
        dataset.validate()
        self.dataset = dataset
        self.config = config
        self.months = dataset.timegrid.months
        self.specs = dataset.spec_index()
        self.carried = dataset.carried_biomass()
        self.new_sites = tuple(new_sites)
        self.built = BuiltModel(scenario=scenario, model=LpModel(sense),
                                dataset=dataset, config=config,
                                new_sites=self.new_sites)
        self.provider = provider or DistanceProvider(
            winding_factor=config.road_winding_factor)

        # unified view over existing plants and candidate new sites
        self.units: list[tuple[str, PlantKind, int, float | None, Plant | None]] = []
        for p in dataset.plants:
            self.units.append((p.plant_id, p.kind, p.technology, p.max_inventory, p))
        for s in self.new_sites:
            if any(s.site_id == u[0] for u in self.units):
                raise BadUnit(f"site id {s.site_id!r} collides with a plant id")
            self.units.append((s.site_id, s.kind, s.technology, s.max_inventory, None))

        self.eligible: dict[str, list[Biomass]] = {}
        for pid, kind, tech, _k, plant in self.units:
            ok = []
            for b in self.carried:
                spec = self.specs[b]
                if tech in spec.eligible_techs:
                    override = plant.efficiency_override if plant else None
                    try:
                        y = yield_per_ton(spec, tech, config.efficiencies, override)
                    except IneligibleBiomass:
                        continue
                    self.built.yields[(b, pid)] = y
                    ok.append(b)
            if not ok:
                raise NoEligibleFeedstock(pid)
            self.eligible[pid] = ok
            self.built.plant_kinds[pid] = kind

        self._distance_cache: dict[tuple[int, str], float] = {}
        self._unit_tcost = {
            b: unit_cost(self.specs[b], truck_for(b, config.flatbed, config.tanker))
            for b in self.carried}

    # -- helpers --------------------------------------------------------

    def distance_km(self, supplier_id: int, pid: str) -> float:
        key = (supplier_id, pid)
        if key not in self._distance_cache:
            sup = next(s for s in self.dataset.suppliers if s.province_id == supplier_id)
            loc = None
            for p in self.dataset.plants:
                if p.plant_id == pid:
                    loc = p.location
            for s in self.new_sites:
                if s.site_id == pid:
                    loc = s.location
            self._distance_cache[key] = self.provider.distance(
                supplier_id, pid, sup.location, loc)
            self.built.distances[key] = self._distance_cache[key]
        return self._distance_cache[key]

    def unit_capacity(self, pid: str, month_idx: int) -> float:
        """Capacity in output units for existing plants; new sites have
        variable capacity and return None-equivalent via KeyError."""
        for p in self.dataset.plants:
            if p.plant_id == pid:
                month = self.months[month_idx - 1]
                return _plant_cap(p.kind, p.capacity, month.hours, month.days,
                                  self.config)
        raise KeyError(pid)

    # -- core construction -----------------------------------------------

    def add_flow_core(self, with_splus: bool = False) -> None:
        m = self.built.model
        cfg = self.config
        dataset = self.dataset

        consumers: dict[Biomass, list[str]] = {b: [] for b in self.carried}
        for pid, bs in self.eligible.items():
            for b in bs:
                consumers[b].append(pid)

        # shipment, consumption, inventory and output columns
        for sup in dataset.suppliers:
            for b in sup.availability:
                if not consumers[b]:
                    continue
                for pid in consumers[b]:
                    for t in range(1, 13):
                        name = f"x[{sup.province_id},{b.slug},{pid},{t}]"
                        self.built.x_index[(sup.province_id, b, pid, t)] = \
                            m.add_var(name)
        for pid, bs in self.eligible.items():
            for b in bs:
                for t in range(1, 13):
                    self.built.u_index[(b, pid, t)] = m.add_var(f"u[{b.slug},{pid},{t}]")
                    self.built.v_index[(b, pid, t)] = m.add_var(f"v[{b.slug},{pid},{t}]")
        for pid, _kind, _tech, _k, _plant in self.units:
            for t in range(1, 13):
                self.built.e_index[(pid, t)] = m.add_var(f"e[{pid},{t}]")
        if with_splus:
            for sup in dataset.suppliers:
                for b in sup.availability:
                    if consumers[b]:
                        self.built.splus_index[(sup.province_id, b)] = m.add_var(
                            f"splus[{sup.province_id},{b.slug}]")
        for site in self.new_sites:
            ub = cfg.new_plant_cap_mw if cfg.new_plant_cap_mw is not None else INF
            self.built.pnew_index[site.site_id] = m.add_var(
                f"Pnew[{site.site_id}]", 0.0, ub)

        # C1: availability per (supplier, biomass, month)
        for sup in dataset.suppliers:
            for b, months in sup.availability.items():
                if not consumers[b]:
                    continue
                for t in range(1, 13):
                    coeffs = {self.built.x_index[(sup.province_id, b, pid, t)]: 1.0
                              for pid in consumers[b]}
                    if with_splus:
                        coeffs[self.built.splus_index[(sup.province_id, b)]] = -1.0
                    m.add_row(f"avail[{sup.province_id},{b.slug},{t}]", coeffs,
                              LESS_EQUAL, months[t - 1])

        # C2: inventory balance; C3: inventory cap; C4: output link; C5: capacity
        for pid, kind, _tech, max_inv, _plant in self.units:
            for b in self.eligible[pid]:
                for t in range(1, 13):
                    coeffs = {self.built.v_index[(b, pid, t)]: 1.0,
                              self.built.u_index[(b, pid, t)]: 1.0}
                    if t > 1:
                        coeffs[self.built.v_index[(b, pid, t - 1)]] = -1.0
                    for sup in dataset.suppliers:
                        key = (sup.province_id, b, pid, t)
                        if key in self.built.x_index:
                            coeffs[self.built.x_index[key]] = -1.0
                    rhs = cfg.initial_inventory if t == 1 else 0.0
                    m.add_row(f"inv[{b.slug},{pid},{t}]", coeffs, EQUAL, rhs)
            if max_inv is not None:
                for t in range(1, 13):
                    coeffs = {self.built.v_index[(b, pid, t)]: 1.0
                              for b in self.eligible[pid]}
                    m.add_row(f"invcap[{pid},{t}]", coeffs, LESS_EQUAL, max_inv)
            for t in range(1, 13):
                coeffs = {self.built.e_index[(pid, t)]: 1.0}
                for b in self.eligible[pid]:
                    coeffs[self.built.u_index[(b, pid, t)]] = -self.built.yields[(b, pid)]
                m.add_row(f"link[{pid},{t}]", coeffs, EQUAL, 0.0)
            if pid in self.built.pnew_index:
                for t in range(1, 13):
                    month = self.months[t - 1]
                    derate = month.hours * cfg.availability_factor
                    m.add_row(f"cap[{pid},{t}]",
                              {self.built.e_index[(pid, t)]: 1.0,
                               self.built.pnew_index[pid]: -derate},
                              LESS_EQUAL, 0.0)
            else:
                for t in range(1, 13):
                    m.add_row(f"cap[{pid},{t}]",
                              {self.built.e_index[(pid, t)]: 1.0},
                              LESS_EQUAL, self.unit_capacity(pid, t))

    def add_cost_coefficients(self) -> None:
        """Populate the four cost-term coefficient maps."""
        b_cost = self.built.purchase_coef
        t_cost = self.built.transport_coef
        for (i, b, pid, t), col in self.built.x_index.items():
            price = self.specs[b].price
            if price:
                b_cost[col] = price
            rate = self._unit_tcost[b] * self.distance_km(i, pid)
            if rate:
                t_cost[col] = rate
        defaulted = []
        for pid, kind, tech, _k, plant in self.units:
            op = self.config.operating_cost_per_unit(tech)
            for t in range(1, 13):
                if op:
                    self.built.operating_coef[self.built.e_index[(pid, t)]] = op
            if plant is not None:
                hold, was_defaulted = _effective_holding(plant, self.config)
                if was_defaulted:
                    defaulted.append(pid)
            else:
                hold = self.config.default_holding_cost
            if hold:
                for b in self.eligible[pid]:
                    for t in range(1, 13):
                        self.built.holding_coef[self.built.v_index[(b, pid, t)]] = hold
        self.built.defaulted_holding_plants = tuple(defaulted)

    def demand_sense(self) -> str:
        return EQUAL if self.config.demand_mode == DEMAND_EQUALITY else GREATER_EQUAL

    def plants_of(self, kind: PlantKind) -> list[str]:
        return [pid for pid, k in self.built.plant_kinds.items() if k is kind]

    def add_demand_rows(self, demands: DemandTargets) -> None:
        """Fixed-demand rows: monthly for the two electric kinds, aggregate
        annual for ethanol."""
        m = self.built.model
        sense = self.demand_sense()
        for label, kind, target in (
                ("biomass", PlantKind.BIOMASS_POWER, demands.d_biomass_elec),
                ("biogas", PlantKind.BIOGAS_POWER, demands.d_biogas_elec)):
            pids = self.plants_of(kind)
            if not pids and target == 0.0:
                continue
            for t in range(1, 13):
                hours = self.months[t - 1].hours
                coeffs = {self.built.e_index[(pid, t)]: 1.0 for pid in pids}
                row = m.add_row(f"demand_{label}[{t}]", coeffs, sense, target * hours)
                self.built.demand_rows.append((row, label))
        pids = self.plants_of(PlantKind.ETHANOL)
        if pids or demands.d_ethanol > 0.0:
            coeffs = {self.built.e_index[(pid, t)]: 1.0
                      for pid in pids for t in range(1, 13)}
            row = m.add_row("demand_ethanol", coeffs, sense,
                            demands.d_ethanol * 1e6 * 365.0)
            self.built.demand_rows.append((row, "ethanol"))


# ---------------------------------------------------------------------------
# Scenario entry points

def build_flow_core(dataset: Dataset, config: ScenarioConfig,
                    provider: DistanceProvider | None = None) -> BuiltModel:
    """The bare flow model (C1-C5) with no objective; mostly for tests and
    model dumps."""
    fb = _FlowBuilder("core", MINIMIZE, dataset, config, provider)
    fb.add_flow_core()
    fb.built.check_column_coverage()
    return fb.built


def build_min_cost(dataset: Dataset, config: ScenarioConfig,
                   demands: DemandTargets | None = None,
                   provider: DistanceProvider | None = None) -> BuiltModel:
    """Case-1 style cost minimization at fixed demand."""
    demands = demands if demands is not None else dataset.demand
    demands.validate()
    fb = _FlowBuilder("mincost", MINIMIZE, dataset, config, provider)
    fb.add_flow_core()
    fb.add_demand_rows(demands)
    fb.add_cost_coefficients()
    fb.built.model.set_objective(fb.built.cost_objective())
    fb.built.check_column_coverage()
    return fb.built


def build_potential(dataset: Dataset, config: ScenarioConfig,
                    demands: DemandTargets | None = None,
                    provider: DistanceProvider | None = None) -> BuiltModel:
    """Maximum-deliverable-energy scan: demand levels become variables capped
    at the plan targets and annual energy output is maximized."""
    caps = demands if demands is not None else dataset.demand
    caps.validate()
    fb = _FlowBuilder("potential", MAXIMIZE, dataset, config, provider)
    fb.add_flow_core()
    fb.add_cost_coefficients()     # reports still want the cost breakdown
    m = fb.built.model
    d_bio = m.add_var("D_biomass", 0.0, caps.d_biomass_elec)
    d_gas = m.add_var("D_biogas", 0.0, caps.d_biogas_elec)
    d_eth = m.add_var("D_ethanol", 0.0, caps.d_ethanol)
    fb.built.extra_index["D_biomass"] = d_bio
    fb.built.extra_index["D_biogas"] = d_gas
    fb.built.extra_index["D_ethanol"] = d_eth
    sense = fb.demand_sense()
    for label, kind, dcol in (("biomass", PlantKind.BIOMASS_POWER, d_bio),
                              ("biogas", PlantKind.BIOGAS_POWER, d_gas)):
        pids = fb.plants_of(kind)
        for t in range(1, 13):
            hours = fb.months[t - 1].hours
            coeffs = {fb.built.e_index[(pid, t)]: 1.0 for pid in pids}
            coeffs[dcol] = -float(hours)
            row = m.add_row(f"demand_{label}[{t}]", coeffs, sense, 0.0)
            fb.built.demand_rows.append((row, label))
    pids = fb.plants_of(PlantKind.ETHANOL)
    coeffs = {fb.built.e_index[(pid, t)]: 1.0 for pid in pids for t in range(1, 13)}
    coeffs[d_eth] = -1e6 * 365.0
    row = m.add_row("demand_ethanol", coeffs, sense, 0.0)
    fb.built.demand_rows.append((row, "ethanol"))

    hours_total = float(sum(mo.hours for mo in fb.months))
    days_total = float(sum(mo.days for mo in fb.months))
    m.set_objective({d_bio: hours_total, d_gas: hours_total,
                     d_eth: 1e6 * days_total * ETHANOL_MWH_PER_LITER})
    fb.built.check_column_coverage()
    return fb.built


def build_full_operation(dataset: Dataset, config: ScenarioConfig,
                         demands: DemandTargets | None = None,
                         provider: DistanceProvider | None = None) -> BuiltModel:
    """Case-2 pass 1: every plant must run at least epsilon of its annual
    capacity and the worst monthly plant inventory M is minimized. Use
    solve_full_operation for the full two-pass scheme."""
    demands = demands if demands is not None else dataset.demand
    demands.validate()
    fb = _FlowBuilder("fullop", MINIMIZE, dataset, config, provider)
    fb.add_flow_core()
    fb.add_demand_rows(demands)
    fb.add_cost_coefficients()
    m = fb.built.model
    for pid, _kind, _tech, _k, _plant in fb.units:
        annual_cap = sum(fb.unit_capacity(pid, t) for t in range(1, 13))
        coeffs = {fb.built.e_index[(pid, t)]: 1.0 for t in range(1, 13)}
        m.add_row(f"minop[{pid}]", coeffs, GREATER_EQUAL,
                  config.epsilon_operation * annual_cap)
    m_peak = m.add_var("M_peak", 0.0, INF)
    fb.built.extra_index["M_peak"] = m_peak
    for pid, _kind, _tech, _k, _plant in fb.units:
        for t in range(1, 13):
            coeffs = {fb.built.v_index[(b, pid, t)]: 1.0 for b in fb.eligible[pid]}
            coeffs[m_peak] = -1.0
            m.add_row(f"peak[{pid},{t}]", coeffs, LESS_EQUAL, 0.0)
    m.set_objective({m_peak: 1.0})
    fb.built.check_column_coverage()
    return fb.built


PEAK_SLACK = 1e-6


def solve_full_operation(dataset: Dataset, config: ScenarioConfig,
                         demands: DemandTargets | None = None,
                         provider: DistanceProvider | None = None,
                         options: SolverOptions | None = None,
                         ) -> tuple[BuiltModel, Solution, float]:
    """Two-pass lexicographic solve: minimize peak inventory M, then pin M
    and minimize total cost. Returns the pass-2 model, its solution and the
    optimal peak value."""
    built = build_full_operation(dataset, config, demands, provider)
    first = solve(built.model, options)
    if first.status != SolveStatus.OPTIMAL:
        return built, first, math.nan
    m_col = built.extra_index["M_peak"]
    m_star = float(first.primal[m_col])
    built.model.ub[m_col] = m_star + PEAK_SLACK
    built.model.set_objective(built.cost_objective())
    second = solve(built.model, options)
    if second.status == SolveStatus.OPTIMAL:
        second = replace(second, iterations=first.iterations + second.iterations)
    return built, second, m_star


def build_expansion(dataset: Dataset, config: ScenarioConfig,
                    targets: DemandTargets,
                    candidate_sites: Sequence[CandidateSite] = (),
                    provider: DistanceProvider | None = None) -> BuiltModel:
    """Growth planning: meet `targets` with as little additional biomass as
    possible, optionally installing new power plants at candidate sites.

    Additional supply splus[i,b] raises supplier availability uniformly in
    every month; the objective minimizes the total monthly addition."""
    targets.validate()
    fb = _FlowBuilder("expand", MINIMIZE, dataset, config, provider,
                      new_sites=candidate_sites)
    fb.add_flow_core(with_splus=True)
    fb.add_demand_rows(targets)
    fb.add_cost_coefficients()
    fb.built.model.set_objective(
        {col: 1.0 for col in fb.built.splus_index.values()})
    fb.built.check_column_coverage()
    return fb.built


def center_of_gravity(points: Sequence[tuple[float, float, float]]) -> tuple[float, float]:
    """Transport-weighted mean of (lat, lon, weight) points."""
    if not points:
        raise AllZeroWeights("no points given")
    total = 0.0
    lat_acc = 0.0
    lon_acc = 0.0
    for lat, lon, w in points:
        if w < 0:
            raise BadUnit("weights must be >= 0")
        total += w
        lat_acc += w * lat
        lon_acc += w * lon
    if total == 0.0:
        raise AllZeroWeights("all weights are zero")
    return (lat_acc / total, lon_acc / total)


def sugarcane_equivalent(molasses_tons: float, config: ScenarioConfig) -> float:
    """Tons of sugarcane that must be harvested to yield this much molasses."""
    if molasses_tons < 0:
        raise BadUnit("molasses_tons must be >= 0")
    return molasses_tons / config.molasses_per_sugarcane


def cost_increase_ratio(base_cost: float, other_cost: float) -> float:
    """Fractional cost increase of `other_cost` over `base_cost`."""
    if base_cost <= 0:
        raise BadUnit("base cost must be > 0")
    return other_cost / base_cost - 1.0


# ---------------------------------------------------------------------------
# Evaluation

@dataclass
class ScenarioReport:
    scenario: str
    status: str
    objective: float
    iterations: int
    costs: dict[str, float]                      # biomass/transport/operating/holding/total
    energy: dict[str, float]                     # per-kind outputs and TWh total
    capacity_factor: dict[str, float]
    operation_rate: dict[str, float]
    inventory_utilization: float
    inventory_variance: dict[str, float]
    demand_values: dict[str, float]              # potential scenario picks
    expansion: dict[str, object]                 # additional supply, new capacity
    defaulted_holding_plants: tuple[str, ...]
    biomass_usage: list[tuple[str, int, float, float]]   # biomass, month, used, available
    production: list[tuple[str, str, int, float]]        # plant, kind, month, output
    inventory_levels: list[tuple[str, int, float]]       # plant, month, tons

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "status": self.status,
            "objective": self.objective,
            "iterations": self.iterations,
            "costs": self.costs,
            "energy": self.energy,
            "capacity_factor": self.capacity_factor,
            "operation_rate": self.operation_rate,
            "inventory_utilization": self.inventory_utilization,
            "inventory_variance": self.inventory_variance,
            "demand_values": self.demand_values,
            "expansion": self.expansion,
            "defaulted_holding_plants": list(self.defaulted_holding_plants),
        }


_OUTPUT_TOL = 1e-6


def evaluate(built: BuiltModel, solution: Solution, dataset: Dataset,
             config: ScenarioConfig) -> ScenarioReport:
    """Turn an Optimal solution into the report behind the result figures."""
    if solution.status != SolveStatus.OPTIMAL:
        raise NonOptimalSolution(
            f"cannot evaluate a {solution.status.value} solution")
    x = solution.primal

    def bucket(coefs: Mapping[int, float]) -> float:
        return float(sum(a * x[j] for j, a in coefs.items()))

    costs = {
        "biomass": bucket(built.purchase_coef),
        "transport": bucket(built.transport_coef),
        "operating": bucket(built.operating_coef),
        "holding": bucket(built.holding_coef),
    }
    costs["total"] = sum(costs.values())

    months = dataset.timegrid.months
    kinds = {PlantKind.BIOMASS_POWER: "biomass-power",
             PlantKind.BIOGAS_POWER: "biogas-power",
             PlantKind.ETHANOL: "ethanol"}

    # primal values can carry ~1e-12 negative roundoff; clamp for reporting
    output_by_unit: dict[str, float] = {}
    for (pid, t), col in built.e_index.items():
        output_by_unit[pid] = output_by_unit.get(pid, 0.0) + max(0.0, float(x[col]))

    energy = {"biomass_power_mwh": 0.0, "biogas_power_mwh": 0.0,
              "ethanol_liters": 0.0}
    for pid, total in output_by_unit.items():
        kind = built.plant_kinds[pid]
        if kind is PlantKind.BIOMASS_POWER:
            energy["biomass_power_mwh"] += total
        elif kind is PlantKind.BIOGAS_POWER:
            energy["biogas_power_mwh"] += total
        else:
            energy["ethanol_liters"] += total
    energy["ethanol_mwh_equiv"] = mwh_equivalent("ethanol", energy["ethanol_liters"])
    energy["total_twh"] = (energy["biomass_power_mwh"] + energy["biogas_power_mwh"]
                           + energy["ethanol_mwh_equiv"]) / 1e6

    # capacity factors against undirated nameplate capacity
    nameplate: dict[str, float] = {}
    produced: dict[str, float] = {}
    produced_equiv_total = 0.0
    nameplate_equiv_total = 0.0
    for plant in dataset.plants:
        label = kinds[plant.kind]
        if plant.kind is PlantKind.ETHANOL:
            cap = plant.capacity * 365.0
            cap_equiv = mwh_equivalent("ethanol", cap)
        else:
            cap = plant.capacity * 8760.0
            cap_equiv = cap
        nameplate[label] = nameplate.get(label, 0.0) + cap
        nameplate_equiv_total += cap_equiv
        out = output_by_unit.get(plant.plant_id, 0.0)
        produced[label] = produced.get(label, 0.0) + out
        produced_equiv_total += mwh_equivalent(
            "ethanol" if plant.kind is PlantKind.ETHANOL else "electricity", out)
    capacity_factor = {label: produced.get(label, 0.0) / nameplate[label]
                       for label in nameplate}
    if nameplate_equiv_total > 0:
        capacity_factor["overall"] = produced_equiv_total / nameplate_equiv_total

    # operation rate: plants with any annual output
    op_counts: dict[str, list[int]] = {}
    for plant in dataset.plants:
        label = kinds[plant.kind]
        running = output_by_unit.get(plant.plant_id, 0.0) > _OUTPUT_TOL
        num, den = op_counts.get(label, [0, 0])
        op_counts[label] = [num + (1 if running else 0), den + 1]
    operation_rate = {label: num / den for label, (num, den) in op_counts.items()}
    if dataset.plants:
        operation_rate["overall"] = sum(n for n, _ in op_counts.values()) / len(
            dataset.plants)

    # inventory metrics over existing plants
    inv_total: dict[tuple[str, int], float] = {}
    for (b, pid, t), col in built.v_index.items():
        inv_total[(pid, t)] = inv_total.get((pid, t), 0.0) + float(x[col])
    util_samples = []
    var_by_kind: dict[str, list[float]] = {}
    all_vars = []
    for plant in dataset.plants:
        series = np.array([inv_total.get((plant.plant_id, t), 0.0)
                           for t in range(1, 13)])
        if plant.max_inventory > 0:
            util_samples.extend(series / plant.max_inventory)
        pv = float(series.var())        # population variance, divisor 12
        all_vars.append(pv)
        var_by_kind.setdefault(kinds[plant.kind], []).append(pv)
    inventory_variance = {label: float(np.mean(vals))
                          for label, vals in var_by_kind.items()}
    if all_vars:
        inventory_variance["overall"] = float(np.mean(all_vars))
    inventory_utilization = float(np.mean(util_samples)) if util_samples else 0.0

    demand_values = {}
    for key in ("D_biomass", "D_biogas", "D_ethanol"):
        if key in built.extra_index:
            demand_values[key] = float(x[built.extra_index[key]])
    if "M_peak" in built.extra_index:
        demand_values["M_peak"] = float(x[built.extra_index["M_peak"]])

    expansion: dict[str, object] = {}
    if built.splus_index:
        monthly_by_biomass: dict[str, float] = {}
        for (i, b), col in built.splus_index.items():
            monthly_by_biomass[b.slug] = monthly_by_biomass.get(b.slug, 0.0) \
                + float(x[col])
        annual_by_biomass = {b: 12.0 * v for b, v in monthly_by_biomass.items()}
        expansion["additional_monthly_tons"] = monthly_by_biomass
        expansion["additional_annual_tons"] = annual_by_biomass
        expansion["total_additional_monthly_tons"] = sum(monthly_by_biomass.values())
        molasses_extra = annual_by_biomass.get(Biomass.MOLASSES.slug, 0.0)
        expansion["sugarcane_equivalent_tons"] = sugarcane_equivalent(
            molasses_extra, config)
        new_caps = {}
        for site in built.new_sites:
            need = 0.0
            for t in range(1, 13):
                hours = months[t - 1].hours
                out = float(x[built.e_index[(site.site_id, t)]])
                need = max(need, out / (hours * config.availability_factor))
            new_caps[site.site_id] = need
        expansion["new_capacity_mw"] = new_caps

    shipped: dict[tuple[Biomass, int], float] = {}
    for (_i, b, _pid, t), col in built.x_index.items():
        shipped[(b, t)] = shipped.get((b, t), 0.0) + float(x[col])
    usage: list[tuple[str, int, float, float]] = []
    for spec in dataset.biomass:
        b = spec.id
        for t in range(1, 13):
            used = shipped.get((b, t), 0.0)
            available = sum(s.tons(b, t) for s in dataset.suppliers)
            if available or used:
                usage.append((b.slug, t, used, available))
    production = [(pid, kinds[built.plant_kinds[pid]] if built.plant_kinds[pid]
                   in kinds else str(built.plant_kinds[pid]), t,
                   float(x[col]))
                  for (pid, t), col in built.e_index.items()]
    inventory_levels = [(pid, t, tons) for (pid, t), tons in
                        sorted(inv_total.items())]

    return ScenarioReport(
        scenario=built.scenario,
        status=solution.status.value,
        objective=float(solution.objective),
        iterations=solution.iterations,
        costs=costs,
        energy=energy,
        capacity_factor=capacity_factor,
        operation_rate=operation_rate,
        inventory_utilization=inventory_utilization,
        inventory_variance=inventory_variance,
        demand_values=demand_values,
        expansion=expansion,
        defaulted_holding_plants=built.defaulted_holding_plants,
        biomass_usage=usage,
        production=production,
        inventory_levels=inventory_levels,
    )


# ---------------------------------------------------------------------------
# Solution verification helpers (used by tests and the acceptance suite)

def _inflow_by_pair_month(built: BuiltModel,
                          x: np.ndarray) -> dict[tuple[Biomass, str, int], float]:
    inflow: dict[tuple[Biomass, str, int], float] = {}
    for (_i, b, pid, t), col in built.x_index.items():
        key = (b, pid, t)
        inflow[key] = inflow.get(key, 0.0) + float(x[col])
    return inflow


def conservation_residual(built: BuiltModel, solution: Solution) -> float:
    """Max violation of per-(biomass, plant) annual flow balance
    inflow - consumption = final - initial inventory, relative to the
    instance scale."""
    x = solution.primal
    scale = max(1.0, float(np.max(np.abs(x), initial=0.0)))
    inflow = _inflow_by_pair_month(built, x)
    worst = 0.0
    pairs = {(b, pid) for (b, pid, _t) in built.u_index}
    v0 = built.config.initial_inventory
    for b, pid in pairs:
        total_in = sum(inflow.get((b, pid, t), 0.0) for t in range(1, 13))
        used = sum(float(x[built.u_index[(b, pid, t)]]) for t in range(1, 13))
        final = float(x[built.v_index[(b, pid, 12)]])
        worst = max(worst, abs(total_in - used - (final - v0)))
    return worst / scale


def monthly_balance_residual(built: BuiltModel, solution: Solution) -> float:
    """Max violation of the month-to-month inventory recursion."""
    x = solution.primal
    scale = max(1.0, float(np.max(np.abs(x), initial=0.0)))
    inflow = _inflow_by_pair_month(built, x)
    worst = 0.0
    v0 = built.config.initial_inventory
    for (b, pid, t), vcol in built.v_index.items():
        prev = v0 if t == 1 else float(x[built.v_index[(b, pid, t - 1)]])
        flow = inflow.get((b, pid, t), 0.0)
        used = float(x[built.u_index[(b, pid, t)]])
        worst = max(worst, abs(float(x[vcol]) - (prev + flow - used)))
    return worst / scale


def demand_row_residuals(built: BuiltModel, solution: Solution) -> dict[str, float]:
    """Signed worst slack per demand label: negative means a shortfall against
    the configured sense."""
    x = solution.primal
    out: dict[str, float] = {}
    for row_idx, label in built.demand_rows:
        row = built.model.rows[row_idx]
        act = sum(a * float(x[j]) for j, a in row.coeffs.items())
        if row.sense == EQUAL:
            slack = -abs(act - row.rhs)
        else:
            slack = act - row.rhs
        out[label] = min(out.get(label, math.inf), slack)
    return out


def capacity_violation(built: BuiltModel, solution: Solution) -> float:
    """Worst violation of inventory caps (C3) and supply limits (C1)."""
    x = solution.primal
    worst = 0.0
    for row in built.model.rows:
        if row.name.startswith(("invcap[", "avail[", "cap[")):
            act = sum(a * float(x[j]) for j, a in row.coeffs.items())
            worst = max(worst, act - row.rhs)
    return worst
