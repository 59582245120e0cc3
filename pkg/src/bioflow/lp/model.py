"""Sparse LP representation and the classical equality standard form."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping

import numpy as np
import scipy.sparse as sp

from ..errors import BadBounds, BadUnit

INF = math.inf

LESS_EQUAL = "<="
EQUAL = "="
GREATER_EQUAL = ">="
SENSES = (LESS_EQUAL, EQUAL, GREATER_EQUAL)

MINIMIZE = "minimize"
MAXIMIZE = "maximize"

# Names that would be ambiguous in the text model format.
_RESERVED_NAMES = frozenset({"inf", "-inf", "nan", "+", "-", "<=", "=", ">=",
                             "SENSE", "VARS", "BOUNDS", "CONSTRAINTS", "OBJECTIVE"})


def _looks_numeric(name: str) -> bool:
    try:
        float(name)
    except ValueError:
        return False
    return True


@dataclass
class Row:
    name: str
    coeffs: dict[int, float]
    sense: str
    rhs: float


class LpModel:
    """A linear program over bounded continuous variables.

    Variables are referenced by integer index; rows hold sparse coefficient
    maps. Instances compare structurally, which the text round-trip tests
    rely on.
    """

    def __init__(self, sense: str = MINIMIZE):
        if sense not in (MINIMIZE, MAXIMIZE):
            raise BadUnit(f"sense must be {MINIMIZE!r} or {MAXIMIZE!r}")
        self.sense = sense
        self.var_names: list[str] = []
        self.lb: list[float] = []
        self.ub: list[float] = []
        self.rows: list[Row] = []
        self.objective: dict[int, float] = {}
        self._name_index: dict[str, int] = {}

    # -- construction -------------------------------------------------

    def add_var(self, name: str, lb: float = 0.0, ub: float = INF) -> int:
        if not name or any(ch.isspace() for ch in name) or ":" in name:
            raise BadUnit(f"bad variable name {name!r}")
        if name in _RESERVED_NAMES or _looks_numeric(name):
            raise BadUnit(f"variable name {name!r} clashes with format tokens")
        if name in self._name_index:
            raise BadUnit(f"duplicate variable name {name!r}")
        if math.isnan(lb) or math.isnan(ub):
            raise BadBounds(f"variable {name}: NaN bound")
        if lb > ub:
            raise BadBounds(f"variable {name}: lower {lb} > upper {ub}")
        idx = len(self.var_names)
        self.var_names.append(name)
        self.lb.append(float(lb))
        self.ub.append(float(ub))
        self._name_index[name] = idx
        return idx

    def add_row(self, name: str, coeffs: Mapping[int, float], sense: str,
                rhs: float) -> int:
        if not name or any(ch.isspace() for ch in name):
            raise BadUnit(f"bad row name {name!r}")
        if sense not in SENSES:
            raise BadUnit(f"bad row sense {sense!r}")
        if not math.isfinite(rhs):
            raise BadUnit(f"row {name}: rhs must be finite")
        clean = {}
        for j, a in coeffs.items():
            if not 0 <= j < len(self.var_names):
                raise BadUnit(f"row {name}: unknown variable index {j}")
            if not math.isfinite(a):
                raise BadUnit(f"row {name}: non-finite coefficient for column {j}")
            if a != 0.0:
                clean[int(j)] = float(a)
        self.rows.append(Row(name=name, coeffs=clean, sense=sense, rhs=float(rhs)))
        return len(self.rows) - 1

    def set_objective(self, coeffs: Mapping[int, float]) -> None:
        clean = {}
        for j, a in coeffs.items():
            if not 0 <= j < len(self.var_names):
                raise BadUnit(f"objective: unknown variable index {j}")
            if not math.isfinite(a):
                raise BadUnit(f"objective: non-finite coefficient for column {j}")
            if a != 0.0:
                clean[int(j)] = float(a)
        self.objective = clean

    def add_objective_term(self, j: int, a: float) -> None:
        if not 0 <= j < len(self.var_names):
            raise BadUnit(f"objective: unknown variable index {j}")
        v = self.objective.get(j, 0.0) + float(a)
        if v == 0.0:
            self.objective.pop(j, None)
        else:
            self.objective[j] = v

    # -- introspection ------------------------------------------------

    @property
    def num_vars(self) -> int:
        return len(self.var_names)

    @property
    def num_rows(self) -> int:
        return len(self.rows)

    def var_index(self, name: str) -> int:
        return self._name_index[name]

    def validate(self) -> None:
        for name, lo, hi in zip(self.var_names, self.lb, self.ub):
            if lo > hi:
                raise BadBounds(f"variable {name}: lower {lo} > upper {hi}")
        for row in self.rows:
            if not math.isfinite(row.rhs):
                raise BadUnit(f"row {row.name}: rhs must be finite")
            for j in row.coeffs:
                if not 0 <= j < self.num_vars:
                    raise BadUnit(f"row {row.name}: unknown variable index {j}")

    def objective_value(self, x: np.ndarray) -> float:
        return float(sum(a * x[j] for j, a in self.objective.items()))

    def __eq__(self, other) -> bool:
        if not isinstance(other, LpModel):
            return NotImplemented
        return (self.sense == other.sense
                and self.var_names == other.var_names
                and self.lb == other.lb
                and self.ub == other.ub
                and self.objective == other.objective
                and len(self.rows) == len(other.rows)
                and all(a.name == b.name and a.coeffs == b.coeffs
                        and a.sense == b.sense and a.rhs == b.rhs
                        for a, b in zip(self.rows, other.rows)))

    def __repr__(self) -> str:
        return (f"LpModel({self.sense}, {self.num_vars} vars, "
                f"{self.num_rows} rows)")


class SolveStatus(str, Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    UNBOUNDED = "Unbounded"
    ITERATION_LIMIT = "IterationLimit"


@dataclass
class Solution:
    status: SolveStatus
    objective: float
    primal: np.ndarray        # per original variable
    duals: np.ndarray         # per constraint row
    reduced_costs: np.ndarray
    iterations: int

    def value(self, model: LpModel, name: str) -> float:
        return float(self.primal[model.var_index(name)])


@dataclass
class StandardForm:
    """Equality-constrained reformulation: A x = b with 0-based (or free)
    column bounds, one slack column per inequality row.

    Original variables map back through x_orig = sign * x_std + shift;
    mirrored columns (finite upper, infinite lower) carry sign -1.
    """

    A: sp.csc_matrix
    b: np.ndarray
    lb: np.ndarray
    ub: np.ndarray
    c: np.ndarray             # objective in original optimization direction
    obj_const: float
    sense: str
    n_struct: int
    sign: np.ndarray          # per struct column
    shift: np.ndarray         # per struct column
    slack_of_row: np.ndarray  # std column of the row's slack, -1 for equalities
    slack_coef: np.ndarray    # +1 for <=, -1 for >=, 0 for =

    @property
    def num_cols(self) -> int:
        return self.A.shape[1]

    @property
    def num_rows(self) -> int:
        return self.A.shape[0]

    def recover_primal(self, x_std: np.ndarray) -> np.ndarray:
        return self.sign * x_std[:self.n_struct] + self.shift

    def project_primal(self, x_orig: np.ndarray) -> np.ndarray:
        """Inverse of recover_primal on the structural block (slacks get 0)."""
        x_std = np.zeros(self.num_cols)
        x_std[:self.n_struct] = (x_orig - self.shift) / self.sign
        return x_std


def to_standard_form(model: LpModel) -> StandardForm:
    """Shift finite lower bounds to zero, mirror upper-bounded-only columns,
    and add one slack per inequality row."""
    model.validate()
    n = model.num_vars
    m = model.num_rows
    sign = np.ones(n)
    shift = np.zeros(n)
    lb = np.zeros(n)
    ub = np.full(n, INF)
    for j in range(n):
        lo, hi = model.lb[j], model.ub[j]
        if lo > hi:
            raise BadBounds(f"variable {model.var_names[j]}: lower > upper")
        if math.isfinite(lo):
            shift[j] = lo
            ub[j] = hi - lo          # inf stays inf
        elif math.isfinite(hi):
            sign[j] = -1.0
            shift[j] = hi
            ub[j] = INF
        else:
            lb[j] = -INF

    n_slack = sum(1 for r in model.rows if r.sense != EQUAL)
    ncols = n + n_slack
    data: list[float] = []
    rows_idx: list[int] = []
    cols_idx: list[int] = []
    b = np.zeros(m)
    slack_of_row = np.full(m, -1, dtype=int)
    slack_coef = np.zeros(m)
    next_slack = n
    for i, row in enumerate(model.rows):
        rhs = row.rhs
        for j, a in row.coeffs.items():
            rhs -= a * shift[j]
            data.append(a * sign[j])
            rows_idx.append(i)
            cols_idx.append(j)
        b[i] = rhs
        if row.sense != EQUAL:
            coef = 1.0 if row.sense == LESS_EQUAL else -1.0
            slack_of_row[i] = next_slack
            slack_coef[i] = coef
            data.append(coef)
            rows_idx.append(i)
            cols_idx.append(next_slack)
            next_slack += 1
    A = sp.csc_matrix((data, (rows_idx, cols_idx)), shape=(m, ncols))

    c = np.zeros(ncols)
    obj_const = 0.0
    for j, a in model.objective.items():
        obj_const += a * shift[j]
        c[j] = a * sign[j]

    lb_full = np.concatenate([lb, np.zeros(n_slack)])
    ub_full = np.concatenate([ub, np.full(n_slack, INF)])
    return StandardForm(A=A, b=b, lb=lb_full, ub=ub_full, c=c, obj_const=obj_const,
                        sense=model.sense, n_struct=n, sign=sign, shift=shift,
                        slack_of_row=slack_of_row, slack_coef=slack_coef)
