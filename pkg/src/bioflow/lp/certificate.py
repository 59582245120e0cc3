"""Independent optimality verification for solver output.

Recomputes primal residuals, reduced costs and the bounded-variable dual
objective straight from the model, trusting nothing but the solution's
primal and dual vectors.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import NonOptimalSolution
from .model import EQUAL, GREATER_EQUAL, LESS_EQUAL, LpModel, MAXIMIZE, Solution, SolveStatus


@dataclass(frozen=True)
class CertificateReport:
    max_primal_residual: float    # row + bound violations, scaled by 1+|rhs|inf
    max_dual_residual: float      # stationarity/sign violations, scaled by 1+|c|inf
    duality_gap: float            # |primal - dual| / (1 + |primal|)
    max_complementarity: float    # |dual * slack| / (1 + |objective|)

    def passes(self, tol: float = 1e-6) -> bool:
        return (self.max_primal_residual <= tol and self.max_dual_residual <= tol
                and self.duality_gap <= tol and self.max_complementarity <= tol)


def check_certificate(model: LpModel, solution: Solution,
                      bound_tol: float = 1e-7) -> CertificateReport:
    """KKT residual report for an Optimal solution."""
    if solution.status != SolveStatus.OPTIMAL:
        raise NonOptimalSolution(f"cannot certify a {solution.status.value} solution")
    x = np.asarray(solution.primal, dtype=float)
    n = model.num_vars
    sense_mult = -1.0 if model.sense == MAXIMIZE else 1.0
    c = np.zeros(n)
    for j, a in model.objective.items():
        c[j] = sense_mult * a
    y = sense_mult * np.asarray(solution.duals, dtype=float)

    rhs_scale = 1.0
    primal_resid = 0.0
    dual_resid = 0.0
    compl = 0.0

    lb = np.array(model.lb)
    ub = np.array(model.ub)
    primal_resid = max(
        primal_resid,
        float(np.max(np.maximum(lb - x, 0.0), initial=0.0)),
        float(np.max(np.maximum(x - ub, 0.0), initial=0.0)),
    )

    rc = c.copy()
    for i, row in enumerate(model.rows):
        act = sum(a * x[j] for j, a in row.coeffs.items())
        rhs_scale = max(rhs_scale, 1.0 + abs(row.rhs))
        if row.sense == LESS_EQUAL:
            primal_resid = max(primal_resid, act - row.rhs)
            dual_resid = max(dual_resid, y[i])          # needs y_i <= 0
            compl = max(compl, abs(y[i] * (row.rhs - act)))
        elif row.sense == GREATER_EQUAL:
            primal_resid = max(primal_resid, row.rhs - act)
            dual_resid = max(dual_resid, -y[i])         # needs y_i >= 0
            compl = max(compl, abs(y[i] * (act - row.rhs)))
        else:
            primal_resid = max(primal_resid, abs(act - row.rhs))
        for j, a in row.coeffs.items():
            rc[j] -= a * y[i]

    obj_internal = float(c @ x)
    dual_obj = float(np.dot(y, [row.rhs for row in model.rows])) if model.rows else 0.0
    for j in range(n):
        at_lower = x[j] <= lb[j] + bound_tol * (1.0 + abs(lb[j])) if np.isfinite(lb[j]) else False
        at_upper = x[j] >= ub[j] - bound_tol * (1.0 + abs(ub[j])) if np.isfinite(ub[j]) else False
        if at_lower and at_upper:
            pass                                        # fixed: any rc is fine
        elif at_lower:
            dual_resid = max(dual_resid, -rc[j])
        elif at_upper:
            dual_resid = max(dual_resid, rc[j])
        else:
            dual_resid = max(dual_resid, abs(rc[j]))
        if rc[j] > 0 and np.isfinite(lb[j]):
            dual_obj += rc[j] * lb[j]
        elif rc[j] < 0 and np.isfinite(ub[j]):
            dual_obj += rc[j] * ub[j]

    c_scale = 1.0 + float(np.max(np.abs(c), initial=0.0))
    obj_scale = 1.0 + abs(obj_internal)
    return CertificateReport(
        max_primal_residual=primal_resid / rhs_scale,
        max_dual_residual=dual_resid / c_scale,
        duality_gap=abs(obj_internal - dual_obj) / obj_scale,
        max_complementarity=compl / obj_scale,
    )
