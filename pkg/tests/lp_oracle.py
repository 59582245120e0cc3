"""Brute-force vertex enumeration oracle for small LPs.

Independent of the simplex implementation: a vertex of the box-constrained
polytope activates n constraints chosen from rows and variable bounds, so we
enumerate every (row subset, fixed-variable subset, bound pattern), solve the
resulting square systems, filter to feasible points and take the best
objective. Only intended for models with at most ~8 variables and rows.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from bioflow.lp.model import EQUAL, GREATER_EQUAL, LESS_EQUAL, LpModel, MAXIMIZE

FEAS_TOL = 1e-7


def _dense(model: LpModel):
    n, m = model.num_vars, model.num_rows
    A = np.zeros((m, n))
    rhs = np.zeros(m)
    senses = []
    for i, row in enumerate(model.rows):
        for j, a in row.coeffs.items():
            A[i, j] = a
        rhs[i] = row.rhs
        senses.append(row.sense)
    c = np.zeros(n)
    for j, a in model.objective.items():
        c[j] = a
    return A, rhs, senses, c


def _feasible(points: np.ndarray, A, rhs, senses, lb, ub) -> np.ndarray:
    scale = 1.0 + float(np.abs(rhs).max()) if len(rhs) else 1.0
    tol = FEAS_TOL * scale
    ok = np.all(points >= lb - tol, axis=1) & np.all(points <= ub + tol, axis=1)
    if len(rhs):
        act = points @ A.T
        for i, sense in enumerate(senses):
            if sense == LESS_EQUAL:
                ok &= act[:, i] <= rhs[i] + tol
            elif sense == GREATER_EQUAL:
                ok &= act[:, i] >= rhs[i] - tol
            else:
                ok &= np.abs(act[:, i] - rhs[i]) <= tol
    return ok


def oracle_solve(model: LpModel):
    """Return (objective, x) at the best feasible vertex, or None when no
    feasible vertex exists. Assumes a bounded feasible region."""
    A, rhs, senses, c = _dense(model)
    n, m = model.num_vars, model.num_rows
    lb = np.array(model.lb)
    ub = np.array(model.ub)
    if not (np.isfinite(lb).all() and np.isfinite(ub).all()):
        raise ValueError("oracle requires finite variable bounds")

    best_obj = None
    best_x = None
    maximize = model.sense == MAXIMIZE

    def consider(points: np.ndarray) -> None:
        nonlocal best_obj, best_x
        feas = _feasible(points, A, rhs, senses, lb, ub)
        if not feas.any():
            return
        vals = points[feas] @ c
        k = int(np.argmax(vals)) if maximize else int(np.argmin(vals))
        v = float(vals[k])
        if best_obj is None or (v > best_obj if maximize else v < best_obj):
            best_obj = v
            best_x = points[feas][k].copy()

    var_idx = np.arange(n)
    for k in range(0, min(n, m) + 1):
        for rows_sel in itertools.combinations(range(m), k):
            A_rows = A[list(rows_sel)] if k else np.zeros((0, n))
            b_rows = rhs[list(rows_sel)] if k else np.zeros(0)
            for fixed in itertools.combinations(range(n), n - k):
                fixed = list(fixed)
                solved = [j for j in var_idx if j not in fixed]
                if len(solved) != k:
                    continue
                # all 2^(n-k) lower/upper assignments for the fixed block
                patterns = np.array(list(itertools.product(*[
                    (lb[j], ub[j]) for j in fixed])), dtype=float) \
                    if fixed else np.zeros((1, 0))
                if k == 0:
                    consider(patterns)
                    continue
                A_sq = A_rows[:, solved]
                b_batch = b_rows[None, :] - patterns @ A_rows[:, fixed].T
                try:
                    x_solved = np.linalg.solve(A_sq, b_batch.T).T
                except np.linalg.LinAlgError:
                    continue
                resid = np.abs(x_solved @ A_sq.T - b_batch).max(axis=1)
                good = np.isfinite(x_solved).all(axis=1) & (resid <= 1e-8 * (
                    1.0 + np.abs(b_batch).max()))
                if not good.any():
                    continue
                points = np.zeros((int(good.sum()), n))
                points[:, fixed] = patterns[good]
                points[:, solved] = x_solved[good]
                consider(points)
    if best_obj is None:
        return None
    return best_obj, best_x


def random_bounded_model(seed: int) -> LpModel:
    """A random LP whose feasible set is nonempty (contains a sampled point)
    and bounded (every variable is boxed)."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 9))
    m = int(rng.integers(1, 9))
    model = LpModel("maximize" if rng.random() < 0.5 else "minimize")
    ub = rng.uniform(0.5, 10.0, n)
    for j in range(n):
        model.add_var(f"x{j}", 0.0, float(ub[j]))
    x0 = rng.uniform(0.0, ub)
    for i in range(m):
        a = rng.normal(size=n)
        a[rng.random(n) < 0.3] = 0.0
        if not a.any():
            a[int(rng.integers(n))] = 1.0
        coeffs = {j: float(a[j]) for j in range(n) if a[j] != 0.0}
        u = rng.random()
        act = float(a @ x0)
        if u < 0.4:
            model.add_row(f"r{i}", coeffs, LESS_EQUAL, act + float(rng.uniform(0, 2)))
        elif u < 0.8:
            model.add_row(f"r{i}", coeffs, GREATER_EQUAL, act - float(rng.uniform(0, 2)))
        else:
            model.add_row(f"r{i}", coeffs, EQUAL, act)
    obj = rng.normal(size=n)
    model.set_objective({j: float(obj[j]) for j in range(n) if obj[j] != 0.0})
    return model


def relative_close(a: float, b: float, tol: float) -> bool:
    return math.isclose(a, b, rel_tol=tol, abs_tol=tol)
