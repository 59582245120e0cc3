"""Two-phase revised simplex for LPs with bounded variables.

Design: sparse column storage for the constraint matrix, dense explicit
basis inverse updated by rank-one pivots and rebuilt from scratch every
`refactor_every` basis changes. Phase 1 starts from a slack crash basis and
adds artificial columns only for rows whose slack cannot absorb the initial
residual; Dantzig pricing switches to Bland's rule after a run of degenerate
pivots and back after real progress. All tie-breaks go to the lowest column
index, so identical inputs give bit-identical solutions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg.blas import dger
from threadpoolctl import threadpool_limits

from ..errors import BioflowError
from .model import (
    INF,
    LpModel,
    MAXIMIZE,
    Solution,
    SolveStatus,
    StandardForm,
    to_standard_form,
)

AT_LOWER = 0
AT_UPPER = 1
BASIC = 2
FREE_NB = 3


@dataclass(frozen=True)
class SolverOptions:
    feas_tol: float = 1e-7
    opt_tol: float = 1e-7
    pivot_tol: float = 1e-9
    degen_tol: float = 1e-9
    iteration_limit: int | None = None    # default 50 * (rows + cols)
    refactor_every: int = 100
    bland_after: int = 50                 # consecutive degenerate pivots


class _Simplex:
    def __init__(self, std: StandardForm, options: SolverOptions):
        self.std = std
        self.opt = options
        self.m = std.num_rows
        self.n = std.num_cols
        A = std.A.tocsc()
        self.A = A
        self.AT = A.T.tocsr()        # fast A^T @ y
        self.b = std.b
        ncols = self.n + self.m      # artificials appended
        self.lo = np.concatenate([std.lb, np.zeros(self.m)])
        self.hi = np.concatenate([std.ub, np.zeros(self.m)])
        self.x = np.zeros(ncols)
        self.vstat = np.full(ncols, AT_LOWER, dtype=np.int8)
        self.art_sign = np.ones(self.m)
        self.basis = np.zeros(self.m, dtype=int)
        # Fortran order so the BLAS rank-1 update runs in place
        self.B_inv = np.zeros((self.m, self.m), order="F")
        self.iterations = 0
        self.pivots_since_refactor = 0
        self.degen_run = 0
        self.bland = False
        self.c_work = np.zeros(ncols)

    # -- setup ---------------------------------------------------------

    def crash_basis(self) -> None:
        """Start nonbasic columns at their bound nearest zero; use row slacks
        as the basis where the residual fits their bounds, artificials
        elsewhere."""
        for j in range(self.n):
            lo, hi = self.lo[j], self.hi[j]
            if math.isfinite(lo):
                self.x[j] = lo
                self.vstat[j] = AT_LOWER
            elif math.isfinite(hi):
                self.x[j] = hi
                self.vstat[j] = AT_UPPER
            else:
                self.x[j] = 0.0
                self.vstat[j] = FREE_NB
        r = self.b - self.A @ self.x[:self.n]
        for i in range(self.m):
            s = self.std.slack_of_row[i]
            if s >= 0:
                coef = self.std.slack_coef[i]
                val = r[i] / coef
                # slack already counted at 0 in r; absorb the full residual
                if self.lo[s] <= val <= self.hi[s]:
                    self.basis[i] = s
                    self.x[s] = val
                    self.vstat[s] = BASIC
                    self.B_inv[i, i] = 1.0 / coef
                    continue
            art = self.n + i
            sgn = 1.0 if r[i] >= 0 else -1.0
            self.art_sign[i] = sgn
            self.hi[art] = INF
            self.x[art] = abs(r[i])
            self.vstat[art] = BASIC
            self.basis[i] = art
            self.B_inv[i, i] = 1.0 / sgn

    # -- linear algebra helpers -----------------------------------------

    def column(self, j: int) -> np.ndarray:
        col = np.zeros(self.m)
        if j < self.n:
            A = self.A
            start, end = A.indptr[j], A.indptr[j + 1]
            col[A.indices[start:end]] = A.data[start:end]
        else:
            col[j - self.n] = self.art_sign[j - self.n]
        return col

    def ftran(self, j: int) -> np.ndarray:
        """B_inv @ A_j exploiting column sparsity."""
        if j < self.n:
            A = self.A
            start, end = A.indptr[j], A.indptr[j + 1]
            if start == end:
                return np.zeros(self.m)
            return self.B_inv[:, A.indices[start:end]] @ A.data[start:end]
        i = j - self.n
        return self.B_inv[:, i] * self.art_sign[i]

    def refactor(self) -> None:
        B = np.zeros((self.m, self.m))
        for k, j in enumerate(self.basis):
            B[:, k] = self.column(j)
        try:
            self.B_inv = np.asfortranarray(np.linalg.inv(B))
        except np.linalg.LinAlgError as exc:
            raise BioflowError("singular basis during refactorization") from exc
        # nonbasic artificials are always at zero, so only structural/slack
        # columns contribute to the fixed part of the rhs
        x_nb = self.x[:self.n].copy()
        x_nb[self.basis[self.basis < self.n]] = 0.0
        xB = self.B_inv @ (self.b - self.A @ x_nb)
        self.x[self.basis] = xB
        self.pivots_since_refactor = 0

    def reduced_costs(self) -> tuple[np.ndarray, np.ndarray]:
        y = self.B_inv.T @ self.c_work[self.basis]
        rc = np.empty(self.n + self.m)
        rc[:self.n] = self.c_work[:self.n] - self.AT @ y
        rc[self.n:] = self.c_work[self.n:] - self.art_sign * y
        return rc, y

    # -- pivoting --------------------------------------------------------

    def select_entering(self, rc: np.ndarray) -> tuple[int, float]:
        """Return (column, direction) or (-1, 0) at optimality."""
        tol = self.opt.opt_tol
        fixed = self.lo == self.hi
        at_lower = (self.vstat == AT_LOWER) & ~fixed
        at_upper = (self.vstat == AT_UPPER) & ~fixed
        free_nb = self.vstat == FREE_NB
        viol = np.zeros(self.n + self.m)
        viol[at_lower] = np.maximum(-rc[at_lower] - tol, 0.0)
        viol[at_upper] = np.maximum(rc[at_upper] - tol, 0.0)
        viol[free_nb] = np.maximum(np.abs(rc[free_nb]) - tol, 0.0)
        if not viol.any():
            return -1, 0.0
        if self.bland:
            q = int(np.flatnonzero(viol > 0)[0])
        else:
            q = int(np.argmax(viol))      # first max = lowest index on ties
        if self.vstat[q] == AT_LOWER:
            dirn = 1.0
        elif self.vstat[q] == AT_UPPER:
            dirn = -1.0
        else:
            dirn = 1.0 if rc[q] < 0 else -1.0
        return q, dirn

    def ratio_test(self, d: np.ndarray, dirn: float, q: int) -> tuple[float, int]:
        """Max step for entering column q; returns (step, basis position) with
        position -1 meaning a bound flip (or unbounded when step is inf)."""
        w = dirn * d
        xB = self.x[self.basis]
        loB = self.lo[self.basis]
        hiB = self.hi[self.basis]
        ratios = np.full(self.m, INF)
        dec = w > self.opt.pivot_tol          # basic value decreases
        inc = w < -self.opt.pivot_tol         # basic value increases
        ratios[dec] = np.maximum(xB[dec] - loB[dec], 0.0) / w[dec]
        ratios[inc] = np.maximum(hiB[inc] - xB[inc], 0.0) / -w[inc]
        own = self.hi[q] - self.lo[q]
        min_basic = float(ratios.min()) if self.m else INF
        if own <= min_basic:
            return own, -1
        cands = np.flatnonzero(ratios <= min_basic)
        r = int(cands[np.argmin(self.basis[cands])])
        return min_basic, r

    def pivot(self, q: int, dirn: float, step: float, r: int, d: np.ndarray) -> None:
        if step != 0.0:
            self.x[self.basis] -= dirn * step * d
        if r < 0:
            # bound flip: q jumps to its opposite bound, no basis change
            self.vstat[q] = AT_UPPER if dirn > 0 else AT_LOWER
            self.x[q] = self.hi[q] if dirn > 0 else self.lo[q]
            return
        leave = self.basis[r]
        w_r = dirn * d[r]
        if w_r > 0:
            self.x[leave] = self.lo[leave]
            self.vstat[leave] = AT_LOWER
        else:
            self.x[leave] = self.hi[leave]
            self.vstat[leave] = AT_UPPER
        self.x[q] = self.x[q] + dirn * step
        self.vstat[q] = BASIC
        self.basis[r] = q
        self._replace_basis_column(r, d)
        self.pivots_since_refactor += 1
        if self.pivots_since_refactor >= self.opt.refactor_every:
            self.refactor()

    def _replace_basis_column(self, r: int, d: np.ndarray) -> None:
        pr = self.B_inv[r] / d[r]
        self.B_inv = dger(-1.0, d, pr, a=self.B_inv, overwrite_a=1)
        self.B_inv[r] = pr

    # -- phases ----------------------------------------------------------

    def iterate(self, phase: int, max_iterations: int) -> SolveStatus:
        while True:
            if self.iterations >= max_iterations:
                return SolveStatus.ITERATION_LIMIT
            rc, _ = self.reduced_costs()
            q, dirn = self.select_entering(rc)
            if q < 0:
                return SolveStatus.OPTIMAL
            d = self.ftran(q)
            step, r = self.ratio_test(d, dirn, q)
            if not math.isfinite(step):
                if phase == 1:
                    raise BioflowError("phase-1 objective unbounded; numerical failure")
                return SolveStatus.UNBOUNDED
            self.pivot(q, dirn, step, r, d)
            self.iterations += 1
            if step <= self.opt.degen_tol:
                self.degen_run += 1
                if self.degen_run >= self.opt.bland_after:
                    self.bland = True
            else:
                self.degen_run = 0
                self.bland = False

    def infeasibility(self) -> float:
        return float(self.x[self.n:].sum())

    def drive_out_artificials(self) -> None:
        """Swap every basic artificial for some nonbasic structural/slack
        column with a nonzero pivot element; rows admitting none are
        redundant and keep their zero artificial."""
        for r in range(self.m):
            if self.basis[r] < self.n:
                continue
            beta = self.B_inv[r]
            weights = self.AT @ beta
            cand = np.flatnonzero(
                (np.abs(weights) > self.opt.pivot_tol)
                & (self.vstat[:self.n] != BASIC)
                & (self.lo[:self.n] != self.hi[:self.n]))
            if cand.size == 0:
                continue
            q = int(cand[0])
            d = self.ftran(q)
            art = self.basis[r]
            self.x[art] = 0.0
            self.vstat[art] = AT_LOWER
            self.vstat[q] = BASIC      # enters at its current bound value
            self.basis[r] = q
            self._replace_basis_column(r, d)


def solve(model: LpModel, options: SolverOptions | None = None) -> Solution:
    """Solve `model`, returning primal/dual values and a status.

    BLAS is pinned to one thread for the duration: the basis updates are too
    small to parallelize profitably and a fixed reduction order keeps results
    bit-identical across hosts."""
    with threadpool_limits(limits=1, user_api="blas"):
        return _solve_single_threaded(model, options)


def _solve_single_threaded(model: LpModel, options: SolverOptions | None) -> Solution:
    opt = options or SolverOptions()
    std = to_standard_form(model)
    sense_mult = -1.0 if model.sense == MAXIMIZE else 1.0
    sx = _Simplex(std, opt)
    max_iterations = opt.iteration_limit
    if max_iterations is None:
        max_iterations = 50 * (std.num_rows + std.num_cols)

    sx.crash_basis()
    n, m = std.num_cols, std.num_rows

    def extract(status: SolveStatus) -> Solution:
        x_std = sx.x[:n]
        primal = std.recover_primal(x_std)
        objective = float(std.c @ x_std + std.obj_const)
        _, y = sx.reduced_costs()
        duals = sense_mult * y
        rc_std = (sx.c_work[:n] - sx.AT @ y)[:std.n_struct]
        reduced = sense_mult * std.sign * rc_std
        if status == SolveStatus.INFEASIBLE:
            objective = math.nan
        elif status == SolveStatus.UNBOUNDED:
            objective = INF if model.sense == MAXIMIZE else -INF
        return Solution(status=status, objective=objective, primal=primal,
                        duals=duals, reduced_costs=reduced, iterations=sx.iterations)

    # Phase 1: drive artificial infeasibility to zero.
    needs_phase1 = bool((sx.hi[n:] > 0).any())
    if needs_phase1:
        sx.c_work = np.zeros(n + m)
        sx.c_work[n:] = 1.0
        status = sx.iterate(1, max_iterations)
        if status == SolveStatus.ITERATION_LIMIT:
            sx.c_work = np.concatenate([sense_mult * std.c, np.zeros(m)])
            return extract(status)
        feas_scale = 1.0 + float(np.abs(std.b).max()) if m else 1.0
        if sx.infeasibility() > opt.feas_tol * feas_scale:
            sx.c_work = np.concatenate([sense_mult * std.c, np.zeros(m)])
            return extract(SolveStatus.INFEASIBLE)
        sx.drive_out_artificials()
        sx.hi[n:] = 0.0
    sx.bland = False
    sx.degen_run = 0

    # Phase 2: optimize the real objective.
    sx.c_work = np.concatenate([sense_mult * std.c, np.zeros(m)])
    status = sx.iterate(2, max_iterations)
    if status == SolveStatus.OPTIMAL:
        sx.refactor()      # sharpen basic values before reporting
    return extract(status)
