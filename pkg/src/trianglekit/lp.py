"""Dense two-phase simplex with Bland's anti-cycling rule.

Problems here are small (tens of rows, at most a few thousand columns), so a
full tableau in numpy is fast enough and keeps the certificates explicit.

The program is

    maximize    c @ x
    subject to  A_eq @ x == b_eq
                A_ub @ x <= b_ub
                x >= lb

Infeasible programs come back with a Farkas vector ``(u, z)``, ``z >= 0``, for
which ``A_eq.T @ u + A_ub.T @ z >= 0`` while ``(b_eq - A_eq @ lb) @ u +
(b_ub - A_ub @ lb) @ z == -1``.  Optimal programs carry the matching dual
vector with ``A_eq.T @ u + A_ub.T @ z >= c`` and zero duality gap.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import SolverError

PIVOT_TOL = 1e-9
COST_TOL = 1e-10
FEAS_TOL = 1e-9
CERT_TOL = 1e-7


class LpStatus(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass
class LinearProgram:
    objective: np.ndarray
    A_eq: np.ndarray | None = None
    b_eq: np.ndarray | None = None
    A_ub: np.ndarray | None = None
    b_ub: np.ndarray | None = None
    lower: np.ndarray | None = None

    def __post_init__(self):
        c = np.asarray(self.objective, dtype=float).ravel()
        n = c.size
        self.objective = c
        self.A_eq, self.b_eq = _block(self.A_eq, self.b_eq, n, "equality")
        self.A_ub, self.b_ub = _block(self.A_ub, self.b_ub, n, "inequality")
        self.lower = np.zeros(n) if self.lower is None else np.asarray(self.lower, dtype=float).ravel()
        if self.lower.size != n:
            raise ValueError("lower bounds do not match the number of variables")
        for arr in (c, self.A_eq, self.b_eq, self.A_ub, self.b_ub, self.lower):
            if not np.all(np.isfinite(arr)):
                raise ValueError("linear program contains non-finite data")

    @property
    def n(self) -> int:
        return self.objective.size

    def residual(self, x: np.ndarray) -> float:
        """Largest primal constraint violation of ``x``."""
        r = [0.0]
        if self.A_eq.size:
            r.append(np.max(np.abs(self.A_eq @ x - self.b_eq)))
        if self.A_ub.size:
            r.append(np.max(self.A_ub @ x - self.b_ub))
        r.append(np.max(self.lower - x))
        return float(max(r))

    def farkas_residual(self, cert: np.ndarray) -> float:
        """How far ``cert`` is from proving infeasibility (0 means a valid proof)."""
        m_eq = self.b_eq.size
        u, z = cert[:m_eq], cert[m_eq:]
        b_eq, b_ub = self.b_eq - self.A_eq @ self.lower, self.b_ub - self.A_ub @ self.lower
        combo = self.A_eq.T @ u + self.A_ub.T @ z
        gaps = [0.0, -float(np.min(combo, initial=0.0)), -float(np.min(z, initial=0.0))]
        gaps.append(abs(float(b_eq @ u + b_ub @ z) + 1.0))
        return max(gaps)


def _block(A, b, n, what):
    if A is None:
        return np.zeros((0, n)), np.zeros(0)
    A = np.atleast_2d(np.asarray(A, dtype=float))
    b = np.asarray(b, dtype=float).ravel()
    if A.shape[1] != n or A.shape[0] != b.size:
        raise ValueError(f"{what} block has shape {A.shape} with rhs {b.size}; expected (*, {n})")
    return A, b


@dataclass
class LpOutcome:
    status: LpStatus
    optimum: float | None = None
    solution: np.ndarray | None = None
    certificate: np.ndarray | None = None
    dual: np.ndarray | None = None
    iterations: int = 0

    @property
    def feasible(self) -> bool:
        return self.status is not LpStatus.INFEASIBLE


class _Tableau:
    def __init__(self, A, b, basis):
        self.A = A
        self.b = b
        self.basis = list(basis)
        self.z = None
        self.f = 0.0
        self.iterations = 0

    def set_cost(self, cost):
        cb = cost[self.basis]
        self.z = cost - cb @ self.A
        self.f = float(cb @ self.b)

    def pivot(self, i, j):
        A, b = self.A, self.b
        piv = A[i, j]
        A[i] /= piv
        b[i] /= piv
        col = A[:, j].copy()
        col[i] = 0.0
        A -= np.outer(col, A[i])
        b -= col * b[i]
        A[:, j] = 0.0
        A[i, j] = 1.0
        zj = self.z[j]
        self.f += zj * b[i]
        self.z -= zj * A[i]
        self.z[j] = 0.0
        self.basis[i] = j
        self.iterations += 1

    def run(self, allowed, max_iter):
        """Minimize with Bland's rule over ``allowed`` columns; True if optimal."""
        while True:
            if self.iterations >= max_iter:
                raise SolverError(f"simplex did not terminate within {max_iter} pivots")
            cand = np.flatnonzero((self.z < -COST_TOL) & allowed)
            if cand.size == 0:
                return True
            j = int(cand[0])
            col = self.A[:, j]
            rows = np.flatnonzero(col > PIVOT_TOL)
            if rows.size == 0:
                return False
            ratios = self.b[rows] / col[rows]
            best = ratios.min()
            ties = rows[ratios <= best + 1e-12 * (1.0 + abs(best))]
            i = int(min(ties, key=lambda r: self.basis[r]))
            self.pivot(i, j)


def lp_solve(p: LinearProgram, max_iter: int | None = None) -> LpOutcome:
    n = p.n
    m_eq, m_ub = p.b_eq.size, p.b_ub.size
    m = m_eq + m_ub
    b_eq = p.b_eq - p.A_eq @ p.lower
    b_ub = p.b_ub - p.A_ub @ p.lower

    # Standard form over w = (x - lower, slacks) >= 0.
    nw = n + m_ub
    M = np.zeros((m, nw))
    M[:m_eq, :n] = p.A_eq
    M[m_eq:, :n] = p.A_ub
    M[m_eq:, n:] = np.eye(m_ub)
    r = np.concatenate([b_eq, b_ub])
    sign = np.where(r < 0, -1.0, 1.0)
    Ms, rs = M * sign[:, None], r * sign

    ncol = nw + m
    A = np.hstack([Ms, np.eye(m)])
    tab = _Tableau(A, rs.copy(), range(nw, ncol))
    if max_iter is None:
        max_iter = 50 * (ncol + m) + 1000

    cost1 = np.zeros(ncol)
    cost1[nw:] = 1.0
    tab.set_cost(cost1)
    tab.run(np.ones(ncol, dtype=bool), max_iter)

    scale = 1.0 + float(np.abs(rs).sum())
    if tab.f > FEAS_TOL * scale:
        y = cost1[nw:] - tab.z[nw:]
        cert = -(y * sign) / tab.f
        if p.farkas_residual(cert) > CERT_TOL:
            raise SolverError("phase 1 ended infeasible but the Farkas certificate does not verify")
        return LpOutcome(LpStatus.INFEASIBLE, certificate=cert, iterations=tab.iterations)

    # Drive zero-level artificials out of the basis; drop redundant rows.
    keep, redundant = [], []
    for i in range(len(tab.basis)):
        if tab.basis[i] < nw:
            keep.append(i)
            continue
        nz = np.flatnonzero(np.abs(tab.A[i, :nw]) > PIVOT_TOL)
        if nz.size:
            tab.pivot(i, int(nz[0]))
            keep.append(i)
        else:
            redundant.append(tab.basis[i] - nw)
    tab.A, tab.b = tab.A[keep], tab.b[keep]
    tab.basis = [tab.basis[i] for i in keep]
    # [M_S | E_R] nonsingular implies M_S is nonsingular on the rows outside R.
    rows = np.setdiff1d(np.arange(m), redundant)

    cost2 = np.zeros(ncol)
    cost2[:n] = -p.objective
    tab.set_cost(cost2)
    allowed = np.zeros(ncol, dtype=bool)
    allowed[:nw] = True
    if not tab.run(allowed, max_iter):
        return LpOutcome(LpStatus.UNBOUNDED, iterations=tab.iterations)

    # Recompute the vertex from the original data to shed pivoting drift.
    basis = np.array(tab.basis, dtype=int)
    B = Ms[rows][:, basis]
    w = np.zeros(nw)
    w[basis] = np.linalg.solve(B, rs[rows])
    w[np.abs(w) < 1e-13] = 0.0
    if w.min(initial=0.0) < -FEAS_TOL:
        raise SolverError("basic solution lost feasibility after refinement")
    w = np.maximum(w, 0.0)
    x = p.lower + w[:n]
    if p.residual(x) > CERT_TOL:
        raise SolverError(f"primal residual {p.residual(x):.3e} exceeds tolerance")

    y = np.zeros(m)
    y[rows] = np.linalg.solve(B.T, cost2[basis])
    dual = -(y * sign)
    return LpOutcome(
        LpStatus.OPTIMAL,
        optimum=float(p.objective @ x),
        solution=x,
        dual=dual,
        iterations=tab.iterations,
    )


def dual_residual(p: LinearProgram, outcome: LpOutcome) -> float:
    """Dual infeasibility plus duality gap of an optimal outcome."""
    m_eq = p.b_eq.size
    u, z = outcome.dual[:m_eq], outcome.dual[m_eq:]
    reduced = p.A_eq.T @ u + p.A_ub.T @ z - p.objective
    b_eq, b_ub = p.b_eq - p.A_eq @ p.lower, p.b_ub - p.A_ub @ p.lower
    gap = abs(b_eq @ u + b_ub @ z + p.objective @ p.lower - outcome.optimum)
    return max(0.0, -float(np.min(reduced, initial=0.0)), -float(np.min(z, initial=0.0)), float(gap))
