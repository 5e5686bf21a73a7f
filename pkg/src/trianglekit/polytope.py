"""Joint-distribution existence and optimization over the no-disturbance polytope.

Deterministic assignments are indexed by an integer whose bit ``i`` holds
the outcome of the ``i``-th scenario variable, bit 0 meaning +1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .behavior import OUTCOME_KEYS, Behavior, JointTable, deterministic, marginal, outcome_index
from .errors import CapacityError, InfeasibleProgramError, NoJointDistributionError, SolverError
from .lp import LinearProgram, LpStatus, lp_solve
from .scenario import Pair, Scenario

MAX_JPD_VARIABLES = 16
RECONSTRUCTION_TOL = 1e-7
_SIGN = {"+": 1, "-": -1, 1: 1, -1: -1}


def _flip_key(key: str) -> str:
    return key[1] + key[0]


@dataclass
class Objective:
    """Linear functional of a behavior's table entries.

    ``terms`` holds ``(context, outcome-pair key, coefficient)``; the key refers
    to the context in the orientation given.  ``marginal_terms`` holds
    ``(variable, outcome, coefficient)`` and reads the marginal from the
    variable's first context.
    """

    terms: Sequence[tuple[Pair, str, float]] = ()
    marginal_terms: Sequence[tuple[str, int, float]] = ()
    constant: float = 0.0

    def __post_init__(self):
        terms = []
        for (v, w), key, coef in self.terms:
            if key not in OUTCOME_KEYS:
                raise ValueError(f"bad outcome-pair key {key!r}")
            terms.append(((v, w), key, float(coef)))
        self.terms = terms
        self.marginal_terms = [(v, _SIGN[x], float(c)) for v, x, c in self.marginal_terms]

    def evaluate(self, b: Behavior) -> float:
        total = self.constant
        for (v, w), key, coef in self.terms:
            total += coef * b.prob(v, _SIGN[key[0]], w, _SIGN[key[1]])
        for v, x, coef in self.marginal_terms:
            total += coef * marginal(b, v)[outcome_index(x)]
        return total

    def vector(self, s: Scenario) -> np.ndarray:
        """Coefficients over the stacked table entries ``4 * context_index + key_index``."""
        pos = {c: i for i, c in enumerate(s.contexts)}
        vec = np.zeros(4 * len(s.contexts))
        for (v, w), key, coef in self.terms:
            c = s.require_context(v, w)
            k = key if c == (v, w) else _flip_key(key)
            vec[4 * pos[c] + OUTCOME_KEYS.index(k)] += coef
        for v, x, coef in self.marginal_terms:
            vec[_marginal_rows(s, pos, v)[outcome_index(x)]] += coef
        return vec

    def upper_bound(self) -> float:
        """Trivial bound: every probability is at most one."""
        return self.constant + sum(max(c, 0.0) for *_, c in self.terms) + sum(max(c, 0.0) for *_, c in self.marginal_terms)

    def to_dict(self) -> dict:
        return {
            "terms": [[f"{v}|{w}", key, coef] for (v, w), key, coef in self.terms],
            "marginal_terms": [[v, "+" if x == 1 else "-", coef] for v, x, coef in self.marginal_terms],
            "constant": self.constant,
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "Objective":
        terms = []
        for ctx, key, coef in d.get("terms", []):
            v, _, w = ctx.partition("|")
            terms.append(((v, w), key, coef))
        return cls(terms, [(v, x, c) for v, x, c in d.get("marginal_terms", [])], float(d.get("constant", 0.0)))


def _marginal_rows(s: Scenario, pos, v) -> tuple[list[int], list[int]]:
    """Entry indices summing to p(v=+1) and p(v=-1) in v's first context."""
    ctxs = s.contexts_of(v)
    if not ctxs:
        raise ValueError(f"variable {v} belongs to no context")
    c = ctxs[0]
    base = 4 * pos[c]
    if c[0] == v:
        return [base + 0, base + 1], [base + 2, base + 3]
    return [base + 0, base + 2], [base + 1, base + 3]


@dataclass
class NoDisturbanceProgram:
    """Equality system describing the no-disturbance polytope of a scenario.

    Variables are the table entries followed by one 8-entry joint per
    declared joint triple.
    """

    scenario: Scenario
    A_eq: np.ndarray
    b_eq: np.ndarray

    @property
    def n_tables(self) -> int:
        return 4 * len(self.scenario.contexts)

    def behavior(self, x: np.ndarray) -> Behavior:
        s = self.scenario
        tables = {}
        for i, c in enumerate(s.contexts):
            e = x[4 * i : 4 * i + 4]
            tables[c] = JointTable(*(float(v) for v in e))
        return Behavior(s, tables)


def no_disturbance_program(s: Scenario) -> NoDisturbanceProgram:
    pos = {c: i for i, c in enumerate(s.contexts)}
    nt = 4 * len(s.contexts)
    n = nt + 8 * len(s.joint_triples)
    rows, rhs = [], []

    for i in range(len(s.contexts)):
        r = np.zeros(n)
        r[4 * i : 4 * i + 4] = 1.0
        rows.append(r)
        rhs.append(1.0)

    for v in s.variables:
        ctxs = s.contexts_of(v)
        ref = _marginal_rows(s, pos, v)[0]
        for c in ctxs[1:]:
            base = 4 * pos[c]
            idx = [base, base + 1] if c[0] == v else [base, base + 2]
            r = np.zeros(n)
            r[idx] += 1.0
            r[ref] -= 1.0
            rows.append(r)
            rhs.append(0.0)

    for t, (x, y, z) in enumerate(s.joint_triples):
        off = nt + 8 * t
        # joint entry (a, b, c) sits at off + 4a + 2b + c
        for (u, w), axis in (((x, y), 2), ((x, z), 1), ((y, z), 0)):
            base = 4 * pos[(u, w)]
            for a in range(2):
                for b in range(2):
                    r = np.zeros(n)
                    for k in range(2):
                        idx = [a, b]
                        idx.insert(axis, k)
                        r[off + 4 * idx[0] + 2 * idx[1] + idx[2]] = 1.0
                    r[base + 2 * a + b] -= 1.0
                    rows.append(r)
                    rhs.append(0.0)

    return NoDisturbanceProgram(s, np.array(rows), np.array(rhs))


def max_over_no_disturbance(
    s: Scenario,
    objective: Objective,
    pins: Iterable[tuple[Objective, float]] = (),
) -> tuple[float, Behavior]:
    """Maximize ``objective`` over no-disturbance behaviors of ``s``.

    ``pins`` adds equality constraints ``pin(b) == value``.
    """
    prog = no_disturbance_program(s)
    n = prog.A_eq.shape[1]
    c = np.zeros(n)
    c[: prog.n_tables] = objective.vector(s)
    A, b = [prog.A_eq], [prog.b_eq]
    for pin, value in pins:
        row = np.zeros(n)
        row[: prog.n_tables] = pin.vector(s)
        A.append(row[None, :])
        b.append(np.array([value - pin.constant]))
    lp = LinearProgram(c, np.vstack(A), np.concatenate(b))
    out = lp_solve(lp)
    if out.status is LpStatus.INFEASIBLE:
        raise InfeasibleProgramError("no no-disturbance behavior satisfies the pinned constraints")
    if out.status is not LpStatus.OPTIMAL:
        raise SolverError(f"unexpected LP status {out.status.value} over a bounded polytope")
    witness = prog.behavior(out.solution)
    return out.optimum + objective.constant, witness


def assignment_of(index: int, variables: Sequence[str]) -> dict[str, int]:
    return {v: (-1 if (index >> i) & 1 else 1) for i, v in enumerate(variables)}


def assignment_index(assignment: Mapping[str, int], variables: Sequence[str]) -> int:
    return sum(1 << i for i, v in enumerate(variables) if assignment[v] == -1)


def marginalization_matrix(s: Scenario) -> np.ndarray:
    """Rows: stacked table entries; columns: deterministic assignments."""
    n = len(s.variables)
    if n > MAX_JPD_VARIABLES:
        raise CapacityError(
            f"{n} variables means 2^{n} assignments; at most {MAX_JPD_VARIABLES} are supported, "
            "decompose the scenario into smaller pieces"
        )
    idx = np.arange(1 << n)
    bits = [(idx >> i) & 1 for i in range(n)]
    rows = []
    for v, w in s.contexts:
        bv, bw = bits[s.index(v)], bits[s.index(w)]
        for key in OUTCOME_KEYS:
            a, b = outcome_index(_SIGN[key[0]]), outcome_index(_SIGN[key[1]])
            rows.append(((bv == a) & (bw == b)).astype(float))
    return np.array(rows)


def table_vector(b: Behavior) -> np.ndarray:
    return np.concatenate([np.array(t.entries) for t in b.tables.values()])


@dataclass
class JpdVerdict:
    exists: bool
    weights: dict[int, float] = field(default_factory=dict)
    certificate: np.ndarray | None = None
    residual: float | None = None


def jpd_exists(b: Behavior) -> JpdVerdict:
    """Decide whether one distribution over all variables reproduces every table."""
    M = marginalization_matrix(b.scenario)
    p = table_vector(b)
    lp = LinearProgram(np.zeros(M.shape[1]), M, p)
    out = lp_solve(lp)
    if out.status is LpStatus.INFEASIBLE:
        return JpdVerdict(False, certificate=out.certificate)
    w = out.solution
    residual = float(np.max(np.abs(M @ w - p)))
    if residual > RECONSTRUCTION_TOL:
        raise SolverError(f"JPD weights reproduce the tables only to {residual:.3e}")
    weights = {int(i): float(w[i]) for i in np.flatnonzero(w > 1e-12)}
    return JpdVerdict(True, weights, residual=residual)


def decompose_noncontextual(b: Behavior) -> dict[int, float]:
    verdict = jpd_exists(b)
    if not verdict.exists:
        raise NoJointDistributionError("behavior admits no joint distribution", verdict.certificate)
    return verdict.weights


def behavior_from_weights(s: Scenario, weights: Mapping[int, float]) -> Behavior:
    """Mixture of deterministic behaviors, one per weighted assignment index."""
    acc = {c: np.zeros((2, 2)) for c in s.contexts}
    for idx, w in weights.items():
        det = deterministic(s, assignment_of(idx, s.variables))
        for c, t in det.tables.items():
            acc[c] += w * t.array
    return Behavior(s, {c: JointTable.from_array(a) for c, a in acc.items()})
