"""Shared generators and independent oracles for the test suite."""

from __future__ import annotations

import functools
import itertools
from fractions import Fraction

import numpy as np

from trianglekit.behavior import Behavior, JointTable, mix
from trianglekit.inequality import objective_for
from trianglekit.polytope import behavior_from_weights, max_over_no_disturbance
from trianglekit.scenario import Scenario, cycle_labels, make_cycle

ACCEPTANCE_LINES: list[str] = []


def report(criterion: int, ok: bool, detail: str) -> None:
    line = f"criterion {criterion}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def frechet_table(pa: float, pb: float, pab: float) -> JointTable:
    return JointTable(pab, pa - pab, pb - pab, 1.0 - pa - pb + pab)


def random_cycle_behavior(n: int, rng: np.random.Generator) -> Behavior:
    """Random no-disturbance behavior on the n-cycle: random marginals, then p(++) inside its Frechet interval."""
    s = make_cycle(n)
    p = rng.uniform(size=n)
    if rng.uniform() < 0.3:
        p = np.round(p)
    tables = {}
    for i, (v, w) in enumerate(s.contexts):
        a, b = p[s.index(v)], p[s.index(w)]
        lo, hi = max(0.0, a + b - 1.0), min(a, b)
        pab = rng.choice([lo, hi]) if rng.uniform() < 0.4 else rng.uniform(lo, hi)
        tables[(v, w)] = frechet_table(a, b, pab)
    return Behavior(s, tables)


@functools.lru_cache(maxsize=None)
def _extreme_witnesses(n: int) -> tuple[Behavior, ...]:
    names = [f"gnc:{n}"] + (["specker"] if n == 3 else []) + (["ch"] if n == 4 else []) + ([f"excl:{n}"] if n % 2 else [])
    out = []
    for name in names:
        for rotation in range(n):
            xs = cycle_labels(n)
            out.append(max_over_no_disturbance(make_cycle(n), objective_for(name, xs[rotation:] + xs[:rotation]))[1])
    return tuple(out)


def random_violating_behavior(n: int, rng: np.random.Generator) -> Behavior:
    """A maximizer of some named form, diluted with a random no-disturbance behavior."""
    witnesses = _extreme_witnesses(n)
    w = witnesses[int(rng.integers(len(witnesses)))]
    return mix(w, random_cycle_behavior(n, rng), float(rng.uniform(0.2, 1.0)))


def random_classical_behavior(s: Scenario, rng: np.random.Generator) -> Behavior:
    """Random mixture of a handful of deterministic assignments."""
    k = int(rng.integers(1, 6))
    idx = rng.choice(2 ** len(s.variables), size=k, replace=False)
    w = rng.dirichlet(np.ones(k))
    return behavior_from_weights(s, {int(i): float(x) for i, x in zip(idx, w)})


def random_dyadic_behavior(n: int, rng: np.random.Generator, denom: int = 8) -> tuple[Behavior, dict]:
    """No-disturbance n-cycle behavior with every entry a multiple of 1/denom, plus its exact tables."""
    s = make_cycle(n)
    if rng.uniform() < 0.4:
        # unbiased marginals leave the widest room for correlation-type violations
        p = [Fraction(1, 2)] * n
    else:
        p = [Fraction(int(rng.integers(0, denom + 1)), denom) for _ in range(n)]
    exact, tables = {}, {}
    for v, w in s.contexts:
        a, b = p[s.index(v)], p[s.index(w)]
        lo, hi = max(Fraction(0), a + b - 1), min(a, b)
        choices = [Fraction(k, denom) for k in range(denom + 1) if lo <= Fraction(k, denom) <= hi]
        pab = choices[int(rng.integers(len(choices)))]
        t = (pab, a - pab, b - pab, 1 - a - b + pab)
        exact[(v, w)] = t
        tables[(v, w)] = JointTable(*map(float, t))
    return Behavior(s, tables), exact


def floyd_warshall_feasible(edges, tol: float = 1e-9) -> bool:
    """Shortest-path completion of a weighted cycle keeps every edge weight."""
    n = len(edges)
    d = np.full((n, n), np.inf)
    np.fill_diagonal(d, 0.0)
    for i, w in enumerate(edges):
        j = (i + 1) % n
        d[i, j] = d[j, i] = min(d[i, j], w)
    for k in range(n):
        d = np.minimum(d, d[:, [k]] + d[[k], :])
    return all(d[i, (i + 1) % n] >= edges[i] - tol for i in range(n))


def _exact_rank_solve(cols: list[list[Fraction]], rhs: list[Fraction]):
    """Solve sum_j x_j cols[j] = rhs exactly; None if inconsistent or columns dependent."""
    m, k = len(rhs), len(cols)
    a = [[cols[j][i] for j in range(k)] + [rhs[i]] for i in range(m)]
    row = 0
    for c in range(k):
        piv = next((r for r in range(row, m) if a[r][c] != 0), None)
        if piv is None:
            return None
        a[row], a[piv] = a[piv], a[row]
        inv = a[row][c]
        a[row] = [x / inv for x in a[row]]
        for r in range(m):
            if r != row and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[row])]
        row += 1
    if any(a[r][k] != 0 for r in range(row, m)):
        return None
    return [a[i][k] for i in range(k)]


def exact_jpd_by_enumeration(s: Scenario, exact: dict) -> bool:
    """Exhaustive search for a nonnegative basic solution in rational arithmetic (small n only)."""
    n = len(s.variables)
    assigns = list(itertools.product((1, -1), repeat=n))
    rhs = []
    cols = [[] for _ in assigns]
    for v, w in s.contexts:
        iv, iw = s.index(v), s.index(w)
        for x, y in ((1, 1), (1, -1), (-1, 1), (-1, -1)):
            for j, a in enumerate(assigns):
                cols[j].append(Fraction(int(a[iv] == x and a[iw] == y)))
        rhs.extend(exact[(v, w)])
    for size in range(1, len(assigns) + 1):
        for subset in itertools.combinations(range(len(assigns)), size):
            sol = _exact_rank_solve([cols[j] for j in subset], rhs)
            if sol is not None and all(x >= 0 for x in sol):
                return True
    return False


def exact_jpd_by_cycle_facets(s: Scenario, exact: dict) -> bool:
    """Fine-type criterion for consistent n-cycles: every odd-sign correlation sum is at most n - 2."""
    n = len(s.variables)
    corr = []
    for v, w in s.contexts:
        pp, pm, mp, mm = exact[(v, w)]
        corr.append(pp - pm - mp + mm)
    for signs in itertools.product((1, -1), repeat=n):
        if signs.count(-1) % 2 and sum(g * e for g, e in zip(signs, corr)) > n - 2:
            return False
    return True
