"""No-disturbance behaviors: one 2x2 joint table per context.

Outcome index 0 stands for +1 and index 1 for -1 everywhere in this package,
so ``table.array[0, 1]`` is p(v=+1, w=-1).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

import numpy as np

from .errors import BehaviorError, NotAContextError
from .scenario import Pair, Scenario, Triple, make_cycle

TOL = 1e-9
OUTCOME_KEYS = ("++", "+-", "-+", "--")


def outcome_index(x: int) -> int:
    if x == 1:
        return 0
    if x == -1:
        return 1
    raise ValueError(f"outcomes are +1 or -1, got {x!r}")


@dataclass(frozen=True)
class JointTable:
    p_pp: float
    p_pm: float
    p_mp: float
    p_mm: float

    @classmethod
    def from_array(cls, a) -> "JointTable":
        a = np.asarray(a, dtype=float)
        return cls(float(a[0, 0]), float(a[0, 1]), float(a[1, 0]), float(a[1, 1]))

    @classmethod
    def from_dict(cls, d: Mapping[str, float]) -> "JointTable":
        if set(d) != set(OUTCOME_KEYS):
            raise BehaviorError(f"table keys must be exactly {OUTCOME_KEYS}, got {sorted(d)}")
        return cls(*(float(d[k]) for k in OUTCOME_KEYS))

    def to_dict(self) -> dict[str, float]:
        return dict(zip(OUTCOME_KEYS, self.entries))

    @property
    def entries(self) -> tuple[float, float, float, float]:
        return (self.p_pp, self.p_pm, self.p_mp, self.p_mm)

    @property
    def array(self) -> np.ndarray:
        return np.array([[self.p_pp, self.p_pm], [self.p_mp, self.p_mm]])

    def prob(self, x: int, y: int) -> float:
        return float(self.array[outcome_index(x), outcome_index(y)])

    def transpose(self) -> "JointTable":
        return JointTable(self.p_pp, self.p_mp, self.p_pm, self.p_mm)

    def first_marginal(self) -> tuple[float, float]:
        return (self.p_pp + self.p_pm, self.p_mp + self.p_mm)

    def second_marginal(self) -> tuple[float, float]:
        return (self.p_pp + self.p_mp, self.p_pm + self.p_mm)

    def correlator(self) -> float:
        return self.p_pp - self.p_pm - self.p_mp + self.p_mm

    def normalization_residual(self) -> float:
        """Deviation from a probability table: sum error or most negative entry."""
        return max(abs(sum(self.entries) - 1.0), -min(self.entries), 0.0)

    def __add__(self, other):
        return JointTable(*(a + b for a, b in zip(self.entries, other.entries)))

    def scale(self, w: float) -> "JointTable":
        return JointTable(*(w * a for a in self.entries))


UNIFORM_TABLE = JointTable(0.25, 0.25, 0.25, 0.25)


@dataclass(frozen=True)
class Behavior:
    scenario: Scenario
    tables: Mapping[Pair, JointTable]

    def __post_init__(self):
        s = self.scenario
        tables = {}
        for (v, w), t in self.tables.items():
            if not s.is_context(v, w):
                raise NotAContextError(f"table given for non-context ({v}, {w})")
            c = s.canonical(v, w)
            tables[c] = t if c == (v, w) else t.transpose()
        missing = [c for c in s.contexts if c not in tables]
        if missing:
            raise BehaviorError(f"missing table for context {missing[0][0]}|{missing[0][1]}")
        object.__setattr__(self, "tables", {c: tables[c] for c in s.contexts})

    def table(self, v: str, w: str) -> JointTable:
        """Joint table oriented as (v, w)."""
        c = self.scenario.require_context(v, w)
        t = self.tables[c]
        return t if c == (v, w) else t.transpose()

    def prob(self, v: str, x: int, w: str, y: int) -> float:
        return self.table(v, w).prob(x, y)

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario.to_dict(),
            "tables": {f"{v}|{w}": t.to_dict() for (v, w), t in self.tables.items()},
        }

    @classmethod
    def from_dict(cls, d: Mapping) -> "Behavior":
        try:
            s = Scenario.from_dict(d["scenario"])
            raw = d["tables"]
        except (KeyError, TypeError) as exc:
            raise BehaviorError(f"behavior document lacks {exc}") from exc
        tables = {}
        for key, entry in raw.items():
            v, sep, w = key.partition("|")
            if not sep:
                raise BehaviorError(f"table key {key!r} is not of the form 'v|w'")
            if s.is_context(v, w) and s.canonical(v, w) != (v, w):
                raise BehaviorError(f"table key {key!r} is not canonical; use {'|'.join(s.canonical(v, w))}")
            tables[(v, w)] = JointTable.from_dict(entry)
        return cls(s, tables)

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2) + "\n")

    @classmethod
    def load(cls, path) -> "Behavior":
        return cls.from_dict(json.loads(Path(path).read_text()))


@dataclass
class ValidationReport:
    normalization: dict[Pair, float]
    marginal_discrepancy: dict[str, float]
    triple_gaps: dict[Triple, float] = field(default_factory=dict)

    @property
    def worst(self) -> float:
        vals = [*self.normalization.values(), *self.marginal_discrepancy.values(), *self.triple_gaps.values()]
        return max(vals, default=0.0)

    @property
    def ok(self) -> bool:
        return self.worst <= TOL

    def failures(self) -> list[str]:
        out = [f"normalization {v}|{w}: {r:.3g}" for (v, w), r in self.normalization.items() if r > TOL]
        out += [f"no-disturbance {v}: {r:.3g}" for v, r in self.marginal_discrepancy.items() if r > TOL]
        out += [f"triple {'|'.join(t)} has no joint: {r:.3g}" for t, r in self.triple_gaps.items() if r > TOL]
        return out


def _marginal_in(b: Behavior, c: Pair, v: str) -> tuple[float, float]:
    t = b.tables[c]
    return t.first_marginal() if c[0] == v else t.second_marginal()


def triple_gap(pxy: JointTable, pxz: JointTable, pyz: JointTable) -> float:
    """How far three pair tables are from admitting a common joint (<= 0: they do).

    With t = p(+,+,+), every entry of the joint is affine in t, so a joint
    exists iff an interval of admissible t is nonempty.
    """
    px, py, pz = pxy.first_marginal()[0], pxy.second_marginal()[0], pxz.second_marginal()[0]
    ab, ac, bc = pxy.p_pp, pxz.p_pp, pyz.p_pp
    lo = max(0.0, ab + ac - px, ab + bc - py, ac + bc - pz)
    hi = min(ab, ac, bc, 1.0 - px - py - pz + ab + ac + bc)
    return lo - hi


def validate(b: Behavior) -> ValidationReport:
    s = b.scenario
    norm = {c: t.normalization_residual() for c, t in b.tables.items()}
    disc = {}
    for v in s.variables:
        ctx = s.contexts_of(v)
        if not ctx:
            continue
        ref = _marginal_in(b, ctx[0], v)
        disc[v] = max((max(abs(a - r) for a, r in zip(_marginal_in(b, c, v), ref)) for c in ctx[1:]), default=0.0)
    gaps = {}
    for x, y, z in s.joint_triples:
        gaps[(x, y, z)] = max(0.0, triple_gap(b.table(x, y), b.table(x, z), b.table(y, z)))
    return ValidationReport(norm, disc, gaps)


def marginal(b: Behavior, v: str) -> tuple[float, float]:
    """(p(v=+1), p(v=-1)) read from the first context containing ``v``."""
    ctx = b.scenario.contexts_of(v)
    if not ctx:
        raise BehaviorError(f"variable {v} belongs to no context")
    return _marginal_in(b, ctx[0], v)


def correlator(b: Behavior, v: str, w: str) -> float:
    return b.table(v, w).correlator()


def deterministic(s: Scenario, assignment: Mapping[str, int]) -> Behavior:
    tables = {}
    for v, w in s.contexts:
        a = np.zeros((2, 2))
        a[outcome_index(assignment[v]), outcome_index(assignment[w])] = 1.0
        tables[(v, w)] = JointTable.from_array(a)
    return Behavior(s, tables)


def uniform(s: Scenario) -> Behavior:
    return Behavior(s, {c: UNIFORM_TABLE for c in s.contexts})


_CORR = JointTable(0.5, 0.0, 0.0, 0.5)
_ANTI = JointTable(0.0, 0.5, 0.5, 0.0)


def fixture_p1() -> Behavior:
    """X1, X2 anticorrelated; X2, X3 and X1, X3 correlated."""
    return Behavior(make_cycle(3), {("X1", "X2"): _ANTI, ("X2", "X3"): _CORR, ("X1", "X3"): _CORR})


def fixture_p2() -> Behavior:
    return Behavior(make_cycle(3), {("X1", "X2"): UNIFORM_TABLE, ("X2", "X3"): _CORR, ("X1", "X3"): _CORR})


def fixture_nc() -> Behavior:
    return Behavior(make_cycle(3), {("X1", "X2"): _CORR, ("X2", "X3"): _CORR, ("X1", "X3"): _CORR})


def mix(b1: Behavior, b2: Behavior, w: float) -> Behavior:
    """``w * b1 + (1 - w) * b2`` table by table."""
    if b1.scenario != b2.scenario:
        raise BehaviorError("cannot mix behaviors on different scenarios")
    if not 0.0 <= w <= 1.0:
        raise ValueError(f"mixing weight must lie in [0, 1], got {w}")
    if w == 0.0:
        return b2
    if w == 1.0:
        return b1
    return Behavior(b1.scenario, {c: b1.tables[c].scale(w) + b2.tables[c].scale(1.0 - w) for c in b1.tables})


def sample_no_disturbance(s: Scenario, seed: int) -> Behavior:
    """Seeded point of the no-disturbance polytope.

    A vertex is found by maximizing a random linear objective, then mixed
    with the uniform behavior using a random weight, so samples land both
    inside and outside the noncontextual region.
    """
    from .polytope import Objective, max_over_no_disturbance

    rng = np.random.default_rng(seed)
    coefs = rng.normal(size=(len(s.contexts), 4))
    terms = [(c, key, float(coefs[i, k])) for i, c in enumerate(s.contexts) for k, key in enumerate(OUTCOME_KEYS)]
    _, vertex = max_over_no_disturbance(s, Objective(terms))
    return mix(vertex, uniform(s), float(rng.uniform()))

