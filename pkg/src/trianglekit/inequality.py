"""Chained distance inequalities and their named rearrangements.

The chained inequality compares the direct distance d(X1, X2) with the
path X2 -> X3 -> ... -> XN -> X1.  With the covariance distance it becomes
the n-cycle correlation inequality, with the entropic distance its entropic
counterpart, and with Kolmogorov distances on suitable events the
Specker, CH and exclusive-event probability inequalities.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .behavior import Behavior, JointTable, correlator, marginal
from .distance import COVARIANCE, ENTROPIC, DistanceKind, entropic_distance
from .errors import NotAContextError, UnsupportedCaseError
from .polytope import Objective
from .scenario import Scenario, cycle_labels

SLACK = 1e-9


@dataclass
class InequalityResult:
    name: str
    value: float
    bound: float
    witness_terms: list[tuple[str, float]] = field(default_factory=list)
    note: str = ""

    @property
    def violated(self) -> bool:
        return self.value > self.bound + SLACK

    @property
    def tight(self) -> bool:
        return abs(self.value - self.bound) <= SLACK

    @property
    def verdict(self) -> str:
        if self.violated:
            return "violated"
        return "satisfied (tight)" if self.tight else "satisfied"


@dataclass
class ChainedInequality:
    kind: DistanceKind
    cycle: tuple[str, ...]
    lhs_edge: tuple[str, str]
    rhs_edges: tuple[tuple[str, str], ...]
    lhs_value: float
    rhs_values: tuple[float, ...]

    @property
    def rhs_value(self) -> float:
        return sum(self.rhs_values)

    @property
    def satisfied(self) -> bool:
        return self.lhs_value <= self.rhs_value + SLACK

    @property
    def violated(self) -> bool:
        return not self.satisfied


def _cycle(n: int, cycle: Sequence[str] | None, rotation: int = 0) -> list[str]:
    xs = list(cycle) if cycle is not None else cycle_labels(n)
    if len(xs) != n:
        raise ValueError(f"cycle has {len(xs)} variables, expected {n}")
    r = rotation % n
    return xs[r:] + xs[:r]


def _edges(xs: Sequence[str]) -> list[tuple[str, str]]:
    n = len(xs)
    return [(xs[i], xs[(i + 1) % n]) for i in range(n)]


def _table(b: Behavior, v: str, w: str) -> JointTable:
    if not b.scenario.is_context(v, w):
        raise NotAContextError(f"({v}, {w}) is not a context; its distance is not observable")
    return b.table(v, w)


def chained_distance_check(b: Behavior, kind: DistanceKind, cycle: Sequence[str]) -> ChainedInequality:
    xs = tuple(cycle)
    if len(xs) < 3:
        raise ValueError("a chained inequality needs at least 3 variables")
    edges = _edges(xs)
    lhs, rhs = edges[0], tuple(edges[1:])
    lhs_value = kind(_table(b, *lhs), *lhs)
    rhs_values = tuple(kind(_table(b, v, w), v, w) for v, w in rhs)
    return ChainedInequality(kind, xs, lhs, rhs, lhs_value, rhs_values)


def correlation_ncycle(b: Behavior, n: int, rotation: int = 0, cycle: Sequence[str] | None = None) -> InequalityResult:
    """-<X1X2> + sum_{i>=2} <Xi X(i+1)> <= n - 2; ``rotation`` moves the minus sign."""
    xs = _cycle(n, cycle, rotation)
    terms = []
    value = 0.0
    for i, (v, w) in enumerate(_edges(xs)):
        _table(b, v, w)
        c = correlator(b, v, w)
        terms.append((f"<{v}{w}>", c))
        value += -c if i == 0 else c
    return InequalityResult(f"gnc:{n}", value, float(n - 2), terms)


def entropic_ncycle(b: Behavior, n: int, rotation: int = 0, cycle: Sequence[str] | None = None) -> InequalityResult:
    """E(X1,X2) - sum_{i>=2} E(Xi, X(i+1)) <= 0, in bits."""
    xs = _cycle(n, cycle, rotation)
    terms = []
    value = 0.0
    for i, (v, w) in enumerate(_edges(xs)):
        e = entropic_distance(_table(b, v, w))
        terms.append((f"E({v},{w})", e))
        value += e if i == 0 else -e
    return InequalityResult(f"gne:{n}", value, 0.0, terms)


def _event_sum(b: Behavior, name: str, events, bound: float) -> InequalityResult:
    terms = []
    for label, (v, x), (w, y) in events:
        terms.append((f"p({label})", _table(b, v, w).prob(x, y)))
    return InequalityResult(name, sum(p for _, p in terms), bound, terms)


def specker_events(cycle: Sequence[str] | None = None):
    x1, x2, x3 = _cycle(3, cycle)
    return [("A", (x1, 1), (x2, -1)), ("B", (x2, 1), (x3, 1)), ("C", (x3, -1), (x1, -1))]


def exclusive_events(n: int, cycle: Sequence[str] | None = None):
    """A_i = (X_i = +1, X_{i+1} = -1); consecutive events are exclusive."""
    xs = _cycle(n, cycle)
    return [(f"A{i + 1}", (v, 1), (w, -1)) for i, (v, w) in enumerate(_edges(xs))]


def specker(b: Behavior, cycle: Sequence[str] | None = None) -> InequalityResult:
    return _event_sum(b, "specker", specker_events(cycle), 1.0)


def exclusive_events_inequality(b: Behavior, n: int, cycle: Sequence[str] | None = None) -> InequalityResult:
    if n % 2 == 0:
        raise UnsupportedCaseError("exclusive-event inequalities are only derived for odd n")
    if n < 3:
        raise ValueError("n must be at least 3")
    return _event_sum(b, f"excl:{n}", exclusive_events(n, cycle), (n - 1) / 2)


def ch_inequality(b: Behavior, cycle: Sequence[str] | None = None) -> InequalityResult:
    x1, x2, x3, x4 = _cycle(4, cycle)
    terms = [
        (f"-p({x1}+,{x2}+)", -_table(b, x1, x2).prob(1, 1)),
        (f"p({x2}+,{x3}+)", _table(b, x2, x3).prob(1, 1)),
        (f"p({x3}+,{x4}+)", _table(b, x3, x4).prob(1, 1)),
        (f"p({x4}+,{x1}+)", _table(b, x4, x1).prob(1, 1)),
        (f"-p({x3}+)", -marginal(b, x3)[0]),
        (f"-p({x4}+)", -marginal(b, x4)[0]),
    ]
    return InequalityResult("ch", sum(v for _, v in terms), 0.0, terms)


def event_behavior(b: Behavior, events) -> Behavior:
    """Behavior over a cycle of consecutively exclusive events.

    Event variables take +1 when the event occurs.  Exclusivity fixes each
    pair table from the two single-event probabilities.
    """
    n = len(events)
    labels = [e[0] for e in events]
    probs = []
    for label, (v, x), (w, y) in events:
        probs.append(_table(b, v, w).prob(x, y))
    for i in range(n):
        _, *lits_a = events[i]
        _, *lits_b = events[(i + 1) % n]
        if not any(u == u2 and x != x2 for u, x in lits_a for u2, x2 in lits_b):
            raise ValueError(f"events {labels[i]} and {labels[(i + 1) % n]} are not exclusive")
    s = Scenario(tuple(labels), tuple(_edges(labels)))
    tables = {}
    for i, (e, f) in enumerate(_edges(labels)):
        pa, pb = probs[i], probs[(i + 1) % n]
        rest = 1.0 - pa - pb
        if -SLACK < rest < 0.0:
            rest = 0.0
        tables[(e, f)] = JointTable(0.0, pa, pb, rest)
    return Behavior(s, tables)


def _alternating_selection(labels: Sequence[str]) -> dict[str, int]:
    # first event "did not occur", then even positions 0 and odd positions 1
    sel = {labels[0]: -1}
    for i in range(1, len(labels)):
        sel[labels[i]] = -1 if (i + 1) % 2 == 0 else 1
    return sel


def specker_chained(b: Behavior, cycle: Sequence[str] | None = None) -> ChainedInequality:
    """K(A=0,B=0) <= K(B=0,C=1) + K(C=1,A=0) on the Specker events."""
    eb = event_behavior(b, specker_events(cycle))
    labels = list(eb.scenario.variables)
    return chained_distance_check(eb, DistanceKind("kolmogorov", _alternating_selection(labels)), labels)


def exclusive_events_chained(b: Behavior, n: int, cycle: Sequence[str] | None = None) -> ChainedInequality:
    if n % 2 == 0:
        raise UnsupportedCaseError("exclusive-event chains are only derived for odd n")
    eb = event_behavior(b, exclusive_events(n, cycle))
    labels = list(eb.scenario.variables)
    return chained_distance_check(eb, DistanceKind("kolmogorov", _alternating_selection(labels)), labels)


def ch_chained(b: Behavior, cycle: Sequence[str] | None = None) -> ChainedInequality:
    return chained_distance_check(b, DistanceKind("kolmogorov"), _cycle(4, cycle))


def metric_extension_feasible(cycle_edge_distances: Mapping | Sequence[float]) -> bool:
    """Whether cycle edge values extend to a pseudometric on all cycle points.

    Accepts the values in cycle order or a mapping from consecutive pairs.
    Feasible iff no edge exceeds the sum of the others, which is the same as
    shortest-path completion reproducing every edge.
    """
    if isinstance(cycle_edge_distances, Mapping):
        vals = [float(v) for v in cycle_edge_distances.values()]
    else:
        vals = [float(v) for v in cycle_edge_distances]
    if len(vals) < 3:
        raise ValueError("need at least 3 cycle edges")
    if any(v < 0 for v in vals):
        raise ValueError("distances must be nonnegative")
    total = sum(vals)
    return all(v <= (total - v) + SLACK for v in vals)


def rotations_satisfied(b: Behavior, kind: DistanceKind, cycle: Sequence[str]) -> bool:
    xs = list(cycle)
    return all(chained_distance_check(b, kind, xs[r:] + xs[:r]).satisfied for r in range(len(xs)))


def _corr_terms(v: str, w: str, coef: float):
    return [((v, w), "++", coef), ((v, w), "+-", -coef), ((v, w), "-+", -coef), ((v, w), "--", coef)]


def objective_for(name: str, cycle: Sequence[str] | None = None) -> Objective:
    """Linear objective whose value on a behavior equals the named expression."""
    head, _, arg = name.partition(":")
    if head == "gnc":
        n = int(arg)
        terms = []
        for i, (v, w) in enumerate(_edges(_cycle(n, cycle))):
            terms += _corr_terms(v, w, -1.0 if i == 0 else 1.0)
        return Objective(terms)
    if name == "specker":
        return Objective([((v, w), _key(x, y), 1.0) for _, (v, x), (w, y) in specker_events(cycle)])
    if head == "excl":
        n = int(arg)
        if n % 2 == 0:
            raise UnsupportedCaseError("exclusive-event inequalities are only derived for odd n")
        return Objective([((v, w), _key(x, y), 1.0) for _, (v, x), (w, y) in exclusive_events(n, cycle)])
    if name == "ch":
        x1, x2, x3, x4 = _cycle(4, cycle)
        return Objective(
            [((x1, x2), "++", -1.0), ((x2, x3), "++", 1.0), ((x3, x4), "++", 1.0), ((x4, x1), "++", 1.0)],
            [(x3, 1, -1.0), (x4, 1, -1.0)],
        )
    raise UnsupportedCaseError(f"{name!r} has no linear objective")


def _key(x: int, y: int) -> str:
    return ("+" if x == 1 else "-") + ("+" if y == 1 else "-")


def bound_for(name: str) -> float:
    head, _, arg = name.partition(":")
    if head == "gnc":
        return float(int(arg) - 2)
    if head == "excl":
        return (int(arg) - 1) / 2
    if name == "specker":
        return 1.0
    if head in ("ch", "gne"):
        return 0.0
    raise UnsupportedCaseError(f"unknown inequality {name!r}")


INEQUALITY_NAMES = ("gnc:N", "gne:N", "specker", "ch", "excl:N", "chained:<kind>:N")


def evaluate(b: Behavior, name: str, kind: str | None = None) -> InequalityResult | ChainedInequality:
    """Evaluate an inequality by its CLI name on the canonical cycle X1..XN."""
    head, _, arg = name.partition(":")
    try:
        if head == "gnc":
            return correlation_ncycle(b, int(arg))
        if head == "gne":
            return entropic_ncycle(b, int(arg))
        if head == "excl":
            return exclusive_events_inequality(b, int(arg))
        if name == "specker":
            return specker(b)
        if name == "ch":
            return ch_inequality(b)
        if head == "chained":
            parts = arg.split(":")
            if len(parts) == 2:
                kind, n = parts[0], int(parts[1])
            elif len(parts) == 1 and kind is not None:
                n = int(parts[0])
            else:
                raise ValueError("chained inequalities are named chained:<kind>:N")
            return chained_distance_check(b, DistanceKind(kind), cycle_labels(n))
    except ValueError as exc:
        if isinstance(exc, (UnsupportedCaseError,)):
            raise
        raise ValueError(f"bad inequality name {name!r}: {exc}") from exc
    raise ValueError(f"unknown inequality {name!r}; expected one of {INEQUALITY_NAMES}")


def named_inequalities(n: int) -> list[str]:
    """Every inequality name applicable to an n-cycle."""
    names = [f"gnc:{n}", f"gne:{n}", *(f"chained:{k}:{n}" for k in ("covariance", "entropic", "kolmogorov"))]
    if n == 3:
        names.append("specker")
    if n == 4:
        names.append("ch")
    if n % 2:
        names.append(f"excl:{n}")
    return names


def equivalent_pairs(b: Behavior, n: int) -> list[tuple[str, bool, bool]]:
    """(label, named-form violated, chained-form violated) for every pairing of forms."""
    xs = cycle_labels(n)
    out = [
        ("covariance~gnc", correlation_ncycle(b, n).violated, chained_distance_check(b, COVARIANCE, xs).violated),
        ("entropic~gne", entropic_ncycle(b, n).violated, chained_distance_check(b, ENTROPIC, xs).violated),
    ]
    if n == 3:
        out.append(("kolmogorov~specker", specker(b).violated, specker_chained(b).violated))
    if n == 4:
        out.append(("kolmogorov~ch", ch_inequality(b).violated, ch_chained(b).violated))
    if n % 2:
        out.append((f"kolmogorov~excl:{n}", exclusive_events_inequality(b, n).violated, exclusive_events_chained(b, n).violated))
    return out

