"""Monogamy relations obtained by summing chained triangle inequalities.

Both relations only use triangle inequalities on jointly measurable triples
(two compatible measurements of one party plus one of another party, or one
measurement per party), so they hold for every distance kind on behaviors
whose declared triples admit a joint distribution.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .behavior import Behavior, correlator
from .distance import DistanceKind
from .errors import InvalidScenarioError, UnsupportedCaseError
from .inequality import SLACK, InequalityResult
from .polytope import Objective, max_over_no_disturbance
from .scenario import Scenario, make_kcbs_chsh_hybrid, make_tripartite_chsh

Edge = tuple[str, str]

# d(A1,A5) <= d(A1,A2) + d(A2,A3) + d(A3,A4) + d(A4,A5)
KCBS_PART = (("A1", "A5"), (("A1", "A2"), ("A2", "A3"), ("A3", "A4"), ("A4", "A5")))
# d(A1,B1) <= d(A1,B2) + d(B2,A3) + d(A3,B1)
HYBRID_CHSH_PART = (("A1", "B1"), (("A1", "B2"), ("B2", "A3"), ("A3", "B1")))
CHSH_AB = (("A1", "B1"), (("A1", "B2"), ("B2", "A2"), ("A2", "B1")))
CHSH_AC = (("A1", "C1"), (("A1", "C2"), ("C2", "A2"), ("A2", "C1")))

RELATIONS = {
    "hybrid": (make_kcbs_chsh_hybrid, ("kcbs-part", KCBS_PART), ("chsh-part", HYBRID_CHSH_PART)),
    "tripartite": (make_tripartite_chsh, ("chsh(A,B)", CHSH_AB), ("chsh(A,C)", CHSH_AC)),
}


@dataclass
class MonogamyResult:
    relation: str
    kind: DistanceKind
    lhs_value: float
    rhs_value: float
    first_expression: InequalityResult
    second_expression: InequalityResult
    lhs_terms: list[tuple[str, float]] = field(default_factory=list)
    rhs_terms: list[tuple[str, float]] = field(default_factory=list)

    @property
    def satisfied(self) -> bool:
        return self.lhs_value <= self.rhs_value + SLACK

    @property
    def both_violated(self) -> bool:
        return self.first_expression.violated and self.second_expression.violated


def _label(e: Edge) -> str:
    return f"d({e[0]},{e[1]})"


def _part(b: Behavior, kind: DistanceKind, name: str, chain) -> InequalityResult:
    """Constituent inequality: correlation form for covariance, distance gap otherwise."""
    lhs, rhs = chain
    if kind.variant == "covariance":
        terms = [(f"-<{lhs[0]}{lhs[1]}>", -correlator(b, *lhs))]
        terms += [(f"<{v}{w}>", correlator(b, v, w)) for v, w in rhs]
        return InequalityResult(name, sum(t for _, t in terms), float(len(rhs) - 1), terms)
    terms = [(_label(lhs), kind(b.table(*lhs), *lhs))]
    terms += [(f"-{_label(e)}", -kind(b.table(*e), *e)) for e in rhs]
    return InequalityResult(name, sum(t for _, t in terms), 0.0, terms)


def _require(b: Behavior, which: str) -> Scenario:
    expected = RELATIONS[which][0]()
    if b.scenario != expected:
        raise InvalidScenarioError(f"the {which} monogamy relation needs a behavior on the {which} scenario")
    return expected


def _monogamy(b: Behavior, kind: DistanceKind, which: str) -> MonogamyResult:
    _require(b, which)
    _, (n1, c1), (n2, c2) = RELATIONS[which]
    lhs_edges = [c1[0], c2[0]]
    rhs_edges = [*c1[1], *c2[1]]
    lhs_terms = [(_label(e), kind(b.table(*e), *e)) for e in lhs_edges]
    rhs_terms = [(_label(e), kind(b.table(*e), *e)) for e in rhs_edges]
    return MonogamyResult(
        which,
        kind,
        sum(v for _, v in lhs_terms),
        sum(v for _, v in rhs_terms),
        _part(b, kind, n1, c1),
        _part(b, kind, n2, c2),
        lhs_terms,
        rhs_terms,
    )


def chsh_kcbs_monogamy(b: Behavior, kind: DistanceKind) -> MonogamyResult:
    """d(A1,A5) + d(A1,B1) against the seven path distances of both chains."""
    return _monogamy(b, kind, "hybrid")


def bell_bell_monogamy(b: Behavior, kind: DistanceKind) -> MonogamyResult:
    return _monogamy(b, kind, "tripartite")


def part_objective(chain) -> Objective:
    """Correlation-form objective of one constituent chain."""
    lhs, rhs = chain
    terms = []
    for (v, w), coef in [(lhs, -1.0), *((e, 1.0) for e in rhs)]:
        terms += [((v, w), "++", coef), ((v, w), "+-", -coef), ((v, w), "-+", -coef), ((v, w), "--", coef)]
    return Objective(terms)


def _check_kind(kind) -> None:
    variant = kind.variant if isinstance(kind, DistanceKind) else str(kind)
    if variant != "covariance":
        raise UnsupportedCaseError(
            f"the {variant} monogamy objective is nonlinear in the tables; "
            "use chsh_kcbs_monogamy / bell_bell_monogamy on individual behaviors instead"
        )


def monogamy_bound_via_lp(which: str, kind="covariance") -> float:
    """Maximum of the summed correlation forms over the scenario's no-disturbance polytope."""
    _check_kind(kind)
    if which not in RELATIONS:
        raise ValueError(f"unknown relation {which!r}; expected 'hybrid' or 'tripartite'")
    make, (_, c1), (_, c2) = RELATIONS[which]
    o1, o2 = part_objective(c1), part_objective(c2)
    total = Objective([*o1.terms, *o2.terms])
    value, _ = max_over_no_disturbance(make(), total)
    return value


def pinned_maximum(which: str, first_value: float, kind="covariance") -> tuple[float, Behavior]:
    """Maximize the second expression with the first pinned to ``first_value``."""
    _check_kind(kind)
    make, (_, c1), (_, c2) = RELATIONS[which]
    return max_over_no_disturbance(make(), part_objective(c2), pins=[(part_objective(c1), first_value)])


def tradeoff_curve(which: str, pin_values: Sequence[float]) -> list[tuple[float, float]]:
    return [(v, pinned_maximum(which, v)[0]) for v in pin_values]
