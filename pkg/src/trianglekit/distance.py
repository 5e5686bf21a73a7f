"""Information distances between two binary variables with a joint table.

Covariance and entropic distances are pseudometrics: they vanish whenever
one variable is a deterministic function of the other (X = -Y included), so
only the "d = 0 when X = Y" direction of the identity axiom is checked.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .behavior import JointTable, outcome_index

SLACK = 1e-9
ZERO_PROB = 1e-12

KINDS = ("covariance", "entropic", "kolmogorov")


@dataclass(frozen=True)
class DistanceKind:
    variant: str
    event_selection: Mapping[str, int] | None = field(default=None)

    def __post_init__(self):
        if self.variant not in KINDS:
            raise ValueError(f"unknown distance kind {self.variant!r}; expected one of {KINDS}")
        if self.variant == "kolmogorov":
            sel = dict(self.event_selection or {})
            for v, x in sel.items():
                outcome_index(x)
            object.__setattr__(self, "event_selection", sel)
        elif self.event_selection is not None:
            raise ValueError("event_selection only applies to the kolmogorov kind")

    @classmethod
    def parse(cls, code: str) -> "DistanceKind":
        return cls(code)

    def selected(self, v: str) -> int:
        """Outcome picked as the Kolmogorov event for ``v`` (+1 unless overridden)."""
        return self.event_selection.get(v, 1)

    def __call__(self, t: JointTable, v: str | None = None, w: str | None = None) -> float:
        if self.variant == "covariance":
            return covariance_distance(t)
        if self.variant == "entropic":
            return entropic_distance(t)
        return kolmogorov_distance(t, self.selected(v), self.selected(w))

    def __str__(self):
        return self.variant


COVARIANCE = DistanceKind("covariance")
ENTROPIC = DistanceKind("entropic")
KOLMOGOROV = DistanceKind("kolmogorov")


def covariance_distance(t: JointTable) -> float:
    return 1.0 - t.correlator()


def _entropy(ps) -> float:
    h = 0.0
    for p in ps:
        if p > ZERO_PROB:
            h -= p * math.log2(p)
    return h


def entropic_distance(t: JointTable) -> float:
    """H(X|Y) + H(Y|X) = 2 H(XY) - H(X) - H(Y), in bits."""
    d = 2.0 * _entropy(t.entries) - _entropy(t.first_marginal()) - _entropy(t.second_marginal())
    # Cancellation can leave -1e-16 on deterministic tables.
    return max(d, 0.0)


def kolmogorov_distance(t: JointTable, x0: int = 1, y0: int = 1) -> float:
    """P(x0) + P(y0) - 2 P(x0, y0): probability that exactly one event occurs."""
    a = t.array
    i, j = outcome_index(x0), outcome_index(y0)
    return float(a[i].sum() + a[:, j].sum() - 2.0 * a[i, j])


@dataclass(frozen=True)
class TripleJoint:
    """p(x, y, z) over {+1, -1}^3, stored as a 2x2x2 array (index 0 is +1)."""

    probs: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float).reshape(2, 2, 2)
        object.__setattr__(self, "probs", p)

    def is_valid(self) -> bool:
        return bool(self.probs.min() >= 0.0 and abs(self.probs.sum() - 1.0) <= SLACK)

    def pair(self, a: str, b: str) -> JointTable:
        """Pairwise marginal for two of the labels ``"X"``, ``"Y"``, ``"Z"``, oriented as (a, b)."""
        axes = "XYZ"
        ia, ib = axes.index(a), axes.index(b)
        drop = 3 - ia - ib
        m = self.probs.sum(axis=drop)
        if ia > ib:
            m = m.T
        return JointTable.from_array(m)


@dataclass
class AxiomReport:
    nonnegative: bool
    symmetric: bool
    triangle: bool
    identity: bool
    distances: dict[tuple[str, str], float]

    @property
    def ok(self) -> bool:
        return self.nonnegative and self.symmetric and self.triangle and self.identity


def check_axioms(kind: DistanceKind, j: TripleJoint) -> AxiomReport:
    """Check the distance axioms of ``kind`` on the three pair marginals of ``j``.

    Kolmogorov event selections refer to the labels ``"X"``, ``"Y"``, ``"Z"``.
    """
    pairs = [("X", "Y"), ("X", "Z"), ("Y", "Z")]
    d = {(a, b): kind(j.pair(a, b), a, b) for a, b in pairs}
    nonneg = all(v >= -SLACK for v in d.values())
    sym = all(abs(kind(j.pair(b, a), b, a) - d[(a, b)]) <= SLACK for a, b in pairs)
    xy, xz, yz = d[("X", "Y")], d[("X", "Z")], d[("Y", "Z")]
    tri = xz <= xy + yz + SLACK and xy <= xz + yz + SLACK and yz <= xy + xz + SLACK
    ident = True
    for v in "XYZ":
        marg = j.probs.sum(axis=tuple(k for k in range(3) if k != "XYZ".index(v)))
        copy = JointTable(marg[0], 0.0, 0.0, marg[1])
        ident = ident and abs(kind(copy, v, v)) <= SLACK
    return AxiomReport(nonneg, sym, tri, ident, d)


def random_triple_joint(rng: np.random.Generator) -> TripleJoint:
    """Dirichlet draw with a random concentration; small concentrations give near-deterministic joints."""
    alpha = 10.0 ** rng.uniform(-1.5, 1.0)
    p = rng.dirichlet(np.full(8, alpha))
    if rng.uniform() < 0.1:
        # exact zeros exercise the 0 log 0 convention
        p[rng.uniform(size=8) < 0.5] = 0.0
        if p.sum() == 0.0:
            p[rng.integers(8)] = 1.0
        p /= p.sum()
    return TripleJoint(p)
