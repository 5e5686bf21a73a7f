"""Measurement scenarios as compatibility graphs over binary variables.

A scenario lists variables (each with outcomes +1 and -1) and the unordered
pairs that can be measured jointly.  Bell-type scenarios additionally carry
party labels and may declare triples of pairwise-compatible variables that
are jointly measurable as a whole (for instance two compatible measurements
of Alice together with one of Bob).  Pair contexts are always the unit of
data; declared triples only add consistency requirements.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .errors import InvalidScenarioError, NotAContextError

Pair = tuple[str, str]
Triple = tuple[str, str, str]


@dataclass(frozen=True)
class Scenario:
    variables: tuple[str, ...]
    contexts: tuple[Pair, ...]
    parties: Mapping[str, str] | None = None
    joint_triples: tuple[Triple, ...] = field(default=())

    def __post_init__(self):
        variables = tuple(self.variables)
        if len(set(variables)) != len(variables):
            raise InvalidScenarioError("duplicate variable labels")
        order = {v: i for i, v in enumerate(variables)}
        seen = set()
        canon = []
        for pair in self.contexts:
            v, w = pair
            if v not in order or w not in order:
                raise InvalidScenarioError(f"context {pair} uses an undeclared variable")
            if v == w:
                raise InvalidScenarioError(f"context {pair} pairs a variable with itself")
            c = (v, w) if order[v] < order[w] else (w, v)
            if c in seen:
                raise InvalidScenarioError(f"duplicate context {c}")
            seen.add(c)
            canon.append(c)
        canon.sort(key=lambda c: (order[c[0]], order[c[1]]))

        triples = []
        for t in self.joint_triples:
            t = tuple(sorted(t, key=order.__getitem__))
            if len(set(t)) != 3 or any(x not in order for x in t):
                raise InvalidScenarioError(f"bad joint triple {t}")
            for a, b in combinations(t, 2):
                if (a, b) not in seen:
                    raise InvalidScenarioError(f"joint triple {t} contains non-context pair {(a, b)}")
            triples.append(t)
        triples = sorted(set(triples), key=lambda t: tuple(order[x] for x in t))

        parties = None
        if self.parties is not None:
            parties = dict(self.parties)
            missing = [v for v in variables if v not in parties]
            if missing:
                raise InvalidScenarioError(f"variables without a party label: {missing}")

        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "contexts", tuple(canon))
        object.__setattr__(self, "parties", parties)
        object.__setattr__(self, "joint_triples", tuple(triples))
        object.__setattr__(self, "_order", order)
        object.__setattr__(self, "_context_set", frozenset(canon))

    def index(self, v: str) -> int:
        try:
            return self._order[v]
        except KeyError:
            raise InvalidScenarioError(f"unknown variable {v!r}") from None

    def canonical(self, v: str, w: str) -> Pair:
        """Order a pair by scenario variable order."""
        return (v, w) if self.index(v) < self.index(w) else (w, v)

    def is_context(self, v: str, w: str) -> bool:
        if v not in self._order or w not in self._order or v == w:
            return False
        return self.canonical(v, w) in self._context_set

    def require_context(self, v: str, w: str) -> Pair:
        if not self.is_context(v, w):
            raise NotAContextError(f"({v}, {w}) is not a context of this scenario")
        return self.canonical(v, w)

    def contexts_of(self, v: str) -> list[Pair]:
        return [c for c in self.contexts if v in c]

    def non_contexts(self) -> list[Pair]:
        return [p for p in combinations(self.variables, 2) if p not in self._context_set]

    def to_dict(self) -> dict:
        d = {"variables": list(self.variables), "contexts": [list(c) for c in self.contexts]}
        if self.parties is not None:
            d["parties"] = dict(self.parties)
        if self.joint_triples:
            d["joint_triples"] = [list(t) for t in self.joint_triples]
        return d

    @classmethod
    def from_dict(cls, d: Mapping) -> "Scenario":
        try:
            return cls(
                variables=tuple(d["variables"]),
                contexts=tuple(tuple(c) for c in d["contexts"]),
                parties=d.get("parties"),
                joint_triples=tuple(tuple(t) for t in d.get("joint_triples", ())),
            )
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, InvalidScenarioError):
                raise
            raise InvalidScenarioError(f"malformed scenario document: {exc}") from exc


def cycle_labels(n: int, prefix: str = "X") -> list[str]:
    return [f"{prefix}{i}" for i in range(1, n + 1)]


def make_cycle(n: int) -> Scenario:
    """X1..Xn with Xi compatible with X(i+1 mod n)."""
    if n < 3:
        raise InvalidScenarioError(f"a cycle needs at least 3 variables, got {n}")
    xs = cycle_labels(n)
    return Scenario(tuple(xs), tuple((xs[i], xs[(i + 1) % n]) for i in range(n)))


def make_bell_cycle(n: int) -> Scenario:
    """Even cycle split between Alice (odd labels) and Bob (even labels).

    Every Alice-Bob pair is a context, not only the cycle edges.
    """
    if n < 4 or n % 2:
        raise InvalidScenarioError(f"a Bell cycle needs an even n >= 4, got {n}")
    xs = cycle_labels(n)
    parties = {x: ("A" if i % 2 == 0 else "B") for i, x in enumerate(xs)}
    alice = [x for x in xs if parties[x] == "A"]
    bob = [x for x in xs if parties[x] == "B"]
    return Scenario(tuple(xs), tuple((a, b) for a in alice for b in bob), parties)


def _party_scenario(variables: Sequence[str], contexts: Iterable[Pair], parties: Mapping[str, str]) -> Scenario:
    # Triangles across laboratories are jointly measurable in a Bell-type setting.
    s = Scenario(tuple(variables), tuple(contexts), parties)
    return Scenario(s.variables, s.contexts, s.parties, tuple(triangles(s)))


def make_kcbs_chsh_hybrid() -> Scenario:
    """Alice's five cyclically compatible measurements plus Bob's two."""
    alice = cycle_labels(5, "A")
    bob = ["B1", "B2"]
    contexts = [(alice[i], alice[(i + 1) % 5]) for i in range(5)]
    contexts += [(a, b) for a in alice for b in bob]
    parties = {**{a: "A" for a in alice}, **{b: "B" for b in bob}}
    return _party_scenario(alice + bob, contexts, parties)


def make_tripartite_chsh() -> Scenario:
    """Three parties with two settings each; every cross-party pair is a context."""
    groups = {"A": ["A1", "A2"], "B": ["B1", "B2"], "C": ["C1", "C2"]}
    variables = [v for vs in groups.values() for v in vs]
    parties = {v: p for p, vs in groups.items() for v in vs}
    contexts = [(v, w) for v, w in combinations(variables, 2) if parties[v] != parties[w]]
    return _party_scenario(variables, contexts, parties)


def triangles(s: Scenario) -> list[Triple]:
    """All triples whose three pairs are contexts, in lexicographic index order."""
    out = []
    n = len(s.variables)
    adj = [[False] * n for _ in range(n)]
    for v, w in s.contexts:
        i, j = s.index(v), s.index(w)
        adj[i][j] = adj[j][i] = True
    for i in range(n):
        for j in range(i + 1, n):
            if not adj[i][j]:
                continue
            for k in range(j + 1, n):
                if adj[i][k] and adj[j][k]:
                    out.append((s.variables[i], s.variables[j], s.variables[k]))
    return out


NAMED_SCENARIOS = ("cycle:N", "bell:N", "hybrid", "tripartite")


def scenario_by_name(name: str) -> Scenario:
    """Resolve CLI names such as ``cycle:5``, ``bell:4``, ``hybrid``."""
    head, _, arg = name.partition(":")
    try:
        if head == "cycle":
            return make_cycle(int(arg))
        if head == "bell":
            return make_bell_cycle(int(arg))
    except ValueError as exc:
        if isinstance(exc, InvalidScenarioError):
            raise
        raise InvalidScenarioError(f"bad scenario size in {name!r}") from exc
    if name == "hybrid":
        return make_kcbs_chsh_hybrid()
    if name == "tripartite":
        return make_tripartite_chsh()
    raise InvalidScenarioError(f"unknown scenario {name!r}; expected one of {NAMED_SCENARIOS}")
