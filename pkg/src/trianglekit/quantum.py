"""Quantum behaviors for the CHSH square and the KCBS pentagon.

Joint tables of commuting observables are expectations of products of their
eigenprojectors.  Commutation is checked, never assumed.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
from scipy.optimize import minimize

from .behavior import Behavior, JointTable
from .errors import IncompatibilityError
from .inequality import evaluate
from .scenario import Scenario, make_bell_cycle, make_cycle

log = logging.getLogger(__name__)

HERMITIAN_TOL = 1e-12
COMMUTE_TOL = 1e-9
CLAMP_TOL = 1e-10

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
SINGLET = np.array([0, 1, -1, 0], dtype=complex) / math.sqrt(2)

# Pentagram rays: consecutive rays 144 degrees apart in azimuth are orthogonal at this polar angle.
KCBS_THETA = math.acos(math.sqrt(math.cos(math.pi / 5) / (1 + math.cos(math.pi / 5))))
KCBS_STEP = 4 * math.pi / 5
# Outcome relabeling that turns the all-anticorrelated KCBS form into the single-minus cycle form.
GNC5_SIGNS = (1, 1, -1, 1, -1)


def normalized(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex).ravel()
    norm = np.linalg.norm(psi)
    if norm == 0:
        raise ValueError("zero state vector")
    return psi / norm


@dataclass(frozen=True)
class Observable:
    """A +-1 valued observable with its +1 eigenprojector."""

    matrix: np.ndarray
    plus: np.ndarray = field(repr=False)

    @classmethod
    def from_matrix(cls, m) -> "Observable":
        m = np.asarray(m, dtype=complex)
        if np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL:
            raise ValueError("observable is not Hermitian")
        plus = (np.eye(m.shape[0]) + m) / 2
        if np.max(np.abs(plus @ plus - plus)) > HERMITIAN_TOL:
            raise ValueError("observable does not square to identity")
        return cls(m, plus)

    @property
    def minus(self) -> np.ndarray:
        return np.eye(self.matrix.shape[0]) - self.plus

    def projector(self, outcome: int) -> np.ndarray:
        return self.plus if outcome == 1 else self.minus


def commutator_norm(a: Observable, b: Observable) -> float:
    return float(np.linalg.norm(a.matrix @ b.matrix - b.matrix @ a.matrix, 2))


def joint_table(a: Observable, b: Observable, psi: np.ndarray) -> JointTable:
    if commutator_norm(a, b) > COMMUTE_TOL:
        raise IncompatibilityError("observables in a context do not commute")
    raw = np.empty((2, 2), dtype=complex)
    for i, x in enumerate((1, -1)):
        for j, y in enumerate((1, -1)):
            raw[i, j] = psi.conj() @ a.projector(x) @ b.projector(y) @ psi
    clamp = max(float(np.max(np.abs(raw.imag))), float(np.max(-raw.real, initial=0.0)))
    if clamp > CLAMP_TOL:
        raise IncompatibilityError(f"joint table leaves the simplex by {clamp:.2e}")
    if clamp > 0:
        log.debug("clamped joint table by %.2e", clamp)
    return JointTable.from_array(np.maximum(raw.real, 0.0))


def quantum_behavior(s: Scenario, observables: Mapping[str, Observable], psi) -> Behavior:
    psi = normalized(psi)
    return Behavior(s, {(v, w): joint_table(observables[v], observables[w], psi) for v, w in s.contexts})


def spin_observable(angle: float) -> np.ndarray:
    """cos(angle) Z + sin(angle) X."""
    return math.cos(angle) * PAULI_Z + math.sin(angle) * PAULI_X


def chsh_quantum_behavior(a1: float, a2: float, b1: float, b2: float) -> Behavior:
    """Singlet behavior on the Bell square: Alice X1, X3 and Bob X2, X4."""
    eye = np.eye(2)
    obs = {
        "X1": Observable.from_matrix(np.kron(spin_observable(a1), eye)),
        "X3": Observable.from_matrix(np.kron(spin_observable(a2), eye)),
        "X2": Observable.from_matrix(np.kron(eye, spin_observable(b1))),
        "X4": Observable.from_matrix(np.kron(eye, spin_observable(b2))),
    }
    b = quantum_behavior(make_bell_cycle(4), obs, SINGLET)
    angles = {"X1": a1, "X3": a2, "X2": b1, "X4": b2}
    for (v, w), t in b.tables.items():
        closed = -math.cos(angles[v] - angles[w])
        if abs(t.correlator() - closed) > 1e-10:
            raise AssertionError(f"singlet correlator on {v}{w} disagrees with -cos form")
    return b


CHSH_OPTIMAL_ANGLES = (0.0, math.pi / 2, 7 * math.pi / 4, 5 * math.pi / 4)


def kcbs_rays(theta: float = KCBS_THETA, phase_offsets: Sequence[float] | None = None) -> np.ndarray:
    offsets = np.zeros(5) if phase_offsets is None else np.asarray(phase_offsets, dtype=float)
    if offsets.size == 1:
        offsets = np.full(5, float(offsets))
    phi = KCBS_STEP * np.arange(5) + offsets
    st, ct = math.sin(theta), math.cos(theta)
    return np.stack([st * np.cos(phi), st * np.sin(phi), np.full(5, ct)], axis=1)


def kcbs_quantum_behavior(
    theta: float = KCBS_THETA,
    phase_offsets: Sequence[float] | float | None = None,
    state=None,
    signs: Sequence[int] | None = None,
) -> Behavior:
    """Qutrit behavior on the 5-cycle from pentagram rays.

    X_i = s_i (1 - 2 |v_i><v_i|).  The default state points along the
    pentagram's symmetry axis and the default signs are all +1.
    """
    rays = kcbs_rays(theta, phase_offsets)
    for i in range(5):
        overlap = abs(rays[i] @ rays[(i + 1) % 5])
        if overlap > COMMUTE_TOL:
            raise IncompatibilityError(f"rays {i + 1} and {(i + 1) % 5 + 1} overlap by {overlap:.2e}")
    signs = (1,) * 5 if signs is None else tuple(signs)
    psi = np.array([0.0, 0.0, 1.0]) if state is None else state
    obs = {}
    for i, v in enumerate(rays):
        m = np.eye(3) - 2 * np.outer(v, v)
        obs[f"X{i + 1}"] = Observable.from_matrix(signs[i] * m)
    return quantum_behavior(make_cycle(5), obs, psi)


def _unit(polar: float, azimuth: float) -> np.ndarray:
    return np.array([math.sin(polar) * math.cos(azimuth), math.sin(polar) * math.sin(azimuth), math.cos(polar)])


def _chsh_family(p):
    return chsh_quantum_behavior(*p)


def _kcbs_family(signs):
    def build(p):
        polar, azimuth, rotation = p
        return kcbs_quantum_behavior(phase_offsets=rotation, state=_unit(polar, azimuth), signs=signs)

    return build


# target -> (number of parameters, behavior builder)
FAMILIES = {
    "gnc:4": (4, _chsh_family),
    "gne:4": (4, _chsh_family),
    "ch": (4, _chsh_family),
    "gnc:5": (3, _kcbs_family(GNC5_SIGNS)),
    "gne:5": (3, _kcbs_family(None)),
    "excl:5": (3, _kcbs_family(None)),
}


@dataclass
class QuantumOptimum:
    target: str
    value: float
    parameters: list[float]
    behavior: Behavior
    restart_values: list[float]
    seed: int


def optimize_quantum_value(target: str, restarts: int = 20, seed: int = 0, tol: float = 1e-8) -> QuantumOptimum:
    """Multistart Nelder-Mead over a family's angles; the result is a lower bound on the quantum maximum."""
    if target not in FAMILIES:
        raise ValueError(f"unknown quantum target {target!r}; expected one of {sorted(FAMILIES)}")
    if restarts < 1:
        raise ValueError("restarts must be at least 1")
    dim, build = FAMILIES[target]
    rng = np.random.default_rng(seed)
    starts = rng.uniform(0.0, 2 * math.pi, size=(restarts, dim))

    def loss(p):
        return -evaluate(build(np.mod(p, 2 * math.pi)), target).value

    best = None
    values = []
    for x0 in starts:
        res = minimize(loss, x0, method="Nelder-Mead", options={"xatol": tol, "fatol": tol, "maxiter": 4000 * dim})
        val = -float(res.fun)
        values.append(val)
        # strict improvement keeps the lowest restart index on ties
        if best is None or val > best[0]:
            best = (val, np.mod(res.x, 2 * math.pi))
    value, params = best
    return QuantumOptimum(target, value, [float(x) for x in params], build(params), values, seed)
