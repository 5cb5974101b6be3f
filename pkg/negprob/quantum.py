"""
Small-dimensional quantum models of multi-test experiments

A test is a projective measurement: outcome labels with orthogonal projectors
summing to the identity. Observables are turned into measurements by grouping
the eigenvectors numpy.linalg.eigh returns for each distinct eigenvalue.

build_observation_space is the product construction: one point per combination
of outcomes, test i partitioned by the cylinder sets {f : f(i) = r}.
"""

from dataclasses import dataclass
from functools import reduce
from itertools import product
from typing import Dict, Mapping, Sequence, Tuple, Union

import numpy as np

from .algebra import Event, ObservationSpace, Partition, PartialDistribution, SampleSpace
from .config import CONFIG
from .errors import DimensionError, NotProductSpaceError, SpaceTooLargeError, StateError
from .logs import timed
from .scalars import Field, FloatField
from .solver import SignedGrounding

EPS = 1e-12
PROJECTOR_TOL = 1e-10
EIGEN_GROUPING = 1e-9
MAX_DIMENSION = 8

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


@dataclass(frozen=True, eq=False)
class QState:
    amplitudes: np.ndarray

    def __post_init__(self):
        psi = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        object.__setattr__(self, "amplitudes", psi)
        if not 2 <= psi.size <= MAX_DIMENSION:
            raise StateError(f"state dimension {psi.size} outside 2..{MAX_DIMENSION}")
        norm = np.linalg.norm(psi)
        if abs(norm - 1) > EPS:
            raise StateError(f"state norm {norm!r} differs from 1")

    @classmethod
    def normalized(cls, amplitudes: Sequence[complex]) -> "QState":
        psi = np.asarray(amplitudes, dtype=complex).reshape(-1)
        norm = np.linalg.norm(psi)
        if norm == 0:
            raise StateError("zero vector is not a state")
        return cls(psi / norm)

    @property
    def dimension(self) -> int:
        return self.amplitudes.size


def outcome_label(value: float) -> str:
    if abs(value - 1) < EIGEN_GROUPING:
        return "+"
    if abs(value + 1) < EIGEN_GROUPING:
        return "-"
    if abs(value) < EIGEN_GROUPING:
        return "0"
    return f"{value:+.6g}"


@dataclass(frozen=True, eq=False)
class Measurement:
    """Outcome-labeled projector family"""

    outcomes: Tuple[str, ...]
    projectors: Tuple[np.ndarray, ...]

    def __post_init__(self):
        outcomes = tuple(self.outcomes)
        projectors = tuple(np.asarray(p, dtype=complex) for p in self.projectors)
        object.__setattr__(self, "outcomes", outcomes)
        object.__setattr__(self, "projectors", projectors)
        if len(outcomes) != len(projectors) or not outcomes:
            raise StateError(f"{len(outcomes)} outcomes for {len(projectors)} projectors")
        if len(set(outcomes)) != len(outcomes):
            raise StateError(f"duplicate outcome labels {outcomes}")
        dim = projectors[0].shape[0]
        for k, p in enumerate(projectors):
            if p.shape != (dim, dim):
                raise StateError(f"projector {outcomes[k]!r} has shape {p.shape}")
            if not np.allclose(p, p.conj().T, atol=PROJECTOR_TOL):
                raise StateError(f"projector {outcomes[k]!r} is not Hermitian")
            if not np.allclose(p @ p, p, atol=PROJECTOR_TOL):
                raise StateError(f"projector {outcomes[k]!r} is not idempotent")
            for q in projectors[k + 1:]:
                if not np.allclose(p @ q, 0, atol=PROJECTOR_TOL):
                    raise StateError(f"projectors of {outcomes} are not orthogonal")
        if not np.allclose(sum(projectors), np.eye(dim), atol=PROJECTOR_TOL):
            raise StateError(f"projectors of {outcomes} do not sum to the identity")

    @property
    def dimension(self) -> int:
        return self.projectors[0].shape[0]

    def relabel(self, mapping: Mapping[str, str]) -> "Measurement":
        return Measurement(tuple(mapping.get(o, o) for o in self.outcomes), self.projectors)


@dataclass(frozen=True, eq=False)
class Observable:
    """Hermitian matrix with its eigensystem as (eigenvalue, projector) pairs"""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        object.__setattr__(self, "matrix", m)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise StateError(f"observable must be a square matrix, got shape {m.shape}")
        if not np.allclose(m, m.conj().T, atol=EPS):
            raise StateError("observable is not Hermitian")

    @property
    def eigensystem(self) -> Tuple[Tuple[float, np.ndarray], ...]:
        """Distinct eigenvalues in descending order with their projectors"""
        values, vectors = np.linalg.eigh(self.matrix)
        groups = []
        for k in np.argsort(values)[::-1]:
            if groups and abs(groups[-1][0] - values[k]) < EIGEN_GROUPING:
                groups[-1][1].append(k)
            else:
                groups.append((float(values[k]), [k]))
        system = []
        for value, cols in groups:
            v = vectors[:, cols]
            system.append((value, v @ v.conj().T))
        return tuple(system)

    def measurement(self) -> Measurement:
        system = self.eigensystem
        return Measurement(tuple(outcome_label(v) for v, _ in system), tuple(p for _, p in system))


def polarizer(theta: float) -> Observable:
    """+1 for light passing a polarizer at angle theta, -1 otherwise"""
    return Observable(np.cos(2 * theta) * PAULI_Z + np.sin(2 * theta) * PAULI_X)


def tensor(*measurements: Measurement) -> Measurement:
    """Joint measurement on a product system; outcome labels are concatenated"""
    outcomes, projectors = [], []
    for combo in product(*(zip(m.outcomes, m.projectors) for m in measurements)):
        outcomes.append("".join(o for o, _ in combo))
        projectors.append(reduce(np.kron, (p for _, p in combo)))
    return Measurement(tuple(outcomes), tuple(projectors))


Test = Union[Measurement, Observable]


def _as_measurement(test: Test) -> Measurement:
    return test.measurement() if isinstance(test, Observable) else test


def born_probabilities(state: QState, obs: Test) -> Dict[str, float]:
    """Probability ⟨ψ|Π_r|ψ⟩ of every outcome r"""
    m = _as_measurement(obs)
    if m.dimension != state.dimension:
        raise DimensionError(f"observable of dimension {m.dimension} on a state of dimension {state.dimension}")
    psi = state.amplitudes
    return {o: float(np.real(psi.conj() @ p @ psi)) for o, p in zip(m.outcomes, m.projectors)}


def expectation(state: QState, obs: Observable) -> float:
    psi = state.amplitudes
    return float(np.real(psi.conj() @ obs.matrix @ psi))


@dataclass(frozen=True, eq=False)
class MultiTestExperiment:
    state: QState
    tests: Tuple[Tuple[str, Measurement], ...]

    def __post_init__(self):
        tests = tuple((name, _as_measurement(t)) for name, t in self.tests)
        object.__setattr__(self, "tests", tests)
        if not tests:
            raise StateError("experiment needs at least one test")
        for name, m in tests:
            if m.dimension != self.state.dimension:
                raise DimensionError(f"test {name!r} has dimension {m.dimension}, state {self.state.dimension}")


def _point_label(outcomes: Sequence[str], compact: bool) -> str:
    return "".join(outcomes) if compact else ",".join(outcomes)


def build_observation_space(exp: MultiTestExperiment, field: Field = None) -> ObservationSpace:
    """Product construction Ω = ∏ Out(M_i) with cylinder-event atoms"""
    field = field or FloatField(CONFIG["float_tolerance"])
    sizes = [len(m.outcomes) for _, m in exp.tests]
    total = int(np.prod(sizes))
    if total > CONFIG["max_points"]:
        raise SpaceTooLargeError(f"product space of {total} points exceeds the cap of {CONFIG['max_points']}")

    with timed("model", tests=len(exp.tests), points=total):
        compact = all(len(o) == 1 for _, m in exp.tests for o in m.outcomes)
        combos = list(product(*(range(s) for s in sizes)))
        labels = [
            _point_label([m.outcomes[k] for (_, m), k in zip(exp.tests, combo)], compact) for combo in combos
        ]
        space = SampleSpace(tuple(labels))
        tests = []
        for i, (name, m) in enumerate(exp.tests):
            probs = born_probabilities(exp.state, m)
            atoms = [[p for p, combo in enumerate(combos) if combo[i] == r] for r in range(sizes[i])]
            values = [max(probs[o], 0.0) if probs[o] > -EPS else probs[o] for o in m.outcomes]
            tests.append(PartialDistribution(name, Partition.of(atoms, total), tuple(values), field))
        return ObservationSpace(space, tuple(tests), field)


def product_grounding(os: ObservationSpace) -> SignedGrounding:
    """Product measure: each point gets the product of its atoms' probabilities"""
    n = os.space.size
    f = os.field
    sizes = [len(t.partition.atoms) for t in os.tests]
    if int(np.prod(sizes)) != n:
        raise NotProductSpaceError(f"{n} points but the tests have {sizes} atoms")
    seen = set()
    values = []
    for i in range(n):
        coords = tuple(t.partition.atom_of(i) for t in os.tests)
        if coords in seen:
            raise NotProductSpaceError(f"point {os.space.labels[i]!r} shares its atoms with another point")
        seen.add(coords)
        value = f.one()
        for t, k in zip(os.tests, coords):
            value = value * t.probs[k]
        values.append(value)
    atoms = tuple(Event.of([i], n) for i in range(n))
    return SignedGrounding(os.space.labels, tuple(values), f, atoms)


def feynman3_canonical(x, y, z) -> Tuple:
    """Product grounding f = (1±x)/2 (1±y)/2 (1±z)/2 on the points −−− .. +++

    Accepts floats or exact rationals; the result has the same type.
    """
    for name, v in (("x", x), ("y", y), ("z", z)):
        if abs(v) > 1:
            raise StateError(f"expectation {name} = {v} outside [-1, 1]")
    hx, hy, hz = [((1 - v) / 2, (1 + v) / 2) for v in (x, y, z)]
    return tuple(hx[a] * hy[b] * hz[c] for a, b, c in product((0, 1), repeat=3))
