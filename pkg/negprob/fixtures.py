"""
Exact observation spaces for the five worked experiments

    piponi     boxes with two bits, three tests (left, right, equal)
    feynman2   one qubit, tests Z and X, state given by amplitude literals
    feynman3   one qubit, tests X, Y and Z
    schneider  polarizer pairs AB, BC, AC on (|00> + |11>)/sqrt2, over Q(sqrt 2)
    hardy      two qubits in (|01> + |10> - |00>)/sqrt3, tests ZZ, ZX, XZ, XX

Probabilities are transcribed exactly. quantum_experiment builds the matching
float experiment so the two paths can be cross-checked.
"""

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .algebra import ObservationSpace, Partition, PartialDistribution, SampleSpace
from .errors import ParseError, StateError, UnknownFixtureError
from .logs import log_event
from .quantum import (
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    MultiTestExperiment,
    Observable,
    QState,
    feynman3_canonical,
    polarizer,
    tensor,
)
from .scalars import QuadExt, QuadraticField, RationalField, parse_rational

FIXTURES = ("piponi", "feynman2", "feynman3", "schneider", "hardy")

DEFAULT_STATE = ("1", "0")

_AMPLITUDE_RE = re.compile(r"^(?P<re>[+-]?\d+(?:/\d+)?)(?:(?P<sign>[+-])(?P<im>\d+(?:/\d+)?)?i)?$")
_IMAGINARY_RE = re.compile(r"^(?P<sign>[+-]?)(?P<im>\d+(?:/\d+)?)?i$")


@dataclass(frozen=True)
class Fixture:
    name: str
    space: ObservationSpace
    metadata: Dict[str, Any] = field(default_factory=dict)


def parse_amplitude(text: str) -> Tuple[Fraction, Fraction]:
    """Gaussian rational literal "re", "re+im i", "re-im i" or "im i" """
    token = "".join(str(text).split())
    match = _IMAGINARY_RE.match(token)
    if match:
        im_part = Fraction(match.group("im") or 1)
        return Fraction(0), -im_part if match.group("sign") == "-" else im_part
    match = _AMPLITUDE_RE.match(token)
    if not match:
        raise ParseError(f"invalid amplitude literal {text!r}")
    im_part = Fraction(0)
    if match.group("sign"):
        im_part = Fraction(match.group("im") or 1)
        if match.group("sign") == "-":
            im_part = -im_part
    return Fraction(match.group("re")), im_part


def qubit_expectations(state: Sequence[str] = DEFAULT_STATE) -> Dict[str, Fraction]:
    """Exact ⟨Z⟩, ⟨X⟩, ⟨Y⟩ of the qubit a|0> + b|1>, normalized exactly"""
    if len(state) != 2:
        raise StateError(f"qubit state needs 2 amplitudes, got {len(state)}")
    (ar, ai), (br, bi) = (parse_amplitude(a) for a in state)
    norm = ar * ar + ai * ai + br * br + bi * bi
    if norm == 0:
        raise StateError("zero vector is not a state")
    return {
        "z": (ar * ar + ai * ai - br * br - bi * bi) / norm,
        "x": 2 * (ar * br + ai * bi) / norm,
        "y": 2 * (ar * bi - ai * br) / norm,
    }


def _qubit_state(state: Sequence[str]) -> QState:
    amplitudes = [complex(float(r), float(i)) for r, i in (parse_amplitude(a) for a in state)]
    return QState.normalized(amplitudes)


def _cylinder_test(name, labels, positions, probs, f) -> PartialDistribution:
    """Test observing the characters at the given positions of each point label"""
    alphabet = list(dict.fromkeys(label[positions[0]] for label in labels))
    values = list(product(alphabet, repeat=len(positions)))
    atoms = [[k for k, label in enumerate(labels) if tuple(label[p] for p in positions) == v] for v in values]
    return PartialDistribution(name, Partition.of(atoms, len(labels)), tuple(probs), f)


def feynman2_bounds(z, x) -> Tuple[Any, Any]:
    """Closed-form range of t keeping the two-test grounding nonnegative"""
    return max(-1 - z - x, -1 + z + x), min(1 + z - x, 1 - z + x)


def feynman_grounding(z, x, y) -> Tuple:
    """The two-test grounding at t = ⟨Y⟩ on the points ++, +-, -+, --"""
    return (
        (1 + z + x + y) / 4,
        (1 + z - x - y) / 4,
        (1 - z + x - y) / 4,
        (1 - z - x + y) / 4,
    )


def _piponi() -> Fixture:
    f = RationalField()
    labels = ("00", "01", "10", "11")
    tests = (
        PartialDistribution("left", Partition.of([[0, 1], [2, 3]], 4), (0, 1), f),
        PartialDistribution("right", Partition.of([[0, 2], [1, 3]], 4), (0, 1), f),
        PartialDistribution("equal", Partition.of([[0, 3], [1, 2]], 4), (0, 1), f),
    )
    half = Fraction(1, 2)
    metadata = {
        "grounding": (-half, half, half, half),
        "random_variables": {
            "l": {"00": 0, "01": 0, "10": 1, "11": 1},
            "r": {"00": 0, "01": 1, "10": 0, "11": 1},
            "l+r": {"00": 0, "01": 1, "10": 1, "11": 2},
        },
    }
    return Fixture("piponi", ObservationSpace(SampleSpace(labels), tests, f), metadata)


def _feynman2(state: Sequence[str]) -> Fixture:
    f = RationalField()
    e = qubit_expectations(state)
    z, x, y = e["z"], e["x"], e["y"]
    labels = ("++", "+-", "-+", "--")
    tests = (
        PartialDistribution("Z", Partition.of([[0, 1], [2, 3]], 4), ((1 + z) / 2, (1 - z) / 2), f),
        PartialDistribution("X", Partition.of([[0, 2], [1, 3]], 4), ((1 + x) / 2, (1 - x) / 2), f),
    )
    quarter = Fraction(1, 4)
    metadata = {
        "expectations": e,
        "direction": (quarter, -quarter, -quarter, quarter),
        "bounds": feynman2_bounds(z, x),
        "feynman_grounding": feynman_grounding(z, x, y),
        "outcomes": {"Z": ("+", "-"), "X": ("+", "-")},
    }
    return Fixture("feynman2", ObservationSpace(SampleSpace(labels), tests, f), metadata)


def _feynman3(state: Sequence[str]) -> Fixture:
    f = RationalField()
    e = qubit_expectations(state)
    labels = tuple("".join(p) for p in product("-+", repeat=3))
    tests = tuple(
        _cylinder_test(name, labels, (k,), ((1 - e[name.lower()]) / 2, (1 + e[name.lower()]) / 2), f)
        for k, name in enumerate("XYZ")
    )
    metadata = {
        "expectations": e,
        "canonical": feynman3_canonical(e["x"], e["y"], e["z"]),
        "outcomes": {name: ("-", "+") for name in "XYZ"},
    }
    return Fixture("feynman3", ObservationSpace(SampleSpace(labels), tests, f), metadata)


def _schneider() -> Fixture:
    f = QuadraticField(2)
    r8 = QuadExt(0, Fraction(1, 8), 2)
    quarter = Fraction(1, 4)
    labels = tuple("".join(p) for p in product("-+", repeat=3))
    same = {"AB": quarter, "BC": quarter + r8, "AC": quarter - r8}
    differ = {k: Fraction(1, 2) - v for k, v in same.items()}
    tests = []
    for name, positions in (("AB", (0, 1)), ("BC", (1, 2)), ("AC", (0, 2))):
        probs = (same[name], differ[name], differ[name], same[name])
        tests.append(_cylinder_test(name, labels, positions, probs, f))
    metadata = {
        "particular": (0, quarter, quarter - r8, r8, quarter + r8, -r8, 0, quarter),
        "direction": (1, -1, -1, 1, -1, 1, 1, -1),
        "negative_event": ("-+-", "+-+"),
        "negative_value": quarter - QuadExt(0, Fraction(1, 4), 2),
        "angles": {"A": 0.0, "B": math.pi / 4, "C": 3 * math.pi / 8},
        "outcomes": {name: ("--", "-+", "+-", "++") for name in ("AB", "BC", "AC")},
    }
    return Fixture("schneider", ObservationSpace(SampleSpace(labels), tuple(tests), f), metadata)


HARDY_POSITIONS = {"ZZ": (0, 2), "ZX": (0, 3), "XZ": (1, 2), "XX": (1, 3)}
HARDY_PROBS = {
    "ZZ": ("1/3", "1/3", "1/3", "0"),
    "ZX": ("0", "2/3", "1/6", "1/6"),
    "XZ": ("0", "1/6", "2/3", "1/6"),
    "XX": ("1/12", "1/12", "1/12", "3/4"),
}
HARDY_SYMMETRY = (
    ("0001", "0100"),
    ("0010", "1000"),
    ("0011", "1100"),
    ("0110", "1001"),
    ("0111", "1101"),
    ("1011", "1110"),
)
# symmetric family in the variables 12*P(v) for v = 0, 1, 2, 3, 5, 6, 7, 10, 11, 15
_HARDY_REDUCED = (0, 1, 2, 3, 5, 6, 7, 10, 11, 15)
_HARDY_PARTICULAR = (-3, -1, 2, 0, 9, 2, 0, 0, 0, 0)
_HARDY_DIRECTIONS = (
    (2, -1, -1, 1, 0, 0, 0, 0, 0, 0),
    (0, 1, 0, 0, -2, -1, 1, 0, 0, 0),
    (0, 0, 1, 0, 0, -1, 0, -2, 1, 0),
    (-1, 1, 1, 0, -1, -1, 0, -1, 0, 1),
)


def _hardy_expand(reduced: Sequence[int]) -> Tuple[Fraction, ...]:
    """Symmetric 16-point vector from the ten free values, divided by 12"""
    values = dict(zip(_HARDY_REDUCED, reduced))
    for a, b in HARDY_SYMMETRY:
        values[int(b, 2)] = values[int(a, 2)]
    return tuple(Fraction(values[i], 12) for i in range(16))


def _hardy() -> Fixture:
    f = RationalField()
    labels = tuple(format(i, "04b") for i in range(16))
    tests = tuple(
        _cylinder_test(name, labels, HARDY_POSITIONS[name], [parse_rational(p) for p in HARDY_PROBS[name]], f)
        for name in ("ZZ", "ZX", "XZ", "XX")
    )
    metadata = {
        "symmetry": HARDY_SYMMETRY,
        "automorphism": {label: label[2:] + label[:2] for label in labels},
        "particular": _hardy_expand(_HARDY_PARTICULAR),
        "directions": tuple(_hardy_expand(d) for d in _HARDY_DIRECTIONS),
        "non_idle": ("0011", "0101", "0111", "1100", "1101"),
        "outcomes": {name: ("00", "01", "10", "11") for name in HARDY_POSITIONS},
    }
    return Fixture("hardy", ObservationSpace(SampleSpace(labels), tests, f), metadata)


def fixture(name: str, state: Optional[Sequence[str]] = None) -> Fixture:
    """Exact observation space of a worked experiment with its expected results"""
    log_event("fixture", name=name, state=list(state) if state else None)
    if name == "piponi":
        return _piponi()
    if name == "feynman2":
        return _feynman2(state or DEFAULT_STATE)
    if name == "feynman3":
        return _feynman3(state or DEFAULT_STATE)
    if name == "schneider":
        return _schneider()
    if name == "hardy":
        return _hardy()
    raise UnknownFixtureError(f"unknown fixture {name!r}; choose from {', '.join(FIXTURES)}")


def quantum_experiment(name: str, state: Optional[Sequence[str]] = None) -> MultiTestExperiment:
    """Float quantum experiment whose Born probabilities the fixture transcribes"""
    if name in ("feynman2", "feynman3"):
        psi = _qubit_state(state or DEFAULT_STATE)
        paulis = {"X": PAULI_X, "Y": PAULI_Y, "Z": PAULI_Z}
        names = ("Z", "X") if name == "feynman2" else ("X", "Y", "Z")
        return MultiTestExperiment(psi, tuple((n, Observable(paulis[n])) for n in names))
    if name == "schneider":
        angles = _schneider().metadata["angles"]
        psi = QState.normalized([1, 0, 0, 1])
        tests = []
        for pair in ("AB", "BC", "AC"):
            left, right = (polarizer(angles[c]).measurement() for c in pair)
            tests.append((pair, tensor(left, right)))
        return MultiTestExperiment(psi, tuple(tests))
    if name == "hardy":
        psi = QState.normalized([-1, 1, 1, 0])
        bits = {"+": "0", "-": "1"}
        single = {"Z": Observable(PAULI_Z).measurement().relabel(bits), "X": Observable(PAULI_X).measurement().relabel(bits)}
        return MultiTestExperiment(psi, tuple((n, tensor(single[n[0]], single[n[1]])) for n in HARDY_POSITIONS))
    if name == "piponi":
        raise StateError("piponi has no quantum construction")
    raise UnknownFixtureError(f"unknown fixture {name!r}; choose from {', '.join(FIXTURES)}")


def atom_outcomes(fx: Fixture) -> List[Tuple[str, str, Any]]:
    """(test, outcome label, exact probability) for every atom of a fixture"""
    rows = []
    for test in fx.space.tests:
        for label, p in zip(fx.metadata["outcomes"][test.name], test.probs):
            rows.append((test.name, label, p))
    return rows
