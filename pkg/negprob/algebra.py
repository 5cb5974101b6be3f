"""
Finite sample spaces, events, partitions and observation spaces

Events are canonical sorted index tuples over a SampleSpace. A partition stands
for the Boolean algebra its atoms generate; a PartialDistribution stores only atom
probabilities, every other event of its algebra gets the derived sum.
"""

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Sequence, Tuple

from .config import CONFIG
from .errors import DimensionError, ParseError, SpaceTooLargeError
from .logs import timed
from .scalars import Field, RationalField


@dataclass(frozen=True)
class SampleSpace:
    labels: Tuple[str, ...]

    def __post_init__(self):
        labels = tuple(self.labels)
        object.__setattr__(self, "labels", labels)
        if not labels:
            raise DimensionError("sample space needs at least one point")
        if len(set(labels)) != len(labels):
            dupes = sorted({l for l in labels if labels.count(l) > 1})
            raise ParseError(f"duplicate point labels {dupes}")
        if len(labels) > CONFIG["max_points"]:
            raise SpaceTooLargeError(f"{len(labels)} points exceeds the cap of {CONFIG['max_points']}")

    @property
    def size(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise ParseError(f"unknown point {label!r}")

    def event(self, labels: Iterable[str]) -> "Event":
        return Event.of((self.index(l) for l in labels), self.size)

    def full(self) -> "Event":
        return Event.of(range(self.size), self.size)

    def names(self, e: "Event") -> List[str]:
        return [self.labels[i] for i in e]


@dataclass(frozen=True)
class Event:
    """Subset of a sample space of the given size"""

    size: int
    indices: Tuple[int, ...] = ()

    @classmethod
    def of(cls, indices: Iterable[int], size: int) -> "Event":
        members = tuple(sorted(set(indices)))
        for i in members:
            if not 0 <= i < size:
                raise DimensionError(f"event index {i} out of range [0, {size})")
        return cls(size, members)

    @property
    def mask(self) -> int:
        m = 0
        for i in self.indices:
            m |= 1 << i
        return m

    def _check(self, other: "Event") -> None:
        if other.size != self.size:
            raise DimensionError(f"events over spaces of size {self.size} and {other.size}")

    def __or__(self, other: "Event") -> "Event":
        self._check(other)
        return Event.of(self.indices + other.indices, self.size)

    def __and__(self, other: "Event") -> "Event":
        self._check(other)
        shared = set(other.indices)
        return Event(self.size, tuple(i for i in self.indices if i in shared))

    def issubset(self, other: "Event") -> bool:
        self._check(other)
        return self.mask & ~other.mask == 0

    def isdisjoint(self, other: "Event") -> bool:
        self._check(other)
        return self.mask & other.mask == 0

    def __iter__(self):
        return iter(self.indices)

    def __len__(self):
        return len(self.indices)

    def __contains__(self, i):
        return i in self.indices

    def __bool__(self):
        return bool(self.indices)


@dataclass(frozen=True)
class Partition:
    atoms: Tuple[Event, ...]

    def __post_init__(self):
        atoms = tuple(self.atoms)
        object.__setattr__(self, "atoms", atoms)
        if not atoms:
            raise DimensionError("partition needs at least one atom")
        n = atoms[0].size
        covered = 0
        for atom in atoms:
            if atom.size != n:
                raise DimensionError("partition atoms over different spaces")
            if not atom:
                raise DimensionError("partition atoms must be nonempty")
            if covered & atom.mask:
                raise DimensionError(f"partition atoms overlap at {atom.indices}")
            covered |= atom.mask
        if covered != (1 << n) - 1:
            missing = [i for i in range(n) if not covered >> i & 1]
            raise DimensionError(f"partition does not cover points {missing}")

    @classmethod
    def of(cls, blocks: Iterable[Iterable[int]], size: int) -> "Partition":
        return cls(tuple(Event.of(b, size) for b in blocks))

    @classmethod
    def singletons(cls, size: int) -> "Partition":
        return cls.of(([i] for i in range(size)), size)

    @property
    def size(self) -> int:
        return self.atoms[0].size

    def canonical(self) -> "Partition":
        """Same partition with atoms ordered by their smallest point"""
        return Partition(tuple(sorted(self.atoms, key=lambda a: a.indices[0])))

    def same_as(self, other: "Partition") -> bool:
        return self.canonical() == other.canonical()

    def atom_of(self, i: int) -> int:
        for k, atom in enumerate(self.atoms):
            if i in atom:
                return k
        raise DimensionError(f"point {i} out of range")


@dataclass(frozen=True)
class PartialDistribution:
    """A test: probabilities on the atoms of one partition"""

    name: str
    partition: Partition
    probs: Tuple
    field: Field = field(default_factory=RationalField)

    def __post_init__(self):
        probs = tuple(self.field.coerce(p) for p in self.probs)
        object.__setattr__(self, "probs", probs)
        if len(probs) != len(self.partition.atoms):
            raise DimensionError(
                f"test {self.name!r} has {len(probs)} probabilities for {len(self.partition.atoms)} atoms"
            )
        for k, p in enumerate(probs):
            if self.field.sign(p) < 0:
                raise ParseError(f"test {self.name!r} atom {k} has negative probability {self.field.format(p)}")
        total = sum(probs, self.field.zero())
        if not self.field.is_zero(total - self.field.one()):
            raise ParseError(f"test {self.name!r} probabilities sum to {self.field.format(total)}, not 1")

    def probability(self, e: Event):
        """Derived probability of an event of this test's algebra"""
        if not event_in_algebra(self.partition, e):
            raise DimensionError(f"event {e.indices} is not in the algebra of test {self.name!r}")
        total = self.field.zero()
        for atom, p in zip(self.partition.atoms, self.probs):
            if atom.issubset(e):
                total = total + p
        return total


@dataclass(frozen=True)
class ObservationSpace:
    space: SampleSpace
    tests: Tuple[PartialDistribution, ...]
    field: Field = field(default_factory=RationalField)

    def __post_init__(self):
        tests = tuple(self.tests)
        object.__setattr__(self, "tests", tests)
        names = [t.name for t in tests]
        if len(set(names)) != len(names):
            raise ParseError(f"duplicate test names in {names}")
        for t in tests:
            if t.partition.size != self.space.size:
                raise DimensionError(f"test {t.name!r} is not over the {self.space.size}-point space")
            if t.field != self.field:
                raise ParseError(f"test {t.name!r} is over {t.field.name}, space is over {self.field.name}")

    def test(self, name: str) -> PartialDistribution:
        for t in self.tests:
            if t.name == name:
                return t
        raise ParseError(f"unknown test {name!r}")

    def atom_value(self, test: str, labels: Sequence[str]):
        """Probability a test assigns to the event named by point labels"""
        return self.test(test).probability(self.space.event(labels))


@dataclass(frozen=True)
class Violation:
    first: str
    second: str
    atom: Event
    first_value: object
    second_value: object


@dataclass(frozen=True)
class ConsistencyReport:
    violations: Tuple[Violation, ...] = ()

    @property
    def consistent(self) -> bool:
        return not self.violations


def event_in_algebra(partition: Partition, e: Event) -> bool:
    """True iff e is a union of atoms of the partition"""
    if e.size != partition.size:
        raise DimensionError(f"event over {e.size} points, partition over {partition.size}")
    return all(atom.issubset(e) or atom.isdisjoint(e) for atom in partition.atoms)


def intersection_algebra(p1: Partition, p2: Partition) -> Partition:
    """Partition generating the intersection of the two generated algebras

    Atoms are the connected components of the overlap graph whose nodes are the
    atoms of p1 and p2, linked when they intersect.
    """
    if p1.size != p2.size:
        raise DimensionError(f"partitions over {p1.size} and {p2.size} points")
    n1 = len(p1.atoms)
    parent = list(range(n1 + len(p2.atoms)))

    def find(k):
        while parent[k] != k:
            parent[k] = parent[parent[k]]
            k = parent[k]
        return k

    for i, a in enumerate(p1.atoms):
        for j, b in enumerate(p2.atoms):
            if not a.isdisjoint(b):
                parent[find(i)] = find(n1 + j)

    components: Dict[int, List[int]] = {}
    for i, a in enumerate(p1.atoms):
        components.setdefault(find(i), []).extend(a.indices)
    return Partition.of(components.values(), p1.size).canonical()


def check_consistency(os: ObservationSpace) -> ConsistencyReport:
    """Every pair of tests must agree on the atoms of their shared algebra

    The last atom of each shared algebra is skipped: both tests give the whole
    space mass 1, so it agrees once the others do.
    """
    violations = []
    with timed("consistency", points=os.space.size, tests=len(os.tests)) as outcome:
        for i, ti in enumerate(os.tests):
            for tj in os.tests[i + 1:]:
                for atom in intersection_algebra(ti.partition, tj.partition).atoms[:-1]:
                    vi, vj = ti.probability(atom), tj.probability(atom)
                    if not os.field.is_zero(vi - vj):
                        violations.append(Violation(ti.name, tj.name, atom, vi, vj))
        outcome["violations"] = len(violations)
    return ConsistencyReport(tuple(violations))


def common_refinement(os: ObservationSpace) -> Partition:
    """Atoms of the algebra generated by all observable events"""
    signature: Dict[tuple, List[int]] = {}
    for i in range(os.space.size):
        key = tuple(t.partition.atom_of(i) for t in os.tests)
        signature.setdefault(key, []).append(i)
    return Partition.of(signature.values(), os.space.size).canonical()
