"""
Rigid interpretations of measurement frames

A frame is the incidence structure of a Kochen-Specker style argument: vector ids
grouped into bases. A rigid interpretation selects exactly one vector from every
basis, and a vector selected in one basis is selected in every basis holding it.
Finding one is an exact cover problem with the bases as items and the vectors as
options, solved here by Algorithm X.
"""

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .errors import FrameError
from .logs import timed

# 18 vectors of C^4 in 9 orthogonal bases; ids are the coordinate strings
CABELLO_BASES = (
    ("0001", "0010", "1100", "1-100"),
    ("0001", "0100", "1010", "10-10"),
    ("1-11-1", "1-1-11", "1100", "0011"),
    ("1-11-1", "1111", "10-10", "010-1"),
    ("0010", "0100", "1001", "100-1"),
    ("1-1-11", "1111", "100-1", "01-10"),
    ("11-11", "111-1", "1-100", "0011"),
    ("11-11", "-1111", "1010", "010-1"),
    ("111-1", "-1111", "1001", "01-10"),
)


@dataclass(frozen=True)
class MeasurementFrame:
    bases: Tuple[Tuple[str, ...], ...]

    def __post_init__(self):
        bases = tuple(tuple(b) for b in self.bases)
        object.__setattr__(self, "bases", bases)
        if not bases:
            raise FrameError("frame needs at least one basis")
        size = len(bases[0])
        for k, basis in enumerate(bases):
            if not basis:
                raise FrameError(f"basis {k} is empty")
            if len(basis) != size:
                raise FrameError(f"basis {k} has {len(basis)} vectors, basis 0 has {size}")
            if len(set(basis)) != len(basis):
                raise FrameError(f"basis {k} repeats a vector id")

    @property
    def vector_ids(self) -> Tuple[str, ...]:
        return tuple(dict.fromkeys(v for basis in self.bases for v in basis))

    @property
    def dimension(self) -> int:
        return len(self.bases[0])

    def occurrences(self) -> Dict[str, List[int]]:
        """Bases containing each vector"""
        where: Dict[str, List[int]] = {v: [] for v in self.vector_ids}
        for k, basis in enumerate(self.bases):
            for v in basis:
                where[v].append(k)
        return where


@dataclass(frozen=True)
class Selection:
    """chosen[k] is the vector selected in basis k"""

    chosen: Tuple[str, ...]

    def verify(self, frame: MeasurementFrame) -> bool:
        if len(self.chosen) != len(frame.bases):
            return False
        selected = set(self.chosen)
        return all(sum(v in selected for v in basis) == 1 for basis in frame.bases) and all(
            c in basis for c, basis in zip(self.chosen, frame.bases)
        )


@dataclass(frozen=True)
class NoneFound:
    """Complete search found no rigid selection"""

    nodes: int


@dataclass(frozen=True)
class ParityWitness:
    bases: int
    vectors: int
    multiplicity: int = 2


@dataclass(frozen=True)
class NotApplicable:
    reason: str


def cabello_frame() -> MeasurementFrame:
    return MeasurementFrame(CABELLO_BASES)


def _degrees(frame: MeasurementFrame) -> List[int]:
    where = frame.occurrences()
    return [len({k for v in basis for k in where[v]} - {i}) for i, basis in enumerate(frame.bases)]


def rigid_selection_search(frame: MeasurementFrame) -> Union[Selection, NoneFound]:
    """Depth-first exact cover search; first selection found or NoneFound

    The next basis to cover is the one with the fewest remaining candidates,
    ties going to the basis sharing vectors with the most others.
    """
    where = frame.occurrences()
    degree = _degrees(frame)
    nodes = 0

    def search(uncovered: frozenset, excluded: frozenset, chosen: Tuple[str, ...]) -> Optional[Tuple[str, ...]]:
        nonlocal nodes
        nodes += 1
        if not uncovered:
            return chosen
        candidates = {k: [v for v in frame.bases[k] if v not in excluded] for k in uncovered}
        basis = min(uncovered, key=lambda k: (len(candidates[k]), -degree[k], k))
        for v in candidates[basis]:
            covered = frozenset(where[v])
            blocked = frozenset(w for k in covered for w in frame.bases[k])
            found = search(uncovered - covered, excluded | blocked, chosen + (v,))
            if found is not None:
                return found
        return None

    with timed("ks_search", bases=len(frame.bases), vectors=len(where)) as outcome:
        found = search(frozenset(range(len(frame.bases))), frozenset(), ())
        outcome.update(nodes=nodes, found=found is not None)
    if found is None:
        return NoneFound(nodes)
    selected = set(found)
    return Selection(tuple(next(v for v in basis if v in selected) for basis in frame.bases))


def parity_obstruction(frame: MeasurementFrame) -> Union[ParityWitness, NotApplicable]:
    """Double counting: with every vector in exactly two bases, a rigid selection
    covers the bases in pairs, so an odd basis count rules it out"""
    counts = {v: len(ks) for v, ks in frame.occurrences().items()}
    off = sorted(v for v, c in counts.items() if c != 2)
    if off:
        return NotApplicable(f"{len(off)} vector(s) not in exactly two bases, e.g. {off[0]!r}")
    if len(frame.bases) % 2 == 0:
        return NotApplicable(f"basis count {len(frame.bases)} is even")
    return ParityWitness(len(frame.bases), len(counts))


def frame_from_bases(bases: Sequence[Sequence[str]]) -> MeasurementFrame:
    return MeasurementFrame(tuple(tuple(str(v) for v in b) for b in bases))
