"""
JSON interchange documents

Scalars travel as canonical ScalarText strings ("1/4", "1/4+1/8 r", "0.5"), never
as JSON numbers, so exact fields round-trip losslessly. Dumps use a fixed key
order and two-space indentation, so equal inputs give byte-identical files.
"""

from typing import Annotated, Any, Dict, List, Optional

from pydantic import BaseModel, BeforeValidator, ConfigDict, ValidationError

from .algebra import ConsistencyReport, ObservationSpace, Partition, PartialDistribution, SampleSpace
from .config import CONFIG
from .errors import DimensionError, ParseError
from .feasibility import FeasibilityResult, Interval
from .ks import MeasurementFrame, NoneFound, ParityWitness, Selection
from .scalars import Field, parse_field
from .solver import AffineSolutionSet, NoSolution, SignedGrounding


def _as_text(value: Any) -> Any:
    if isinstance(value, bool):
        return value
    if isinstance(value, (int, float)):
        return repr(value)
    return value


ScalarText = Annotated[str, BeforeValidator(_as_text)]


class Document(BaseModel):
    model_config = ConfigDict(extra="forbid")

    def canonical_json(self) -> str:
        return self.model_dump_json(indent=2, exclude_none=True) + "\n"


def _location(error: ValidationError) -> str:
    first = error.errors()[0]
    path = "".join(f"[{p}]" if isinstance(p, int) else f".{p}" for p in first["loc"]).lstrip(".")
    return f"{path}: {first['msg']}" if path else first["msg"]


def load_document(model: type, text: str, source: str = "<input>"):
    """Validate JSON text against a document model; failures become ParseError"""
    try:
        return model.model_validate_json(text)
    except ValidationError as e:
        raise ParseError(_location(e), source)


class DistributionDocument(Document):
    name: str
    atoms: List[List[str]]
    probs: List[ScalarText]


class SpaceDocument(Document):
    points: List[str]
    field: str = "rational"
    tests: List[DistributionDocument]

    def to_space(self, field_override: Optional[str] = None) -> ObservationSpace:
        f = parse_field(field_override or self.field, CONFIG["float_tolerance"])
        space = SampleSpace(tuple(self.points))
        tests = []
        for i, t in enumerate(self.tests):
            where = f"tests[{i}]"
            blocks = [[space.index(label) for label in atom] for atom in t.atoms]
            try:
                partition = Partition.of(blocks, space.size)
            except DimensionError as e:
                raise ParseError(f"atoms of test {t.name!r} do not partition the points: {e.detail}", where)
            probs = tuple(f.parse(p, f"{where}.probs[{k}]") for k, p in enumerate(t.probs))
            tests.append(PartialDistribution(t.name, partition, probs, f))
        return ObservationSpace(space, tuple(tests), f)

    @classmethod
    def from_space(cls, os: ObservationSpace) -> "SpaceDocument":
        f = os.field
        tests = [
            DistributionDocument(
                name=t.name,
                atoms=[os.space.names(atom) for atom in t.partition.atoms],
                probs=[f.format(p) for p in t.probs],
            )
            for t in os.tests
        ]
        return cls(points=list(os.space.labels), field=f.name, tests=tests)


class FrameDocument(Document):
    bases: List[List[str]]

    def to_frame(self) -> MeasurementFrame:
        return MeasurementFrame(tuple(tuple(b) for b in self.bases))


class PermutationDocument(Document):
    """Variable relabeling; labels not mentioned stay fixed"""

    permutation: Dict[str, str]


class ViolationEntry(Document):
    first: str
    second: str
    atom: List[str]
    first_value: ScalarText
    second_value: ScalarText


class AffineEntry(Document):
    labels: List[str]
    rank: int
    equations: int
    dimension: int
    particular: List[ScalarText]
    basis: List[List[ScalarText]]


class IntervalEntry(Document):
    lower: Optional[ScalarText] = None
    upper: Optional[ScalarText] = None
    empty: bool
    direction: List[ScalarText]
    endpoints: List[List[ScalarText]] = []


class FeasibilityEntry(Document):
    feasible: bool
    witness: Optional[List[ScalarText]] = None
    certificate: Optional[List[ScalarText]] = None
    rows: Optional[List[str]] = None
    interval: Optional[IntervalEntry] = None


class KSEntry(Document):
    outcome: str
    selection: Optional[List[str]] = None
    nodes: Optional[int] = None
    parity: Optional[str] = None


class WignerEntry(Document):
    state: str
    hbar: float
    grid: List[float]
    metrics: Dict[str, float]
    files: List[str] = []


class ReportDocument(Document):
    command: str
    field: Optional[str] = None
    consistent: Optional[bool] = None
    violations: List[ViolationEntry] = []
    affine: Optional[AffineEntry] = None
    no_solution: Optional[List[ScalarText]] = None
    symmetric: Optional[AffineEntry] = None
    interval: Optional[IntervalEntry] = None
    feasibility: Optional[FeasibilityEntry] = None
    vertices: Optional[List[List[ScalarText]]] = None
    ks: Optional[KSEntry] = None
    wigner: Optional[WignerEntry] = None
    exit_code: int = 0


def _texts(f: Field, values) -> List[str]:
    return [f.format(v) for v in values]


def consistency_entries(os: ObservationSpace, report: ConsistencyReport) -> List[ViolationEntry]:
    f = os.field
    return [
        ViolationEntry(
            first=v.first,
            second=v.second,
            atom=os.space.names(v.atom),
            first_value=f.format(v.first_value),
            second_value=f.format(v.second_value),
        )
        for v in report.violations
    ]


def affine_entry(s: AffineSolutionSet) -> AffineEntry:
    f = s.field
    return AffineEntry(
        labels=list(s.labels),
        rank=s.system.rank,
        equations=s.system.shape[0],
        dimension=s.dimension,
        particular=_texts(f, s.particular),
        basis=[_texts(f, v) for v in s.basis],
    )


def no_solution_entry(result: NoSolution) -> List[str]:
    return _texts(result.system.field, result.certificate)


def interval_entry(interval: Interval) -> IntervalEntry:
    f = interval.field
    endpoints = []
    if not interval.empty:
        endpoints = [_texts(f, interval.point(t)) for t in (interval.m, interval.M) if t is not None]
    return IntervalEntry(
        lower=None if interval.m is None else f.format(interval.m),
        upper=None if interval.M is None else f.format(interval.M),
        empty=interval.empty,
        direction=_texts(f, interval.direction),
        endpoints=endpoints,
    )


def feasibility_entry(result: FeasibilityResult) -> FeasibilityEntry:
    interval = interval_entry(result.interval) if result.interval is not None else None
    if result.feasible:
        w = result.witness
        return FeasibilityEntry(feasible=True, witness=_texts(w.field, w.values), interval=interval)
    cert = result.certificate
    return FeasibilityEntry(
        feasible=False,
        certificate=_texts(cert.system.field, cert.multipliers),
        rows=list(cert.system.row_labels),
        interval=interval,
    )


def vertex_entries(vertices: List[SignedGrounding]) -> List[List[str]]:
    return [_texts(v.field, v.values) for v in vertices]


def ks_entry(found, parity) -> KSEntry:
    entry = KSEntry(outcome=type(found).__name__)
    if isinstance(found, Selection):
        entry.selection = list(found.chosen)
    elif isinstance(found, NoneFound):
        entry.nodes = found.nodes
    if isinstance(parity, ParityWitness):
        entry.parity = f"{parity.bases} bases, each vector in exactly two bases"
    return entry
