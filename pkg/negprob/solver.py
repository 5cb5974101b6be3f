"""
Grounding systems and their affine solution sets

assemble_system turns an observation space into one equation per (test, atom)
plus the total-mass row, over the variables given by the common refinement.
solve_affine reduces [A | b | I] to row echelon form so that an inconsistent
system comes back with a row-multiplier witness.

The particular solution is the minimum-norm point of the solution set and the
basis comes from the free columns of the reduced matrix, so the result depends
only on the solution set and not on row order.
"""

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Mapping, Optional, Sequence, Tuple, Union

from .algebra import Event, ObservationSpace, Partition, check_consistency, common_refinement
from .errors import DimensionError, InconsistentSpaceError, NotAutomorphismError, ParseError
from .logs import timed
from .scalars import Field, RationalField


def dot(u: Sequence, v: Sequence, zero):
    total = zero
    for a, b in zip(u, v):
        total = total + a * b
    return total


def reduce_rows(rows: List[list], pivot_cols: int, f: Field) -> Tuple[List[list], List[int]]:
    """Gauss-Jordan reduction in place, pivoting only in the first pivot_cols columns

    Exact fields take the first column with a nonzero entry left and its first
    nonzero row, which keeps pivots in column order. The float field pivots
    fully: the largest remaining entry over all unused rows and columns.
    Returns the reduced rows and the pivot column of each pivot row; pivot rows
    come first.
    """
    pivots: List[int] = []
    remaining = list(range(pivot_cols))
    for r in range(len(rows)):
        cells = [(i, c) for c in remaining for i in range(r, len(rows)) if not f.is_zero(rows[i][c])]
        if not cells:
            break
        if f.exact:
            k, c = cells[0]
        else:
            k, c = max(cells, key=lambda cell: abs(rows[cell[0]][cell[1]]))
        rows[r], rows[k] = rows[k], rows[r]
        inv = f.one() / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and not f.is_zero(rows[i][c]):
                factor = rows[i][c]
                rows[i] = [x - factor * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        remaining.remove(c)
    return rows, pivots


def solve_square(matrix: Sequence[Sequence], rhs: Sequence, f: Field) -> Optional[list]:
    """Unique solution of a square system, or None when it is singular"""
    n = len(matrix)
    rows = [[f.coerce(x) for x in row] + [f.coerce(y)] for row, y in zip(matrix, rhs)]
    rows, pivots = reduce_rows(rows, n, f)
    if len(pivots) < n:
        return None
    x = [f.zero()] * n
    for r, c in enumerate(pivots):
        x[c] = rows[r][n]
    return x


@dataclass(frozen=True)
class LinearSystem:
    """A·x = b over one Scalar field, with named columns and rows"""

    matrix: Tuple[Tuple, ...]
    rhs: Tuple
    labels: Tuple[str, ...]
    field: Field = field(default_factory=RationalField)
    row_labels: Tuple[str, ...] = ()

    def __post_init__(self):
        f = self.field
        matrix = tuple(tuple(f.coerce(x) for x in row) for row in self.matrix)
        rhs = tuple(f.coerce(y) for y in self.rhs)
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "rhs", rhs)
        object.__setattr__(self, "labels", tuple(self.labels))
        row_labels = tuple(self.row_labels) or tuple(f"row{i}" for i in range(len(matrix)))
        object.__setattr__(self, "row_labels", row_labels)
        if len(rhs) != len(matrix) or len(row_labels) != len(matrix):
            raise DimensionError(f"{len(matrix)} rows, {len(rhs)} right-hand sides, {len(row_labels)} row labels")
        for row in matrix:
            if len(row) != len(self.labels):
                raise DimensionError(f"row of length {len(row)} for {len(self.labels)} variables")

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.matrix), len(self.labels)

    @property
    def rank(self) -> int:
        rows = [list(row) for row in self.matrix]
        return len(reduce_rows(rows, len(self.labels), self.field)[1])

    def apply(self, v: Sequence) -> list:
        zero = self.field.zero()
        return [dot(row, v, zero) for row in self.matrix]

    def satisfied_by(self, v: Sequence) -> bool:
        v = [self.field.coerce(x) for x in v]
        if len(v) != len(self.labels):
            return False
        return all(self.field.is_zero(a - b) for a, b in zip(self.apply(v), self.rhs))

    def in_null_space(self, v: Sequence) -> bool:
        v = [self.field.coerce(x) for x in v]
        return len(v) == len(self.labels) and all(self.field.is_zero(a) for a in self.apply(v))

    def extend(self, rows: Sequence[Sequence], rhs: Sequence, row_labels: Sequence[str]) -> "LinearSystem":
        return LinearSystem(
            self.matrix + tuple(tuple(r) for r in rows),
            self.rhs + tuple(rhs),
            self.labels,
            self.field,
            self.row_labels + tuple(row_labels),
        )

    def column(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise ParseError(f"unknown variable {label!r}")


@dataclass(frozen=True)
class SignedGrounding:
    """One value per refinement atom; the values sum to 1"""

    labels: Tuple[str, ...]
    values: Tuple
    field: Field = field(default_factory=RationalField)
    atoms: Optional[Tuple[Event, ...]] = None

    def __post_init__(self):
        values = tuple(self.field.coerce(v) for v in self.values)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "labels", tuple(self.labels))
        if len(values) != len(self.labels):
            raise DimensionError(f"{len(values)} values for {len(self.labels)} labels")
        total = sum(values, self.field.zero())
        if not self.field.is_zero(total - self.field.one()):
            raise DimensionError(f"grounding values sum to {self.field.format(total)}, not 1")

    def __getitem__(self, label: str):
        return self.values[self.labels.index(label)]

    def as_dict(self) -> Dict[str, object]:
        return dict(zip(self.labels, self.values))

    @property
    def nonnegative(self) -> bool:
        return all(self.field.sign(v) >= 0 for v in self.values)


@dataclass(frozen=True)
class NoSolution:
    """Row multipliers y with yᵀA = 0 and yᵀb = 1"""

    certificate: Tuple
    system: LinearSystem

    def verify(self) -> bool:
        f = self.system.field
        zero = f.zero()
        for j in range(len(self.system.labels)):
            if not f.is_zero(dot(self.certificate, [row[j] for row in self.system.matrix], zero)):
                return False
        return not f.is_zero(dot(self.certificate, self.system.rhs, zero))


@dataclass(frozen=True)
class AffineSolutionSet:
    """All solutions particular + Σ λ_k basis[k] of a LinearSystem"""

    particular: Tuple
    basis: Tuple[Tuple, ...]
    system: LinearSystem
    atoms: Optional[Tuple[Event, ...]] = None

    @property
    def labels(self) -> Tuple[str, ...]:
        return self.system.labels

    @property
    def field(self) -> Field:
        return self.system.field

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def point(self, params: Sequence = ()) -> list:
        if len(params) != self.dimension:
            raise DimensionError(f"{len(params)} parameters for a {self.dimension}-dimensional set")
        f = self.field
        point = list(self.particular)
        for lam, v in zip(params, self.basis):
            lam = f.coerce(lam)
            point = [x + lam * y for x, y in zip(point, v)]
        return point

    def grounding(self, params: Sequence = ()) -> SignedGrounding:
        return SignedGrounding(self.labels, tuple(self.point(params)), self.field, self.atoms)

    def contains(self, v: Sequence) -> bool:
        return self.system.satisfied_by(v)

    def same_set(self, other: "AffineSolutionSet") -> bool:
        if self.labels != other.labels or self.dimension != other.dimension:
            return False
        return other.contains(self.particular) and all(other.system.in_null_space(v) for v in self.basis)


def _atom_label(space_labels: Sequence[str], atom: Event) -> str:
    names = [space_labels[i] for i in atom]
    return names[0] if len(names) == 1 else "{" + ",".join(names) + "}"


def assemble_system(os: ObservationSpace) -> LinearSystem:
    """One row per (test, atom) plus the total-mass row, over the refinement atoms"""
    report = check_consistency(os)
    if not report.consistent:
        raise InconsistentSpaceError(
            f"observation space has {len(report.violations)} consistency violation(s)", list(report.violations)
        )
    refinement = common_refinement(os)
    f = os.field
    labels = tuple(_atom_label(os.space.labels, a) for a in refinement.atoms)
    rows, rhs, row_labels = [], [], []
    for test in os.tests:
        for k, (atom, p) in enumerate(zip(test.partition.atoms, test.probs)):
            rows.append(tuple(f.one() if r.issubset(atom) else f.zero() for r in refinement.atoms))
            rhs.append(p)
            row_labels.append(f"{test.name}:{k}")
    rows.append(tuple(f.one() for _ in refinement.atoms))
    rhs.append(f.one())
    row_labels.append("total")
    return LinearSystem(tuple(rows), tuple(rhs), labels, f, tuple(row_labels))


def refinement_atoms(os: ObservationSpace) -> Tuple[Event, ...]:
    return common_refinement(os).atoms


def solve_affine(sys: LinearSystem, atoms: Optional[Tuple[Event, ...]] = None) -> Union[AffineSolutionSet, NoSolution]:
    """Exact particular solution and null-space basis, or a NoSolution witness"""
    f = sys.field
    m, n = sys.shape
    with timed("solve", rows=m, variables=n, field=f.name) as outcome:
        rows = []
        for i, (row, b) in enumerate(zip(sys.matrix, sys.rhs)):
            unit = [f.one() if k == i else f.zero() for k in range(m)]
            rows.append(list(row) + [b] + unit)
        rows, pivots = reduce_rows(rows, n, f)

        for row in rows[len(pivots):]:
            if not f.is_zero(row[n]):
                scale = f.one() / row[n]
                outcome["outcome"] = "no_solution"
                return NoSolution(tuple(y * scale for y in row[n + 1:]), sys)

        start = [f.zero()] * n
        for r, c in enumerate(pivots):
            start[c] = rows[r][n]
        basis = []
        for free in (c for c in range(n) if c not in pivots):
            v = [f.zero()] * n
            v[free] = f.one()
            for r, c in enumerate(pivots):
                v[c] = -rows[r][free]
            basis.append(tuple(v))

        particular = _minimum_norm(start, basis, f)
        outcome.update(rank=len(pivots), dimension=len(basis))
        return AffineSolutionSet(tuple(particular), tuple(basis), sys, atoms)


def _minimum_norm(start: list, basis: List[tuple], f: Field) -> list:
    """Project start onto the orthogonal complement of the basis span"""
    if not basis:
        return start
    zero = f.zero()
    gram = [[dot(u, v, zero) for v in basis] for u in basis]
    coeffs = solve_square(gram, [dot(u, start, zero) for u in basis], f)
    point = list(start)
    for c, v in zip(coeffs, basis):
        point = [x - c * y for x, y in zip(point, v)]
    return point


def ground(os: ObservationSpace) -> Union[AffineSolutionSet, NoSolution]:
    """assemble_system followed by solve_affine, keeping the refinement atoms"""
    return solve_affine(assemble_system(os), refinement_atoms(os))


def apply_constraints(
    s: AffineSolutionSet, equalities: Sequence[Tuple[str, str]]
) -> Union[AffineSolutionSet, NoSolution]:
    """Restrict a solution set by equalities x_i = x_j between named variables"""
    f = s.field
    rows, labels = [], []
    for a, b in equalities:
        i, j = s.system.column(a), s.system.column(b)
        if i == j:
            continue
        row = [f.zero()] * len(s.labels)
        row[i], row[j] = f.one(), -f.one()
        rows.append(row)
        labels.append(f"{a}={b}")
    if not rows:
        return s
    return solve_affine(s.system.extend(rows, [f.zero()] * len(rows), labels), s.atoms)


def _resolve_permutation(s: AffineSolutionSet, perm: Union[Mapping[str, str], Sequence]) -> List[int]:
    n = len(s.labels)
    if isinstance(perm, Mapping):
        image = list(range(n))
        for a, b in perm.items():
            image[s.system.column(a)] = s.system.column(b)
    else:
        image = [s.system.column(p) if isinstance(p, str) else int(p) for p in perm]
    if sorted(image) != list(range(n)):
        raise NotAutomorphismError(f"{image} is not a permutation of {n} variables")
    return image


def symmetrize(s: AffineSolutionSet, perm: Union[Mapping[str, str], Sequence]) -> Callable[[Sequence], tuple]:
    """Averaging transformer v -> (v + perm(v))/2 for an automorphism of the system

    perm maps variable j to image[j]; it is an automorphism when the multiset of
    rows of [A | b] is unchanged by moving column j to column image[j].
    """
    image = _resolve_permutation(s, perm)
    f = s.field
    sys = s.system
    n = len(image)

    def moved(v):
        out = [None] * n
        for j, x in enumerate(v):
            out[image[j]] = x
        return out

    originals = [list(row) + [b] for row, b in zip(sys.matrix, sys.rhs)]
    unused = list(range(len(originals)))
    for row, b in zip(sys.matrix, sys.rhs):
        target = moved(row) + [b]
        match = next(
            (k for k in unused if all(f.is_zero(x - y) for x, y in zip(target, originals[k]))),
            None,
        )
        if match is None:
            raise NotAutomorphismError(f"permutation {image} does not map the grounding system to itself")
        unused.remove(match)

    half = f.one() / f.coerce(2)

    def transform(v: Sequence) -> tuple:
        values = v.values if isinstance(v, SignedGrounding) else [f.coerce(x) for x in v]
        return tuple((x + y) * half for x, y in zip(values, moved(values)))

    return transform


def signed_moments(g: SignedGrounding, rv: Union[Mapping[str, object], Sequence]) -> Tuple[object, object]:
    """Mean and variance of a random variable under a signed grounding

    The variance can be negative; no square root is ever taken.
    """
    f = g.field
    if isinstance(rv, Mapping):
        missing = [l for l in g.labels if l not in rv]
        if missing:
            raise DimensionError(f"random variable undefined on {missing}")
        values = [f.coerce(rv[l]) for l in g.labels]
    else:
        values = [f.coerce(x) for x in rv]
        if len(values) != len(g.labels):
            raise DimensionError(f"random variable has {len(values)} values for {len(g.labels)} atoms")
    mean = dot(values, g.values, f.zero())
    variance = dot([(x - mean) * (x - mean) for x in values], g.values, f.zero())
    return mean, variance


def event_probability(g: SignedGrounding, e: Event):
    """Signed probability of an event that is a union of refinement atoms"""
    if g.atoms is None:
        raise DimensionError("grounding carries no refinement atoms")
    total = g.field.zero()
    for atom, v in zip(g.atoms, g.values):
        if atom.issubset(e):
            total = total + v
        elif not atom.isdisjoint(e):
            raise DimensionError(f"event {e.indices} splits refinement atom {atom.indices}")
    return total


def restrict(g: SignedGrounding, partition: Partition) -> tuple:
    """Atom probabilities a grounding induces on a test's partition"""
    return tuple(event_probability(g, atom) for atom in partition.atoms)


def zero_forced_points(os: ObservationSpace) -> List[str]:
    """Points inside an atom of probability zero; nonnegative groundings vanish there"""
    forced = set()
    for test in os.tests:
        for atom, p in zip(test.partition.atoms, test.probs):
            if os.field.is_zero(p):
                forced.update(atom)
    return [os.space.labels[i] for i in sorted(forced)]

