"""
Nonnegative groundings

nonneg_feasibility runs phase 1 of the simplex method with Bland's rule on
A·x = b, x >= 0 over an exact field. Rows with negative right-hand side are
negated first so the artificial basis starts feasible. When the artificial
objective stays positive the final simplex multipliers give a Farkas
certificate y with yᵀA >= 0 and yᵀb < 0.

parametric_interval and vertex_enumerate describe the nonnegative part of a
small solution set directly, by its bounds along one direction or by its
vertices.
"""

from dataclasses import dataclass
from itertools import combinations
from typing import List, Optional, Sequence, Tuple

from .config import CONFIG
from .errors import DimensionError
from .logs import timed
from .scalars import Field
from .solver import AffineSolutionSet, LinearSystem, SignedGrounding, dot, solve_square


@dataclass(frozen=True)
class Interval:
    """Range m <= t <= M keeping particular + t*direction nonnegative

    None stands for an unbounded side; empty is set when no t qualifies.
    """

    m: Optional[object]
    M: Optional[object]
    direction: Tuple
    origin: Tuple
    field: Field
    blocked: bool = False

    @property
    def empty(self) -> bool:
        if self.blocked:
            return True
        if self.m is None or self.M is None:
            return False
        return self.field.sign(self.M - self.m) < 0

    def point(self, t) -> list:
        t = self.field.coerce(t)
        return [x + t * d for x, d in zip(self.origin, self.direction)]


@dataclass(frozen=True)
class Certificate:
    """Row multipliers y with yᵀA >= 0 componentwise and yᵀb < 0"""

    multipliers: Tuple
    system: LinearSystem

    def verify(self) -> bool:
        f = self.system.field
        zero = f.zero()
        columns = zip(*self.system.matrix)
        if any(f.sign(dot(self.multipliers, col, zero)) < 0 for col in columns):
            return False
        return f.sign(dot(self.multipliers, self.system.rhs, zero)) < 0


@dataclass(frozen=True)
class FeasibilityResult:
    witness: Optional[SignedGrounding] = None
    certificate: Optional[Certificate] = None
    interval: Optional[Interval] = None

    @property
    def feasible(self) -> bool:
        return self.witness is not None


def _phase_one(system: LinearSystem):
    """Returns (x, None) for a nonnegative solution or (None, y) for a certificate"""
    f = system.field
    m, n = system.shape
    zero, one = f.zero(), f.one()
    flip = [-one if f.sign(b) < 0 else one for b in system.rhs]

    # columns 0..n-1 original, n..n+m-1 artificial, last column right-hand side
    tableau = []
    for i, (row, b) in enumerate(zip(system.matrix, system.rhs)):
        artificial = [one if k == i else zero for k in range(m)]
        tableau.append([flip[i] * a for a in row] + artificial + [flip[i] * b])
    basis = list(range(n, n + m))
    cost = [zero] * n + [one] * m

    while True:
        # reduced costs d_j = c_j - c_Bᵀ T_j
        entering = None
        for j in range(n + m):
            if j in basis:
                continue
            d = cost[j] - sum((cost[basis[i]] * tableau[i][j] for i in range(m)), zero)
            if f.sign(d) < 0:
                entering = j
                break
        if entering is None:
            break

        leaving, best = None, None
        for i in range(m):
            if f.sign(tableau[i][entering]) > 0:
                ratio = tableau[i][-1] / tableau[i][entering]
                better = best is None or f.sign(ratio - best) < 0
                tie = best is not None and f.is_zero(ratio - best) and basis[i] < basis[leaving]
                if better or tie:
                    leaving, best = i, ratio
        # artificial objective is bounded below by zero, so a leaving row always exists
        pivot = tableau[leaving][entering]
        tableau[leaving] = [x / pivot for x in tableau[leaving]]
        for i in range(m):
            if i != leaving and not f.is_zero(tableau[i][entering]):
                factor = tableau[i][entering]
                tableau[i] = [x - factor * y for x, y in zip(tableau[i], tableau[leaving])]
        basis[leaving] = entering

    objective = sum((cost[basis[i]] * tableau[i][-1] for i in range(m)), zero)
    if f.is_zero(objective):
        x = [zero] * n
        for i, j in enumerate(basis):
            if j < n:
                x[j] = tableau[i][-1]
        return x, None

    # simplex multipliers π = c_Bᵀ B⁻¹; B⁻¹ sits in the artificial block
    pi = [sum((cost[basis[i]] * tableau[i][n + k] for i in range(m)), zero) for k in range(m)]
    return None, [-flip[k] * pi[k] for k in range(m)]


def unit_direction(v: Sequence, f: Field) -> list:
    """Scale a null-space vector to entries summing to 1 in absolute value, first nonzero entry positive

    On the two-test qubit this is (1, -1, -1, 1)/4, so t is the usual
    parameter of f++ = (1 + Z + X + t)/4.
    """
    zero = f.zero()
    size = sum((x if f.sign(x) > 0 else -x for x in v), zero)
    lead = next(x for x in v if not f.is_zero(x))
    scale = size if f.sign(lead) > 0 else -size
    return [x / scale for x in v]


def parametric_interval(s: AffineSolutionSet, direction: Optional[Sequence] = None) -> Interval:
    """Bounds on t for particular + t*direction >= 0 in a one-dimensional solution set

    The default direction is the null-space basis vector passed through
    unit_direction. Works over every field; the float field decides signs up
    to its tolerance.
    """
    if s.dimension != 1:
        raise DimensionError(f"parametric interval needs a 1-dimensional solution set, got {s.dimension}")
    f = s.field
    if direction is None:
        d = unit_direction(s.basis[0], f)
    else:
        d = [f.coerce(x) for x in direction]
        if not s.system.in_null_space(d) or all(f.is_zero(x) for x in d):
            raise DimensionError("direction is not a nonzero null-space vector")

    lower, upper, empty = None, None, False
    for x0, di in zip(s.particular, d):
        sign = f.sign(di)
        if sign == 0:
            if f.sign(x0) < 0:
                empty = True
            continue
        bound = -x0 / di
        if sign > 0:
            lower = bound if lower is None or f.sign(bound - lower) > 0 else lower
        else:
            upper = bound if upper is None or f.sign(bound - upper) < 0 else upper
    # blocked: a negative coordinate the direction cannot move
    return Interval(lower, upper, tuple(d), tuple(s.particular), f, blocked=empty)


def nonneg_feasibility(s: AffineSolutionSet) -> FeasibilityResult:
    """Witness or Farkas certificate; with a one-dimensional null space also the interval"""
    f = s.field
    f.require_exact("nonnegative feasibility")
    m, n = s.system.shape
    with timed("feasibility", rows=m, variables=n, dimension=s.dimension, field=f.name) as outcome:
        interval = parametric_interval(s) if s.dimension == 1 else None
        x, y = _phase_one(s.system)
        if x is not None:
            outcome["outcome"] = "witness"
            witness = SignedGrounding(s.labels, tuple(x), f, s.atoms)
            return FeasibilityResult(witness=witness, interval=interval)
        outcome["outcome"] = "infeasible"
        return FeasibilityResult(certificate=Certificate(tuple(y), s.system), interval=interval)


def vertex_enumerate(s: AffineSolutionSet, max_dim: Optional[int] = None) -> List[SignedGrounding]:
    """Vertices of the polytope of nonnegative solutions, sorted

    Each vertex is found by making dimension-many coordinates zero and solving for
    the parameters; feasible points are deduplicated.
    """
    f = s.field
    f.require_exact("vertex enumeration")
    cap = CONFIG["vertex_max_dim"] if max_dim is None else max_dim
    k = s.dimension
    if k > cap:
        raise DimensionError(f"null-space dimension {k} exceeds the vertex enumeration cap {cap}")

    found = []
    with timed("vertices", variables=len(s.labels), dimension=k) as outcome:
        for active in combinations(range(len(s.labels)), k):
            square = [[v[i] for v in s.basis] for i in active]
            params = solve_square(square, [-s.particular[i] for i in active], f)
            if params is None:
                continue
            point = tuple(s.point(params))
            if all(f.sign(x) >= 0 for x in point) and point not in found:
                found.append(point)
        found.sort()
        outcome["vertices"] = len(found)
    return [SignedGrounding(s.labels, p, f, s.atoms) for p in found]


def vertex_centroid(vertices: Sequence[SignedGrounding]) -> SignedGrounding:
    """Average of polytope vertices, itself a nonnegative grounding"""
    if not vertices:
        raise DimensionError("centroid of an empty vertex set")
    f = vertices[0].field
    count = f.coerce(len(vertices))
    values = [sum((v.values[i] for v in vertices), f.zero()) / count for i in range(len(vertices[0].labels))]
    return SignedGrounding(vertices[0].labels, tuple(values), f, vertices[0].atoms)
