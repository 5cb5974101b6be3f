"""
Phase-space densities for one particle on a line

wigner_density evaluates (1/2π)∫ψ*(x+βħ/2)ψ(x−βħ/2)e^{iβp}dβ on a rectangular
(x, p) grid. Its line marginals are compared with the quantum densities of
aX + bP computed straight from the wave function, and the field is rebuilt from
the characteristic function sampled along rays through the origin.

Fourier transforms use the unitary convention: kernel e^{−iζz}/√(2π) on lines,
e^{−i(ξx+ηp)}/(2π) on the plane.
"""

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import trapezoid
from scipy.interpolate import CubicSpline, RectBivariateSpline
from scipy.ndimage import map_coordinates
from scipy.special import eval_genlaguerre, eval_hermite, gammaln

from .config import CONFIG, logger
from .errors import DegenerateDirectionError, GridResolutionError, ParseError, StateError
from .logs import timed

WIGNER = CONFIG["wigner"]
NORM_TOL = 1e-8


@dataclass(frozen=True)
class PhaseGrid:
    x_lo: float
    x_hi: float
    n_x: int
    p_lo: float
    p_hi: float
    n_p: int

    def __post_init__(self):
        for name in ("x_lo", "x_hi", "p_lo", "p_hi"):
            object.__setattr__(self, name, float(getattr(self, name)))
        for name in ("n_x", "n_p"):
            object.__setattr__(self, name, int(getattr(self, name)))
        if self.n_x < 2 or self.n_p < 2:
            raise ParseError(f"grid needs at least 2 points per axis, got {self.n_x}x{self.n_p}")
        if self.x_hi <= self.x_lo or self.p_hi <= self.p_lo:
            raise ParseError("grid bounds must satisfy lo < hi")

    @classmethod
    def default(cls) -> "PhaseGrid":
        return cls(**WIGNER["grid"])

    @classmethod
    def parse(cls, text: str) -> "PhaseGrid":
        """'x_lo,x_hi,n_x,p_lo,p_hi,n_p' or 'default'"""
        if text.strip() == "default":
            return cls.default()
        parts = [s.strip() for s in text.split(",")]
        if len(parts) != 6:
            raise ParseError(f"grid needs 6 comma-separated values, got {text!r}", "--grid")
        try:
            x_lo, x_hi, p_lo, p_hi = (float(parts[k]) for k in (0, 1, 3, 4))
            n_x, n_p = int(parts[2]), int(parts[5])
        except ValueError:
            raise ParseError(f"malformed grid {text!r}", "--grid")
        return cls(x_lo, x_hi, n_x, p_lo, p_hi, n_p)

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_lo, self.x_hi, self.n_x)

    @property
    def p(self) -> np.ndarray:
        return np.linspace(self.p_lo, self.p_hi, self.n_p)

    @property
    def dx(self) -> float:
        return (self.x_hi - self.x_lo) / (self.n_x - 1)

    @property
    def dp(self) -> float:
        return (self.p_hi - self.p_lo) / (self.n_p - 1)

    def refined(self) -> "PhaseGrid":
        return PhaseGrid(self.x_lo, self.x_hi, 2 * self.n_x, self.p_lo, self.p_hi, 2 * self.n_p)


def _uniform_weights(n: int, step: float) -> np.ndarray:
    w = np.full(n, step)
    w[0] = w[-1] = step / 2
    return w


def _fourier(values: np.ndarray, grid: np.ndarray, targets: np.ndarray, hbar: float, sign: int) -> np.ndarray:
    """(2πħ)^{-1/2}∫values(y)e^{sign·i·t·y/ħ}dy at every target t"""
    weights = _uniform_weights(grid.size, grid[1] - grid[0])
    kernel = np.exp(sign * 1j * np.outer(targets, grid) / hbar)
    return kernel @ (values * weights) / math.sqrt(2 * math.pi * hbar)


def _decay_radius(amplitude: Callable[[np.ndarray], np.ndarray], limit: float, threshold: float) -> float:
    """Largest r <= limit with |amplitude(±r)| >= threshold"""
    r = np.linspace(0.0, limit, 4001)
    above = np.maximum(np.abs(amplitude(r)), np.abs(amplitude(-r))) >= threshold
    if not above.any():
        return float(r[1])
    return float(r[min(np.flatnonzero(above)[-1] + 1, r.size - 1)])


@dataclass(frozen=True, eq=False)
class WaveFunction:
    """Normalized ψ(x) with a support hint outside which |ψ| < truncation"""

    evaluator: Callable[[np.ndarray], np.ndarray]
    support: Tuple[float, float]
    family: str
    hbar: float = 1.0
    momentum_evaluator: Optional[Callable[[np.ndarray], np.ndarray]] = None
    momentum_support: Optional[Tuple[float, float]] = None

    def __post_init__(self):
        if self.hbar <= 0:
            raise StateError(f"hbar must be positive, got {self.hbar}")
        lo, hi = self.support
        if not hi > lo:
            raise StateError(f"empty support [{lo}, {hi}]")
        residual = abs(self.norm() - 1)
        if residual > NORM_TOL:
            raise StateError(f"{self.family}: ∫|ψ|² differs from 1 by {residual:.3g}")
        if self.momentum_support is None:
            object.__setattr__(self, "momentum_support", self._numeric_momentum_support())

    def __call__(self, x) -> np.ndarray:
        return np.asarray(self.evaluator(np.asarray(x, dtype=float)), dtype=complex)

    def work_grid(self, n: Optional[int] = None) -> np.ndarray:
        return np.linspace(self.support[0], self.support[1], n or WIGNER["work_points"])

    def momentum_grid(self, n: Optional[int] = None) -> np.ndarray:
        lo, hi = self.momentum_support
        return np.linspace(lo, hi, n or WIGNER["work_points"])

    def norm(self) -> float:
        y = self.work_grid()
        return float(trapezoid(np.abs(self(y)) ** 2, y))

    def momentum(self, p) -> np.ndarray:
        """φ(p) = (2πħ)^{-1/2}∫ψ(x)e^{−ipx/ħ}dx"""
        p = np.asarray(p, dtype=float)
        if self.momentum_evaluator is not None:
            return np.asarray(self.momentum_evaluator(p), dtype=complex)
        y = self.work_grid()
        return _fourier(self(y), y, p.reshape(-1), self.hbar, -1).reshape(p.shape)

    @property
    def radius(self) -> float:
        return max(abs(self.support[0]), abs(self.support[1]))

    @property
    def momentum_radius(self) -> float:
        return max(abs(self.momentum_support[0]), abs(self.momentum_support[1]))

    def _numeric_momentum_support(self) -> Tuple[float, float]:
        y = self.work_grid()
        limit = math.pi * self.hbar / (2 * (y[1] - y[0]))
        # quadrature noise of a sampled state sits far above the truncation level
        radius = _decay_radius(self.momentum, limit, WIGNER["angular_tolerance"])
        return (-radius, radius)


def hermite_state(n: int, hbar: Optional[float] = None) -> WaveFunction:
    """n-th harmonic oscillator eigenstate with length scale √ħ"""
    if n < 0:
        raise StateError(f"hermite index must be >= 0, got {n}")
    hbar = WIGNER["hbar"] if hbar is None else hbar
    scale = math.sqrt(hbar)
    log_norm = -0.5 * (n * math.log(2) + gammaln(n + 1)) - 0.25 * math.log(math.pi * hbar)

    def psi(x):
        u = x / scale
        return np.exp(log_norm - u**2 / 2) * eval_hermite(n, u)

    def phi(p):
        return (-1j) ** n * psi(p)

    limit = scale * (math.sqrt(2 * n + 1) + 12)
    radius = _decay_radius(psi, limit, WIGNER["truncation"])
    family = "gaussian" if n == 0 else f"hermite:{n}"
    return WaveFunction(psi, (-radius, radius), family, hbar, phi, (-radius, radius))


def coherent_state(x0: float, p0: float, hbar: Optional[float] = None) -> WaveFunction:
    """Minimum-uncertainty Gaussian centred at (x0, p0)

    ψ(x) = (πħ)^{-1/4}e^{−(x−x0)²/2ħ}e^{ip0x/ħ}; its field is a Gaussian bump of
    width √(ħ/2) in each direction, positive everywhere.
    """
    hbar = WIGNER["hbar"] if hbar is None else hbar
    scale = math.sqrt(hbar)
    log_norm = -0.25 * math.log(math.pi * hbar)

    def psi(x):
        return np.exp(log_norm - (x - x0) ** 2 / (2 * hbar) + 1j * p0 * x / hbar)

    def phi(p):
        return np.exp(log_norm - (p - p0) ** 2 / (2 * hbar) - 1j * (p - p0) * x0 / hbar)

    radius = _decay_radius(psi, abs(x0) + 12 * scale, WIGNER["truncation"])
    momentum_radius = _decay_radius(phi, abs(p0) + 12 * scale, WIGNER["truncation"])
    return WaveFunction(
        psi, (-radius, radius), f"coherent:{x0:g},{p0:g}", hbar, phi, (-momentum_radius, momentum_radius)
    )


def sampled_state(path: Path, hbar: Optional[float] = None) -> WaveFunction:
    """State read from columns x, Re ψ[, Im ψ]; normalized on load, zero outside the samples"""
    hbar = WIGNER["hbar"] if hbar is None else hbar
    try:
        data = np.loadtxt(path, ndmin=2)
    except (OSError, ValueError) as e:
        raise ParseError(f"cannot read sampled state: {e}", str(path))
    if data.shape[1] not in (2, 3) or data.shape[0] < 4:
        raise ParseError(f"sampled state needs >= 4 rows of x, Re ψ[, Im ψ], got shape {data.shape}", str(path))
    x = data[:, 0]
    if np.any(np.diff(x) <= 0):
        raise ParseError("sampled x values must be strictly increasing", str(path))
    values = data[:, 1] + (1j * data[:, 2] if data.shape[1] == 3 else 0)
    mass = trapezoid(np.abs(values) ** 2, x)
    if mass <= 0:
        raise StateError(f"sampled state in {path} is identically zero")
    values = values / math.sqrt(mass)
    real, imag = CubicSpline(x, values.real), CubicSpline(x, values.imag)
    lo, hi = float(x[0]), float(x[-1])

    def psi(t):
        inside = (t >= lo) & (t <= hi)
        return np.where(inside, real(t) + 1j * imag(t), 0.0)

    wave = WaveFunction(psi, (lo, hi), f"sampled:{path}", hbar)
    logger.debug(f"✓ Loaded sampled state from {path} ({x.size} points)")
    return wave


def parse_state(spec: str, hbar: Optional[float] = None) -> WaveFunction:
    """'gaussian', 'hermite:n', 'coherent:x0,p0' or 'sampled:<file>'"""
    spec = spec.strip()
    if spec == "gaussian":
        return hermite_state(0, hbar)
    if spec.startswith("hermite:"):
        try:
            n = int(spec.split(":", 1)[1])
        except ValueError:
            raise ParseError(f"malformed state {spec!r}", "--state")
        return hermite_state(n, hbar)
    if spec.startswith("coherent:"):
        try:
            x0, p0 = (float(v) for v in spec.split(":", 1)[1].split(","))
        except ValueError:
            raise ParseError(f"malformed state {spec!r}; expected coherent:x0,p0", "--state")
        if not (math.isfinite(x0) and math.isfinite(p0)):
            raise ParseError(f"coherent state centre must be finite, got {spec!r}", "--state")
        return coherent_state(x0, p0, hbar)
    if spec.startswith("sampled:"):
        return sampled_state(Path(spec.split(":", 1)[1]), hbar)
    raise ParseError(f"unknown state {spec!r}; use gaussian, hermite:n, coherent:x0,p0 or sampled:<file>", "--state")


@dataclass(frozen=True, eq=False)
class PhaseSpaceField:
    grid: PhaseGrid
    values: np.ndarray
    hbar: float = 1.0
    imag_residue: float = 0.0

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", values)
        if values.shape != (self.grid.n_x, self.grid.n_p):
            raise ParseError(f"field shape {values.shape} does not match the {self.grid.n_x}x{self.grid.n_p} grid")

    @property
    def x(self) -> np.ndarray:
        return self.grid.x

    @property
    def p(self) -> np.ndarray:
        return self.grid.p

    def normalization(self) -> float:
        return float(trapezoid(trapezoid(self.values, self.p, axis=1), self.x))

    def value_at(self, x: float, p: float) -> float:
        spline = RectBivariateSpline(self.x, self.p, self.values, kx=3, ky=3)
        return float(spline.ev(x, p))

    def min(self) -> Tuple[float, float, float]:
        """(value, x, p) of the smallest grid value"""
        i, j = np.unravel_index(np.argmin(self.values), self.values.shape)
        return float(self.values[i, j]), float(self.x[i]), float(self.p[j])

    def to_text(self) -> str:
        g = self.grid
        header = f"{g.x_lo!r} {g.x_hi!r} {g.n_x} {g.p_lo!r} {g.p_hi!r} {g.n_p} {self.hbar!r}"
        rows = (" ".join(f"{v:.17g}" for v in row) for row in self.values)
        return "\n".join([header, *rows]) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "PhaseSpaceField":
        lines = text.strip().splitlines()
        try:
            head = lines[0].split()
            grid = PhaseGrid(float(head[0]), float(head[1]), int(head[2]), float(head[3]), float(head[4]), int(head[5]))
            values = np.array([[float(v) for v in line.split()] for line in lines[1:]])
            return cls(grid, values, float(head[6]))
        except (IndexError, ValueError) as e:
            raise ParseError(f"malformed field file: {e}")


@dataclass(frozen=True, eq=False)
class LineDensity:
    """Density of z = a·x + b·p"""

    z: np.ndarray
    values: np.ndarray
    a: float
    b: float

    @property
    def mass(self) -> float:
        return float(trapezoid(self.values, self.z))

    def probability(self, lo: float, hi: float) -> float:
        """Mass of [lo, hi], integrating the cubic interpolant of the samples"""
        lo, hi = max(lo, self.z[0]), min(hi, self.z[-1])
        if hi <= lo:
            return 0.0
        return float(CubicSpline(self.z, self.values).integrate(lo, hi))

    def to_text(self) -> str:
        header = f"{self.a!r} {self.b!r} {self.z.size}"
        rows = (f"{z:.17g} {g:.17g}" for z, g in zip(self.z, self.values))
        return "\n".join([header, *rows]) + "\n"


def _check_direction(a: float, b: float) -> None:
    if a == 0 and b == 0:
        raise DegenerateDirectionError("direction (a, b) = (0, 0) defines no line family")


def wigner_density(psi: WaveFunction, grid: Optional[PhaseGrid] = None) -> PhaseSpaceField:
    """Wigner field of ψ; the β integral is a direct DFT over the window where the
    integrand is above truncation"""
    grid = grid or PhaseGrid.default()
    hbar = psi.hbar
    x, p, dx = grid.x, grid.p, grid.dx

    p_need = max(abs(grid.p_lo), abs(grid.p_hi), psi.momentum_radius)
    if p_need > math.pi * hbar / (2 * dx):
        required = math.ceil(2 * p_need * (grid.x_hi - grid.x_lo) / (math.pi * hbar)) + 1
        raise GridResolutionError(
            f"x step {dx:.4g} aliases momenta beyond {math.pi * hbar / (2 * dx):.4g}; need |p| up to {p_need:.4g}",
            required,
        )
    if psi.support[0] < grid.x_lo or psi.support[1] > grid.x_hi:
        logger.warning(f"⚠️  support [{psi.support[0]:.3g}, {psi.support[1]:.3g}] extends past the x grid")

    with timed("wigner", state=psi.family, n_x=grid.n_x, n_p=grid.n_p) as outcome:
        # β_k = k·2dx/ħ puts x ± β_kħ/2 on the x lattice
        d_beta = 2 * dx / hbar
        half = math.ceil((psi.support[1] - psi.support[0]) / (2 * dx)) + 1
        beta = d_beta * np.arange(-half, half + 1)
        shift = beta * hbar / 2
        products = np.conj(psi(x[:, None] + shift[None, :])) * psi(x[:, None] - shift[None, :])
        kernel = np.exp(1j * np.outer(beta, p))
        complex_values = products @ kernel * (d_beta / (2 * math.pi))
        residue = float(np.max(np.abs(complex_values.imag)))
        field = PhaseSpaceField(grid, complex_values.real, hbar, residue)
        outcome.update(imag_residue=residue, window=int(beta.size), normalization=field.normalization())
    return field


def analytic_wigner(n: int, grid: Optional[PhaseGrid] = None, hbar: Optional[float] = None) -> PhaseSpaceField:
    """((−1)^n/πħ)·e^{−r²/ħ}·L_n(2r²/ħ) for the n-th oscillator eigenstate"""
    grid = grid or PhaseGrid.default()
    hbar = WIGNER["hbar"] if hbar is None else hbar
    X, P = np.meshgrid(grid.x, grid.p, indexing="ij")
    r2 = (X**2 + P**2) / hbar
    values = (-1) ** n / (math.pi * hbar) * np.exp(-r2) * eval_genlaguerre(n, 0, 2 * r2)
    return PhaseSpaceField(grid, values, hbar)


def _sample_field(f: PhaseSpaceField, xs: np.ndarray, ps: np.ndarray, order: int) -> np.ndarray:
    coords = [((xs - f.grid.x_lo) / f.grid.dx).ravel(), ((ps - f.grid.p_lo) / f.grid.dp).ravel()]
    samples = map_coordinates(f.values, coords, order=order, mode="constant", cval=0.0)
    return samples.reshape(xs.shape)


def marginal_density(
    f: PhaseSpaceField,
    a: float,
    b: float,
    zgrid: Optional[Sequence[float]] = None,
    order: Optional[int] = None,
) -> LineDensity:
    """g(z): the field integrated along a·x + b·p = z

    With |b| >= |a| the line is parametrized by x and weighted 1/|b|, otherwise by
    p and weighted 1/|a|. Off-grid values come from spline interpolation of the
    given order, zero outside the grid.
    """
    _check_direction(a, b)
    z = f.x if zgrid is None else np.asarray(zgrid, dtype=float)
    order = WIGNER["interpolation_order"] if order is None else order
    if abs(b) >= abs(a):
        xs = np.broadcast_to(f.x[None, :], (z.size, f.x.size))
        ps = (z[:, None] - a * xs) / b
        values = trapezoid(_sample_field(f, xs, ps, order), f.x, axis=1) / abs(b)
    else:
        ps = np.broadcast_to(f.p[None, :], (z.size, f.p.size))
        xs = (z[:, None] - b * ps) / a
        values = trapezoid(_sample_field(f, xs, ps, order), f.p, axis=1) / abs(a)
    return LineDensity(z, values, a, b)


def qm_line_density(psi: WaveFunction, a: float, b: float, zgrid: Sequence[float]) -> LineDensity:
    """Density of the observable aX + bP in state ψ

    With |b| >= |a|, ψ is multiplied by the chirp e^{i(a/b)x²/2ħ} and Fourier
    transformed; the squared modulus at z/b, scaled by 1/|b|, is the density.
    Otherwise the momentum wave function gets the chirp e^{−i(b/a)p²/2ħ} and is
    transformed back, evaluated at z/a and scaled by 1/|a|. b = 0 reduces to
    |ψ(z/a)|²/|a|.
    """
    _check_direction(a, b)
    z = np.asarray(zgrid, dtype=float)
    hbar = psi.hbar
    if b == 0:
        values = np.abs(psi(z / a)) ** 2 / abs(a)
    elif abs(b) >= abs(a):
        y = psi.work_grid()
        chirped = psi(y) * np.exp(1j * (a / b) * y**2 / (2 * hbar))
        values = np.abs(_fourier(chirped, y, z / b, hbar, -1)) ** 2 / abs(b)
    else:
        q = psi.momentum_grid()
        chirped = psi.momentum(q) * np.exp(-1j * (b / a) * q**2 / (2 * hbar))
        values = np.abs(_fourier(chirped, q, z / a, hbar, 1)) ** 2 / abs(a)
    return LineDensity(z, values, a, b)


def weyl_characteristic(psi: WaveFunction, alpha, beta):
    """⟨ψ|e^{−i(αX+βP)}|ψ⟩ = e^{iαβħ/2}∫ψ*(y)e^{−iαy}ψ(y−βħ)dy

    Scalars give a complex number; arrays broadcast elementwise.
    """
    alpha_arr, beta_arr = np.broadcast_arrays(np.asarray(alpha, dtype=float), np.asarray(beta, dtype=float))
    al, be = alpha_arr.ravel(), beta_arr.ravel()
    y = psi.work_grid()
    weights = _uniform_weights(y.size, y[1] - y[0])
    left = np.conj(psi(y)) * weights
    shifted = psi(y[None, :] - be[:, None] * psi.hbar)
    phase = np.exp(-1j * np.outer(al, y))
    values = np.exp(1j * al * be * psi.hbar / 2) * np.einsum("n,mn,mn->m", left, phase, shifted)
    values = values.reshape(alpha_arr.shape)
    return complex(values) if values.ndim == 0 else values


def characteristic_consistency(
    psi: WaveFunction, a: float, b: float, zeta: float, zgrid: Optional[Sequence[float]] = None
) -> float:
    """|∫g(z)e^{−iζz}dz − ⟨ψ|e^{−iζ(aX+bP)}|ψ⟩| with g the quantum line density"""
    _check_direction(a, b)
    if zgrid is None:
        reach = abs(a) * psi.radius + abs(b) * psi.momentum_radius
        zgrid = np.linspace(-reach, reach, 2 * WIGNER["work_points"] + 1)
    g = qm_line_density(psi, a, b, zgrid)
    transform = trapezoid(g.values * np.exp(-1j * zeta * g.z), g.z)
    return float(abs(transform - weyl_characteristic(psi, a * zeta, b * zeta)))


def field_fourier(f: PhaseSpaceField, xi, eta):
    """f̂(ξ, η) = (1/2π)∬f(x,p)e^{−i(ξx+ηp)}dx dp"""
    xi_arr, eta_arr = np.broadcast_arrays(np.asarray(xi, dtype=float), np.asarray(eta, dtype=float))
    wx = _uniform_weights(f.grid.n_x, f.grid.dx)
    wp = _uniform_weights(f.grid.n_p, f.grid.dp)
    ex = np.exp(-1j * np.outer(xi_arr.ravel(), f.x)) * wx
    ep = np.exp(-1j * np.outer(eta_arr.ravel(), f.p)) * wp
    values = np.einsum("mi,ij,mj->m", ex, f.values, ep) / (2 * math.pi)
    values = values.reshape(xi_arr.shape)
    return complex(values) if values.ndim == 0 else values


def _effective_bandwidth(psi: WaveFunction) -> float:
    """Radius beyond which the characteristic function is below truncation on both axes"""
    zeta = np.linspace(0.0, 100.0, 801)
    along_x = np.abs(weyl_characteristic(psi, zeta, np.zeros_like(zeta)))
    along_p = np.abs(weyl_characteristic(psi, np.zeros_like(zeta), zeta))
    above = np.flatnonzero(np.maximum(along_x, along_p) >= WIGNER["truncation"])
    return float(zeta[min(above[-1] + 1, zeta.size - 1)])


def _phase_radius(psi: WaveFunction) -> float:
    """Reach of the position and momentum densities at the angular tolerance"""
    amplitude = math.sqrt(WIGNER["angular_tolerance"])
    rx = _decay_radius(psi, psi.radius, amplitude)
    rp = _decay_radius(psi.momentum, psi.momentum_radius, amplitude)
    return max(rx, rp)


def reconstruct_from_marginals(
    psi: WaveFunction, ray_count: Optional[int] = None, grid: Optional[PhaseGrid] = None
) -> PhaseSpaceField:
    """Rebuild the phase-space field from the characteristic function on rays

    Ray k at angle πk/R carries ⟨ψ|e^{−iζ(cos θ X + sin θ P)}|ψ⟩ for ζ in
    [−ζ_eff, ζ_eff], the Fourier transform of the line density in that direction.
    The polar table is spline-interpolated onto a Cartesian frequency lattice
    dual to the grid and inverse transformed.
    """
    grid = grid or PhaseGrid.default()
    rays = WIGNER["rays"] if ray_count is None else ray_count
    if rays < 8:
        raise GridResolutionError(f"{rays} rays is below the minimum of 8", 8)
    zeta_eff = _effective_bandwidth(psi)
    needed = math.ceil(_phase_radius(psi) * zeta_eff)
    if rays < needed:
        raise GridResolutionError(f"{rays} rays undersample the angular content of the state", needed)

    with timed("reconstruct", state=psi.family, rays=rays, n_x=grid.n_x, n_p=grid.n_p) as outcome:
        d_alpha = 2 * math.pi / (grid.n_x * grid.dx)
        d_beta = 2 * math.pi / (grid.n_p * grid.dp)
        alphas = d_alpha * np.arange(-math.ceil(zeta_eff / d_alpha), math.ceil(zeta_eff / d_alpha) + 1)
        betas = d_beta * np.arange(-math.ceil(zeta_eff / d_beta), math.ceil(zeta_eff / d_beta) + 1)
        n_zeta = WIGNER["radial_oversampling"] * max(grid.n_x, grid.n_p) + 1
        zetas = np.linspace(-zeta_eff, zeta_eff, n_zeta)

        table = np.empty((rays, n_zeta), dtype=complex)
        for k in range(rays):
            theta = math.pi * k / rays
            table[k] = weyl_characteristic(psi, zetas * math.cos(theta), zetas * math.sin(theta))

        # θ + π is the ray θ walked backwards
        pad = 3
        ks = range(-pad, rays + pad)
        padded = np.array([table[k % rays][::-1] if (k // rays) % 2 else table[k % rays] for k in ks])
        thetas = math.pi * np.arange(-pad, rays + pad) / rays
        order = WIGNER["polar_order"]
        real = RectBivariateSpline(thetas, zetas, padded.real, kx=order, ky=order)
        imag = RectBivariateSpline(thetas, zetas, padded.imag, kx=order, ky=order)

        A, B = np.meshgrid(alphas, betas, indexing="ij")
        radius = np.hypot(A, B)
        angle = np.arctan2(B, A)
        theta = np.where(angle < 0, angle + math.pi, angle)
        signed = np.where(angle < 0, -radius, radius)
        chi = real.ev(theta, signed) + 1j * imag.ev(theta, signed)
        chi[radius > zeta_eff] = 0

        ex = np.exp(1j * np.outer(grid.x, alphas))
        ep = np.exp(1j * np.outer(grid.p, betas))
        values = ex @ chi @ ep.T * (d_alpha * d_beta / (4 * math.pi**2))
        field = PhaseSpaceField(grid, values.real, psi.hbar, float(np.max(np.abs(values.imag))))
        outcome.update(zeta_eff=zeta_eff, radial_points=n_zeta, lattice=[alphas.size, betas.size])
    return field


def verify_marginals(
    psi: WaveFunction, grid: Optional[PhaseGrid] = None, directions: Optional[int] = None
) -> Dict[str, float]:
    """Compare marginals of the Wigner field with the quantum line densities"""
    grid = grid or PhaseGrid.default()
    directions = WIGNER["directions"] if directions is None else directions
    field = wigner_density(psi, grid)
    z = field.x
    deviation, density_residual = 0.0, 0.0
    for k in range(directions):
        theta = math.pi * k / directions
        a, b = math.cos(theta), math.sin(theta)
        from_field = marginal_density(field, a, b, z)
        oracle = qm_line_density(psi, a, b, z)
        deviation = max(deviation, float(np.max(np.abs(from_field.values - oracle.values))))
        density_residual = max(density_residual, abs(oracle.mass - 1), abs(from_field.mass - 1))
    value, x_min, p_min = field.min()
    return {
        "max_marginal_deviation": deviation,
        "normalization_residual": abs(field.normalization() - 1),
        "density_normalization_residual": density_residual,
        "imag_residue": field.imag_residue,
        "min_value": value,
        "min_x": x_min,
        "min_p": p_min,
        "origin_value": field.value_at(0.0, 0.0),
    }


def verify_reconstruction(
    psi: WaveFunction, ray_count: Optional[int] = None, grid: Optional[PhaseGrid] = None
) -> Dict[str, float]:
    grid = grid or PhaseGrid.default()
    forward = wigner_density(psi, grid)
    rebuilt = reconstruct_from_marginals(psi, ray_count, grid)
    return {
        "max_reconstruction_deviation": float(np.max(np.abs(rebuilt.values - forward.values))),
        "reconstructed_origin_value": rebuilt.value_at(0.0, 0.0),
        "rays": WIGNER["rays"] if ray_count is None else ray_count,
    }
