"""
Phase-space tests.

Wigner fields of oscillator eigenstates against their closed forms, line marginals
against quantum line densities, characteristic functions and reconstruction from rays.
"""

import math

import numpy as np
import pytest
from scipy.integrate import trapezoid

from negprob.errors import DegenerateDirectionError, GridResolutionError, ParseError, StateError
from negprob.wigner import (
    PhaseGrid,
    PhaseSpaceField,
    WaveFunction,
    analytic_wigner,
    characteristic_consistency,
    coherent_state,
    field_fourier,
    hermite_state,
    marginal_density,
    parse_state,
    qm_line_density,
    reconstruct_from_marginals,
    sampled_state,
    verify_marginals,
    verify_reconstruction,
    weyl_characteristic,
    wigner_density,
)


def _normal(z, variance):
    return np.exp(-z**2 / (2 * variance)) / math.sqrt(2 * math.pi * variance)


class TestStates:
    """Wave functions and their construction."""

    def test_hermite_norm(self, gaussian, first_excited):
        assert abs(gaussian.norm() - 1) < 1e-12
        assert abs(first_excited.norm() - 1) < 1e-12
        assert gaussian.family == "gaussian"
        assert first_excited.family == "hermite:1"

    def test_hermite_momentum(self, first_excited):
        p = np.linspace(-3, 3, 7)
        assert first_excited.momentum_evaluator is not None
        y = first_excited.work_grid()
        # transform the position samples directly and compare with (−i)ψ(p)
        direct = np.array([trapezoid(first_excited(y) * np.exp(-1j * q * y), y) for q in p]) / math.sqrt(2 * math.pi)
        assert np.max(np.abs(direct - first_excited.momentum(p))) < 1e-10

    def test_support_is_truncated(self, gaussian):
        lo, hi = gaussian.support
        assert lo == -hi
        assert abs(gaussian(hi)) < 1e-11
        assert 7 < hi < 8

    def test_unnormalized_rejected(self):
        with pytest.raises(StateError):
            WaveFunction(lambda x: 2 * np.exp(-x**2 / 2), (-8.0, 8.0), "bad")

    def test_negative_index(self):
        with pytest.raises(StateError):
            hermite_state(-1)

    @pytest.mark.parametrize(
        "spec", ["hermite:x", "cat", "sampled:/no/such/file.txt", "coherent:1", "coherent:a,b", "coherent:inf,0"]
    )
    def test_parse_state_errors(self, spec):
        with pytest.raises(ParseError):
            parse_state(spec)

    def test_parse_state(self):
        assert parse_state("gaussian").family == "gaussian"
        assert parse_state("hermite:2").family == "hermite:2"
        assert parse_state("coherent:1,0.7").family == "coherent:1,0.7"
        assert parse_state(" coherent:-2.5,0 ").family == "coherent:-2.5,0"

    def test_sampled_state(self, tmp_path, gaussian):
        x = np.linspace(-8, 8, 1601)
        path = tmp_path / "gaussian.txt"
        np.savetxt(path, np.column_stack([x, 3 * np.real(gaussian(x))]))
        psi = sampled_state(path)
        assert abs(psi.norm() - 1) < 1e-8
        t = np.array([-1.3, 0.0, 0.7])
        assert np.max(np.abs(psi(t) - gaussian(t))) < 1e-6
        assert psi(9.0) == 0
        print(f"✅ Sampled state momentum support {psi.momentum_support}")

    def test_sampled_state_with_phase(self, tmp_path, gaussian):
        x = np.linspace(-8, 8, 1601)
        values = gaussian(x) * np.exp(0.5j * x)
        path = tmp_path / "kicked.txt"
        np.savetxt(path, np.column_stack([x, values.real, values.imag]))
        psi = parse_state(f"sampled:{path}")
        assert abs(psi(0.7) - gaussian(0.7) * np.exp(0.35j)) < 1e-6
        assert abs(psi.norm() - 1) < 1e-8

    def test_sampled_state_errors(self, tmp_path):
        one_column = tmp_path / "one.txt"
        np.savetxt(one_column, np.linspace(0, 1, 10))
        with pytest.raises(ParseError):
            sampled_state(one_column)
        backwards = tmp_path / "backwards.txt"
        np.savetxt(backwards, np.column_stack([np.linspace(1, 0, 10), np.ones(10)]))
        with pytest.raises(ParseError):
            sampled_state(backwards)
        zeros = tmp_path / "zeros.txt"
        np.savetxt(zeros, np.column_stack([np.linspace(0, 1, 10), np.zeros(10)]))
        with pytest.raises(StateError):
            sampled_state(zeros)


class TestGrid:
    """PhaseGrid parsing and the field text format."""

    def test_default(self):
        g = PhaseGrid.parse("default")
        assert (g.n_x, g.n_p) == (256, 256)
        assert g.x[0] == -8 and g.x[-1] == 8

    def test_parse(self):
        g = PhaseGrid.parse("-4, 4, 64, -2, 2, 32")
        assert (g.x_lo, g.x_hi, g.n_x, g.p_lo, g.p_hi, g.n_p) == (-4, 4, 64, -2, 2, 32)
        assert g.refined().n_x == 128

    @pytest.mark.parametrize("text", ["1,2,3", "a,b,c,d,e,f", "4,-4,64,-4,4,64", "-4,4,1,-4,4,64"])
    def test_parse_errors(self, text):
        with pytest.raises(ParseError):
            PhaseGrid.parse(text)

    def test_field_text_round_trip(self):
        grid = PhaseGrid(-2, 2, 5, -2, 2, 7)
        field = analytic_wigner(1, grid)
        again = PhaseSpaceField.from_text(field.to_text())
        assert again.grid == grid
        assert np.array_equal(again.values, field.values)
        assert field.to_text().splitlines()[0] == "-2.0 2.0 5 -2.0 2.0 7 1.0"

    def test_malformed_field_text(self):
        with pytest.raises(ParseError):
            PhaseSpaceField.from_text("garbage\n1 2 3\n")
        with pytest.raises(ParseError):
            PhaseSpaceField.from_text("-2 2 3 -2 2 3 1\n1 2 3\n")


class TestWignerDensity:
    """Forward fields against ((−1)^n/πħ)·e^{−r²/ħ}·L_n(2r²/ħ)."""

    def test_gaussian_pointwise(self, gaussian_field, default_grid):
        exact = analytic_wigner(0, default_grid)
        assert np.max(np.abs(gaussian_field.values - exact.values)) < 1e-6

    def test_excited_pointwise(self, excited_field, default_grid):
        exact = analytic_wigner(1, default_grid)
        assert np.max(np.abs(excited_field.values - exact.values)) < 1e-6

    def test_excited_is_negative_at_origin(self, excited_field):
        w0 = excited_field.value_at(0.0, 0.0)
        assert abs(w0 + 1 / math.pi) < 1e-4
        value, x, p = excited_field.min()
        assert value < -0.31
        assert abs(x) < 0.1 and abs(p) < 0.1
        print(f"✅ W(0, 0) = {w0:.6f}, -1/π = {-1 / math.pi:.6f}")

    def test_normalization_and_residue(self, gaussian_field, excited_field):
        for field in (gaussian_field, excited_field):
            assert abs(field.normalization() - 1) < 1e-6
            assert field.imag_residue < 1e-10

    def test_hbar(self):
        grid = PhaseGrid.default()
        field = wigner_density(hermite_state(0, 0.5), grid)
        assert np.max(np.abs(field.values - analytic_wigner(0, grid, 0.5).values)) < 1e-6

    def test_coarse_grid_is_refused(self, gaussian):
        with pytest.raises(GridResolutionError) as info:
            wigner_density(gaussian, PhaseGrid(-8, 8, 32, -8, 8, 32))
        assert info.value.required == 83
        assert info.value.exit_code == 2
        print(f"✅ {info.value.detail}")


class TestMarginals:
    """Line marginals of the field and quantum line densities."""

    def test_position_marginal(self, gaussian_field, gaussian):
        z = gaussian_field.x
        g = marginal_density(gaussian_field, 1.0, 0.0)
        assert np.max(np.abs(g.values - np.abs(gaussian(z)) ** 2)) < 1e-5
        assert abs(g.mass - 1) < 1e-6

    def test_excited_position_marginal(self, excited_field, first_excited):
        z = excited_field.x
        g = marginal_density(excited_field, 1.0, 0.0)
        assert np.max(np.abs(g.values - np.abs(first_excited(z)) ** 2)) < 1e-5

    @pytest.mark.parametrize("theta", [math.pi / 6, math.pi / 3, math.pi / 2, 2 * math.pi / 3])
    def test_rotated_gaussian_marginals(self, gaussian_field, theta):
        z = np.linspace(-5, 5, 101)
        g = marginal_density(gaussian_field, math.cos(theta), math.sin(theta), z)
        assert np.max(np.abs(g.values - _normal(z, 0.5))) < 1e-4

    def test_scaling(self, gaussian_field):
        z = np.linspace(-4, 4, 41)
        g = marginal_density(gaussian_field, 0.6, 0.8, z)
        scaled = marginal_density(gaussian_field, 1.2, 1.6, 2 * z)
        assert np.max(np.abs(2 * scaled.values - g.values)) < 1e-12

    def test_degenerate_direction(self, gaussian_field, gaussian):
        with pytest.raises(DegenerateDirectionError):
            marginal_density(gaussian_field, 0.0, 0.0)
        with pytest.raises(DegenerateDirectionError):
            qm_line_density(gaussian, 0, 0, [0.0])
        with pytest.raises(DegenerateDirectionError):
            characteristic_consistency(gaussian, 0, 0, 1.0)

    @pytest.mark.parametrize("a,b", [(1.0, 0.0), (0.0, 1.0), (1.0, 2.0), (2.0, 1.0), (-0.6, 0.8)])
    def test_quantum_gaussian_densities(self, gaussian, a, b):
        z = np.linspace(-6, 6, 121)
        g = qm_line_density(gaussian, a, b, z)
        assert np.max(np.abs(g.values - _normal(z, (a * a + b * b) / 2))) < 1e-7

    def test_quantum_excited_momentum_density(self, first_excited):
        z = np.linspace(-5, 5, 51)
        g = qm_line_density(first_excited, 0.0, 1.0, z)
        assert np.max(np.abs(g.values - np.abs(first_excited(z)) ** 2)) < 1e-8

    @pytest.mark.parametrize("a,b", [(1.0, 0.5), (0.5, 1.0)])
    def test_line_probability_scaling(self, first_excited, a, b):
        z = np.linspace(-12, 12, 481)
        g = qm_line_density(first_excited, a, b, z)
        scaled = qm_line_density(first_excited, 2 * a, 2 * b, 2 * z)
        assert abs(g.probability(-1.0, 0.5) - scaled.probability(-2.0, 1.0)) < 1e-6
        assert abs(g.probability(-100, 100) - 1) < 1e-6
        assert g.probability(1.0, 1.0) == 0.0

    def test_field_marginals_match_quantum_densities(self, excited_field, first_excited):
        z = excited_field.x
        for theta in (math.pi / 5, 3 * math.pi / 5):
            a, b = math.cos(theta), math.sin(theta)
            from_field = marginal_density(excited_field, a, b, z)
            oracle = qm_line_density(first_excited, a, b, z)
            assert np.max(np.abs(from_field.values - oracle.values)) < 1e-4

    @pytest.mark.parametrize("state,field", [("gaussian", "gaussian_field"), ("first_excited", "excited_field")])
    def test_every_line_density_has_unit_mass(self, request, state, field):
        psi, f = request.getfixturevalue(state), request.getfixturevalue(field)
        for k in range(16):
            theta = math.pi * k / 16
            a, b = math.cos(theta), math.sin(theta)
            assert abs(marginal_density(f, a, b, f.x).mass - 1) < 1e-6, theta
            assert abs(qm_line_density(psi, a, b, f.x).mass - 1) < 1e-6, theta

    def test_line_density_text(self, gaussian):
        g = qm_line_density(gaussian, 1.0, 0.0, [-1.0, 0.0, 1.0])
        lines = g.to_text().splitlines()
        assert lines[0] == "1.0 0.0 3"
        assert len(lines) == 4


class TestCharacteristic:
    """Weyl characteristic function and its consistency with line densities."""

    def test_unit_at_origin(self, first_excited):
        assert abs(weyl_characteristic(first_excited, 0.0, 0.0) - 1) < 1e-8

    def test_gaussian_closed_form(self, gaussian):
        alpha = np.array([0.0, 0.5, -1.0, 2.0, 3.0])
        beta = np.array([1.0, -0.5, 2.0, 0.0, -1.5])
        chi = weyl_characteristic(gaussian, alpha, beta)
        assert np.max(np.abs(chi - np.exp(-(alpha**2 + beta**2) / 4))) < 1e-8

    def test_conjugate_symmetry(self, first_excited):
        chi = weyl_characteristic(first_excited, 0.7, -1.1)
        assert isinstance(chi, complex)
        assert abs(weyl_characteristic(first_excited, -0.7, 1.1) - chi.conjugate()) < 1e-8

    @pytest.mark.parametrize("a,b,zeta", [(1.0, 0.0, 1.0), (0.0, 1.0, 0.5), (0.6, 0.8, 2.0), (1.0, -0.3, 1.5)])
    def test_consistency(self, first_excited, a, b, zeta):
        assert characteristic_consistency(first_excited, a, b, zeta) < 1e-6

    def test_field_fourier_is_characteristic(self, excited_field, first_excited):
        xi = np.array([0.0, 0.4, -1.0, 1.5])
        eta = np.array([0.0, 1.0, 0.3, -2.0])
        chi = weyl_characteristic(first_excited, xi, eta)
        assert np.max(np.abs(2 * math.pi * field_fourier(excited_field, xi, eta) - chi)) < 1e-6

    def test_projection_slice(self, gaussian_field):
        # unitary 1D transform of a marginal is √(2π) times the 2D transform on the matching line
        a, b, zeta = 0.6, 0.8, 1.3
        g = marginal_density(gaussian_field, a, b, np.linspace(-8, 8, 801))
        g_hat = trapezoid(g.values * np.exp(-1j * zeta * g.z), g.z) / math.sqrt(2 * math.pi)
        assert abs(g_hat - math.sqrt(2 * math.pi) * field_fourier(gaussian_field, zeta * a, zeta * b)) < 1e-5


X0, P0 = 1.0, 0.7


class TestCoherent:
    """A displaced Gaussian off both axes on a window that is not centred at the origin.

    Its field, line densities and characteristic function all have closed forms,
    so a sign flip in a shift or a chirp shows up as a moved peak.
    """

    def test_momentum_representation(self, coherent):
        p = np.linspace(-3, 4, 8)
        y = coherent.work_grid()
        direct = np.array([trapezoid(coherent(y) * np.exp(-1j * q * y), y) for q in p]) / math.sqrt(2 * math.pi)
        assert np.max(np.abs(direct - coherent.momentum(p))) < 1e-10

    def test_field_closed_form(self, coherent_field, coherent_grid):
        X, P = np.meshgrid(coherent_grid.x, coherent_grid.p, indexing="ij")
        exact = np.exp(-((X - X0) ** 2 + (P - P0) ** 2)) / math.pi
        assert np.max(np.abs(coherent_field.values - exact)) < 1e-6
        assert abs(coherent_field.normalization() - 1) < 1e-6
        assert coherent_field.imag_residue < 1e-10
        assert coherent_field.min()[0] > -1e-6
        print(f"✅ Peak {coherent_field.value_at(X0, P0):.6f} at ({X0}, {P0})")

    @pytest.mark.parametrize("a,b", [(1.0, 0.0), (0.0, 1.0), (0.6, 0.8), (-0.8, 0.6), (1.0, -2.0), (2.0, 0.5)])
    def test_line_densities(self, coherent, coherent_field, a, b):
        mean, variance = a * X0 + b * P0, (a * a + b * b) / 2
        z = mean + np.linspace(-4, 4, 81)
        exact = _normal(z - mean, variance)
        assert np.max(np.abs(qm_line_density(coherent, a, b, z).values - exact)) < 1e-7
        assert np.max(np.abs(marginal_density(coherent_field, a, b, z).values - exact)) < 1e-4

    def test_characteristic_closed_form(self, coherent):
        alpha = np.array([0.0, 0.5, -1.0, 2.0, 3.0, -2.5])
        beta = np.array([1.0, -0.5, 2.0, 0.0, -1.5, -2.0])
        exact = np.exp(-(alpha**2 + beta**2) / 4 - 1j * (alpha * X0 + beta * P0))
        assert np.max(np.abs(weyl_characteristic(coherent, alpha, beta) - exact)) < 1e-8

    @pytest.mark.parametrize("a,b,zeta", [(1.0, 0.0, 1.0), (0.0, 1.0, 1.5), (0.6, 0.8, 2.0), (1.0, -0.3, 1.5)])
    def test_consistency(self, coherent, a, b, zeta):
        assert characteristic_consistency(coherent, a, b, zeta) < 1e-6

    def test_hbar(self):
        grid = PhaseGrid(-6.0, 8.0, 256, -6.5, 7.5, 256)
        field = wigner_density(coherent_state(X0, P0, 0.5), grid)
        X, P = np.meshgrid(grid.x, grid.p, indexing="ij")
        exact = np.exp(-((X - X0) ** 2 + (P - P0) ** 2) / 0.5) / (0.5 * math.pi)
        assert np.max(np.abs(field.values - exact)) < 1e-6

    @pytest.mark.slow
    def test_reconstruction(self, coherent, coherent_field, coherent_grid):
        rebuilt = reconstruct_from_marginals(coherent, 64, coherent_grid)
        deviation = np.max(np.abs(rebuilt.values - coherent_field.values))
        assert deviation < 1e-3
        print(f"✅ Coherent state rebuilt from 64 rays, max deviation {deviation:.2e}")


@pytest.mark.slow
class TestReconstruction:
    """Fields rebuilt from the characteristic function on rays."""

    def test_gaussian(self, gaussian, gaussian_field, default_grid):
        rebuilt = reconstruct_from_marginals(gaussian, 64, default_grid)
        deviation = np.max(np.abs(rebuilt.values - gaussian_field.values))
        assert deviation < 1e-3
        print(f"✅ Gaussian rebuilt from 64 rays, max deviation {deviation:.2e}")

    def test_excited_keeps_negative_origin(self, first_excited):
        metrics = verify_reconstruction(first_excited, 64)
        assert metrics["max_reconstruction_deviation"] < 5e-3
        assert metrics["reconstructed_origin_value"] < -0.3
        assert metrics["rays"] == 64

    def test_more_rays_do_not_hurt(self, first_excited, excited_field, default_grid):
        coarse = reconstruct_from_marginals(first_excited, 64, default_grid)
        fine = reconstruct_from_marginals(first_excited, 128, default_grid)
        e_coarse = np.max(np.abs(coarse.values - excited_field.values))
        e_fine = np.max(np.abs(fine.values - excited_field.values))
        assert e_fine <= e_coarse + 1e-9

    def test_refining_grid_and_rays_does_not_hurt(self, first_excited, excited_field, default_grid):
        fine_grid = default_grid.refined()
        coarse = reconstruct_from_marginals(first_excited, 64, default_grid)
        fine = reconstruct_from_marginals(first_excited, 128, fine_grid)
        e_coarse = np.max(np.abs(coarse.values - excited_field.values))
        e_fine = np.max(np.abs(fine.values - wigner_density(first_excited, fine_grid).values))
        assert (fine_grid.n_x, fine_grid.n_p) == (2 * default_grid.n_x, 2 * default_grid.n_p)
        assert e_fine <= e_coarse + 1e-9
        print(f"✅ Reconstruction error {e_coarse:.2e} on {default_grid.n_x}², {e_fine:.2e} on {fine_grid.n_x}²")

    def test_too_few_rays(self, gaussian):
        with pytest.raises(GridResolutionError) as info:
            reconstruct_from_marginals(gaussian, 4)
        assert info.value.required == 8
        with pytest.raises(GridResolutionError) as info:
            reconstruct_from_marginals(gaussian, 16)
        assert info.value.required > 16


@pytest.mark.slow
class TestVerification:
    """The metric dictionaries reported by the wigner command."""

    @pytest.mark.parametrize("spec,origin", [("gaussian", 1 / math.pi), ("hermite:1", -1 / math.pi)])
    def test_verify_marginals(self, spec, origin):
        metrics = verify_marginals(parse_state(spec), directions=16)
        assert metrics["max_marginal_deviation"] < 1e-4
        assert metrics["normalization_residual"] < 1e-6
        assert metrics["density_normalization_residual"] < 1e-6
        assert metrics["imag_residue"] < 1e-10
        assert abs(metrics["origin_value"] - origin) < 1e-4
        print(f"✅ {spec} marginal metrics: {metrics}")
