import numpy as np
import pytest

from hyperlab.annihilators import (annihilator_report, critical_annihilator,
                                   expanded_annihilator,
                                   periodization_sum1, periodization_sum2,
                                   periodized_residual,
                                   perturbed_equation_residual, piece_mass,
                                   symmetry_residual, total_mass)
from hyperlab.measures import Measure1D, MeasureError, Piece, \
    piece_from_family
from hyperlab.transfer import build_ulam, invariant_density

LOG2 = np.log(2.0)


class TestCriticalAnnihilator:
    def test_density_values(self):
        nu = critical_annihilator()
        assert nu.density_at(np.array([0.5]))[0] == pytest.approx(2.0 / 3.0)
        assert nu.density_at(np.array([2.0]))[0] == pytest.approx(-1.0 / 6.0)

    def test_total_mass_zero(self):
        assert abs(total_mass(critical_annihilator())) <= 1e-14

    def test_piece_masses_are_log2(self):
        nu = critical_annihilator()
        assert abs(piece_mass(nu.pieces[0])) == pytest.approx(LOG2,
                                                             abs=1e-12)
        assert abs(piece_mass(nu.pieces[1])) == pytest.approx(LOG2,
                                                             abs=1e-12)

    def test_pointwise_inversion_symmetry(self):
        # density identity nu'(1/t) t^-2 = -nu'(t)
        nu = critical_annihilator()
        t = np.array([0.2, 0.5, 0.9, 1.5, 3.0, 10.0])
        lhs = nu.density_at(1.0 / t) / t**2
        assert np.max(np.abs(lhs + nu.density_at(t))) <= 1e-14

    def test_symmetry_residual(self):
        assert symmetry_residual(critical_annihilator(), 1.0) <= 1e-12


class TestPeriodizedResidual:
    def test_critical_annihilator_residuals(self):
        r1, r2 = periodized_residual(critical_annihilator(), 1.0, 2000)
        assert r1 <= 1e-8
        assert r2 <= 1e-8

    def test_zero_measure(self):
        assert periodized_residual(Measure1D(), 1.0, 100) == (0.0, 0.0)

    def test_gauss_measure_alone_fails_first_sum(self):
        # dt/((1+t) log 2) on [0,1): invariant under the transfer action,
        # so the second periodization reproduces the density itself; the
        # j=0 term vanishes (no mass above 1).  It does not periodize to
        # zero (first sum large).
        varpi = Measure1D(pieces=(piece_from_family(
            0.0, 1.0, "cauchy1p", {"scale": 1.0 / LOG2}, 1.0),))
        t = (np.arange(500) + 0.5) / 500
        sum2 = periodization_sum2(varpi, 1.0, t)
        rho = np.array([varpi.density_at(x) for x in t])
        assert np.max(np.abs(sum2 - rho)) <= 1e-10
        r1, _ = periodized_residual(varpi, 1.0, 500)
        assert r1 > 0.1


class TestExpandedAnnihilator:
    @pytest.fixture(scope="class")
    def nu15(self):
        dens = invariant_density(build_ulam(1.5, 1024))
        return expanded_annihilator(1.5, dens)

    def test_rejects_gamma_at_most_one(self):
        dens = invariant_density(build_ulam(1.0, 64))
        with pytest.raises(MeasureError):
            expanded_annihilator(1.0, dens)

    def test_no_mass_in_gap(self, nu15):
        t = np.linspace(1.01, 1.49, 50)
        assert np.all(nu15.density_at(t) == 0.0)

    def test_total_mass_zero(self, nu15):
        assert abs(total_mass(nu15)) <= 1e-12

    def test_symmetry_exact_by_construction(self, nu15):
        assert symmetry_residual(nu15, 1.5) <= 1e-12

    def test_periodized_residuals_track_ulam_error(self, nu15):
        r1, r2 = periodized_residual(nu15, 1.5, 1000)
        assert r1 <= 1e-2
        assert r2 <= 1e-2


class TestPeriodizationSums:
    def test_sum1_matches_brute_force(self):
        nu = critical_annihilator()
        t = np.array([0.25, 0.5, 0.75])
        brute = np.zeros(3, dtype=complex)
        for j in range(0, 400_000):
            brute += nu.density_at(t + j)
        assert np.max(np.abs(periodization_sum1(nu, t) - brute)) <= 1e-5

    def test_sum2_matches_brute_force(self):
        nu = critical_annihilator()
        t = np.array([0.25, 0.5, 0.75])
        brute = np.zeros(3, dtype=complex)
        for j in range(0, 400_000):
            u = t + j
            brute += nu.density_at(1.0 / u) / u**2
        assert np.max(np.abs(periodization_sum2(nu, 1.0, t) - brute)) <= 1e-5


class TestAnnihilatorReport:
    def test_critical_report(self):
        rep = annihilator_report(1.0, grid_n=2000)
        assert rep.periodized_residual_sum1 <= 1e-8
        assert rep.periodized_residual_sum2 <= 1e-8
        assert abs(rep.total_mass) <= 1e-12

    def test_expanded_requires_density(self):
        with pytest.raises(MeasureError):
            annihilator_report(1.5)


class TestPerturbedEquation:
    def test_zero_inputs_give_zero(self):
        assert perturbed_equation_residual(Measure1D(), Measure1D(),
                                           1.5) == 0.0

    def test_invariant_density_with_zero_perturbation(self):
        dens = invariant_density(build_ulam(1.5, 1024))
        omega1 = Measure1D(pieces=(piece_from_family(
            0.0, 1.0, "binned", {"edges": dens.edges,
                                 "values": dens.values}, 1.0),))
        res = perturbed_equation_residual(omega1, Measure1D(), 1.5)
        assert res <= 5e-3  # Ulam discretization level

    def test_antisymmetric_bump_shifts_residual(self):
        gamma = 1.5

        def bump(t):
            t = np.asarray(t)
            # rho(gamma/t) gamma/t^2 = -rho(t) holds for this profile
            return np.cos(np.pi * np.log(t) / np.log(gamma)) / t

        omega2 = Measure1D(pieces=(Piece(1.0, gamma, bump, 1.0),))
        res = perturbed_equation_residual(Measure1D(), omega2, gamma)
        t = np.linspace(1e-3, 1.0 - 1e-3, 50)
        sup = np.max(np.abs(omega2.density_at(t + 1.0)))
        assert res == pytest.approx(sup, rel=0.1)
        assert res > 0.0

    def test_asymmetric_omega2_rejected(self):
        omega2 = Measure1D(pieces=(
            Piece(1.0, 1.5, lambda t: np.ones_like(np.asarray(t)), 0.5),))
        with pytest.raises(MeasureError):
            perturbed_equation_residual(Measure1D(), omega2, 1.5)

    def test_gamma_out_of_range_rejected(self):
        with pytest.raises(MeasureError):
            perturbed_equation_residual(Measure1D(), Measure1D(), 2.5)

    def test_gamma_two_warns(self):
        with pytest.warns(UserWarning):
            perturbed_equation_residual(Measure1D(), Measure1D(), 2.0)
