import numpy as np
import pytest
from scipy.integrate import quad

from hyperlab.fourier import ft_point
from hyperlab.hardy import (fourier_coeffs_periodic, hardy_defect,
                            hilbert_hyperbola, hilbert_line, inversion_j,
                            periodize_q2, timelike_witness, witness_l1_norm)
from hyperlab.measures import (HyperbolaMeasure, Measure1D, MeasureError,
                               Piece, total_variation)


def hardy_plus(conjugate=False):
    """f(t) = 1/(t + i)^2 (boundary value of a Hardy-class function) or
    its conjugate, as a two-piece measure split at 0."""
    sign = -1.0 if conjugate else 1.0

    def rho(t):
        return 1.0 / (np.asarray(t) + sign * 1j) ** 2

    return Measure1D(pieces=(
        Piece(-np.inf, 0.0, rho, 2.0, params={"tail_c": 1.0, "tail_p": 2.0}),
        Piece(0.0, np.inf, rho, 2.0, params={"tail_c": 1.0, "tail_p": 2.0})))


def cauchy_pair():
    """P_1 - P_2: a mass-zero, smooth, integrable test measure."""
    def rho(t):
        t = np.asarray(t)
        return (1.0 / (1.0 + t**2) - 2.0 / (4.0 + t**2)) / np.pi

    tp = {"tail_c": 1.0, "tail_p": 2.0}
    return Measure1D(pieces=(Piece(-np.inf, 0.0, rho, 1.0, params=tp),
                             Piece(0.0, np.inf, rho, 1.0, params=tp)))


class TestPeriodizeQ2:
    def test_mass_preserved(self):
        # Q2 periodization preserves total integral: int_0^2 g = int f
        f = cauchy_pair()
        g = periodize_q2(f, 2048)
        assert g.mass() == pytest.approx(0.0, abs=1e-8)

    def test_pointwise_against_closed_form(self):
        # sum_j 1/(x + 2j + i)^2 = (pi^2/4) / sin^2(pi (x + i)/2)
        f = hardy_plus()
        g = periodize_q2(f, 64)
        x = g.x[17]
        exact = (np.pi**2 / 4) / np.sin(np.pi * (x + 1j) / 2) ** 2
        assert g.samples[17] == pytest.approx(exact, abs=1e-10)


class TestHardyDefect:
    def test_hardy_function_has_tiny_defect(self):
        d = hardy_defect(hardy_plus(), 32, 2048)
        assert d.ratio <= 1e-6

    def test_conjugate_is_almost_entirely_negative(self):
        d = hardy_defect(hardy_plus(conjugate=True), 32, 2048)
        assert d.ratio >= 0.999

    def test_coefficient_mirror(self):
        # conjugation mirrors Fourier coefficients: c_n(conj f) = conj c_-n
        g = periodize_q2(hardy_plus(), 1024)
        gc = periodize_q2(hardy_plus(conjugate=True), 1024)
        c = fourier_coeffs_periodic(g, 8)
        cc = fourier_coeffs_periodic(gc, 8)
        assert np.allclose(cc, np.conj(c[::-1]), atol=1e-12)


class TestInversionJ:
    @pytest.fixture(scope="class")
    def families(self):
        tp = {"tail_c": 1.0, "tail_p": 2.0}
        return [
            Measure1D(pieces=(Piece(1.0, 2.0, lambda t: np.ones_like(
                np.asarray(t, dtype=float)), 1.0),)),
            Measure1D(pieces=(Piece(0.5, np.inf, lambda t: np.asarray(
                t, dtype=float) ** -2.0, 2.0, params=tp),)),
            Measure1D(pieces=(Piece(-2.0, -0.5, lambda t: 1.0 / (
                1.0 + np.asarray(t) ** 2), 1.0),)),
        ]

    def test_isometry(self, families):
        for beta in (1.0, 2.5):
            for f in families:
                assert total_variation(inversion_j(f, beta)) == \
                    pytest.approx(total_variation(f), abs=1e-10)

    def test_involution(self, families):
        for f in families:
            g = inversion_j(inversion_j(f, 1.5), 1.5)
            t = np.array([-1.7, -0.9, 0.6, 1.3, 1.9])
            assert np.max(np.abs(g.density_at(t) - f.density_at(t))) <= 1e-12

    def test_atom_maps_to_atom(self):
        f = Measure1D(atoms=((2.0, 1.0 + 1.0j),))
        g = inversion_j(f, 1.0)
        assert g.atoms[0][0] == pytest.approx(-0.5)
        # the p = 1 inversion is a total-variation isometry on atoms
        assert abs(g.atoms[0][1]) == pytest.approx(abs(1.0 + 1.0j),
                                                   abs=1e-14)

    def test_piece_straddling_zero_rejected(self):
        f = Measure1D(pieces=(
            Piece(-1.0, 1.0, lambda t: np.ones_like(np.asarray(t)), 2.0),))
        with pytest.raises(MeasureError):
            inversion_j(f, 1.0)


class TestHilbertLine:
    def test_cauchy_closed_form(self):
        def rho(t):
            return 1.0 / (np.pi * (1.0 + np.asarray(t) ** 2))

        tp = {"tail_c": 1.0 / np.pi, "tail_p": 2.0}
        f = Measure1D(pieces=(Piece(-np.inf, 0.0, rho, 0.5, params=tp),
                              Piece(0.0, np.inf, rho, 0.5, params=tp)))
        x = np.arange(-3.0, 3.5, 1.0)
        res = hilbert_line(f, x)
        exact = x / (np.pi * (1.0 + x**2))
        assert np.max(np.abs(res.values - exact)) <= 1e-6

    def test_involution_on_smooth_function(self):
        f = cauchy_pair()
        x = np.linspace(-2.0, 2.0, 9)
        h = hilbert_line(f, x)
        # H[P_1 - P_2](x) closed form, applied again via its own measure
        def h_rho(t):
            t = np.asarray(t)
            return (t / (1.0 + t**2) - t / (4.0 + t**2)) / np.pi

        tp = {"tail_c": 2.0, "tail_p": 2.0}
        hf = Measure1D(pieces=(Piece(-np.inf, 0.0, h_rho, 1.0, params=tp),
                               Piece(0.0, np.inf, h_rho, 1.0, params=tp)))
        assert np.max(np.abs(hilbert_line(hf, x).values
                             + f.density_at(x))) <= 5e-4
        assert np.max(np.abs(h.values - hf.density_at(x))) <= 1e-6


class TestHilbertHyperbola:
    def test_intertwining_routes_agree(self):
        f = cauchy_pair()
        t_grid = np.array([-2.0, -1.0, -0.5, 0.5, 1.0, 2.0])
        res = hilbert_hyperbola(HyperbolaMeasure(2.0 * np.pi, f), t_grid)
        assert res.agreement_sup <= 1e-6

    def test_nonzero_mass_rejected(self):
        bad = Measure1D(atoms=((1.0, 1.0),))
        with pytest.raises(MeasureError):
            hilbert_hyperbola(HyperbolaMeasure(2.0 * np.pi, bad),
                              np.array([1.0]))

    def test_sign_identity_on_axis(self):
        # FT(H f)(xi1, 0) = i sgn(xi1) FT(f)(xi1, 0) for the Cauchy pair,
        # using the closed-form Hilbert transform as the lifted measure
        def h_rho(t):
            t = np.asarray(t)
            return (t / (1.0 + t**2) - t / (4.0 + t**2)) / np.pi

        tp = {"tail_c": 2.0, "tail_p": 2.0}
        hf = HyperbolaMeasure(2.0 * np.pi, Measure1D(pieces=(
            Piece(-np.inf, 0.0, h_rho, 1.0, params=tp),
            Piece(0.0, np.inf, h_rho, 1.0, params=tp))))
        for xi1 in (-2.0, -1.0, 1.0, 2.0):
            lhs = ft_point(hf, (xi1, 0.0))
            # hat f(xi1) for P_1 - P_2 with the e^{i pi xi1 t} convention
            w = np.pi * abs(xi1)
            rhs = 1j * np.sign(xi1) * (np.exp(-w) - np.exp(-2.0 * w))
            assert lhs == pytest.approx(rhs, abs=1e-5)


class TestTimelikeWitness:
    def test_all_pairings_vanish(self):
        rows = timelike_witness(1j, 1.0, 3, 3)
        assert len(rows) == 8
        assert max(abs(r.value) for r in rows) <= 1e-6

    def test_l1_norm_positive(self):
        assert witness_l1_norm(1j) > 1.0

    def test_lower_half_plane_rejected(self):
        with pytest.raises(MeasureError):
            timelike_witness(-1j, 1.0, 2, 2)
