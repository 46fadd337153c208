import numpy as np
import pytest

from hyperlab.measures import (HyperbolaMeasure, Measure1D, MeasureError,
                               Piece, compress_pi1, compress_pi2,
                               piece_from_family, pushforward_inversion,
                               restrict, total_variation)


def cauchy1p_measure():
    return Measure1D(pieces=(
        piece_from_family(0.0, 1.0, "cauchy1p", {"scale": 1.0 + 0.0j},
                          np.log(2.0)),))


class TestMeasure1D:
    def test_overlapping_pieces_rejected(self):
        p1 = Piece(0.0, 2.0, lambda t: np.ones_like(t), 2.0)
        p2 = Piece(1.0, 3.0, lambda t: np.ones_like(t), 2.0)
        with pytest.raises(MeasureError):
            Measure1D(pieces=(p1, p2))

    def test_empty_piece_rejected(self):
        with pytest.raises(MeasureError):
            Piece(1.0, 1.0, lambda t: t, 0.0)

    def test_density_at_respects_support(self):
        mu = cauchy1p_measure()
        t = np.array([-0.5, 0.5, 1.5])
        vals = mu.density_at(t)
        assert vals[0] == 0.0
        assert vals[1] == pytest.approx(1.0 / 1.5)
        assert vals[2] == 0.0

    def test_scaled_scales_density_and_tv(self):
        mu = cauchy1p_measure().scaled(2.0 - 1.0j)
        assert mu.density_at(np.array([0.5]))[0] == pytest.approx(
            (2.0 - 1.0j) / 1.5)
        assert mu.pieces[0].tv_bound == pytest.approx(
            abs(2.0 - 1.0j) * np.log(2.0))


class TestTotalVariation:
    def test_atoms_plus_density(self):
        mu = Measure1D(atoms=((2.0, 3.0 + 4.0j),),
                       pieces=cauchy1p_measure().pieces)
        # |3+4i| + int_0^1 dt/(1+t) = 5 + log 2
        assert total_variation(mu) == pytest.approx(5.0 + np.log(2.0),
                                                    abs=1e-10)

    def test_zero_measure(self):
        assert total_variation(Measure1D()) == 0.0


class TestRestrict:
    def test_restrict_halves_support(self):
        mu = cauchy1p_measure()
        left = restrict(mu, 0.0, 0.5)
        assert total_variation(left) == pytest.approx(np.log(1.5), abs=1e-10)

    def test_restrict_drops_outside_atoms(self):
        mu = Measure1D(atoms=((0.25, 1.0), (0.75, 1.0)))
        assert restrict(mu, 0.5, 1.0).atoms == ((0.75, 1.0),)


class TestHyperbolaMeasure:
    def test_atom_at_zero_rejected(self):
        with pytest.raises(MeasureError):
            HyperbolaMeasure(2.0 * np.pi, Measure1D(atoms=((0.0, 1.0),)))

    def test_piece_straddling_zero_rejected(self):
        bad = Measure1D(pieces=(
            Piece(-1.0, 1.0, lambda t: np.ones_like(t), 2.0),))
        with pytest.raises(MeasureError):
            HyperbolaMeasure(2.0 * np.pi, bad)

    def test_nonpositive_m_rejected(self):
        with pytest.raises(MeasureError):
            HyperbolaMeasure(0.0, Measure1D())


class TestCompressions:
    def test_pi1_preserves_mass(self):
        mu = HyperbolaMeasure(2.0 * np.pi, cauchy1p_measure())
        assert compress_pi1(mu) is mu.pi1

    def test_pi2_atom_location(self):
        # atom at t=1 on Gamma_{2pi} sits at x2 = -m^2/(4 pi^2 t) = -1
        mu = HyperbolaMeasure(2.0 * np.pi, Measure1D(atoms=((1.0, 1.0),)))
        nu = compress_pi2(mu)
        assert nu.atoms[0][0] == pytest.approx(-1.0)

    def test_pi2_preserves_total_variation(self):
        mu = HyperbolaMeasure(2.0 * np.pi, cauchy1p_measure())
        nu = compress_pi2(mu)
        assert total_variation(nu) == pytest.approx(
            total_variation(mu.pi1), rel=1e-8)

    def test_inversion_pushforward_density(self):
        # t -> 1/t pushes dt/(1+t) on [0,1) to dt/(t(1+t)) on (1, inf)
        nu = pushforward_inversion(cauchy1p_measure(), 1.0)
        t = np.array([2.0, 3.0])
        assert np.allclose(nu.density_at(t), 1.0 / (t * (1.0 + t)))


class TestTailBounds:
    def test_certified_tail_majorant(self):
        pc = Piece(0.0, np.inf, lambda t: 1.0 / (1.0 + np.asarray(t)) ** 2,
                   1.0, params={"tail_c": 1.0, "tail_p": 2.0})
        assert pc.tail_bound(10.0) == pytest.approx(0.1)

    def test_infinite_piece_without_majorant_rejected(self):
        pc = Piece(0.0, np.inf, lambda t: np.exp(-np.asarray(t)), 1.0)
        with pytest.raises(MeasureError):
            pc.tail_bound(10.0)

    def test_tail_beyond_finite_support_is_zero(self):
        pc = cauchy1p_measure().pieces[0]
        assert pc.tail_bound(2.0) == 0.0
