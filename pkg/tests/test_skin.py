import numpy as np
import pytest

from nhssh.model import imaginary_potential, non_reciprocal
from nhssh.skin import Side, localization_profile, nhse_verdict, verdict_from_profile
from nhssh.spectral import Spectrum, obc_spectrum, zero_modes


class TestProfile:
    def test_density_sums_to_state_count(self):
        prof = localization_profile(obc_spectrum(non_reciprocal(1, 2, 0.5, 1.3), 50))
        assert prof.site_density.sum() == pytest.approx(100)
        assert prof.edge_sites == 10
        w = np.array(prof.per_state_edge_weight)
        assert w.shape == (100, 2) and np.all((w >= 0) & (w <= 1 + 1e-12))

    def test_nonreciprocal_right_edge(self):
        prof = localization_profile(obc_spectrum(non_reciprocal(1, 2, 0.5, 1.3), 50), 100)
        assert np.mean(prof.right_weight > 0.6) >= 0.8

    def test_pt_model_two_edge_states(self):
        prof = localization_profile(obc_spectrum(imaginary_potential(1, 2, 2), 50))
        assert np.count_nonzero(prof.edge_weight > 0.6) == 2

    def test_hermitian_two_edge_states(self):
        prof = localization_profile(obc_spectrum(non_reciprocal(1, 2), 50))
        assert np.count_nonzero(prof.edge_weight > 0.6) == 2

    def test_missing_vectors(self):
        empty = Spectrum(np.zeros(0), np.zeros((0, 0)), np.zeros((0, 0)), 0.0,
                         np.zeros(0), np.zeros(0, bool))
        with pytest.raises(ValueError):
            localization_profile(empty)

    def test_site_count_mismatch(self):
        with pytest.raises(ValueError):
            localization_profile(obc_spectrum(non_reciprocal(1, 2), 5), 12)


class TestVerdict:
    @pytest.mark.parametrize("params", [
        non_reciprocal(1, 2, 0.5, 1.3),
        non_reciprocal(1, 0.5, 0.5, 0.3),
        non_reciprocal(1, 2, 0.5, 0.3),
        non_reciprocal(1, 0.5, 0.3, 0.15),
    ])
    def test_present_in_every_winding_sector(self, params):
        v = nhse_verdict(params, 50)
        assert v.present and v.side is Side.RIGHT and v.localized_fraction >= 0.8

    def test_flipping_both_signs_flips_side(self):
        v = nhse_verdict(non_reciprocal(1, 0.5, -0.5, -0.3), 50)
        assert v.present and v.side is Side.LEFT

    def test_flipping_delta1_only(self):
        # (t1-d1)(t2-d2) / ((t1+d1)(t2+d2)) = 0.4 / 0.3 > 1 keeps the accumulation on the right
        v = nhse_verdict(non_reciprocal(1, 0.5, -0.5, 0.3), 50)
        assert v.present and v.side is Side.RIGHT

    @pytest.mark.parametrize("params", [
        imaginary_potential(1, 2, 2),
        imaginary_potential(1, 0.5, 1),
        imaginary_potential(1, 2, 0.5),
        imaginary_potential(1, 2, 3.5),
    ])
    def test_absent_in_pt_model(self, params):
        v = nhse_verdict(params, 50)
        assert not v.present and v.side is Side.NONE

    def test_hermitian_absent(self):
        assert not nhse_verdict(non_reciprocal(1, 2), 50).present

    def test_mirror_under_sign_flip(self):
        a = localization_profile(obc_spectrum(non_reciprocal(1, 2, 0.5, 1.3), 50))
        b = localization_profile(obc_spectrum(non_reciprocal(1, 2, -0.5, -1.3), 50))
        np.testing.assert_allclose(a.site_density, b.site_density[::-1], atol=1e-6)

    def test_zero_modes_edge_localized(self):
        s = obc_spectrum(non_reciprocal(1, 2, 0.5, 0.3), 50)
        weight = localization_profile(s).edge_weight
        idx = zero_modes(s)
        assert idx.size == 2 and np.all(weight[idx] > 0.9)

    def test_thresholds_configurable(self):
        prof = localization_profile(obc_spectrum(non_reciprocal(1, 2, 0.5, 1.3), 50))
        assert not verdict_from_profile(prof, state_threshold=0.999999,
                                        population_threshold=1.0).present
