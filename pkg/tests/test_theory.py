import math

import pytest
from hypothesis import given, strategies as st

from mzsim.theory import (
    CorpuscularParams,
    E_SYSTEMATIC_REF,
    corpuscular_grouped,
    e_random_approx,
    mzi_amplitudes,
    qt_density_check,
    qt_fixed,
    qt_grouped,
    qt_ungrouped,
    visibility_shift,
)
from mzsim.xcontrol import PhaseSetting

DEFAULTS = PhaseSetting()

angles = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False)
rates = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)


class TestAmplitudes:
    def test_zero_difference_all_to_d1(self):
        b = mzi_amplitudes(0.8, 0.8)
        assert abs(b.b0) ** 2 == pytest.approx(0.0, abs=1e-15)
        assert abs(b.b1) ** 2 == pytest.approx(1.0, abs=1e-15)

    def test_pi_difference_all_to_d0(self):
        b = mzi_amplitudes(math.pi, 0.0)
        assert abs(b.b0) ** 2 == pytest.approx(1.0, abs=1e-15)

    def test_half_pi_difference_splits_evenly(self):
        b = mzi_amplitudes(math.pi / 2.0, 0.0)
        assert abs(b.b0) ** 2 == pytest.approx(0.5, abs=1e-15)

    @given(phi0=angles, phi1=angles)
    def test_unitarity(self, phi0, phi1):
        b = mzi_amplitudes(phi0, phi1)
        assert abs(b.b0) ** 2 + abs(b.b1) ** 2 == pytest.approx(1.0, abs=1e-12)


class TestQuantumGrouped:
    def test_values_at_defaults(self):
        assert qt_grouped(math.pi, 1, DEFAULTS) == pytest.approx(0.5, abs=1e-15)
        assert qt_grouped(0.0, -1, DEFAULTS) == pytest.approx(0.25, abs=1e-15)
        assert qt_grouped(0.0, 1, DEFAULTS) == pytest.approx(0.0, abs=1e-15)

    @given(phi0=angles)
    def test_ungrouped_is_the_sum(self, phi0):
        assert qt_ungrouped(phi0, DEFAULTS) == pytest.approx(
            qt_grouped(phi0, 1, DEFAULTS) + qt_grouped(phi0, -1, DEFAULTS), abs=1e-15
        )

    def test_ungrouped_values(self):
        assert qt_ungrouped(0.0, DEFAULTS) == pytest.approx(0.25, abs=1e-15)
        assert qt_ungrouped(math.pi, DEFAULTS) == pytest.approx(0.75, abs=1e-15)

    def test_fixed_values(self):
        assert qt_fixed(math.pi, 1, DEFAULTS) == pytest.approx(1.0, abs=1e-15)
        assert qt_fixed(0.0, -1, DEFAULTS) == pytest.approx(0.5, abs=1e-15)

    @given(phi0=angles, x=st.sampled_from([-1, 1]))
    def test_fixed_is_twice_grouped(self, phi0, x):
        assert qt_fixed(phi0, x, DEFAULTS) == pytest.approx(
            2.0 * qt_grouped(phi0, x, DEFAULTS), abs=1e-15
        )

    @given(phi0=angles, delta=angles)
    def test_both_detectors_normalize(self, phi0, delta):
        setting = PhaseSetting.from_delta(delta)
        d0 = qt_grouped(phi0, 1, setting) + qt_grouped(phi0, -1, setting)
        # D1 counterparts swap sin^2 for cos^2
        d1 = 0.5 * math.cos(0.5 * phi0) ** 2 + 0.5 * math.cos(0.5 * (phi0 - delta)) ** 2
        assert d0 + d1 == pytest.approx(1.0, abs=1e-12)


class TestDensityCheck:
    @pytest.mark.parametrize(
        "phi0,x,expected",
        [(math.pi, 1, 0.5), (0.0, -1, 0.25)],
    )
    def test_matches_grouped_at_defaults(self, phi0, x, expected):
        assert qt_density_check(phi0, DEFAULTS, x) == pytest.approx(expected, abs=1e-13)

    @given(phi0=angles, delta=angles, x=st.sampled_from([-1, 1]))
    def test_matches_grouped_everywhere(self, phi0, delta, x):
        setting = PhaseSetting.from_delta(delta)
        assert abs(qt_density_check(phi0, setting, x) - qt_grouped(phi0, x, setting)) < 1e-12


class TestCorpuscular:
    def test_zero_rate_reduces_to_quantum(self):
        params = CorpuscularParams(0.0, -math.pi / 2.0)
        for phi0 in (0.0, 0.3, 2.0, 5.5):
            for x in (-1, 1):
                assert corpuscular_grouped(phi0, x, params) == pytest.approx(
                    qt_grouped(phi0, x, DEFAULTS), abs=1e-15
                )

    def test_third_rate_value(self):
        params = CorpuscularParams(1.0 / 3.0, -math.pi / 2.0)
        assert corpuscular_grouped(0.0, 1, params) == pytest.approx(1.0 / 12.0, abs=1e-12)

    @given(phi0=angles, e=rates, delta=angles)
    def test_sinusoid_identity(self, phi0, e, delta):
        params = CorpuscularParams(e, delta)
        vis, psi = visibility_shift(params)
        closed = (1.0 - vis * math.cos(phi0 - psi)) / 4.0
        assert abs(corpuscular_grouped(phi0, 1, params) - closed) < 1e-12

    @given(phi0=angles, e=rates, delta=angles)
    def test_groups_sum_to_ungrouped_for_any_rate(self, phi0, e, delta):
        params = CorpuscularParams(e, delta)
        setting = PhaseSetting.from_delta(delta)
        total = corpuscular_grouped(phi0, 1, params) + corpuscular_grouped(phi0, -1, params)
        assert total == pytest.approx(qt_ungrouped(phi0, setting), abs=1e-12)

    @pytest.mark.parametrize("bad", [-0.1, 1.1])
    def test_rate_domain(self, bad):
        with pytest.raises(ValueError):
            CorpuscularParams(bad, 0.0)


class TestVisibilityShift:
    def test_full_visibility_at_zero_rate(self):
        for delta in (-math.pi / 2.0, 0.4, 2.0):
            vis, psi = visibility_shift(CorpuscularParams(0.0, delta))
            assert vis == pytest.approx(1.0, abs=1e-15)
            assert psi == pytest.approx(0.0, abs=1e-15)

    def test_half_rate_quarter_turn(self):
        vis, psi = visibility_shift(CorpuscularParams(0.5, math.pi / 2.0))
        assert vis == pytest.approx(math.sqrt(0.5), abs=1e-12)
        assert psi == pytest.approx(math.pi / 4.0, abs=1e-12)

    def test_reference_case(self):
        vis, psi = visibility_shift(CorpuscularParams(1.0 / 3.0, -math.pi / 2.0))
        assert vis == pytest.approx(math.sqrt(5.0) / 3.0, abs=1e-12)
        assert psi == pytest.approx(math.atan(-0.5), abs=1e-12)

    @given(e=rates, delta=angles)
    def test_visibility_in_unit_interval(self, e, delta):
        vis, _ = visibility_shift(CorpuscularParams(e, delta))
        assert -1e-12 <= vis <= 1.0 + 1e-12


class TestRandomRateApprox:
    def test_values(self):
        assert e_random_approx(1) == pytest.approx(0.25, abs=1e-15)
        assert e_random_approx(10) == pytest.approx(1.0 / 22.0, abs=1e-15)

    def test_monotone_to_zero(self):
        values = [e_random_approx(k) for k in (1, 2, 5, 20, 1000)]
        assert values == sorted(values, reverse=True)
        assert values[-1] < 1e-3

    def test_domain(self):
        with pytest.raises(ValueError):
            e_random_approx(0)

    def test_systematic_reference_table(self):
        assert set(E_SYSTEMATIC_REF) == {1, 10}
        assert E_SYSTEMATIC_REF[1] == pytest.approx(0.333)
        assert E_SYSTEMATIC_REF[10] == pytest.approx(0.100)
