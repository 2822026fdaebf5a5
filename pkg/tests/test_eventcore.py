import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from mzsim.eventcore import (
    BeamSplitterState,
    Message,
    ModelIntegrityError,
    bs_process,
    candidate_messages,
    new_network,
    reset_network,
    rotate_message,
    run_photon,
)

angles = st.floats(min_value=-12.0, max_value=12.0, allow_nan=False)
unit_fraction = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)


def unit_message(theta: float) -> Message:
    return Message(math.cos(theta), math.sin(theta))


def make_state(y0=Message(1.0, 0.0), y1=Message(1.0, 0.0), u0=0.5, alpha=0.99):
    return BeamSplitterState(y0=y0, y1=y1, u0=u0, u1=1.0 - u0, alpha=alpha)


class TestRotateMessage:
    def test_identity(self):
        assert rotate_message(Message(1.0, 0.0), 0.0) == Message(1.0, 0.0)

    def test_quarter_turn(self):
        out = rotate_message(Message(1.0, 0.0), math.pi / 2.0)
        assert out.e0 == pytest.approx(0.0, abs=1e-15)
        assert out.e1 == pytest.approx(1.0, abs=1e-15)

    def test_angle_addition(self):
        out = rotate_message(unit_message(0.3), 0.4)
        assert out.e0 == pytest.approx(math.cos(0.7), abs=1e-15)
        assert out.e1 == pytest.approx(math.sin(0.7), abs=1e-15)

    @given(theta=angles, phi=angles)
    def test_unit_norm_preserved(self, theta, phi):
        out = rotate_message(unit_message(theta), phi)
        assert abs(out.norm2() - 1.0) <= 1e-12


class TestLearningRule:
    def test_single_update_values(self):
        state = make_state(alpha=0.99)
        bs_process(state, 0, Message(1.0, 0.0), r=0.5)
        assert state.u0 == pytest.approx(0.505, abs=1e-15)
        assert state.u1 == pytest.approx(0.495, abs=1e-15)

    @pytest.mark.parametrize("n", [1, 10, 100, 700])
    def test_exclusive_feeding_closed_form(self, n):
        state = make_state(alpha=0.99)
        for _ in range(n):
            bs_process(state, 0, Message(1.0, 0.0), r=0.5)
        expected = 1.0 - 0.99**n * 0.5
        assert abs(state.u0 - expected) <= 1e-12
        assert abs(state.u0 + state.u1 - 1.0) <= 1e-12

    @given(
        channels=st.lists(st.sampled_from([0, 1]), min_size=1, max_size=300),
        alpha=st.floats(min_value=0.01, max_value=0.999),
    )
    def test_weights_stay_on_simplex(self, channels, alpha):
        state = make_state(alpha=alpha)
        for ch in channels:
            bs_process(state, ch, Message(1.0, 0.0), r=0.5)
        assert abs(state.u0 + state.u1 - 1.0) <= 1e-12
        assert -1e-15 <= state.u0 <= 1.0 + 1e-15


class TestTransformStage:
    def test_fresh_own_register_cancels(self):
        # post-update u = (0.5, 0.5) engineered via alpha = 0.5 from u = (0, 1)
        state = BeamSplitterState(
            y0=Message(0.0, 1.0), y1=Message(0.0, 1.0), u0=0.0, u1=1.0, alpha=0.5
        )
        for r in (0.0, 0.3, 0.999):
            st_copy = BeamSplitterState(
                y0=state.y0, y1=state.y1, u0=state.u0, u1=state.u1, alpha=state.alpha
            )
            ch, out, _ = bs_process(st_copy, 0, Message(1.0, 0.0), r=r)
            w, _ = candidate_messages(st_copy)
            assert w.norm2() == pytest.approx(0.0, abs=1e-15)
            assert ch == 1
            assert out.e0 == pytest.approx(0.0, abs=1e-15)
            assert out.e1 == pytest.approx(1.0, abs=1e-15)

    def test_pinned_weight_gives_fair_coin(self):
        state = make_state(u0=1.0)
        rng = np.random.Generator(np.random.PCG64(7))
        n = 100_000
        hits = 0
        for theta in rng.random(n) * 2.0 * math.pi:
            ch, out, _ = bs_process(state, 0, unit_message(theta), r=rng.random())
            w, _ = candidate_messages(state)
            assert w.norm2() == pytest.approx(0.5, abs=1e-12)
            assert abs(out.norm2() - 1.0) <= 1e-12
            hits += ch == 0
        assert hits / n == pytest.approx(0.5, abs=0.01)

    @given(t0=angles, t1=angles, u0=unit_fraction, tin=angles, ch=st.sampled_from([0, 1]),
           r=st.floats(min_value=0.0, max_value=0.999999))
    def test_routing_probabilities_conserved(self, t0, t1, u0, tin, ch, r):
        state = BeamSplitterState(
            y0=unit_message(t0), y1=unit_message(t1), u0=u0, u1=1.0 - u0, alpha=0.99
        )
        _, out, _ = bs_process(state, ch, unit_message(tin), r=r)
        w, z = candidate_messages(state)
        assert abs(w.norm2() + z.norm2() - 1.0) < 1e-12
        assert abs(out.norm2() - 1.0) <= 1e-12

    def test_equality_routes_to_channel_one(self):
        # routing is strictly w.w > r: r equal to w.w goes to channel 1
        probe = make_state(u0=1.0)
        bs_process(probe, 0, Message(1.0, 0.0), r=0.0)
        w2 = candidate_messages(probe)[0].norm2()
        ch_eq, _, _ = bs_process(make_state(u0=1.0), 0, Message(1.0, 0.0), r=w2)
        assert ch_eq == 1
        ch_below, _, _ = bs_process(
            make_state(u0=1.0), 0, Message(1.0, 0.0), r=np.nextafter(w2, 0.0)
        )
        assert ch_below == 0

    def test_degenerate_registers_raise(self):
        state = make_state(y0=Message(3.0, 0.0))
        with pytest.raises(ModelIntegrityError):
            bs_process(state, 1, Message(1.0, 0.0), r=0.5)

    def test_bad_channel_rejected(self):
        with pytest.raises(ValueError):
            bs_process(make_state(), 2, Message(1.0, 0.0), r=0.5)


class TestRunPhoton:
    def test_one_detection_per_photon(self):
        net = new_network(0.3, {1: 0.0, -1: -math.pi / 2.0})
        rng = np.random.Generator(np.random.PCG64(0))
        events = [run_photon(net, 1, rng, index=i) for i in range(200)]
        assert [e.index for e in events] == list(range(200))
        assert all(e.detector in (0, 1) for e in events)
        assert all(e.x_label == 1 for e in events)

    def test_invalid_setting_rejected(self):
        net = new_network(0.0, {1: 0.0, -1: 0.0})
        rng = np.random.Generator(np.random.PCG64(0))
        with pytest.raises(ValueError):
            run_photon(net, 0, rng)

    def test_registers_stay_unit_norm(self):
        net = new_network(1.234, {1: 0.0, -1: -math.pi / 2.0})
        rng = np.random.Generator(np.random.PCG64(3))
        for i in range(500):
            run_photon(net, 1 if i % 2 == 0 else -1, rng, index=i)
        for bs in (net.bs1, net.bs2):
            assert bs.y0.is_unit()
            assert bs.y1.is_unit()
            assert abs(bs.u0 + bs.u1 - 1.0) <= 1e-12

    def test_zero_phase_difference_goes_dark_when_stationary(self):
        # the dark port leaks only through the residual weight jitter at
        # BS2, a few parts in a thousand
        net = new_network(1.1, {1: 1.1, -1: 1.1})
        rng = np.random.Generator(np.random.PCG64(9))
        for i in range(3000):  # converge the input splitter
            run_photon(net, 1, rng, index=i)
        n = 20_000
        d0 = sum(run_photon(net, 1, rng).detector == 0 for _ in range(n))
        assert d0 / n <= 0.005

    def test_determinism_bit_identical(self):
        seq = []
        for _ in range(2):
            net = new_network(0.7, {1: 0.0, -1: -math.pi / 2.0})
            rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([4, 0, 0])))
            seq.append([run_photon(net, -1, rng, index=i).detector for i in range(300)])
        assert seq[0] == seq[1]


class TestResetNetwork:
    def test_default_policy(self):
        net = new_network(0.0, {1: 0.0, -1: 0.0})
        net.bs1.u0 = 0.9
        net.bs1.u1 = 0.1
        reset_network(net, "default")
        for bs in (net.bs1, net.bs2):
            assert bs.u0 == 0.5 and bs.u1 == 0.5
            assert bs.y0 == Message(1.0, 0.0)
            assert bs.y1 == Message(1.0, 0.0)

    def test_random_policy_reproducible(self):
        a = new_network(0.0, {1: 0.0, -1: 0.0}, policy="random", seed=31)
        b = new_network(0.0, {1: 0.0, -1: 0.0}, policy="random", seed=31)
        assert a.bs1.y0 == b.bs1.y0
        assert a.bs2.y1 == b.bs2.y1
        c = new_network(0.0, {1: 0.0, -1: 0.0}, policy="random", seed=32)
        assert c.bs1.y0 != a.bs1.y0

    @pytest.mark.parametrize("policy,seed", [("default", None), ("random", 5)])
    def test_invariants_hold_after_reset(self, policy, seed):
        net = new_network(0.0, {1: 0.0, -1: 0.0}, policy=policy, seed=seed)
        for bs in (net.bs1, net.bs2):
            assert bs.y0.is_unit() and bs.y1.is_unit()
            assert abs(bs.u0 + bs.u1 - 1.0) <= 1e-12

    def test_random_policy_needs_seed(self):
        net = new_network(0.0, {1: 0.0, -1: 0.0})
        with pytest.raises(ValueError):
            reset_network(net, "random")

    def test_unknown_policy(self):
        net = new_network(0.0, {1: 0.0, -1: 0.0})
        with pytest.raises(ValueError):
            reset_network(net, "gaussian")
