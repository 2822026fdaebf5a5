"""Event-by-event engine: messengers, stateful beam splitters, detection.

Each photon is a messenger carrying a two-component unit vector (the
position of an internal clock hand).  Beam splitters are processors with
two message registers and a learned estimate u of the arrival-channel
probabilities; their state persists from one messenger to the next, which
is the entire transient mechanism of the model.  Mirrors are identity
redirects and detectors simply count, so neither appears as a processor.

The batch path in `kernel` mirrors these operations float-for-float; the
two are held together by an equivalence test.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

TWO_PI = 2.0 * math.pi
INV_SQRT2 = 0.7071067811865476

# |w.w + z.z - 1| beyond this means a register lost unit norm
_NORM_TOL = 1e-6

INIT_POLICIES = ("default", "random")


class ModelIntegrityError(RuntimeError):
    """Raised when beam-splitter output norms stop summing to one."""


@dataclass(frozen=True)
class Message:
    """Clock-hand vector (cos wt, sin wt) carried by a messenger."""

    e0: float
    e1: float

    def norm2(self) -> float:
        return self.e0 * self.e0 + self.e1 * self.e1

    def is_unit(self, tol: float = 1e-12) -> bool:
        return abs(self.norm2() - 1.0) <= tol


@dataclass(frozen=True)
class Messenger:
    """One emitted photon: emission order, message, setting label, mode."""

    index: int
    message: Message
    x_label: int  # known-and-certain setting at emission; immutable in flight
    channel: int  # current spatial mode, 0 or 1


@dataclass(frozen=True)
class DetectionEvent:
    index: int
    x_label: int
    detector: int


@dataclass
class BeamSplitterState:
    """Registers Y0/Y1, learned channel weights (u0, u1), learning rate alpha."""

    y0: Message
    y1: Message
    u0: float
    u1: float
    alpha: float

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must lie strictly between 0 and 1")


@dataclass
class MziNetwork:
    """Two beam splitters plus the arm phases.

    Wiring is fixed: BS1 output 0 feeds the lower arm (phase phi0) into
    BS2 input 0; BS1 output 1 feeds the upper arm (phase phi1_of_x[x])
    into BS2 input 1.
    """

    bs1: BeamSplitterState
    bs2: BeamSplitterState
    phi0: float
    phi1_of_x: dict[int, float]


def rotate_message(msg: Message, phi: float) -> Message:
    """Advance the clock hand by phi radians (reduced mod 2*pi)."""
    phi = phi % TWO_PI
    c = math.cos(phi)
    s = math.sin(phi)
    return Message(msg.e0 * c - msg.e1 * s, msg.e0 * s + msg.e1 * c)


def candidate_messages(state: BeamSplitterState) -> tuple[Message, Message]:
    """The two pre-normalization output candidates (w, z) of a beam splitter.

    With su_k = sqrt(u_k) and Yij = component i of register j:

        w = (Y00*su0 - Y11*su1, Y01*su1 + Y10*su0) / sqrt(2)
        z = (Y01*su1 - Y10*su0, Y00*su0 + Y11*su1) / sqrt(2)

    For unit-norm registers and u0 + u1 = 1 the squared norms satisfy
    w.w + z.z = 1, which is what makes w.w a routing probability.
    """
    su0 = math.sqrt(state.u0)
    su1 = math.sqrt(state.u1)
    y0, y1 = state.y0, state.y1
    w = Message(
        (y0.e0 * su0 - y1.e1 * su1) * INV_SQRT2,
        (y1.e0 * su1 + y0.e1 * su0) * INV_SQRT2,
    )
    z = Message(
        (y1.e0 * su1 - y0.e1 * su0) * INV_SQRT2,
        (y0.e0 * su0 + y1.e1 * su1) * INV_SQRT2,
    )
    return w, z


def bs_process(
    state: BeamSplitterState, in_channel: int, msg: Message, r: float
) -> tuple[int, Message, BeamSplitterState]:
    """Pass one messenger through a beam splitter, updating its state.

    The arriving message overwrites register Y[in_channel] (the other
    register is untouched) and the channel weights are relaxed toward the
    arrival channel: u_i <- alpha*u_i + (1-alpha)*delta(i, in_channel).
    The output candidates w and z are formed from the post-update
    registers and weights; the messenger leaves through channel 0
    carrying w renormalized to unit length when w.w > r, else through
    channel 1 carrying z renormalized (equality goes to channel 1).

    Returns (out_channel, out_message, state); `state` is mutated in place.
    """
    if in_channel == 0:
        state.y0 = msg
        state.u0 = state.alpha * state.u0 + (1.0 - state.alpha)
        state.u1 = state.alpha * state.u1
    elif in_channel == 1:
        state.y1 = msg
        state.u0 = state.alpha * state.u0
        state.u1 = state.alpha * state.u1 + (1.0 - state.alpha)
    else:
        raise ValueError(f"input channel must be 0 or 1, got {in_channel!r}")

    w, z = candidate_messages(state)
    w2 = w.norm2()
    z2 = z.norm2()
    if abs(w2 + z2 - 1.0) > _NORM_TOL:
        raise ModelIntegrityError(
            f"output norms sum to {w2 + z2!r}; a register has lost unit norm"
        )
    if w2 > r:
        nrm = math.sqrt(w2)
        return 0, Message(w.e0 / nrm, w.e1 / nrm), state
    nrm = math.sqrt(z2)
    return 1, Message(z.e0 / nrm, z.e1 / nrm), state


def run_photon(net: MziNetwork, x: int, rng, index: int = 0) -> DetectionEvent:
    """Send one photon through the network and return its detection event.

    The source emits a messenger with its clock at zero (message (1, 0))
    on BS1 input 0 and waits for detection before the next emission, so
    exactly one detector fires per call.  The setting label rides the
    messenger from emission to detection and cannot change in flight.
    `rng` must provide `random()`; two uniforms are drawn, one per beam
    splitter, in passage order.  Both beam-splitter states are mutated and
    persist across calls.
    """
    if x not in (-1, 1):
        raise ValueError(f"setting value must be -1 or +1, got {x!r}")
    photon = Messenger(index=index, message=Message(1.0, 0.0), x_label=x, channel=0)
    arm, msg, _ = bs_process(net.bs1, photon.channel, photon.message, rng.random())
    phi = net.phi0 if arm == 0 else net.phi1_of_x[photon.x_label]
    # mirrors redirect without altering the message
    photon = replace(photon, message=rotate_message(msg, phi), channel=arm)
    detector, _, _ = bs_process(net.bs2, photon.channel, photon.message, rng.random())
    return DetectionEvent(index=photon.index, x_label=photon.x_label, detector=detector)


def _fresh_splitter(alpha: float) -> BeamSplitterState:
    return BeamSplitterState(
        y0=Message(1.0, 0.0), y1=Message(1.0, 0.0), u0=0.5, u1=0.5, alpha=alpha
    )


def reset_network(net: MziNetwork, policy: str = "default", seed: int | None = None) -> MziNetwork:
    """Reinitialize both beam-splitter states.

    "default" sets u = (0.5, 0.5) and Y0 = Y1 = (1, 0) on both splitters.
    "random" keeps u = (0.5, 0.5) but draws unit-norm random register
    directions from a PCG64 stream keyed by `seed` (required), for
    transient-sensitivity studies; the same seed reproduces the state
    bit-identically.
    """
    if policy == "default":
        for bs in (net.bs1, net.bs2):
            bs.y0 = Message(1.0, 0.0)
            bs.y1 = Message(1.0, 0.0)
            bs.u0 = 0.5
            bs.u1 = 0.5
        return net
    if policy == "random":
        if seed is None:
            raise ValueError("random init policy requires a seed")
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed])))
        for bs in (net.bs1, net.bs2):
            th0, th1 = rng.random(2) * TWO_PI
            bs.y0 = Message(math.cos(th0), math.sin(th0))
            bs.y1 = Message(math.cos(th1), math.sin(th1))
            bs.u0 = 0.5
            bs.u1 = 0.5
        return net
    raise ValueError(f"unknown init policy {policy!r}")


def new_network(
    phi0: float,
    phi1_of_x: dict[int, float],
    alpha: float = 0.99,
    policy: str = "default",
    seed: int | None = None,
) -> MziNetwork:
    """Build a network with freshly initialized beam splitters."""
    net = MziNetwork(
        bs1=_fresh_splitter(alpha),
        bs2=_fresh_splitter(alpha),
        phi0=phi0,
        phi1_of_x=dict(phi1_of_x),
    )
    return reset_network(net, policy=policy, seed=seed)
