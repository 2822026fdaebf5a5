"""Compiled batch event loop.

Sweeps need tens of millions of photons, far beyond what the per-photon
object layer in `eventcore` can deliver, so the same processor arithmetic
is repeated here as a numba kernel over a packed state vector.  Every
float operation matches `eventcore.bs_process` / `rotate_message` in value
and order (no fastmath), so for the same uniform draws both paths produce
bit-identical detection sequences; tests/test_kernel.py pins that.

State vector layout (one float64 array of length 12):

    [ 0: 3]  BS1 registers  y0.e0, y0.e1, y1.e0, y1.e1
    [ 4: 5]  BS1 weights    u0, u1
    [ 6: 9]  BS2 registers
    [10:11]  BS2 weights
"""

from __future__ import annotations

import math

import numba as nb
import numpy as np

from .eventcore import INV_SQRT2, TWO_PI, Message, ModelIntegrityError, MziNetwork

STATE_SIZE = 12

_NORM_TOL = 1e-6


def pack_network(net: MziNetwork) -> np.ndarray:
    """Flatten both beam-splitter states into the kernel layout."""
    b1, b2 = net.bs1, net.bs2
    return np.array(
        [
            b1.y0.e0, b1.y0.e1, b1.y1.e0, b1.y1.e1, b1.u0, b1.u1,
            b2.y0.e0, b2.y0.e1, b2.y1.e0, b2.y1.e1, b2.u0, b2.u1,
        ],
        dtype=np.float64,
    )


def unpack_state(state: np.ndarray, net: MziNetwork) -> MziNetwork:
    """Write a packed state vector back into the object-layer network."""
    for bs, off in ((net.bs1, 0), (net.bs2, 6)):
        bs.y0 = Message(float(state[off]), float(state[off + 1]))
        bs.y1 = Message(float(state[off + 2]), float(state[off + 3]))
        bs.u0 = float(state[off + 4])
        bs.u1 = float(state[off + 5])
    return net


@nb.njit(cache=True)
def _simulate(cl, sl, cp, sp, cm, sm, x_seq, alpha, r, st, det_out):  # pragma: no cover
    """Run len(x_seq) photons; returns the four counters.

    (cl, sl), (cp, sp), (cm, sm): cos/sin of the lower-arm phase and of the
    upper-arm phase for x = +1 / x = -1.  r holds two uniforms per photon
    in passage order.  st is the packed state, mutated in place; det_out
    receives the firing detector per photon.
    """
    n0p = 0
    n1p = 0
    n0m = 0
    n1m = 0
    beta = 1.0 - alpha
    for i in range(x_seq.shape[0]):
        x = x_seq[i]
        # beam splitter 1: arrival on channel 0 with message (1, 0)
        st[0] = 1.0
        st[1] = 0.0
        st[4] = alpha * st[4] + beta
        st[5] = alpha * st[5]
        su0 = math.sqrt(st[4])
        su1 = math.sqrt(st[5])
        w0 = (st[0] * su0 - st[3] * su1) * INV_SQRT2
        w1 = (st[2] * su1 + st[1] * su0) * INV_SQRT2
        z0 = (st[2] * su1 - st[1] * su0) * INV_SQRT2
        z1 = (st[0] * su0 + st[3] * su1) * INV_SQRT2
        w2 = w0 * w0 + w1 * w1
        z2 = z0 * z0 + z1 * z1
        if abs(w2 + z2 - 1.0) > _NORM_TOL:
            raise ModelIntegrityError("output norms stopped summing to one at BS1")
        if w2 > r[2 * i]:
            arm = 0
            nrm = math.sqrt(w2)
            e0 = w0 / nrm
            e1 = w1 / nrm
            c = cl
            s = sl
        else:
            arm = 1
            nrm = math.sqrt(z2)
            e0 = z0 / nrm
            e1 = z1 / nrm
            if x > 0:
                c = cp
                s = sp
            else:
                c = cm
                s = sm
        # arm phase rotation (mirrors redirect without altering the message)
        f0 = e0 * c - e1 * s
        f1 = e0 * s + e1 * c
        # beam splitter 2: arrival on the channel matching the arm
        if arm == 0:
            st[6] = f0
            st[7] = f1
            st[10] = alpha * st[10] + beta
            st[11] = alpha * st[11]
        else:
            st[8] = f0
            st[9] = f1
            st[10] = alpha * st[10]
            st[11] = alpha * st[11] + beta
        su0 = math.sqrt(st[10])
        su1 = math.sqrt(st[11])
        w0 = (st[6] * su0 - st[9] * su1) * INV_SQRT2
        w1 = (st[8] * su1 + st[7] * su0) * INV_SQRT2
        z0 = (st[8] * su1 - st[7] * su0) * INV_SQRT2
        z1 = (st[6] * su0 + st[9] * su1) * INV_SQRT2
        w2 = w0 * w0 + w1 * w1
        z2 = z0 * z0 + z1 * z1
        if abs(w2 + z2 - 1.0) > _NORM_TOL:
            raise ModelIntegrityError("output norms stopped summing to one at BS2")
        if w2 > r[2 * i + 1]:
            det_out[i] = 0
            if x > 0:
                n0p += 1
            else:
                n0m += 1
        else:
            det_out[i] = 1
            if x > 0:
                n1p += 1
            else:
                n1m += 1
    return n0p, n1p, n0m, n1m


def run_batch(
    state: np.ndarray,
    phi0: float,
    phi1_plus: float,
    phi1_minus: float,
    x_seq: np.ndarray,
    alpha: float,
    rng: np.random.Generator,
    det_out: np.ndarray | None = None,
) -> tuple[tuple[int, int, int, int], np.ndarray]:
    """Drive the kernel for one run segment.

    Draws 2*len(x_seq) uniforms from `rng` (one per beam splitter, in
    passage order), mutates `state` in place and returns the counters
    (n0_plus, n1_plus, n0_minus, n1_minus) plus the per-photon detector
    array.
    """
    n = int(x_seq.shape[0])
    if det_out is None:
        det_out = np.empty(n, dtype=np.uint8)
    r = rng.random(2 * n)
    # reduce phases exactly as eventcore.rotate_message does
    cl = math.cos(phi0 % TWO_PI)
    sl = math.sin(phi0 % TWO_PI)
    cp = math.cos(phi1_plus % TWO_PI)
    sp = math.sin(phi1_plus % TWO_PI)
    cm = math.cos(phi1_minus % TWO_PI)
    sm = math.sin(phi1_minus % TWO_PI)
    counts = _simulate(cl, sl, cp, sp, cm, sm, x_seq, alpha, r, state, det_out)
    return counts, det_out
