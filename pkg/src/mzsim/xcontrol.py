"""Two-valued setting sequences and the phase they select in the upper arm.

The external setting x takes the values -1 and +1 and may change only
between photon emissions, never while a photon is in flight.  Three
procedures are supported: a fixed value, a systematic alternation every K
photons, and a seeded random flip at every K-photon boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi

_MODES = ("fixed", "systematic", "random")


def wrap_angle(phi: float) -> float:
    """Reduce an angle to the interval (-pi, pi]."""
    out = math.fmod(phi + math.pi, TWO_PI)
    if out <= 0.0:
        out += TWO_PI
    return out - math.pi


@dataclass(frozen=True)
class PhaseSetting:
    """Arm phases of the interferometer and their dependence on x.

    phi0 is the fixed lower-arm phase (swept by the experiment driver),
    phi1_plus / phi1_minus are the upper-arm phases selected by x = +1 / -1.
    The signed difference delta = phi1_minus - phi1_plus (wrapped to
    (-pi, pi]) is the knob the analysis inverts for.
    """

    phi0: float = 0.0
    phi1_plus: float = 0.0
    phi1_minus: float = -math.pi / 2.0

    @property
    def delta(self) -> float:
        return wrap_angle(self.phi1_minus - self.phi1_plus)

    @classmethod
    def from_delta(cls, delta: float, phi0: float = 0.0) -> "PhaseSetting":
        return cls(phi0=phi0, phi1_plus=0.0, phi1_minus=delta)


def phase_for(setting: PhaseSetting, x: int) -> float:
    """Upper-arm phase selected by the setting value x in {-1, +1}."""
    if x == 1:
        return setting.phi1_plus
    if x == -1:
        return setting.phi1_minus
    raise ValueError(f"setting value must be -1 or +1, got {x!r}")


@dataclass(frozen=True)
class SettingSchedule:
    """How x evolves over emitted photons.

    mode "fixed" keeps x at `x_fixed`; "systematic" alternates sign every K
    photons starting at +1; "random" flips sign with probability 1/2 at
    every K-photon boundary, block 1 starting at +1.  The random mode is
    a pure function of (seed, photon index), never of call order.
    """

    mode: str = "fixed"
    K: int = 1
    seed: int = 0
    x_fixed: int = 1

    def __post_init__(self):
        if self.mode not in _MODES:
            raise ValueError(f"unknown schedule mode {self.mode!r}")
        if self.K < 1:
            raise ValueError("K must be a positive integer")
        if self.x_fixed not in (-1, 1):
            raise ValueError("fixed setting value must be -1 or +1")

    @classmethod
    def fixed(cls, x: int = 1) -> "SettingSchedule":
        return cls(mode="fixed", x_fixed=x)

    @classmethod
    def systematic(cls, K: int) -> "SettingSchedule":
        return cls(mode="systematic", K=K)

    @classmethod
    def random(cls, K: int, seed: int) -> "SettingSchedule":
        return cls(mode="random", K=K, seed=seed)

    def describe(self) -> str:
        """Canonical parseable form, used in CSV columns and config files."""
        if self.mode == "fixed":
            return f"fixed:{'+1' if self.x_fixed == 1 else '-1'}"
        if self.mode == "systematic":
            return f"systematic:{self.K}"
        return f"random:{self.K}:{self.seed}"


def parse_schedule(text: str) -> SettingSchedule:
    """Parse the canonical schedule form emitted by SettingSchedule.describe.

    Accepted forms: ``fixed:+1``, ``fixed:-1``, ``systematic:K``,
    ``random:K:seed``.
    """
    parts = text.strip().split(":")
    kind = parts[0]
    try:
        if kind == "fixed" and len(parts) == 2:
            return SettingSchedule.fixed(int(parts[1]))
        if kind == "systematic" and len(parts) == 2:
            return SettingSchedule.systematic(int(parts[1]))
        if kind == "random" and len(parts) == 3:
            return SettingSchedule.random(int(parts[1]), int(parts[2]))
    except ValueError as exc:
        raise ValueError(f"bad schedule descriptor {text!r}: {exc}") from None
    raise ValueError(f"bad schedule descriptor {text!r}")


def _random_block_values(seed: int, nblocks: int) -> np.ndarray:
    """Per-block x values for the random procedure (+1/-1 int8 array).

    Block 1 is +1; each later block flips the previous block's sign with
    probability 1/2.  Flips come from a PCG64 stream keyed by the seed
    alone, so any prefix of the block sequence is reproducible.
    """
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed])))
    flips = rng.integers(0, 2, size=nblocks, dtype=np.uint8)
    flips[0] = 0
    parity = np.cumsum(flips, dtype=np.int64) & 1
    return np.where(parity == 0, 1, -1).astype(np.int8)


def x_at(schedule: SettingSchedule, i: int) -> int:
    """Setting value for the i-th emitted photon (i >= 1)."""
    if i < 1:
        raise ValueError("photon index starts at 1")
    if schedule.mode == "fixed":
        return schedule.x_fixed
    block = (i - 1) // schedule.K  # 0-based block index
    if schedule.mode == "systematic":
        return 1 if block % 2 == 0 else -1
    return int(_random_block_values(schedule.seed, block + 1)[block])


def x_sequence(schedule: SettingSchedule, n: int, start_index: int = 1) -> np.ndarray:
    """Vectorized x values for photons start_index .. start_index+n-1.

    Agrees elementwise with x_at; this is the bulk path used by the
    simulation kernel.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if start_index < 1:
        raise ValueError("photon index starts at 1")
    if n == 0:
        return np.empty(0, dtype=np.int8)
    if schedule.mode == "fixed":
        return np.full(n, schedule.x_fixed, dtype=np.int8)
    idx = np.arange(start_index, start_index + n, dtype=np.int64)
    blocks = (idx - 1) // schedule.K
    if schedule.mode == "systematic":
        return np.where(blocks % 2 == 0, 1, -1).astype(np.int8)
    values = _random_block_values(schedule.seed, int(blocks[-1]) + 1)
    return values[blocks]
