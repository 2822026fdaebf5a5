"""From raw detection events to grouped frequencies, fringe fits and verdicts.

Frequencies follow the per-group normalization F0(x) = N0(x)/(N0(x)+N1(x)),
which cancels the 1/2 occupancy prefactor of the grouped intensity
convention; the `i0_*` properties expose the occupancy-weighted bridge.
Fringe fitting is plain linear least squares in the (C, a, b) basis of
C + a*cos(phi0) + b*sin(phi0), which is exact for every model curve in
play and has no iteration knobs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .theory import CorpuscularParams, visibility_shift
from .xcontrol import TWO_PI, wrap_angle

VERDICT_QUANTUM = "QUANTUM-LIKE"
VERDICT_CORPUSCULAR = "CORPUSCULAR-LIKE"
VERDICT_INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True)
class DetectionTally:
    """The four counters N0(+1), N0(-1), N1(+1), N1(-1)."""

    n0_plus: int = 0
    n0_minus: int = 0
    n1_plus: int = 0
    n1_minus: int = 0

    @property
    def total(self) -> int:
        return self.n0_plus + self.n0_minus + self.n1_plus + self.n1_minus

    @property
    def group_plus(self) -> int:
        return self.n0_plus + self.n1_plus

    @property
    def group_minus(self) -> int:
        return self.n0_minus + self.n1_minus

    @property
    def f0_plus(self) -> float:
        g = self.group_plus
        return self.n0_plus / g if g > 0 else math.nan

    @property
    def f0_minus(self) -> float:
        g = self.group_minus
        return self.n0_minus / g if g > 0 else math.nan

    @property
    def f0_ungrouped(self) -> float:
        t = self.total
        return (self.n0_plus + self.n0_minus) / t if t > 0 else math.nan

    @property
    def i0_plus(self) -> float:
        """Occupancy-weighted frequency, comparable to grouped intensities."""
        t = self.total
        return self.n0_plus / t if t > 0 else math.nan

    @property
    def i0_minus(self) -> float:
        t = self.total
        return self.n0_minus / t if t > 0 else math.nan


def tally(events: Iterable) -> DetectionTally:
    """Count detection events into the four (detector, setting) counters."""
    n0p = n0m = n1p = n1m = 0
    for ev in events:
        if ev.detector == 0:
            if ev.x_label == 1:
                n0p += 1
            else:
                n0m += 1
        else:
            if ev.x_label == 1:
                n1p += 1
            else:
                n1m += 1
    return DetectionTally(n0p, n0m, n1p, n1m)


def tally_from_arrays(x_seq: np.ndarray, detectors: np.ndarray) -> DetectionTally:
    """Vectorized tally over parallel setting/detector arrays."""
    plus = x_seq > 0
    d0 = detectors == 0
    return DetectionTally(
        n0_plus=int(np.count_nonzero(plus & d0)),
        n0_minus=int(np.count_nonzero(~plus & d0)),
        n1_plus=int(np.count_nonzero(plus & ~d0)),
        n1_minus=int(np.count_nonzero(~plus & ~d0)),
    )


@dataclass
class FrequencyPoint:
    """Counts and derived frequencies for one lower-arm phase value."""

    phi0: float
    x_mode: str
    counts: DetectionTally
    stage: int | None = None

    @property
    def f0_plus(self) -> float:
        return self.counts.f0_plus

    @property
    def f0_minus(self) -> float:
        return self.counts.f0_minus

    @property
    def f0_ungrouped(self) -> float:
        return self.counts.f0_ungrouped


@dataclass
class FitResult:
    """Sinusoid fit f(phi0) = C + a*cos(phi0) + b*sin(phi0), reported as
    C * (1 - Delta*cos(phi0 - psi)) with A = sqrt(a^2+b^2), Delta = A/C and
    psi = atan2(-b, -a)."""

    C: float
    A: float
    Delta: float
    psi: float
    rms_residual: float
    n_points: int
    se_C: float = math.nan
    se_A: float = math.nan
    se_Delta: float = math.nan
    se_psi: float = math.nan
    E_hat: float | None = None

    @property
    def physical(self) -> bool:
        return self.C > 0.0


def binomial_sigma(freq: np.ndarray, n_events: np.ndarray) -> np.ndarray:
    """Per-point binomial standard errors sqrt(f(1-f)/n).

    Frequencies are pulled off 0 and 1 by half an event so that saturated
    points keep a nonzero (if tiny) error.
    """
    freq = np.asarray(freq, dtype=float)
    n = np.asarray(n_events, dtype=float)
    lo = 0.5 / np.maximum(n, 1.0)
    f = np.clip(freq, lo, 1.0 - lo)
    return np.sqrt(f * (1.0 - f) / np.maximum(n, 1.0))


def fit_sinusoid(
    phi0s: Sequence[float],
    values: Sequence[float],
    sigma: Sequence[float] | None = None,
) -> FitResult:
    """Least-squares sinusoid fit of frequency-vs-phase data.

    Parameters
    ----------
    phi0s, values: sequences of float
        Phase grid (radians) and the frequencies measured there.  At least
        four distinct phases (mod 2*pi) spanning at least pi are required.
    sigma: sequence of float, optional
        Per-point binomial standard errors.  When given, the parameter
        standard errors propagate these; otherwise they come from the
        residual scatter.  The fit itself is always uniform-weight.

    Returns
    -------
    FitResult
        Fitted offset, amplitude, visibility Delta = A/C, phase shift psi
        in (-pi, pi], rms residual and parameter standard errors.  Delta is
        NaN when the fitted offset is nonpositive (nonphysical data,
        flagged via `physical`).
    """
    phi = np.asarray(phi0s, dtype=float)
    y = np.asarray(values, dtype=float)
    if phi.ndim != 1 or phi.shape != y.shape:
        raise ValueError("phi0s and values must be 1-d sequences of equal length")
    if np.any(~np.isfinite(y)):
        raise ValueError("frequency values must be finite")
    distinct = np.unique(np.round(phi % TWO_PI, 9))
    if distinct.size < 4:
        raise ValueError("need at least 4 distinct phi0 values (mod 2*pi)")
    if phi.max() - phi.min() < math.pi:
        raise ValueError("phi0 values must span at least pi")

    design = np.column_stack([np.ones_like(phi), np.cos(phi), np.sin(phi)])
    coef, _, _, _ = np.linalg.lstsq(design, y, rcond=None)
    c0, a, b = (float(v) for v in coef)
    res = y - design @ coef
    ssr = float(res @ res)
    n = phi.size
    rms = math.sqrt(ssr / n)

    amp = math.hypot(a, b)
    if amp <= 1e-12 * (abs(c0) + 1.0):
        amp = 0.0  # rounding-level amplitude: the shift is unidentifiable
    psi = math.atan2(-b, -a) if amp > 0.0 else 0.0
    if psi <= -math.pi:
        psi += TWO_PI
    delta_vis = amp / c0 if c0 > 0.0 else math.nan

    # parameter covariance: sigma^2 (X^T X)^-1 with sigma^2 either the
    # mean squared binomial error or the residual variance estimate
    if sigma is not None:
        s2 = float(np.mean(np.asarray(sigma, dtype=float) ** 2))
    else:
        s2 = ssr / (n - 3) if n > 3 else 0.0
    cov = s2 * np.linalg.inv(design.T @ design)
    se_c = math.sqrt(max(cov[0, 0], 0.0))
    if amp > 0.0:
        ga = np.array([0.0, a / amp, b / amp])
        se_amp = math.sqrt(max(float(ga @ cov @ ga), 0.0))
        gp = np.array([0.0, b / amp**2, -a / amp**2])
        se_psi = math.sqrt(max(float(gp @ cov @ gp), 0.0))
    else:
        se_amp = math.sqrt(max(cov[1, 1], 0.0))
        se_psi = math.nan
    if c0 > 0.0:
        se_delta = math.hypot(se_amp / c0, amp * se_c / c0**2)
    else:
        se_delta = math.nan

    return FitResult(
        C=c0, A=amp, Delta=delta_vis, psi=psi, rms_residual=rms, n_points=int(n),
        se_C=se_c, se_A=se_amp, se_Delta=se_delta, se_psi=se_psi,
    )


def estimate_E(
    fit: FitResult, delta: float, max_visibility_mismatch: float | None = 0.25
) -> float:
    """Invert the fitted phase shift for the wrong-association rate.

    Solves tan(psi) = E sin(delta) / (1 - E + E cos(delta)) for E, using
    the sin/cos form so psi = +-pi/2 stays finite.  The result is
    cross-validated against the fitted visibility: if the visibility
    predicted for the estimated rate differs from fit.Delta by more than
    `max_visibility_mismatch`, the data fit neither model and a
    ValueError is raised (pass None to skip the check).
    """
    sd = math.sin(delta)
    sp = math.sin(fit.psi)
    cp = math.cos(fit.psi)
    if abs(sd) < 1e-12:
        if abs(sp) < 1e-9:
            return 0.0
        raise ValueError("a fringe shift cannot arise from delta = 0 (mod pi)")
    den = cp * sd + sp * (1.0 - math.cos(delta))
    if den == 0.0:
        raise ValueError("phase shift is inconsistent with any finite rate")
    e_hat = sp / den
    if max_visibility_mismatch is not None and math.isfinite(fit.Delta):
        pred, _ = visibility_shift(CorpuscularParams(min(max(e_hat, 0.0), 1.0), delta))
        mismatch = abs(fit.Delta - pred)
        if mismatch > max_visibility_mismatch:
            raise ValueError(
                f"fitted visibility {fit.Delta:.4f} is {mismatch:.4f} away from the "
                f"value {pred:.4f} implied by the fitted shift; data fit neither model"
            )
    return e_hat


@dataclass
class StageReport:
    """Comparison of the two fixed-setting stages with the varying stage."""

    stage_deltas: tuple[float, float, float]
    stage_psis: tuple[float, float, float]
    visibility_fixed: float
    visibility_drop: float
    shift_difference: float
    e_used: float | None
    verdict: str
    tol_delta: float
    tol_psi: float
    fits: tuple[FitResult, FitResult, FitResult] | None = field(repr=False, default=None)


def _se_or_zero(value: float) -> float:
    return value if math.isfinite(value) else 0.0


def compare_stages(
    stage_fits: Sequence[FitResult],
    delta: float,
    expected_E: float | None = None,
    n_sigma: float = 3.0,
    tol_floor: float = 1e-9,
) -> StageReport:
    """Judge a three-stage run: does the varying stage look quantum or not.

    `stage_fits` are the fringe fits for (x = -1 fixed, x = +1 fixed,
    x varying), the varying stage fitted on its x = +1 group.  The verdict
    is QUANTUM-LIKE when the varying stage reproduces the fixed stages'
    visibility and the +1-fixed stage's phase within tolerance,
    CORPUSCULAR-LIKE when it instead matches the reduced visibility and
    shift implied by a wrong-association rate E in [0, 1] (the schedule's
    `expected_E` if supplied, otherwise the rate estimated from the fitted
    shift), and INCONCLUSIVE otherwise.

    Tolerances default to `n_sigma` times the fits' propagated standard
    errors plus a small floor; both are overridable.
    """
    if len(stage_fits) != 3:
        raise ValueError("expected exactly three stage fits")
    f_minus, f_plus, f_var = stage_fits

    vis_fixed = 0.5 * (f_minus.Delta + f_plus.Delta)
    se_fixed = 0.5 * math.hypot(_se_or_zero(f_minus.se_Delta), _se_or_zero(f_plus.se_Delta))
    tol_delta = n_sigma * math.hypot(_se_or_zero(f_var.se_Delta), se_fixed) + tol_floor
    tol_psi = (
        n_sigma * math.hypot(_se_or_zero(f_var.se_psi), _se_or_zero(f_plus.se_psi))
        + tol_floor
    )

    drop = vis_fixed - f_var.Delta
    shift = wrap_angle(f_var.psi - f_plus.psi)

    quantum = abs(drop) <= tol_delta and abs(shift) <= tol_psi

    e_used = expected_E
    corpuscular = False
    if not quantum:
        if e_used is None:
            try:
                e_used = estimate_E(f_var, delta, max_visibility_mismatch=None)
            except ValueError:
                e_used = None
        if e_used is not None and 0.0 <= e_used <= 1.0:
            vis_pred, psi_pred = visibility_shift(CorpuscularParams(e_used, delta))
            corpuscular = (
                abs(f_var.Delta - vis_fixed * vis_pred) <= tol_delta
                and abs(wrap_angle(shift - psi_pred)) <= tol_psi
            )
        else:
            e_used = None

    if quantum:
        verdict = VERDICT_QUANTUM
    elif corpuscular:
        verdict = VERDICT_CORPUSCULAR
    else:
        verdict = VERDICT_INCONCLUSIVE

    return StageReport(
        stage_deltas=(f_minus.Delta, f_plus.Delta, f_var.Delta),
        stage_psis=(f_minus.psi, f_plus.psi, f_var.psi),
        visibility_fixed=vis_fixed,
        visibility_drop=drop,
        shift_difference=shift,
        e_used=e_used,
        verdict=verdict,
        tol_delta=tol_delta,
        tol_psi=tol_psi,
        fits=(f_minus, f_plus, f_var),
    )
