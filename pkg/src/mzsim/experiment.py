"""Experiment orchestration: configuration, seeding, drivers and file formats.

Every run is reproducible from its configuration alone.  Randomness comes
from named PCG64 streams keyed through numpy's SeedSequence by the tuple
(master seed, stage position, grid-point index); the random setting
schedule derives its per-point seed the same way from the schedule seed.
Identical configurations therefore produce byte-identical CSV and record
files.

File formats (all LF-terminated text, floats as shortest round-trip repr):

* sweep CSV      -- ``#mzi-sweep v1`` then the column header
  ``phi0,x_mode,n0_plus,n1_plus,n0_minus,n1_minus,f0_plus,f0_minus,f0_ungrouped``
* stages CSV     -- ``#mzi-stages v1``; same columns prefixed by ``stage``
* event records  -- ``#mzi-events v1``; ``#segment stage=S phi0=P x_mode=M``
  lines open each run segment, events follow as ``i,x,d0,d1,d`` with i the
  global 1-based pulse index and d the source-side herald (always 1 in
  simulation)
* fit report     -- ``#mzi-fit v1`` key=value lines
* stage report   -- ``#mzi-stage-report v1`` key=value lines
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from . import eventcore, kernel
from .analysis import (
    DetectionTally,
    FitResult,
    FrequencyPoint,
    StageReport,
    binomial_sigma,
    compare_stages,
    estimate_E,
    fit_sinusoid,
)
from .theory import (
    CorpuscularParams,
    E_SYSTEMATIC_REF,
    corpuscular_grouped,
    e_random_approx,
    qt_fixed,
    qt_grouped,
    qt_ungrouped,
)
from .xcontrol import (
    PhaseSetting,
    SettingSchedule,
    TWO_PI,
    parse_schedule,
    x_sequence,
)

SWEEP_HEADER = "#mzi-sweep v1"
STAGES_HEADER = "#mzi-stages v1"
EVENTS_HEADER = "#mzi-events v1"
THEORY_HEADER = "#mzi-theory v1"
FIT_HEADER = "#mzi-fit v1"
STAGE_REPORT_HEADER = "#mzi-stage-report v1"

SWEEP_COLUMNS = "phi0,x_mode,n0_plus,n1_plus,n0_minus,n1_minus,f0_plus,f0_minus,f0_ungrouped"
STAGES_COLUMNS = "stage," + SWEEP_COLUMNS
THEORY_COLUMNS = (
    "phi0,qt_fixed_plus,qt_fixed_minus,qt_grouped_plus,qt_grouped_minus,"
    "qt_ungrouped,corp_plus,corp_minus,corp_f0_plus,corp_f0_minus"
)


def default_stages() -> tuple[SettingSchedule, SettingSchedule, SettingSchedule]:
    """Canonical three-stage protocol: x=-1 fixed, x=+1 fixed, alternating."""
    return (
        SettingSchedule.fixed(-1),
        SettingSchedule.fixed(1),
        SettingSchedule.systematic(1),
    )


@dataclass(frozen=True)
class ExperimentConfig:
    phi0_start: float = 0.0
    phi0_stop: float = TWO_PI
    points: int = 32
    delta: float = -math.pi / 2.0
    alpha: float = 0.99
    n_photons: int = 1_000_000
    schedule: SettingSchedule = field(default_factory=lambda: SettingSchedule.fixed(1))
    seed: int = 12345
    stages: tuple[SettingSchedule, SettingSchedule, SettingSchedule] | None = None
    order: tuple[int, int, int] = (0, 1, 2)
    init_policy: str = "default"
    init_seed: int | None = None

    def __post_init__(self):
        if self.points < 4:
            raise ValueError("need at least 4 grid points")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must lie strictly between 0 and 1")
        if self.n_photons < 1:
            raise ValueError("need at least one photon per grid point")
        if not self.phi0_stop > self.phi0_start:
            raise ValueError("phi0_stop must exceed phi0_start")
        if sorted(self.order) != [0, 1, 2]:
            raise ValueError("stage order must be a permutation of (0, 1, 2)")
        if self.stages is not None and len(self.stages) != 3:
            raise ValueError("a stage run needs exactly three stage schedules")
        if self.init_policy not in eventcore.INIT_POLICIES:
            raise ValueError(f"unknown init policy {self.init_policy!r}")
        if self.init_policy == "random" and self.init_seed is None:
            raise ValueError("random init policy requires init_seed")

    @property
    def phase_setting(self) -> PhaseSetting:
        return PhaseSetting.from_delta(self.delta)

    def phi_grid(self) -> np.ndarray:
        """Half-open grid of `points` equally spaced phases."""
        step = (self.phi0_stop - self.phi0_start) / self.points
        return self.phi0_start + step * np.arange(self.points)


def stream_for(seed: int, stage: int, point: int) -> np.random.Generator:
    """Event-randomness stream for one (stage position, grid point)."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, stage, point])))


def schedule_for_point(schedule: SettingSchedule, stage: int, point: int) -> SettingSchedule:
    """Give the random schedule an independent per-point flip stream.

    Fixed and systematic schedules are returned unchanged; the random
    schedule's seed is replaced by a SeedSequence-mixed function of
    (schedule seed, stage position, point index).
    """
    if schedule.mode != "random":
        return schedule
    derived = int(np.random.SeedSequence([schedule.seed, stage, point]).generate_state(1, np.uint64)[0])
    return replace(schedule, seed=derived)


def _fmt(value: float) -> str:
    return repr(float(value))


def _fresh_state(config: ExperimentConfig) -> np.ndarray:
    net = eventcore.new_network(
        0.0, {1: 0.0, -1: 0.0}, alpha=config.alpha,
        policy=config.init_policy, seed=config.init_seed,
    )
    return kernel.pack_network(net)


def _tally_from_counts(counts: tuple[int, int, int, int]) -> DetectionTally:
    n0p, n1p, n0m, n1m = counts
    return DetectionTally(n0_plus=n0p, n0_minus=n0m, n1_plus=n1p, n1_minus=n1m)


class RecordWriter:
    """Streams detection events to a record file, one segment per run point."""

    def __init__(self, path: str | Path):
        self._fh = open(path, "w", newline="\n")
        self._fh.write(EVENTS_HEADER + "\n")
        self._pulse = 0

    def segment(self, stage: int, phi0: float, x_mode: str) -> None:
        self._fh.write(f"#segment stage={stage} phi0={_fmt(phi0)} x_mode={x_mode}\n")

    def events(self, x_seq: np.ndarray, detectors: np.ndarray) -> None:
        n = x_seq.shape[0]
        idx = np.arange(self._pulse + 1, self._pulse + n + 1, dtype=np.int64)
        d0 = (detectors == 0).astype(np.int64)
        table = np.column_stack(
            [idx, x_seq.astype(np.int64), d0, 1 - d0, np.ones(n, dtype=np.int64)]
        )
        np.savetxt(self._fh, table, fmt="%d", delimiter=",", newline="\n")
        self._pulse += n

    def close(self) -> None:
        self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


@dataclass
class SweepResult:
    rows: list[FrequencyPoint]
    config: ExperimentConfig

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.rows])

    @property
    def phi0s(self) -> np.ndarray:
        return np.array([r.phi0 for r in self.rows])


def run_sweep(
    config: ExperimentConfig,
    csv_path: str | Path | None = None,
    record_path: str | Path | None = None,
) -> SweepResult:
    """Sweep the lower-arm phase, running n_photons fresh events per point.

    The network is reset to the configured init policy at every grid
    point; each point draws from its own derived random stream so points
    are statistically independent and may be reproduced in isolation.
    """
    setting = config.phase_setting
    grid = config.phi_grid()
    det_buf = np.empty(config.n_photons, dtype=np.uint8)
    writer = RecordWriter(record_path) if record_path else None
    rows: list[FrequencyPoint] = []
    label = config.schedule.describe()
    try:
        for j, phi0 in enumerate(grid):
            state = _fresh_state(config)
            sched = schedule_for_point(config.schedule, 0, j)
            xs = x_sequence(sched, config.n_photons)
            rng = stream_for(config.seed, 0, j)
            counts, det = kernel.run_batch(
                state, float(phi0), setting.phi1_plus, setting.phi1_minus,
                xs, config.alpha, rng, det_buf,
            )
            rows.append(
                FrequencyPoint(phi0=float(phi0), x_mode=label, counts=_tally_from_counts(counts))
            )
            if writer is not None:
                writer.segment(0, float(phi0), label)
                writer.events(xs, det)
    finally:
        if writer is not None:
            writer.close()
    if csv_path is not None:
        write_sweep_csv(rows, csv_path)
    return SweepResult(rows=rows, config=config)


@dataclass
class StagesResult:
    rows: list[FrequencyPoint]
    fits: tuple[FitResult, FitResult, FitResult]
    fit_columns: tuple[str, str, str]
    x_modes: tuple[str, str, str]
    report: StageReport
    config: ExperimentConfig


def run_stages(
    config: ExperimentConfig,
    csv_path: str | Path | None = None,
    record_path: str | Path | None = None,
    report_path: str | Path | None = None,
) -> StagesResult:
    """Execute the three stages in the configured order as one physical run.

    Beam-splitter state is initialized once at the start and never reset:
    it persists across grid points and across stage boundaries, which is
    exactly the memory effect the staged protocol probes.  Rows carry the
    stage slot (index into the configured stage list); execution order is
    config.order.
    """
    stage_scheds = config.stages if config.stages is not None else default_stages()
    setting = config.phase_setting
    grid = config.phi_grid()
    det_buf = np.empty(config.n_photons, dtype=np.uint8)
    writer = RecordWriter(record_path) if record_path else None
    state = _fresh_state(config)
    rows: list[FrequencyPoint] = []
    try:
        for pos, slot in enumerate(config.order):
            label = stage_scheds[slot].describe()
            for j, phi0 in enumerate(grid):
                sched = schedule_for_point(stage_scheds[slot], pos, j)
                xs = x_sequence(sched, config.n_photons)
                rng = stream_for(config.seed, pos, j)
                counts, det = kernel.run_batch(
                    state, float(phi0), setting.phi1_plus, setting.phi1_minus,
                    xs, config.alpha, rng, det_buf,
                )
                rows.append(
                    FrequencyPoint(
                        phi0=float(phi0), x_mode=label,
                        counts=_tally_from_counts(counts), stage=slot,
                    )
                )
                if writer is not None:
                    writer.segment(slot, float(phi0), label)
                    writer.events(xs, det)
    finally:
        if writer is not None:
            writer.close()
    if csv_path is not None:
        write_stages_csv(rows, csv_path)
    fits, columns, modes, report = analyze_stage_rows(rows, config.delta)
    result = StagesResult(
        rows=rows, fits=fits, fit_columns=columns, x_modes=modes,
        report=report, config=config,
    )
    if report_path is not None:
        Path(report_path).write_text(format_stage_report(result), newline="\n")
    return result


# --- analysis entry points shared by live runs and replay ---------------


def fit_column_for(schedule: SettingSchedule) -> str:
    """Which frequency column a stage's fringe fit uses.

    A fixed stage is fitted on its own (only populated) group; a varying
    stage is fitted on the x = +1 group.
    """
    if schedule.mode == "fixed" and schedule.x_fixed == -1:
        return "f0_minus"
    return "f0_plus"


_GROUP_OF_COLUMN = {
    "f0_plus": "group_plus",
    "f0_minus": "group_minus",
    "f0_ungrouped": "total",
}


def fit_rows(rows: Sequence[FrequencyPoint], column: str, delta: float | None = None) -> FitResult:
    """Fit one frequency column of a row set, with binomial errors.

    When `delta` is given, the wrong-association rate implied by the
    fitted shift is stored on the result as E_hat.
    """
    if column not in _GROUP_OF_COLUMN:
        raise ValueError(f"unknown frequency column {column!r}")
    phi = np.array([r.phi0 for r in rows])
    y = np.array([getattr(r, column) for r in rows])
    n = np.array([getattr(r.counts, _GROUP_OF_COLUMN[column]) for r in rows])
    fit = fit_sinusoid(phi, y, sigma=binomial_sigma(y, n))
    if delta is not None:
        fit.E_hat = estimate_E(fit, delta)
    return fit


def expected_E_for(schedule: SettingSchedule) -> float | None:
    """Reference wrong-association rate for a schedule, when one is known."""
    if schedule.mode == "fixed":
        return None
    if schedule.mode == "systematic":
        return E_SYSTEMATIC_REF.get(schedule.K)
    return e_random_approx(schedule.K)


def analyze_stage_rows(
    rows: Sequence[FrequencyPoint], delta: float
) -> tuple[tuple[FitResult, ...], tuple[str, ...], tuple[str, ...], StageReport]:
    """Per-stage fringe fits plus the quantum/corpuscular verdict."""
    slots = sorted({r.stage for r in rows})
    if slots != [0, 1, 2]:
        raise ValueError(f"stage analysis needs stages 0, 1, 2; found {slots}")
    fits = []
    columns = []
    modes = []
    for slot in slots:
        stage_rows = [r for r in rows if r.stage == slot]
        sched = parse_schedule(stage_rows[0].x_mode)
        column = fit_column_for(sched)
        fit = fit_rows(stage_rows, column, delta=None if sched.mode == "fixed" else delta)
        fits.append(fit)
        columns.append(column)
        modes.append(stage_rows[0].x_mode)
    report = compare_stages(fits, delta, expected_E=expected_E_for(parse_schedule(modes[2])))
    return tuple(fits), tuple(columns), tuple(modes), report


# --- CSV / record / report IO -------------------------------------------


def _row_cells(row: FrequencyPoint) -> list[str]:
    t = row.counts
    return [
        _fmt(row.phi0), row.x_mode,
        str(t.n0_plus), str(t.n1_plus), str(t.n0_minus), str(t.n1_minus),
        _fmt(t.f0_plus), _fmt(t.f0_minus), _fmt(t.f0_ungrouped),
    ]


def sweep_csv_text(rows: Sequence[FrequencyPoint]) -> str:
    lines = [SWEEP_HEADER, SWEEP_COLUMNS]
    lines += [",".join(_row_cells(row)) for row in rows]
    return "\n".join(lines) + "\n"


def stages_csv_text(rows: Sequence[FrequencyPoint]) -> str:
    lines = [STAGES_HEADER, STAGES_COLUMNS]
    lines += [",".join([str(row.stage)] + _row_cells(row)) for row in rows]
    return "\n".join(lines) + "\n"


def write_sweep_csv(rows: Sequence[FrequencyPoint], path: str | Path) -> None:
    Path(path).write_text(sweep_csv_text(rows), newline="\n")


def write_stages_csv(rows: Sequence[FrequencyPoint], path: str | Path) -> None:
    Path(path).write_text(stages_csv_text(rows), newline="\n")


def read_frequency_csv(path: str | Path) -> list[FrequencyPoint]:
    """Read a sweep or stages CSV back into frequency points.

    Frequencies are rederived from the integer counters, so a read row is
    exactly the row that was written.
    """
    with open(path, newline="\n") as fh:
        header = fh.readline().rstrip("\n")
        if header == SWEEP_HEADER:
            staged = False
            expect = SWEEP_COLUMNS
        elif header == STAGES_HEADER:
            staged = True
            expect = STAGES_COLUMNS
        else:
            raise ValueError(f"{path}: unrecognized header {header!r}")
        columns = fh.readline().rstrip("\n")
        if columns != expect:
            raise ValueError(f"{path}: unexpected column header {columns!r}")
        rows = []
        for lineno, line in enumerate(fh, start=3):
            cells = line.rstrip("\n").split(",")
            if len(cells) != (10 if staged else 9):
                raise ValueError(f"{path}:{lineno}: wrong number of fields")
            stage = int(cells.pop(0)) if staged else None
            rows.append(
                FrequencyPoint(
                    phi0=float(cells[0]), x_mode=cells[1],
                    counts=DetectionTally(
                        n0_plus=int(cells[2]), n0_minus=int(cells[4]),
                        n1_plus=int(cells[3]), n1_minus=int(cells[5]),
                    ),
                    stage=stage,
                )
            )
    return rows


@dataclass
class RecordSegment:
    stage: int
    phi0: float
    x_mode: str
    counts: DetectionTally
    n_pulses: int


def read_records(path: str | Path) -> list[RecordSegment]:
    """Parse an event-record file into per-segment tallies.

    Raises ValueError naming the offending line for malformed rows and for
    coincidence violations (d0 = d1 = 1).  Rows with d0 = d1 = 0 are legal
    no-detection pulses (possible in external data with imperfect
    detectors); they count toward n_pulses but not toward any counter.
    """
    segments: list[RecordSegment] = []
    counters = None
    pulses = 0

    def _flush():
        nonlocal counters, pulses
        if counters is not None:
            seg = segments[-1]
            segments[-1] = replace(
                seg,
                counts=DetectionTally(
                    n0_plus=counters[0], n0_minus=counters[1],
                    n1_plus=counters[2], n1_minus=counters[3],
                ),
                n_pulses=pulses,
            )
        counters = None
        pulses = 0

    with open(path, newline="\n") as fh:
        header = fh.readline().rstrip("\n")
        if header != EVENTS_HEADER:
            raise ValueError(f"{path}: unrecognized header {header!r}")
        for lineno, line in enumerate(fh, start=2):
            line = line.rstrip("\n")
            if not line:
                continue
            if line.startswith("#segment "):
                _flush()
                fields = dict(part.split("=", 1) for part in line[len("#segment "):].split(" "))
                try:
                    segments.append(
                        RecordSegment(
                            stage=int(fields["stage"]), phi0=float(fields["phi0"]),
                            x_mode=fields["x_mode"], counts=DetectionTally(), n_pulses=0,
                        )
                    )
                except (KeyError, ValueError):
                    raise ValueError(f"{path}:{lineno}: malformed segment line") from None
                counters = [0, 0, 0, 0]
                continue
            if line.startswith("#"):
                continue
            if counters is None:
                raise ValueError(f"{path}:{lineno}: event before any segment line")
            cells = line.split(",")
            if len(cells) != 5:
                raise ValueError(f"{path}:{lineno}: expected 5 fields, got {len(cells)}")
            try:
                _, x, d0, d1, _ = (int(c) for c in cells)
            except ValueError:
                raise ValueError(f"{path}:{lineno}: non-integer field") from None
            if x not in (-1, 1) or d0 not in (0, 1) or d1 not in (0, 1):
                raise ValueError(f"{path}:{lineno}: field out of range")
            if d0 == 1 and d1 == 1:
                raise ValueError(f"{path}:{lineno}: coincidence violation (d0 = d1 = 1)")
            pulses += 1
            if d0 == 1:
                counters[0 if x == 1 else 1] += 1
            elif d1 == 1:
                counters[2 if x == 1 else 3] += 1
    _flush()
    if not segments:
        raise ValueError(f"{path}: no segments found")
    return segments


def replay(record_path: str | Path, csv_path: str | Path | None = None) -> list[FrequencyPoint]:
    """Recompute frequency rows from a record file.

    Replaying a file the simulator wrote reproduces the live rows (and so
    a byte-identical CSV): the counters are exact integers and the derived
    frequencies repeat the same divisions.
    """
    segments = read_records(record_path)
    staged = any(seg.stage != 0 for seg in segments)
    rows = [
        FrequencyPoint(
            phi0=seg.phi0, x_mode=seg.x_mode, counts=seg.counts,
            stage=seg.stage if staged else None,
        )
        for seg in segments
    ]
    if csv_path is not None:
        if staged:
            write_stages_csv(rows, csv_path)
        else:
            write_sweep_csv(rows, csv_path)
    return rows


def theory_csv_text(
    phi0s: Sequence[float], setting: PhaseSetting, params: CorpuscularParams
) -> str:
    """Oracle curves on a phase grid: quantum family plus the corpuscular
    family at the given wrong-association rate (both intensity and
    per-group normalized forms)."""
    lines = [THEORY_HEADER, THEORY_COLUMNS]
    for phi0 in phi0s:
        p = float(phi0)
        corp_p = corpuscular_grouped(p, 1, params)
        corp_m = corpuscular_grouped(p, -1, params)
        cells = [
            p,
            qt_fixed(p, 1, setting), qt_fixed(p, -1, setting),
            qt_grouped(p, 1, setting), qt_grouped(p, -1, setting),
            qt_ungrouped(p, setting),
            corp_p, corp_m, 2.0 * corp_p, 2.0 * corp_m,
        ]
        lines.append(",".join(_fmt(c) for c in cells))
    return "\n".join(lines) + "\n"


def write_theory_csv(
    path: str | Path,
    phi0s: Sequence[float],
    setting: PhaseSetting,
    params: CorpuscularParams,
) -> None:
    Path(path).write_text(theory_csv_text(phi0s, setting, params), newline="\n")


def format_fit_report(fit: FitResult, column: str, x_mode: str) -> str:
    lines = [
        FIT_HEADER,
        f"column={column}",
        f"x_mode={x_mode}",
        f"n_points={fit.n_points}",
        f"C={_fmt(fit.C)}",
        f"A={_fmt(fit.A)}",
        f"Delta={_fmt(fit.Delta)}",
        f"psi={_fmt(fit.psi)}",
        f"rms_residual={_fmt(fit.rms_residual)}",
        f"se_Delta={_fmt(fit.se_Delta)}",
        f"se_psi={_fmt(fit.se_psi)}",
        f"E_hat={'none' if fit.E_hat is None else _fmt(fit.E_hat)}",
    ]
    return "\n".join(lines) + "\n"


def format_stage_report(result: StagesResult | None = None, **parts) -> str:
    """Render a stage run's fits and verdict as a versioned text block."""
    if result is not None:
        fits, columns, modes, report = (
            result.fits, result.fit_columns, result.x_modes, result.report,
        )
        delta = result.config.delta
    else:
        fits = parts["fits"]
        columns = parts["columns"]
        modes = parts["modes"]
        report = parts["report"]
        delta = parts["delta"]
    lines = [STAGE_REPORT_HEADER]
    for slot, (fit, column, mode) in enumerate(zip(fits, columns, modes)):
        lines.append(
            f"stage={slot} x_mode={mode} column={column} "
            f"C={_fmt(fit.C)} Delta={_fmt(fit.Delta)} psi={_fmt(fit.psi)} "
            f"rms={_fmt(fit.rms_residual)} "
            f"E_hat={'none' if fit.E_hat is None else _fmt(fit.E_hat)}"
        )
    lines += [
        f"delta={_fmt(delta)}",
        f"e_used={'none' if report.e_used is None else _fmt(report.e_used)}",
        f"visibility_fixed={_fmt(report.visibility_fixed)}",
        f"visibility_drop={_fmt(report.visibility_drop)}",
        f"shift_difference={_fmt(report.shift_difference)}",
        f"tol_delta={_fmt(report.tol_delta)}",
        f"tol_psi={_fmt(report.tol_psi)}",
        f"verdict={report.verdict}",
    ]
    return "\n".join(lines) + "\n"


# --- flat key=value configuration files ----------------------------------


def load_config_file(path: str | Path) -> dict[str, str]:
    """Parse the flat configuration grammar: one ``key = value`` per line,
    blank lines and lines starting with ``#`` ignored, keys matching the
    CLI flag names with dashes replaced by underscores."""
    out: dict[str, str] = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            key, value = line.split("=", 1)
            out[key.strip().replace("-", "_")] = value.strip()
    return out


_CONFIG_CASTS = {
    "phi0_start": float,
    "phi0_stop": float,
    "points": int,
    "delta": float,
    "alpha": float,
    "n": int,
    "seed": int,
    "init_seed": int,
}


def config_from_mapping(mapping: dict) -> ExperimentConfig:
    """Build an ExperimentConfig from string-or-typed key/value pairs.

    Recognized keys: phi0_start, phi0_stop, points, delta, alpha, n, seed,
    schedule (descriptor like ``systematic:10``), stages (comma-separated
    descriptors), order (like ``0,1,2``), init, init_seed.
    """
    kwargs = {}
    for key, value in mapping.items():
        if value is None:
            continue
        if key in _CONFIG_CASTS:
            target = "n_photons" if key == "n" else key
            kwargs[target] = _CONFIG_CASTS[key](value)
        elif key == "schedule":
            kwargs["schedule"] = value if isinstance(value, SettingSchedule) else parse_schedule(value)
        elif key == "stages":
            if isinstance(value, str):
                value = tuple(parse_schedule(s) for s in value.split(","))
            kwargs["stages"] = tuple(value)
        elif key == "order":
            if isinstance(value, str):
                value = tuple(int(v) for v in value.split(","))
            kwargs["order"] = tuple(value)
        elif key == "init":
            kwargs["init_policy"] = value
        else:
            raise ValueError(f"unknown configuration key {key!r}")
    return ExperimentConfig(**kwargs)
