"""Event-by-event Mach-Zehnder interferometer simulator.

A two-setting interferometer simulated photon by photon with stateful
beam-splitter processors, together with closed-form quantum and
corpuscular oracles and a fringe-fitting pipeline that measures the
visibility reduction and phase shift appearing when detection events are
grouped by the setting value.
"""

from .analysis import (
    DetectionTally,
    FitResult,
    FrequencyPoint,
    StageReport,
    compare_stages,
    estimate_E,
    fit_sinusoid,
    tally,
)
from .eventcore import (
    BeamSplitterState,
    DetectionEvent,
    Message,
    Messenger,
    ModelIntegrityError,
    MziNetwork,
    bs_process,
    candidate_messages,
    new_network,
    reset_network,
    rotate_message,
    run_photon,
)
from .experiment import (
    ExperimentConfig,
    SweepResult,
    StagesResult,
    replay,
    run_stages,
    run_sweep,
)
from .theory import (
    AmplitudePair,
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
from .xcontrol import PhaseSetting, SettingSchedule, phase_for, x_at, x_sequence

__version__ = "0.1.0"

__all__ = [
    "AmplitudePair",
    "BeamSplitterState",
    "CorpuscularParams",
    "DetectionEvent",
    "DetectionTally",
    "E_SYSTEMATIC_REF",
    "ExperimentConfig",
    "FitResult",
    "FrequencyPoint",
    "Message",
    "Messenger",
    "ModelIntegrityError",
    "MziNetwork",
    "PhaseSetting",
    "SettingSchedule",
    "StageReport",
    "StagesResult",
    "SweepResult",
    "bs_process",
    "candidate_messages",
    "compare_stages",
    "corpuscular_grouped",
    "e_random_approx",
    "estimate_E",
    "fit_sinusoid",
    "mzi_amplitudes",
    "new_network",
    "phase_for",
    "qt_density_check",
    "qt_fixed",
    "qt_grouped",
    "qt_ungrouped",
    "replay",
    "reset_network",
    "rotate_message",
    "run_photon",
    "run_stages",
    "run_sweep",
    "tally",
    "visibility_shift",
    "x_at",
    "x_sequence",
]
