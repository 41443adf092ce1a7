"""Exact-amplitude simulation of coupled Mach-Zehnder interferometer pairs.

The package covers the single-interferometer bomb test, twin pairs coupled
by annihilation of the overlapping arms or by a joint phase, the four-term
Bell-type inequality with an exact local-model membership test, parameter
sweeps with deterministic refinement, and the gravitationally induced
coupling phase.
"""

from .bell import (
    BehaviorTable,
    BellReport,
    DeterministicStrategy,
    HardyConstants,
    LhvMembership,
    LocalStrategy,
    behavior_from_phase_setup,
    bell_violation,
    enumerate_deterministic_strategies,
    hardy_constants,
    lhv_membership,
    logical_inequality,
    paradox_statement_probs,
)
from .experiments import (
    GRAVITATIONAL_CONSTANT,
    HBAR,
    Coupling,
    ExperimentConfig,
    GravityParams,
    dark_port_coefficient,
    ev_retest_efficiency,
    gravity_phase,
    run_annihilation,
    run_ev,
    run_pair,
    run_pair_state,
    run_phase,
)
from .explore import (
    DEFAULT_GRID,
    Optimum,
    SweepCell,
    SweepGrid,
    find_dark_port_tuning,
    find_max_violation,
    find_max_violation_at_phi,
    sweep,
    violation_at,
)
from .state import (
    BeamSplitterParams,
    JointState,
    OutcomeDistribution,
    PipelineError,
    apply_absorber,
    apply_annihilation_coupling,
    apply_bs1,
    apply_bs2,
    apply_phase_coupling,
    measure,
)

__version__ = "0.1.0"

__all__ = [
    "BeamSplitterParams",
    "JointState",
    "OutcomeDistribution",
    "PipelineError",
    "apply_bs1",
    "apply_bs2",
    "apply_phase_coupling",
    "apply_annihilation_coupling",
    "apply_absorber",
    "measure",
    "Coupling",
    "ExperimentConfig",
    "GravityParams",
    "GRAVITATIONAL_CONSTANT",
    "HBAR",
    "run_ev",
    "ev_retest_efficiency",
    "run_pair",
    "run_pair_state",
    "run_annihilation",
    "run_phase",
    "dark_port_coefficient",
    "gravity_phase",
    "BehaviorTable",
    "BellReport",
    "LocalStrategy",
    "DeterministicStrategy",
    "LhvMembership",
    "HardyConstants",
    "behavior_from_phase_setup",
    "bell_violation",
    "enumerate_deterministic_strategies",
    "lhv_membership",
    "logical_inequality",
    "paradox_statement_probs",
    "hardy_constants",
    "SweepGrid",
    "SweepCell",
    "Optimum",
    "DEFAULT_GRID",
    "sweep",
    "violation_at",
    "find_max_violation",
    "find_max_violation_at_phi",
    "find_dark_port_tuning",
    "__version__",
]
