"""The interferometer setups: single bomb test, annihilation pair, phase pair.

Each runner assembles the same pipeline (first splitters, the coupling if
any, the optional in-arm detectors, second splitters, readout) and returns
a normalized outcome table.  The closed forms kept alongside (retest
efficiency, the joint bright-port amplitude, the gravitational phase) are the
quantities the rest of the package reasons about.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .state import (
    ABSORBED,
    EXPLODED,
    U,
    BeamSplitterParams,
    JointState,
    OutcomeDistribution,
    apply_absorber,
    apply_annihilation_coupling,
    apply_bs1,
    apply_bs2,
    apply_phase_coupling,
    measure,
)

__all__ = [
    "GRAVITATIONAL_CONSTANT",
    "HBAR",
    "Coupling",
    "ExperimentConfig",
    "GravityParams",
    "run_ev",
    "ev_retest_efficiency",
    "run_pair_state",
    "run_pair",
    "run_annihilation",
    "run_phase",
    "dark_port_coefficient",
    "gravity_phase",
]

GRAVITATIONAL_CONSTANT = 6.67430e-11  # m^3 kg^-1 s^-2 (CODATA 2018)
HBAR = 1.054571817e-34  # J s (CODATA 2018)

_COUPLING_KINDS = ("none", "annihilation", "phase")


@dataclass(frozen=True)
class Coupling:
    """How the two interferometers interact where their arms overlap."""

    kind: str
    phi: float = 0.0  # radians, used by the "phase" kind only

    def __post_init__(self) -> None:
        if self.kind not in _COUPLING_KINDS:
            raise ValueError(f"coupling kind must be one of {_COUPLING_KINDS}, got {self.kind!r}")
        if not math.isfinite(self.phi):
            raise ValueError(f"coupling phase must be finite, got {self.phi!r}")

    @classmethod
    def none(cls) -> "Coupling":
        return cls("none")

    @classmethod
    def annihilation(cls) -> "Coupling":
        return cls("annihilation")

    @classmethod
    def phase(cls, phi: float) -> "Coupling":
        return cls("phase", phi=phi)

    @property
    def normalized_phi(self) -> float:
        """Phase folded into [0, 2*pi) for reporting; arithmetic uses the raw value."""
        return self.phi % (2.0 * math.pi)


@dataclass(frozen=True)
class ExperimentConfig:
    """A twin-interferometer run: splitter ratio, coupling, detector placement.

    ``u1``/``u2`` place an absorbing detector on the respective particle's
    ``u`` arm, between the splitters.
    """

    bs: BeamSplitterParams
    coupling: Coupling
    u1: bool = False
    u2: bool = False


@dataclass(frozen=True)
class GravityParams:
    """Masses and geometry for a gravitationally induced coupling phase."""

    mass_kg: float
    interaction_length_m: float
    separation_m: float

    def __post_init__(self) -> None:
        for name in ("mass_kg", "interaction_length_m", "separation_m"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise ValueError(f"{name} must be positive and finite, got {value!r}")


def run_ev(bs: BeamSplitterParams, bomb_present: bool) -> OutcomeDistribution:
    """Single interferometer, optionally with a triggering bomb in arm ``u``.

    Without the bomb the tuned device sends everything to ``C``.  With it,
    outcomes are ``exploded`` (r^2), ``C`` (t^4) and the interaction-free
    flag ``D`` (t^2 r^2).
    """
    state = JointState.single()
    state = apply_bs1(state, 0, bs)
    if bomb_present:
        state = apply_absorber(state, 0, U, EXPLODED)
    state = apply_bs2(state, 0, bs)
    return measure(state)


def ev_retest_efficiency(bs: BeamSplitterParams) -> float:
    """Fraction of live bombs eventually flagged when every ``C`` run is retried.

    Summing the geometric series of survive-and-retest rounds gives
    t^2 r^2 / (1 - t^4) = t^2 / (1 + t^2), approaching 1/2 as t -> 1.
    """
    t_sq = bs.t * bs.t
    return t_sq / (1.0 + t_sq)


def run_pair_state(config: ExperimentConfig) -> JointState:
    """Final (pre-readout) joint state of a twin run.

    The second splitters act on both sides even when an in-arm detector is
    placed: the not-absorbed part of that side still propagates to ``C``/``D``.
    """
    state = JointState.pair()
    state = apply_bs1(state, 0, config.bs)
    state = apply_bs1(state, 1, config.bs)
    if config.coupling.kind == "annihilation":
        state = apply_annihilation_coupling(state)
    elif config.coupling.kind == "phase":
        state = apply_phase_coupling(state, config.coupling.phi)
    if config.u1:
        state = apply_absorber(state, 0, U, ABSORBED)
    if config.u2:
        state = apply_absorber(state, 1, U, ABSORBED)
    state = apply_bs2(state, 0, config.bs)
    state = apply_bs2(state, 1, config.bs)
    return state


def run_pair(config: ExperimentConfig) -> OutcomeDistribution:
    """Run a twin configuration of any coupling kind and read out."""
    return measure(run_pair_state(config))


def run_annihilation(config: ExperimentConfig) -> OutcomeDistribution:
    """Twin run whose overlapping ``u`` arms annihilate into ``gamma``."""
    if config.coupling.kind != "annihilation":
        raise ValueError(f"expected annihilation coupling, got {config.coupling.kind!r}")
    return run_pair(config)


def run_phase(config: ExperimentConfig) -> OutcomeDistribution:
    """Twin run whose overlapping ``v`` arms pick up a joint phase."""
    if config.coupling.kind != "phase":
        raise ValueError(f"expected phase coupling, got {config.coupling.kind!r}")
    return run_pair(config)


def dark_port_coefficient(bs: BeamSplitterParams, phi: float) -> complex:
    """Closed-form joint bright-port amplitude of the phase-coupled pair.

    With no in-arm detectors the ``(C, C)`` amplitude collapses to
    ``-(r^4 + 2 r^2 t^2 + t^4 e^{i phi})``; at ``phi = 0`` this is exactly
    ``-1`` and every other joint outcome is dark.
    """
    r_sq = bs.r * bs.r
    t_sq = bs.t * bs.t
    return -(r_sq * r_sq + 2.0 * r_sq * t_sq + t_sq * t_sq * cmath.exp(1j * phi))


def gravity_phase(params: GravityParams) -> float:
    """Coupling phase acquired gravitationally: ``G m^2 L / (hbar d)``."""
    return (
        GRAVITATIONAL_CONSTANT
        * params.mass_kg
        * params.mass_kg
        * params.interaction_length_m
        / (HBAR * params.separation_m)
    )
