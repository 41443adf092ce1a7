"""Sparse exact-amplitude engine for one- and two-particle interferometer states.

A state is a sparse map from joint port labels to complex amplitudes.  Each
particle sits on one per-particle port (source ``s``, internal arms ``u``/``v``,
detector ports ``c``/``d``, or an absorbing sink); a pair that annihilates
jointly occupies the single ``gamma`` sink.  Single-particle states carry the
``NONE`` placeholder in their second slot.

Conventions are fixed once so downstream golden values stay reproducible:

* every beamsplitter reflection picks up a factor ``i``, which makes both
  splitter maps unitary;
* the first splitter transmits with amplitude ``t`` (``s -> i r u + t v``)
  while the second has the roles swapped (``u -> r c + i t d``,
  ``v -> i t c + r d``), so an undisturbed interferometer delivers the
  particle to ``c`` and leaves ``d`` dark;
* free propagation phases along the arms are absorbed into the labels.

All transformations are pure functions returning new states; nothing here
holds shared mutable state.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

__all__ = [
    "S",
    "U",
    "V",
    "C",
    "D",
    "ABSORBED",
    "EXPLODED",
    "NONE",
    "GAMMA",
    "PRUNE_THRESHOLD",
    "NORM_TOL",
    "PipelineError",
    "BeamSplitterParams",
    "JointState",
    "OutcomeDistribution",
    "apply_bs1",
    "apply_bs2",
    "apply_phase_coupling",
    "apply_annihilation_coupling",
    "apply_absorber",
    "measure",
]

# Per-particle port labels.
S = "s"
U = "u"
V = "v"
C = "c"
D = "d"
ABSORBED = "absorbed"  # removed by an in-arm detector
EXPLODED = "exploded"  # removed by triggering the bomb

NONE = "-"  # placeholder second slot of a single-particle state
GAMMA = "gamma"  # joint sink: both particles annihilated

SINKS = (ABSORBED, EXPLODED)

# Amplitudes below this magnitude are dropped after every operation so that
# exactly-cancelling paths leave no residue keys behind.
PRUNE_THRESHOLD = 1e-15

NORM_TOL = 1e-12

Key = tuple[str, str] | str
Outcome = tuple[str, str] | str


class PipelineError(ValueError):
    """An operation was applied to a state it is not valid for."""


@dataclass(frozen=True)
class BeamSplitterParams:
    """Real splitter amplitudes with ``t**2 + r**2 = 1``, both strictly positive.

    ``t`` is the transmission amplitude of the first splitter; the second
    splitter uses the same pair with the roles of ``t`` and ``r`` exchanged.
    """

    t: float
    r: float

    def __post_init__(self) -> None:
        if not (0.0 < self.t < 1.0 and 0.0 < self.r < 1.0):
            raise ValueError(
                f"t and r must lie strictly inside (0, 1), got t={self.t!r}, r={self.r!r}"
            )
        if abs(self.t * self.t + self.r * self.r - 1.0) > NORM_TOL:
            raise ValueError(
                f"t^2 + r^2 must equal 1 within {NORM_TOL}, got t={self.t!r}, r={self.r!r}"
            )

    @classmethod
    def from_r(cls, r: float) -> "BeamSplitterParams":
        if not 0.0 < r < 1.0:
            raise ValueError(f"reflection amplitude must lie in (0, 1), got {r!r}")
        return cls(t=math.sqrt(1.0 - r * r), r=r)

    @classmethod
    def from_r_squared(cls, r_squared: float) -> "BeamSplitterParams":
        if not 0.0 < r_squared < 1.0:
            raise ValueError(f"reflectance must lie in (0, 1), got {r_squared!r}")
        return cls(t=math.sqrt(1.0 - r_squared), r=math.sqrt(r_squared))

    @classmethod
    def balanced(cls) -> "BeamSplitterParams":
        return cls.from_r_squared(0.5)


@dataclass(frozen=True)
class JointState:
    """Sparse map from joint labels to complex amplitudes.

    Keys are ``(label, label)`` pairs, or the bare ``GAMMA`` string for the
    joint annihilation sink.  Treat the mapping as read-only; operations
    always build a fresh state.
    """

    amplitudes: dict[Key, complex]

    @classmethod
    def single(cls) -> "JointState":
        """One particle at the source port."""
        return cls({(S, NONE): 1.0 + 0.0j})

    @classmethod
    def pair(cls) -> "JointState":
        """Two particles, each at its own source port."""
        return cls({(S, S): 1.0 + 0.0j})

    @classmethod
    def of(cls, amplitudes: dict[Key, complex]) -> "JointState":
        """Build a state from an explicit amplitude map (pruned, copied)."""
        return cls(_pruned({k: complex(v) for k, v in amplitudes.items()}))

    def amplitude(self, key: Key) -> complex:
        return self.amplitudes.get(key, 0j)

    def norm_squared(self) -> float:
        return sum(a.real * a.real + a.imag * a.imag for a in self.amplitudes.values())


@dataclass(frozen=True)
class OutcomeDistribution:
    """Normalized probability table over terminal detector outcomes.

    Outcomes are per-side letters (``"U"``, ``"C"``, ``"D"``, ``"exploded"``)
    for single-particle runs, pairs of letters for twin runs, plus the
    ``"gamma"`` joint sink.
    """

    probabilities: dict[Outcome, float]

    @classmethod
    def of(cls, probabilities: dict[Outcome, float]) -> "OutcomeDistribution":
        cleaned: dict[Outcome, float] = {}
        for outcome, p in probabilities.items():
            if p < -1e-15:
                raise ValueError(f"negative probability {p!r} for outcome {outcome!r}")
            cleaned[outcome] = max(p, 0.0)
        total = sum(cleaned.values())
        if abs(total - 1.0) > NORM_TOL:
            raise ValueError(f"probabilities sum to {total!r}, expected 1 within {NORM_TOL}")
        return cls(cleaned)

    def prob(self, outcome: Outcome) -> float:
        return self.probabilities.get(outcome, 0.0)

    def total(self) -> float:
        return sum(self.probabilities.values())

    def marginal(self, side: int) -> dict[str, float]:
        """Per-side totals over pair outcomes; joint sinks are excluded."""
        if side not in (0, 1):
            raise ValueError(f"side must be 0 or 1, got {side!r}")
        out: dict[str, float] = {}
        for outcome, p in self.probabilities.items():
            if isinstance(outcome, tuple):
                out[outcome[side]] = out.get(outcome[side], 0.0) + p
        return out


def _pruned(amplitudes: dict[Key, complex]) -> dict[Key, complex]:
    return {k: v for k, v in amplitudes.items() if abs(v) >= PRUNE_THRESHOLD}


def _accumulate(amplitudes: dict[Key, complex], key: Key, value: complex) -> None:
    amplitudes[key] = amplitudes.get(key, 0j) + value


def _check_particle(particle: int) -> None:
    if particle not in (0, 1):
        raise ValueError(f"particle index must be 0 or 1, got {particle!r}")


def _slot_label(key: Key, particle: int) -> str:
    if key == GAMMA:
        return GAMMA
    return key[particle]


def _replace_slot(key: tuple[str, str], particle: int, label: str) -> tuple[str, str]:
    if particle == 0:
        return (label, key[1])
    return (key[0], label)


def apply_bs1(state: JointState, particle: int, params: BeamSplitterParams) -> JointState:
    """First splitter on one particle: ``s -> i*r*u + t*v``.

    The addressed particle must sit entirely on ``s``; anything else is a
    pipeline-order bug and raises :class:`PipelineError`.
    """
    _check_particle(particle)
    out: dict[Key, complex] = {}
    for key, amp in state.amplitudes.items():
        if _slot_label(key, particle) != S:
            raise PipelineError(
                f"first splitter expects particle {particle} on {S!r}, found key {key!r}"
            )
        _accumulate(out, _replace_slot(key, particle, U), amp * 1j * params.r)
        _accumulate(out, _replace_slot(key, particle, V), amp * params.t)
    return JointState(_pruned(out))


def apply_bs2(state: JointState, particle: int, params: BeamSplitterParams) -> JointState:
    """Second splitter on one particle: ``u -> r*c + i*t*d``, ``v -> i*t*c + r*d``.

    Amplitudes already on sinks or detector ports pass through untouched;
    amplitude still on ``s`` means the first splitter was skipped and raises.
    """
    _check_particle(particle)
    out: dict[Key, complex] = {}
    for key, amp in state.amplitudes.items():
        label = _slot_label(key, particle)
        if label in (S, NONE):
            raise PipelineError(
                f"second splitter cannot act on particle {particle} of key {key!r}"
            )
        if label == U:
            _accumulate(out, _replace_slot(key, particle, C), amp * params.r)
            _accumulate(out, _replace_slot(key, particle, D), amp * 1j * params.t)
        elif label == V:
            _accumulate(out, _replace_slot(key, particle, C), amp * 1j * params.t)
            _accumulate(out, _replace_slot(key, particle, D), amp * params.r)
        else:
            _accumulate(out, key, amp)
    return JointState(_pruned(out))


def _require_internal_pair(state: JointState, op: str) -> None:
    for key in state.amplitudes:
        if key == GAMMA or key[0] not in (U, V) or key[1] not in (U, V):
            raise PipelineError(
                f"{op} requires both particles on the internal arms, found key {key!r}"
            )


def apply_phase_coupling(state: JointState, phi: float) -> JointState:
    """Joint phase on the overlap: the ``(v, v)`` amplitude gains ``exp(i*phi)``.

    All other amplitudes are carried over bit-identically.
    """
    _require_internal_pair(state, "phase coupling")
    out = dict(state.amplitudes)
    key = (V, V)
    if key in out:
        out[key] = out[key] * cmath.exp(1j * phi)
    return JointState(_pruned(out))


def apply_annihilation_coupling(state: JointState) -> JointState:
    """Move the joint ``(u, u)`` amplitude into the ``gamma`` sink."""
    _require_internal_pair(state, "annihilation coupling")
    out = dict(state.amplitudes)
    amp = out.pop((U, U), None)
    if amp is not None:
        _accumulate(out, GAMMA, amp)
    return JointState(_pruned(out))


def apply_absorber(
    state: JointState, particle: int, arm: str, sink: str = ABSORBED
) -> JointState:
    """Absorb one particle's amplitude on ``arm`` into ``sink``.

    The partner particle's label is untouched, so which-path information is
    kept in the joint key.  The addressed particle must be on the internal
    arms or already in a sink.
    """
    _check_particle(particle)
    if arm not in (U, V):
        raise ValueError(f"absorber arm must be {U!r} or {V!r}, got {arm!r}")
    if sink not in SINKS:
        raise ValueError(f"absorber sink must be one of {SINKS}, got {sink!r}")
    out: dict[Key, complex] = {}
    for key, amp in state.amplitudes.items():
        label = _slot_label(key, particle)
        if label in (S, C, D, NONE):
            raise PipelineError(
                f"absorber expects particle {particle} between the splitters, found key {key!r}"
            )
        if label == arm:
            _accumulate(out, _replace_slot(key, particle, sink), amp)
        else:
            _accumulate(out, key, amp)
    return JointState(_pruned(out))


_OUTCOME_LETTER = {C: "C", D: "D", ABSORBED: "U", EXPLODED: "exploded"}


def measure(state: JointState) -> OutcomeDistribution:
    """Born-rule readout of a fully terminal state.

    Raises :class:`PipelineError` if any amplitude is still on ``s``, ``u``
    or ``v``; detection happens only after both splitters have acted.
    """
    probs: dict[Outcome, float] = {}
    for key, amp in state.amplitudes.items():
        p = amp.real * amp.real + amp.imag * amp.imag
        if key == GAMMA:
            outcome: Outcome = "gamma"
        else:
            first, second = key
            if first in (S, U, V) or second in (S, U, V):
                raise PipelineError(f"cannot measure: amplitude left on key {key!r}")
            if second == NONE:
                outcome = _OUTCOME_LETTER[first]
            else:
                outcome = (_OUTCOME_LETTER[first], _OUTCOME_LETTER[second])
        probs[outcome] = probs.get(outcome, 0.0) + p
    return OutcomeDistribution.of(probs)
