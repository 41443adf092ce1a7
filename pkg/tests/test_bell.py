"""Tests for behaviors, the four-term inequality, and local-model membership."""

import math
import random

import numpy as np
import pytest

from mzpair.bell import (
    FEASIBILITY_TOL,
    SETTINGS,
    BehaviorTable,
    LocalStrategy,
    behavior_from_phase_setup,
    behavior_vector,
    bell_violation,
    enumerate_deterministic_strategies,
    hardy_constants,
    lhv_membership,
    logical_inequality,
    membership_system,
    paradox_statement_probs,
    side_outcomes,
)
from mzpair.experiments import Coupling, ExperimentConfig, run_phase
from mzpair.state import BeamSplitterParams

ATOL = 1e-12

OPT_R = 0.5830902
OPT_PHI = math.pi
TUNED_R_SQUARED = (2.0 - math.sqrt(2.0)) / 2.0
TUNED_JOINT_PROB = (3.0 - 2.0 * math.sqrt(2.0)) / 2.0


def optimum_behavior():
    return behavior_from_phase_setup(BeamSplitterParams.from_r(OPT_R), OPT_PHI)


def test_side_outcomes():
    assert side_outcomes(True) == ("U", "C", "D")
    assert side_outcomes(False) == ("C", "D")


class TestBehaviorTable:
    def _product_tables(self):
        present = {"U": 0.2, "C": 0.5, "D": 0.3}
        absent = {"C": 0.6, "D": 0.4}
        tables = {}
        for setting in SETTINGS:
            m1 = present if setting[0] else absent
            m2 = present if setting[1] else absent
            tables[setting] = {
                (o1, o2): p1 * p2 for o1, p1 in m1.items() for o2, p2 in m2.items()
            }
        return tables

    def test_product_table_accessors(self):
        behavior = BehaviorTable.from_tables(self._product_tables())
        assert abs(behavior.prob((True, False), ("U", "C")) - 0.2 * 0.6) <= ATOL
        assert abs(behavior.marginal(0, True, False)["U"] - 0.2) <= ATOL
        assert abs(behavior.marginal(1, False, True)["C"] - 0.6) <= ATOL
        assert behavior.no_signaling_residual() <= 1e-9

    def test_rejects_missing_setting(self):
        tables = self._product_tables()
        del tables[(False, False)]
        with pytest.raises(ValueError, match="missing table"):
            BehaviorTable.from_tables(tables)

    def test_rejects_negative_probability(self):
        tables = self._product_tables()
        tables[(True, True)][("C", "C")] = -0.01
        with pytest.raises(ValueError, match="negative probability"):
            BehaviorTable.from_tables(tables)

    def test_rejects_impossible_outcome(self):
        tables = self._product_tables()
        tables[(False, True)][("U", "C")] = 0.1
        with pytest.raises(ValueError, match="impossible"):
            BehaviorTable.from_tables(tables)

    def test_rejects_unnormalized_block(self):
        tables = self._product_tables()
        tables[(True, True)][("C", "C")] += 0.2
        with pytest.raises(ValueError, match="sums to"):
            BehaviorTable.from_tables(tables)

    def test_rejects_signaling_table(self):
        tables = {
            (True, True): {("C", "C"): 1.0},
            (True, False): {("C", "C"): 1.0},
            (False, True): {("C", "C"): 1.0},
            (False, False): {("C", "D"): 1.0},
        }
        with pytest.raises(ValueError, match="no-signaling"):
            BehaviorTable.from_tables(tables)


class TestSimulatedBehavior:
    def test_no_signaling_on_random_points(self):
        rng = random.Random(31)
        for _ in range(25):
            bs = BeamSplitterParams.from_r(rng.uniform(0.05, 0.95))
            behavior = behavior_from_phase_setup(bs, rng.uniform(0.0, 2.0 * math.pi))
            assert behavior.no_signaling_residual() <= 1e-9

    def test_marginals_match_direct_runs(self):
        bs = BeamSplitterParams.from_r(0.47)
        phi = 2.2
        behavior = behavior_from_phase_setup(bs, phi)
        for setting in SETTINGS:
            config = ExperimentConfig(
                bs=bs, coupling=Coupling.phase(phi), u1=setting[0], u2=setting[1]
            )
            direct = run_phase(config)
            for side in (0, 1):
                table = behavior.marginal(side, setting[side], setting[1 - side])
                raw = direct.marginal(side)
                for letter, p in table.items():
                    assert abs(p - raw.get(letter, 0.0)) <= ATOL

    def test_zero_phase_factorizes(self):
        behavior = behavior_from_phase_setup(BeamSplitterParams.from_r(0.44), 0.0)
        for setting in SETTINGS:
            m1 = behavior.marginal(0, setting[0], setting[1])
            m2 = behavior.marginal(1, setting[1], setting[0])
            for o1, p1 in m1.items():
                for o2, p2 in m2.items():
                    assert abs(behavior.prob(setting, (o1, o2)) - p1 * p2) <= ATOL


class TestBellViolation:
    def test_optimum_point(self):
        report = bell_violation(optimum_behavior())
        assert abs(report.violation - 0.0990) <= 1e-3
        assert report.p_u1_notc2 <= ATOL
        assert report.p_notc1_u2 <= ATOL
        assert report.lhv_feasible is False

    def test_tuned_point_value(self):
        behavior = behavior_from_phase_setup(
            BeamSplitterParams.from_r_squared(TUNED_R_SQUARED), math.pi
        )
        report = bell_violation(behavior, check_lhv=False)
        assert abs(report.violation - TUNED_JOINT_PROB) <= ATOL
        assert report.p_c1c2 <= ATOL

    def test_uncoupled_point_is_local(self):
        behavior = behavior_from_phase_setup(BeamSplitterParams.from_r(0.3), 0.0)
        report = bell_violation(behavior)
        assert report.violation <= 0.0
        assert report.lhv_feasible is True

    def test_feasibility_never_coexists_with_violation(self):
        for r, phi in ((0.3, 0.0), (0.45, 2.0), (OPT_R, OPT_PHI), (0.7, math.pi)):
            report = bell_violation(behavior_from_phase_setup(BeamSplitterParams.from_r(r), phi))
            assert not (report.lhv_feasible and report.violation > FEASIBILITY_TOL)

    def test_skipping_membership_leaves_none(self):
        report = bell_violation(optimum_behavior(), check_lhv=False)
        assert report.lhv_feasible is None


class TestDeterministicStrategies:
    def test_thirty_six_distinct_behaviors(self):
        strategies = enumerate_deterministic_strategies()
        assert len(strategies) == 36
        vectors = {tuple(behavior_vector(s.behavior())) for s in strategies}
        assert len(vectors) == 36

    def test_every_strategy_satisfies_the_inequality(self):
        for strategy in enumerate_deterministic_strategies():
            report = bell_violation(strategy.behavior(), check_lhv=False)
            assert report.violation <= ATOL

    @pytest.mark.parametrize("index", [0, 7, 20, 35])
    def test_vertices_are_point_masses(self, index):
        strategies = enumerate_deterministic_strategies()
        membership = lhv_membership(strategies[index].behavior())
        assert membership.feasible
        assert membership.weights[index] >= 1.0 - 1e-9
        assert abs(sum(membership.weights) - 1.0) <= 1e-9

    def test_invalid_responses_rejected(self):
        with pytest.raises(ValueError, match="placed detector"):
            LocalStrategy(when_present="X", when_absent="C")
        with pytest.raises(ValueError, match="absent detector"):
            LocalStrategy(when_present="U", when_absent="U")


class TestMembershipSystem:
    def test_shapes(self):
        A, b = membership_system(optimum_behavior())
        assert A.shape == (26, 36)
        assert b.shape == (26,)
        assert b[-1] == 1.0
        assert np.all(A[-1] == 1.0)
        # each strategy occupies one cell per setting, plus the norm row
        assert np.all(A.sum(axis=0) == 5.0)

    def test_behavior_vector_length(self):
        assert behavior_vector(optimum_behavior()).shape == (25,)


class TestLhvMembership:
    def test_uncoupled_behavior_recombines(self):
        behavior = behavior_from_phase_setup(BeamSplitterParams.from_r(0.3), 0.0)
        membership = lhv_membership(behavior)
        assert membership.feasible
        assert membership.residual <= 1e-9
        assert membership.infeasibility <= FEASIBILITY_TOL
        assert len(membership.weights) == 36
        assert min(membership.weights) >= 0.0
        assert membership.certificate is None

    def test_random_mixtures_recombine(self):
        strategies = enumerate_deterministic_strategies()
        rng = random.Random(32)
        for _ in range(5):
            weights = [rng.random() for _ in range(36)]
            total = sum(weights)
            weights = [w / total for w in weights]
            tables = {setting: {} for setting in SETTINGS}
            for w, strategy in zip(weights, strategies):
                for setting in SETTINGS:
                    outcome = (
                        strategy.side1.outcome(setting[0]),
                        strategy.side2.outcome(setting[1]),
                    )
                    tables[setting][outcome] = tables[setting].get(outcome, 0.0) + w
            membership = lhv_membership(BehaviorTable.from_tables(tables))
            assert membership.feasible
            assert membership.residual <= 1e-9

    def test_optimum_behavior_is_outside(self):
        behavior = optimum_behavior()
        membership = lhv_membership(behavior)
        assert not membership.feasible
        assert membership.weights is None
        assert membership.infeasibility > FEASIBILITY_TOL
        A, b = membership_system(behavior)
        y = np.asarray(membership.certificate)
        assert y.shape == (26,)
        assert float(y @ b) > FEASIBILITY_TOL
        assert float(np.max(A.T @ y)) <= FEASIBILITY_TOL


class TestLogicalInequality:
    def test_certain_statements_leave_unit_excess(self):
        assert abs(logical_inequality([1.0, 1.0, 1.0, 1.0]) - 1.0) <= ATOL

    def test_single_statement_excess_is_its_probability(self):
        assert abs(logical_inequality([0.3]) - 0.3) <= ATOL

    def test_balanced_pair_has_no_excess(self):
        assert abs(logical_inequality([0.5, 0.5])) <= ATOL

    @pytest.mark.parametrize("probs", [[], [1.2], [-0.1, 0.5]])
    def test_rejects_bad_inputs(self, probs):
        with pytest.raises(ValueError):
            logical_inequality(probs)

    def test_excess_equals_violation(self):
        behavior = optimum_behavior()
        report = bell_violation(behavior, check_lhv=False)
        excess = logical_inequality(paradox_statement_probs(behavior))
        assert abs(excess - report.violation) <= ATOL

    def test_tuned_point_excess(self):
        behavior = behavior_from_phase_setup(
            BeamSplitterParams.from_r_squared(TUNED_R_SQUARED), math.pi
        )
        excess = logical_inequality(paradox_statement_probs(behavior))
        assert abs(excess - TUNED_JOINT_PROB) <= 1e-9


class TestHardyConstants:
    def test_values(self):
        consts = hardy_constants()
        assert abs(consts.qubit_max - (5.0 * math.sqrt(5.0) - 11.0) / 2.0) <= 1e-15
        assert abs(consts.qubit_max - 0.0902) <= 1e-4
        assert consts.golden_check is True

    def test_tuned_probability_stays_below_ceiling(self):
        consts = hardy_constants()
        assert TUNED_JOINT_PROB < consts.qubit_max
