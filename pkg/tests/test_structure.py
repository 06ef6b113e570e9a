"""
Unit tests for attribute pruning, rule pruning, rule growing and replay.
"""

import numpy as np
import pytest
from scipy.special import expit, logit

from adar.core.events import StructuralEvent
from adar.core.exceptions import CapacityError, ShapeMismatchError, ValidationError
from adar.core.types import EventKind
from adar.model import RuleBase, compute_attribute_weights, predict_batch
from adar.structure import grow_rule, prune_attributes, prune_rules, replay_masks, worst_samples
from tests.factories import make_rulebase


def _with_alpha(rb: RuleBase, alpha: np.ndarray) -> RuleBase:
    return rb.replace(attr_logits=logit(np.asarray(alpha, dtype=np.float64)))


def _with_beta(rb: RuleBase, beta: list[float]) -> RuleBase:
    return rb.replace(rule_logits=logit(np.asarray(beta, dtype=np.float64)))


class TestPruneAttributes:
    """Tests for prune_attributes."""

    def test_low_weight_is_masked(self) -> None:
        rb = _with_alpha(make_rulebase(1, 2), [[0.05, 0.9]])

        edit = prune_attributes(rb, np.zeros((1, 2), dtype=np.int64), theta_attr=0.1, persistence=1, epoch=7)

        np.testing.assert_array_equal(edit.rulebase.attr_mask, [[0.0, 1.0]])
        assert len(edit.events) == 1
        event = edit.events[0]
        assert (event.kind, event.epoch, event.rule_index, event.attr_index) == (EventKind.PRUNE_ATTR, 7, 0, 0)
        assert event.weight_value == pytest.approx(0.05)

    def test_weight_above_threshold_resets_streak(self) -> None:
        rb = _with_alpha(make_rulebase(1, 2), [[0.15, 0.9]])
        streaks = np.array([[1, 0]], dtype=np.int64)

        edit = prune_attributes(rb, streaks, theta_attr=0.1, persistence=2)

        assert not edit.changed
        np.testing.assert_array_equal(edit.streaks, [[0, 0]])
        np.testing.assert_array_equal(edit.rulebase.attr_mask, rb.attr_mask)

    def test_persistence_delays_masking(self) -> None:
        rb = _with_alpha(make_rulebase(1, 2), [[0.05, 0.9]])
        streaks = np.zeros((1, 2), dtype=np.int64)

        first = prune_attributes(rb, streaks, theta_attr=0.1, persistence=2)
        second = prune_attributes(first.rulebase, first.streaks, theta_attr=0.1, persistence=2)

        assert not first.changed
        np.testing.assert_array_equal(first.streaks, [[1, 0]])
        assert second.changed
        np.testing.assert_array_equal(second.streaks, [[0, 0]])

    def test_last_active_attribute_is_exempt(self) -> None:
        rb = _with_alpha(make_rulebase(1, 2), [[0.05, 0.9]]).with_mask(0, 1, 0.0)

        edit = prune_attributes(rb, np.zeros((1, 2), dtype=np.int64), theta_attr=0.1, persistence=1)

        assert not edit.changed
        np.testing.assert_array_equal(edit.rulebase.attr_mask, [[1.0, 0.0]])

    def test_highest_weight_survives_when_all_qualify(self) -> None:
        rb = _with_alpha(make_rulebase(1, 3), [[0.02, 0.08, 0.05]])

        edit = prune_attributes(rb, np.zeros((1, 3), dtype=np.int64), theta_attr=0.1, persistence=1)

        np.testing.assert_array_equal(edit.rulebase.attr_mask, [[0.0, 1.0, 0.0]])
        assert [e.attr_index for e in edit.events] == [0, 2]

    def test_idempotent(self) -> None:
        rb = _with_alpha(make_rulebase(2, 3), [[0.05, 0.5, 0.02], [0.9, 0.01, 0.4]])
        streaks = np.zeros((2, 3), dtype=np.int64)

        first = prune_attributes(rb, streaks, theta_attr=0.1, persistence=1)
        second = prune_attributes(first.rulebase, first.streaks, theta_attr=0.1, persistence=1)

        assert first.changed
        assert not second.changed
        np.testing.assert_array_equal(second.rulebase.attr_mask, first.rulebase.attr_mask)

    def test_events_in_row_major_order(self) -> None:
        rb = _with_alpha(make_rulebase(2, 3), [[0.05, 0.5, 0.02], [0.9, 0.01, 0.4]])

        edit = prune_attributes(rb, np.zeros((2, 3), dtype=np.int64), theta_attr=0.1, persistence=1)

        assert [(e.rule_index, e.attr_index) for e in edit.events] == [(0, 0), (0, 2), (1, 1)]

    def test_misshapen_streaks_raise(self, rulebase: RuleBase) -> None:
        with pytest.raises(ShapeMismatchError):
            prune_attributes(rulebase, np.zeros((3, 3), dtype=np.int64), theta_attr=0.1, persistence=1)


class TestPruneRules:
    """Tests for prune_rules."""

    def test_persistent_low_rule_is_removed(self) -> None:
        rb = _with_beta(make_rulebase(3, 2), [0.9, 0.2, 0.8])
        streaks = np.array([0, 1, 0], dtype=np.int64)

        edit = prune_rules(rb, streaks, theta_rule=0.25, persistence=2, epoch=50)

        assert edit.rulebase.num_rules == 2
        assert edit.removed_rules == [1]
        np.testing.assert_array_equal(edit.rulebase.centers, rb.centers[[0, 2]])
        np.testing.assert_array_equal(edit.streaks, [0, 0])
        assert edit.events[0].kind == EventKind.PRUNE_RULE
        assert edit.events[0].weight_value == pytest.approx(0.2)

    def test_rule_above_threshold_untouched(self) -> None:
        rb = _with_beta(make_rulebase(2, 2), [0.3, 0.9])

        edit = prune_rules(rb, np.zeros(2, dtype=np.int64), theta_rule=0.25, persistence=1)

        assert not edit.changed
        assert edit.rulebase.num_rules == 2

    def test_single_rule_survives(self) -> None:
        rb = _with_beta(make_rulebase(1, 2), [0.1])

        edit = prune_rules(rb, np.zeros(1, dtype=np.int64), theta_rule=0.25, persistence=1)

        assert not edit.changed
        assert edit.rulebase.num_rules == 1

    def test_highest_beta_survives_when_all_qualify(self) -> None:
        rb = _with_beta(make_rulebase(3, 2), [0.1, 0.2, 0.05])

        edit = prune_rules(rb, np.zeros(3, dtype=np.int64), theta_rule=0.25, persistence=1)

        assert edit.removed_rules == [0, 2]
        np.testing.assert_array_equal(edit.rulebase.centers, rb.centers[[1]])

    def test_events_in_descending_index_order(self) -> None:
        rb = _with_beta(make_rulebase(4, 2), [0.1, 0.9, 0.2, 0.05])

        edit = prune_rules(rb, np.zeros(4, dtype=np.int64), theta_rule=0.25, persistence=1)

        assert [e.rule_index for e in edit.events] == [3, 2, 0]

    def test_rule_weighting_off_never_prunes(self) -> None:
        rb = make_rulebase(2, 2, rule_weighting=False)

        edit = prune_rules(rb, np.zeros(2, dtype=np.int64), theta_rule=0.25, persistence=1)

        assert not edit.changed


class TestRandomizedPruning:
    """Pruning invariants checked over many random rule bases."""

    @staticmethod
    def _case(case: int) -> tuple[RuleBase, float]:
        rng = np.random.default_rng(2000 + case)
        num_rules, num_attrs = int(rng.integers(1, 7)), int(rng.integers(1, 6))
        rb = make_rulebase(num_rules, num_attrs, seed=case)
        rb = rb.replace(
            attr_logits=rng.normal(-1.0, 2.0, size=(num_rules, num_attrs)),
            rule_logits=rng.normal(-1.0, 2.0, size=num_rules),
        )
        return rb, float(rng.uniform(0.05, 0.6))

    @pytest.mark.parametrize("case", range(100))
    def test_attribute_pruning_is_idempotent_and_keeps_one_per_rule(self, case: int) -> None:
        rb, theta = self._case(case)
        streaks = np.zeros((rb.num_rules, rb.num_attrs), dtype=np.int64)

        first = prune_attributes(rb, streaks, theta_attr=theta, persistence=1)
        second = prune_attributes(first.rulebase, first.streaks, theta_attr=theta, persistence=1)

        assert np.all(first.rulebase.attr_mask.sum(axis=1) >= 1)
        assert not second.changed
        np.testing.assert_array_equal(second.rulebase.attr_mask, first.rulebase.attr_mask)
        alpha = compute_attribute_weights(rb)
        for rule in range(rb.num_rules):
            if np.all(alpha[rule] < theta):
                assert first.rulebase.attr_mask[rule, int(np.argmax(alpha[rule]))] == 1.0

    @pytest.mark.parametrize("case", range(100))
    def test_rule_pruning_is_idempotent_and_keeps_one_rule(self, case: int) -> None:
        rb, theta = self._case(case)

        first = prune_rules(rb, np.zeros(rb.num_rules, dtype=np.int64), theta_rule=theta, persistence=1)
        second = prune_rules(first.rulebase, first.streaks, theta_rule=theta, persistence=1)

        assert first.rulebase.num_rules >= 1
        assert not second.changed
        assert second.rulebase.num_rules == first.rulebase.num_rules
        beta = expit(rb.rule_logits)
        survivor = int(np.argmax(beta))
        assert survivor not in first.removed_rules


class TestGrowRule:
    """Tests for grow_rule and worst_samples."""

    def test_single_worst_sample(self, rulebase: RuleBase) -> None:
        X = np.random.default_rng(0).normal(size=(10, 3))
        residuals = np.zeros(10)
        residuals[4] = -3.0

        grown, event = grow_rule(rulebase, X, residuals, k=1, seed=0, max_rules=5, epoch=12)

        assert grown.num_rules == 3
        np.testing.assert_array_equal(grown.centers[2], X[4])
        np.testing.assert_array_equal(grown.widths[2], np.full(3, grown.s_floor))
        np.testing.assert_array_equal(grown.attr_mask[2], np.ones(3))
        assert grown.rule_logits[2] == 1.0
        assert (event.kind, event.epoch, event.rule_index) == (EventKind.GROW, 12, 2)
        assert event.details["max_abs_residual"] == 3.0

    def test_ties_go_to_lowest_index(self) -> None:
        np.testing.assert_array_equal(worst_samples(np.ones(6), 3), [0, 1, 2])

    def test_worst_cluster_sets_center(self, rulebase: RuleBase) -> None:
        rng = np.random.default_rng(1)
        X = np.vstack([rng.normal(0.0, 1.0, size=(100, 2)), rng.normal(5.0, 0.2, size=(10, 2))])
        rb = make_rulebase(2, 2, seed=3)
        residuals = np.concatenate([rng.uniform(-0.1, 0.1, 100), rng.uniform(4.0, 5.0, 10)])

        grown, event = grow_rule(rb, X, residuals, k=10, seed=0, max_rules=3)

        assert np.all(np.abs(grown.centers[2] - 5.0) < 0.2)
        assert event.details["seed_samples"] == 10

    def test_at_capacity_raises(self, rulebase: RuleBase) -> None:
        with pytest.raises(CapacityError) as exc_info:
            grow_rule(rulebase, np.zeros((4, 3)), np.ones(4), k=2, seed=0, max_rules=2)

        assert exc_info.value.max_rules == 2

    def test_misaligned_residuals_raise(self, rulebase: RuleBase) -> None:
        with pytest.raises(ShapeMismatchError):
            grow_rule(rulebase, np.zeros((4, 3)), np.ones(3), k=2, seed=0, max_rules=5)

    def test_seeded_growth_is_deterministic(self, rulebase: RuleBase) -> None:
        X = np.random.default_rng(2).normal(size=(20, 3))
        residuals = np.random.default_rng(3).normal(size=20)

        first, _ = grow_rule(rulebase, X, residuals, k=4, seed=11, max_rules=5)
        second, _ = grow_rule(rulebase, X, residuals, k=4, seed=np.random.default_rng(11), max_rules=5)

        assert first.to_json() == second.to_json()

    def test_new_rule_keeps_existing_predictions_close_far_away(self) -> None:
        """A rule grown far from a sample barely changes that sample's prediction."""
        rb = make_rulebase(2, 2, seed=4)
        X = np.vstack([np.zeros((5, 2)), np.full((3, 2), 30.0)])
        residuals = np.array([0.0] * 5 + [9.0] * 3)

        grown, _ = grow_rule(rb, X, residuals, k=3, seed=0, max_rules=3)

        np.testing.assert_allclose(predict_batch(grown, X[:5]), predict_batch(rb, X[:5]), atol=1e-6)


class TestReplay:
    """Tests for replay_masks."""

    def test_replays_prune_and_grow(self) -> None:
        events = [
            StructuralEvent(epoch=5, kind=EventKind.PRUNE_ATTR, rule_index=0, attr_index=1, group=1, sequence=1),
            StructuralEvent(epoch=10, kind=EventKind.GROW, rule_index=2, group=2, sequence=2),
            StructuralEvent(epoch=20, kind=EventKind.PRUNE_RULE, rule_index=1, group=3, sequence=3),
        ]

        mask, num_rules = replay_masks(2, 3, events)

        assert num_rules == 2
        np.testing.assert_array_equal(mask, [[1.0, 0.0, 1.0], [1.0, 1.0, 1.0]])

    def test_rollback_restores_group_snapshot(self) -> None:
        events = [
            StructuralEvent(epoch=5, kind=EventKind.PRUNE_ATTR, rule_index=0, attr_index=0, group=1, sequence=1),
            StructuralEvent(epoch=5, kind=EventKind.PRUNE_ATTR, rule_index=1, attr_index=2, group=1, sequence=2),
            StructuralEvent(epoch=5, kind=EventKind.ROLLBACK, group=2, sequence=3, details={"reverted_group": 1}),
        ]

        mask, num_rules = replay_masks(2, 3, events)

        assert num_rules == 2
        np.testing.assert_array_equal(mask, np.ones((2, 3)))

    def test_growth_rollback_removes_named_rule_and_keeps_later_edits(self) -> None:
        events = [
            StructuralEvent(epoch=10, kind=EventKind.GROW, rule_index=2, group=1, sequence=1),
            StructuralEvent(epoch=12, kind=EventKind.PRUNE_ATTR, rule_index=1, attr_index=0, group=2, sequence=2),
            StructuralEvent(epoch=12, kind=EventKind.PRUNE_RULE, rule_index=0, group=3, sequence=3),
            StructuralEvent(
                epoch=15, kind=EventKind.ROLLBACK, rule_index=1, group=4, sequence=4, details={"reverted_group": 1}
            ),
        ]

        mask, num_rules = replay_masks(2, 3, events)

        assert num_rules == 1
        np.testing.assert_array_equal(mask, [[0.0, 1.0, 1.0]])

    def test_events_applied_in_sequence_order(self) -> None:
        events = [
            StructuralEvent(epoch=10, kind=EventKind.PRUNE_RULE, rule_index=2, group=2, sequence=2),
            StructuralEvent(epoch=10, kind=EventKind.GROW, rule_index=2, group=1, sequence=1),
        ]

        _, num_rules = replay_masks(2, 2, events)

        assert num_rules == 2

    def test_unknown_group_raises(self) -> None:
        events = [StructuralEvent(epoch=1, kind=EventKind.ROLLBACK, sequence=1, details={"reverted_group": 4})]

        with pytest.raises(ValidationError, match="unknown group"):
            replay_masks(2, 2, events)

    def test_missing_rule_raises(self) -> None:
        events = [StructuralEvent(epoch=1, kind=EventKind.PRUNE_RULE, rule_index=5, group=1, sequence=1)]

        with pytest.raises(ValidationError, match="missing rule"):
            replay_masks(2, 2, events)

    def test_matches_pruned_rulebase(self) -> None:
        rb = _with_alpha(make_rulebase(2, 3), [[0.05, 0.5, 0.02], [0.9, 0.01, 0.4]])
        edit = prune_attributes(rb, np.zeros((2, 3), dtype=np.int64), theta_attr=0.1, persistence=1)
        for sequence, event in enumerate(edit.events, start=1):
            event.group, event.sequence = 1, sequence

        mask, _ = replay_masks(2, 3, edit.events)

        np.testing.assert_array_equal(mask, edit.rulebase.attr_mask)
        assert compute_attribute_weights(edit.rulebase)[0, 0] == 0.0
