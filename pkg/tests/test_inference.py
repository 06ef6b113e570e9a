"""
Unit tests for the rule base and fuzzy inference.
"""

import math

import numpy as np
import pytest

from adar.core.exceptions import ShapeMismatchError, ValidationError
from adar.model import (
    RuleBase,
    compute_attribute_weights,
    compute_rule_weights,
    firing_strengths,
    forward,
    membership,
    normalized_activations,
    predict,
    predict_batch,
    rule_outputs,
)
from tests.factories import explicit_rulebase, make_rulebase


class TestRuleBase:
    """Tests for RuleBase validation and value-style edits."""

    def test_shape_properties(self, rulebase: RuleBase) -> None:
        assert rulebase.num_rules == 2
        assert rulebase.num_attrs == 3
        assert rulebase.active.all()

    def test_width_below_floor_raises(self) -> None:
        with pytest.raises(ValidationError, match="s_floor"):
            explicit_rulebase(centers=[[0.0]], widths=[[1e-4]])

    def test_non_binary_mask_raises(self, rulebase: RuleBase) -> None:
        mask = rulebase.attr_mask.copy()
        mask[0, 0] = 0.5
        with pytest.raises(ValidationError, match="attr_mask"):
            rulebase.replace(attr_mask=mask)

    def test_misshapen_block_raises(self, rulebase: RuleBase) -> None:
        with pytest.raises(ShapeMismatchError):
            rulebase.replace(rule_logits=np.zeros(3))

    def test_replace_copies_arrays(self, rulebase: RuleBase) -> None:
        copy = rulebase.copy()
        copy.centers[0, 0] += 1.0

        assert rulebase.centers[0, 0] != copy.centers[0, 0]

    def test_without_rules(self) -> None:
        rb = make_rulebase(num_rules=4, num_attrs=2, seed=1)
        reduced = rb.without_rules([1, 3])

        assert reduced.num_rules == 2
        np.testing.assert_array_equal(reduced.centers, rb.centers[[0, 2]])
        np.testing.assert_array_equal(reduced.rule_logits, rb.rule_logits[[0, 2]])

    def test_without_every_rule_raises(self, rulebase: RuleBase) -> None:
        with pytest.raises(ValidationError):
            rulebase.without_rules([0, 1])

    def test_with_rule_appends_active_row(self, rulebase: RuleBase) -> None:
        grown = rulebase.with_rule(
            center=np.zeros(3),
            width=np.zeros(3),
            attr_logit=np.zeros(3),
            rule_logit=1.0,
            consequent=np.ones(3),
        )

        assert grown.num_rules == 3
        np.testing.assert_array_equal(grown.attr_mask[2], np.ones(3))
        np.testing.assert_array_equal(grown.widths[2], np.full(3, grown.s_floor))

    def test_json_round_trip(self) -> None:
        rb = make_rulebase(num_rules=3, num_attrs=4, seed=5, use_bias=True, rule_weighting=False)
        rb = rb.with_mask(1, 2, 0.0)

        restored = RuleBase.from_json(rb.to_json())

        for name in ("centers", "widths", "attr_logits", "attr_mask", "rule_logits", "consequents", "bias"):
            np.testing.assert_array_equal(getattr(restored, name), getattr(rb, name))
        assert restored.use_bias is True
        assert restored.rule_weighting is False
        assert restored.epsilon == rb.epsilon


class TestWeights:
    """Tests for the attribute and rule importance weights."""

    def test_zero_attribute_logit_gives_half(self) -> None:
        rb = explicit_rulebase(centers=[[0.0]], widths=[[1.0]])

        assert compute_attribute_weights(rb)[0, 0] == 0.5

    def test_masked_attribute_weight_is_zero(self) -> None:
        rb = explicit_rulebase(centers=[[0.0, 0.0]], widths=[[1.0, 1.0]]).with_mask(0, 1, 0.0)

        np.testing.assert_array_equal(compute_attribute_weights(rb), [[0.5, 0.0]])

    def test_attribute_weighting_off_returns_mask(self) -> None:
        rb = explicit_rulebase(centers=[[0.0, 0.0]], widths=[[1.0, 1.0]], attr_weighting=False)

        np.testing.assert_array_equal(compute_attribute_weights(rb), [[1.0, 1.0]])

    def test_zero_rule_logit_gives_half(self) -> None:
        rb = explicit_rulebase(centers=[[0.0]], widths=[[1.0]])

        assert compute_rule_weights(rb)[0] == 0.5

    def test_rule_weighting_off_returns_ones(self) -> None:
        rb = explicit_rulebase(centers=[[0.0], [1.0]], widths=[[1.0], [1.0]], rule_weighting=False)

        np.testing.assert_array_equal(compute_rule_weights(rb), [1.0, 1.0])


class TestMembershipAndFiring:
    """Tests for Gaussian memberships and rule firing strengths."""

    def test_membership_at_center(self) -> None:
        assert membership(2.0, 2.0, 0.7) == 1.0

    def test_membership_one_sigma(self) -> None:
        assert membership(1.5, 1.0, 0.5) == pytest.approx(0.6065307, abs=1e-7)

    def test_single_attribute_firing(self) -> None:
        rb = explicit_rulebase(centers=[[0.0]], widths=[[1.0]])

        assert firing_strengths(rb, np.array([0.0]))[0] == pytest.approx(0.5)

    def test_product_over_attributes(self) -> None:
        rb = explicit_rulebase(centers=[[0.0, 0.0]], widths=[[1.0, 1.0]])

        assert firing_strengths(rb, np.array([0.0, 0.0]))[0] == pytest.approx(0.25)

    def test_masked_attribute_drops_out(self) -> None:
        rb = explicit_rulebase(centers=[[0.0, 0.0]], widths=[[1.0, 1.0]]).with_mask(0, 1, 0.0)

        assert firing_strengths(rb, np.array([0.0, 5.0]))[0] == pytest.approx(0.5)

    def test_strict_mask_zeroes_rule(self) -> None:
        rb = explicit_rulebase(centers=[[0.0, 0.0]], widths=[[1.0, 1.0]], strict_mask=True).with_mask(0, 1, 0.0)

        assert firing_strengths(rb, np.array([0.0, 0.0]))[0] == 0.0

    def test_lower_attribute_weight_attenuates_firing(self) -> None:
        x = np.array([0.3, -0.4])
        strong = explicit_rulebase(centers=[[0.0, 0.0]], widths=[[1.0, 1.0]], attr_logits=[[2.0, 2.0]])
        weak = explicit_rulebase(centers=[[0.0, 0.0]], widths=[[1.0, 1.0]], attr_logits=[[-2.0, 2.0]])

        assert firing_strengths(weak, x)[0] < firing_strengths(strong, x)[0]


class TestNormalization:
    """Tests for normalized rule activations."""

    def test_symmetric_activations(self) -> None:
        w = normalized_activations(np.array([0.3, 0.3]), np.ones(2), 1e-9)

        np.testing.assert_allclose(w, [0.5, 0.5], atol=1e-8)

    def test_zero_firing_gives_zero_activations(self) -> None:
        w = normalized_activations(np.zeros(2), np.ones(2), 1e-9)

        np.testing.assert_array_equal(w, [0.0, 0.0])

    def test_activations_sum_to_one_within_epsilon(self) -> None:
        rb = make_rulebase(num_rules=4, num_attrs=3, seed=2)
        X = np.random.default_rng(0).normal(size=(50, 3))

        for x in X:
            trace = predict(rb, x)[1]
            total = trace.scaled_firing.sum()
            bound = rb.epsilon / (total + rb.epsilon)
            assert abs(trace.activations.sum() - 1.0) <= bound + 1e-15


class TestRuleOutputs:
    """Tests for the linear rule consequents."""

    def test_dot_product(self) -> None:
        rb = explicit_rulebase(centers=[[0.0, 0.0]], widths=[[1.0, 1.0]], consequents=[[2.0, -1.0]])

        assert rule_outputs(rb, np.array([3.0, 4.0]))[0] == pytest.approx(2.0)

    def test_masked_term_excluded(self) -> None:
        rb = explicit_rulebase(centers=[[0.0, 0.0]], widths=[[1.0, 1.0]], consequents=[[2.0, -1.0]])
        rb = rb.with_mask(0, 1, 0.0)

        assert rule_outputs(rb, np.array([3.0, 4.0]))[0] == pytest.approx(6.0)

    def test_all_masked_without_bias_is_zero(self) -> None:
        rb = explicit_rulebase(centers=[[0.0, 0.0]], widths=[[1.0, 1.0]], consequents=[[2.0, -1.0]])
        rb = rb.with_mask(0, 0, 0.0).with_mask(0, 1, 0.0)

        assert rule_outputs(rb, np.array([3.0, 4.0]))[0] == 0.0

    def test_bias_added_when_enabled(self) -> None:
        rb = explicit_rulebase(centers=[[0.0]], widths=[[1.0]], consequents=[[1.0]], use_bias=True)
        rb = rb.replace(bias=np.array([0.5]))

        assert rule_outputs(rb, np.array([2.0]))[0] == pytest.approx(2.5)


class TestPredict:
    """Tests for single and batch prediction."""

    def test_single_rule(self) -> None:
        rb = explicit_rulebase(centers=[[1.0]], widths=[[1.0]], consequents=[[5.0]])

        y, _ = predict(rb, np.array([1.0]))

        assert y == pytest.approx(5.0, abs=1e-6)

    def test_two_equal_rules_average(self) -> None:
        rb = explicit_rulebase(centers=[[1.0], [1.0]], widths=[[1.0], [1.0]], consequents=[[2.0], [4.0]])

        y, trace = predict(rb, np.array([1.0]))

        assert y == pytest.approx(3.0, abs=1e-6)
        np.testing.assert_allclose(trace.rule_outputs, [2.0, 4.0])

    def test_no_firing_gives_zero(self) -> None:
        rb = explicit_rulebase(centers=[[0.0], [1.0]], widths=[[1.0], [1.0]], consequents=[[2.0], [4.0]])

        y, _ = predict(rb, np.array([1e3]))

        assert y == 0.0

    def test_trace_is_consistent(self, rulebase: RuleBase) -> None:
        y, trace = predict(rulebase, np.array([0.1, -0.2, 0.3]))

        assert y == pytest.approx(float(np.sum(trace.activations * trace.rule_outputs)))
        np.testing.assert_allclose(trace.scaled_firing, trace.firing * trace.beta)

    def test_empty_batch(self, rulebase: RuleBase) -> None:
        assert predict_batch(rulebase, np.empty((0, 3))).shape == (0,)

    def test_batch_matches_loop(self) -> None:
        rb = make_rulebase(num_rules=3, num_attrs=4, seed=8)
        X = np.random.default_rng(4).normal(size=(16, 4))

        batch = predict_batch(rb, X)
        loop = np.array([predict(rb, x)[0] for x in X])

        np.testing.assert_array_equal(batch, loop)

    def test_wrong_column_count_raises(self, rulebase: RuleBase) -> None:
        with pytest.raises(ShapeMismatchError):
            predict_batch(rulebase, np.zeros((4, 2)))

    def test_masked_membership_parameters_are_ignored(self) -> None:
        rb = make_rulebase(num_rules=3, num_attrs=3, seed=6).with_mask(1, 2, 0.0)
        X = np.random.default_rng(1).normal(size=(20, 3))
        centers = rb.centers.copy()
        centers[1, 2] += 3.0
        widths = rb.widths.copy()
        widths[1, 2] *= 4.0

        moved = rb.replace(centers=centers, widths=widths)

        np.testing.assert_array_equal(predict_batch(rb, X), predict_batch(moved, X))

    def test_predictions_are_finite_far_from_data(self, rulebase: RuleBase) -> None:
        X = np.full((2, 3), 50.0)

        assert all(math.isfinite(v) for v in predict_batch(rulebase, X))


def _random_case(case: int, **flags: object) -> tuple[RuleBase, np.ndarray, np.random.Generator]:
    """Rule base of random shape with some attributes masked, and a batch of inputs."""
    rng = np.random.default_rng(1000 + case)
    num_rules, num_attrs = int(rng.integers(1, 6)), int(rng.integers(1, 6))
    rb = make_rulebase(num_rules=num_rules, num_attrs=num_attrs, seed=case, **flags)
    mask = (rng.uniform(size=(num_rules, num_attrs)) > 0.3).astype(np.float64)
    rb = rb.replace(attr_mask=mask)
    X = rng.normal(0.0, 1.5, size=(8, num_attrs))
    return rb, X, rng


class TestRandomizedInvariants:
    """Inference invariants checked over many random rule bases."""

    @pytest.mark.parametrize("case", range(100))
    def test_activations_sum_to_one_within_epsilon(self, case: int) -> None:
        rb, X, _ = _random_case(case)

        trace = forward(rb, X)

        bound = rb.epsilon / (trace.scaled_firing.sum(axis=1) + rb.epsilon)
        assert np.all(np.abs(trace.activations.sum(axis=1) - 1.0) <= bound + 1e-12)
        assert np.all(trace.activations >= 0.0)

    @pytest.mark.parametrize("case", range(100))
    def test_masked_cells_do_not_matter(self, case: int) -> None:
        rb, X, rng = _random_case(case)
        masked = ~rb.active
        changes = {}
        for name in ("centers", "attr_logits", "consequents"):
            block = getattr(rb, name).copy()
            block[masked] = rng.normal(0.0, 10.0, size=int(masked.sum()))
            changes[name] = block
        widths = rb.widths.copy()
        widths[masked] *= rng.uniform(0.1, 10.0, size=int(masked.sum()))
        changes["widths"] = np.maximum(widths, rb.s_floor)

        moved = rb.replace(**changes)

        np.testing.assert_array_equal(predict_batch(moved, X), predict_batch(rb, X))

    @pytest.mark.parametrize("case", range(100))
    def test_lower_rule_weight_never_raises_its_activation(self, case: int) -> None:
        rb, X, rng = _random_case(case)
        rule = int(rng.integers(rb.num_rules))
        rule_logits = rb.rule_logits.copy()
        rule_logits[rule] -= rng.uniform(0.1, 5.0)

        before = forward(rb, X).activations[:, rule]
        after = forward(rb.replace(rule_logits=rule_logits), X).activations[:, rule]

        assert np.all(after <= before + 1e-15)

    @pytest.mark.parametrize("case", range(100))
    def test_removing_a_silent_rule_keeps_predictions(self, case: int) -> None:
        strict = bool(case % 2)
        rb, X, rng = _random_case(case, strict_mask=strict)
        # far away, or near the data with a masked attribute under the strict product
        center = np.zeros(rb.num_attrs) if strict else np.full(rb.num_attrs, 1e3)
        extra = rb.with_rule(
            center=center,
            width=np.ones(rb.num_attrs),
            attr_logit=np.zeros(rb.num_attrs),
            rule_logit=float(rng.normal()),
            consequent=rng.normal(size=rb.num_attrs),
        )
        if strict:
            extra = extra.with_mask(rb.num_rules, 0, 0.0)

        assert np.all(forward(extra, X).scaled_firing[:, -1] == 0.0)
        reduced = extra.without_rules([rb.num_rules])
        np.testing.assert_allclose(predict_batch(extra, X), predict_batch(reduced, X), rtol=0.0, atol=1e-12)
        np.testing.assert_array_equal(predict_batch(reduced, X), predict_batch(rb, X))

    @pytest.mark.parametrize("case", range(100))
    def test_json_round_trip(self, case: int) -> None:
        flags = {"use_bias": bool(case % 2), "strict_mask": bool(case % 3 == 0), "rule_weighting": case % 5 != 0}
        rb, X, _ = _random_case(case, **flags)

        restored = RuleBase.from_json(rb.to_json())

        np.testing.assert_array_equal(predict_batch(restored, X), predict_batch(rb, X))
        np.testing.assert_array_equal(restored.attr_mask, rb.attr_mask)
