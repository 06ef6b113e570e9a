"""
Training loop with interleaved structural adaptation.

Each epoch runs shuffled mini-batch Adam steps, then in this order:

1. attribute pruning, every prune_attr_freq epochs (AP)
2. rule pruning, every prune_rule_freq epochs (RG&RP)
3. validation RMSE and best-snapshot update
4. the pending growth check, once its grace period is over or at the
   final epoch
5. rule growing, when validation RMSE has not improved by more than
   growth_threshold for `patience` epochs and L < max_rules (RG&RP);
   never in the final epoch

Pruning edits are rollback-checked immediately and a failed check restores
the snapshot. A grown rule is checked after growth_grace_epochs against the
pre-growth validation RMSE; if it failed, only that rule is deleted from the
trained model and patience starts over. Every structural change, including
a rollback, reinitializes the optimizer.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from adar.core.config import TrainConfig
from adar.core.events import EpochRecord, StructuralEvent
from adar.core.exceptions import NumericalError, ValidationError
from adar.core.logging import get_logger
from adar.core.types import EventKind, FloatArray, IntArray, RollbackDecision
from adar.data.dataset import Dataset
from adar.initialization.builder import init_rulebase
from adar.ledger.event_log import TrainingLog
from adar.metrics.accuracy import rmse
from adar.metrics.report import MetricsReport, evaluate
from adar.model.inference import predict_batch
from adar.model.rulebase import RuleBase
from adar.structure.attributes import StructuralEdit, prune_attributes
from adar.structure.rules import grow_rule, prune_rules
from adar.training.objective import loss_and_gradients
from adar.training.optimizer import TrainState, adam_step

logger = get_logger("training.trainer")


@dataclass(frozen=True)
class RollbackCheck:
    """Validation comparison between a snapshot and an edited rule base."""

    decision: RollbackDecision
    rmse_before: float
    rmse_after: float


@dataclass
class TrainingResult:
    """
    Everything fit produces besides the returned rule base.

    Attributes:
        rulebase: Best-validation rule base (also returned by fit)
        initial_rulebase: Rule base right after initialization
        log: Epoch records and structural events
        best_val_rmse: Validation RMSE of rulebase, standardized units
        test_metrics: MetricsReport of rulebase on the test split
    """

    rulebase: RuleBase
    initial_rulebase: RuleBase
    log: TrainingLog
    best_val_rmse: float
    test_metrics: MetricsReport

    @property
    def events(self) -> list[StructuralEvent]:
        return self.log.events

    @property
    def epochs(self) -> list[EpochRecord]:
        return self.log.epochs


@dataclass
class _PendingGrowth:
    rule_index: int  # current row of the grown rule
    rmse_before: float
    group: int
    due_epoch: int


def validation_rmse(rb: RuleBase, X: FloatArray, y: FloatArray) -> float:
    """RMSE of the rule base on a split, in the split's (standardized) units."""
    return rmse(predict_batch(rb, X), y)


def compare_on_validation(
    prev: RuleBase,
    curr: RuleBase,
    X_val: FloatArray,
    y_val: FloatArray,
    tolerance: float,
) -> RollbackCheck:
    before = validation_rmse(prev, X_val, y_val)
    return _check(before, validation_rmse(curr, X_val, y_val), tolerance)


def _check(before: float, after: float, tolerance: float) -> RollbackCheck:
    decision = RollbackDecision.RESTORE if after > before * (1.0 + tolerance) else RollbackDecision.KEEP
    return RollbackCheck(decision=decision, rmse_before=before, rmse_after=after)


def evaluate_rollback(
    prev: RuleBase,
    curr: RuleBase,
    X_val: FloatArray,
    y_val: FloatArray,
    tolerance: float,
) -> RollbackDecision:
    """
    Decide whether a structural edit is kept.

    Returns RESTORE when the edited rule base's validation RMSE exceeds the
    snapshot's by more than the relative tolerance, KEEP otherwise.
    """
    return compare_on_validation(prev, curr, X_val, y_val, tolerance).decision


def _training_rng(seed: int) -> np.random.Generator:
    # initialization uses the first two children of the same seed
    return np.random.default_rng(np.random.SeedSequence(seed).spawn(3)[2])


class _Trainer:
    """Mutable state of one fit call."""

    def __init__(self, data: Dataset, cfg: TrainConfig) -> None:
        self.cfg = cfg
        self.X_train, self.y_train = data.arrays("train")
        self.X_val, self.y_val = data.arrays("val")
        if self.X_train.shape[0] == 0 or self.X_val.shape[0] == 0:
            raise ValidationError("training needs nonempty train and val splits", {"sizes": data.splits.sizes()})

        self.rng = _training_rng(cfg.seed)
        self.rb = init_rulebase(self.X_train, cfg.initial_rules, cfg.seed, cfg)
        self.initial = self.rb.copy()
        self.state = TrainState.initial(self.rb)
        self.log = TrainingLog()
        self.pending: _PendingGrowth | None = None

        self.state.best_rulebase = self.rb.copy()
        self.state.best_val_rmse = validation_rmse(self.rb, self.X_val, self.y_val)

    # ------------------------------------------------------------------
    # Epoch pieces
    # ------------------------------------------------------------------

    def train_epoch(self, epoch: int) -> float:
        cfg = self.cfg
        n_samples = self.X_train.shape[0]
        order = self.rng.permutation(n_samples)
        total = 0.0
        for start in range(0, n_samples, cfg.batch_size):
            batch = order[start : start + cfg.batch_size]
            value, grads = loss_and_gradients(
                self.rb, self.X_train[batch], self.y_train[batch], cfg.l1_attr, cfg.l1_rule
            )
            if not np.isfinite(value):
                raise NumericalError("training loss is not finite", block="loss", details={"epoch": epoch})
            self.rb, self.state = adam_step(self.state, self.rb, grads, cfg.learning_rate)
            total += value * batch.shape[0]
        return total / n_samples

    def _restore(
        self,
        epoch: int,
        snapshot: RuleBase,
        attr_streaks: IntArray,
        rule_streaks: IntArray,
        group: int,
        check: RollbackCheck,
    ) -> None:
        self.rb = snapshot
        self.state.attr_streaks = attr_streaks
        self.state.rule_streaks = rule_streaks
        self.state.reset_optimizer(self.rb)
        self.log.record_group(
            [
                StructuralEvent(
                    epoch=epoch,
                    kind=EventKind.ROLLBACK,
                    val_rmse_before=check.rmse_after,
                    val_rmse_after=check.rmse_before,
                    details={"reverted_group": group},
                )
            ]
        )
        logger.warning(
            f"Epoch {epoch}: rolled back group {group} "
            f"(val RMSE {check.rmse_after:.6f} vs snapshot {check.rmse_before:.6f})",
            extra={"epoch": epoch, "reverted_group": group},
        )

    def _commit_pruning(
        self,
        epoch: int,
        edit: StructuralEdit,
        snapshot: RuleBase,
        saved_attr: IntArray,
        saved_rule: IntArray,
    ) -> bool:
        """
        Commit a pruning edit, then roll it back if validation got worse.

        Returns:
            True if the edit is kept
        """
        if not edit.changed:
            return False

        self.rb = edit.rulebase
        self.state.reset_optimizer(self.rb)
        check = compare_on_validation(snapshot, self.rb, self.X_val, self.y_val, self.cfg.rollback_tolerance)
        for event in edit.events:
            event.val_rmse_before = check.rmse_before
            event.val_rmse_after = check.rmse_after
        group = self.log.record_group(edit.events)

        if check.decision == RollbackDecision.RESTORE:
            # reverted entries start a fresh persistence window
            for event in edit.events:
                if event.kind == EventKind.PRUNE_ATTR:
                    saved_attr[event.rule_index, event.attr_index] = 0
                else:
                    saved_rule[event.rule_index] = 0
            self._restore(epoch, snapshot, saved_attr, saved_rule, group, check)
            return False
        return True

    def prune_attribute_step(self, epoch: int) -> None:
        snapshot = self.rb
        saved_attr, saved_rule = self.state.attr_streaks.copy(), self.state.rule_streaks.copy()
        edit = prune_attributes(
            self.rb, self.state.attr_streaks, self.cfg.theta_attr, self.cfg.persistence_checks, epoch
        )
        self.state.attr_streaks = edit.streaks
        self._commit_pruning(epoch, edit, snapshot, saved_attr, saved_rule)

    def prune_rule_step(self, epoch: int) -> None:
        snapshot = self.rb
        saved_attr, saved_rule = self.state.attr_streaks.copy(), self.state.rule_streaks.copy()
        edit = prune_rules(self.rb, self.state.rule_streaks, self.cfg.theta_rule, self.cfg.persistence_checks, epoch)
        self.state.rule_streaks = edit.streaks
        if edit.removed_rules:
            self.state.attr_streaks = np.delete(self.state.attr_streaks, edit.removed_rules, axis=0)
        if self._commit_pruning(epoch, edit, snapshot, saved_attr, saved_rule):
            self._shift_pending(edit.removed_rules)

    def _shift_pending(self, removed_rules: list[int]) -> None:
        """Keep the pending growth check pointed at the grown rule after a kept rule prune."""
        pending = self.pending
        if pending is None:
            return
        if pending.rule_index in removed_rules:
            logger.debug(f"Grown rule of group {pending.group} was pruned before its check")
            self.pending = None
            return
        pending.rule_index -= sum(1 for index in removed_rules if index < pending.rule_index)

    def track_best(self, val: float) -> None:
        state = self.state
        if state.best_val_rmse - val > self.cfg.growth_threshold:
            state.epochs_since_improvement = 0
        else:
            state.epochs_since_improvement += 1
        if val < state.best_val_rmse:
            state.best_val_rmse = val
            state.best_rulebase = self.rb.copy()

    def check_pending_growth(self, epoch: int, force: bool = False) -> None:
        """
        Check a grown rule once its grace period is over.

        The trained model is compared with the pre-growth validation RMSE.
        On failure the grown rule alone is removed, the rest of the model
        keeps what it learned since the growth, and patience starts over.
        """
        pending = self.pending
        if pending is None or (epoch < pending.due_epoch and not force):
            return
        self.pending = None
        check = _check(
            pending.rmse_before, validation_rmse(self.rb, self.X_val, self.y_val), self.cfg.rollback_tolerance
        )
        if check.decision == RollbackDecision.KEEP:
            return
        if self.rb.num_rules == 1:
            logger.debug(f"Epoch {epoch}: grown rule of group {pending.group} is the last rule; kept")
            return

        index = pending.rule_index
        self.rb = self.rb.without_rules([index])
        self.state.attr_streaks = np.delete(self.state.attr_streaks, index, axis=0)
        self.state.rule_streaks = np.delete(self.state.rule_streaks, index)
        self.state.reset_optimizer(self.rb)
        self.state.epochs_since_improvement = 0
        rmse_after = validation_rmse(self.rb, self.X_val, self.y_val)
        self.log.record_group(
            [
                StructuralEvent(
                    epoch=epoch,
                    kind=EventKind.ROLLBACK,
                    rule_index=index,
                    val_rmse_before=check.rmse_after,
                    val_rmse_after=rmse_after,
                    details={"reverted_group": pending.group, "pre_growth_rmse": check.rmse_before},
                )
            ]
        )
        logger.warning(
            f"Epoch {epoch}: removed grown rule {index} of group {pending.group} "
            f"(val RMSE {check.rmse_after:.6f} vs {check.rmse_before:.6f} before growth)",
            extra={"epoch": epoch, "reverted_group": pending.group},
        )

    def grow_step(self, epoch: int) -> None:
        cfg = self.cfg
        if self.pending is not None or self.state.epochs_since_improvement < cfg.patience:
            return
        if epoch >= cfg.epochs:
            return
        if self.rb.num_rules >= cfg.max_rules:
            return

        rmse_before = validation_rmse(self.rb, self.X_val, self.y_val)
        residuals = predict_batch(self.rb, self.X_train) - self.y_train
        grown, event = grow_rule(
            self.rb,
            self.X_train,
            residuals,
            cfg.effective_grow_topk,
            self.rng,
            cfg.max_rules,
            attr_logit_std=cfg.attr_logit_std,
            consequent_std=cfg.consequent_std,
            rule_logit_init=cfg.rule_logit_init,
            epoch=epoch,
        )
        event.val_rmse_before = rmse_before
        event.val_rmse_after = validation_rmse(grown, self.X_val, self.y_val)
        group = self.log.record_group([event])

        self.pending = _PendingGrowth(
            rule_index=grown.num_rules - 1,
            rmse_before=rmse_before,
            group=group,
            due_epoch=epoch + cfg.growth_grace_epochs,
        )
        self.rb = grown
        self.state.attr_streaks = np.vstack(
            [self.state.attr_streaks, np.zeros((1, grown.num_attrs), dtype=np.int64)]
        )
        self.state.rule_streaks = np.append(self.state.rule_streaks, 0).astype(np.int64)
        self.state.reset_optimizer(self.rb)
        self.state.epochs_since_improvement = 0

    # ------------------------------------------------------------------

    def run(self) -> RuleBase:
        cfg = self.cfg
        for epoch in range(1, cfg.epochs + 1):
            train_loss = self.train_epoch(epoch)

            if cfg.ap_enabled and epoch % cfg.prune_attr_freq == 0:
                self.prune_attribute_step(epoch)
            if cfg.rgrp_enabled and epoch % cfg.prune_rule_freq == 0:
                self.prune_rule_step(epoch)

            evaluated = self.rb
            val = validation_rmse(evaluated, self.X_val, self.y_val)
            self.track_best(val)
            self.check_pending_growth(epoch, force=epoch == cfg.epochs)
            if cfg.rgrp_enabled:
                self.grow_step(epoch)
            if self.rb is not evaluated:
                # the record describes the structure the epoch ends with
                val = validation_rmse(self.rb, self.X_val, self.y_val)

            self.log.record_epoch(
                EpochRecord(
                    epoch=epoch,
                    train_loss=train_loss,
                    val_rmse=val,
                    best_val_rmse=self.state.best_val_rmse,
                    num_rules=self.rb.num_rules,
                    active_attr_total=int(np.sum(self.rb.attr_mask)),
                )
            )
            logger.debug(
                f"Epoch {epoch}: loss={train_loss:.6f} val_rmse={val:.6f} "
                f"L={self.rb.num_rules} best={self.state.best_val_rmse:.6f}"
            )

        if self.state.best_rulebase is None:
            return self.rb
        return self.state.best_rulebase


def fit(data: Dataset, cfg: TrainConfig) -> tuple[RuleBase, TrainingResult]:
    """
    Train a rule base on a dataset.

    Args:
        data: Standardized dataset with train/val/test splits
        cfg: Training configuration

    Returns:
        (best-validation rule base, TrainingResult with log and test metrics)

    Raises:
        ValidationError: If a split is empty
        NumericalError: If the loss or a gradient becomes non-finite
    """
    trainer = _Trainer(data, cfg)
    logger.info(
        f"Training {data.name}: {cfg.initial_rules} initial rules, max {cfg.max_rules}, "
        f"{cfg.epochs} epochs (AP={'on' if cfg.ap_enabled else 'off'}, "
        f"RG&RP={'on' if cfg.rgrp_enabled else 'off'})"
    )
    best = trainer.run()
    metrics = evaluate(best, data, "test")
    logger.info(
        f"Finished {data.name}: {metrics.final_rules} rules, "
        f"{metrics.final_attributes} active attributes, test RMSE {metrics.rmse:.4f}"
    )
    result = TrainingResult(
        rulebase=best,
        initial_rulebase=trainer.initial,
        log=trainer.log,
        best_val_rmse=trainer.state.best_val_rmse,
        test_metrics=metrics,
    )
    return best, result
