"""Splitting, class balancing and the mini-batch training loop."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Hashable, Sequence

import numpy as np

from hybrid_ser.classifier.metrics import EvalReport, evaluate
from hybrid_ser.classifier.mlp import (
    DEFAULT_DROPOUT,
    DEFAULT_LAYER_SIZES,
    MlpModel,
    adam_step,
    loss,
    loss_and_gradients,
    predict,
)
from hybrid_ser.errors import EmptyPartition, MissingClass, WrongDimension
from hybrid_ser.featuremap import EmotionLabel, oversample

log = logging.getLogger(__name__)

EpochCallback = Callable[[int, float, float], None]


@dataclass(frozen=True)
class TrainConfig:
    """Optimiser, split and model settings for one training run.

    Parameters
    ----------
    learning_rate, batch_size, epochs:
        Adam step size, mini-batch size and number of passes.
    fractions:
        Train/validation/test shares; positive and summing to one.
    seed:
        Root of every random stream in the run.
    classes:
        Classes that must be present; defaults to the labels in the data.
    group_by_speaker:
        Keep all examples of a speaker in the same partition.
    """

    learning_rate: float = 1e-4
    batch_size: int = 128
    epochs: int = 128
    fractions: tuple[float, float, float] = (0.8, 0.1, 0.1)
    seed: int = 0
    classes: tuple[EmotionLabel, ...] | None = None
    group_by_speaker: bool = False
    layer_sizes: tuple[int, ...] = DEFAULT_LAYER_SIZES
    dropout: tuple[float, ...] = DEFAULT_DROPOUT

    def __post_init__(self) -> None:
        if len(self.fractions) != 3 or any(f <= 0 for f in self.fractions):
            raise ValueError(f"fractions must be three positive numbers, got {self.fractions}")
        if abs(sum(self.fractions) - 1.0) > 1e-9:
            raise ValueError(f"fractions must sum to 1, got {sum(self.fractions)}")
        if self.batch_size < 1 or self.epochs < 1:
            raise ValueError("batch_size and epochs must be >= 1")
        if self.learning_rate < 0:
            raise ValueError(f"learning_rate must be >= 0, got {self.learning_rate}")


@dataclass(frozen=True)
class Split:
    train: np.ndarray
    val: np.ndarray
    test: np.ndarray


# ---------------------------------------------------------------------------
# Splitting
# ---------------------------------------------------------------------------

def _check_split(split: Split) -> Split:
    for name in ("train", "val", "test"):
        if getattr(split, name).size == 0:
            raise EmptyPartition(f"the {name} partition is empty; add data or change the fractions")
    return split


def split_indices(
    labels: np.ndarray,
    fractions: tuple[float, float, float],
    rng: np.random.Generator,
) -> Split:
    """Stratified split: each class is shuffled and cut at rounded fractions.

    A class of ``n`` items gives ``floor(n*f_train + 0.5)`` training items,
    ``floor(n*f_val + 0.5)`` validation items and the rest to test.
    """
    labels = np.asarray(labels)
    parts: tuple[list[int], list[int], list[int]] = ([], [], [])
    for cls in np.unique(labels):
        idx = rng.permutation(np.flatnonzero(labels == cls))
        n = idx.size
        n_train = min(n, int(np.floor(n * fractions[0] + 0.5)))
        n_val = min(n - n_train, int(np.floor(n * fractions[1] + 0.5)))
        parts[0].extend(idx[:n_train])
        parts[1].extend(idx[n_train : n_train + n_val])
        parts[2].extend(idx[n_train + n_val :])
    return _check_split(Split(*(np.sort(np.asarray(p, dtype=np.intp)) for p in parts)))


def split_by_group(
    groups: Sequence[Hashable],
    fractions: tuple[float, float, float],
    rng: np.random.Generator,
) -> Split:
    """Speaker-independent split: whole groups go to one partition.

    Groups are visited in a seeded random order and each is given to the
    partition furthest below its target example count.
    """
    groups = list(groups)
    unique = sorted(set(groups), key=str)
    members: dict[Hashable, list[int]] = {g: [] for g in unique}
    for i, g in enumerate(groups):
        members[g].append(i)
    targets = np.asarray(fractions) * len(groups)
    counts = np.zeros(3)
    parts: tuple[list[int], list[int], list[int]] = ([], [], [])
    for k in rng.permutation(len(unique)):
        g = unique[k]
        slot = int(np.argmax(targets - counts))
        parts[slot].extend(members[g])
        counts[slot] += len(members[g])
    return _check_split(Split(*(np.sort(np.asarray(p, dtype=np.intp)) for p in parts)))


# ---------------------------------------------------------------------------
# Training loop
# ---------------------------------------------------------------------------

def fit(
    model: MlpModel,
    x: np.ndarray,
    y: np.ndarray,
    *,
    epochs: int,
    learning_rate: float,
    batch_size: int,
    rng: np.random.Generator,
    dropout_rng: np.random.Generator | None = None,
    on_epoch: Callable[[int, float], None] | None = None,
) -> list[float]:
    """Mini-batch Adam over *x*; returns the eval-mode loss after each epoch."""
    dropout_rng = dropout_rng if dropout_rng is not None else rng
    history: list[float] = []
    n = x.shape[0]
    for epoch in range(epochs):
        order = rng.permutation(n)
        for start in range(0, n, batch_size):
            batch = order[start : start + batch_size]
            _, grads = loss_and_gradients(model, x[batch], y[batch], mode="train", rng=dropout_rng)
            adam_step(model, grads, learning_rate)
        history.append(loss(model, x, y))
        if on_epoch is not None:
            on_epoch(epoch, history[-1])
    return history


def _stack(dataset: Sequence[tuple[np.ndarray, EmotionLabel | None]]) -> tuple[np.ndarray, np.ndarray]:
    if any(lbl is None for _, lbl in dataset):
        raise MissingClass("training data contains unlabeled examples")
    x = np.stack([np.asarray(v, dtype=np.float64) for v, _ in dataset])
    y = np.asarray([int(lbl) for _, lbl in dataset], dtype=np.intp)
    return x, y


def train(
    dataset: Sequence[tuple[np.ndarray, EmotionLabel | None]],
    cfg: TrainConfig,
    groups: Sequence[Hashable] | None = None,
    on_epoch: EpochCallback | None = None,
) -> tuple[MlpModel, EvalReport]:
    """Split, balance and train; return the best-validation model and its test report.

    Every random stream (split, oversampling, initialisation, shuffling,
    dropout) is spawned from ``cfg.seed``, so a run is reproducible
    bit-for-bit.

    Parameters
    ----------
    dataset:
        ``(embedding, label)`` pairs.
    groups:
        Per-example speaker ids, used when ``cfg.group_by_speaker`` is set.
    on_epoch:
        Called as ``on_epoch(epoch, train_loss, val_accuracy)``.

    Raises
    ------
    MissingClass
        A declared class has no example, or an example is unlabeled.
    EmptyPartition
        A split fraction leaves a partition empty.
    WrongDimension
        Embedding length differs from the model's input size.
    """
    if not dataset:
        raise MissingClass("training dataset is empty")
    x, y = _stack(dataset)
    if x.shape[1] != cfg.layer_sizes[0]:
        raise WrongDimension(f"embeddings have {x.shape[1]} values, model expects {cfg.layer_sizes[0]}")

    present = {EmotionLabel(c) for c in np.unique(y)}
    classes = tuple(sorted(cfg.classes)) if cfg.classes is not None else tuple(sorted(present))
    missing = [c.name.lower() for c in classes if c not in present]
    if missing:
        raise MissingClass(f"no examples for class(es): {', '.join(missing)}")

    split_ss, over_ss, init_ss, shuffle_ss, drop_ss = np.random.SeedSequence(cfg.seed).spawn(5)
    if cfg.group_by_speaker:
        if groups is None or len(groups) != len(y):
            raise ValueError("group_by_speaker needs one speaker id per example")
        split = split_by_group(groups, cfg.fractions, np.random.default_rng(split_ss))
    else:
        split = split_indices(y, cfg.fractions, np.random.default_rng(split_ss))

    balanced = oversample(
        [(int(i), EmotionLabel(y[i])) for i in split.train],
        seed=int(over_ss.generate_state(1)[0]),
        classes=[c for c in classes if c in {EmotionLabel(v) for v in y[split.train]}],
    )
    train_idx = np.asarray([i for i, _ in balanced], dtype=np.intp)
    log.info(
        "split %d/%d/%d (train oversampled to %d), %d classes",
        split.train.size, split.val.size, split.test.size, train_idx.size, len(classes),
    )

    model = MlpModel.initialise(cfg.layer_sizes, cfg.dropout, seed=cfg.seed, rng=np.random.default_rng(init_ss))
    x_train, y_train = x[train_idx], y[train_idx]
    x_val, y_val = x[split.val], y[split.val]

    best = model.copy()
    best_acc = -1.0
    best_epoch = -1

    def _after_epoch(epoch: int, train_loss: float) -> None:
        nonlocal best, best_acc, best_epoch
        val_acc = float(np.mean(predict(model, x_val) == y_val))
        if val_acc > best_acc:
            best, best_acc, best_epoch = model.copy(), val_acc, epoch
        log.debug("epoch %d: train loss %.5f, val acc %.4f", epoch, train_loss, val_acc)
        if on_epoch is not None:
            on_epoch(epoch, train_loss, val_acc)

    fit(
        model,
        x_train,
        y_train,
        epochs=cfg.epochs,
        learning_rate=cfg.learning_rate,
        batch_size=cfg.batch_size,
        rng=np.random.default_rng(shuffle_ss),
        dropout_rng=np.random.default_rng(drop_ss),
        on_epoch=_after_epoch,
    )
    report = evaluate(best, x[split.test], y[split.test], classes=classes)
    log.info("best val acc %.4f at epoch %d; test acc %.4f", best_acc, best_epoch, report.accuracy)
    return best, report
