"""Dense ReLU network with inverted dropout, softmax output and Adam.

Parameters are kept in float64. Weight matrices are ``(fan_in, fan_out)``
so a batch ``x`` of shape ``(batch, fan_in)`` maps to ``x @ W + b``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Literal, Sequence

import numpy as np
from scipy.special import log_softmax, softmax as _softmax

log = logging.getLogger(__name__)

NUM_CLASSES = 7
DEFAULT_LAYER_SIZES: tuple[int, ...] = (2048, 1024, 1024, 512, 512, NUM_CLASSES)
DEFAULT_DROPOUT: tuple[float, ...] = (0.5, 0.5, 0.3, 0.3)

ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPS = 1e-8

Mode = Literal["train", "eval"]
Activation = Literal["relu", "identity"]


@dataclass
class AdamState:
    """First/second moment estimates, one array per parameter, plus the step count."""

    m: list[np.ndarray]
    v: list[np.ndarray]
    step: int = 0

    @classmethod
    def zeros_like(cls, params: Sequence[np.ndarray]) -> "AdamState":
        return cls(m=[np.zeros_like(p) for p in params], v=[np.zeros_like(p) for p in params])


@dataclass
class MlpModel:
    """Weights, biases, dropout rates and optimiser state of the classifier."""

    layer_sizes: tuple[int, ...]
    weights: list[np.ndarray]
    biases: list[np.ndarray]
    dropout: tuple[float, ...]
    activation: Activation = "relu"
    adam: AdamState = field(default=None)  # type: ignore[assignment]
    seed: int = 0

    def __post_init__(self) -> None:
        self.layer_sizes = tuple(int(s) for s in self.layer_sizes)
        self.dropout = tuple(float(r) for r in self.dropout)
        n_layers = len(self.layer_sizes) - 1
        if n_layers < 1:
            raise ValueError("need at least an input and an output size")
        if len(self.weights) != n_layers or len(self.biases) != n_layers:
            raise ValueError(f"expected {n_layers} weight/bias pairs")
        for i, (W, b) in enumerate(zip(self.weights, self.biases)):
            expect = (self.layer_sizes[i], self.layer_sizes[i + 1])
            if W.shape != expect or b.shape != (expect[1],):
                raise ValueError(f"layer {i}: weights {W.shape} / bias {b.shape} do not match {expect}")
        if len(self.dropout) != n_layers - 1:
            raise ValueError(f"need {n_layers - 1} dropout rates (one per hidden layer), got {len(self.dropout)}")
        if any(not 0.0 <= r < 1.0 for r in self.dropout):
            raise ValueError(f"dropout rates must be in [0, 1), got {self.dropout}")
        if self.activation not in ("relu", "identity"):
            raise ValueError(f"unknown activation {self.activation!r}")
        if self.adam is None:
            self.adam = AdamState.zeros_like(self.params)

    @classmethod
    def initialise(
        cls,
        layer_sizes: Sequence[int] = DEFAULT_LAYER_SIZES,
        dropout: Sequence[float] = DEFAULT_DROPOUT,
        seed: int = 0,
        activation: Activation = "relu",
        rng: np.random.Generator | None = None,
    ) -> "MlpModel":
        """Kaiming-uniform weights ``U(-sqrt(6/fan_in), sqrt(6/fan_in))``, zero biases."""
        rng = rng if rng is not None else np.random.default_rng(seed)
        weights, biases = [], []
        for fan_in, fan_out in zip(layer_sizes[:-1], layer_sizes[1:]):
            bound = np.sqrt(6.0 / fan_in)
            weights.append(rng.uniform(-bound, bound, size=(fan_in, fan_out)))
            biases.append(np.zeros(fan_out))
        return cls(
            layer_sizes=tuple(layer_sizes),
            weights=weights,
            biases=biases,
            dropout=tuple(dropout),
            activation=activation,
            seed=seed,
        )

    @property
    def params(self) -> list[np.ndarray]:
        """Parameters in ``[W0, b0, W1, b1, ...]`` order."""
        out: list[np.ndarray] = []
        for W, b in zip(self.weights, self.biases):
            out.extend((W, b))
        return out

    @property
    def num_layers(self) -> int:
        return len(self.weights)

    def copy(self) -> "MlpModel":
        return MlpModel(
            layer_sizes=self.layer_sizes,
            weights=[W.copy() for W in self.weights],
            biases=[b.copy() for b in self.biases],
            dropout=self.dropout,
            activation=self.activation,
            adam=AdamState(
                m=[a.copy() for a in self.adam.m],
                v=[a.copy() for a in self.adam.v],
                step=self.adam.step,
            ),
            seed=self.seed,
        )


# ---------------------------------------------------------------------------
# Forward / backward
# ---------------------------------------------------------------------------

def softmax(logits: np.ndarray) -> np.ndarray:
    """Row-wise softmax (max-subtracted)."""
    return _softmax(logits, axis=-1)


@dataclass
class _Trace:
    inputs: list[np.ndarray]        # input to each layer
    pre: list[np.ndarray]           # hidden pre-activations
    masks: list[np.ndarray | None]  # scaled dropout masks per hidden layer
    logits: np.ndarray


def _run(model: MlpModel, x: np.ndarray, mode: Mode, rng: np.random.Generator | None) -> _Trace:
    if mode == "train" and rng is None and any(model.dropout):
        raise ValueError("train mode with dropout needs an rng")
    a = x
    inputs, pre, masks = [], [], []
    for i in range(model.num_layers - 1):
        inputs.append(a)
        z = a @ model.weights[i] + model.biases[i]
        pre.append(z)
        a = np.maximum(z, 0.0) if model.activation == "relu" else z
        rate = model.dropout[i]
        if mode == "train" and rate > 0.0:
            mask = (rng.random(a.shape) >= rate) / (1.0 - rate)
            a = a * mask
            masks.append(mask)
        else:
            masks.append(None)
    inputs.append(a)
    logits = a @ model.weights[-1] + model.biases[-1]
    return _Trace(inputs=inputs, pre=pre, masks=masks, logits=logits)


def _as_batch(x: np.ndarray) -> tuple[np.ndarray, bool]:
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim == 1:
        return arr[None, :], True
    return arr, False


def forward(
    model: MlpModel,
    x: np.ndarray,
    mode: Mode = "eval",
    rng: np.random.Generator | None = None,
) -> np.ndarray:
    """Class probabilities for one vector or a ``(batch, dim)`` array.

    ``mode="train"`` applies inverted dropout drawn from *rng*; eval mode
    is a deterministic function of the weights and *x*.
    """
    batch, single = _as_batch(x)
    probs = softmax(_run(model, batch, mode, rng).logits)
    return probs[0] if single else probs


def predict(model: MlpModel, x: np.ndarray) -> np.ndarray:
    """Arg-max class per row; ties go to the lowest class index."""
    batch, single = _as_batch(x)
    pred = np.argmax(_run(model, batch, "eval", None).logits, axis=1)
    return pred[0] if single else pred


def loss(model: MlpModel, x: np.ndarray, y: np.ndarray) -> float:
    """Mean cross-entropy in eval mode."""
    batch, _ = _as_batch(x)
    logp = log_softmax(_run(model, batch, "eval", None).logits, axis=1)
    return float(-np.mean(logp[np.arange(len(y)), np.asarray(y)]))


def loss_and_gradients(
    model: MlpModel,
    x: np.ndarray,
    y: np.ndarray,
    mode: Mode = "train",
    rng: np.random.Generator | None = None,
) -> tuple[float, list[np.ndarray]]:
    """Mean cross-entropy and its gradients in :attr:`MlpModel.params` order."""
    batch, _ = _as_batch(x)
    y = np.asarray(y, dtype=np.intp)
    n = batch.shape[0]
    trace = _run(model, batch, mode, rng)
    logp = log_softmax(trace.logits, axis=1)
    value = float(-np.mean(logp[np.arange(n), y]))

    delta = np.exp(logp)
    delta[np.arange(n), y] -= 1.0
    delta /= n

    grads: list[np.ndarray] = [None] * (2 * model.num_layers)  # type: ignore[list-item]
    for i in range(model.num_layers - 1, -1, -1):
        grads[2 * i] = trace.inputs[i].T @ delta
        grads[2 * i + 1] = delta.sum(axis=0)
        if i == 0:
            break
        delta = delta @ model.weights[i].T
        if trace.masks[i - 1] is not None:
            delta = delta * trace.masks[i - 1]
        if model.activation == "relu":
            delta = delta * (trace.pre[i - 1] > 0.0)
    return value, grads


def adam_step(
    model: MlpModel,
    grads: Sequence[np.ndarray],
    learning_rate: float,
    beta1: float = ADAM_BETA1,
    beta2: float = ADAM_BETA2,
    eps: float = ADAM_EPS,
) -> None:
    """Apply one bias-corrected Adam update to *model* in place."""
    state = model.adam
    state.step += 1
    c1 = 1.0 - beta1 ** state.step
    c2 = 1.0 - beta2 ** state.step
    for p, g, m, v in zip(model.params, grads, state.m, state.v):
        m *= beta1
        m += (1.0 - beta1) * g
        v *= beta2
        v += (1.0 - beta2) * g * g
        if learning_rate:
            p -= learning_rate * (m / c1) / (np.sqrt(v / c2) + eps)


# ---------------------------------------------------------------------------
# Gradient checking
# ---------------------------------------------------------------------------

GradFn = Callable[[MlpModel, np.ndarray, np.ndarray], tuple[float, list[np.ndarray]]]


def _eval_gradients(model: MlpModel, x: np.ndarray, y: np.ndarray) -> tuple[float, list[np.ndarray]]:
    return loss_and_gradients(model, x, y, mode="eval")


def gradient_check(
    model: MlpModel,
    x: np.ndarray,
    y: np.ndarray,
    step: float = 1e-5,
    samples_per_group: int | None = None,
    seed: int = 0,
    grad_fn: GradFn | None = None,
) -> float:
    """Largest relative error between analytic and central-difference gradients.

    Dropout is not applied. For each parameter group the error is
    ``||a - n|| / max(||a|| + ||n||, 1e-12)`` over the checked entries;
    the maximum over groups is returned.

    Parameters
    ----------
    samples_per_group:
        Check this many random entries per group instead of all of them.
    grad_fn:
        Analytic gradient under test; defaults to :func:`loss_and_gradients`
        in eval mode.
    """
    grad_fn = grad_fn or _eval_gradients
    _, analytic = grad_fn(model, x, y)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for group, (p, g) in enumerate(zip(model.params, analytic)):
        flat = p.reshape(-1)
        if samples_per_group is None or samples_per_group >= flat.size:
            idx = np.arange(flat.size)
        else:
            idx = rng.choice(flat.size, size=samples_per_group, replace=False)
        numeric = np.empty(idx.size)
        for k, j in enumerate(idx):
            orig = flat[j]
            flat[j] = orig + step
            up = loss(model, x, y)
            flat[j] = orig - step
            down = loss(model, x, y)
            flat[j] = orig
            numeric[k] = (up - down) / (2.0 * step)
        a = np.asarray(g).reshape(-1)[idx]
        err = float(np.linalg.norm(a - numeric) / max(np.linalg.norm(a) + np.linalg.norm(numeric), 1e-12))
        log.debug("gradient check group %d: %d entries, rel err %.3e", group, idx.size, err)
        worst = max(worst, err)
    return worst
