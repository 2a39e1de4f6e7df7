"""Two-hidden-layer ReLU network with a softmax head, trained from scratch.

The objective is mean cross-entropy plus l2 * sum of squared weight-matrix
entries (biases excluded).  Training uses Adam on seeded shuffled
mini-batches, keeps the best parameters by validation cross-entropy and
stops once the epochs since the best exceed the patience.  Everything is
float64 and fully deterministic given (seed, data, config).
"""

from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigError, ValidationError

ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPS = 1e-8
_LOG_FLOOR = 1e-300


@dataclass(frozen=True)
class MlpConfig:
    hidden_sizes: tuple = (800, 400)   # (800, 300) for the 4-class subtask
    learning_rate: float = 1e-4
    l2: float = 1e-5
    max_epochs: int = 100
    early_stop_patience: int = 30
    batch_size: int = 32
    seed: int = 0

    def validate(self):
        if any(h <= 0 for h in self.hidden_sizes) or len(self.hidden_sizes) != 2:
            raise ConfigError(f"hidden_sizes must be two positive integers, got {self.hidden_sizes}")
        if self.learning_rate <= 0 or self.l2 < 0:
            raise ConfigError("learning_rate must be > 0 and l2 >= 0")
        if self.max_epochs <= 0 or self.batch_size <= 0:
            raise ConfigError("max_epochs and batch_size must be positive")
        if self.early_stop_patience < 0:
            raise ConfigError("early_stop_patience must be >= 0")


@dataclass
class MlpModel:
    weights: list           # [W1, W2, W3], W_l maps layer l-1 -> layer l
    biases: list            # [b1, b2, b3]

    @property
    def dims(self) -> tuple:
        return (self.weights[0].shape[0],) + tuple(w.shape[1] for w in self.weights)

    def copy(self) -> "MlpModel":
        return MlpModel(
            weights=[w.copy() for w in self.weights],
            biases=[b.copy() for b in self.biases],
        )


@dataclass(frozen=True)
class EpochLog:
    epoch: int
    train_loss: float
    val_loss: float


def init_mlp(dims, seed: int = 0) -> MlpModel:
    """He-uniform weights (limit sqrt(6/fan_in)), zero biases."""
    if len(dims) != 4 or any(d <= 0 for d in dims):
        raise ConfigError(f"dims must be 4 positive integers, got {dims}")
    rng = np.random.default_rng(seed)
    weights, biases = [], []
    for fan_in, fan_out in zip(dims, dims[1:]):
        limit = np.sqrt(6.0 / fan_in)
        weights.append(rng.uniform(-limit, limit, size=(fan_in, fan_out)))
        biases.append(np.zeros(fan_out))
    return MlpModel(weights=weights, biases=biases)


def _softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=-1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=-1, keepdims=True)


def _forward_pass(model: MlpModel, X: np.ndarray):
    z1 = X @ model.weights[0] + model.biases[0]
    h1 = np.maximum(z1, 0.0)
    z2 = h1 @ model.weights[1] + model.biases[1]
    h2 = np.maximum(z2, 0.0)
    logits = h2 @ model.weights[2] + model.biases[2]
    return z1, h1, z2, h2, _softmax(logits)


def forward(model: MlpModel, x: np.ndarray) -> np.ndarray:
    """Class probability vector (or row-wise matrix for a batch)."""
    x = np.asarray(x, dtype=np.float64)
    single = x.ndim == 1
    X = x[None, :] if single else x
    if X.shape[1] != model.dims[0]:
        raise ValidationError(f"input width {X.shape[1]} != model input dim {model.dims[0]}")
    probs = _forward_pass(model, X)[4]
    return probs[0] if single else probs


def loss(model: MlpModel, X: np.ndarray, y: np.ndarray, l2: float) -> float:
    """Mean NLL of the gold classes + l2 * sum of squared weights."""
    y = np.asarray(y, dtype=np.int64)
    probs = forward(model, np.atleast_2d(X))
    nll = -np.mean(np.log(np.maximum(probs[np.arange(len(y)), y], _LOG_FLOOR)))
    penalty = l2 * sum(float(np.sum(w * w)) for w in model.weights)
    return float(nll + penalty)


def _loss_and_gradients(model: MlpModel, X: np.ndarray, y: np.ndarray, l2: float):
    """One forward/backward pass returning (objective, weight grads, bias grads)."""
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    y = np.asarray(y, dtype=np.int64)
    n = X.shape[0]
    z1, h1, z2, h2, probs = _forward_pass(model, X)
    nll = -np.mean(np.log(np.maximum(probs[np.arange(n), y], _LOG_FLOOR)))
    penalty = l2 * sum(float(np.sum(w * w)) for w in model.weights)
    delta = probs.copy()
    delta[np.arange(n), y] -= 1.0
    delta /= n
    grad_w3 = h2.T @ delta + 2.0 * l2 * model.weights[2]
    grad_b3 = delta.sum(axis=0)
    d_h2 = delta @ model.weights[2].T
    d_z2 = d_h2 * (z2 > 0.0)
    grad_w2 = h1.T @ d_z2 + 2.0 * l2 * model.weights[1]
    grad_b2 = d_z2.sum(axis=0)
    d_h1 = d_z2 @ model.weights[1].T
    d_z1 = d_h1 * (z1 > 0.0)
    grad_w1 = X.T @ d_z1 + 2.0 * l2 * model.weights[0]
    grad_b1 = d_z1.sum(axis=0)
    return float(nll + penalty), [grad_w1, grad_w2, grad_w3], [grad_b1, grad_b2, grad_b3]


def gradients(model: MlpModel, X: np.ndarray, y: np.ndarray, l2: float):
    """Analytic gradients of `loss`; ReLU subgradient at 0 is 0."""
    _, grad_w, grad_b = _loss_and_gradients(model, X, y, l2)
    return grad_w, grad_b


def predict(model: MlpModel, x: np.ndarray):
    """(label, probability vector); argmax ties go to the lowest class id."""
    probs = forward(model, x)
    return int(np.argmax(probs)), probs


def train(
    model: MlpModel,
    train_X: np.ndarray,
    train_y: np.ndarray,
    val_X: np.ndarray,
    val_y: np.ndarray,
    config: MlpConfig,
) -> tuple[MlpModel, list[EpochLog]]:
    """Adam + early stopping; returns the best-validation checkpoint and the log.

    The logged train loss is the epoch mean of the mini-batch objectives
    (l2 included); the validation loss is plain cross-entropy.
    """
    config.validate()
    if len(train_X) == 0 or len(val_X) == 0:
        raise ValidationError("training and validation splits must be non-empty")
    train_X = np.asarray(train_X, dtype=np.float64)
    val_X = np.asarray(val_X, dtype=np.float64)
    train_y = np.asarray(train_y, dtype=np.int64)
    val_y = np.asarray(val_y, dtype=np.int64)

    rng = np.random.default_rng(config.seed)
    params = model.weights + model.biases
    m_state = [np.zeros_like(p) for p in params]
    v_state = [np.zeros_like(p) for p in params]
    step = 0

    best = model.copy()
    best_val = np.inf
    bad_epochs = 0
    logs: list[EpochLog] = []

    for epoch in range(1, config.max_epochs + 1):
        order = rng.permutation(len(train_X))
        batch_losses = []
        for start in range(0, len(order), config.batch_size):
            idx = order[start : start + config.batch_size]
            batch_loss, grad_w, grad_b = _loss_and_gradients(
                model, train_X[idx], train_y[idx], config.l2
            )
            batch_losses.append(batch_loss)
            step += 1
            m_scale = 1.0 / (1.0 - ADAM_BETA1**step)
            v_scale = 1.0 / (1.0 - ADAM_BETA2**step)
            for p, g, m, v in zip(params, grad_w + grad_b, m_state, v_state):
                m *= ADAM_BETA1
                m += (1.0 - ADAM_BETA1) * g
                v *= ADAM_BETA2
                g *= g
                v += (1.0 - ADAM_BETA2) * g
                update = np.sqrt(v * v_scale)
                update += ADAM_EPS
                np.divide(m, update, out=update)
                update *= config.learning_rate * m_scale
                p -= update
        val_loss = loss(model, val_X, val_y, l2=0.0)
        logs.append(EpochLog(epoch=epoch, train_loss=float(np.mean(batch_losses)), val_loss=val_loss))
        if val_loss < best_val:
            best_val = val_loss
            best = model.copy()
            bad_epochs = 0
        else:
            bad_epochs += 1
            if bad_epochs > config.early_stop_patience:
                break
    return best, logs


def config_for_task(task: str, **overrides) -> MlpConfig:
    hidden = (800, 400) if task == "A" else (800, 300)
    return replace(MlpConfig(hidden_sizes=hidden), **overrides)


def write_training_log(path, logs) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        handle.write("epoch\ttrain_loss\tval_loss\n")
        for entry in logs:
            handle.write(f"{entry.epoch}\t{entry.train_loss!r}\t{entry.val_loss!r}\n")
