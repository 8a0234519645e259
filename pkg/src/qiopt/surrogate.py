"""Factorization surrogate over bit vectors and its QUBO compilation.

The model predicts ``f(q) = sum_k (sum_i V[i, k] q_i)**2``, which expands
to ``sum_ij (V V^T)[i, j] q_i q_j``; ``Q = V V^T`` is therefore an exact
QUBO form of the predictor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InputError, NumericError
from .problems import Direction, QuboProblem, as_bits


@dataclass(frozen=True)
class TargetTransform:
    """Affine map from surrogate output to original target units:
    ``target = scale * f + shift``."""

    scale: float = 1.0
    shift: float = 0.0

    def forward(self, t):
        return (np.asarray(t, dtype=np.float64) - self.shift) / self.scale

    def inverse(self, f):
        return self.scale * np.asarray(f, dtype=np.float64) + self.shift


@dataclass
class FactorModel:
    V: np.ndarray
    transform: TargetTransform = field(default_factory=TargetTransform)

    def __post_init__(self):
        V = np.array(self.V, dtype=np.float64)
        if V.ndim != 2 or V.shape[0] < 1 or V.shape[1] < 1:
            raise InputError(f"V must be an n x K matrix with n, K >= 1, got {V.shape}")
        if not np.all(np.isfinite(V)):
            raise InputError("V has non-finite entries")
        self.V = V

    @property
    def n(self) -> int:
        return self.V.shape[0]

    @property
    def K(self) -> int:
        return self.V.shape[1]


@dataclass
class PropertyDataset:
    """Bit vectors (rows of ``bits``) with one or more target columns."""

    bits: np.ndarray
    targets: np.ndarray
    names: list = field(default_factory=list)

    def __post_init__(self):
        bits = np.asarray(self.bits)
        if bits.ndim != 2 or bits.shape[0] < 1 or bits.shape[1] < 1:
            raise InputError("dataset needs at least one row and one bit column")
        if not np.all((bits == 0) | (bits == 1)):
            raise InputError("dataset bits must be 0 or 1")
        t = np.asarray(self.targets, dtype=np.float64)
        if t.ndim == 1:
            t = t[:, None]
        if t.ndim != 2 or t.shape[0] != bits.shape[0] or t.shape[1] < 1:
            raise InputError("targets must have one row per bit vector")
        if not np.all(np.isfinite(t)):
            raise InputError("targets must be finite")
        self.bits = bits.astype(np.uint8)
        self.targets = t
        if not self.names:
            self.names = ["target"] + [f"target{i}" for i in range(2, t.shape[1] + 1)]
        if len(self.names) != t.shape[1]:
            raise InputError("one name per target column is required")

    @property
    def n(self) -> int:
        return self.bits.shape[1]

    @property
    def target(self) -> np.ndarray:
        """The first (or only) target column."""
        return self.targets[:, 0]

    def __len__(self) -> int:
        return self.bits.shape[0]


def fm_predict(m: FactorModel, q) -> float:
    """Raw surrogate output for one bit vector (before any target transform)."""
    z = as_bits(q, m.n).astype(np.float64) @ m.V
    return float(z @ z)


def fm_predict_many(m: FactorModel, B) -> np.ndarray:
    Z = np.asarray(B, dtype=np.float64) @ m.V
    return np.einsum("rk,rk->r", Z, Z)


def fm_gradient(m: FactorModel, q) -> np.ndarray:
    """``d f(q) / d V[i, k] = 2 q_i (q . V[:, k])``."""
    qf = as_bits(q, m.n).astype(np.float64)
    return 2.0 * np.outer(qf, qf @ m.V)


def mse_and_gradient(V: np.ndarray, X: np.ndarray, t: np.ndarray):
    """Mean squared error of the surrogate on ``(X, t)`` and its V-gradient."""
    Z = X @ V
    resid = np.einsum("rk,rk->r", Z, Z) - t
    loss = float(resid @ resid) / X.shape[0]
    grad = (4.0 / X.shape[0]) * (X.T @ (resid[:, None] * Z))
    return loss, grad


def split_indices(rows: int, val_fraction: float, seed: int):
    """Deterministic train/validation split; validation falls back to train."""
    if not 0.0 <= val_fraction < 1.0:
        raise InputError("val_fraction must be in [0, 1)")
    perm = np.random.default_rng([int(seed), 1]).permutation(rows)
    n_val = int(round(val_fraction * rows))
    if n_val == 0 or n_val == rows:
        return perm, perm
    return perm[n_val:], perm[:n_val]


def fm_fit(data: PropertyDataset, K: int = 8, *, lr: float = 1e-3, epochs: int = 5000,
           init_scale: float = 0.01, seed: int = 0, val_fraction: float = 0.2,
           weight_decay: float = 0.0, transform: TargetTransform | None = None) -> FactorModel:
    """Fit V by full-batch gradient descent on the mean squared error.

    The first target column is fitted (after ``transform.forward`` if a
    transform is given).  The returned parameters are the ones with the
    lowest validation MSE seen during training.
    """
    if K < 1:
        raise InputError("K must be >= 1")
    if epochs < 0 or not lr > 0:
        raise InputError("lr must be positive and epochs non-negative")
    transform = transform or TargetTransform()
    X = data.bits.astype(np.float64)
    t = transform.forward(data.target)
    train, val = split_indices(len(data), val_fraction, seed)
    Xt, tt, Xv, tv = X[train], t[train], X[val], t[val]

    rng = np.random.default_rng([int(seed), 0])
    V = rng.uniform(-init_scale, init_scale, size=(data.n, K))
    best_V, best_val = V.copy(), math.inf
    for epoch in range(epochs + 1):
        Zv = Xv @ V
        val_loss = float(np.mean((np.einsum("rk,rk->r", Zv, Zv) - tv) ** 2))
        if not math.isfinite(val_loss):
            raise NumericError(f"surrogate loss became non-finite at epoch {epoch}")
        if val_loss < best_val:
            best_val, best_V = val_loss, V.copy()
        if epoch == epochs:
            break
        _, grad = mse_and_gradient(V, Xt, tt)
        if weight_decay:
            grad += 2.0 * weight_decay * V
        V -= lr * grad
    return FactorModel(best_V, transform)


def fm_to_qubo(m: FactorModel, direction=Direction.MAXIMIZE) -> QuboProblem:
    """Exact QUBO of the raw surrogate: ``Q = V V^T``."""
    Q = m.V @ m.V.T
    Q = (Q + Q.T) / 2.0  # exact symmetry despite rounding
    return QuboProblem(Q, Direction.parse(direction))


def fit_transform(targets, direction) -> TargetTransform:
    """Transform making the surrogate target lie in [0, 1], larger is better.

    Targets are multiplied by -1 for minimisation, shifted by their minimum
    when that minimum is negative, and divided by the resulting maximum.
    Maximising the fitted surrogate then optimises the original objective
    in ``direction``, and the fixed learning rate sees unit-scale targets.
    """
    sign = -1.0 if Direction.parse(direction) is Direction.MINIMIZE else 1.0
    u = sign * np.asarray(targets, dtype=np.float64)
    low = float(u.min())
    shift = low if low < 0.0 else 0.0
    span = float(u.max()) - shift
    if span <= 0.0:
        span = 1.0
    # (u - shift) / span == (t - sign*shift) / (sign*span)
    return TargetTransform(scale=sign * span, shift=sign * shift)
