"""Bernoulli-Bernoulli restricted Boltzmann machine.

Energy ``E(v, h) = -v^T W h - b_v^T v - b_h^T h``.  Sampling alternates
exact conditional draws of the hidden and visible layers (block Gibbs);
training uses contrastive divergence.  Small models can be solved exactly
(:func:`exact_distribution`, :func:`gibbs_kernel`) for verification.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit, logsumexp

from .errors import CapacityError, InputError

EXACT_MAX_UNITS = 20


@dataclass
class RbmModel:
    W: np.ndarray
    b_v: np.ndarray
    b_h: np.ndarray

    def __post_init__(self):
        self.W = np.array(self.W, dtype=np.float64, ndmin=2)
        self.b_v = np.array(self.b_v, dtype=np.float64).reshape(-1)
        self.b_h = np.array(self.b_h, dtype=np.float64).reshape(-1)
        if self.W.shape != (self.b_v.size, self.b_h.size):
            raise InputError(f"W shape {self.W.shape} does not match biases "
                             f"({self.b_v.size}, {self.b_h.size})")
        if self.W.size == 0 and (self.b_v.size == 0 or self.b_h.size == 0):
            raise InputError("RBM needs at least one visible and one hidden unit")
        for a in (self.W, self.b_v, self.b_h):
            if not np.all(np.isfinite(a)):
                raise InputError("RBM parameters must be finite")

    @property
    def n_v(self) -> int:
        return self.b_v.size

    @property
    def n_h(self) -> int:
        return self.b_h.size

    @classmethod
    def zeros(cls, n_v: int, n_h: int) -> "RbmModel":
        return cls(np.zeros((n_v, n_h)), np.zeros(n_v), np.zeros(n_h))

    @classmethod
    def random(cls, n_v: int, n_h: int, seed: int = 0, scale: float = 0.01) -> "RbmModel":
        rng = np.random.default_rng(seed)
        return cls(rng.normal(0.0, scale, (n_v, n_h)), np.zeros(n_v), np.zeros(n_h))

    def copy(self) -> "RbmModel":
        return RbmModel(self.W.copy(), self.b_v.copy(), self.b_h.copy())


def _check(v, n: int, name: str) -> np.ndarray:
    a = np.asarray(v)
    if a.shape[-1:] != (n,):
        raise InputError(f"{name} must have {n} units, got shape {a.shape}")
    if not np.all((a == 0) | (a == 1)):
        raise InputError(f"{name} must be binary")
    return a.astype(np.float64)


def rbm_energy(m: RbmModel, v, h) -> float:
    v = _check(v, m.n_v, "v")
    h = _check(h, m.n_h, "h")
    return float(-(v @ m.W @ h) - m.b_v @ v - m.b_h @ h)


def free_energy(m: RbmModel, v):
    """``F(v) = -b_v^T v - sum_j log(1 + exp(b_h[j] + (v W)[j]))``; lower is
    more plausible.  Works row-wise on 2-d input."""
    v = _check(v, m.n_v, "v")
    out = -(v @ m.b_v) - np.logaddexp(0.0, v @ m.W + m.b_h).sum(axis=-1)
    return float(out) if np.ndim(out) == 0 else out


def hidden_probs(m: RbmModel, v) -> np.ndarray:
    return expit(np.asarray(v, dtype=np.float64) @ m.W + m.b_h)


def visible_probs(m: RbmModel, h) -> np.ndarray:
    return expit(np.asarray(h, dtype=np.float64) @ m.W.T + m.b_v)


def gibbs_step(m: RbmModel, v, rng: np.random.Generator):
    """One block Gibbs sweep ``v -> h ~ P(h|v) -> v' ~ P(v|h)``.

    ``v`` may be a single vector or a batch of rows.
    """
    v = _check(v, m.n_v, "v")
    ph = hidden_probs(m, v)
    h = (rng.random(ph.shape) < ph).astype(np.uint8)
    pv = visible_probs(m, h)
    v_new = (rng.random(pv.shape) < pv).astype(np.uint8)
    return v_new, h


def all_states(n: int) -> np.ndarray:
    """All ``2**n`` bit vectors in lexicographic order (first bit most significant)."""
    idx = np.arange(1 << n, dtype=np.int64)
    return ((idx[:, None] >> np.arange(n - 1, -1, -1)) & 1).astype(np.uint8)


def _require_small(m: RbmModel):
    if m.n_v + m.n_h > EXACT_MAX_UNITS:
        raise CapacityError(f"exact enumeration is capped at n_v + n_h <= {EXACT_MAX_UNITS}")


def exact_distribution(m: RbmModel) -> np.ndarray:
    """Visible marginal ``P(v)`` over :func:`all_states` ``(n_v)`` order."""
    _require_small(m)
    logp = -free_energy(m, all_states(m.n_v))
    logp = np.atleast_1d(logp)
    return np.exp(logp - logsumexp(logp))


def _bernoulli_table(p: np.ndarray, states: np.ndarray) -> np.ndarray:
    """``P(states | p)`` for factorised Bernoullis; rows of p vs rows of states."""
    logp = np.log(np.clip(p, 1e-300, None))
    log1m = np.log(np.clip(1.0 - p, 1e-300, None))
    return np.exp(logp @ states.T.astype(np.float64) + log1m @ (1.0 - states.T))


def hidden_conditional(m: RbmModel, v) -> np.ndarray:
    """Joint table ``P(h | v)`` over :func:`all_states` ``(n_h)``."""
    _require_small(m)
    v = np.atleast_2d(_check(v, m.n_v, "v"))
    return _bernoulli_table(hidden_probs(m, v), all_states(m.n_h))


def gibbs_kernel(m: RbmModel) -> np.ndarray:
    """Exact transition matrix ``P[v, v'] = sum_h P(h|v) P(v'|h)`` of one sweep."""
    _require_small(m)
    V = all_states(m.n_v)
    H = all_states(m.n_h)
    p_h_given_v = _bernoulli_table(hidden_probs(m, V), H)
    p_v_given_h = _bernoulli_table(visible_probs(m, H), V)
    return p_h_given_v @ p_v_given_h


def rbm_sample(m: RbmModel, chains: int, burn_in: int, thin: int, count: int,
               seed: int = 0) -> np.ndarray:
    """Visible samples from independent Gibbs chains.

    Chain ``c`` starts from a uniform random state drawn from the stream
    ``(seed, c)``.  After ``burn_in`` sweeps every ``thin``-th state is kept;
    rows are ordered by draw round, then chain, and cut to ``count``.
    """
    if chains < 1 or thin < 1 or count < 1 or burn_in < 0:
        raise InputError("chains, thin and count must be positive; burn_in >= 0")
    rngs = [np.random.default_rng([int(seed), c]) for c in range(chains)]
    v = np.stack([r.integers(0, 2, m.n_v) for r in rngs]).astype(np.uint8)
    rounds = -(-count // chains)
    out = np.empty((rounds * chains, m.n_v), dtype=np.uint8)
    total = burn_in + rounds * thin
    kept = 0
    for step in range(1, total + 1):
        v = _chain_step(m, v, rngs)
        if step > burn_in and (step - burn_in) % thin == 0:
            out[kept * chains:(kept + 1) * chains] = v
            kept += 1
    return out[:count]


def _chain_step(m: RbmModel, v: np.ndarray, rngs) -> np.ndarray:
    """Gibbs sweep where row c uses only its own stream ``rngs[c]``."""
    ph = hidden_probs(m, v)
    uh = np.stack([r.random(m.n_h) for r in rngs])
    h = (uh < ph).astype(np.uint8)
    pv = visible_probs(m, h)
    uv = np.stack([r.random(m.n_v) for r in rngs])
    return (uv < pv).astype(np.uint8)


def cd_update(m: RbmModel, batch, k: int = 1, lr: float = 0.01,
              rng: np.random.Generator | None = None) -> RbmModel:
    """One CD-k step on ``batch`` (rows of visible vectors); returns a new model.

    Statistics use hidden probabilities rather than sampled hidden states.
    """
    if k < 1:
        raise InputError("k must be >= 1")
    v0 = np.atleast_2d(_check(batch, m.n_v, "batch"))
    if v0.shape[0] == 0:
        raise InputError("batch must not be empty")
    rng = rng if rng is not None else np.random.default_rng(0)
    ph0 = hidden_probs(m, v0)
    vk = v0
    for _ in range(k):
        vk, _h = gibbs_step(m, vk, rng)
    phk = hidden_probs(m, vk)
    B = v0.shape[0]
    vk = vk.astype(np.float64)
    out = m.copy()
    out.W += lr * (v0.T @ ph0 - vk.T @ phk) / B
    out.b_v += lr * (v0.sum(0) - vk.sum(0)) / B
    out.b_h += lr * (ph0.sum(0) - phk.sum(0)) / B
    return out


def expected_cd_update(m: RbmModel, data_dist, k: int = 1, lr: float = 0.01) -> RbmModel:
    """CD-k update averaged exactly over a data distribution on visible states.

    ``data_dist`` is a probability vector over :func:`all_states` ``(n_v)``;
    the negative phase runs ``k`` exact kernel steps.
    """
    _require_small(m)
    pi0 = np.asarray(data_dist, dtype=np.float64)
    V = all_states(m.n_v).astype(np.float64)
    if pi0.shape != (V.shape[0],):
        raise InputError("data_dist must have one entry per visible state")
    pik = pi0 @ np.linalg.matrix_power(gibbs_kernel(m), k)
    ph = hidden_probs(m, V)
    out = m.copy()
    out.W += lr * (V.T @ (pi0[:, None] * ph) - V.T @ (pik[:, None] * ph))
    out.b_v += lr * (pi0 @ V - pik @ V)
    out.b_h += lr * (pi0 @ ph - pik @ ph)
    return out


def rbm_train(m: RbmModel, data, *, epochs: int = 100, batch_size: int = 32, k: int = 1,
              lr: float = 0.01, seed: int = 0) -> RbmModel:
    """Minibatch CD-k over shuffled ``data`` rows, deterministic per seed."""
    data = np.atleast_2d(_check(data, m.n_v, "data"))
    rng = np.random.default_rng(seed)
    for _ in range(epochs):
        order = rng.permutation(data.shape[0])
        for start in range(0, order.size, batch_size):
            m = cd_update(m, data[order[start:start + batch_size]], k, lr, rng)
    return m
