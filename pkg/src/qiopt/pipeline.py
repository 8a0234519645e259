"""Property optimisation over bit vectors: fit, compile, solve, rank.

``optimize_property`` scalarises the dataset targets, fits the
factorization surrogate to a transformed target that is non-negative and
larger-is-better, compiles it to a QUBO and then to Ising form, runs bSB,
and ranks every distinct configuration that became a restart's best.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bsb import BsbParams, bsb_run
from .errors import InputError, QioptError
from .problems import Direction, decode_ancilla, qubo_to_ising
from .rbm import RbmModel, free_energy
from .surrogate import (FactorModel, PropertyDataset, fit_transform, fm_fit,
                        fm_predict_many, fm_to_qubo)

MAX_BITS = 4096


class StageError(QioptError):
    """A pipeline stage failed; ``stage`` names it and ``__cause__`` holds the error."""

    def __init__(self, stage: str, exc: Exception):
        super().__init__(f"{stage}: {exc}")
        self.stage = stage


@dataclass
class Candidate:
    bits: np.ndarray
    predicted: float
    energy: float
    restart: int

    def to_dict(self) -> dict:
        return {"bits": "".join(str(int(b)) for b in self.bits),
                "predicted": float(self.predicted), "energy": float(self.energy),
                "restart": int(self.restart)}


@dataclass
class PipelineConfig:
    K: int = 8
    direction: Direction = Direction.MAXIMIZE
    weights: tuple | None = None
    solver: BsbParams = field(default_factory=lambda: BsbParams(restarts=32))
    top_k: int = 10
    rbm_model: RbmModel | None = None
    keep_fraction: float = 1.0
    seed: int = 0
    lr: float = 1e-3
    epochs: int = 5000
    init_scale: float = 0.01
    val_fraction: float = 0.2
    weight_decay: float = 0.0

    def __post_init__(self):
        self.direction = Direction.parse(self.direction)
        if self.top_k < 1:
            raise InputError("top_k must be >= 1")
        if not 0.0 < self.keep_fraction <= 1.0:
            raise InputError("keep_fraction must be in (0, 1]")


@dataclass
class RankedCandidates:
    candidates: list
    model: FactorModel
    direction: Direction

    def __iter__(self):
        return iter(self.candidates)

    def __len__(self):
        return len(self.candidates)

    def __getitem__(self, i):
        return self.candidates[i]


def scalarize(data: PropertyDataset, weights) -> PropertyDataset:
    """Single-target dataset with ``target = sum_w weight_w * target_w``."""
    w = np.asarray(weights, dtype=np.float64).reshape(-1)
    if w.size != data.targets.shape[1]:
        raise InputError(f"{w.size} weights for {data.targets.shape[1]} target columns")
    return PropertyDataset(data.bits, data.targets @ w, ["score"])


def _stage(name, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except QioptError as exc:
        raise StageError(name, exc) from exc


def optimize_property(data: PropertyDataset, cfg: PipelineConfig = PipelineConfig()) -> RankedCandidates:
    """Ranked candidate bit vectors predicted to optimise the scalarised target.

    Predictions are reported in original target units.  The list is sorted
    best-first for ``cfg.direction`` with ties broken by bit pattern.
    """
    if data.n > MAX_BITS:
        raise InputError(f"at most {MAX_BITS} bits are supported, got {data.n}")
    weights = cfg.weights if cfg.weights is not None else (1.0,) * data.targets.shape[1]
    scalar = _stage("scalarize", scalarize, data, weights)
    transform = _stage("transform", fit_transform, scalar.target, cfg.direction)
    model = _stage("fit", fm_fit, scalar, cfg.K, lr=cfg.lr, epochs=cfg.epochs,
                   init_scale=cfg.init_scale, seed=cfg.seed, val_fraction=cfg.val_fraction,
                   weight_decay=cfg.weight_decay, transform=transform)
    # the transformed surrogate is always maximised
    qubo = _stage("compile", fm_to_qubo, model, Direction.MAXIMIZE)
    ising = _stage("compile", qubo_to_ising, qubo)
    solver = BsbParams(**{**cfg.solver.__dict__, "seed": int(cfg.seed)})
    run = _stage("solve", bsb_run, ising, solver, record=True)

    pool = {}
    for restart, _step, spins, energy in run.history:
        bits = decode_ancilla(spins)
        key = bits.tobytes()
        if key not in pool or energy < pool[key][1]:
            pool[key] = (bits, energy, restart)
    if not pool:
        raise StageError("solve", InputError("solver produced no candidates"))
    bits = np.stack([b for b, _, _ in pool.values()])
    predicted = transform.inverse(fm_predict_many(model, bits))
    cands = [Candidate(b, float(p), float(e), int(r))
             for (b, e, r), p in zip(pool.values(), predicted)]
    sign = -1.0 if cfg.direction is Direction.MAXIMIZE else 1.0
    cands.sort(key=lambda c: (sign * c.predicted, c.bits.tobytes()))

    if cfg.rbm_model is not None and cfg.keep_fraction < 1.0:
        cands = _stage("rbm-filter", rbm_filter, cands, cfg.rbm_model, cfg.keep_fraction)
    return RankedCandidates(cands[:cfg.top_k], model, cfg.direction)


def rbm_filter(cands: list, model: RbmModel, keep_fraction: float) -> list:
    """Keep the ``keep_fraction`` most plausible candidates (lowest free
    energy), preserving their order."""
    if model.n_v != cands[0].bits.size:
        raise InputError(f"RBM has {model.n_v} visible units, candidates have {cands[0].bits.size} bits")
    fe = np.atleast_1d(free_energy(model, np.stack([c.bits for c in cands])))
    keep = max(1, math.ceil(keep_fraction * len(cands)))
    chosen = set(np.argsort(fe, kind="stable")[:keep].tolist())
    return [c for i, c in enumerate(cands) if i in chosen]


class SyntheticOracle:
    """Deterministic black-box property over bit vectors.

    Kinds:

    * ``quadratic``: ``q^T Q q`` with ``Q = B B^T / r``, ``B`` an ``n x r``
      Gaussian matrix and ``r = max(1, n // 4)``.  Symmetric positive
      semidefinite, hence exactly representable by the surrogate.
    * ``sparse-quadratic``: indefinite symmetric ``Q`` with entries uniform
      on (-1, 1), about 20% of them non-zero.
    * ``onemax``: the number of ones.
    """

    KINDS = ("quadratic", "sparse-quadratic", "onemax")

    def __init__(self, kind: str, n: int, seed: int = 0):
        if kind not in self.KINDS:
            raise InputError(f"unknown oracle kind {kind!r}; choose from {self.KINDS}")
        if n < 1:
            raise InputError("n must be >= 1")
        self.kind, self.n, self.seed = kind, int(n), int(seed)
        rng = np.random.default_rng([self.seed, self.KINDS.index(kind)])
        if kind == "onemax":
            Q = np.eye(n)
        elif kind == "quadratic":
            B = rng.normal(size=(n, max(1, n // 4)))
            Q = B @ B.T / B.shape[1]
            Q = (Q + Q.T) / 2.0
        else:
            Q = rng.uniform(-1.0, 1.0, size=(n, n))
            Q *= rng.random((n, n)) < 0.2
            Q = np.triu(Q)
            Q = Q + np.triu(Q, 1).T
        self.Q = Q

    def __call__(self, bits):
        B = np.asarray(bits, dtype=np.float64)
        vals = np.einsum("...i,ij,...j->...", B, self.Q, B)
        return float(vals) if vals.ndim == 0 else vals

    def sample_dataset(self, rows: int, seed: int = 0) -> PropertyDataset:
        bits = np.random.default_rng([int(seed), 7]).integers(0, 2, size=(rows, self.n))
        return PropertyDataset(bits.astype(np.uint8), self(bits), [self.kind])


def synthetic_oracle(kind: str, n: int, seed: int = 0) -> SyntheticOracle:
    return SyntheticOracle(kind, n, seed)
