"""Ising and QUBO problem types, energy evaluation and exact enumeration.

Energies follow the full double-sum convention::

    E(s) = sum_i sum_j J[i, j] * s_i * s_j + offset

so every unordered pair contributes twice.  QUBO values are
``q^T Q q`` with the diagonal acting as a linear term (``q_i**2 == q_i``).
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import CapacityError, InputError

BRUTE_FORCE_MAX_N = 24
_CHUNK_BITS = 16


class Direction(str, enum.Enum):
    MINIMIZE = "min"
    MAXIMIZE = "max"

    @classmethod
    def parse(cls, value: "Direction | str") -> "Direction":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower()
        aliases = {"min": cls.MINIMIZE, "minimize": cls.MINIMIZE,
                   "max": cls.MAXIMIZE, "maximize": cls.MAXIMIZE}
        try:
            return aliases[key]
        except KeyError:
            raise InputError(f"unknown direction {value!r}") from None


def _square_matrix(a, name: str) -> np.ndarray:
    m = np.array(a, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise InputError(f"{name} must be a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise InputError(f"{name} has non-finite entries")
    if not np.array_equal(m, m.T):
        raise InputError(f"{name} must be symmetric")
    m.setflags(write=False)
    return m


@dataclass(frozen=True)
class IsingProblem:
    """Pairwise Ising model over ``n`` spins.

    Parameters
    ----------
    J : array_like, shape (n, n)
        Symmetric coupling matrix with zero diagonal.
    offset : float
        Constant added to every energy.
    """

    J: np.ndarray
    offset: float = 0.0

    def __post_init__(self):
        J = _square_matrix(self.J, "J")
        if np.any(np.diag(J) != 0):
            raise InputError("Ising couplings must have a zero diagonal")
        if not np.isfinite(self.offset):
            raise InputError("offset must be finite")
        object.__setattr__(self, "J", J)
        object.__setattr__(self, "offset", float(self.offset))

    @property
    def n(self) -> int:
        return self.J.shape[0]


@dataclass(frozen=True)
class QuboProblem:
    """Quadratic binary objective ``q^T Q q`` with an optimisation direction."""

    Q: np.ndarray
    direction: Direction = Direction.MINIMIZE

    def __post_init__(self):
        object.__setattr__(self, "Q", _square_matrix(self.Q, "Q"))
        object.__setattr__(self, "direction", Direction.parse(self.direction))

    @property
    def n(self) -> int:
        return self.Q.shape[0]


@dataclass
class Solution:
    """Best configuration found by a solver.

    ``config`` holds spins (+1/-1) for Ising problems and bits for QUBOs.
    """

    config: np.ndarray
    energy: float
    seed: int = 0
    restart_index: int = 0
    best_step: int = 0
    params: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {
            "energy": float(self.energy),
            "config": [int(c) for c in self.config],
            "seed": int(self.seed),
            "restart_index": int(self.restart_index),
            "best_step": int(self.best_step),
        }
        if self.params:
            out["params"] = self.params
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "Solution":
        try:
            return cls(config=np.asarray(d["config"], dtype=np.int8),
                       energy=float(d["energy"]), seed=int(d["seed"]),
                       restart_index=int(d["restart_index"]),
                       best_step=int(d["best_step"]),
                       params=dict(d.get("params", {})))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed solution object: {exc}") from exc


# -- configurations ---------------------------------------------------------

def as_spins(s, n: int | None = None) -> np.ndarray:
    """Validate and return ``s`` as an int8 array of +1/-1."""
    arr = np.asarray(s)
    if arr.ndim != 1:
        raise InputError("spin configuration must be one-dimensional")
    if n is not None and arr.shape[0] != n:
        raise InputError(f"expected {n} spins, got {arr.shape[0]}")
    if not np.all((arr == 1) | (arr == -1)):
        raise InputError("spins must be exactly +1 or -1")
    return arr.astype(np.int8)


def as_bits(q, n: int | None = None) -> np.ndarray:
    """Validate and return ``q`` as a uint8 array of 0/1."""
    arr = np.asarray(q)
    if arr.ndim != 1:
        raise InputError("bit vector must be one-dimensional")
    if n is not None and arr.shape[0] != n:
        raise InputError(f"expected {n} bits, got {arr.shape[0]}")
    if not np.all((arr == 0) | (arr == 1)):
        raise InputError("bits must be exactly 0 or 1")
    return arr.astype(np.uint8)


def spins_to_bits(s) -> np.ndarray:
    return ((as_spins(s).astype(np.int16) + 1) // 2).astype(np.uint8)


def bits_to_spins(q) -> np.ndarray:
    return (2 * as_bits(q).astype(np.int8) - 1).astype(np.int8)


# -- evaluation -------------------------------------------------------------

def ising_energy(p: IsingProblem, s) -> float:
    s = as_spins(s, p.n).astype(np.float64)
    return float(s @ p.J @ s) + p.offset


def ising_energies(p: IsingProblem, S: np.ndarray) -> np.ndarray:
    """Energies of a batch of spin configurations, one per row (unchecked)."""
    S = np.asarray(S, dtype=np.float64)
    return np.einsum("ki,ki->k", S @ p.J, S) + p.offset


def qubo_value(p: QuboProblem, q) -> float:
    q = as_bits(q, p.n).astype(np.float64)
    return float(q @ p.Q @ q)


def qubo_values(p: QuboProblem, B: np.ndarray) -> np.ndarray:
    B = np.asarray(B, dtype=np.float64)
    return np.einsum("ki,ki->k", B @ p.Q, B)


# -- compilation ------------------------------------------------------------

def qubo_to_ising(p: QuboProblem) -> IsingProblem:
    """Compile a QUBO onto ``n + 1`` spins, spin 0 being a fixed ancilla.

    With ``s_0 = +1`` and ``s_i = 2 q_{i-1} - 1`` the Ising energy equals
    ``q^T Q q`` for minimisation problems and ``-q^T Q q`` for maximisation.
    """
    Q = -p.Q if p.direction is Direction.MAXIMIZE else p.Q
    n = p.n
    J = np.zeros((n + 1, n + 1))
    off = Q / 4.0
    np.fill_diagonal(off, 0.0)
    J[1:, 1:] = off
    # linear field h_i = (row sum)/2 is split over the two ancilla entries
    field_ = Q.sum(axis=1) / 4.0
    J[0, 1:] = field_
    J[1:, 0] = field_
    offset = Q.sum() / 4.0 + np.trace(Q) / 4.0
    return IsingProblem(J, offset)


def decode_ancilla(s) -> np.ndarray:
    """Bits encoded by a spin configuration of a compiled QUBO."""
    s = as_spins(s)
    if s[0] < 0:
        s = -s
    return spins_to_bits(s[1:])


def maxcut_to_ising(edges: Iterable[Sequence], n: int) -> IsingProblem:
    """Ising form of MAX-CUT: ``cut(s) = (W_total - E(s)) / 2``.

    ``edges`` holds ``(i, j)`` or ``(i, j, w)`` tuples; repeated edges add up.
    """
    n = int(n)
    if n < 1:
        raise InputError("graph needs at least one vertex")
    J = np.zeros((n, n))
    for e in edges:
        i, j = int(e[0]), int(e[1])
        w = float(e[2]) if len(e) > 2 else 1.0
        if not (0 <= i < n and 0 <= j < n):
            raise InputError(f"edge ({i}, {j}) out of range for n={n}")
        if i == j:
            raise InputError(f"self-loop at vertex {i}")
        J[i, j] += w / 2.0
        J[j, i] += w / 2.0
    return IsingProblem(J)


def cut_value(edges: Iterable[Sequence], s) -> float:
    """Total weight of edges whose endpoints carry opposite spins."""
    s = as_spins(s)
    total = 0.0
    for e in edges:
        w = float(e[2]) if len(e) > 2 else 1.0
        if s[int(e[0])] != s[int(e[1])]:
            total += w
    return total


def cut_from_energy(p: IsingProblem, energy: float) -> float:
    """Cut weight implied by an energy of a :func:`maxcut_to_ising` problem."""
    w_total = np.triu(p.J, 1).sum() * 2.0
    return (w_total - (energy - p.offset)) / 2.0


# -- exhaustive oracle ------------------------------------------------------

def _bit_block(start: int, count: int, width: int) -> np.ndarray:
    """Rows ``start..start+count-1`` of the lexicographic bit table (MSB first)."""
    idx = np.arange(start, start + count, dtype=np.int64)
    shifts = np.arange(width - 1, -1, -1, dtype=np.int64)
    return ((idx[:, None] >> shifts) & 1).astype(np.int8)


def _scan(evaluate, width: int, chunk_bits: int, minimize: bool):
    """First lexicographic argmin/argmax of ``evaluate`` over all bit rows."""
    total = 1 << width
    chunk = 1 << min(chunk_bits, width)
    best_val, best_row = None, None
    for start in range(0, total, chunk):
        block = _bit_block(start, min(chunk, total - start), width)
        vals = evaluate(block)
        if not minimize:
            vals = -vals
        m = vals.min()
        tol = 1e-12 * max(1.0, abs(m))
        if best_val is None or m < best_val - tol:
            k = int(np.flatnonzero(vals <= m + tol)[0])
            best_val, best_row = m, block[k].copy()
    return best_row


def brute_force_ground_state(p: IsingProblem | QuboProblem, *,
                             chunk_bits: int = _CHUNK_BITS) -> Solution:
    """Exact optimum by exhaustive enumeration (``n <= 24``).

    Ties go to the lexicographically smallest configuration (``-1 < +1``
    for spins).  Ising results are reported with ``s_0 = +1``; the energy
    is invariant under a global flip, so only that half is enumerated.
    """
    if p.n > BRUTE_FORCE_MAX_N:
        raise CapacityError(f"brute force is capped at n={BRUTE_FORCE_MAX_N}, got n={p.n}")
    if isinstance(p, QuboProblem):
        bits = _scan(lambda B: qubo_values(p, B), p.n, chunk_bits,
                     p.direction is Direction.MINIMIZE)
        return Solution(bits.astype(np.uint8), qubo_value(p, bits),
                        params={"algo": "brute"})
    if not isinstance(p, IsingProblem):
        raise InputError(f"unsupported problem type {type(p).__name__}")

    def evaluate(B):
        S = np.empty((B.shape[0], p.n), dtype=np.int8)
        S[:, 0] = 1
        S[:, 1:] = 2 * B - 1
        return ising_energies(p, S)

    rest = _scan(evaluate, p.n - 1, chunk_bits, True)
    s = np.concatenate([[1], 2 * rest.astype(np.int8) - 1]).astype(np.int8)
    return Solution(s, ising_energy(p, s), params={"algo": "brute"})


def normalize_spins(s: np.ndarray) -> np.ndarray:
    """Apply the global flip that makes ``s[0] == +1``."""
    return -s if s[0] < 0 else s


def random_ising(n: int, seed: int = 0, *, dist: str = "uniform") -> IsingProblem:
    """Random symmetric couplings: ``uniform`` on (-1, 1) or ``pm1`` in {-1, +1}."""
    rng = np.random.default_rng(seed)
    if dist == "uniform":
        upper = rng.uniform(-1.0, 1.0, size=(n, n))
    elif dist == "pm1":
        upper = rng.choice(np.array([-1.0, 1.0]), size=(n, n))
    else:
        raise InputError(f"unknown coupling distribution {dist!r}")
    J = np.triu(upper, 1)
    return IsingProblem(J + J.T)


def random_qubo(n: int, seed: int = 0, direction=Direction.MINIMIZE) -> QuboProblem:
    rng = np.random.default_rng(seed)
    Q = np.triu(rng.uniform(-1.0, 1.0, size=(n, n)))
    return QuboProblem(Q + np.triu(Q, 1).T, direction)
