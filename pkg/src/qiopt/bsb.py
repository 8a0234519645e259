"""Ballistic simulated bifurcation (bSB) for Ising problems.

Each spin is an oscillator with position ``x_i`` and momentum ``y_i``.
One step of the symplectic-Euler integrator is::

    y_i <- y_i + dt * (-(a0 - a(t)) * x_i - c0 * sum_j J[i, j] * x_j)
    x_i <- x_i + dt * a0 * y_i

followed by inelastic walls at ``|x_i| = 1``: any oscillator beyond the
wall is put back at ``sgn(x_i)`` with ``y_i = 0``.  The coupling force is
the descent direction of the double-sum Ising energy.

Restarts are integrated as one batch; restart ``r`` draws its initial
state from its own stream seeded with ``(seed, r)``, so results do not
depend on how restarts are grouped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InputError, NumericError
from .problems import IsingProblem, Solution, ising_energy, normalize_spins

# above this many spins the sign-configuration energy is updated incrementally
_INCREMENTAL_MIN_N = 128


@dataclass(frozen=True)
class BsbParams:
    a0: float = 1.0
    c0: float | None = None  # None selects auto_c0
    dt: float = 0.1
    steps: int = 2000
    schedule: str = "linear"
    restarts: int = 1
    seed: int = 0

    def __post_init__(self):
        if not (self.a0 > 0 and math.isfinite(self.a0)):
            raise InputError("a0 must be positive")
        if self.c0 is not None and not (self.c0 > 0 and math.isfinite(self.c0)):
            raise InputError("c0 must be positive or None (auto)")
        if not (self.dt > 0 and math.isfinite(self.dt)):
            raise InputError("dt must be positive")
        if int(self.steps) < 1 or int(self.restarts) < 1:
            raise InputError("steps and restarts must be >= 1")
        if self.schedule != "linear":
            raise InputError(f"unknown schedule {self.schedule!r}")
        if int(self.seed) < 0:
            raise InputError("seed must be non-negative")

    def as_dict(self, c0: float | None = None) -> dict:
        return {"algo": "bsb", "a0": self.a0, "c0": self.c0 if c0 is None else c0,
                "dt": self.dt, "steps": int(self.steps), "schedule": self.schedule,
                "restarts": int(self.restarts), "seed": int(self.seed)}


@dataclass
class BsbState:
    x: np.ndarray
    y: np.ndarray
    t: float = 0.0


@dataclass
class BsbRun:
    """Per-restart outcome of a batch of bSB trajectories.

    ``history`` (when recorded) lists ``(restart, step, spins, energy)``
    every time a restart improves on its best sign configuration, and
    ``energies`` holds the sign-configuration energy after each step.
    """

    restart_indices: np.ndarray
    best_energy: np.ndarray
    best_config: np.ndarray
    best_step: np.ndarray
    c0: float
    a_t: np.ndarray | None = None
    energies: np.ndarray | None = None
    history: list = field(default_factory=list)


def linear_schedule(step: int, steps: int, a0: float) -> float:
    if not 0 <= step <= steps:
        raise InputError(f"step {step} outside [0, {steps}]")
    return a0 * step / steps


def auto_c0(p: IsingProblem, a0: float = 1.0) -> float:
    """``0.5 * a0 / (std(J_offdiag) * sqrt(n))``; falls back to std = 1."""
    n = p.n
    if n > 1:
        off = p.J[~np.eye(n, dtype=bool)]
        sigma = float(off.std())
    else:
        sigma = 0.0
    if sigma == 0.0:
        sigma = 1.0
    return 0.5 * a0 / (sigma * math.sqrt(n))


def _advance(x, y, Jf, a0, dt, a_t):
    """One in-place symplectic-Euler step with walls; x, y are (..., n).

    ``Jf`` is the coupling matrix pre-scaled by ``-c0 * dt``.
    """
    y += x @ Jf
    y -= (dt * (a0 - a_t)) * x
    x += (dt * a0) * y
    wall = np.abs(x) > 1.0
    y[wall] = 0.0
    np.minimum(x, 1.0, out=x)
    np.maximum(x, -1.0, out=x)


def bsb_step(state: BsbState, p: IsingProblem, params: BsbParams, a_t: float) -> BsbState:
    """Advance a single state by one time step (returns a new state)."""
    x = np.array(state.x, dtype=np.float64)
    y = np.array(state.y, dtype=np.float64)
    if x.shape != (p.n,) or y.shape != (p.n,):
        raise InputError(f"state dimension does not match n={p.n}")
    c0 = auto_c0(p, params.a0) if params.c0 is None else params.c0
    x += 0.0  # no negative zeros, see _signs
    _advance(x, y, p.J * (-c0 * params.dt), params.a0, params.dt, a_t)
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise NumericError("bSB state became non-finite")
    return BsbState(x, y, state.t + params.dt)


def initial_state(n: int, seed: int, restart: int) -> tuple[np.ndarray, np.ndarray]:
    rng = np.random.default_rng([int(seed), int(restart)])
    x = rng.uniform(-0.1, 0.1, size=n)
    y = rng.uniform(-0.1, 0.1, size=n)
    return x, y


def _signs(x: np.ndarray) -> np.ndarray:
    # sgn with sgn(0) = +1; callers keep -0.0 out of x
    return np.copysign(1.0, x)


class _SignEnergy:
    """Energies of sgn(x) per row, either recomputed or tracked incrementally."""

    def __init__(self, p: IsingProblem, S: np.ndarray):
        self.p = p
        self.incremental = p.n >= _INCREMENTAL_MIN_N
        self.S = S.copy()
        if self.incremental:
            self.H = self.S @ p.J

    def update(self, S: np.ndarray) -> np.ndarray:
        p = self.p
        if not self.incremental:
            return np.einsum("ki,ki->k", S @ p.J, S) + p.offset
        cols = np.flatnonzero((S != self.S).any(axis=0))
        if cols.size > p.n // 4:
            self.H = S @ p.J
        elif cols.size:
            self.H += (S[:, cols] - self.S[:, cols]) @ p.J[cols, :]
        self.S = S.copy()
        return np.einsum("ki,ki->k", self.H, S) + p.offset


def bsb_integrate(p: IsingProblem, params: BsbParams, x0: np.ndarray, y0: np.ndarray,
                  *, restart_indices=None, record: bool = False) -> BsbRun:
    """Integrate a batch of trajectories from explicit initial states.

    ``x0`` and ``y0`` have shape ``(R, n)``.  Best-so-far sign configurations
    are tracked after every step.
    """
    x = np.array(x0, dtype=np.float64, ndmin=2)
    y = np.array(y0, dtype=np.float64, ndmin=2)
    R, n = x.shape
    if n != p.n or y.shape != x.shape:
        raise InputError(f"initial state shape {x.shape} does not match n={p.n}")
    if restart_indices is None:
        restart_indices = np.arange(R)
    restart_indices = np.asarray(restart_indices)
    a0, dt, steps = params.a0, params.dt, int(params.steps)
    c0 = auto_c0(p, a0) if params.c0 is None else float(params.c0)
    J = p.J

    tracker = _SignEnergy(p, _signs(x + 0.0))
    best_e = np.full(R, np.inf)
    best_s = np.ones((R, n), dtype=np.int8)
    best_step = np.zeros(R, dtype=np.int64)
    a_trace = np.empty(steps) if record else None
    e_trace = np.empty((R, steps)) if record else None
    history = []

    x += 0.0  # -0.0 -> +0.0; the updates below never create a negative zero
    Jf = J * (-c0 * dt)
    for k in range(1, steps + 1):
        a_t = a0 * k / steps
        _advance(x, y, Jf, a0, dt, a_t)
        if not math.isfinite(y.sum()):
            raise NumericError(f"bSB momenta became non-finite at step {k}")
        S = _signs(x)
        e = tracker.update(S)
        better = e < best_e
        if better.any():
            best_e[better] = e[better]
            best_s[better] = S[better]
            best_step[better] = k
            if record:
                for r in np.flatnonzero(better):
                    history.append((int(restart_indices[r]), k,
                                    S[r].astype(np.int8), float(e[r])))
        if record:
            a_trace[k - 1] = a_t
            e_trace[:, k - 1] = e
    return BsbRun(restart_indices, best_e, best_s, best_step, c0,
                  a_trace, e_trace, history)


def bsb_run(p: IsingProblem, params: BsbParams, restart_indices=None,
            *, record: bool = False) -> BsbRun:
    """Run the restarts ``restart_indices`` (default ``range(params.restarts)``)."""
    if p.n < 1:
        raise InputError("empty problem")
    if restart_indices is None:
        restart_indices = range(int(params.restarts))
    restart_indices = np.asarray(list(restart_indices), dtype=np.int64)
    init = [initial_state(p.n, params.seed, r) for r in restart_indices]
    x0 = np.stack([xy[0] for xy in init])
    y0 = np.stack([xy[1] for xy in init])
    return bsb_integrate(p, params, x0, y0, restart_indices=restart_indices, record=record)


def best_of(p: IsingProblem, run: BsbRun, seed: int, params: dict | None = None) -> Solution:
    """Merge restarts: lowest energy wins, ties go to the lowest restart index."""
    # re-evaluate row by row so batch size cannot perturb ties through rounding
    energies = np.array([ising_energy(p, s) for s in run.best_config])
    r = int(np.lexsort((run.restart_indices, energies))[0])
    s = normalize_spins(run.best_config[r])
    return Solution(s, float(energies[r]), seed=seed,
                    restart_index=int(run.restart_indices[r]),
                    best_step=int(run.best_step[r]), params=params or {})


def bsb_solve(p: IsingProblem, params: BsbParams = BsbParams()) -> Solution:
    """Minimise the Ising energy of ``p`` with bSB.

    Returns the best sign configuration seen over all steps and restarts,
    reported with ``s_0 = +1`` (the energy is flip invariant).
    """
    run = bsb_run(p, params)
    return best_of(p, run, params.seed, params.as_dict(run.c0))


def write_trajectory_csv(run: BsbRun, restart: int, fh) -> None:
    """Write ``step,a_t,energy`` rows for one recorded restart."""
    if run.energies is None:
        raise InputError("run was not recorded")
    r = int(np.flatnonzero(run.restart_indices == restart)[0])
    fh.write("step,a_t,energy\n")
    for k, (a, e) in enumerate(zip(run.a_t, run.energies[r]), start=1):
        fh.write(f"{k},{float(a)!r},{float(e)!r}\n")
