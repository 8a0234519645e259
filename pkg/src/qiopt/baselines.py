"""Reference heuristics: Metropolis simulated annealing and random search."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numba
import numpy as np

from .errors import InputError
from .problems import IsingProblem, Solution, ising_energies, ising_energy, normalize_spins

# uniforms drawn per kernel call, bounds memory for large problems
_BLOCK_DRAWS = 1 << 20


@dataclass(frozen=True)
class SaParams:
    """Annealing controls.  ``beta_initial``/``beta_final`` of None pick
    :func:`auto_beta_range`."""

    sweeps: int = 500
    beta_initial: float | None = None
    beta_final: float | None = None
    restarts: int = 1
    seed: int = 0

    def __post_init__(self):
        if int(self.sweeps) < 1 or int(self.restarts) < 1:
            raise InputError("sweeps and restarts must be >= 1")
        if int(self.seed) < 0:
            raise InputError("seed must be non-negative")
        bi, bf = self.beta_initial, self.beta_final
        if bi is not None and not bi > 0:
            raise InputError("beta_initial must be positive")
        if bf is not None and not bf > 0:
            raise InputError("beta_final must be positive")
        if bi is not None and bf is not None and bf < bi:
            raise InputError("beta_final must be >= beta_initial")

    def as_dict(self, betas=None) -> dict:
        bi, bf = betas if betas is not None else (self.beta_initial, self.beta_final)
        return {"algo": "sa", "sweeps": int(self.sweeps), "beta_initial": bi,
                "beta_final": bf, "restarts": int(self.restarts), "seed": int(self.seed)}


def auto_beta_range(p: IsingProblem) -> tuple[float, float]:
    """Hot/cold inverse temperatures from the spread of single-flip costs.

    Hot: the largest possible flip cost is accepted with probability 1/2.
    Cold: the smallest non-zero coupling flip cost is accepted with
    probability 1/100.
    """
    absJ = np.abs(p.J)
    max_de = 4.0 * float(absJ.sum(axis=1).max())
    nz = absJ[absJ > 0]
    if max_de == 0.0 or nz.size == 0:
        return 1.0, 1.0
    min_de = 4.0 * float(nz.min())
    hot = math.log(2.0) / max_de
    cold = math.log(100.0) / min_de
    return hot, max(hot, cold)


def geometric_betas(beta_initial: float, beta_final: float, sweeps: int) -> np.ndarray:
    if sweeps == 1 or beta_initial == beta_final:
        return np.full(sweeps, float(beta_final))
    return np.geomspace(beta_initial, beta_final, sweeps)


def flip_delta(p: IsingProblem, s: np.ndarray, i: int) -> float:
    """Energy change from flipping spin ``i`` of ``s``.

    Equals ``4 s'_i sum_j J_ij s_j`` with ``s'_i = -s_i`` the flipped value.
    """
    return -4.0 * float(s[i]) * float(p.J[i] @ s)


@numba.njit(cache=True)
def _anneal_block(J, s, h, energy, betas, u, best_s, best_e, trace):
    """Metropolis sweeps in place; ``h`` is the local field ``J @ s``.

    Returns the updated (energy, best_energy, best_sweep offset or -1).
    """
    n = s.shape[0]
    best_sweep = -1
    k = 0
    for t in range(betas.shape[0]):
        beta = betas[t]
        for i in range(n):
            de = -4.0 * s[i] * h[i]
            if de <= 0.0 or u[k] < math.exp(-beta * de):
                s_old = s[i]
                s[i] = -s_old
                for j in range(n):
                    h[j] -= 2.0 * s_old * J[j, i]
                energy += de
            k += 1
        trace[t] = energy
        if energy < best_e:
            best_e = energy
            best_s[:] = s
            best_sweep = t
    return energy, best_e, best_sweep


def sa_restart(p: IsingProblem, params: SaParams, restart: int, betas=None):
    """One annealing run; returns (best spins, best energy, best sweep, trace).

    ``trace`` holds the current energy at the end of every sweep.
    """
    if betas is None:
        bi, bf = _betas(p, params)
        betas = geometric_betas(bi, bf, int(params.sweeps))
    n = p.n
    rng = np.random.default_rng([int(params.seed), int(restart)])
    s = rng.choice(np.array([-1.0, 1.0]), size=n)
    J = np.ascontiguousarray(p.J)
    h = J @ s
    energy = float(s @ h) + p.offset
    best_s = s.copy()
    best_e = energy
    best_sweep = 0
    trace = np.empty(betas.shape[0])
    per_block = max(1, _BLOCK_DRAWS // n)
    for start in range(0, betas.shape[0], per_block):
        bblock = betas[start:start + per_block]
        u = rng.random(bblock.shape[0] * n)
        energy, best_e, off = _anneal_block(J, s, h, energy, bblock, u, best_s,
                                            best_e, trace[start:start + per_block])
        if off >= 0:
            best_sweep = start + off + 1
    return best_s.astype(np.int8), best_e, best_sweep, trace


def _betas(p: IsingProblem, params: SaParams):
    auto = auto_beta_range(p)
    bi = auto[0] if params.beta_initial is None else float(params.beta_initial)
    bf = auto[1] if params.beta_final is None else float(params.beta_final)
    if bf < bi:
        bf = bi
    return bi, bf


def sa_solve(p: IsingProblem, params: SaParams = SaParams()) -> Solution:
    """Best configuration over independent annealing restarts.

    The reported spins are normalised to ``s_0 = +1``; ties between
    restarts go to the lowest restart index.
    """
    bi, bf = _betas(p, params)
    betas = geometric_betas(bi, bf, int(params.sweeps))
    best = None
    for r in range(int(params.restarts)):
        s, e, sweep, _ = sa_restart(p, params, r, betas)
        if best is None or e < best[1]:
            best = (s, e, sweep, r)
    s = normalize_spins(best[0])
    return Solution(s, ising_energy(p, s), seed=int(params.seed), restart_index=best[3],
                    best_step=best[2], params=params.as_dict((bi, bf)))


def random_search(p: IsingProblem, samples: int, seed: int = 0) -> Solution:
    """Best of ``samples`` uniformly random spin configurations."""
    samples = int(samples)
    if samples < 1:
        raise InputError("samples must be >= 1")
    if int(seed) < 0:
        raise InputError("seed must be non-negative")
    rng = np.random.default_rng(int(seed))
    chunk = max(1, _BLOCK_DRAWS // p.n)
    best_e, best_s, best_k = np.inf, None, 0
    for start in range(0, samples, chunk):
        m = min(chunk, samples - start)
        S = rng.choice(np.array([-1, 1], dtype=np.int8), size=(m, p.n))
        e = ising_energies(p, S)
        k = int(np.argmin(e))
        if e[k] < best_e:
            best_e, best_s, best_k = e[k], S[k], start + k
    s = normalize_spins(best_s)
    return Solution(s, ising_energy(p, s), seed=int(seed), best_step=best_k,
                    params={"algo": "random", "samples": samples, "seed": int(seed)})
