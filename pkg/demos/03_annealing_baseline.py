"""
Simulated annealing and random search as baselines
===================================================

Compare bSB, simulated annealing and random sampling on spin glasses
whose ground states are known from enumeration.
"""

import time

from qiopt import BsbParams, SaParams, brute_force_ground_state, bsb_solve, sa_solve
from qiopt.baselines import auto_beta_range, random_search
from qiopt.problems import random_ising

p = random_ising(16, seed=3)
hot, cold = auto_beta_range(p)
print(f"automatic beta range: {hot:.3f} -> {cold:.3f}")

exact = brute_force_ground_state(p).energy
print(f"ground state energy {exact:.6f}")

for name, solve in [
    ("bSB", lambda: bsb_solve(p, BsbParams(restarts=32))),
    ("SA", lambda: sa_solve(p, SaParams(restarts=64, sweeps=500))),
    ("random", lambda: random_search(p, 20_000, seed=0)),
]:
    t0 = time.perf_counter()
    sol = solve()
    print(f"{name:7s} energy {sol.energy:.6f}  gap {sol.energy - exact:.2e}  "
          f"({time.perf_counter() - t0:.2f}s)")

# success rates over a batch of instances
hits = {"bSB": 0, "SA": 0}
for seed in range(20):
    p = random_ising(12, seed)
    e = brute_force_ground_state(p).energy
    hits["bSB"] += abs(bsb_solve(p, BsbParams(restarts=32)).energy - e) < 1e-9
    hits["SA"] += abs(sa_solve(p, SaParams(restarts=64)).energy - e) < 1e-9
print("exact on 20 instances:", hits)
