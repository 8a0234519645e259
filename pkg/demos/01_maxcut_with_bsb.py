"""
MAX-CUT with ballistic simulated bifurcation
============================================

Map a small graph to an Ising problem, solve it with bSB and check the
answer against exhaustive search.
"""

import numpy as np

from qiopt import BsbParams, brute_force_ground_state, bsb_solve
from qiopt.problems import cut_from_energy, cut_value, maxcut_to_ising

# a 7-cycle with one chord; odd cycles cannot be cut completely
edges = [(i, (i + 1) % 7) for i in range(7)] + [(0, 3)]
problem = maxcut_to_ising(edges, 7)
print("couplings J = w/2:\n", problem.J)

# 16 restarts of 1000 steps each; the seed fixes every restart's stream
sol = bsb_solve(problem, BsbParams(steps=1000, restarts=16, seed=0))
print("bSB spins      ", sol.config)
print("bSB energy     ", sol.energy)
print("cut from energy", cut_from_energy(problem, sol.energy))
print("cut by edges   ", cut_value(edges, sol.config))

# the same instance by exhaustive search
exact = brute_force_ground_state(problem)
print("exact energy   ", exact.energy, "-> cut", cut_from_energy(problem, exact.energy))

# a denser random graph, still small enough to verify
rng = np.random.default_rng(1)
n = 16
edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < 0.4]
problem = maxcut_to_ising(edges, n)
sol = bsb_solve(problem, BsbParams(restarts=32))
exact = brute_force_ground_state(problem)
print(f"\nG(16, 0.4): {len(edges)} edges, bSB cut {cut_from_energy(problem, sol.energy)}, "
      f"optimum {cut_from_energy(problem, exact.energy)}")
