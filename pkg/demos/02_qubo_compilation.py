"""
From QUBO to Ising and back
===========================

A QUBO over bits q becomes an Ising problem over spins with one extra
ancilla spin pinned to +1.  Every bit vector keeps its value.
"""

import itertools

from qiopt import QuboProblem, brute_force_ground_state, bsb_solve, qubo_to_ising
from qiopt.problems import decode_ancilla, ising_energy, qubo_value

Q = [[-1.0, 2.0, 0.0],
     [2.0, -1.0, 0.5],
     [0.0, 0.5, -2.0]]
qubo = QuboProblem(Q)
ising = qubo_to_ising(qubo)
print("ancilla couplings J[0, 1:]:", ising.J[0, 1:])
print("offset:", ising.offset)

# the identity holds for all 8 bit vectors
for q in itertools.product((0, 1), repeat=3):
    s = [1] + [2 * b - 1 for b in q]
    print(q, qubo_value(qubo, q), ising_energy(ising, s))

# solve the Ising form and read the bits back
sol = bsb_solve(ising)
bits = decode_ancilla(sol.config)
print("bSB bits", bits, "value", qubo_value(qubo, bits))
print("exact   ", brute_force_ground_state(qubo).config)

# maximisation negates Q before compiling, so minimum energy = maximum value
best = brute_force_ground_state(QuboProblem(Q, "max"))
print("argmax", best.config, "value", best.energy)
