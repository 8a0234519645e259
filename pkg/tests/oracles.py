"""Slow reference implementations used as independent test oracles.

Everything here uses plain Python loops and itertools so it shares no
code path with the vectorised library.
"""

import itertools


def ising_energy_terms(J, s, offset=0.0):
    n = len(s)
    total = 0.0
    for i in range(n):
        for j in range(n):
            total += J[i][j] * s[i] * s[j]
    return total + offset


def qubo_value_terms(Q, q):
    n = len(q)
    return sum(Q[i][j] * q[i] * q[j] for i in range(n) for j in range(n))


def enumerate_ising(J, offset=0.0):
    """Minimum energy over all spin configurations (no symmetry reduction)."""
    n = len(J)
    best = None
    for s in itertools.product((-1, 1), repeat=n):
        e = ising_energy_terms(J, s, offset)
        if best is None or e < best[0]:
            best = (e, s)
    return best


def enumerate_qubo(Q, maximize=False):
    n = len(Q)
    best = None
    for q in itertools.product((0, 1), repeat=n):
        v = qubo_value_terms(Q, q)
        if best is None or (v > best[0] if maximize else v < best[0]):
            best = (v, q)
    return best


def factor_triple_sum(V, q):
    """Surrogate value written as sum_i sum_j sum_k v_ik v_jk q_i q_j."""
    n, K = len(V), len(V[0])
    return sum(V[i][k] * V[j][k] * q[i] * q[j]
               for i in range(n) for j in range(n) for k in range(K))


def cut_by_edges(edges, s):
    return sum((e[2] if len(e) > 2 else 1.0) for e in edges if s[e[0]] != s[e[1]])
