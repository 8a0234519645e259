"""
A restricted Boltzmann machine as a plausibility model
======================================================

Train a tiny RBM with contrastive divergence, compare Gibbs samples with
the exact distribution, and rank vectors by free energy.
"""

import numpy as np

from qiopt.rbm import (RbmModel, all_states, exact_distribution, free_energy, gibbs_kernel,
                       rbm_sample, rbm_train)

# patterns the model should learn
data = np.array([[1, 1, 0, 0], [0, 0, 1, 1]] * 32, dtype=np.uint8)
model = rbm_train(RbmModel.random(4, 3, seed=0), data, epochs=200, batch_size=16, lr=0.05,
                  seed=0)

pi = exact_distribution(model)
print("most probable visible states:")
for i in np.argsort(pi)[::-1][:4]:
    print(" ", all_states(4)[i], f"{pi[i]:.3f}")

# the exact Gibbs kernel leaves the model distribution invariant
P = gibbs_kernel(model)
print(f"\n||pi P - pi||_1 = {np.abs(pi @ P - pi).sum():.2e}")

# chains agree with the enumeration
def sample_tv(m):
    s = rbm_sample(m, chains=8, burn_in=200, thin=2, count=20_000, seed=1)
    emp = np.bincount(s.astype(int) @ (1 << np.arange(3, -1, -1)), minlength=16) / len(s)
    return 0.5 * np.abs(emp - exact_distribution(m)).sum()


print(f"total variation, samples vs exact: {sample_tv(model):.4f}")

# longer training sharpens the two modes; block Gibbs then crosses between
# them rarely and a few chains no longer balance the modes
sharp = rbm_train(model, data, epochs=1300, batch_size=16, lr=0.05, seed=0)
print(f"after more training:               {sample_tv(sharp):.4f}")

# free energy as a plausibility score: lower is more plausible
for v in ([1, 1, 0, 0], [1, 0, 1, 0], [0, 0, 0, 0]):
    print(v, f"F = {free_energy(model, v):.3f}")
