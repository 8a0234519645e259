"""
Spike-and-exponential relaxation of a binary variable
=====================================================

Draw relaxed samples through the inverse CDF and through the
reparametrised form driven by a probability q.
"""

import numpy as np

from qiopt.relaxation import (RelaxationParams, binarize, inverse_cdf_sample, reparam_grad,
                              reparam_sample, spike_exp_cdf)

rng = np.random.default_rng(0)
for beta in (1.0, 8.0, 32.0):
    prm = RelaxationParams(beta)
    zeta = inverse_cdf_sample(rng.random(100_000), 1, prm)
    print(f"beta={beta:5.1f}: mean zeta {zeta.mean():.4f}, P(zeta > 0.9) = {(zeta > 0.9).mean():.4f}, "
          f"CDF(0.5) = {spike_exp_cdf(0.5, 1, prm):.4f}")

# q is the probability that the underlying bit is 1
q = 0.3
rho = rng.random(100_000)
zeta = reparam_sample(np.full_like(rho, q), rho)
print(f"\nq={q}: fraction on the exponential branch {binarize(np.full_like(rho, q), rho).mean():.4f}")
print(f"      fraction of exact zeros             {(zeta == 0).mean():.4f}")

# the pathwise derivative on the smooth branch
for r in (0.75, 0.9, 0.99):
    print(f"d zeta / d q at q={q}, rho={r}: {reparam_grad(q, r):.4f}")
