"""Quantum-inspired optimisation over binary vectors.

Ising/QUBO problems, ballistic simulated bifurcation, baseline heuristics,
a factorization surrogate that compiles to a QUBO, the spike-and-exponential
relaxation and a restricted Boltzmann machine.
"""

from .baselines import SaParams, random_search, sa_solve
from .bsb import BsbParams, BsbState, bsb_solve, bsb_step, linear_schedule
from .errors import CapacityError, FormatError, InputError, NumericError, QioptError
from .pipeline import (PipelineConfig, RankedCandidates, optimize_property, scalarize,
                       synthetic_oracle)
from .problems import (Direction, IsingProblem, QuboProblem, Solution, bits_to_spins,
                       brute_force_ground_state, ising_energy, maxcut_to_ising, qubo_to_ising,
                       qubo_value, spins_to_bits)
from .rbm import RbmModel, cd_update, exact_distribution, gibbs_step, rbm_energy, rbm_sample
from .relaxation import (RelaxationParams, binarize, inverse_cdf_sample, reparam_grad,
                         reparam_sample, spike_exp_cdf)
from .surrogate import FactorModel, PropertyDataset, fm_fit, fm_predict, fm_to_qubo

__version__ = "0.1.0"
