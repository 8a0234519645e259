import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qiopt.baselines import (SaParams, auto_beta_range, flip_delta, geometric_betas,
                             random_search, sa_restart, sa_solve)
from qiopt.errors import InputError
from qiopt.problems import (IsingProblem, brute_force_ground_state, ising_energy,
                            random_ising)


class TestParams:
    def test_rejects_reversed_betas(self):
        with pytest.raises(InputError):
            SaParams(beta_initial=2.0, beta_final=1.0)

    @pytest.mark.parametrize("kw", [{"sweeps": 0}, {"restarts": 0}, {"beta_initial": 0.0}])
    def test_rejects_invalid(self, kw):
        with pytest.raises(InputError):
            SaParams(**kw)

    def test_geometric(self):
        b = geometric_betas(0.1, 10.0, 3)
        np.testing.assert_allclose(b, [0.1, 1.0, 10.0])
        assert np.all(np.diff(np.log(geometric_betas(0.3, 7.0, 50))) > 0)

    def test_auto_range(self):
        p = random_ising(10, 0)
        hot, cold = auto_beta_range(p)
        assert 0 < hot < cold
        assert hot == pytest.approx(np.log(2) / (4 * np.abs(p.J).sum(axis=1).max()))


class TestFlipDelta:
    @settings(max_examples=60, deadline=None)
    @given(st.integers(1, 16), st.integers(0, 2**31 - 1))
    def test_matches_full_recompute(self, n, seed):
        p = random_ising(n, seed)
        rng = np.random.default_rng(seed)
        s = rng.choice([-1, 1], size=n)
        i = int(rng.integers(n))
        t = s.copy()
        t[i] = -t[i]
        assert flip_delta(p, s, i) == pytest.approx(ising_energy(p, t) - ising_energy(p, s),
                                                    abs=1e-9)


class TestAnneal:
    def test_pair(self):
        sol = sa_solve(IsingProblem([[0.0, 1.0], [1.0, 0.0]]))
        assert sol.energy == -2.0 and sol.config.tolist() == [1, -1]

    def test_greedy_limit_never_increases(self):
        # at infinite beta only downhill or neutral flips are accepted
        p = random_ising(14, 3)
        _, _, _, trace = sa_restart(p, SaParams(sweeps=20), 0, betas=np.full(20, np.inf))
        assert np.all(np.diff(trace) <= 1e-12)

    def test_trace_is_current_energy(self):
        p = random_ising(8, 1)
        s, e, sweep, trace = sa_restart(p, SaParams(sweeps=50), 2)
        assert e <= trace.min() + 1e-12
        assert e == pytest.approx(ising_energy(p, s), abs=1e-9)
        assert 0 <= sweep <= 50

    def test_best_so_far_non_increasing(self):
        p = random_ising(12, 5)
        _, _, _, trace = sa_restart(p, SaParams(sweeps=200), 0)
        best = np.minimum.accumulate(trace)
        assert np.all(np.diff(best) <= 0)

    @pytest.mark.parametrize("seed", range(5))
    def test_small_instances_exact(self, seed):
        p = random_ising(10, seed)
        sol = sa_solve(p, SaParams(restarts=16))
        assert sol.energy == pytest.approx(brute_force_ground_state(p).energy, abs=1e-12)

    def test_deterministic(self):
        p = random_ising(16, 4)
        prm = SaParams(restarts=3, sweeps=100, seed=11)
        assert sa_solve(p, prm).to_json() == sa_solve(p, prm).to_json()

    def test_seed_changes_stream(self):
        p = random_ising(30, 4)
        a = sa_restart(p, SaParams(sweeps=5, seed=0), 0)[3]
        b = sa_restart(p, SaParams(sweeps=5, seed=1), 0)[3]
        assert not np.array_equal(a, b)


class TestRandomSearch:
    def test_finds_optimum_when_exhaustive_enough(self):
        p = random_ising(6, 2)
        sol = random_search(p, 5000, seed=0)
        assert sol.energy == pytest.approx(brute_force_ground_state(p).energy, abs=1e-12)

    def test_deterministic(self):
        p = random_ising(20, 2)
        assert random_search(p, 300, 5).to_json() == random_search(p, 300, 5).to_json()

    @pytest.mark.parametrize("samples,seed", [(0, 0), (10, -1)])
    def test_invalid(self, samples, seed):
        with pytest.raises(InputError):
            random_search(random_ising(3, 0), samples, seed)
