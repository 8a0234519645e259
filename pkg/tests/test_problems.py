import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import (cut_by_edges, enumerate_ising, enumerate_qubo, ising_energy_terms,
                     qubo_value_terms)
from qiopt.errors import CapacityError, InputError
from qiopt.problems import (Direction, IsingProblem, QuboProblem, Solution, bits_to_spins,
                            brute_force_ground_state, cut_from_energy, cut_value,
                            decode_ancilla, ising_energy, maxcut_to_ising, qubo_to_ising,
                            qubo_value, random_ising, random_qubo, spins_to_bits)


def _pair(j):
    return IsingProblem([[0.0, j], [j, 0.0]])


class TestTypes:
    def test_ising_rejects_asymmetric(self):
        with pytest.raises(InputError):
            IsingProblem([[0.0, 1.0], [0.5, 0.0]])

    def test_ising_rejects_diagonal(self):
        with pytest.raises(InputError):
            IsingProblem([[1.0, 0.0], [0.0, 0.0]])

    def test_rejects_non_finite(self):
        with pytest.raises(InputError):
            QuboProblem([[np.nan]])

    def test_immutable(self):
        p = _pair(1.0)
        with pytest.raises(ValueError):
            p.J[0, 1] = 3.0

    def test_direction_parse(self):
        assert Direction.parse("Maximize") is Direction.MAXIMIZE
        with pytest.raises(InputError):
            Direction.parse("sideways")

    def test_solution_json_roundtrip(self):
        sol = Solution(np.array([1, -1], dtype=np.int8), -2.0, seed=3, restart_index=1,
                       best_step=7)
        back = Solution.from_dict(sol.to_dict())
        assert back.to_json() == sol.to_json()
        assert set(sol.to_dict()) == {"energy", "config", "seed", "restart_index", "best_step"}


class TestIsingEnergy:
    def test_zero_coupling(self):
        assert ising_energy(IsingProblem(np.zeros((3, 3))), [1, -1, 1]) == 0.0

    def test_pair_counted_twice(self):
        assert ising_energy(_pair(0.5), [1, 1]) == 1.0

    def test_matches_term_enumeration(self):
        p = random_ising(3, seed=11)
        s = [1, -1, 1]
        assert ising_energy(p, s) == pytest.approx(ising_energy_terms(p.J, s), rel=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(InputError):
            ising_energy(_pair(1.0), [1, 1, 1])

    def test_rejects_non_spin(self):
        with pytest.raises(InputError):
            ising_energy(_pair(1.0), [1, 0])

    @settings(max_examples=50, deadline=None)
    @given(st.integers(1, 10), st.integers(0, 2**31 - 1))
    def test_global_flip_symmetry(self, n, seed):
        p = random_ising(n, seed)
        s = np.random.default_rng(seed).choice([-1, 1], size=n)
        assert ising_energy(p, s) == pytest.approx(ising_energy(p, -s), abs=1e-12)


class TestQuboValue:
    def test_zero_vector(self):
        assert qubo_value(random_qubo(4, 1), [0, 0, 0, 0]) == 0.0

    def test_hand_example(self):
        assert qubo_value(QuboProblem([[1, 2], [2, 4]]), [1, 1]) == 9.0

    def test_matches_term_enumeration(self):
        p = random_qubo(4, seed=5)
        q = np.random.default_rng(2).integers(0, 2, 4)
        assert qubo_value(p, q) == pytest.approx(qubo_value_terms(p.Q, q), rel=1e-12)

    def test_direction_does_not_change_value(self):
        Q = [[1, 2], [2, 4]]
        assert qubo_value(QuboProblem(Q, "max"), [1, 1]) == qubo_value(QuboProblem(Q), [1, 1])

    def test_dimension_mismatch(self):
        with pytest.raises(InputError):
            qubo_value(QuboProblem([[1.0]]), [1, 0])


def _embed(q):
    return np.concatenate([[1], 2 * np.asarray(q) - 1])


class TestQuboToIsing:
    def test_zero(self):
        p = qubo_to_ising(QuboProblem(np.zeros((3, 3))))
        assert p.n == 4
        assert np.all(p.J == 0) and p.offset == 0.0

    @pytest.mark.parametrize("n,seed", [(2, None), (8, 3)])
    def test_exhaustive_identity(self, n, seed):
        p = QuboProblem([[1, 2], [2, 4]]) if seed is None else random_qubo(n, seed)
        ising = qubo_to_ising(p)
        for q in itertools.product((0, 1), repeat=n):
            assert ising_energy(ising, _embed(q)) == pytest.approx(
                qubo_value(p, q), rel=1e-9, abs=1e-12)

    def test_maximize_negates(self):
        p = random_qubo(5, 9, Direction.MAXIMIZE)
        ising = qubo_to_ising(p)
        for q in itertools.product((0, 1), repeat=5):
            assert ising_energy(ising, _embed(q)) == pytest.approx(-qubo_value(p, q), abs=1e-12)

    def test_decode_ancilla_handles_flip(self):
        s = np.array([-1, 1, -1, -1])
        assert decode_ancilla(s).tolist() == [0, 1, 1]


class TestConversions:
    def test_spins_to_bits(self):
        assert spins_to_bits([1, -1]).tolist() == [1, 0]

    def test_bits_to_spins(self):
        assert bits_to_spins([0, 1, 1]).tolist() == [-1, 1, 1]

    def test_roundtrip(self):
        q = np.random.default_rng(0).integers(0, 2, 64)
        assert np.array_equal(spins_to_bits(bits_to_spins(q)), q)


class TestBruteForce:
    def test_antiferromagnet(self):
        sol = brute_force_ground_state(_pair(1.0))
        assert sol.energy == -2.0
        assert sol.config.tolist() == [1, -1]

    def test_ferromagnet(self):
        sol = brute_force_ground_state(_pair(-1.0))
        assert sol.energy == -2.0
        assert sol.config.tolist() == [1, 1]

    def test_single_spin(self):
        sol = brute_force_ground_state(IsingProblem([[0.0]]))
        assert sol.config.tolist() == [1] and sol.energy == 0.0

    def test_matches_independent_enumeration(self):
        p = random_ising(12, seed=21)
        expected, _ = enumerate_ising(p.J.tolist())
        assert brute_force_ground_state(p).energy == pytest.approx(expected, rel=1e-12)

    def test_partitioning_does_not_matter(self):
        p = random_ising(12, seed=4)
        a = brute_force_ground_state(p, chunk_bits=3)
        b = brute_force_ground_state(p, chunk_bits=16)
        assert np.array_equal(a.config, b.config) and a.energy == b.energy

    def test_lexicographic_tie_break(self):
        # all zero couplings: every configuration ties
        sol = brute_force_ground_state(IsingProblem(np.zeros((3, 3))))
        assert sol.config.tolist() == [1, -1, -1]
        qsol = brute_force_ground_state(QuboProblem(np.zeros((3, 3))))
        assert qsol.config.tolist() == [0, 0, 0]

    @pytest.mark.parametrize("direction", ["min", "max"])
    def test_qubo_matches_enumeration(self, direction):
        p = random_qubo(8, 12, direction)
        expected, _ = enumerate_qubo(p.Q.tolist(), maximize=direction == "max")
        assert brute_force_ground_state(p).energy == pytest.approx(expected, rel=1e-12)

    @pytest.mark.parametrize("seed", range(5))
    def test_compiled_qubo_same_optimum(self, seed):
        p = random_qubo(10, seed)
        direct = brute_force_ground_state(p)
        via = brute_force_ground_state(qubo_to_ising(p))
        assert via.energy == pytest.approx(direct.energy, rel=1e-9, abs=1e-12)
        assert qubo_value(p, decode_ancilla(via.config)) == pytest.approx(direct.energy, abs=1e-12)

    def test_capacity(self):
        with pytest.raises(CapacityError):
            brute_force_ground_state(IsingProblem(np.zeros((25, 25))))


class TestMaxCut:
    def test_single_edge(self):
        edges = [(0, 1, 1.0)]
        p = maxcut_to_ising(edges, 2)
        assert cut_from_energy(p, ising_energy(p, [1, -1])) == 1.0

    def test_five_cycle(self):
        edges = [(i, (i + 1) % 5) for i in range(5)]
        p = maxcut_to_ising(edges, 5)
        best = max(cut_by_edges(edges, s) for s in itertools.product((-1, 1), repeat=5))
        assert best == 4
        assert cut_from_energy(p, brute_force_ground_state(p).energy) == 4.0

    def test_k4(self):
        edges = list(itertools.combinations(range(4), 2))
        p = maxcut_to_ising(edges, 4)
        best = max(cut_by_edges(edges, s) for s in itertools.product((-1, 1), repeat=4))
        assert best == 4
        assert cut_from_energy(p, brute_force_ground_state(p).energy) == 4.0

    @pytest.mark.parametrize("bad", [[(0, 0, 1.0)], [(0, 5, 1.0)], [(-1, 1)]])
    def test_bad_edges(self, bad):
        with pytest.raises(InputError):
            maxcut_to_ising(bad, 3)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(2, 16), st.integers(0, 2**31 - 1))
    def test_cut_identity(self, n, seed):
        rng = np.random.default_rng(seed)
        edges = [(i, j, int(rng.integers(-3, 4))) for i in range(n) for j in range(i + 1, n)
                 if rng.random() < 0.4]
        p = maxcut_to_ising(edges, n)
        s = rng.choice([-1, 1], size=n)
        w_total = sum(e[2] for e in edges)
        assert cut_value(edges, s) == (w_total - ising_energy(p, s)) / 2
        assert cut_by_edges(edges, s) == cut_value(edges, s)
