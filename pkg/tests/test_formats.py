import json

import numpy as np
import pytest

from qiopt.errors import FormatError, InputError
from qiopt.formats import (factor_model_from_dict, factor_model_to_dict, format_dataset,
                           format_problem, load_json, load_problem, parse_dataset,
                           parse_problem, rbm_from_dict, rbm_to_dict)
from qiopt.problems import (Direction, IsingProblem, QuboProblem, qubo_to_ising,
                            random_ising, random_qubo)
from qiopt.rbm import RbmModel
from qiopt.surrogate import FactorModel, PropertyDataset, TargetTransform


class TestProblemFiles:
    def test_fixture(self, data_dir):
        p = load_problem(data_dir / "antiferro2.txt")
        assert isinstance(p, IsingProblem)
        assert p.J.tolist() == [[0.0, 1.0], [1.0, 0.0]]

    def test_qubo_header(self):
        p = parse_problem("qubo 2 max\n0 0 1.5\n0 1 -2\n")
        assert p.direction is Direction.MAXIMIZE
        assert p.Q.tolist() == [[1.5, -2.0], [-2.0, 0.0]]

    def test_qubo_defaults_to_min(self):
        assert parse_problem("qubo 1\n").direction is Direction.MINIMIZE

    @pytest.mark.parametrize("p", [random_ising(7, 3), random_qubo(6, 2, "max")])
    def test_round_trip_is_exact(self, p):
        back = parse_problem(format_problem(p))
        M, N = (p.J, back.J) if isinstance(p, IsingProblem) else (p.Q, back.Q)
        assert np.array_equal(M, N)
        assert format_problem(back) == format_problem(p)

    @pytest.mark.parametrize("text", [
        "",
        "ising\n",
        "potts 3\n",
        "ising 0\n",
        "ising 2\n0 1\n",
        "ising 2\n1 0 1.0\n",
        "ising 2\n0 2 1.0\n",
        "ising 2\n0 1 nan\n",
        "ising 2\n0 1 1.0\n0 1 2.0\n",
        "ising 2\n0 0 1.0\n",
        "qubo 2 sideways\n",
    ])
    def test_malformed(self, text):
        with pytest.raises(FormatError):
            parse_problem(text)

    def test_error_names_line(self):
        with pytest.raises(FormatError, match="line 3"):
            parse_problem("# c\nising 2\n0 x 1\n")

    def test_missing_file(self, tmp_path):
        with pytest.raises(FormatError):
            load_problem(tmp_path / "nope.txt")

    def test_offset_not_representable(self):
        with pytest.raises(InputError):
            format_problem(qubo_to_ising(QuboProblem([[1.0]])))


class TestDatasets:
    def test_parse(self):
        d = parse_dataset("b0,b1,qed,pic50\n0,1,0.5,7\n1,1,0.9,8\n")
        assert d.n == 2 and d.names == ["qed", "pic50"]
        assert d.targets.tolist() == [[0.5, 7.0], [0.9, 8.0]]

    def test_round_trip(self):
        d = PropertyDataset(np.eye(3, dtype=np.uint8), [0.1, 1 / 3, -2.5], ["y"])
        back = parse_dataset(format_dataset(d))
        assert np.array_equal(back.bits, d.bits)
        assert np.array_equal(back.targets, d.targets)

    @pytest.mark.parametrize("text", [
        "b0,y\n",
        "x,y\n0,1\n",
        "b0,b1\n0,1\n",
        "b0,y\n2,1\n",
        "b0,y\n0,abc\n",
        "b0,y\n0\n",
        "b0,y\n0,inf\n",
    ])
    def test_malformed(self, text):
        with pytest.raises(FormatError):
            parse_dataset(text)


class TestModels:
    def test_factor_model(self):
        m = FactorModel(np.arange(6.0).reshape(3, 2), TargetTransform(-2.0, 0.5))
        d = json.loads(json.dumps(factor_model_to_dict(m)))
        assert d["V"] == [0.0, 1.0, 2.0, 3.0, 4.0, 5.0]
        back = factor_model_from_dict(d)
        assert np.array_equal(back.V, m.V) and back.transform == m.transform

    def test_rbm(self):
        m = RbmModel.random(3, 2, seed=1)
        back = rbm_from_dict(json.loads(json.dumps(rbm_to_dict(m))))
        assert np.array_equal(back.W, m.W) and np.array_equal(back.b_v, m.b_v)

    @pytest.mark.parametrize("d", [{}, {"n": 2, "K": 2, "V": [1.0]}])
    def test_bad_factor_model(self, d):
        with pytest.raises(FormatError):
            factor_model_from_dict(d)

    def test_bad_rbm(self):
        with pytest.raises(FormatError):
            rbm_from_dict({"n_v": 2, "n_h": 1, "W": [0.0], "b_v": [0, 0], "b_h": [0]})

    def test_bad_json(self, tmp_path):
        f = tmp_path / "m.json"
        f.write_text("{nope")
        with pytest.raises(FormatError):
            load_json(f)
