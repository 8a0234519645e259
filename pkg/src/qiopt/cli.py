"""Command-line interface: ``qiopt <subcommand> ...``.

Results go to stdout, diagnostics to stderr.  Exit codes: 0 success,
1 usage error, 2 malformed input file, 3 infeasible parameters,
4 numeric failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time

import numpy as np

from . import formats
from .baselines import SaParams, random_search, sa_solve
from .bsb import BsbParams, best_of, bsb_run, write_trajectory_csv
from .errors import CapacityError, FormatError, InputError, NumericError, QioptError
from .pipeline import (PipelineConfig, StageError, optimize_property, scalarize,
                       synthetic_oracle)
from .problems import (Direction, IsingProblem, QuboProblem, Solution, brute_force_ground_state,
                       cut_from_energy, decode_ancilla, maxcut_to_ising, qubo_to_ising,
                       qubo_value, random_ising, random_qubo)
from .rbm import RbmModel, rbm_sample, rbm_train
from .relaxation import RelaxationParams, inverse_cdf_sample, reparam_sample
from .surrogate import fit_transform, fm_fit, fm_to_qubo

log = logging.getLogger("qiopt")

EXIT_OK, EXIT_USAGE, EXIT_FORMAT, EXIT_INFEASIBLE, EXIT_NUMERIC = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        kwargs.setdefault("allow_abbrev", False)
        super().__init__(*args, **kwargs)

    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def _fmt(prog):
    return argparse.ArgumentDefaultsHelpFormatter(prog, max_help_position=32)


def _weights(text: str):
    try:
        return tuple(float(w) for w in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad weight list {text!r}") from None


def _bsb_flags(p):
    g = p.add_argument_group("bSB")
    g.add_argument("--a0", type=float, default=1.0, help="final control parameter")
    g.add_argument("--c0", type=float, default=None, help="coupling scale (default: auto)")
    g.add_argument("--dt", type=float, default=0.1, help="time step")
    g.add_argument("--steps", type=int, default=2000, help="integration steps")
    g.add_argument("--restarts", type=int, default=32, help="independent restarts")


def _bsb_params(a) -> BsbParams:
    return BsbParams(a0=a.a0, c0=a.c0, dt=a.dt, steps=a.steps, restarts=a.restarts, seed=a.seed)


def _fit_flags(p):
    g = p.add_argument_group("surrogate fit")
    g.add_argument("--K", type=int, default=8, help="factor rank")
    g.add_argument("--lr", type=float, default=1e-3, help="gradient-descent step")
    g.add_argument("--epochs", type=int, default=5000, help="full-batch epochs")
    g.add_argument("--init-scale", type=float, default=0.01, help="uniform init half-width")
    g.add_argument("--val-fraction", type=float, default=0.2, help="held-out fraction")
    g.add_argument("--weight-decay", type=float, default=0.0, help="L2 penalty on V")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qiopt", description=__doc__.splitlines()[0], formatter_class=_fmt)
    parser.add_argument("-v", "--verbose", action="store_true", help="log to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="solve an Ising/QUBO problem file", formatter_class=_fmt)
    p.add_argument("problem", help="problem file")
    p.add_argument("--algo", choices=["bsb", "sa", "random", "brute"], default="bsb")
    p.add_argument("--seed", type=int, default=0)
    _bsb_flags(p)
    g = p.add_argument_group("simulated annealing")
    g.add_argument("--sweeps", type=int, default=500)
    g.add_argument("--beta-initial", type=float, default=None, help="default: auto")
    g.add_argument("--beta-final", type=float, default=None, help="default: auto")
    g.add_argument("--sa-restarts", type=int, default=64)
    p.add_argument("--samples", type=int, default=100000, help="random search samples")
    p.add_argument("--cut", action="store_true", help="also report the MAX-CUT value")
    p.add_argument("--trajectory", metavar="CSV", default=None,
                   help="bSB only: write step,a_t,energy of the winning restart")

    p = sub.add_parser("fit", help="fit a surrogate (or RBM) to a dataset CSV", formatter_class=_fmt)
    p.add_argument("dataset")
    p.add_argument("--model", choices=["fm", "rbm"], default="fm")
    p.add_argument("--direction", choices=["min", "max"], default="max")
    p.add_argument("--weights", type=_weights, default=None, help="comma-separated target weights")
    p.add_argument("--seed", type=int, default=0)
    _fit_flags(p)
    g = p.add_argument_group("RBM")
    g.add_argument("--hidden", type=int, default=8)
    g.add_argument("--cd-k", type=int, default=1)
    g.add_argument("--rbm-lr", type=float, default=0.01)
    g.add_argument("--rbm-epochs", type=int, default=100)
    g.add_argument("--batch-size", type=int, default=32)

    p = sub.add_parser("compile", help="factor model JSON -> QUBO problem file", formatter_class=_fmt)
    p.add_argument("model")
    p.add_argument("--direction", choices=["min", "max"], default="max")

    p = sub.add_parser("optimize", help="dataset CSV -> ranked candidates (JSON lines)",
                       formatter_class=_fmt)
    p.add_argument("dataset")
    p.add_argument("--weights", type=_weights, default=None)
    p.add_argument("--direction", choices=["min", "max"], default="max")
    p.add_argument("--top-k", type=int, default=10)
    p.add_argument("--rbm-model", default=None, help="RBM JSON used as plausibility filter")
    p.add_argument("--keep-fraction", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    _fit_flags(p)
    _bsb_flags(p)

    p = sub.add_parser("sample", help="draw samples (relaxation or RBM)", formatter_class=_fmt)
    ss = p.add_subparsers(dest="what", required=True, parser_class=_Parser)
    r = ss.add_parser("relax", help="relaxed samples as CSV", formatter_class=_fmt)
    r.add_argument("--beta", type=float, default=8.0)
    r.add_argument("--mode", choices=["inverse", "reparam"], default="inverse")
    r.add_argument("--q", type=float, default=0.7, help="probability for --mode reparam")
    r.add_argument("--count", type=int, default=1000)
    r.add_argument("--seed", type=int, default=0)
    r = ss.add_parser("rbm", help="RBM Gibbs samples as CSV bits", formatter_class=_fmt)
    r.add_argument("--model", required=True)
    r.add_argument("--chains", type=int, default=8)
    r.add_argument("--burn-in", type=int, default=1000)
    r.add_argument("--thin", type=int, default=10)
    r.add_argument("--count", type=int, default=1000)
    r.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("gen", help="generate a seeded random instance", formatter_class=_fmt)
    p.add_argument("--kind", choices=["ising", "qubo", "maxcut", "dataset"], required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dist", choices=["uniform", "pm1"], default="uniform", help="Ising couplings")
    p.add_argument("--direction", choices=["min", "max"], default="min", help="QUBO direction")
    p.add_argument("--cycle", action="store_true", help="maxcut: cycle graph C_n")
    p.add_argument("--density", type=float, default=0.5, help="maxcut: edge probability")
    p.add_argument("--oracle", choices=["quadratic", "sparse-quadratic", "onemax"],
                   default="quadratic", help="dataset: property oracle")
    p.add_argument("--rows", type=int, default=2000, help="dataset: number of rows")

    p = sub.add_parser("bench", help="large MAX-CUT benchmark, bSB vs SA", formatter_class=_fmt)
    p.add_argument("--n", type=int, default=2000)
    p.add_argument("--steps", type=int, default=10000, help="bSB steps (= SA sweeps)")
    p.add_argument("--seeds", type=int, default=5)
    p.add_argument("--instance-seed", type=int, default=0)
    p.add_argument("--no-sa", action="store_true", help="skip the annealing baseline")
    return parser


# -- subcommands ------------------------------------------------------------

def _cmd_solve(a, out):
    prob = formats.load_problem(a.problem)
    ising = qubo_to_ising(prob) if isinstance(prob, QuboProblem) else prob
    run = None
    if a.algo == "brute":
        sol = brute_force_ground_state(prob)
    elif a.algo == "bsb":
        params = _bsb_params(a)
        run = bsb_run(ising, params, record=a.trajectory is not None)
        sol = best_of(ising, run, a.seed, params.as_dict(run.c0))
    elif a.algo == "sa":
        sol = sa_solve(ising, SaParams(sweeps=a.sweeps, beta_initial=a.beta_initial,
                                       beta_final=a.beta_final, restarts=a.sa_restarts,
                                       seed=a.seed))
    else:
        sol = random_search(ising, a.samples, a.seed)
    if isinstance(prob, QuboProblem) and a.algo != "brute":
        bits = decode_ancilla(sol.config)
        sol = Solution(bits, qubo_value(prob, bits), sol.seed, sol.restart_index,
                       sol.best_step, sol.params)
    d = sol.to_dict()
    if a.cut:
        if not isinstance(prob, IsingProblem):
            raise InputError("--cut needs an Ising problem")
        d["cut"] = cut_from_energy(prob, sol.energy)
    if run is not None and a.trajectory:
        with open(a.trajectory, "w", encoding="utf-8") as fh:
            write_trajectory_csv(run, sol.restart_index, fh)
    out.write(formats.dump_json(d) + "\n")


def _cmd_fit(a, out):
    data = formats.load_dataset(a.dataset)
    if a.model == "rbm":
        m = rbm_train(RbmModel.random(data.n, a.hidden, seed=a.seed), data.bits,
                      epochs=a.rbm_epochs, batch_size=a.batch_size, k=a.cd_k, lr=a.rbm_lr,
                      seed=a.seed)
        d = formats.rbm_to_dict(m)
        d["params"] = {"hidden": a.hidden, "cd_k": a.cd_k, "lr": a.rbm_lr,
                       "epochs": a.rbm_epochs, "batch_size": a.batch_size, "seed": a.seed}
    else:
        if a.weights is not None or data.targets.shape[1] > 1:
            data = scalarize(data, a.weights or (1.0,) * data.targets.shape[1])
        tr = fit_transform(data.target, a.direction)
        m = fm_fit(data, a.K, lr=a.lr, epochs=a.epochs, init_scale=a.init_scale, seed=a.seed,
                   val_fraction=a.val_fraction, weight_decay=a.weight_decay, transform=tr)
        d = formats.factor_model_to_dict(m)
        d["params"] = {"K": a.K, "lr": a.lr, "epochs": a.epochs, "init_scale": a.init_scale,
                       "val_fraction": a.val_fraction, "weight_decay": a.weight_decay,
                       "direction": a.direction, "seed": a.seed}
    out.write(formats.dump_json(d) + "\n")


def _cmd_compile(a, out):
    m = formats.factor_model_from_dict(formats.load_json(a.model))
    out.write(formats.format_problem(fm_to_qubo(m, a.direction)))


def _cmd_optimize(a, out):
    data = formats.load_dataset(a.dataset)
    rbm = None
    if a.rbm_model:
        rbm = formats.rbm_from_dict(formats.load_json(a.rbm_model))
    cfg = PipelineConfig(K=a.K, direction=a.direction, weights=a.weights,
                         solver=_bsb_params(a), top_k=a.top_k, rbm_model=rbm,
                         keep_fraction=a.keep_fraction if rbm is not None else 1.0,
                         seed=a.seed, lr=a.lr, epochs=a.epochs, init_scale=a.init_scale,
                         val_fraction=a.val_fraction, weight_decay=a.weight_decay)
    for c in optimize_property(data, cfg):
        out.write(formats.dump_json(c.to_dict()) + "\n")


def _cmd_sample(a, out):
    if a.what == "relax":
        params = RelaxationParams(a.beta)
        rng = np.random.default_rng(a.seed)
        if a.mode == "inverse":
            u = rng.random(a.count)
            zeta = inverse_cdf_sample(u, np.ones(a.count, dtype=np.int8), params)
            out.write("u,zeta\n")
            for ui, zi in zip(u, zeta):
                out.write(f"{float(ui)!r},{float(zi)!r}\n")
        else:
            if not 0.0 <= a.q <= 1.0:
                raise InputError("--q must be in [0, 1]")
            rho = rng.random(a.count)
            zeta = reparam_sample(np.full(a.count, a.q), rho, params)
            out.write("q,rho,zeta\n")
            for ri, zi in zip(rho, zeta):
                out.write(f"{a.q!r},{float(ri)!r},{float(zi)!r}\n")
        return
    m = formats.rbm_from_dict(formats.load_json(a.model))
    samples = rbm_sample(m, a.chains, a.burn_in, a.thin, a.count, a.seed)
    out.write(",".join(f"b{i}" for i in range(m.n_v)) + "\n")
    for row in samples:
        out.write(",".join(str(int(b)) for b in row) + "\n")


def _cmd_gen(a, out):
    if a.kind == "ising":
        out.write(formats.format_problem(random_ising(a.n, a.seed, dist=a.dist)))
    elif a.kind == "qubo":
        out.write(formats.format_problem(random_qubo(a.n, a.seed, Direction.parse(a.direction))))
    elif a.kind == "maxcut":
        if a.cycle:
            edges = [(i, (i + 1) % a.n) for i in range(a.n)]
            if a.n <= 2:
                edges = edges[:a.n - 1]
        else:
            rng = np.random.default_rng(a.seed)
            edges = [(i, j) for i in range(a.n) for j in range(i + 1, a.n)
                     if rng.random() < a.density]
        out.write("# maxcut: unit edge weights, cut = (W - E) / 2\n")
        out.write(formats.format_problem(maxcut_to_ising(edges, a.n)))
    else:
        oracle = synthetic_oracle(a.oracle, a.n, a.seed)
        out.write(formats.format_dataset(oracle.sample_dataset(a.rows, a.seed)))


def _cmd_bench(a, out):
    p = random_ising(a.n, a.instance_seed, dist="pm1")
    report = {"params": {"n": a.n, "steps": a.steps, "sa_sweeps": a.steps, "seeds": a.seeds,
                         "instance_seed": a.instance_seed, "dist": "pm1"},
              "bsb_cut": [], "sa_cut": []}
    for seed in range(a.seeds):
        t0 = time.perf_counter()
        s = best_of(p, bsb_run(p, BsbParams(steps=a.steps, restarts=1, seed=seed)), seed)
        log.info("bsb seed %d: %.2fs", seed, time.perf_counter() - t0)
        report["bsb_cut"].append(cut_from_energy(p, s.energy))
        if not a.no_sa:
            t0 = time.perf_counter()
            s = sa_solve(p, SaParams(sweeps=a.steps, restarts=1, seed=seed))
            log.info("sa seed %d: %.2fs", seed, time.perf_counter() - t0)
            report["sa_cut"].append(cut_from_energy(p, s.energy))
    report["bsb_mean_cut"] = float(np.mean(report["bsb_cut"]))
    if report["sa_cut"]:
        report["sa_mean_cut"] = float(np.mean(report["sa_cut"]))
    out.write(formats.dump_json(report) + "\n")


COMMANDS = {"solve": _cmd_solve, "fit": _cmd_fit, "compile": _cmd_compile,
            "optimize": _cmd_optimize, "sample": _cmd_sample, "gen": _cmd_gen,
            "bench": _cmd_bench}


def _exit_code(exc: Exception) -> int:
    if isinstance(exc, StageError) and exc.__cause__ is not None:
        exc = exc.__cause__
    if isinstance(exc, FormatError):
        return EXIT_FORMAT
    if isinstance(exc, NumericError):
        return EXIT_NUMERIC
    return EXIT_INFEASIBLE


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        parser.print_usage(stderr)
        stderr.write(f"{exc}\n")
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    handler = logging.StreamHandler(stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(message)s"))
    log.handlers[:] = [handler]
    log.setLevel(logging.INFO if args.verbose or args.command == "bench" else logging.WARNING)
    try:
        COMMANDS[args.command](args, stdout)
    except (QioptError, CapacityError) as exc:
        stderr.write(f"qiopt {args.command}: {exc}\n")
        return _exit_code(exc)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
