"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 validation or domain error,
3 solver did not converge. Data goes to stdout, warnings to stderr.
"""

from __future__ import annotations

import argparse
import logging
import sys
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .beliefs import (
    ExponentParams,
    PreferenceParams,
    entropy,
    exponential_update,
    exponents_to_preferences,
    preferences_to_exponents,
)
from .errors import BeliefError
from .estimation import SignalSequence, grether_fit, order_dependence, sequential_update, simulate_dataset
from .scenario import ScenarioFile, parse_scenario, read_dataset, write_dataset
from .solver import ObjectiveSpec, SolverConfig, crosscheck, solve_concave, variational_update

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_NOT_CONVERGED = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def fmt(x: float) -> str:
    return format(float(x), ".12g")


def _grid(text: str) -> np.ndarray:
    try:
        a, b, n = text.split(":")
        a, b, n = float(a), float(b), int(n)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a:b:n, got {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError("grid needs n >= 1 points")
    return np.linspace(a, b, n)


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="varbelief", description="Bayesian, exponential and variational belief updating.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    p = sub.add_parser("update", help="posterior under the scenario's rule")
    p.add_argument("--scenario", required=True)

    p = sub.add_parser("solve", help="numerical variational solve with closed-form crosscheck")
    p.add_argument("--scenario", required=True)
    p.add_argument("--tol", type=float, default=1e-13)
    p.add_argument("--max-iter", type=_positive_int, default=100_000)
    p.add_argument("--step", type=float, default=None, help="mirror-descent step (default 0.5/max(1,|1-mu|))")

    p = sub.add_parser("sweep", help="posterior over a (lambda, mu) grid")
    p.add_argument("--scenario", required=True)
    p.add_argument("--lambda", dest="lam", type=_grid, required=True, metavar="A:B:N")
    p.add_argument("--mu", type=_grid, required=True, metavar="C:D:M", help="write --mu=-1:0.5:4 for negative starts")

    p = sub.add_parser("sequence", help="fold the rule over a signal sequence and measure order dependence")
    p.add_argument("--scenario", required=True)
    p.add_argument("--signals", required=True, help="comma-separated signal labels")
    p.add_argument("--permutations", type=_positive_int, default=720)

    p = sub.add_parser("estimate", help="Grether regression on a dataset CSV")
    p.add_argument("--data", required=True)

    p = sub.add_parser("simulate", help="write a synthetic dataset CSV")
    p.add_argument("--scenario", required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--noise", type=float, default=0.0)
    p.add_argument("--out", required=True)
    return parser


def _prefs(sc: ScenarioFile) -> PreferenceParams:
    if isinstance(sc.rule, PreferenceParams):
        return sc.rule
    return exponents_to_preferences(sc.rule)


def _exponents(sc: ScenarioFile) -> ExponentParams:
    if isinstance(sc.rule, ExponentParams):
        return sc.rule
    return preferences_to_exponents(sc.rule)


def _write_posterior(out, q) -> None:
    out.write("state,probability\n")
    for s, m in zip(q.space.labels, q.mass):
        out.write(f"{s},{fmt(m)}\n")


def cmd_update(args, out, err) -> int:
    sc = parse_scenario(args.scenario)
    if sc.rule_type == "variational":
        spec = ObjectiveSpec(sc.prior_distribution, sc.experiment, sc.realized_signal, sc.rule)
        q, report = variational_update(spec)
        if not report.converged:
            err.write(f"warning: solver stopped after {report.iterations} iterations without converging\n")
    else:
        q = exponential_update(sc.prior_distribution, sc.experiment, sc.realized_signal, sc.rule)
    _write_posterior(out, q)
    return EXIT_OK


def cmd_solve(args, out, err) -> int:
    sc = parse_scenario(args.scenario)
    spec = ObjectiveSpec(sc.prior_distribution, sc.experiment, sc.realized_signal, _prefs(sc))
    config = SolverConfig(step_size=args.step, max_iterations=args.max_iter, convergence_tol=args.tol)
    q, report = variational_update(spec, config)
    diag = [("lambda", fmt(spec.prefs.lam)), ("mu", fmt(spec.prefs.mu))]
    if spec.prefs.convex:
        gap = crosscheck(spec, config).sup_gap_to_closed_form
        diag += [
            ("regime", "convex"),
            ("iterations", str(report.iterations)),
            ("final_objective", fmt(report.final_objective)),
            ("converged", str(report.converged).lower()),
            ("gap_to_closed_form", fmt(gap)),
        ]
    else:
        sol = solve_concave(spec)
        diag += [
            ("regime", "concave"),
            ("iterations", "0"),
            ("final_objective", fmt(report.final_objective)),
            ("converged", "true"),
            ("maximizers", ";".join(sc.states[i] for i in sol.maximizers)),
        ]
    _write_posterior(out, q)
    out.write("\ndiagnostic,value\n")
    for k, v in diag:
        out.write(f"{k},{v}\n")
    return EXIT_OK if report.converged else EXIT_NOT_CONVERGED


def cmd_sweep(args, out, err) -> int:
    sc = parse_scenario(args.scenario)
    prior, exp = sc.prior_distribution, sc.experiment
    out.write(",".join(["lambda", "mu", "regime"] + [f"q_{s}" for s in sc.states] + ["entropy"]) + "\n")
    for lam in args.lam:
        for mu in args.mu:
            spec = ObjectiveSpec(prior, exp, sc.realized_signal, PreferenceParams(float(lam), float(mu)))
            q, report = variational_update(spec)
            if not report.converged:
                err.write(f"warning: lambda={fmt(lam)} mu={fmt(mu)} did not converge\n")
            regime = "convex" if spec.prefs.convex else "concave"
            cells = [fmt(lam), fmt(mu), regime] + [fmt(m) for m in q.mass] + [fmt(entropy(q))]
            out.write(",".join(cells) + "\n")
    return EXIT_OK


def cmd_sequence(args, out, err) -> int:
    sc = parse_scenario(args.scenario)
    labels = [s.strip() for s in args.signals.split(",") if s.strip()]
    seq = SignalSequence(sc.experiment, tuple(labels))
    rule = _exponents(sc)
    q = sequential_update(sc.prior_distribution, seq, rule)
    tv = order_dependence(sc.prior_distribution, seq, rule, args.permutations) if len(seq) >= 2 else 0.0
    _write_posterior(out, q)
    out.write(f"\norder_dependence_tv,{fmt(tv)}\n")
    return EXIT_OK


def cmd_estimate(args, out, err) -> int:
    _, observations = read_dataset(args.data)
    fit = grether_fit(observations)
    rows = [
        ("alpha_hat", fmt(fit.alpha_hat)),
        ("beta_hat", fmt(fit.beta_hat)),
        ("residual_sum_squares", fmt(fit.residual_sum_squares)),
        ("n_equations", str(fit.n_equations)),
        ("lambda", fmt(fit.implied_prefs.lam) if fit.implied_prefs else "undefined"),
        ("mu", fmt(fit.implied_prefs.mu) if fit.implied_prefs else "undefined"),
    ]
    for k, v in rows:
        out.write(f"{k},{v}\n")
    return EXIT_OK


def cmd_simulate(args, out, err) -> int:
    sc = parse_scenario(args.scenario)
    params = ExponentParams(args.alpha, args.beta)
    obs = simulate_dataset(args.seed, sc.space, sc.experiment, params, args.n, args.noise)
    comments = [
        f"seed={args.seed} alpha={fmt(args.alpha)} beta={fmt(args.beta)} n={args.n} noise={fmt(args.noise)}",
        "generator=splitmix64",
    ]
    write_dataset(args.out, obs, comments)
    err.write(f"wrote {len(obs)} observations to {args.out}\n")
    return EXIT_OK


COMMANDS = {
    "update": cmd_update,
    "solve": cmd_solve,
    "sweep": cmd_sweep,
    "sequence": cmd_sequence,
    "estimate": cmd_estimate,
    "simulate": cmd_simulate,
}


class _StreamHandler(logging.Handler):
    def __init__(self, stream):
        super().__init__(logging.WARNING)
        self.stream = stream

    def emit(self, record):
        self.stream.write(f"warning: {record.getMessage()}\n")


def run_command(argv: Sequence[str], stdout=None, stderr=None) -> int:
    out = stdout if stdout is not None else sys.stdout
    err = stderr if stderr is not None else sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except UsageError as exc:
        err.write(f"{exc}\n")
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)

    logger = logging.getLogger("varbelief")
    handler = _StreamHandler(err)
    logger.addHandler(handler)
    try:
        return COMMANDS[args.command](args, out, err)
    except (BeliefError, ValueError, KeyError, OSError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        err.write(f"error: {msg}\n")
        return EXIT_DOMAIN
    finally:
        logger.removeHandler(handler)


def main(argv: Optional[Sequence[str]] = None) -> int:
    return run_command(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
