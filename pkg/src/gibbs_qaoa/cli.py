"""Command-line front end.

Subcommands: run (one grid point), sweep (full grid), verify-instance
(brute-force ground-set report), gibbs (Boltzmann summary at a temperature),
oracle (kernel/spectrum checks on the Gibbs-encoding operator).

Exit codes: 0 success, 1 usage error, 2 numerical-check failure.
"""

from __future__ import annotations

import argparse
import sys
import numpy as np

from . import harness
from .eigensolver import eigh
from .ising import (
    IsingInstance,
    InstanceError,
    gibbs_amplitudes,
    gibbs_distribution,
    ground_set,
    index_to_ket,
    load_instance,
    toy_ground_states,
    toy_instance,
)
from .metrics import ground_state_probability, orbit_probabilities
from .operators import apply_operator, build_sbo, densify
from .powell import PowellOptions

USAGE_ERROR = 1
CHECK_FAILURE = 2

KERNEL_TOL_TOY = 1e-10
EIGENVALUE_TOL = 1e-10


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_ERROR)


def _add_instance_flags(p: _Parser) -> None:
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--toy", action="store_true", help="use the built-in 5-spin benchmark")
    group.add_argument("--instance", metavar="PATH", help="instance file to load")


def _resolve_instance(args) -> tuple[IsingInstance, str]:
    if getattr(args, "toy", False):
        return toy_instance(), "toy"
    return load_instance(args.instance), args.instance


def _add_optimizer_flags(p: _Parser) -> None:
    p.add_argument("--dt", type=float, default=1.0, help="annealing-ramp time step")
    p.add_argument("--ftol", type=float, default=1e-10)
    p.add_argument("--xtol", type=float, default=1e-8)
    p.add_argument("--max-iterations", type=int, default=100)
    p.add_argument("--max-evaluations", type=int, default=200_000)
    p.add_argument("--initial-step", type=float, default=0.1)
    p.add_argument("--budget-s", type=float, default=300.0,
                   help="wall-clock budget per point (seconds)")
    p.add_argument("--restarts", type=int, default=0,
                   help="extra perturbed starts per point")
    p.add_argument("--seed", type=int, default=0)


def _optimizer_from_args(args) -> PowellOptions:
    return PowellOptions(
        ftol=args.ftol,
        xtol=args.xtol,
        max_iterations=args.max_iterations,
        max_evaluations=args.max_evaluations,
        initial_step=args.initial_step,
    )


def build_parser() -> _Parser:
    parser = _Parser(prog="gibbs-qaoa",
                     description="Exact simulation harness for fair-sampling "
                                 "variational circuits on small Ising instances.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="optimize a single (method, scheme, p, T) point")
    _add_instance_flags(p_run)
    p_run.add_argument("--method", choices=harness.METHODS, required=True)
    p_run.add_argument("--scheme", choices=("full", "linearized"), default="full")
    p_run.add_argument("-p", "--depth", type=int, required=True)
    p_run.add_argument("-T", "--temperature", type=float, default=None,
                       help="required for method sbo")
    _add_optimizer_flags(p_run)
    p_run.add_argument("--json", metavar="PATH", help="also write the record as JSON")

    p_sweep = sub.add_parser("sweep", help="run a (method, scheme, T, p) grid")
    p_sweep.add_argument("--config", metavar="PATH", help="key-value config file")
    inst_group = p_sweep.add_mutually_exclusive_group()
    inst_group.add_argument("--toy", action="store_true")
    inst_group.add_argument("--instance", metavar="PATH")
    p_sweep.add_argument("--methods", nargs="+", choices=harness.METHODS)
    p_sweep.add_argument("--schemes", nargs="+", choices=("full", "linearized"))
    p_sweep.add_argument("--depths", nargs="+", type=int)
    p_sweep.add_argument("--temperatures", nargs="+", type=float)
    _add_optimizer_flags(p_sweep)
    p_sweep.add_argument("--workers", type=int, default=None)
    p_sweep.add_argument("--out-csv", metavar="PATH")
    p_sweep.add_argument("--out-json", metavar="PATH")
    p_sweep.add_argument("--fig-dir", metavar="DIR",
                         help="emit fig2*/fig3* data files into DIR")
    p_sweep.add_argument("--svg", action="store_true", help="also write SVG plots")

    p_verify = sub.add_parser("verify-instance",
                              help="brute-force ground-set report (checks the "
                                   "built-in benchmark against its known minima)")
    _add_instance_flags(p_verify)

    p_gibbs = sub.add_parser("gibbs", help="Boltzmann summary at a temperature")
    _add_instance_flags(p_gibbs)
    p_gibbs.add_argument("-T", "--temperature", type=float, required=True)

    p_oracle = sub.add_parser("oracle",
                              help="kernel and spectrum checks for the "
                                   "Gibbs-encoding cost operator")
    _add_instance_flags(p_oracle)
    p_oracle.add_argument("-T", "--temperature", type=float, action="append",
                          dest="temperatures",
                          help="repeatable; default 0.5 1.0 2.0")
    return parser


def cmd_run(args) -> int:
    inst, label = _resolve_instance(args)
    if args.method == "sbo" and args.temperature is None:
        print("error: method sbo requires -T", file=sys.stderr)
        return USAGE_ERROR
    temps = (args.temperature,) if args.temperature is not None else harness.DEFAULT_TEMPERATURES
    cfg = harness.SweepConfig(
        instance=inst,
        instance_label=label,
        methods=(args.method,),
        schemes=(args.scheme,),
        depths=(args.depth,),
        temperatures=temps,
        dt=args.dt,
        optimizer=_optimizer_from_args(args),
        point_budget_s=args.budget_s,
        restarts=args.restarts,
        seed=args.seed,
        workers=1,
    )
    point = harness.PointSpec(
        args.method, args.scheme, args.depth,
        args.temperature if args.method == "sbo" else None,
    )
    record = harness.run_point(cfg, point)
    for key, value in harness.record_to_dict(record).items():
        print(f"{key} = {value}")
    if args.json:
        harness.emit_json([record], args.json)
    return 0


def _parse_config_file(path) -> dict:
    values: dict[str, list[str]] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            tokens = line.split()
            if len(tokens) < 2:
                raise ValueError(f"config line {lineno}: expected '<key> <value...>'")
            values[tokens[0].lower()] = tokens[1:]
    return values


def _sweep_config(args) -> harness.SweepConfig:
    file_vals = _parse_config_file(args.config) if args.config else {}

    def pick(flag, key, cast, default):
        if flag is not None:
            return flag
        if key in file_vals:
            return cast(file_vals[key])
        return default

    instance_src = None
    if args.toy:
        instance_src = "toy"
    elif args.instance:
        instance_src = args.instance
    elif "instance" in file_vals:
        instance_src = file_vals["instance"][0]
    if instance_src is None:
        raise ValueError("no instance given (use --toy, --instance, or config 'instance')")
    inst = toy_instance() if instance_src == "toy" else load_instance(instance_src)

    methods = tuple(pick(args.methods, "methods", lambda v: v, harness.METHODS))
    schemes = tuple(pick(args.schemes, "schemes", lambda v: v, ("full", "linearized")))
    depths = tuple(pick(args.depths, "depths", lambda v: [int(x) for x in v],
                        harness.DEFAULT_DEPTHS))
    temps = tuple(pick(args.temperatures, "temperatures",
                       lambda v: [float(x) for x in v], harness.DEFAULT_TEMPERATURES))

    def scalar(name, key, cast, default):
        flag = getattr(args, name)
        if flag != default:
            return flag
        if key in file_vals:
            return cast(file_vals[key][0])
        return default

    optimizer = PowellOptions(
        ftol=scalar("ftol", "ftol", float, 1e-10),
        xtol=scalar("xtol", "xtol", float, 1e-8),
        max_iterations=scalar("max_iterations", "max_iterations", int, 100),
        max_evaluations=scalar("max_evaluations", "max_evaluations", int, 200_000),
        initial_step=scalar("initial_step", "initial_step", float, 0.1),
    )
    return harness.SweepConfig(
        instance=inst,
        instance_label=instance_src,
        methods=methods,
        schemes=schemes,
        depths=depths,
        temperatures=temps,
        dt=scalar("dt", "dt", float, 1.0),
        optimizer=optimizer,
        point_budget_s=scalar("budget_s", "budget_s", float, 300.0),
        restarts=scalar("restarts", "restarts", int, 0),
        seed=scalar("seed", "seed", int, 0),
        workers=args.workers if args.workers is not None else (
            int(file_vals["workers"][0]) if "workers" in file_vals else None),
    )


def cmd_sweep(args) -> int:
    try:
        cfg = _sweep_config(args)
    except (ValueError, OSError, InstanceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    records, failures = harness.run_sweep(cfg)
    print(f"completed {len(records)} of {len(records) + len(failures)} points")
    if args.out_csv:
        harness.emit_csv(records, args.out_csv)
        print(f"wrote {args.out_csv}")
    if args.out_json:
        harness.emit_json(records, args.out_json)
        print(f"wrote {args.out_json}")
    if args.fig_dir:
        wrote = []
        if "qaoa" in cfg.methods or "sbo" in cfg.methods:
            wrote += harness.emit_fig_data(records, "fig2", args.fig_dir, svg=args.svg)
        if "sbo" in cfg.methods:
            wrote += harness.emit_fig_data(records, "fig3", args.fig_dir, svg=args.svg)
        for path in wrote:
            print(f"wrote {path}")
    if failures:
        print("failed points:", file=sys.stderr)
        for f in failures:
            print(f"  {f.point}: {f.error}", file=sys.stderr)
        return CHECK_FAILURE
    return 0


def cmd_verify_instance(args) -> int:
    inst, label = _resolve_instance(args)
    gs = ground_set(inst)
    print(f"instance: {label} (n={inst.n}, {len(inst.couplings)} couplings)")
    print(f"E0 = {gs.e0:g}")
    print(f"ground states ({gs.degeneracy}):")
    for s in gs.states:
        print(f"  {s:>3d}  |{index_to_ket(s, inst.n)}>")
    if gs.orbits is not None:
        print(f"flip orbits: {len(gs.orbits)}")
        for i, (a, b) in enumerate(gs.orbits, start=1):
            print(f"  pair {i}: |{index_to_ket(a, inst.n)}>, |{index_to_ket(b, inst.n)}>")
    if getattr(args, "toy", False):
        expected_states = tuple(sorted(toy_ground_states()))
        ok = gs.e0 == -4.0 and gs.states == expected_states and len(gs.orbits) == 3
        print(f"benchmark check (E0 = -4, six known states, three pairs): "
              f"{'PASS' if ok else 'FAIL'}")
        return 0 if ok else CHECK_FAILURE
    return 0


def cmd_gibbs(args) -> int:
    inst, label = _resolve_instance(args)
    dist = gibbs_distribution(inst, args.temperature)
    gs = ground_set(inst)
    p_gs = ground_state_probability(dist.probabilities, gs)
    print(f"instance: {label}  T = {args.temperature:g}")
    print(f"Z = {dist.z:.6g}")
    print(f"log Z = {dist.log_z:.12g}")
    print(f"P_GS = {p_gs:.12g}  ({gs.degeneracy} states at E0 = {gs.e0:g})")
    if gs.orbits is not None:
        probs = orbit_probabilities(dist.probabilities, gs)
        for i, v in enumerate(probs, start=1):
            print(f"P_{i} = {v:.12g}")
    top = np.argsort(dist.probabilities)[::-1][:5]
    print("most probable states:")
    for s in top:
        print(f"  |{index_to_ket(int(s), inst.n)}>  {dist.probabilities[s]:.6g}")
    return 0


def cmd_oracle(args) -> int:
    inst, label = _resolve_instance(args)
    temps = args.temperatures or list(harness.DEFAULT_TEMPERATURES)
    print(f"instance: {label}")
    status = 0
    for t in temps:
        op = build_sbo(inst, t)
        psi = gibbs_amplitudes(inst, t)
        residual = float(np.linalg.norm(apply_operator(op, psi)))
        dense = densify(op)
        decomp = eigh(dense)
        lam0, lam1 = float(decomp.eigenvalues[0]), float(decomp.eigenvalues[1])
        ok = (residual <= KERNEL_TOL_TOY
              and abs(lam0) <= EIGENVALUE_TOL
              and lam1 > 0.0)
        status = status if ok else CHECK_FAILURE
        print(f"T = {t:g}: kernel residual = {residual:.3e}, "
              f"min eigenvalue = {lam0:.3e}, second = {lam1:.6e}  "
              f"{'PASS' if ok else 'FAIL'}")
    return status


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE_ERROR
    try:
        if args.command == "run":
            return cmd_run(args)
        if args.command == "sweep":
            return cmd_sweep(args)
        if args.command == "verify-instance":
            return cmd_verify_instance(args)
        if args.command == "gibbs":
            return cmd_gibbs(args)
        if args.command == "oracle":
            return cmd_oracle(args)
    except (InstanceError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
