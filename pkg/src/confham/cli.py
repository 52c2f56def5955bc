"""Command-line front end: simulate, verify, brackets, curvature."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

from .config import RunConfig, default_spec, load_config
from .core import Family, in_domain
from .dynamics import Termination, integrate
from .errors import ConfhamError, ConfigError, DomainError
from .geometry import numeric_curvature_oracle, ricci_scalar, sectional_curvatures
from .observables import catalog
from .verify import check_brackets, run_full_suite

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_DOMAIN = 2
EXIT_STEP_LIMIT = 3


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="confham",
        description="Trajectories, constants of motion, and curvature checks "
        "for four conformally Euclidean Hamiltonian families.",
    )
    parser.add_argument("--config", help="TOML run configuration")
    parser.add_argument("--seed", type=int, help="override the verification seed")
    parser.add_argument("--output", help="override the output path")
    parser.add_argument(
        "--family",
        choices=[f.value for f in Family] + ["all"],
        help="run with a family's default parameters instead of [system]",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("simulate", help="integrate a trajectory and write CSV")
    sub.add_parser("verify", help="run the full verification suite, write JSON")
    sub.add_parser("brackets", help="print the per-observable bracket residual table")
    cur = sub.add_parser("curvature", help="curvatures and oracle deviation at positions")
    cur.add_argument("position", nargs="*", type=float, help="x y z triplets")
    return parser


def _load(args) -> RunConfig:
    if args.config:
        config = load_config(args.config)
    elif args.family and args.family != "all":
        config = RunConfig(spec=default_spec(Family(args.family)))
    else:
        raise ConfigError("either --config or --family is required")
    if args.family and args.family != "all":
        config = replace(config, spec=default_spec(Family(args.family)))
    if args.seed is not None:
        config = replace(config, verify=replace(config.verify, seed=args.seed))
    if args.output is not None:
        config = replace(config, output=args.output)
    return config


def _write(config: RunConfig, text: str):
    if config.output:
        with open(config.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_simulate(config: RunConfig) -> int:
    if config.initial is None:
        raise ConfigError("simulate requires an initial state ([system] initial)")
    if not in_domain(config.spec, config.initial, 0.0):
        raise DomainError(
            f"initial state {config.initial.as_tuple()} violates the domain of "
            f"{config.spec.family.value} (conformal denominator or a singular "
            "coordinate plane)"
        )
    traj = integrate(config.spec, config.initial, config.integrator, catalog(config.spec))
    _write(config, traj.to_csv())
    if traj.termination is Termination.DOMAIN_EXIT:
        return EXIT_DOMAIN
    if traj.termination is Termination.STEP_LIMIT:
        return EXIT_STEP_LIMIT
    return EXIT_OK


def cmd_verify(config: RunConfig, all_families: bool) -> int:
    if all_families:
        reports = [run_full_suite(default_spec(f), config.verify) for f in Family]
        _write(config, json.dumps([r.to_json_dict() for r in reports], indent=2) + "\n")
        return EXIT_OK if all(r.passed for r in reports) else EXIT_ERROR
    report = run_full_suite(config.spec, config.verify)
    _write(config, json.dumps(report.to_json_dict(), indent=2) + "\n")
    return EXIT_OK if report.passed else EXIT_ERROR


def cmd_brackets(config: RunConfig) -> int:
    v = config.verify
    residuals = check_brackets(config.spec, v.n_samples, v.seed, v.bracket_tol)
    lines = [f"{'observable':<16} {'max':>12} {'mean':>12} pass"]
    worst = 0.0
    for name, (mx, mean) in residuals.items():
        worst = max(worst, mx)
        lines.append(f"{name:<16} {mx:12.3e} {mean:12.3e} {'yes' if mx <= v.bracket_tol else 'NO'}")
    _write(config, "\n".join(lines) + "\n")
    return EXIT_OK if worst <= v.bracket_tol else EXIT_ERROR


def cmd_curvature(config: RunConfig, flat_positions: list[float]) -> int:
    if not flat_positions or len(flat_positions) % 3 != 0:
        raise ConfigError("curvature needs one or more 'x y z' position triplets")
    rows = []
    for i in range(0, len(flat_positions), 3):
        pos = flat_positions[i : i + 3]
        cs = sectional_curvatures(config.spec, pos)
        ric = ricci_scalar(config.spec, pos)
        ocs, oric = numeric_curvature_oracle(config.spec, pos)
        dev = max(
            abs(c - o) / (1.0 + abs(c)) for c, o in zip((*cs, ric), (*ocs, oric))
        )
        rows.append(
            {
                "position": pos,
                "sectional_curvatures": list(cs),
                "ricci_scalar": ric,
                "oracle_rel_dev": dev,
            }
        )
    _write(config, json.dumps(rows, indent=2) + "\n")
    return EXIT_OK


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "verify" and args.family == "all":
            base = (
                load_config(args.config)
                if args.config
                else RunConfig(spec=default_spec(Family.OSC_LINEAR))
            )
            if args.seed is not None:
                base = replace(base, verify=replace(base.verify, seed=args.seed))
            if args.output is not None:
                base = replace(base, output=args.output)
            return cmd_verify(base, all_families=True)
        config = _load(args)
        if args.command == "simulate":
            return cmd_simulate(config)
        if args.command == "verify":
            return cmd_verify(config, all_families=False)
        if args.command == "brackets":
            return cmd_brackets(config)
        return cmd_curvature(config, args.position)
    except ConfhamError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
