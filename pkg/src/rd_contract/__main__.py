"""Main CLI entry point for rd-contract package."""

import argparse
import logging
import sys
import textwrap
from importlib.metadata import version
from pathlib import Path
from typing import Any

from rd_contract.api.rd_contract import RDContract
from rd_contract.core.utils import logger
from rd_contract.core.utils.logging import setup_rd_contract_logging
from rd_contract.types.config import LambdaSource, ModelPreset, RunConfig

# argparse dest -> dotted RunConfig field
CONFIG_FLAGS = {
    "output_dir": "output_dir",
    "lambda_source": "lambda_source",
    "grid_n": "grid.n",
    "dt": "time.dt",
    "t_end": "time.t_end",
    "sample_every": "time.sample_every",
    "window": "time.window",
    "seed": "sampling.seed",
    "n_random": "sampling.n_random",
    "preset": "model.preset",
    "epsilon": "model.epsilon",
    "omega": "model.omega",
    "zeta": "model.zeta",
    "r": "model.r",
    "diffusion_scale": "model.diffusion_scale",
    "pointwise_gamma": "model.pointwise_gamma",
    "omega_min": "sweep.omega_min",
    "omega_max": "sweep.omega_max",
    "r_min": "sweep.r_min",
    "r_max": "sweep.r_max",
    "zeta_min": "sweep.zeta_min",
    "zeta_max": "sweep.zeta_max",
    "steps": "sweep.steps",
    "tol": "sweep.tol",
    "workers": "sweep.workers",
    "K": "translation.K",
    "chi_m": "translation.chi_m",
    "chi_r": "translation.chi_r",
    "chi_c": "translation.chi_c",
    "r_m": "translation.r_m",
    "r_r": "translation.r_r",
    "x_star": "translation.x_star",
    "c_star": "translation.c_star",
}


def _add_common_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=str, default=None, help="Path to a RunConfig JSON file")
    parser.add_argument("--output-dir", type=str, default=None, help="Directory for CSV, JSON and run.log")
    parser.add_argument("--verbose", action="store_true", help="Log at DEBUG level")
    parser.add_argument("--grid-n", type=int, default=None, help="Number of grid nodes")
    parser.add_argument("--dt", type=float, default=None, help="Time step (default: 0.1 / reaction spectral radius)")
    parser.add_argument("--t-end", type=float, default=None, help="Final time")
    parser.add_argument("--sample-every", type=int, default=None, help="Keep every k-th step")
    parser.add_argument(
        "--window", type=float, nargs=2, default=None, metavar=("T_LO", "T_HI"), help="Slope window"
    )
    parser.add_argument("--seed", type=int, default=None, help="Seed for certificate probes")
    parser.add_argument("--n-random", type=int, default=None, help="Random probes per certificate check")
    parser.add_argument(
        "--lambda-source",
        type=str,
        choices=[s.value for s in LambdaSource],
        default=None,
        help="Diffusion margin from the analytic floor or the numeric eigenvalue",
    )


def _add_model_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--preset", type=str, choices=[p.value for p in ModelPreset], default=None, help="Built-in system"
    )
    parser.add_argument("--epsilon", type=float, default=None, help="Mean decay rate of the scalar system")
    parser.add_argument("--omega", type=float, default=None, help="Frequency of the scalar reaction rate")
    parser.add_argument("--zeta", type=float, default=None, help="Diffusion scale of the two-species system")
    parser.add_argument("--r", type=float, default=None, help="Radius of gyration of the second species")
    parser.add_argument(
        "--diffusion-scale", type=float, default=None, help="Multiplier on the translation diffusivities"
    )


def _add_translation_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--K", type=float, default=None, help="Dissociation constant")
    parser.add_argument("--chi-m", type=float, default=None, help="mRNA diffusivity")
    parser.add_argument("--chi-r", type=float, default=None, help="Ribosome diffusivity")
    parser.add_argument("--chi-c", type=float, default=None, help="Complex diffusivity")
    parser.add_argument("--r-m", type=float, default=None, help="mRNA radius of gyration")
    parser.add_argument("--r-r", type=float, default=None, help="Ribosome radius of gyration")
    parser.add_argument("--x-star", type=float, default=None, help="Nucleoid centre")
    parser.add_argument("--c-star", type=float, default=None, help="Invariant-set size")


def _add_sweep_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--steps", type=int, default=None, help="Number of sweep points")
    parser.add_argument("--tol", type=float, default=None, help="Relative bisection tolerance")
    parser.add_argument(
        "--workers", type=int, default=None, help="Worker processes (capped by RD_CONTRACT_THREADS)"
    )


def create_parser() -> argparse.ArgumentParser:
    """Create the argument parser for the CLI."""
    parser = argparse.ArgumentParser(
        prog="rd-contract",
        description="Simulate reaction-diffusion systems and check contraction certificates",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=textwrap.dedent("""
            exit codes:
              0  success (certify: certificate holds)
              1  error
              2  certify ran but the certificate fails

            environment:
              RD_CONTRACT_THREADS  upper bound on sweep worker processes
            """),
    )
    parser.add_argument(
        "--version",
        action="version",
        version=f"%(prog)s {version('rd-contract')}",
    )

    subparsers = parser.add_subparsers(dest="command", help="Available commands", required=True)

    # simulate subcommand
    simulate_parser = subparsers.add_parser(
        "simulate",
        help="Integrate a built-in system",
        description="Integrate a built-in system and write its trajectory, norms and slope summary",
        epilog=textwrap.dedent("""
            examples:
              # Scalar system at a stable frequency
              rd-contract simulate --preset example31 --epsilon 1e-2 --omega 0.01

              # Translation model with fast diffusion, coarse grid
              rd-contract simulate --preset translation --diffusion-scale 100 --grid-n 200 --t-end 50
            """),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    _add_common_args(simulate_parser)
    _add_model_args(simulate_parser)
    _add_translation_args(simulate_parser)

    # certify subcommand
    certify_parser = subparsers.add_parser(
        "certify",
        help="Check the contraction certificate of a built-in system",
        description="Evaluate the contraction conditions and write certificate.json",
        epilog=textwrap.dedent("""
            examples:
              # Two-species system above its bound 2 / nu(r)
              rd-contract certify --preset example32 --zeta 3 --r 0

              # Same check with one Gamma for the whole domain
              rd-contract certify --preset example32 --zeta 3 --no-pointwise-gamma

              # Translation model with scaled diffusivities
              rd-contract certify --preset translation --diffusion-scale 5
            """),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    _add_common_args(certify_parser)
    _add_model_args(certify_parser)
    _add_translation_args(certify_parser)
    certify_parser.add_argument(
        "--pointwise-gamma",
        action=argparse.BooleanOptionalAction,
        default=None,
        help="Per-node diagonal witness for the two-species system",
    )

    # sweep-omega subcommand
    sweep_omega_parser = subparsers.add_parser(
        "sweep-omega",
        help="Slope of the scalar system over a range of omega",
        description="Log-spaced omega sweep of the scalar system with the critical omega and certified boundary",
        epilog=textwrap.dedent("""
            examples:
              rd-contract sweep-omega --epsilon 1e-2 --omega-min 1e-3 --omega-max 1.0 --steps 11
            """),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    _add_common_args(sweep_omega_parser)
    _add_sweep_args(sweep_omega_parser)
    sweep_omega_parser.add_argument("--epsilon", type=float, default=None, help="Mean decay rate")
    sweep_omega_parser.add_argument("--omega-min", type=float, default=None, help="Smallest omega")
    sweep_omega_parser.add_argument("--omega-max", type=float, default=None, help="Largest omega")

    # sweep-zeta subcommand
    sweep_zeta_parser = subparsers.add_parser(
        "sweep-zeta",
        help="Critical zeta of the two-species system over a range of r",
        description="Bisect the critical zeta for evenly spaced r and compare with 2 / nu(r)",
        epilog=textwrap.dedent("""
            examples:
              rd-contract sweep-zeta --r-min 0 --r-max 1 --steps 11 --workers 4
            """),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    _add_common_args(sweep_zeta_parser)
    _add_sweep_args(sweep_zeta_parser)
    sweep_zeta_parser.add_argument("--r-min", type=float, default=None, help="Smallest r")
    sweep_zeta_parser.add_argument("--r-max", type=float, default=None, help="Largest r")
    sweep_zeta_parser.add_argument("--zeta-min", type=float, default=None, help="Lower bisection bracket")
    sweep_zeta_parser.add_argument("--zeta-max", type=float, default=None, help="Upper bisection bracket")

    # bcf subcommand
    bcf_parser = subparsers.add_parser(
        "bcf",
        help="Binding correction factor of the translation profiles",
        description="Compute the binding correction factor and write the available-volume profiles",
        epilog=textwrap.dedent("""
            examples:
              # Homogeneous profiles give exactly 1
              rd-contract bcf --r-m 0 --r-r 0
            """),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    _add_common_args(bcf_parser)
    _add_translation_args(bcf_parser)

    # eig subcommand
    eig_parser = subparsers.add_parser(
        "eig",
        help="Spectral gap of each diffusion operator",
        description="Analytic floor and numeric second eigenvalue of each species operator",
        epilog=textwrap.dedent("""
            examples:
              rd-contract eig --preset example32 --zeta 1 --r 0.5 --export-operator
            """),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    _add_common_args(eig_parser)
    _add_model_args(eig_parser)
    _add_translation_args(eig_parser)
    eig_parser.add_argument(
        "--export-operator", action="store_true", help="Write the operator entries as (row, col, value) text"
    )

    # qss subcommand
    qss_parser = subparsers.add_parser(
        "qss",
        help="Compare the translation model with its reduced QSS model",
        description="Simulate the translation model and write QSS errors next to the reduced model",
        epilog=textwrap.dedent("""
            examples:
              rd-contract qss --diffusion-scale 100 --t-end 50 --window 40 50
            """),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    _add_common_args(qss_parser)
    _add_translation_args(qss_parser)
    qss_parser.add_argument(
        "--diffusion-scale", type=float, default=None, help="Multiplier on the translation diffusivities"
    )

    return parser


def _collect_overrides(args: argparse.Namespace) -> dict[str, Any]:
    """Map the flags that were given onto dotted config keys."""
    overrides: dict[str, Any] = {"command": args.command}
    for dest, key in CONFIG_FLAGS.items():
        value = getattr(args, dest, None)
        if value is not None:
            overrides[key] = value
    return overrides


def _resolve_config(args: argparse.Namespace) -> RunConfig:
    """Load the config file when given, otherwise the defaults, and apply the flags on top.

    Args:
        args: Parsed command line

    Returns:
        Validated RunConfig
    """
    if args.config is not None:
        config_path = Path(args.config)
        logger.info(f"Using config from --config: {config_path}")
        base = RunConfig.from_file(config_path)
    else:
        logger.info("No config provided, using default config")
        base = RunConfig()
    return base.with_overrides(_collect_overrides(args))


def _execute(args: argparse.Namespace, action: str, **run_kwargs: Any) -> int:
    try:
        contract = RDContract(config=_resolve_config(args))
        return contract.run(**run_kwargs)
    except Exception as e:
        logger.error(f"Failed to {action}: {e}")
        return 1


def simulate(args: argparse.Namespace) -> int:
    """Execute simulate command"""
    return _execute(args, "simulate")


def certify(args: argparse.Namespace) -> int:
    """Execute certify command"""
    return _execute(args, "certify")


def sweep_omega(args: argparse.Namespace) -> int:
    """Execute sweep-omega command"""
    return _execute(args, "sweep omega")


def sweep_zeta(args: argparse.Namespace) -> int:
    """Execute sweep-zeta command"""
    return _execute(args, "sweep zeta")


def bcf(args: argparse.Namespace) -> int:
    """Execute bcf command"""
    return _execute(args, "compute binding correction factor")


def eig(args: argparse.Namespace) -> int:
    """Execute eig command"""
    return _execute(args, "compute eigenvalues", export_operator=args.export_operator)


def qss(args: argparse.Namespace) -> int:
    """Execute qss command"""
    return _execute(args, "compare with the QSS model")


def main() -> None:
    """Main CLI entry point"""
    parser = create_parser()
    args = parser.parse_args()

    setup_rd_contract_logging(logging.DEBUG if args.verbose else logging.INFO)

    # Route to appropriate command handler
    if args.command == "simulate":
        sys.exit(simulate(args))
    elif args.command == "certify":
        sys.exit(certify(args))
    elif args.command == "sweep-omega":
        sys.exit(sweep_omega(args))
    elif args.command == "sweep-zeta":
        sys.exit(sweep_zeta(args))
    elif args.command == "bcf":
        sys.exit(bcf(args))
    elif args.command == "eig":
        sys.exit(eig(args))
    elif args.command == "qss":
        sys.exit(qss(args))
    else:
        parser.print_help()
        sys.exit(1)


if __name__ == "__main__":
    main()
