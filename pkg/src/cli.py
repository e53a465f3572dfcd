"""
Command-line front end.

Reports go to stdout as JSON (or CSV where noted), logs go to stderr.
Exit status: 0 feasible or success, 1 infeasible, 2 invalid input, 3 undecided.
"""
import argparse
import csv
import io
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from pydantic import BaseModel
from pydantic import ValidationError as PydanticValidationError

from src.exceptions import ThermoAnalysisError, ValidationError
from src.models.schemas import (
    ChannelApplyRequest, ChannelFile, CurveRequest, KappaRequest, QuasicycleRequest,
    StateFile, TransitionRequest
)
from src.services.transition_service import TransitionAnalysisService
from src.thermo.thermo_majorization import ThermoCurve, curve_to_csv
from src.utils.logger import logger, set_level
from src.utils.memory_metrics import MemoryMetricsExporter

EXIT_INVALID = 2


def _read(path: str, model):
    """Parses a JSON file into ``model``."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ValidationError(f"cannot read {path}: {e.strerror}", field=path) from e
    return model.model_validate_json(text)


def _floats(text: str, kind=float) -> List:
    try:
        return [kind(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise ValidationError(f"expected comma-separated numbers, got '{text}'") from e


def _emit(report: BaseModel):
    sys.stdout.write(report.model_dump_json(indent=2) + "\n")


def _emit_csv(header: Sequence[str], rows):
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(v) if isinstance(v, float) else v for v in row])
    sys.stdout.write(buffer.getvalue())


def cmd_check_transition(args, service: TransitionAnalysisService) -> int:
    """Feasibility verdict for --state -> --target."""
    request = TransitionRequest.from_files(_read(args.state, StateFile),
                                           _read(args.target, StateFile), args.mode)
    report = service.check_transition(request)
    _emit(report)
    return service.exit_code(report)


def cmd_curve(args, service: TransitionAnalysisService) -> int:
    """Thermo-majorization curve of a state file or of --populations/--energies/--beta."""
    if args.state:
        state = _read(args.state, StateFile)
        request = CurveRequest(populations=state.density().populations.tolist(),
                               energies=state.energies, beta=state.beta)
    else:
        if args.populations is None or args.energies is None or args.beta is None:
            raise ValidationError("give --state or all of --populations, --energies, --beta",
                                  field="state")
        request = CurveRequest(populations=_floats(args.populations),
                               energies=_floats(args.energies), beta=args.beta)
    response = service.curve(request)
    if args.format == "csv":
        sys.stdout.write(curve_to_csv(ThermoCurve(xs=tuple(response.xs),
                                                  ys=tuple(response.ys))))
    else:
        _emit(response)
    return 0


def cmd_kappa(args, service: TransitionAnalysisService) -> int:
    """Optimal qubit damping factor for p -> q."""
    _emit(service.kappa(KappaRequest(p=args.p, q=args.q, beta=args.beta,
                                     energy_gap=args.energy_gap)))
    return 0


def cmd_simulate_bath(args, service: TransitionAnalysisService) -> int:
    """Staircase convergence over --rungs."""
    series = service.simulate_bath(args.p, args.q, args.beta, args.energy_gap,
                                   _floats(args.rungs, int), args.seed_kind)
    if args.format == "csv":
        _emit_csv(["n_rungs", "boundary_mass", "alpha_measured", "alpha_interior",
                   "kappa_analytic", "gap"],
                  [(r.n_rungs, r.boundary_mass, r.alpha_measured, r.alpha_interior,
                    r.kappa_analytic, r.gap) for r in series.rows])
    else:
        _emit(series)
    return 0


def cmd_search_oracle(args, service: TransitionAnalysisService) -> int:
    """Haar-random thermal operations against the minor bound; exit 1 on any violation."""
    report = service.search_oracle(args.samples, args.seed, args.rungs, args.beta,
                                   args.energy_gap)
    _emit(report)
    return 1 if report.violations else 0


def cmd_quasicycle(args, service: TransitionAnalysisService) -> int:
    """Quasi-cycle report, or the search trace as CSV."""
    request = QuasicycleRequest(
        e21=args.e21, e20=args.e20, beta=args.beta, epsilon=args.epsilon,
        rungs=args.rungs, scale=args.scale, nogo=args.nogo,
        search=args.search or args.format == "csv", budget=args.budget, seed=args.seed,
        restarts=args.restarts,
    )
    report = service.quasicycle(request)
    if args.format == "csv":
        _emit_csv(["iteration", "gap"], report.search.trace)
    else:
        _emit(report)
    return 0


def cmd_channel(args, service: TransitionAnalysisService) -> int:
    """build | apply | compose covariant channels from JSON files."""
    channel = _read(args.channel, ChannelFile)
    if args.action == "build":
        _emit(service.build_channel(channel))
    elif args.action == "apply":
        if not args.state:
            raise ValidationError("channel apply needs --state", field="state")
        state = _read(args.state, StateFile)
        if state.energies != channel.energies or state.beta != channel.beta:
            raise ValidationError("state and channel describe different systems", field="state")
        _emit(service.apply_channel(ChannelApplyRequest(channel=channel, rho=state.rho)))
    else:
        if not args.second:
            raise ValidationError("channel compose needs --second", field="second")
        _emit(service.compose_channels(channel, _read(args.second, ChannelFile)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subcommand per analysis."""
    parser = argparse.ArgumentParser(
        prog="thermo-coherence",
        description="Coherence bounds for thermal operations")
    parser.add_argument("--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR"],
                        help="Overrides LOG_LEVEL for this run")
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check-transition", help="Decide rho -> sigma")
    check.add_argument("--state", required=True, help="Input state JSON")
    check.add_argument("--target", required=True, help="Target state JSON")
    check.add_argument("--mode", choices=["to", "eto"], default="to")
    check.set_defaults(handler=cmd_check_transition)

    curve = sub.add_parser("curve", help="Thermo-majorization curve")
    curve.add_argument("--state", help="State JSON")
    curve.add_argument("--populations", help="Comma-separated populations")
    curve.add_argument("--energies", help="Comma-separated energies")
    curve.add_argument("--beta", type=float)
    curve.add_argument("--format", choices=["json", "csv"], default="csv")
    curve.set_defaults(handler=cmd_curve)

    kappa = sub.add_parser("kappa", help="Optimal qubit damping factor")
    _qubit_args(kappa)
    kappa.set_defaults(handler=cmd_kappa)

    simulate = sub.add_parser("simulate-bath", help="Finite-bath staircase convergence")
    _qubit_args(simulate)
    simulate.add_argument("--rungs", default="4,6,8", help="Comma-separated bath sizes")
    simulate.add_argument("--seed-kind", choices=["binary", "uniform"], default="binary")
    simulate.add_argument("--format", choices=["json", "csv"], default="json")
    simulate.set_defaults(handler=cmd_simulate_bath)

    oracle = sub.add_parser("search-oracle", help="Haar-random thermal operations")
    oracle.add_argument("--samples", type=int, default=20)
    oracle.add_argument("--seed", type=int, default=0)
    oracle.add_argument("--rungs", type=int, default=6)
    oracle.add_argument("--beta", type=float, required=True)
    oracle.add_argument("--energy-gap", type=float, default=1.0)
    oracle.set_defaults(handler=cmd_search_oracle)

    cycle = sub.add_parser("quasicycle", help="Qutrit quasi-cycle analyses")
    cycle.add_argument("--e21", type=float, required=True, help="E2 - E1")
    cycle.add_argument("--e20", type=float, required=True, help="E2 - E0")
    cycle.add_argument("--beta", type=float, required=True)
    cycle.add_argument("--epsilon", type=float, default=0.0)
    cycle.add_argument("--rungs", type=int, default=5)
    cycle.add_argument("--scale", type=int, default=3)
    cycle.add_argument("--nogo", action="store_true", help="Check the brute-force unitary")
    cycle.add_argument("--search", action="store_true", help="Run the seeded coherence search")
    cycle.add_argument("--budget", type=int)
    cycle.add_argument("--seed", type=int)
    cycle.add_argument("--restarts", type=int)
    cycle.add_argument("--format", choices=["json", "csv"], default="json",
                       help="csv emits the search trace")
    cycle.set_defaults(handler=cmd_quasicycle)

    channel = sub.add_parser("channel", help="Covariant channel files")
    channel.add_argument("action", choices=["build", "apply", "compose"])
    channel.add_argument("--channel", required=True, help="Channel JSON")
    channel.add_argument("--state", help="State JSON for apply")
    channel.add_argument("--second", help="Second channel JSON for compose")
    channel.set_defaults(handler=cmd_channel)

    return parser


def _qubit_args(parser: argparse.ArgumentParser):
    parser.add_argument("--p", type=float, required=True, help="Input ground population")
    parser.add_argument("--q", type=float, required=True, help="Target ground population")
    parser.add_argument("--beta", type=float, required=True)
    parser.add_argument("--energy-gap", type=float, default=1.0)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Runs one subcommand and returns the process exit status."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_INVALID if e.code else 0
    if args.log_level:
        set_level(args.log_level)

    service = TransitionAnalysisService(MemoryMetricsExporter())
    try:
        return args.handler(args, service)
    except ThermoAnalysisError as e:
        logger.error("%s failed: %s", args.command, e.message)
        return e.exit_code
    except PydanticValidationError as e:
        logger.error("%s: invalid input: %s", args.command, e)
        return EXIT_INVALID
    except Exception as e:  # pylint: disable=broad-exception-caught
        logger.error("Unexpected error in %s: %s", args.command, str(e), exc_info=True)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
