"""
Command-line interface for haarbmo.
"""
import argparse
import logging
import os
import sys
from dataclasses import replace
from fractions import Fraction
from typing import Any, Dict, List, Optional, Union

from haarbmo import __version__
from haarbmo.bmo.carleson import CarlesonAnalyzer, sqrt_fraction
from haarbmo.config import FORMATS, RunConfig, build_config
from haarbmo.constructions.random_maps import RandomGenerator
from haarbmo.constructions.section5 import Section5Params, build_section5
from haarbmo.decompose.generations import GenerationalDecomposer
from haarbmo.decompose.main_lemma import SWEEP_ORDERS
from haarbmo.decompose.splitting import CarlesonSplitter
from haarbmo.decompose.verifier import PropertyVerifier
from haarbmo.exceptions import FormatError, HaarBMOError, ParameterError
from haarbmo.formats import json_codec
from haarbmo.formats.table import render, render_parts
from haarbmo.models.certificate import ConditionSSplit, Mode, PropertyPCertificate, Verdict
from haarbmo.models.interval import ROOT, DyadicInterval, IntervalSet, Universe
from haarbmo.models.rearrangement import Rearrangement
from haarbmo.norms.oracle import MODES, NormOracle

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_FAILED_VERDICT = 2

CHECKS = ("auto", "property_p", "merged", "condition_s")


def setup_logging(verbose: bool = False) -> None:
    """Set up logging configuration. Logs go to stderr, reports to stdout."""
    level = logging.DEBUG if verbose else logging.INFO
    logging.basicConfig(
        level=level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
        stream=sys.stderr,
    )


def _rational_arg(text: str) -> Fraction:
    try:
        return json_codec.parse_rational(text)
    except FormatError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _require(path: Optional[str], flag: str) -> str:
    if not path:
        raise ParameterError(f"{flag} is required for this command")
    return path


def _universe(config: RunConfig) -> Optional[Universe]:
    return None if config.depth is None else Universe(config.depth)


def _root(args: argparse.Namespace, universe: Optional[Universe] = None) -> DyadicInterval:
    root = ROOT if args.root is None else DyadicInterval(*args.root)
    if universe is not None:
        universe.check(root)
    return root


def _load_tau(config: RunConfig) -> Rearrangement:
    path = _require(config.tau, "--tau")
    tau = json_codec.rearrangement_from_json(json_codec.load_json(path), config.depth)
    logging.debug(f"loaded {tau!r} from {path}")
    return tau


def _load_family(config: RunConfig, universe: Optional[Universe]) -> Optional[IntervalSet]:
    if not config.family:
        return None
    return json_codec.collection_from_json(json_codec.load_json(config.family), universe)


def _emit(config: RunConfig, title: str, data: Any, status: Optional[bool] = None,
          text: Optional[str] = None) -> None:
    """Write a report to --out (atomically) or to stdout."""
    if config.output_format == "table":
        body = text if text is not None else render(title, data, status, colour=config.out is None)
    else:
        body = json_codec.dumps(data)
    if config.out:
        json_codec.write_text(config.out, body)
        logging.info(f"Report written to {config.out}")
    else:
        sys.stdout.write(body)
        sys.stdout.flush()


def carleson_command(config: RunConfig, args: argparse.Namespace) -> int:
    """
    Execute the carleson command.

    Args:
        config: Run configuration
        args: Command-line arguments

    Returns:
        Exit code
    """
    path = _require(config.input, "--input")
    collection = json_codec.collection_from_json(json_codec.load_json(path), _universe(config))
    report = CarlesonAnalyzer.carleson_constant(collection, include_sums=args.sums)
    logging.debug(f"{len(collection)} intervals, constant {report.constant}")
    _emit(config, "Carleson constant", json_codec.carleson_report_to_json(report))
    return EXIT_OK


def bmo_command(config: RunConfig, args: argparse.Namespace) -> int:
    path = _require(config.input, "--input")
    x = json_codec.expansion_from_json(json_codec.load_json(path), _universe(config))
    report = CarlesonAnalyzer.bmo_report(x)
    data = {
        "norm_sq": json_codec.rational_to_str(report.constant),
        "norm": sqrt_fraction(report.constant),
        "witness": report.witness.to_pair() if report.witness is not None else None,
    }
    _emit(config, "BMO norm", data)
    return EXIT_OK


def decompose_command(config: RunConfig, args: argparse.Namespace) -> int:
    """
    Execute the decompose command: build a Property P certificate for tau
    under the root interval and optionally write the colouring trace.
    """
    tau = _load_tau(config)
    root = _root(args, tau.universe)
    family = _load_family(config, tau.universe)
    decomposer = GenerationalDecomposer(tau, config.threshold, args.carleson_bound, args.sweep)
    logging.info(f"Decomposing {root} with A = {decomposer.threshold}...")
    certificate, tree = decomposer.decompose(root, family)
    logging.info(f"{len(tree.generations)} generations, {len(certificate.blocks)} blocks")

    if config.trace:
        json_codec.write_text(config.trace, "\n".join(tree.trace_lines()) + "\n")
        logging.info(f"Trace written to {config.trace}")
    _emit(config, "Certificate", json_codec.certificate_to_json(certificate))
    return EXIT_OK


Decomposition = Union[PropertyPCertificate, ConditionSSplit]


def _load_decomposition(path: str, universe: Universe) -> Decomposition:
    """A certificate {"root", "blocks"} or a condition-S split {"root", "L", "E"}."""
    document = json_codec.load_json(path)
    if isinstance(document, dict) and "blocks" not in document and "L" in document:
        return json_codec.split_from_json(document, universe)
    return json_codec.certificate_from_json(document, universe)


def _verdict(config: RunConfig, args: argparse.Namespace, tau: Rearrangement,
             decomposition: Decomposition) -> Verdict:
    verifier = PropertyVerifier(tau)
    if isinstance(decomposition, ConditionSSplit):
        return verifier.verify_condition_s(decomposition.root, decomposition, args.bound)

    certificate = decomposition
    check = args.check
    if check == "merged":
        return verifier.verify_merged(certificate.root, certificate, args.bound)
    if check == "condition_s":
        return verifier.verify_condition_s(certificate.root, certificate.flatten(), args.bound)
    if certificate.mode is Mode.WEAK and check == "auto":
        family = _load_family(config, tau.universe)
        if family is None:
            raise ParameterError("--family is required to verify a weak certificate")
        verdict = verifier.verify_weak_property_p(family, certificate.root, certificate, args.bound)
    else:
        verdict = verifier.verify_property_p(certificate.root, certificate, args.bound)

    declared = certificate.constants
    if declared is not None and verdict.constants:
        for key, value in declared.as_dict().items():
            if value is not None and key in verdict.constants and verdict.constants[key] != value:
                logging.warning(f"certificate declares {key} = {value}, recomputed {verdict.constants[key]}")
    return verdict


def verify_command(config: RunConfig, args: argparse.Namespace) -> int:
    """
    Execute the verify command.

    Returns:
        0 if the verdict holds, 2 if it fails; the report is written either way.
    """
    tau = _load_tau(config)
    decomposition = _load_decomposition(_require(config.certificate, "--certificate"), tau.universe)
    verdict = _verdict(config, args, tau, decomposition)
    data = json_codec.verdict_to_json(verdict)

    if config.input and verdict.failure is None:
        x = json_codec.expansion_from_json(json_codec.load_json(config.input), tau.universe)
        estimate = PropertyVerifier(tau).packing_estimate(decomposition.root, decomposition, x)
        data["packing"] = {
            "s1": json_codec.rational_to_str(estimate.s1),
            "s2": json_codec.rational_to_str(estimate.s2),
            "s1_bound": json_codec.rational_to_str(estimate.s1_bound),
            "s2_bound": json_codec.rational_to_str(estimate.s2_bound),
            "holds": estimate.holds(),
        }

    if verdict.holds:
        logging.info(f"Verdict holds with M = {verdict.overall}")
    else:
        logging.warning(f"Verdict fails: {verdict.failure or f'M = {verdict.overall} > {verdict.bound}'}")
    _emit(config, f"Verdict ({verdict.mode})", data, status=verdict.holds)
    return EXIT_OK if verdict.holds else EXIT_FAILED_VERDICT


def split_command(config: RunConfig, args: argparse.Namespace) -> int:
    path = _require(config.input, "--input")
    document = json_codec.load_json(path)
    if args.method == "jones":
        family = json_codec.collection_from_json(document, _universe(config))
        report = CarlesonSplitter.jones_split_report(family)
    else:
        tau = _load_tau(config)
        x = json_codec.expansion_from_json(document, tau.universe)
        if args.rationalize:
            x = CarlesonSplitter.rationalize(x, config.grid)
        report = CarlesonSplitter.coefficient_split_report(x, config.grid, _root(args, tau.universe), tau)

    data = json_codec.split_report_to_json(report)
    text = render_parts(f"Split ({report.method})", data["parts"], data["constants"])
    _emit(config, "Split", data, text=text)
    return EXIT_OK


def bounds_command(config: RunConfig, args: argparse.Namespace) -> int:
    tau = _load_tau(config)
    if config.mode is not None and config.mode not in MODES:
        raise ParameterError(f"unknown oracle mode {config.mode!r}; expected one of {MODES}")
    report = NormOracle(tau).bounds(config.budget, config.seed, config.mode)
    if not report.certified:
        logging.warning("upper bound is not certified for this domain size")
    _emit(config, "Operator norm bounds", json_codec.norm_report_to_json(report))
    return EXIT_OK


def example_command(config: RunConfig, args: argparse.Namespace) -> int:
    """
    Execute the example command: build the staged counterexample and write
    rho.json, sigma.json, tau.json and stage_report.json into --out.
    """
    if args.default_recursion:
        depth = config.depth
        if depth is None:
            raise ParameterError("--depth is required with --default-recursion")
        params = Section5Params.default_recursion(depth, args.stages, args.eps)
    else:
        params = json_codec.params_from_json(json_codec.load_json(_require(config.input, "--input")))
        if config.depth is not None and config.depth != params.depth:
            raise FormatError(f"parameters have depth {params.depth} but the run uses depth {config.depth}")

    directory = _require(config.out, "--out")
    os.makedirs(directory, exist_ok=True)
    bundle = build_section5(params)
    stage_report = json_codec.stage_report_to_json(bundle.stage_report)
    outputs = {
        "rho.json": json_codec.rearrangement_to_json(bundle.rho),
        "sigma.json": json_codec.rearrangement_to_json(bundle.sigma),
        "tau.json": json_codec.rearrangement_to_json(bundle.tau),
        "params.json": json_codec.params_to_json(params),
        "stage_report.json": stage_report,
    }
    for name, data in outputs.items():
        json_codec.write_json(os.path.join(directory, name), data)
    logging.info(f"Wrote {len(outputs)} files to {directory}")

    _emit(replace(config, out=None), "Stage report", stage_report)
    return EXIT_OK


def random_command(config: RunConfig, args: argparse.Namespace) -> int:
    if config.depth is None:
        raise ParameterError("--depth is required for random generation")
    generator = RandomGenerator(config.seed)
    data: Any
    if args.kind == "rearrangement":
        data = json_codec.rearrangement_to_json(generator.rearrangement(config.depth, args.level_preserving))
    elif args.kind == "collection":
        data = json_codec.collection_to_json(generator.collection(config.depth, args.density))
    else:
        data = json_codec.expansion_to_json(generator.expansion(config.depth, args.density))
    _emit(config, f"Random {args.kind}", data)
    return EXIT_OK


COMMANDS = {
    "carleson": carleson_command,
    "bmo": bmo_command,
    "decompose": decompose_command,
    "verify": verify_command,
    "split": split_command,
    "bounds": bounds_command,
    "example": example_command,
    "random": random_command,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="haarbmo",
        description="haarbmo: Haar rearrangements on dyadic BMO",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    parser.add_argument("--verbose", "-v", action="store_true", help="Enable verbose output")
    parser.add_argument("--config", help="Configuration file (default: ./haarbmo.toml if present)")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")

    # Shared flags default to None so that haarbmo.toml can fill them in.
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--depth", type=int, help="Universe depth D")
    common.add_argument("--input", help="Input file (collection, expansion or parameters)")
    common.add_argument("--tau", help="Rearrangement file")
    common.add_argument("--certificate", help="Certificate or split file")
    common.add_argument("--family", help="Collection file restricting the decomposition")
    common.add_argument("--A", dest="threshold", type=_rational_arg, help="Colouring threshold A")
    common.add_argument("--K", dest="grid", type=int, help="Grid size K of the coefficient split")
    common.add_argument("--seed", type=int, help="Random seed")
    common.add_argument("--budget", type=int, help="Greedy starts and ascent rounds")
    common.add_argument("--mode", choices=MODES, help="Oracle mode")
    common.add_argument("--out", help="Output file (directory for example)")
    common.add_argument("--format", dest="output_format", choices=FORMATS, help="Report format")
    common.add_argument("--root", type=int, nargs=2, metavar=("N", "K"), help="Root interval I(N,K)")

    subparsers = parser.add_subparsers(dest="command", help="Command to execute")

    carleson_parser = subparsers.add_parser("carleson", parents=[common], help="Carleson constant of a collection")
    carleson_parser.add_argument("--sums", action="store_true", help="Include the packing sum of every interval")

    subparsers.add_parser("bmo", parents=[common], help="BMO norm of a Haar expansion")

    decompose_parser = subparsers.add_parser("decompose", parents=[common], help="Build a Property P certificate")
    decompose_parser.add_argument("--carleson-bound", type=_rational_arg,
                                  help="Bound M on the Carleson distortion; A defaults to 2M")
    decompose_parser.add_argument("--sweep", choices=SWEEP_ORDERS, default="canonical",
                                  help="Order of the recolouring sweeps")
    decompose_parser.add_argument("--trace", help="Write the colouring trace to this file")

    verify_parser = subparsers.add_parser("verify", parents=[common], help="Verify a certificate or split")
    verify_parser.add_argument("--bound", type=_rational_arg, help="Fail if the overall constant exceeds this")
    verify_parser.add_argument("--check", choices=CHECKS, default="auto", help="Which property to check")

    split_parser = subparsers.add_parser("split", parents=[common], help="Split into Carleson-thin classes")
    split_parser.add_argument("--method", choices=("jones", "coefficient"), default="jones")
    split_parser.add_argument("--rationalize", action="store_true",
                              help="Truncate coefficients onto the 1/K grid first (K a perfect square)")

    subparsers.add_parser("bounds", parents=[common], help="Lower and upper bounds on the operator norm")

    example_parser = subparsers.add_parser("example", help="Build example rearrangements")
    example_subparsers = example_parser.add_subparsers(dest="example", required=True)
    section5_parser = example_subparsers.add_parser("section5", parents=[common], help="The staged counterexample")
    section5_parser.add_argument("--default-recursion", action="store_true",
                                 help="Use the default stage recursion instead of --input")
    section5_parser.add_argument("--stages", type=int, default=3, help="Number of stages with --default-recursion")
    section5_parser.add_argument("--eps", type=int, default=1, help="Squeeze exponent with --default-recursion")

    random_parser = subparsers.add_parser("random", parents=[common], help="Seeded random inputs")
    random_parser.add_argument("--kind", choices=("rearrangement", "collection", "expansion"),
                               default="rearrangement")
    random_parser.add_argument("--level-preserving", action="store_true")
    random_parser.add_argument("--density", type=float, default=0.5)
    return parser


def _cli_values(args: argparse.Namespace) -> Dict[str, Any]:
    names = ("command", "depth", "threshold", "grid", "seed", "budget", "mode", "output_format",
             "input", "tau", "certificate", "family", "out", "trace")
    return {name: getattr(args, name, None) for name in names}


def main(argv: Optional[List[str]] = None) -> int:
    """
    Main entry point for the CLI.

    Returns:
        0 on success, 1 if the command could not run, 2 if a verdict fails.
    """
    parser = build_parser()
    args = parser.parse_args(argv)
    setup_logging(args.verbose)

    command = COMMANDS.get(args.command)
    if command is None:
        parser.print_help()
        return EXIT_ERROR

    try:
        config = build_config(_cli_values(args), args.config)
        return command(config, args)
    except HaarBMOError as e:
        logging.error(str(e))
        return EXIT_ERROR
    except OSError as e:
        logging.error(f"{e.strerror}: {e.filename}" if e.filename else str(e))
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
