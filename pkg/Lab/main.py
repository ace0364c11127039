import sys
import os
import argparse
import logging
import math
import re
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

# Handle our file paths properly.
sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
from proto import lab_pb2
import lab_config
import Exporter
from Bounds import bounds_report, scatter, table_proto
from DistanceLab import DEGREE_BOUND, DistanceReport, degree_lower_bound, distance_report, sampled_weight_floor
from EvaluationCode import ErasurePattern, encode, locality, random_message, repair
from FiniteField import field_make
from LabErrors import EXIT_OK, EXIT_USAGE, EXIT_VERIFICATION, LabError, StructureError, UsageError
from Presets import build_preset, table_presets
from ResultStore import ResultStore
from StructureSuite import FAILED, PASSED, report_proto, verify_all
from Tower import builtin_tower, check_recursion, enumerate_places, split_graph


# MARK: Initialize Logger
# Configure logging set-up. We want to log times & types of logs, as well as
# function names & the subsequent message.
logging.basicConfig(
    level=logging.INFO,
    format='%(asctime)s - %(levelname)s - %(funcName)s - %(message)s'
)

# Create a logger
logger = logging.getLogger(__name__)

COMMANDS = ("field", "places", "build", "params", "repair-demo", "distance", "verify", "bounds", "scatter")
FORMATS = ("json", "csv", "dot", "bin")


@dataclass
class RunConfig:
    """Everything one invocation needs; built from the command line by parse_arguments."""
    command: str
    q: int = 8
    m: int = None
    modulus: int = None
    tower: str = None
    depth: int = 1
    preset: str = None
    l: int = None
    seed: int = 0
    budget: int = lab_config.DEFAULT_SEARCH_BUDGET
    trials: int = 0
    position: int = 0
    r: int = None
    delta: Fraction = None
    output_format: str = "json"
    output_path: str = None
    matrix: bool = False
    cache: str = None
    sweep: bool = None


# MARK: Command-line arguments.
def validate_q(value):
    """Validate an enumeration alphabet size"""
    try:
        q = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"Invalid q: {value}")
    if q not in lab_config.ENUMERATION_QS:
        raise argparse.ArgumentTypeError(f"q must be one of {lab_config.ENUMERATION_QS}, got {q}")
    return q


def validate_budget(value):
    """Validate a search budget given as an integer or as base^exponent"""
    match = re.fullmatch(r"\s*(\d+)\s*(?:(?:\^|\*\*)\s*(\d+))?\s*", value)
    if not match:
        raise argparse.ArgumentTypeError(f"Invalid budget: {value}")
    base, exponent = match.groups()
    return int(base) ** int(exponent) if exponent else int(base)


def validate_delta(value):
    """Validate a relative distance, kept exact"""
    try:
        delta = Fraction(value)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"Invalid delta: {value}")
    if not 0 <= delta <= 1:
        raise argparse.ArgumentTypeError(f"delta must lie in [0, 1], got {value}")
    return delta


def validate_modulus(value):
    """Validate a modulus bitmask, in decimal, hex (0x..) or binary (0b..)"""
    try:
        return int(value, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"Invalid modulus: {value}")


def build_parser():
    parser = argparse.ArgumentParser(description='LRC tower lab')

    parser.add_argument('command', choices=COMMANDS, help='What to run')
    parser.add_argument('--q', type=validate_q, default=8, help='Alphabet size q (default: 8)')
    parser.add_argument('--m', type=int, default=None, help='Extension degree for the field command (default: 2 log2 q)')
    parser.add_argument('--modulus', type=validate_modulus, default=None, help='Modulus bitmask for the field command')
    parser.add_argument('--tower', default=None, help='Tower for the places command: f4, f8 or gs-q<q> (default: gs-q<q>)')
    parser.add_argument('--depth', type=int, default=1, help='Tower depth for the places command (default: 1)')
    parser.add_argument('--preset', default=None, help='Preset code name, e.g. f8-prop44')
    parser.add_argument('--l', type=int, default=None, help='Shortcut for gs-cor38-q<q>-l<l> when no preset is given')
    parser.add_argument('--seed', type=int, default=0, help='Seed for every random draw (default: 0)')
    parser.add_argument('--budget', type=validate_budget, default=lab_config.DEFAULT_SEARCH_BUDGET,
                        help='Largest number of messages an exhaustive search may visit, e.g. 8^10 (default: 2^31)')
    parser.add_argument('--trials', type=int, default=0, help='Random codewords sampled by the distance command (default: 0)')
    parser.add_argument('--position', type=int, default=0, help='Coordinate erased by repair-demo (default: 0)')
    parser.add_argument('--r', type=int, default=None, help='Locality for the bounds command')
    parser.add_argument('--delta', type=validate_delta, default=None, help='Relative distance for the bounds command, e.g. 3/8')
    parser.add_argument('--format', dest='output_format', choices=FORMATS, default=None,
                        help='Output format (default: from the --out extension, else json)')
    parser.add_argument('--out', dest='output_path', default=None, help='Output file (default: stdout)')
    parser.add_argument('--matrix', action='store_true', help='build: emit the generator matrix instead of parameters')
    parser.add_argument('--cache', nargs='?', const=lab_config.RESULT_DB, default=None,
                        help=f'Use the sqlite result cache (default file: {lab_config.RESULT_DB})')
    parser.add_argument('--no-sweep', dest='sweep', action='store_false', default=None,
                        help='scatter: leave out the cor38 sweep')
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument('--verbose', action='store_true', help='Log at DEBUG level')
    verbosity.add_argument('--quiet', action='store_true', help='Log warnings and errors only')
    return parser


def parse_arguments(argv=None):
    """Parse command line arguments into a RunConfig and a log level."""
    args = build_parser().parse_args(argv)
    output_format = args.output_format
    if output_format is None:
        extension = os.path.splitext(args.output_path or "")[1].lstrip(".").lower()
        output_format = extension if extension in FORMATS else "json"
    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    config = RunConfig(
        command=args.command,
        q=args.q,
        m=args.m,
        modulus=args.modulus,
        tower=args.tower,
        depth=args.depth,
        preset=args.preset,
        l=args.l,
        seed=args.seed,
        budget=args.budget,
        trials=args.trials,
        position=args.position,
        r=args.r,
        delta=args.delta,
        output_format=output_format,
        output_path=args.output_path,
        matrix=args.matrix,
        cache=args.cache,
        sweep=args.sweep,
    )
    return config, level


def configure_logging(level):
    logging.getLogger().setLevel(level)
    diagnostics = logging.getLogger(lab_config.DIAGNOSTICS_LOGGER)
    if not diagnostics.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter('%(levelname)s - diagnostics - %(message)s'))
        diagnostics.addHandler(handler)
    diagnostics.setLevel(logging.INFO)
    diagnostics.propagate = False


# MARK: Helpers
def _require(config, *formats):
    if config.output_format not in formats:
        raise UsageError(f"{config.command} writes {' or '.join(formats)}, not {config.output_format}")


def _preset_name(config):
    if config.preset:
        return config.preset
    if config.l is not None:
        return f"gs-cor38-q{config.q}-l{config.l}"
    raise UsageError(f"{config.command} needs --preset (or --l for a cor38 code)")


def _parameters(name, code, report, sampled_floor=math.inf):
    return lab_pb2.CodeParameters(
        schema_version=lab_config.SCHEMA_VERSION,
        preset=name,
        n=code.n,
        k=code.rank,
        k_nominal=code.k_nominal,
        r=locality(code),
        distance=report.to_proto(),
        sampled_floor=0 if math.isinf(sampled_floor) else int(sampled_floor),
        d=report.best,
    )


def _render(config, message, csv_writer):
    if config.output_format == "csv":
        return csv_writer(message)
    if config.output_format == "bin":
        return message.SerializeToString()
    return Exporter.message_json(message)


# MARK: Commands
def run_field(config):
    _require(config, "json", "csv", "bin")
    m = config.m or 2 * (config.q.bit_length() - 1)
    field = field_make(m, config.modulus)
    return _render(config, field.describe(), Exporter.field_csv), EXIT_OK


def run_places(config):
    tower = builtin_tower(config.tower or f"gs-q{config.q}")
    if config.output_format == "dot":
        return Exporter.graph_dot(split_graph(tower)), EXIT_OK
    places = enumerate_places(tower, config.depth)
    broken = check_recursion(places)
    if broken:
        raise StructureError(
            f"{len(broken)} places of {tower.name} break the defining equation", element=broken[0], depth=config.depth
        )
    if config.output_format == "csv":
        return Exporter.places_csv(places), EXIT_OK
    _require(config, "json", "bin")
    return _render(config, Exporter.place_list(places), None), EXIT_OK


def run_build(config):
    name = _preset_name(config)
    code = build_preset(name)
    if config.matrix:
        matrix = Exporter.generator_matrix_proto(code)
        if config.output_format == "csv":
            return Exporter.generator_matrix_csv(code), EXIT_OK
        _require(config, "json", "bin")
        return _render(config, matrix, None), EXIT_OK
    _require(config, "json", "csv", "bin")
    report = distance_report(code, budget=config.budget, prefer_bounds=True)
    return _render(config, _parameters(name, code, report), Exporter.parameters_csv), EXIT_OK


def run_params(config):
    _require(config, "json", "csv", "bin")
    name = _preset_name(config)
    code = build_preset(name)
    report = DistanceReport(degree_lower_bound(code), DEGREE_BOUND)
    return _render(config, _parameters(name, code, report), Exporter.parameters_csv), EXIT_OK


def run_distance(config):
    _require(config, "json", "csv", "bin")
    name = _preset_name(config)
    code = build_preset(name)
    store = None
    report = None
    if config.cache:
        store = ResultStore(config.cache)
        store.setup_databases()
        report = store.load_distance(name, config.budget)
        if report is not None:
            logger.info(f"Using cached distance for {name}")
    if report is None:
        report = distance_report(code, budget=config.budget)
        if store is not None:
            store.save_distance(name, config.budget, report)
    floor = sampled_weight_floor(code, config.trials, seed=config.seed)
    if floor < report.d_lower:
        logger.error(f"{name}: sampled codeword of weight {floor} is below the lower bound {report.d_lower}")
        return _render(config, _parameters(name, code, report, floor), Exporter.parameters_csv), EXIT_VERIFICATION
    return _render(config, _parameters(name, code, report, floor), Exporter.parameters_csv), EXIT_OK


def run_repair_demo(config):
    _require(config, "json", "csv", "bin")
    name = _preset_name(config)
    code = build_preset(name)
    rng = np.random.default_rng(config.seed)
    codeword = encode(code, random_message(code, rng))
    recovered = repair(code, ErasurePattern(codeword, config.position))
    fiber = code.repair_index.fiber(config.position)
    demo = lab_pb2.RepairDemo(
        schema_version=lab_config.SCHEMA_VERSION,
        preset=name,
        position=config.position,
        erased_hex=code.field.to_hex(codeword[config.position]),
        repaired_hex=code.field.to_hex(recovered),
        fiber=list(fiber),
        ok=bool(recovered == codeword[config.position]),
    )
    if not demo.ok:
        logger.error(f"{name}: repair of position {config.position} gave {demo.repaired_hex}, expected {demo.erased_hex}")
    return _render(config, demo, Exporter.repair_csv), EXIT_OK if demo.ok else EXIT_VERIFICATION


def regressions(history, results):
    """Checks that fail now but passed in some earlier recorded run."""
    passed_before = {proposition for proposition, status in history if status == PASSED}
    return [r.proposition_id for r in results if r.status == FAILED and r.proposition_id in passed_before]


def run_verify(config):
    _require(config, "json", "csv", "bin")
    results = verify_all(config.q)
    if config.cache:
        store = ResultStore(config.cache)
        store.setup_databases()
        for proposition in regressions(store.verification_history(config.q), results):
            logger.warning(f"{proposition} passed in an earlier run at q = {config.q} and fails now")
        store.record_verification(config.q, results)
    failed = [r.proposition_id for r in results if r.status == FAILED]
    if failed:
        logger.error(f"Structure suite failed at q = {config.q}: {', '.join(failed)}")
    report = report_proto(config.q, results)
    return _render(config, report, Exporter.verification_csv), EXIT_VERIFICATION if failed else EXIT_OK


def run_bounds(config):
    _require(config, "json", "csv", "bin")
    if config.r is None or config.delta is None:
        raise UsageError("bounds needs --r and --delta")
    report = bounds_report(config.r, config.q, config.delta)
    return _render(config, report, Exporter.bounds_csv), EXIT_OK


def run_scatter(config):
    _require(config, "json", "csv", "bin")
    sweep = config.sweep
    if sweep is None:
        # The cor38 witnesses need q an odd power of two.
        sweep = (config.q.bit_length() - 1) % 2 == 1
    rows = scatter(table_presets(config.q), config.q, sweep=sweep, budget=config.budget)
    if config.output_format == "csv":
        return Exporter.scatter_csv(rows), EXIT_OK
    return _render(config, table_proto(config.q, rows), None), EXIT_OK


_RUNNERS = {
    "field": run_field,
    "places": run_places,
    "build": run_build,
    "params": run_params,
    "repair-demo": run_repair_demo,
    "distance": run_distance,
    "verify": run_verify,
    "bounds": run_bounds,
    "scatter": run_scatter,
}


def run(config):
    """
    Executes one command and writes its artifact.

    Returns:
        int: the exit status (0 success, 2 usage, 3 verification failure,
        4 capability or budget refusal).
    """
    try:
        payload, status = _RUNNERS[config.command](config)
    except LabError as e:
        logger.error(f"{config.command} failed: {str(e)}")
        return e.exit_code
    Exporter.write_output(payload, config.output_path)
    return status


def main(argv=None):
    try:
        config, level = parse_arguments(argv)
    except SystemExit as e:
        # argparse exits with 2 on bad usage and 0 on --help.
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    configure_logging(level)
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
