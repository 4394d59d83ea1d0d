"""Command line interface for nonnormal."""

import argparse
import sys
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

try:
    from importlib.metadata import version
except ImportError:
    # Python < 3.8 fallback
    from importlib_metadata import version

from . import __description__, __version__
from .core.classifier import ClassificationConfig, NumberClass, classify
from .core.dimension import (DimensionReport, besicovitch_eggleston, covering_dimension_report,
                             estimate_report, g_dimension_sup)
from .core.errors import EXIT_OK, DomainError, NonNormalError, ParameterError, exit_code_for
from .core.frequency import StochasticVector, default_checkpoints
from .core.measure import (cdf, dimension_of_measure, mu_p, sample, sample_values)
from .core.streams import (DigitStream, block_oscillator_stream, champernowne_stream,
                           file_stream, periodic_stream, random_stream, rational_stream)
from .core.summary import build_summary_table
from .core.transform import (Fixed, TransformParams, covering_rank, f, f_inverse, free_count,
                             group_end, position_class)
from .utils import logger
from .utils.config import SUPPORTED_FORMATS, ConfigManager, get_config
from .utils.file_utils import write_output
from .utils.report_utils import Report, make_report, render

DEFAULT_BASE = 3
DEFAULT_CDF_PRECISION = 200


def parse_source(text: str, base: int, seed: int = 0) -> DigitStream:
    """Build a digit stream from a --source text.

    zero | rational:P/Q | champernowne | periodic:DIGITS | oscillator:A,B |
    file:PATH | random[:SEED] | transformed:P,SOURCE
    """
    name, _, arg = text.partition(':')
    if name == 'zero' and not arg:
        return rational_stream(Fraction(0), base)
    if name == 'champernowne' and not arg:
        return champernowne_stream(base)
    if name == 'rational':
        try:
            x = Fraction(arg)
        except (ValueError, ZeroDivisionError):
            raise ParameterError(f"bad rational in source '{text}'")
        return rational_stream(x, base)
    if name == 'periodic':
        parts = arg.split(',') if ',' in arg else list(arg)
        try:
            pattern = [int(part, 36) if len(part) == 1 else int(part) for part in parts]
        except ValueError:
            raise ParameterError(f"bad digit pattern in source '{text}'")
        return periodic_stream(base, pattern)
    if name == 'oscillator':
        try:
            a, b = (int(part) for part in arg.split(','))
        except ValueError:
            raise ParameterError(f"oscillator needs two digits a,b: '{text}'")
        return block_oscillator_stream(base, a, b)
    if name == 'file' and arg:
        return file_stream(arg, base)
    if name == 'random':
        try:
            return random_stream(base, int(arg) if arg else seed)
        except ValueError:
            raise ParameterError(f"bad seed in source '{text}'")
    if name == 'transformed':
        p_text, _, inner = arg.partition(',')
        try:
            p = int(p_text)
        except ValueError:
            raise ParameterError(f"transformed needs p,SOURCE: '{text}'")
        return f(TransformParams(base, p), parse_source(inner or 'champernowne', base, seed))
    raise ParameterError(f"unknown source '{text}'")


def parse_int_list(text: str) -> List[int]:
    try:
        values = [int(part) for part in text.split(',') if part.strip()]
    except ValueError:
        raise ParameterError(f"expected comma-separated integers, got '{text}'")
    if not values:
        raise ParameterError("empty list")
    return values


def _pick(value, fallback):
    return fallback if value is None else value


def _report(args, params: Dict[str, Any], results: List[Dict[str, Any]],
            provenance: str = "computed") -> Report:
    params = dict(params)
    params.setdefault("base", args.base)
    return make_report(args.command, params, results, provenance, __version__)


def _dimension_rows(report: DimensionReport) -> List[Dict[str, Any]]:
    rows = [dict(record="summary", **report.summary())]
    rows.extend(dict(record="evidence", **row) for row in report.evidence)
    rows.extend({"record": "note", "text": note} for note in report.notes)
    return rows


def cmd_classify(args, cfg: ConfigManager) -> Report:
    depth = _pick(args.depth, cfg.get_depth())
    seed = _pick(args.seed, cfg.get_seed())
    if args.checkpoints:
        checkpoints = parse_int_list(args.checkpoints)
    else:
        checkpoints = default_checkpoints(depth, cfg.get_checkpoint_start(),
                                          cfg.get_checkpoint_ratio())
    config = ClassificationConfig(
        depth=depth,
        checkpoints=checkpoints,
        delta=_pick(args.delta, cfg.get_delta()),
        epsilon=_pick(args.epsilon, cfg.get_epsilon()),
    )
    stream = parse_source(args.source, args.base, seed)
    logger.debug(f"classifying {stream.description} to depth {depth}")
    result: NumberClass = classify(stream, config)

    rows: List[Dict[str, Any]] = [{"record": "class", "tag": result.tag}]
    for v in result.verdicts:
        rows.append({"record": "verdict", "digit": v.digit, "verdict": v.label,
                     "spread": v.spread, "estimate": v.estimate})
    for entry in result.profile.checkpoints:
        row: Dict[str, Any] = {"record": "checkpoint", "position": entry.position}
        for d, ratio in enumerate(entry.ratios):
            row[f"ratio_{d}"] = ratio
        rows.append(row)
    params = {"source": args.source, "depth": depth, "delta": config.delta,
              "epsilon": config.epsilon}
    return _report(args, params, rows)


def cmd_transform(args, cfg: ConfigManager) -> Report:
    params = TransformParams(args.base, args.p)
    if args.n < 1:
        raise ParameterError(f"-n must be >= 1, got {args.n}")
    source = parse_source(args.source, args.base, _pick(args.seed, cfg.get_seed()))
    rows: List[Dict[str, Any]] = []
    if args.direction == 'forward':
        for n, digit in enumerate(f(params, source).take(args.n), start=1):
            cls = position_class(params, n)
            if isinstance(cls, Fixed):
                rows.append({"position": n, "digit": digit, "class": "fixed",
                             "source_index": None})
            else:
                rows.append({"position": n, "digit": digit, "class": "free",
                             "source_index": cls.source_index})
    else:
        for j, digit in enumerate(f_inverse(params, source).take(args.n), start=1):
            rows.append({"position": j, "digit": digit})
    if len(rows) < args.n:
        raise DomainError(f"{source.description} ended after {len(rows)} of {args.n} "
                          f"{args.direction} digits")
    return _report(args, {"p": args.p, "source": args.source, "n": args.n,
                          "direction": args.direction}, rows)


def cmd_dimension(args, cfg: ConfigManager) -> Report:
    kind = args.dimension_command
    if kind == 'be':
        nu = StochasticVector.parse(args.nu)
        value = besicovitch_eggleston(nu, args.base)
        exact = Fraction(int(value)) if value in (0.0, 1.0) else None
        report = DimensionReport(kind="be", exact=exact, numeric=value)
        return _report(args, {"nu": list(nu.entries)}, _dimension_rows(report))
    if kind == 'g-sup':
        if args.pmax < 1:
            raise ParameterError(f"--pmax must be >= 1, got {args.pmax}")
        report = g_dimension_sup(list(range(1, args.pmax + 1)), args.base)
        return _report(args, {"pmax": args.pmax}, _dimension_rows(report))

    params = TransformParams(args.base, args.p)
    if kind == 'covering':
        report = covering_dimension_report(params, args.K)
    elif kind == 'measure':
        report = dimension_of_measure(mu_p(params), args.K)
    else:
        report = estimate_report(params, args.K)
    return _report(args, {"p": args.p, "K": args.K}, _dimension_rows(report),
                   report.provenance)


def cmd_measure(args, cfg: ConfigManager) -> Report:
    params = TransformParams(args.base, args.p)
    measure = mu_p(params)
    action = args.measure_command

    if action == 'sample':
        seed = _pick(args.seed, cfg.get_seed())
        if args.count == 1:
            rows = [{"position": n, "digit": d}
                    for n, d in enumerate(sample(measure, args.n, seed), start=1)]
        else:
            workers = _pick(args.workers, cfg.get_workers())
            values = sample_values(measure, args.count, args.n, seed, workers)
            rows = [{"index": i, "value": float(v)} for i, v in enumerate(values)]
        return _report(args, {"p": args.p, "n": args.n, "seed": seed, "count": args.count}, rows)

    if action == 'cdf':
        rows = []
        for text in args.t:
            try:
                t = Fraction(text)
            except (ValueError, ZeroDivisionError):
                raise ParameterError(f"bad rational --t {text}")
            bounds = cdf(measure, t, args.precision)
            rows.append({"t": t, "lower": bounds.lower, "upper": bounds.upper})
        return _report(args, {"p": args.p, "precision": args.precision}, rows)

    if args.K < 1:
        raise ParameterError(f"-K must be >= 1, got {args.K}")
    rows = []
    for k in range(1, args.K + 1):
        for label, n in (("m_k", covering_rank(params, k)), ("l_k", group_end(params, k))):
            c = free_count(params, n)
            rows.append({"k": k, "point": label, "n": n, "c_n": c, "ratio": Fraction(c, n)})
    return _report(args, {"p": args.p, "K": args.K}, rows)


def cmd_table(args, cfg: ConfigManager) -> Report:
    p_list = parse_int_list(args.p_list) if args.p_list else list(range(1, 11))
    depth = _pick(args.depth, cfg.get_depth())
    config = ClassificationConfig.default(
        depth, cfg.get_delta(), cfg.get_epsilon(),
        cfg.get_checkpoint_start(), cfg.get_checkpoint_ratio())
    table = build_summary_table(
        args.base, p_list,
        depth=depth,
        samples=_pick(args.samples, cfg.get_samples()),
        seed=_pick(args.seed, cfg.get_seed()),
        workers=_pick(args.workers, cfg.get_workers()),
        config=config,
    )
    rows = []
    for row in table.rows:
        rows.append({
            "set": row.name,
            "lebesgue_measure": row.measure.value,
            "measure_provenance": row.measure.provenance,
            "hausdorff_dimension": row.dimension.render(),
            "dimension_provenance": row.dimension.provenance,
            "dimension_note": row.dimension.note,
            "baire_category": row.category.render(),
            "category_provenance": row.category.provenance,
        })
    params = {"p_list": p_list, "depth": table.depth, "samples": table.samples,
              "undetermined": table.undetermined}
    return _report(args, params, rows)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--base", type=int, default=DEFAULT_BASE,
                        help=f"Digit base s (default: {DEFAULT_BASE})")
    common.add_argument("--format", choices=SUPPORTED_FORMATS, default=None,
                        help="Output format (default: from config, else text)")
    common.add_argument("--out", default=None, help="Output file (default: stdout)")
    common.add_argument("--config-dir", default=None,
                        help="Configuration directory (default: ~/.config/nonnormal)")
    verbosity = common.add_mutually_exclusive_group()
    verbosity.add_argument("--verbose", action="store_true", help="Show debug output")
    verbosity.add_argument("--quiet", action="store_true", help="Only show errors")

    parser = argparse.ArgumentParser(
        description=f"nonnormal - {__description__}"
    )
    subparsers = parser.add_subparsers(dest='command', help='Available commands')

    classify_parser = subparsers.add_parser('classify', parents=[common],
                                            help='Classify a digit stream')
    classify_parser.add_argument("--source", required=True,
                                 help="zero | rational:P/Q | champernowne | periodic:DIGITS | "
                                      "oscillator:A,B | file:PATH | random[:SEED] | transformed:P,SOURCE")
    classify_parser.add_argument("--depth", type=int, default=None)
    classify_parser.add_argument("--checkpoints", default=None,
                                 help="Comma-separated checkpoint positions")
    classify_parser.add_argument("--delta", type=Fraction, default=None)
    classify_parser.add_argument("--epsilon", type=Fraction, default=None)
    classify_parser.add_argument("--seed", type=int, default=None)
    classify_parser.set_defaults(handler=cmd_classify)

    transform_parser = subparsers.add_parser('transform', parents=[common],
                                             help='Apply f_p or its inverse')
    transform_parser.add_argument("-p", type=int, required=True)
    transform_parser.add_argument("--source", required=True)
    transform_parser.add_argument("-n", type=int, required=True, help="Number of digits")
    transform_parser.add_argument("--direction", choices=['forward', 'inverse'], default='forward')
    transform_parser.add_argument("--seed", type=int, default=None)
    transform_parser.set_defaults(handler=cmd_transform)

    dimension_parser = subparsers.add_parser('dimension', help='Dimension reports')
    dimension_sub = dimension_parser.add_subparsers(dest='dimension_command', required=True)
    be_parser = dimension_sub.add_parser('be', parents=[common], help='Besicovitch-Eggleston formula')
    be_parser.add_argument("--nu", required=True, help="Stochastic vector, e.g. 1/2,1/2,0")
    for name, text in (('covering', 'Special coverings of S_p'),
                       ('measure', 'Entropy dimension of mu_p'),
                       ('estimate', 'Box-dimension estimate from coverings')):
        sub = dimension_sub.add_parser(name, parents=[common], help=text)
        sub.add_argument("-p", type=int, required=True)
        sub.add_argument("-K", type=int, default=8, help="Group horizon (default: 8)")
    g_parser = dimension_sub.add_parser('g-sup', parents=[common], help='sup_p of p/(p+2)')
    g_parser.add_argument("--pmax", type=int, required=True)
    dimension_parser.set_defaults(handler=cmd_dimension)

    measure_parser = subparsers.add_parser('measure', help='The measure mu_p')
    measure_sub = measure_parser.add_subparsers(dest='measure_command', required=True)
    sample_parser = measure_sub.add_parser('sample', parents=[common], help='Draw digits')
    sample_parser.add_argument("-p", type=int, required=True)
    sample_parser.add_argument("-n", type=int, required=True, help="Digits per sample")
    sample_parser.add_argument("--seed", type=int, default=None)
    sample_parser.add_argument("--count", type=int, default=1,
                               help="Samples; above 1 emits values instead of digits")
    sample_parser.add_argument("--workers", type=int, default=None)
    cdf_parser = measure_sub.add_parser('cdf', parents=[common], help='Distribution function')
    cdf_parser.add_argument("-p", type=int, required=True)
    cdf_parser.add_argument("--t", nargs='+', required=True, help="Rational points in [0,1]")
    cdf_parser.add_argument("--precision", type=int, default=DEFAULT_CDF_PRECISION)
    entropy_parser = measure_sub.add_parser('entropy', parents=[common], help='c_n at m_k and l_k')
    entropy_parser.add_argument("-p", type=int, required=True)
    entropy_parser.add_argument("-K", type=int, required=True)
    measure_parser.set_defaults(handler=cmd_measure)

    table_parser = subparsers.add_parser('table', parents=[common], help='Summary table')
    table_parser.add_argument("-p", "--p-list", dest="p_list", default=None,
                              help="Comma-separated p values (default: 1..10)")
    table_parser.add_argument("--depth", type=int, default=None)
    table_parser.add_argument("--samples", type=int, default=None)
    table_parser.add_argument("--seed", type=int, default=None)
    table_parser.add_argument("--workers", type=int, default=None)
    table_parser.set_defaults(handler=cmd_table)

    try:
        pkg_version = version("nonnormal")
    except Exception:
        # Fallback if package not installed or metadata unavailable
        pkg_version = __version__

    parser.add_argument(
        "-v", "--version",
        action="version",
        version=f"nonnormal {pkg_version}"
    )
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    if not args.command:
        parser.print_help()
        return EXIT_OK

    if args.verbose:
        logger.set_level("debug")
    elif args.quiet:
        logger.set_level("error")

    cfg = get_config(args.config_dir)
    fmt = args.format or cfg.get_format()
    try:
        report = args.handler(args, cfg)
        write_output(render(report, fmt), args.out)
    except NonNormalError as e:
        logger.error(str(e))
        return exit_code_for(e)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
