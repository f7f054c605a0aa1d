import argparse

from ...services.curvature import BAKRY_EMERY, OLLIVIER
from ...services.gh_limit import curvature_semicontinuity_check, pgh_converges, pgh_limit
from ..inputs import add_source_arguments, int_list, load_sequence

DEFAULT_EPS = 1e-3


def _add_sequence_arguments(parser: argparse.ArgumentParser) -> None:
    add_source_arguments(parser, graph=False)
    parser.add_argument("--roots", required=True, help="Ray of roots (and optional weight drift) in JSON")
    parser.add_argument("--indices", type=int_list, required=True, help="e.g. 4..12 or 10,100,1000")
    parser.add_argument("--eps", type=float, default=DEFAULT_EPS)


def register(groups) -> None:
    parser = groups.add_parser("gh", help="Pointed Gromov-Hausdorff checks on rooted sequences")
    commands = parser.add_subparsers(dest="command", metavar="COMMAND")
    commands.required = True

    check = commands.add_parser("check", help="Ball stabilization and weight convergence at one radius")
    _add_sequence_arguments(check)
    check.add_argument("--radius", type=int, default=3)
    check.set_defaults(handler=check_handler)

    limit = commands.add_parser("limit", help="Extract the limit ball")
    _add_sequence_arguments(limit)
    limit.add_argument("--radius", type=int, default=3)
    limit.set_defaults(handler=limit_handler)

    semi = commands.add_parser("semicontinuity", help="Limit curvature against the tail of the sequence")
    _add_sequence_arguments(semi)
    semi.add_argument("--mode", choices=(BAKRY_EMERY, OLLIVIER), default=OLLIVIER)
    semi.add_argument("--tol", type=float, default=1e-6)
    semi.set_defaults(handler=semicontinuity_handler)


def check_handler(args: argparse.Namespace, config):
    return pgh_converges(load_sequence(args), config.indices, args.radius, config.eps, workers=config.workers)


def limit_handler(args: argparse.Namespace, config):
    return pgh_limit(load_sequence(args), config.indices, args.radius, config.eps)


def semicontinuity_handler(args: argparse.Namespace, config):
    return curvature_semicontinuity_check(load_sequence(args), config.indices, args.mode, config.eps, config.tol)
