import argparse

from ...schemas import ProbeRule
from ...services.ends import (
    DEFAULT_MARGIN,
    DEFAULT_SCHEDULE,
    DEFAULT_STALL_EPS,
    classify_ends,
    count_ends,
    ends_wrt,
    probe_radius_for,
    separating_harmonics,
)
from ..inputs import add_source_arguments, int_list, load_source, load_vertex_set


def _add_classification_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--schedule", type=int_list, default=list(DEFAULT_SCHEDULE), help="Barrier radii, e.g. 4,6,8")
    parser.add_argument("--margin", type=float, default=DEFAULT_MARGIN)
    parser.add_argument("--stall-eps", type=float, default=DEFAULT_STALL_EPS)


def register(groups) -> None:
    parser = groups.add_parser("ends", help="Ends of a generated graph and their parabolicity")
    commands = parser.add_subparsers(dest="command", metavar="COMMAND")
    commands.required = True

    count = commands.add_parser("count", help="N, N0 and N' along an exhaustion")
    add_source_arguments(count, graph=False)
    count.add_argument(
        "--omega", action="append", required=True,
        help="JSON list of vertices; repeat the flag for an increasing exhaustion",
    )
    count.add_argument("--probe", type=int, default=None, help="Least probe radius")
    _add_classification_arguments(count)
    count.set_defaults(handler=count_handler)

    classify = commands.add_parser("classify", help="Barrier traces and verdicts per end")
    add_source_arguments(classify, graph=False)
    classify.add_argument("--omega", required=True)
    classify.add_argument("--probe", type=int, default=None)
    _add_classification_arguments(classify)
    classify.set_defaults(handler=classify_handler)

    basis = commands.add_parser("basis", help="End-separating bounded harmonic functions")
    add_source_arguments(basis, graph=False)
    basis.add_argument("--omega", required=True)
    basis.add_argument("--probe", type=int, default=10)
    basis.add_argument("--rho", type=int, default=12, help="Radius of the Green's function ball")
    basis.add_argument("--gram-depth", type=int, default=None)
    _add_classification_arguments(basis)
    basis.set_defaults(handler=basis_handler)


def _probe_rule(args: argparse.Namespace) -> ProbeRule:
    # an explicit probe becomes the least radius; omega still gets one layer of clearance
    if args.probe is None:
        return ProbeRule()
    return ProbeRule(offset=1, minimum=args.probe)


def count_handler(args: argparse.Namespace, config):
    gen = load_source(args)
    exhaustion = [load_vertex_set(path, gen) for path in args.omega]
    return count_ends(
        gen, exhaustion, _probe_rule(args), config.schedule, config.margin, config.stall_eps, config.workers
    )


def classify_handler(args: argparse.Namespace, config):
    gen = load_source(args)
    omega = load_vertex_set(args.omega, gen)
    probe = probe_radius_for(gen, omega, _probe_rule(args))
    decomposition = ends_wrt(gen, omega, probe)
    return classify_ends(gen, decomposition, config.schedule, config.margin, config.stall_eps, config.workers)


def basis_handler(args: argparse.Namespace, config):
    gen = load_source(args)
    omega = load_vertex_set(args.omega, gen)
    return separating_harmonics(
        gen, omega, args.probe, args.rho, gram_depth=args.gram_depth,
        rho_schedule=config.schedule, margin=config.margin, stall_eps=config.stall_eps,
    )
