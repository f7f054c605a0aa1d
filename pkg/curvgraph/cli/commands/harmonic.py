import argparse

from ...core.exceptions import DomainError
from ...services.curvature import BAKRY_EMERY, OLLIVIER
from ...services.generators import GraphGenerator
from ...services.harmonic import (
    dimension_certificate,
    dirichlet_solve,
    gradient_decay_profile,
    gradient_max_principle_check,
    green_limit,
)
from ..inputs import (
    add_source_arguments,
    int_list,
    load_boundary_problem,
    load_function,
    load_source,
    load_vertex_set,
    parse_vertex,
)

DEFAULT_STALL_EPS = 1e-3


def register(groups) -> None:
    parser = groups.add_parser("harmonic", help="Dirichlet problems, Green's functions and gradient checks")
    commands = parser.add_subparsers(dest="command", metavar="COMMAND")
    commands.required = True

    solve = commands.add_parser("solve", help="Solve a Dirichlet problem on a finite graph")
    add_source_arguments(solve, gen=False)
    solve.add_argument("--boundary", required=True, help="Boundary values (and optionally the interior)")
    solve.add_argument("--tol", type=float, default=None)
    solve.set_defaults(handler=solve_dirichlet)

    green = commands.add_parser("green", help="Green's functions on growing balls and their limit")
    add_source_arguments(green, graph=False)
    green.add_argument("--source", required=True, help="Pole x1 as a JSON token")
    green.add_argument("--rho-schedule", dest="schedule", type=int_list, default=[4, 6, 8])
    green.add_argument("--stall-eps", type=float, default=DEFAULT_STALL_EPS)
    green.add_argument("--window", type=int, default=None, help="Radius of the tabulated window around x1")
    green.set_defaults(handler=green_table)

    dim = commands.add_parser("dimbound", help="Certify dim H_0 <= #S_{R0+1}(x0)")
    add_source_arguments(dim, graph=False)
    dim.add_argument("--x0", help="Centre; the root by default")
    dim.add_argument("--R0", dest="R0", type=int, default=1)
    dim.add_argument("--mode", choices=(BAKRY_EMERY, OLLIVIER), default=OLLIVIER)
    dim.add_argument("--probe", type=int, default=4)
    dim.add_argument("--omega", help="JSON list of the excluded vertices; B_R0(x0) by default")
    dim.set_defaults(handler=dimbound)

    maxgrad = commands.add_parser("maxgrad", help="Gradient maximum principle on a finite set")
    add_source_arguments(maxgrad, gen=False)
    maxgrad.add_argument("--function", required=True, help="Harmonic function on the graph")
    maxgrad.add_argument("--region", help="JSON list of the vertices of W; all vertices when omitted")
    maxgrad.add_argument("--tol", type=float, default=None)
    maxgrad.set_defaults(handler=max_gradient)

    decay = commands.add_parser("decay", help="Per-sphere gradient profile of a function")
    add_source_arguments(decay)
    decay.add_argument("--function", required=True)
    decay.add_argument("--radii", type=int_list, required=True)
    decay.add_argument("--x0", help="Centre; the root of a generator by default")
    decay.set_defaults(handler=decay_profile)


def solve_dirichlet(args: argparse.Namespace, config):
    g = load_source(args)
    interior, boundary = load_boundary_problem(args.boundary, g)
    if interior is None:
        interior = frozenset(g.vertices) - frozenset(boundary)
    return dirichlet_solve(g, interior, boundary, tol=config.tol)


def green_table(args: argparse.Namespace, config):
    gen = load_source(args)
    x1 = parse_vertex(args.source, gen)
    return green_limit(gen, x1, config.schedule, config.stall_eps, window_radius=args.window)


def dimbound(args: argparse.Namespace, config):
    gen = load_source(args)
    x0 = parse_vertex(args.x0, gen) if args.x0 else gen.root
    omega = load_vertex_set(args.omega, gen) if args.omega else None
    return dimension_certificate(gen, x0, args.R0, mode=args.mode, probe=args.probe, omega=omega, workers=config.workers)


def max_gradient(args: argparse.Namespace, config):
    g = load_source(args)
    u = load_function(args.function, g)
    W = load_vertex_set(args.region, g) if args.region else frozenset(g.vertices)
    return gradient_max_principle_check(g, W, u, tol=config.tol)


def decay_profile(args: argparse.Namespace, config):
    source = load_source(args)
    u = load_function(args.function, source)
    x0 = parse_vertex(args.x0, source) if args.x0 else None
    if x0 is None and not isinstance(source, GraphGenerator):
        raise DomainError("--x0 is required with --graph.")
    return gradient_decay_profile(source, u, args.radii, x0=x0)
