import argparse

from ...services.curvature import (
    BAKRY_EMERY,
    OLLIVIER,
    bakry_emery_curvature,
    bakry_emery_sweep,
    curvature_outside,
    ollivier_curvature,
    ollivier_sweep,
)
from ...services.generators import GraphGenerator
from ..inputs import add_source_arguments, dimension, load_source, load_vertex_set, parse_edge, parse_vertex


def register(groups) -> None:
    parser = groups.add_parser("curvature", help="Bakry-Emery and Ollivier curvature")
    commands = parser.add_subparsers(dest="command", metavar="COMMAND")
    commands.required = True

    be = commands.add_parser("be", help="Bakry-Emery curvature K_n at a vertex, or a sweep")
    add_source_arguments(be)
    be.add_argument("--vertex", help="Vertex label or JSON token; every vertex when omitted")
    be.add_argument("--radius", type=int, default=1, help="Sweep radius around the root of a generator")
    be.add_argument("--n", type=dimension, default=float("inf"))
    be.add_argument("--tol", type=float, default=None)
    be.set_defaults(handler=bakry_emery)

    ol = commands.add_parser("ollivier", help="Ollivier curvature of an edge, or a sweep")
    add_source_arguments(ol)
    ol.add_argument("--edge", help="u,v; every edge when omitted")
    ol.add_argument("--radius", type=int, default=1, help="Sweep radius around the root of a generator")
    ol.add_argument("--exact", action="store_true", help="Rational simplex instead of HiGHS")
    ol.add_argument("--tol", type=float, default=None)
    ol.set_defaults(handler=ollivier)

    out = commands.add_parser("outside", help="Curvature hypothesis outside a finite set")
    add_source_arguments(out)
    out.add_argument("--omega", help="JSON list of the excluded vertices; empty when omitted")
    out.add_argument("--mode", choices=(BAKRY_EMERY, OLLIVIER), default=OLLIVIER)
    out.add_argument("--probe", type=int, default=4)
    out.add_argument("--x0", help="Centre of the probe ball; the root by default")
    out.add_argument("--tol", type=float, default=None)
    out.set_defaults(handler=outside)


def bakry_emery(args: argparse.Namespace, config):
    source = load_source(args)
    if isinstance(source, GraphGenerator):
        x = parse_vertex(args.vertex, source) if args.vertex else None
        if x is not None:
            return bakry_emery_curvature(source.materialize_ball(x, 2), x, args.n, config.tol)
        big = source.materialize_ball(source.root, args.radius + 2)
        vertices = [v for v, d in big.depth.items() if d <= args.radius]
        return bakry_emery_sweep(big, vertices, args.n, workers=config.workers)
    if args.vertex:
        return bakry_emery_curvature(source, parse_vertex(args.vertex, source), args.n, config.tol)
    return bakry_emery_sweep(source, n=args.n, workers=config.workers)


def ollivier(args: argparse.Namespace, config):
    source = load_source(args)
    if isinstance(source, GraphGenerator):
        if args.edge:
            x, y = parse_edge(args.edge, source)
            return ollivier_curvature(source.materialize_ball(x, 3), x, y, exact=args.exact, tol=config.tol)
        big = source.materialize_ball(source.root, args.radius + 3)
        edges = [(u, v) for u, v, _ in big.graph.edges() if big.depth[u] <= args.radius and big.depth[v] <= args.radius]
        return ollivier_sweep(big, edges, exact=args.exact, workers=config.workers)
    if args.edge:
        x, y = parse_edge(args.edge, source)
        return ollivier_curvature(source, x, y, exact=args.exact, tol=config.tol)
    return ollivier_sweep(source, exact=args.exact, workers=config.workers)


def outside(args: argparse.Namespace, config):
    source = load_source(args)
    omega = load_vertex_set(args.omega, source) if args.omega else frozenset()
    x0 = parse_vertex(args.x0, source) if args.x0 else None
    return curvature_outside(source, omega, args.mode, args.probe, x0=x0, tol=config.tol, workers=config.workers)
