"""
Bakry-Emery and Ollivier curvature on weighted graphs.

Functions accept either a `WeightedGraph` (taken to be the whole graph) or a
`RootedBall` cut from a larger graph; for the latter the required
neighborhood of the vertex must lie inside the ball, otherwise a
PreconditionError is raised.
"""
import logging
import math
from fractions import Fraction
from typing import Any, Iterable, List, Mapping, Optional, Tuple, Union

import networkx as nx
import numpy as np
from scipy import linalg
from scipy.optimize import linprog

from ..core.config import settings
from ..core.exceptions import DomainError, NumericError, PreconditionError, UnboundedCurvatureError
from ..schemas.curvature import BakryEmeryResult, CurvatureOutsideReport, CurvatureViolation, OllivierResult
from .exact_simplex import solve_exact
from .graph_core import RootedBall, VertexId, WeightedGraph, distances_from, laplacian
from .worker_pool import parallel_map

logger = logging.getLogger(__name__)

GraphLike = Union[WeightedGraph, RootedBall]

BAKRY_EMERY = "bakry-emery"
OLLIVIER = "ollivier"


def _graph_for(source: GraphLike, x: VertexId, margin: int) -> WeightedGraph:
    if isinstance(source, RootedBall):
        source.graph.require(x)
        if source.interior_margin(x) < margin:
            raise PreconditionError(
                f"B_{margin}({x!r}) is not contained in the radius-{source.radius} ball around {source.root!r}.",
                {"vertex": repr(x), "needed": margin, "depth": source.depth[x], "radius": source.radius},
            )
        return source.graph
    source.require(x)
    return source


def _value(f: Mapping[VertexId, float], v: VertexId) -> float:
    try:
        return f[v]
    except KeyError:
        raise DomainError(f"Function undefined at {v!r}.", {"vertex": repr(v)}) from None


# -- Gamma calculus ------------------------------------------------------------

def gamma(g: WeightedGraph, f: Mapping, x: VertexId, h: Optional[Mapping] = None) -> float:
    """Carre du champ Gamma(f, h)(x); Gamma(f)(x) when h is omitted."""
    h = f if h is None else h
    fx, hx = _value(f, x), _value(h, x)
    total = sum(w * (_value(f, y) - fx) * (_value(h, y) - hx) for y, w in g.neighbors(x))
    return total / (2.0 * g.m(x))


def gamma2(g: WeightedGraph, f: Mapping, x: VertexId, h: Optional[Mapping] = None) -> float:
    """Gamma_2(f, h)(x) = 1/2 (Delta Gamma(f,h) - Gamma(f, Delta h) - Gamma(h, Delta f))(x)."""
    ball1 = [x] + [y for y, _ in g.neighbors(x)]
    gamma_fh = {v: gamma(g, f, v, h) for v in ball1}
    lap_f = {v: laplacian(g, f, v) for v in ball1}
    lap_h = lap_f if h is None else {v: laplacian(g, h, v) for v in ball1}
    h = f if h is None else h
    return 0.5 * laplacian(g, gamma_fh, x) - 0.5 * (gamma(g, f, x, lap_h) + gamma(g, h, x, lap_f))


def be_quadratic_forms(g: GraphLike, x: VertexId, n: float = math.inf) -> Tuple[List[VertexId], np.ndarray, np.ndarray]:
    """Matrices of Gamma_2(.)(x) - (Delta .(x))^2 / n and Gamma(.)(x) on functions over B_2(x)."""
    graph = _graph_for(g, x, 2)
    depth = distances_from(graph, x, cutoff=2)
    order = sorted(depth)
    index = {v: i for i, v in enumerate(order)}
    size = len(order)

    def gamma_matrix(z):
        A = np.zeros((size, size))
        iz = index[z]
        for y, w in graph.neighbors(z):
            iy = index[y]
            c = w / (2.0 * graph.m(z))
            A[iy, iy] += c
            A[iz, iz] += c
            A[iy, iz] -= c
            A[iz, iy] -= c
        return A

    def laplacian_row(z):
        D = np.zeros(size)
        for y, w in graph.neighbors(z):
            D[index[y]] += w / graph.m(z)
            D[index[z]] -= w / graph.m(z)
        return D

    mx = graph.m(x)
    A_x = gamma_matrix(x)
    D_x = laplacian_row(x)
    Q2 = np.zeros((size, size))
    cross = np.zeros((size, size))
    for z, w in graph.neighbors(x):
        Q2 += 0.5 * (w / mx) * (gamma_matrix(z) - A_x)
        e = np.zeros(size)
        e[index[z]] += 1.0
        e[index[x]] -= 1.0
        cross += (w / (2.0 * mx)) * np.outer(e, laplacian_row(z) - D_x)
    Q2 -= 0.5 * (cross + cross.T)
    if not math.isinf(n):
        Q2 -= np.outer(D_x, D_x) / n
    return order, Q2, A_x


def _reduced(order, Q2, Q1, x):
    keep = [i for i, v in enumerate(order) if v != x]
    return [order[i] for i in keep], Q2[np.ix_(keep, keep)], Q1[np.ix_(keep, keep)]


def _psd_slack(Q2: np.ndarray) -> float:
    return 1e-10 * (1.0 + (np.abs(Q2).sum(axis=1).max() if Q2.size else 0.0))


def _min_eigenvalue(M: np.ndarray) -> float:
    if M.size == 0:
        return 0.0
    return float(linalg.eigvalsh(M, subset_by_index=[0, 0])[0])


def cd_check(g: GraphLike, x: VertexId, K: float, n: float = math.inf) -> bool:
    """True iff CD(K, n) holds at x, i.e. Q2 - K Q1 is PSD up to the slack."""
    order, Q2, Q1 = be_quadratic_forms(g, x, n)
    _, Q2, Q1 = _reduced(order, Q2, Q1, x)
    return _min_eigenvalue(Q2 - K * Q1) >= -_psd_slack(Q2)


def bakry_emery_curvature(
    g: GraphLike,
    x: VertexId,
    n: float = math.inf,
    tol: Optional[float] = None,
) -> BakryEmeryResult:
    tol = tol or settings.BE_TOL
    if n <= 0:
        raise DomainError(f"Dimension parameter must be positive, got {n}.")
    order, Q2, Q1 = be_quadratic_forms(g, x, n)
    graph = g.graph if isinstance(g, RootedBall) else g
    if graph.degree(x) == 0:
        logger.info(f"Vertex {x!r} is isolated; reporting curvature +inf.")
        return BakryEmeryResult(vertex=x, n_param=n, curvature=math.inf, tolerance=tol, degenerate=True)

    others, R2, R1 = _reduced(order, Q2, Q1, x)
    slack = _psd_slack(R2)

    def passes(K):
        return _min_eigenvalue(R2 - K * R1) >= -slack

    # Rayleigh quotients of neighbor indicators bound K from above
    neighbor_idx = [others.index(y) for y, _ in graph.neighbors(x)]
    quotients = [(R2[i, i] / R1[i, i], i) for i in neighbor_idx]
    hi, best = min(quotients)
    iterations = 0
    if passes(hi):
        witness_vec = np.zeros(len(others))
        witness_vec[best] = 1.0
        K = hi
    else:
        lo = -abs(hi) - 1.0
        while not passes(lo):
            lo = hi - 2.0 * (hi - lo)
            iterations += 1
            if abs(lo) > settings.BE_BRACKET_LIMIT:
                raise UnboundedCurvatureError(
                    f"Curvature bracket at {x!r} exceeds {settings.BE_BRACKET_LIMIT:g}.",
                    {"vertex": repr(x), "bracket": lo},
                )
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            if passes(mid):
                lo = mid
            else:
                hi = mid
            iterations += 1
        K = lo
        _, vecs = linalg.eigh(R2 - hi * R1, subset_by_index=[0, 0])
        witness_vec = vecs[:, 0]
        q1 = float(witness_vec @ R1 @ witness_vec)
        if q1 <= 1e-14 or float(witness_vec @ R2 @ witness_vec) / q1 > K + tol:
            witness_vec = np.zeros(len(others))
            witness_vec[best] = 1.0

    witness = {v: float(c) for v, c in zip(others, witness_vec)}
    witness[x] = 0.0
    logger.debug(f"K_{n}({x!r}) = {K:.10g} after {iterations} bisection steps.")
    return BakryEmeryResult(
        vertex=x, n_param=n, curvature=float(K), witness=witness, tolerance=tol, iterations=iterations
    )


# -- Ollivier curvature ---------------------------------------------------------

def _ollivier_program(graph: WeightedGraph, x: VertexId, y: VertexId):
    """Variables: f on N = B1(x) u B1(y) minus x (f(x) = 0 is fixed)."""
    N = sorted({x, y} | {z for z, _ in graph.neighbors(x)} | {z for z, _ in graph.neighbors(y)})
    region = distances_from(graph, x, cutoff=3)
    local = graph.nx_graph.subgraph(region)
    variables = [v for v in N if v != x]
    col = {v: i for i, v in enumerate(variables)}

    c = np.zeros(len(variables))
    for z, w in graph.neighbors(x):
        if z in col:
            c[col[z]] += w / graph.m(x)
    for z, w in graph.neighbors(y):
        ratio = w / graph.m(y)
        if z in col:
            c[col[z]] -= ratio
        c[col[y]] += ratio

    rows, bounds = [], []

    for u in N:
        dist = nx.single_source_shortest_path_length(local, u, cutoff=3)
        for v in N:
            if u == v or v not in dist:
                continue
            row = np.zeros(len(variables))
            if u in col:
                row[col[u]] += 1.0
            if v in col:
                row[col[v]] -= 1.0
            rows.append(row)
            bounds.append(float(dist[v]))
    A_ub = np.array(rows) if rows else np.zeros((0, len(variables)))
    b_ub = np.array(bounds)
    A_eq = np.zeros((1, len(variables)))
    A_eq[0, col[y]] = 1.0
    b_eq = np.array([1.0])
    return variables, c, A_ub, b_ub, A_eq, b_eq


def ollivier_curvature(
    g: GraphLike,
    x: VertexId,
    y: VertexId,
    exact: bool = False,
    tol: Optional[float] = None,
) -> OllivierResult:
    tol = tol or settings.LP_TOL
    graph = _graph_for(g, x, 3)
    graph.require(y)
    if not graph.adjacent(x, y):
        raise DomainError(f"Vertices {x!r} and {y!r} are not adjacent.", {"u": repr(x), "v": repr(y)})

    variables, c, A_ub, b_ub, A_eq, b_eq = _ollivier_program(graph, x, y)
    if exact:
        return _ollivier_exact(graph, x, y, variables)

    res = linprog(c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq, bounds=(None, None), method="highs")
    if res.status == 2:
        logger.error(f"Ollivier LP infeasible on edge ({x!r}, {y!r}).")
        return OllivierResult(edge=(x, y), kappa=math.nan, optimizer={}, lp_status="infeasible")
    if res.status != 0:
        raise NumericError(f"Ollivier LP on ({x!r}, {y!r}) failed: {res.message}", {"status": int(res.status)})

    f = res.x
    if (A_ub.size and np.max(A_ub @ f - b_ub) > tol) or abs(f[variables.index(y)] - 1.0) > tol:
        raise NumericError(f"Ollivier LP optimizer on ({x!r}, {y!r}) violates its constraints.")
    dual = float(b_ub @ res.ineqlin.marginals + b_eq @ res.eqlin.marginals)
    gap = abs(float(res.fun) - dual)
    if gap > tol * (1.0 + abs(res.fun)):
        logger.warning(f"Duality gap {gap:.3g} on edge ({x!r}, {y!r}) exceeds {tol:g}.")

    optimizer = {v: float(val) for v, val in zip(variables, f)}
    optimizer[x] = 0.0
    return OllivierResult(
        edge=(x, y), kappa=float(res.fun), optimizer=optimizer, lp_status="optimal", duality_gap=gap, method="highs"
    )


def _ollivier_exact(graph: WeightedGraph, x: VertexId, y: VertexId, variables: List[VertexId]) -> OllivierResult:
    # shift g = f + 2 >= 0; every vertex of N is within distance 2 of x
    shift = 2
    col = {v: i for i, v in enumerate(variables)}
    c = [Fraction(0)] * len(variables)
    for z, w in graph.neighbors(x):
        if z in col:
            c[col[z]] += Fraction(w) / Fraction(graph.m(x))
    for z, w in graph.neighbors(y):
        ratio = Fraction(w) / Fraction(graph.m(y))
        if z in col:
            c[col[z]] -= ratio
        c[col[y]] += ratio

    N = [x] + variables
    region = distances_from(graph, x, cutoff=3)
    local = graph.nx_graph.subgraph(region)

    A_ub, b_ub = [], []
    for u in N:
        dist = nx.single_source_shortest_path_length(local, u, cutoff=3)
        for v in N:
            if u == v or v not in dist:
                continue
            row = [Fraction(0)] * len(variables)
            rhs = Fraction(dist[v])
            if u in col:
                row[col[u]] += 1
            else:
                rhs -= shift
            if v in col:
                row[col[v]] -= 1
            else:
                rhs += shift
            A_ub.append(row)
            b_ub.append(rhs)
    A_eq = [[Fraction(1) if v == y else Fraction(0) for v in variables]]
    b_eq = [Fraction(1 + shift)]

    result = solve_exact(c, A_ub, b_ub, A_eq, b_eq)
    if result.status != "optimal":
        logger.error(f"Exact Ollivier LP on ({x!r}, {y!r}) ended {result.status}.")
        return OllivierResult(edge=(x, y), kappa=math.nan, optimizer={}, lp_status="infeasible", method="exact")
    kappa = result.objective - shift * sum(c, Fraction(0))
    optimizer = {v: float(val - shift) for v, val in zip(variables, result.x)}
    optimizer[x] = 0.0
    return OllivierResult(edge=(x, y), kappa=float(kappa), optimizer=optimizer, lp_status="optimal", method="exact")


# -- sweeps and hypothesis checks -----------------------------------------------

def bakry_emery_sweep(
    g: GraphLike,
    vertices: Optional[Iterable[VertexId]] = None,
    n: float = math.inf,
    workers: Optional[int] = None,
) -> List[BakryEmeryResult]:
    graph = g.graph if isinstance(g, RootedBall) else g
    vertices = sorted(graph.vertices if vertices is None else vertices)
    return parallel_map(lambda v: bakry_emery_curvature(g, v, n), vertices, workers)


def ollivier_sweep(
    g: GraphLike,
    edges: Optional[Iterable[Tuple[VertexId, VertexId]]] = None,
    exact: bool = False,
    workers: Optional[int] = None,
) -> List[OllivierResult]:
    graph = g.graph if isinstance(g, RootedBall) else g
    edges = sorted((u, v) for u, v, _ in graph.edges()) if edges is None else sorted(edges)
    return parallel_map(lambda e: ollivier_curvature(g, e[0], e[1], exact=exact), edges, workers)


def curvature_outside(
    source: Any,
    omega: Iterable[VertexId],
    mode: str,
    probe_radius: int,
    x0: Optional[VertexId] = None,
    tol: Optional[float] = None,
    workers: Optional[int] = None,
) -> CurvatureOutsideReport:
    """Test CD(0, inf) (or kappa >= 0) at every vertex (edge) of B_probe(x0) outside omega.

    `source` is a GraphGenerator or a finite WeightedGraph. For a generator the
    ball is grown far enough that every evaluated quantity is exact.
    """
    from .generators import GraphGenerator

    if mode not in (BAKRY_EMERY, OLLIVIER):
        raise DomainError(f"Unknown curvature mode {mode!r}.")
    omega = frozenset(omega)
    tol = tol or (settings.LP_TOL if mode == OLLIVIER else settings.BE_TOL)
    margin = 3 if mode == OLLIVIER else 2

    if isinstance(source, GraphGenerator):
        x0 = source.root if x0 is None else x0
        big = source.materialize_ball(x0, probe_radius + margin)
        target: GraphLike = big
        graph = big.graph
        region = {v for v, d in big.depth.items() if d <= probe_radius}
    else:
        target = graph = source
        region = set(graph.vertices) if x0 is None else set(distances_from(graph, x0, cutoff=probe_radius))
    graph.require(*omega)
    region -= omega
    logger.info(f"Checking {mode} curvature on {len(region)} vertices outside |omega|={len(omega)}.")

    violations: List[CurvatureViolation] = []
    values: List[float] = []
    if mode == BAKRY_EMERY:
        results = bakry_emery_sweep(target, sorted(region), workers=workers)
        tested = len(results)
        for r in results:
            values.append(r.curvature)
            if r.curvature < -tol:
                violations.append(CurvatureViolation(vertex=r.vertex, value=r.curvature))
    else:
        edges = [(u, v) for u, v, _ in graph.edges() if u in region and v in region]
        results = ollivier_sweep(target, edges, workers=workers)
        tested = len(results)
        for r in results:
            values.append(r.kappa)
            if r.kappa < -tol:
                violations.append(CurvatureViolation(edge=r.edge, value=r.kappa))

    report = CurvatureOutsideReport(
        omega=omega,
        mode=mode,
        probe_radius=probe_radius,
        tested=tested,
        min_value=min(values) if values else None,
        violations=violations,
        passed=not violations,
    )
    if violations:
        logger.warning(f"{len(violations)} {mode} curvature violation(s) outside omega.")
    return report
