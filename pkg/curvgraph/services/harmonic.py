"""
Dirichlet problems, Green's functions, gradient fields and the checks built
on them: gradient maximum principle, subharmonicity of Gamma(u), the
dimension certificate for bounded harmonic functions and decay profiles.
"""
import logging
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from ..core.config import settings
from ..core.exceptions import DomainError, IllPosedError, NumericError, PreconditionError, ResourceError, VerdictFailure
from ..schemas.harmonic import (
    DecayProfile,
    DecayRow,
    DimensionCertificate,
    GradientField,
    GradientMaxPrinciple,
    GreenLimitTable,
    GreenRow,
    HarmonicSolution,
    SubharmonicityReport,
    SubharmonicityRow,
    UniqueContinuationProbe,
)
from .curvature import OLLIVIER, curvature_outside, gamma, ollivier_curvature
from .generators import GraphGenerator
from .graph_core import (
    FunctionOnVertices,
    RootedBall,
    VertexId,
    WeightedGraph,
    components,
    distances_from,
    interior_boundary,
    laplacian,
)
from .linear_solvers import dirichlet_matrix, solve_spd

logger = logging.getLogger(__name__)


def _unwrap(g: Union[WeightedGraph, RootedBall]) -> WeightedGraph:
    return g.graph if isinstance(g, RootedBall) else g


def _sup(values: Iterable[float]) -> float:
    return max((abs(v) for v in values), default=0.0)


def harmonic_residual(g: WeightedGraph, u: Mapping[VertexId, float], region: Iterable[VertexId]) -> float:
    return max((abs(laplacian(g, u, x)) for x in region), default=0.0)


def require_harmonic(g: WeightedGraph, u: Mapping[VertexId, float], region: Iterable[VertexId]) -> float:
    region = list(region)
    residual = harmonic_residual(g, u, region)
    bound = settings.HARMONIC_RESIDUAL * (1.0 + _sup(u.values()))
    if residual > bound:
        raise PreconditionError(
            f"Function is not harmonic on the region: residual {residual:.3g} > {bound:.3g}.",
            {"residual": residual, "bound": bound},
        )
    return residual


# -- Dirichlet problem ------------------------------------------------------------

def dirichlet_solve(
    g: Union[WeightedGraph, RootedBall],
    interior: Iterable[VertexId],
    boundary_values: Mapping[VertexId, float],
    tol: Optional[float] = None,
) -> HarmonicSolution:
    graph = _unwrap(g)
    tol = tol or settings.HARMONIC_RESIDUAL
    interior = frozenset(interior)
    boundary = frozenset(boundary_values)
    graph.require(*interior)
    graph.require(*boundary)
    if interior & boundary:
        raise DomainError("Interior and boundary overlap.", {"vertices": [repr(v) for v in sorted(interior & boundary)]})
    for x in interior:
        for y, _ in graph.neighbors(x):
            if y not in interior and y not in boundary:
                raise DomainError(
                    f"Interior vertex {x!r} has neighbor {y!r} outside interior and boundary.",
                    {"vertex": repr(x), "neighbor": repr(y)},
                )
    for comp in components(graph, interior):
        if not any(y in boundary for x in comp for y, _ in graph.neighbors(x)):
            raise IllPosedError(
                f"Interior component containing {min(comp)!r} has no boundary contact.",
                {"component_size": len(comp)},
            )

    order, M, rhs = dirichlet_matrix(graph, interior, boundary_values)
    solution, info = solve_spd(M, rhs)
    values: FunctionOnVertices = dict(boundary_values)
    if boundary_values:
        lo, hi = min(boundary_values.values()), max(boundary_values.values())
        solution = np.clip(solution, lo, hi)
    values.update({v: float(s) for v, s in zip(order, solution)})

    residual = harmonic_residual(graph, values, order)
    if residual > tol * (1.0 + _sup(values.values())):
        raise NumericError(f"Dirichlet residual {residual:.3g} exceeds tolerance {tol:g}.", {"residual": residual})
    logger.debug(f"Dirichlet solve: {len(order)} unknowns, residual {residual:.3g}, {info['method']}.")
    return HarmonicSolution(values=values, interior=interior, boundary=boundary, residual=residual, solver_info=info)


# -- Green's functions ---------------------------------------------------------

def _green_domain(source: Any, x0: VertexId, rho: int) -> Tuple[WeightedGraph, Dict[VertexId, int]]:
    """Graph containing B_{rho+1}(x0) and the depth of its vertices from x0."""
    if isinstance(source, GraphGenerator):
        b = source.materialize_ball(x0, rho + 1)
        return b.graph, dict(b.depth)
    if isinstance(source, RootedBall):
        source.graph.require(x0)
        if source.interior_margin(x0) < rho + 1:
            raise DomainError(
                f"B_{rho + 1}({x0!r}) is not contained in the radius-{source.radius} ball.",
                {"rho": rho, "radius": source.radius},
            )
        source = source.graph
    return source, distances_from(source, x0, cutoff=rho + 1)


def green_correction(
    source: Any,
    x0: VertexId,
    rho: int,
    charges: Mapping[VertexId, float],
) -> FunctionOnVertices:
    """sum_x charges(x) Gamma_rho(., x), a single solve on B_rho(x0)."""
    graph, depth = _green_domain(source, x0, rho)
    interior = [v for v, d in depth.items() if d <= rho]
    order, M, _ = dirichlet_matrix(graph, interior)
    index = {v: i for i, v in enumerate(order)}
    rhs = np.zeros(len(order))
    for x, q in charges.items():
        if x not in index:
            raise DomainError(f"Charge at {x!r} lies outside B_{rho}({x0!r}).")
        rhs[index[x]] += q
    solution, _ = solve_spd(M, rhs)
    values = {v: float(s) for v, s in zip(order, solution)}
    values.update({v: 0.0 for v, d in depth.items() if d == rho + 1})
    return values


def green_dirichlet(source: Any, x0: VertexId, rho: int, x1: VertexId, tol: Optional[float] = None) -> FunctionOnVertices:
    """Gamma_rho(., x1) on B_rho(x0) and its exterior boundary (where it vanishes)."""
    tol = tol or settings.HARMONIC_RESIDUAL
    if rho < 0:
        raise DomainError(f"rho must be non-negative, got {rho}.")
    graph, depth = _green_domain(source, x0, rho)
    if depth.get(x1, rho + 1) > rho:
        raise DomainError(f"Source {x1!r} is not in B_{rho}({x0!r}).", {"rho": rho})
    values = green_correction(graph, x0, rho, {x1: 1.0})
    peak = max(values.values())
    low = min(values.values())
    if low < -tol * (1.0 + peak):
        raise NumericError(f"Green's function went negative ({low:.3g}).", {"min": low})
    return {v: max(val, 0.0) for v, val in values.items()}


def green_limit(
    gen: GraphGenerator,
    x1: VertexId,
    rho_schedule: Sequence[int],
    stall_eps: float,
    window_radius: Optional[int] = None,
) -> GreenLimitTable:
    schedule = list(rho_schedule)
    if not schedule or any(b <= a for a, b in zip(schedule, schedule[1:])):
        raise DomainError(f"rho schedule must be non-empty and strictly increasing, got {schedule}.")
    window_radius = min(2, schedule[0]) if window_radius is None else window_radius
    window = None
    rows: List[GreenRow] = []
    previous = None
    for rho in schedule:
        try:
            values = green_dirichlet(gen, x1, rho, x1)
        except ResourceError as e:
            partial = GreenLimitTable(
                source=x1, window_radius=window_radius, rows=rows, verdict="growing",
                stall_eps=stall_eps, truncated=True, detail=e.detail,
            )
            e.payload["partial"] = partial.model_dump(mode="json")
            raise
        if window is None:
            window = list(gen.materialize_ball(x1, window_radius).vertices)
        current = {v: values[v] for v in window}
        increment = None if previous is None else max(abs(current[v] - previous[v]) for v in window)
        rows.append(GreenRow(rho=rho, values=current, sup_increment=increment))
        previous = current
        logger.info(f"Green rho={rho}: Gamma(x1,x1)={current[x1]:.8g}, increment={increment}.")
    last = rows[-1].sup_increment
    verdict = "converged" if last is not None and last < stall_eps else "growing"
    return GreenLimitTable(source=x1, window_radius=window_radius, rows=rows, verdict=verdict, stall_eps=stall_eps)


# -- gradients -----------------------------------------------------------------

def gradient_field(g: Union[WeightedGraph, RootedBall], u: Mapping[VertexId, float]) -> GradientField:
    graph = _unwrap(g)
    vertex_gradient = {x: gamma(graph, u, x) for x in graph.vertices}
    edge_gradient = {(a, b): abs(u[a] - u[b]) for a, b, _ in graph.edges()}
    return GradientField(vertex_gradient=vertex_gradient, edge_gradient=edge_gradient)


def _max_edge_gradient(graph, u, sources) -> Tuple[float, Optional[Tuple[VertexId, VertexId]]]:
    best, pair = 0.0, None
    for x in sorted(sources):
        for y, _ in graph.neighbors(x):
            if y not in u:
                raise DomainError(f"Function undefined at {y!r}, a neighbor of {x!r}.", {"vertex": repr(y)})
            value = abs(u[x] - u[y])
            if pair is None or value > best or (value == best and (x, y) < pair):
                best, pair = value, (x, y)
    return best, pair


def gradient_max_principle_check(
    g: Union[WeightedGraph, RootedBall],
    W: Iterable[VertexId],
    u: Mapping[VertexId, float],
    tol: Optional[float] = None,
) -> GradientMaxPrinciple:
    tol = tol or settings.LP_TOL
    graph = _unwrap(g)
    W = frozenset(W)
    delta_W = interior_boundary(graph, W)
    inner = W - delta_W
    require_harmonic(graph, u, inner)

    max_interior, interior_pair = _max_edge_gradient(graph, u, W)
    max_boundary, boundary_pair = _max_edge_gradient(graph, u, delta_W)

    min_kappa, verified, advisory = None, True, None
    for a, b, _ in graph.edges():
        if a in inner and b in inner:
            try:
                kappa = ollivier_curvature(g, a, b).kappa
            except PreconditionError:
                verified = False
                advisory = "curvature of some interior edges could not be evaluated inside the given ball"
                continue
            min_kappa = kappa if min_kappa is None else min(min_kappa, kappa)
    if min_kappa is not None and min_kappa < -tol:
        verified = False
        advisory = f"interior Ollivier curvature {min_kappa:.3g} is negative"
    if advisory:
        logger.warning(f"Gradient maximum principle precondition not verified: {advisory}.")

    holds = abs(max_interior - max_boundary) <= 1e-12
    return GradientMaxPrinciple(
        max_interior_pair=interior_pair,
        max_interior=max_interior,
        max_boundary_pair=boundary_pair,
        max_boundary=max_boundary,
        holds=holds,
        curvature_verified=verified,
        min_interior_kappa=min_kappa,
        advisory=advisory,
    )


def subharmonicity_check(
    g: Union[WeightedGraph, RootedBall],
    u: Mapping[VertexId, float],
    region: Iterable[VertexId],
    tol: Optional[float] = None,
) -> SubharmonicityReport:
    """Delta Gamma(u) at each vertex of the region; negative values beyond -tol are flagged."""
    graph = _unwrap(g)
    region = sorted(region)
    require_harmonic(graph, u, region)
    tol = tol or settings.HARMONIC_RESIDUAL * (1.0 + _sup(u.values()) ** 2)
    rows = []
    for x in region:
        ball1 = [x] + [y for y, _ in graph.neighbors(x)]
        gamma_u = {v: gamma(graph, u, v) for v in ball1}
        value = laplacian(graph, gamma_u, x)
        rows.append(SubharmonicityRow(vertex=x, laplacian_of_gamma=value, negative=value < -tol))
    flagged = sum(r.negative for r in rows)
    if flagged:
        logger.warning(f"Gamma(u) fails subharmonicity at {flagged} vertices.")
    return SubharmonicityReport(rows=rows, flagged=flagged, tolerance=tol)


# -- dimension bound -------------------------------------------------------------

def unique_continuation_probe(
    graph: WeightedGraph,
    x0: VertexId,
    R0: int,
    probe: int,
    u: Mapping[VertexId, float],
    tol: Optional[float] = None,
) -> UniqueContinuationProbe:
    tol = tol or settings.HARMONIC_RESIDUAL
    depth = distances_from(graph, x0, cutoff=probe)
    missing = [v for v in depth if v not in u]
    if missing:
        raise DomainError(f"Probe function undefined at {missing[0]!r}.")
    if any(abs(u[v]) > tol for v, d in depth.items() if d <= R0 + 1):
        raise PreconditionError(f"Probe function does not vanish on B_{R0 + 1}({x0!r}).")
    require_harmonic(graph, u, [v for v, d in depth.items() if d < probe])

    def edge_max(sources):
        return max((abs(u[x] - u[y]) for x in sources for y, _ in graph.neighbors(x) if y in depth), default=0.0)

    annulus = edge_max([v for v, d in depth.items() if R0 <= d <= probe])
    sphere = edge_max([v for v, d in depth.items() if d == R0])
    return UniqueContinuationProbe(
        probe_radius=probe,
        annulus_max_gradient=annulus,
        sphere_max_gradient=sphere,
        holds=abs(annulus - sphere) <= tol,
    )


def dimension_certificate(
    gen: GraphGenerator,
    x0: VertexId,
    R0: int,
    mode: str = OLLIVIER,
    probe: int = 4,
    omega: Optional[Iterable[VertexId]] = None,
    u: Optional[Mapping[VertexId, float]] = None,
    workers: Optional[int] = None,
) -> DimensionCertificate:
    """Certify dim H_0(G) <= #S_{R0+1}(x0), provided the curvature hypothesis holds outside omega."""
    inner = gen.materialize_ball(x0, R0 + 1)
    omega = frozenset(v for v, d in inner.depth.items() if d <= R0) if omega is None else frozenset(omega)
    report = curvature_outside(gen, omega, mode, probe, x0=x0, workers=workers)
    if not report.passed:
        logger.warning(f"Dimension certificate refused: {len(report.violations)} curvature violation(s).")
        raise VerdictFailure(
            "Curvature hypothesis fails outside omega; dimension certificate refused.",
            {"violations": [v.model_dump(mode="json") for v in report.violations]},
        )
    sphere_count = len(inner.sphere(R0 + 1))
    probe_report = None
    if u is not None:
        big = gen.materialize_ball(x0, probe + 1)
        probe_report = unique_continuation_probe(big.graph, x0, R0, probe, u)
    logger.info(f"dim H_0 <= #S_{R0 + 1}({x0!r}) = {sphere_count}.")
    return DimensionCertificate(
        x0=x0,
        R0=R0,
        sphere_count=sphere_count,
        curvature_report=report,
        mode=mode,
        probe_radius=probe,
        unique_continuation=probe_report,
    )


def gradient_decay_profile(
    source: Any,
    u: Mapping[VertexId, float],
    radii: Sequence[int],
    x0: Optional[VertexId] = None,
) -> DecayProfile:
    """Per-radius max of Gamma(u) over S_r and of |grad_e u| over edges leaving S_r."""
    radii = sorted(radii)
    if isinstance(source, GraphGenerator):
        x0 = source.root if x0 is None else x0
        graph = source.materialize_ball(x0, radii[-1] + 1).graph
    else:
        graph = _unwrap(source)
        x0 = source.root if x0 is None and isinstance(source, RootedBall) else x0
        if x0 is None:
            raise DomainError("A centre vertex is required for a finite graph.")
    depth = distances_from(graph, x0, cutoff=radii[-1] + 1)
    missing = [v for v in depth if v not in u]
    if missing:
        raise DomainError(f"Function undefined at {min(missing)!r}.", {"vertex": repr(min(missing))})
    rows = []
    for r in radii:
        shell = [v for v, d in depth.items() if d == r]
        max_gamma = max((gamma(graph, u, x) for x in shell), default=0.0)
        max_edge = max((abs(u[x] - u[y]) for x in shell for y, _ in graph.neighbors(x)), default=0.0)
        rows.append(DecayRow(r=r, max_gamma=max_gamma, max_edge_grad=max_edge))
    return DecayProfile(x0=x0, rows=rows)
