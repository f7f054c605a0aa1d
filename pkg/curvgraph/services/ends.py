"""
Ends of finitely-presented infinite graphs relative to a finite set omega,
barrier functions, parabolicity verdicts and end-separating harmonic
approximants.

An end is approximated by a component of B_probe(root) minus omega that
reaches the probe sphere. All balls are centred at the generator root.
"""
import logging
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence

import numpy as np

from ..core.exceptions import DomainError, PreconditionError, ResourceError, VerdictFailure
from ..schemas.ends import (
    BarrierRow,
    End,
    EndClassification,
    EndCountReport,
    EndCountRow,
    EndsDecomposition,
    EndSeparatingBasis,
    RefinementReport,
    RefinementRow,
)
from ..schemas.generator import ProbeRule
from .generators import GraphGenerator
from .graph_core import FunctionOnVertices, RootedBall, VertexId, components, exterior_boundary, laplacian
from .harmonic import dirichlet_solve, green_correction, green_dirichlet
from .worker_pool import parallel_map

logger = logging.getLogger(__name__)

DEFAULT_SCHEDULE = (4, 6, 8, 10, 12)
DEFAULT_MARGIN = 0.05
DEFAULT_STALL_EPS = 1e-3


def _omega_depths(ball: RootedBall, omega: FrozenSet[VertexId]) -> Dict[VertexId, int]:
    outside = [v for v in omega if v not in ball.depth]
    if outside:
        raise PreconditionError(
            f"omega vertex {sorted(outside, key=repr)[0]!r} lies outside the radius-{ball.radius} probe ball.",
            {"probe_radius": ball.radius},
        )
    return {v: ball.depth[v] for v in omega}


def _decompose(ball: RootedBall, omega: FrozenSet[VertexId]) -> List[End]:
    radius = ball.radius
    depths = _omega_depths(ball, omega)
    if any(d >= radius for d in depths.values()):
        raise PreconditionError(
            f"omega touches the probe sphere S_{radius}; enlarge the probe radius.", {"probe_radius": radius}
        )
    ends = []
    for comp in components(ball.graph, set(ball.vertices) - omega):
        if not any(ball.depth[v] == radius for v in comp):
            continue
        min_depth = min(ball.depth[v] for v in comp)
        sentinels = []
        for d in (radius // 2, (3 * radius) // 4, radius - 1):
            layer = [v for v in comp if ball.depth[v] == d]
            if layer and min(layer) not in sentinels:
                sentinels.append(min(layer))
        ends.append(End(
            omega=omega,
            representative=min(comp),
            anchor=min(v for v in comp if ball.depth[v] == min_depth),
            component_probe=frozenset(comp),
            touches_probe_sphere=True,
            sentinels=sentinels,
        ))
    return ends


def ends_wrt(gen: GraphGenerator, omega: Iterable[VertexId], probe_radius: int) -> EndsDecomposition:
    omega = frozenset(omega)
    gen.require(*omega)
    ball = gen.materialize_ball(gen.root, probe_radius)
    ends = _decompose(ball, omega)

    compared_radius, stable = probe_radius - 2, False
    depths = _omega_depths(ball, omega)
    if compared_radius >= 1 and all(d < compared_radius for d in depths.values()):
        stable = len(_decompose(ball.restrict(compared_radius), omega)) == len(ends)
    else:
        compared_radius = None
    logger.info(f"{len(ends)} end(s) w.r.t. |omega|={len(omega)} at probe {probe_radius} (stable={stable}).")
    return EndsDecomposition(
        omega=omega, probe_radius=probe_radius, ends=ends, stable=stable, compared_radius=compared_radius
    )


# -- barriers ------------------------------------------------------------------------

def _end_region(ball: RootedBall, end: End) -> FrozenSet[VertexId]:
    """Union of the components of B_rho minus omega meeting the end's probe component."""
    region = set()
    for comp in components(ball.graph, set(ball.vertices) - end.omega):
        if comp & end.component_probe:
            region |= comp
    return frozenset(region)


def _barrier_solution(gen: GraphGenerator, end: End, rho: int):
    ball = gen.materialize_ball(gen.root, rho)
    region = _end_region(ball, end)
    if not region:
        raise DomainError(f"End {end.representative!r} does not meet B_{rho}.", {"rho": rho})
    boundary: Dict[VertexId, float] = {v: 1.0 for v in exterior_boundary(ball.graph, region)}
    boundary.update({v: 0.0 for v in region if ball.depth[v] == rho})
    interior = [v for v in region if ball.depth[v] < rho]
    return ball, dirichlet_solve(ball, interior, boundary)


def barrier(gen: GraphGenerator, end: End, rho: int) -> FunctionOnVertices:
    """f_rho: harmonic on the end inside B_{rho-1}, 1 on the end's boundary in omega, 0 on S_rho."""
    _, solution = _barrier_solution(gen, end, rho)
    return dict(solution.values)


def _extrapolate(rhos: Sequence[int], values: Sequence[float]) -> float:
    """Polynomial through (1/rho, value) evaluated at 1/rho = 0."""
    h = [1.0 / r for r in rhos]
    total = 0.0
    for i, (hi, yi) in enumerate(zip(h, values)):
        weight = 1.0
        for j, hj in enumerate(h):
            if j != i:
                weight *= hj / (hj - hi)
        total += weight * yi
    return total


def limit_estimates(rhos: Sequence[int], values: Sequence[float]) -> List[float]:
    """Extrapolated limits using the last (up to) three points ending at each schedule entry."""
    estimates = []
    for k in range(1, len(rhos) + 1):
        lo = max(0, k - 3)
        estimates.append(_extrapolate(rhos[lo:k], values[lo:k]))
    return estimates


def _domination_ratio(gen: GraphGenerator, rho: int, values: FunctionOnVertices, region: Iterable[VertexId]) -> float:
    green = green_dirichlet(gen, gen.root, rho, gen.root)
    ratios = [green[x] / values[x] for x in region if values.get(x, 0.0) > 0.0 and x in green]
    return max(ratios, default=0.0)


def classify_end(
    gen: GraphGenerator,
    end: End,
    rho_schedule: Sequence[int] = DEFAULT_SCHEDULE,
    margin: float = DEFAULT_MARGIN,
    stall_eps: float = DEFAULT_STALL_EPS,
) -> EndClassification:
    schedule = list(rho_schedule)
    if any(b <= a for a, b in zip(schedule, schedule[1:])):
        raise DomainError(f"Schedule must be strictly increasing, got {schedule}.")
    common = dict(end=end, margin=margin, stall_eps=stall_eps)
    if len(schedule) < 3:
        return EndClassification(
            verdict="inconclusive", barrier_trace=[], detail="schedule shorter than 3 entries", **common
        )

    trace: List[BarrierRow] = []
    primary: List[float] = []
    tracked = [end.anchor] + [s for s in end.sentinels if s != end.anchor]
    last_solution, detail = None, None
    for rho in schedule:
        try:
            ball, solution = _barrier_solution(gen, end, rho)
        except ResourceError as e:
            detail = f"stopped at rho={rho}: {e.detail}"
            logger.warning(f"Barrier trace for end {end.representative!r} truncated: {e.detail}")
            break
        values = solution.values
        for v in tracked:
            trace.append(BarrierRow(rho=rho, vertex=v, value=values.get(v, 0.0)))
        primary.append(values.get(end.anchor, 0.0))
        last_solution = (rho, solution)

    rhos = schedule[: len(primary)]
    monotone = True
    by_vertex: Dict[VertexId, List[float]] = {}
    for row in trace:
        by_vertex.setdefault(row.vertex, []).append(row.value)
    for series in by_vertex.values():
        if any(b < a - 1e-9 for a, b in zip(series, series[1:])):
            monotone = False
    if not monotone:
        logger.error(f"Barrier trace of end {end.representative!r} is not monotone in rho.")

    if len(primary) < 3:
        return EndClassification(
            verdict="inconclusive", barrier_trace=trace, monotone=monotone,
            detail=detail or "fewer than 3 barrier solves", **common
        )

    estimates = limit_estimates(rhos, primary)
    limit, drift = estimates[-1], abs(estimates[-1] - estimates[-2])
    increment = primary[-1] - primary[-2]
    stalled = drift < stall_eps or abs(increment) < stall_eps
    low_confidence = False
    if stalled and limit <= 1.0 - margin:
        verdict = "non-parabolic"
    elif limit >= 1.0 - margin and increment >= -1e-12:
        verdict = "parabolic"
        low_confidence = drift >= stall_eps
    else:
        verdict = "inconclusive"

    ratio = None
    if verdict == "non-parabolic" and last_solution is not None:
        rho, solution = last_solution
        ratio = _domination_ratio(gen, rho, solution.values, solution.interior)
    logger.info(
        f"End {end.representative!r}: {verdict} (limit {limit:.6f}, drift {drift:.2e}, trace {primary[-1]:.6f})."
    )
    return EndClassification(
        verdict=verdict,
        barrier_trace=trace,
        limit_estimate=limit,
        drift=drift,
        low_confidence=low_confidence,
        monotone=monotone,
        domination_ratio=ratio,
        detail=detail,
        **common,
    )


def classify_ends(
    gen: GraphGenerator,
    decomposition: EndsDecomposition,
    rho_schedule: Sequence[int] = DEFAULT_SCHEDULE,
    margin: float = DEFAULT_MARGIN,
    stall_eps: float = DEFAULT_STALL_EPS,
    workers: Optional[int] = None,
) -> List[EndClassification]:
    return parallel_map(
        lambda e: classify_end(gen, e, rho_schedule, margin, stall_eps), decomposition.ends, workers
    )


# -- counting ------------------------------------------------------------------

def probe_radius_for(gen: GraphGenerator, omega: FrozenSet[VertexId], rule: ProbeRule) -> int:
    if not omega:
        return rule.minimum
    gen.require(*omega)
    reach = max(omega_depth for omega_depth in _depths_from_root(gen, omega).values())
    return max(rule.minimum, reach + rule.offset)


def _depths_from_root(gen: GraphGenerator, omega: FrozenSet[VertexId]) -> Dict[VertexId, int]:
    radius = 1
    while True:
        ball = gen.materialize_ball(gen.root, radius)
        if all(v in ball.depth for v in omega):
            return {v: ball.depth[v] for v in omega}
        radius *= 2


def count_ends(
    gen: GraphGenerator,
    omega_exhaustion: Sequence[Iterable[VertexId]],
    probe_rule: Optional[ProbeRule] = None,
    rho_schedule: Sequence[int] = DEFAULT_SCHEDULE,
    margin: float = DEFAULT_MARGIN,
    stall_eps: float = DEFAULT_STALL_EPS,
    workers: Optional[int] = None,
) -> EndCountReport:
    probe_rule = probe_rule or ProbeRule()
    exhaustion = [frozenset(o) for o in omega_exhaustion]
    if not exhaustion:
        raise DomainError("The exhaustion must contain at least one set.")
    for small, large in zip(exhaustion, exhaustion[1:]):
        if not small <= large:
            raise DomainError("The exhaustion must be an increasing sequence of sets.")
    gen.require(*exhaustion[-1])

    rows = []
    for omega in exhaustion:
        probe = probe_radius_for(gen, omega, probe_rule)
        decomposition = ends_wrt(gen, omega, probe)
        classes = classify_ends(gen, decomposition, rho_schedule, margin, stall_eps, workers)
        verdicts = [c.verdict for c in classes]
        rows.append(EndCountRow(
            omega=omega,
            probe_radius=probe,
            N=len(classes),
            N0=verdicts.count("non-parabolic"),
            Nprime=verdicts.count("parabolic"),
            inconclusive=verdicts.count("inconclusive"),
            stable=decomposition.stable,
            classifications=classes,
        ))

    monotone = all(a.N <= b.N for a, b in zip(rows, rows[1:]))
    if not monotone:
        logger.error(f"End counts are not monotone along the exhaustion: {[r.N for r in rows]}.")
    last = rows[-1]
    return EndCountReport(rows=rows, monotone=monotone, N=last.N, N0=last.N0, Nprime=last.Nprime)


def end_refinement_check(
    gen: GraphGenerator,
    omega: Iterable[VertexId],
    omega_prime: Iterable[VertexId],
    probe_radius: int,
    rho_schedule: Sequence[int] = DEFAULT_SCHEDULE,
    margin: float = DEFAULT_MARGIN,
    stall_eps: float = DEFAULT_STALL_EPS,
) -> RefinementReport:
    """Across omega <= omega', a non-parabolic end contains a non-parabolic end and a
    parabolic end contains only parabolic ends. Inconclusive verdicts never refute."""
    omega, omega_prime = frozenset(omega), frozenset(omega_prime)
    if not omega <= omega_prime:
        raise DomainError("omega must be a subset of omega'.")
    coarse = ends_wrt(gen, omega, probe_radius)
    fine = ends_wrt(gen, omega_prime, probe_radius)
    coarse_classes = classify_ends(gen, coarse, rho_schedule, margin, stall_eps)
    fine_classes = classify_ends(gen, fine, rho_schedule, margin, stall_eps)

    rows = []
    for c in coarse_classes:
        inside = [f.verdict for f in fine_classes if f.end.component_probe <= c.end.component_probe]
        if c.verdict == "non-parabolic":
            holds = "non-parabolic" in inside or "inconclusive" in inside
        elif c.verdict == "parabolic":
            holds = "non-parabolic" not in inside
        else:
            holds = True
        rows.append(RefinementRow(
            coarse_representative=c.end.representative, coarse_verdict=c.verdict, fine_verdicts=inside, holds=holds
        ))
    return RefinementReport(omega=omega, omega_prime=omega_prime, rows=rows, holds=all(r.holds for r in rows))


# -- end-separating harmonic functions -------------------------------------------

def separating_harmonics(
    gen: GraphGenerator,
    omega: Iterable[VertexId],
    probe: int,
    rho_green: int,
    gram_depth: Optional[int] = None,
    classifications: Optional[List[EndClassification]] = None,
    rho_schedule: Sequence[int] = DEFAULT_SCHEDULE,
    margin: float = DEFAULT_MARGIN,
    stall_eps: float = DEFAULT_STALL_EPS,
) -> EndSeparatingBasis:
    """h_i = g_i + sum_x Delta g_i(x) m(x) Gamma_rho(., x), g_i the indicator of the closure of end i."""
    omega = frozenset(omega)
    gram_depth = min(probe, rho_green) - 2 if gram_depth is None else gram_depth
    decomposition = ends_wrt(gen, omega, probe)
    ends = decomposition.ends
    big = gen.materialize_ball(gen.root, rho_green + 1)

    if len(ends) <= 1 or not omega:
        logger.info("At most one end: the separating basis is the constant function.")
        constant = {v: 1.0 for v in big.vertices}
        return EndSeparatingBasis(
            omega=omega, rho_green=rho_green, gram_depth=gram_depth, functions=[constant],
            gram_matrix=[[1.0]], rank=1, sup_norms=[1.0], identity_deviation=0.0, constant=True,
        )

    classes = classifications or classify_ends(gen, decomposition, rho_schedule, margin, stall_eps)
    if not any(c.verdict == "non-parabolic" for c in classes):
        raise VerdictFailure(
            "No end is classified non-parabolic; end-separating construction refused.",
            {"verdicts": [c.verdict for c in classes]},
        )

    gram_rows = []
    for end in ends:
        layer = [v for v in end.component_probe if big.depth.get(v) == gram_depth]
        if not layer:
            raise PreconditionError(f"End {end.representative!r} has no vertex at depth {gram_depth}.")
        gram_rows.append(min(layer))

    functions, sup_norms = [], []
    for end in ends:
        region = _end_region(big, end)
        closure = region | exterior_boundary(big.graph, region)
        g_i = {v: (1.0 if v in closure else 0.0) for v in big.vertices}
        charges = {}
        for x, d in big.depth.items():
            if d <= rho_green:
                value = laplacian(big.graph, g_i, x)
                if value != 0.0:
                    charges[x] = value * big.graph.m(x)
        correction = green_correction(big, gen.root, rho_green, charges)
        h_i = {v: g_i[v] + correction.get(v, 0.0) for v in correction}
        functions.append(h_i)
        sup_norms.append(max(abs(v) for v in h_i.values()))

    gram = [[h[v] for v in gram_rows] for h in functions]
    matrix = np.array(gram)
    rank = int(np.linalg.matrix_rank(matrix, tol=0.5))
    deviation = float(np.abs(matrix - np.eye(len(ends))).max())
    logger.info(f"Separating basis on {len(ends)} ends: rank {rank}, identity deviation {deviation:.4f}.")
    return EndSeparatingBasis(
        omega=omega,
        rho_green=rho_green,
        gram_depth=gram_depth,
        functions=functions,
        gram_matrix=gram,
        rank=rank,
        sup_norms=sup_norms,
        identity_deviation=deviation,
    )
