"""
Checkable fragment of discrete pointed Gromov-Hausdorff convergence: rooted
ball isomorphism, fixed-radius stabilization with weight deviations, limit
extraction, function convergence and curvature semicontinuity.

Every verdict concerns the tested indices only.
"""
import logging
from typing import List, Mapping, Optional, Sequence, Tuple

import networkx as nx
from networkx.algorithms.isomorphism import GraphMatcher

from ..core.config import settings
from ..core.exceptions import DomainError, ResourceError, VerdictFailure
from ..schemas.gh import (
    ConvergenceReport,
    DeviationRow,
    FunctionConvergenceReport,
    FunctionDeviationRow,
    LimitBall,
    RootedIsomorphism,
    SemicontinuityReport,
    SemicontinuityRow,
)
from .curvature import BAKRY_EMERY, OLLIVIER, bakry_emery_curvature, ollivier_curvature
from .generators import RootedGeneratorSequence
from .graph_core import RootedBall, VertexId, ball
from .worker_pool import parallel_map

logger = logging.getLogger(__name__)


class BudgetedGraphMatcher(GraphMatcher):
    """VF2 matcher that counts feasibility checks and gives up past a node budget."""

    def __init__(self, G1, G2, budget: int):
        super().__init__(G1, G2, node_match=lambda a, b: a["depth"] == b["depth"])
        self.budget = budget
        self.checks = 0

    def semantic_feasibility(self, G1_node, G2_node):
        self.checks += 1
        if self.checks > self.budget:
            raise ResourceError(
                f"Isomorphism search exceeded the node budget of {self.budget}.", {"budget": self.budget}
            )
        return super().semantic_feasibility(G1_node, G2_node)


def _canonical_graph(b: RootedBall) -> nx.Graph:
    """Depth-labelled copy with nodes inserted in (depth, degree, neighbor degrees, id) order."""
    source = b.graph.nx_graph

    def key(v):
        neighbor_degrees = sorted(source.degree(y) for y in source.neighbors(v))
        return (b.depth[v], source.degree(v), neighbor_degrees, v)

    G = nx.Graph()
    for v in sorted(source.nodes, key=key):
        G.add_node(v, depth=b.depth[v], label=str(b.depth[v]))
    G.add_edges_from(source.edges)
    return G


def _profile(b: RootedBall) -> List[Tuple[int, int]]:
    source = b.graph.nx_graph
    return sorted((b.depth[v], source.degree(v)) for v in source.nodes)


def rooted_isomorphism(b1: RootedBall, b2: RootedBall, budget: Optional[int] = None) -> Optional[RootedIsomorphism]:
    """Root-fixing graph isomorphism b1 -> b2 ignoring weights, or None."""
    g1, g2 = b1.graph, b2.graph
    if len(g1) != len(g2) or g1.number_of_edges() != g2.number_of_edges():
        return None
    if _profile(b1) != _profile(b2):
        return None
    if b1.root == b2.root and set(g1.vertices) == set(g2.vertices):
        if all(g2.adjacent(u, v) for u, v, _ in g1.edges()):
            return RootedIsomorphism(mapping={v: v for v in g1.vertices}, source_root=b1.root, target_root=b2.root)

    G1, G2 = _canonical_graph(b1), _canonical_graph(b2)
    if nx.weisfeiler_lehman_graph_hash(G1, node_attr="label") != nx.weisfeiler_lehman_graph_hash(G2, node_attr="label"):
        return None
    matcher = BudgetedGraphMatcher(G1, G2, budget or settings.ISO_NODE_BUDGET)
    mapping = next(matcher.isomorphisms_iter(), None)
    logger.debug(f"Isomorphism search: {matcher.checks} feasibility checks, found={mapping is not None}.")
    if mapping is None:
        return None
    return RootedIsomorphism(mapping=dict(mapping), source_root=b1.root, target_root=b2.root)


def weight_deviation(b1: RootedBall, b2: RootedBall, iso: RootedIsomorphism) -> Tuple[float, float]:
    """Sup deviation of vertex and edge weights of b1 transported to b2."""
    phi = iso.mapping
    vertex_dev = max((abs(b1.graph.m(v) - b2.graph.m(phi[v])) for v in b1.vertices), default=0.0)
    edge_dev = max((abs(w - b2.graph.w(phi[u], phi[v])) for u, v, w in b1.graph.edges()), default=0.0)
    return vertex_dev, edge_dev


def _balls(seq: RootedGeneratorSequence, indices: Sequence[int], R: int, workers=None) -> List[RootedBall]:
    return parallel_map(lambda i: seq.ball(i, R), indices, workers)


def _check_indices(indices: Sequence[int]) -> List[int]:
    indices = list(indices)
    if not indices or any(b <= a for a, b in zip(indices, indices[1:])):
        raise DomainError(f"Indices must be a non-empty increasing list, got {indices}.")
    return indices


def _tail(indices: Sequence[int]) -> List[int]:
    """Later half of a list of indices (at least one element)."""
    return list(indices[len(indices) // 2:])


def pgh_converges(
    seq: RootedGeneratorSequence,
    indices: Sequence[int],
    R: int,
    eps: float,
    workers: Optional[int] = None,
) -> ConvergenceReport:
    indices = _check_indices(indices)
    if R < 0:
        raise DomainError(f"Radius must be non-negative, got {R}.")
    balls = _balls(seq, indices, R, workers)
    reference = balls[-1]

    rows: List[DeviationRow] = []
    for i, b in zip(indices, balls):
        iso = rooted_isomorphism(b, reference)
        if iso is None:
            rows.append(DeviationRow(index=i, isomorphic=False))
            continue
        vertex_dev, edge_dev = weight_deviation(b, reference, iso)
        rows.append(DeviationRow(index=i, isomorphic=True, vertex_deviation=vertex_dev, edge_deviation=edge_dev))

    stabilization = indices[-1]
    for row in reversed(rows):
        if not row.isomorphic:
            break
        stabilization = row.index

    if stabilization == indices[-1] and len(indices) > 1:
        verdict = "not-stabilized"
    else:
        post = [r for r in rows if r.index >= stabilization]
        tail = _tail(post)
        verdict = "converged" if all(r.deviation < eps for r in tail) else "weights-diverge"
    logger.info(f"pGH check at radius {R}: {verdict}, stabilization index {stabilization}.")
    return ConvergenceReport(
        radius=R,
        tested_indices=indices,
        stabilization_index=stabilization if verdict != "not-stabilized" else None,
        weight_sup_deviation=rows,
        eps=eps,
        verdict=verdict,
    )


def pgh_limit(
    seq: RootedGeneratorSequence,
    indices: Sequence[int],
    R: int,
    eps: float = 1e-3,
    report: Optional[ConvergenceReport] = None,
) -> LimitBall:
    """Limit ball at radius R carrying the last tested index's weights."""
    report = report or pgh_converges(seq, indices, R, eps)
    if report.verdict != "converged":
        raise VerdictFailure(
            f"Sequence does not converge at radius {R} ({report.verdict}); no limit extracted.",
            {"verdict": report.verdict},
        )
    last = report.tested_indices[-1]
    limit = seq.ball(last, R)
    provenance = [i for i in report.tested_indices if i >= report.stabilization_index]
    return LimitBall(
        ball=limit,
        root=limit.root,
        radius=R,
        vertex_weights={v: limit.graph.m(v) for v in limit.vertices},
        edge_weights={(u, v): w for u, v, w in limit.graph.edges()},
        provenance=provenance,
    )


def limit_consistent(seq: RootedGeneratorSequence, indices: Sequence[int], R: int, eps: float = 1e-3) -> bool:
    """The radius-R limit equals the radius-R restriction of the radius-(R+1) limit."""
    small = pgh_limit(seq, indices, R, eps)
    large = pgh_limit(seq, indices, R + 1, eps)
    restricted = ball(large.ball.graph, large.root, R)
    iso = rooted_isomorphism(small.ball, restricted)
    if iso is None:
        return False
    vertex_dev, edge_dev = weight_deviation(small.ball, restricted, iso)
    return vertex_dev == 0.0 and edge_dev == 0.0


def function_convergence(
    seq: RootedGeneratorSequence,
    functions: Mapping[int, Mapping[VertexId, float]],
    limit_u: Mapping[VertexId, float],
    R: int,
    eps: float,
) -> FunctionConvergenceReport:
    """sup over the limit ball of |u_i o phi_i^-1 - u| for each tested index."""
    indices = _check_indices(sorted(functions))
    limit = seq.ball(indices[-1], R)
    rows = []
    for i in indices:
        b = seq.ball(i, R)
        iso = rooted_isomorphism(b, limit)
        if iso is None:
            raise VerdictFailure(f"B_{R}(p_{i}) is not isomorphic to the limit ball.", {"index": i})
        u_i = functions[i]
        try:
            deviation = max(abs(u_i[v] - limit_u[iso.mapping[v]]) for v in b.vertices)
        except KeyError as e:
            raise DomainError(f"Function undefined at {e.args[0]!r} (index {i}).") from e
        rows.append(FunctionDeviationRow(index=i, deviation=deviation))
    tail = _tail(rows)
    verdict = "converged" if all(r.deviation < eps for r in tail) else "diverges"
    return FunctionConvergenceReport(radius=R, tested_indices=indices, rows=rows, eps=eps, verdict=verdict)


def curvature_semicontinuity_check(
    seq: RootedGeneratorSequence,
    indices: Sequence[int],
    mode: str,
    eps: float = 1e-3,
    tol: float = 1e-6,
) -> SemicontinuityReport:
    """Limit curvature at the root (or root edge) >= min over the tail indices - tol."""
    if mode not in (BAKRY_EMERY, OLLIVIER):
        raise DomainError(f"Unknown curvature mode {mode!r}.")
    R = 2 if mode == BAKRY_EMERY else 3
    report = pgh_converges(seq, indices, R, eps)
    limit = pgh_limit(seq, indices, R, eps, report=report)
    root = limit.root
    target = min(y for y, _ in limit.ball.graph.neighbors(root)) if mode == OLLIVIER else None

    def curvature_of(b: RootedBall, neighbor) -> float:
        if mode == BAKRY_EMERY:
            return bakry_emery_curvature(b, b.root).curvature
        return ollivier_curvature(b, b.root, neighbor).kappa

    rows = []
    for i in limit.provenance:
        b = seq.ball(i, R)
        neighbor = None
        if mode == OLLIVIER:
            back = rooted_isomorphism(limit.ball, b)
            neighbor = back.mapping[target]
        rows.append(SemicontinuityRow(index=i, curvature=curvature_of(b, neighbor)))

    limit_curvature = curvature_of(limit.ball, target)
    tail_min = min(r.curvature for r in _tail(rows))
    holds = limit_curvature >= tail_min - tol
    if not holds:
        logger.error(f"Curvature semicontinuity violated: limit {limit_curvature} < tail min {tail_min}.")
    return SemicontinuityReport(
        mode=mode,
        tested_indices=list(indices),
        rows=rows,
        limit_curvature=limit_curvature,
        tail_min=tail_min,
        tolerance=tol,
        holds=holds,
    )
