"""
`corpus --out DIR`: regenerate the reference tables in one deterministic tree.

Every randomized part draws from one `numpy.random.default_rng(seed)`, and
tables are written in a fixed order, so two runs with the same seed produce
byte-identical trees.
"""
import argparse
import logging
import os
from typing import Any, Callable, Dict, List

import networkx as nx
import numpy as np

from ...core.exceptions import VerdictFailure
from ...schemas import RaySpec
from ...schemas.common import jsonable_vertex
from ...services.curvature import BAKRY_EMERY, OLLIVIER, bakry_emery_sweep, curvature_outside, ollivier_sweep
from ...services.ends import classify_ends, count_ends, ends_wrt, separating_harmonics
from ...services.generators import RootedGeneratorSequence, glued_lattice, lattice, sphere_sizes
from ...services.gh_limit import curvature_semicontinuity_check, pgh_converges, pgh_limit
from ...services.graph_core import from_networkx
from ...services.harmonic import (
    dimension_certificate,
    dirichlet_solve,
    gradient_decay_profile,
    gradient_max_principle_check,
    green_dirichlet,
    green_limit,
)
from ...services.reporting import emit_report, emit_table

logger = logging.getLogger(__name__)

ORACLE_GRAPHS = {
    "edge": lambda: nx.path_graph(2),
    "path4": lambda: nx.path_graph(4),
    "cycle3": lambda: nx.cycle_graph(3),
    "cycle4": lambda: nx.cycle_graph(4),
    "cycle5": lambda: nx.cycle_graph(5),
    "complete4": lambda: nx.complete_graph(4),
    "star3": lambda: nx.star_graph(3),
    "cube3": lambda: nx.hypercube_graph(3),
}


def register(groups) -> None:
    parser = groups.add_parser("corpus", help="Regenerate the reference tables")
    parser.add_argument("--out", dest="tree", required=True, help="Directory of the table tree")
    parser.add_argument("--trials", type=int, default=200, help="Random Dirichlet problems to record")
    parser.set_defaults(handler=corpus_handler, command="build")


class CorpusWriter:
    def __init__(self, root: str):
        self.root = root
        self.files: List[str] = []

    def report(self, relative: str, result: Any, fmt: str = "json") -> None:
        emit_report(result, fmt, os.path.join(self.root, relative))
        self.files.append(relative)
        logger.info(f"corpus: wrote {relative}")

    def table(self, relative: str, header: List[str], rows: List[List[Any]]) -> None:
        emit_table(header, rows, os.path.join(self.root, relative))
        self.files.append(relative)


def _refusal(call: Callable[[], Any]) -> Dict[str, Any]:
    try:
        return {"refused": False, "report": call().model_dump(mode="json")}
    except VerdictFailure as e:
        return {"refused": True, **e.to_dict()}


def curvature_tables(out: CorpusWriter, workers: int) -> None:
    for name, build in ORACLE_GRAPHS.items():
        g = from_networkx(build())
        highs = ollivier_sweep(g, workers=workers)
        exact = ollivier_sweep(g, exact=True, workers=workers)
        rows = [
            [str(jsonable_vertex(a.edge[0])), str(jsonable_vertex(a.edge[1])), a.kappa, b.kappa, abs(a.kappa - b.kappa)]
            for a, b in zip(highs, exact)
        ]
        out.table(f"curvature/ollivier_{name}.csv", ["u", "v", "kappa_highs", "kappa_exact", "difference"], rows)
        out.report(f"curvature/bakry_emery_{name}.csv", bakry_emery_sweep(g, workers=workers), "csv")

    z2 = glued_lattice(2)
    glue = z2.root
    out.report("curvature/outside_glued_z2.json", curvature_outside(z2, {glue}, OLLIVIER, 4, workers=workers))
    out.report("curvature/outside_glued_z2_empty.json", curvature_outside(z2, set(), OLLIVIER, 4, workers=workers))


def harmonic_tables(out: CorpusWriter, rng: np.random.Generator, trials: int, workers: int) -> None:
    path = from_networkx(nx.path_graph(11))
    out.report("harmonic/path_interpolation.csv", dirichlet_solve(path, range(1, 10), {0: 0.0, 10: 1.0}), "csv")

    rows = []
    grid = nx.grid_2d_graph(5, 5)
    ring = [v for v in grid.nodes if 0 in v or 4 in v]
    for trial in range(trials):
        for v in sorted(grid.nodes):
            grid.nodes[v]["m"] = float(rng.uniform(0.5, 2.0))
        for a, b in sorted(grid.edges):
            grid.edges[a, b]["w"] = float(rng.uniform(0.5, 2.0))
        g = from_networkx(grid)
        data = {v: float(rng.uniform(-1.0, 1.0)) for v in sorted(ring)}
        solution = dirichlet_solve(g, set(g.vertices) - set(ring), data)
        inner = [solution.values[v] for v in solution.interior]
        lo, hi = min(data.values()), max(data.values())
        rows.append([trial, lo, hi, min(inner), max(inner), lo <= min(inner) and max(inner) <= hi])
    out.table("harmonic/max_principle.csv", ["trial", "min_boundary", "max_boundary", "min_interior", "max_interior", "holds"], rows)

    z2, z3 = lattice(2), lattice(3)
    out.report("harmonic/green_z2.csv", green_limit(z2, z2.root, [2, 4, 8, 12], 1e-3), "csv")
    out.report("harmonic/green_z3.csv", green_limit(z3, z3.root, [2, 4, 8], 1e-3), "csv")

    annulus = z2.materialize_ball(z2.root, 8)
    sphere_values = {v: float(rng.uniform(-1.0, 1.0)) for v in sorted(annulus.sphere(8))}
    u = dirichlet_solve(annulus, [v for v, d in annulus.depth.items() if d < 8], sphere_values).values
    W = [v for v, d in annulus.depth.items() if d <= 5]
    out.report("harmonic/gradient_max_principle_z2.json", gradient_max_principle_check(annulus, W, u))

    green = green_dirichlet(z2, z2.root, 10, z2.root)
    out.report("harmonic/decay_green_z2.csv", gradient_decay_profile(z2, green, list(range(1, 9))), "csv")

    out.report("harmonic/dimbound_z2.json", dimension_certificate(z2, z2.root, 1, workers=workers))
    glued = glued_lattice(2)
    out.report(
        "harmonic/dimbound_glued_z2_empty_omega.json",
        _refusal(lambda: dimension_certificate(glued, glued.root, 1, omega=set(), workers=workers)),
    )


def ends_tables(out: CorpusWriter, workers: int) -> Dict[str, Any]:
    z1 = lattice(1)
    z_count = count_ends(z1, [{z1.root}], workers=workers)
    out.report("ends/z.json", z_count)
    out.report("ends/z.csv", z_count.rows[0].classifications, "csv")

    z2 = lattice(2)
    out.report("ends/z2.json", classify_ends(z2, ends_wrt(z2, {z2.root}, 8), workers=workers))
    z3 = lattice(3)
    out.report("ends/z3.json", classify_ends(z3, ends_wrt(z3, {z3.root}, 8), workers=workers))

    glued = glued_lattice(3)
    omega = {glued.root}
    counted = count_ends(glued, [omega], workers=workers)
    out.report("ends/glued_z3.json", counted)
    try:
        basis = separating_harmonics(
            glued, omega, 10, 12, gram_depth=8, classifications=counted.rows[0].classifications
        )
    except VerdictFailure as e:
        logger.warning(f"corpus: separating basis refused: {e.detail}")
        out.report("ends/basis_glued_z3.json", {"refused": True, **e.to_dict()})
        basis = None
    else:
        out.report("ends/basis_glued_z3.csv", basis, "csv")

    certificate = dimension_certificate(glued, glued.root, 1, workers=workers)
    chain = {
        "N0": counted.N0,
        "basis_rank": basis.rank if basis else None,
        "sphere_bound": certificate.sphere_count,
        "sphere_sizes": sphere_sizes(glued, glued.root, 2),
        "holds": basis is not None and counted.N0 <= basis.rank <= certificate.sphere_count,
    }
    out.report("ends/dimension_chain.json", chain)
    return chain


def gh_tables(out: CorpusWriter, workers: int) -> None:
    z2 = lattice(2)
    constant = RootedGeneratorSequence(z2, RaySpec(start=[0, 0], step=[0, 0]))
    out.report("gh/constant.json", pgh_converges(constant, range(1, 6), 3, 1e-3, workers=workers))

    glued = glued_lattice(2)
    marching = RootedGeneratorSequence(glued, RaySpec(start=[0, 0], step=[1, 0]))
    indices = list(range(1, 13))
    report = pgh_converges(marching, indices, 3, 1e-3, workers=workers)
    out.report("gh/marching_glued_z2.json", report)
    out.report("gh/marching_glued_z2_limit.csv", pgh_limit(marching, indices, 3, report=report), "csv")
    for mode in (BAKRY_EMERY, OLLIVIER):
        out.report(f"gh/semicontinuity_{mode}.json", curvature_semicontinuity_check(marching, indices, mode))

    drift = RootedGeneratorSequence(
        lattice(1),
        RaySpec(start=[0], step=[0], drift={"u": [0], "v": [1], "amplitude": 1.0}),
    )
    out.report("gh/drift_z.json", pgh_converges(drift, [10, 100, 1000, 10000], 2, 1e-3))


def corpus_handler(args: argparse.Namespace, config):
    root = args.tree
    rng = np.random.default_rng(config.seed)
    out = CorpusWriter(root)
    curvature_tables(out, config.workers)
    harmonic_tables(out, rng, args.trials, config.workers)
    chain = ends_tables(out, config.workers)
    gh_tables(out, config.workers)
    return {"root": root, "seed": config.seed, "files": out.files, "dimension_chain": chain}
