"""Sparse assembly and SPD solves for Dirichlet problems on weighted graphs."""
import logging
import math
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

import numpy as np
from scipy import linalg, sparse
from scipy.sparse.linalg import cg

from ..core.config import settings
from ..core.exceptions import NumericError
from .graph_core import VertexId, WeightedGraph

logger = logging.getLogger(__name__)


def dirichlet_matrix(
    g: WeightedGraph,
    interior: Iterable[VertexId],
    boundary_values: Optional[Mapping[VertexId, float]] = None,
) -> Tuple[List[VertexId], sparse.csr_matrix, np.ndarray]:
    """Block of m * (-Delta) on the interior, plus the right-hand side carried by boundary data.

    Row x reads  sum_y w(x,y) u(x) - sum_{y interior} w(x,y) u(y) = sum_{y boundary} w(x,y) b(y).
    Neighbors outside interior and boundary contribute zero data.
    """
    order = sorted(interior)
    index = {v: i for i, v in enumerate(order)}
    boundary_values = boundary_values or {}
    rows, cols, vals = [], [], []
    rhs = np.zeros(len(order))
    for x in order:
        i = index[x]
        diag = 0.0
        for y, w in g.neighbors(x):
            diag += w
            j = index.get(y)
            if j is not None:
                rows.append(i)
                cols.append(j)
                vals.append(-w)
            else:
                rhs[i] += w * boundary_values.get(y, 0.0)
        rows.append(i)
        cols.append(i)
        vals.append(diag)
    M = sparse.csr_matrix((vals, (rows, cols)), shape=(len(order), len(order)))
    return order, M, rhs


def solve_spd(M: sparse.csr_matrix, rhs: np.ndarray) -> Tuple[np.ndarray, Dict[str, object]]:
    n = M.shape[0]
    if n == 0:
        return np.zeros(0), {"method": "none", "unknowns": 0, "iterations": 0}
    if n < settings.DENSE_CUTOFF:
        try:
            x = linalg.solve(M.toarray(), rhs, assume_a="pos")
        except linalg.LinAlgError as e:
            raise NumericError(f"Dense Cholesky solve failed on {n} unknowns: {e}") from e
        return x, {"method": "dense", "unknowns": n, "iterations": 1}

    iterations = 0

    def count(_):
        nonlocal iterations
        iterations += 1

    maxiter = int(50 * math.ceil(math.sqrt(n)))
    jacobi = sparse.diags(1.0 / M.diagonal())
    x, info = cg(M, rhs, rtol=settings.CG_RTOL, atol=0.0, maxiter=maxiter, M=jacobi, callback=count)
    if info != 0:
        raise NumericError(
            f"Conjugate gradient did not converge on {n} unknowns within {maxiter} iterations.",
            {"unknowns": n, "maxiter": maxiter, "info": int(info)},
        )
    logger.debug(f"CG converged on {n} unknowns in {iterations} iterations.")
    return x, {"method": "cg", "unknowns": n, "iterations": iterations}
