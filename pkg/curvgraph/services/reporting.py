"""
Report emission: JSON via pydantic, CSV as long-format tables.

Output is a pure function of the result object, so repeated runs produce
byte-identical files.
"""
import csv
import io
import json
import logging
import math
import os
import tempfile
from typing import Any, Callable, Dict, List, Optional, Tuple

from pydantic import BaseModel

from ..core.exceptions import DomainError, ResourceError
from ..schemas import (
    BakryEmeryResult,
    BoundedGeometryReport,
    ConvergenceReport,
    CurvatureOutsideReport,
    DecayProfile,
    DimensionCertificate,
    EndClassification,
    EndCountReport,
    EndsDecomposition,
    EndSeparatingBasis,
    FunctionConvergenceReport,
    GradientField,
    GradientMaxPrinciple,
    GreenLimitTable,
    HarmonicSolution,
    LimitBall,
    OllivierResult,
    RefinementReport,
    SemicontinuityReport,
    SubharmonicityReport,
)
from ..schemas.common import jsonable_vertex, sorted_vertices

logger = logging.getLogger(__name__)

Table = Tuple[List[str], List[List[Any]]]


def vertex_cell(v: Any) -> str:
    if isinstance(v, (tuple, list)):
        return json.dumps(jsonable_vertex(v), separators=(",", ":"))
    return str(v)


def number_cell(x: Any) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return format(x, ".12g")
    return str(x)


def _vertex_map_rows(values: Dict[Any, float]) -> List[List[Any]]:
    return [[vertex_cell(v), values[v]] for v in sorted_vertices(values)]


def _barrier_table(r: EndClassification) -> Table:
    return ["rho", "sentinel_id", "value"], [[row.rho, vertex_cell(row.vertex), row.value] for row in r.barrier_trace]


def _decay_table(r: DecayProfile) -> Table:
    return ["r", "max_gamma", "max_edge_grad"], [[row.r, row.max_gamma, row.max_edge_grad] for row in r.rows]


def _green_table(r: GreenLimitTable) -> Table:
    rows = []
    for row in r.rows:
        for v in sorted_vertices(row.values):
            rows.append([row.rho, vertex_cell(v), row.values[v], row.sup_increment])
    return ["rho", "vertex", "value", "sup_increment"], rows


def _solution_table(r: HarmonicSolution) -> Table:
    return ["vertex", "value"], _vertex_map_rows(r.values)


def _gradient_table(r: GradientField) -> Table:
    rows = [["vertex", vertex_cell(v), "", r.vertex_gradient[v]] for v in sorted_vertices(r.vertex_gradient)]
    rows += [["edge", vertex_cell(e[0]), vertex_cell(e[1]), r.edge_gradient[e]] for e in sorted_vertices(r.edge_gradient)]
    return ["kind", "u", "v", "value"], rows


def _outside_table(r: CurvatureOutsideReport) -> Table:
    rows = []
    for viol in r.violations:
        if viol.edge is not None:
            rows.append([vertex_cell(viol.edge[0]), vertex_cell(viol.edge[1]), viol.value])
        else:
            rows.append([vertex_cell(viol.vertex), "", viol.value])
    return ["u", "v", "value"], rows


def _decomposition_table(r: EndsDecomposition) -> Table:
    rows = [[vertex_cell(e.representative), vertex_cell(e.anchor), len(e.component_probe)] for e in r.ends]
    return ["representative", "anchor", "probe_size"], rows


def _count_table(r: EndCountReport) -> Table:
    rows = [[len(row.omega), row.probe_radius, row.N, row.N0, row.Nprime, row.inconclusive, row.stable] for row in r.rows]
    return ["omega_size", "probe_radius", "N", "N0", "Nprime", "inconclusive", "stable"], rows


def _basis_table(r: EndSeparatingBasis) -> Table:
    rows = [[i, j, value] for i, row in enumerate(r.gram_matrix) for j, value in enumerate(row)]
    return ["function", "end", "value"], rows


def _convergence_table(r: ConvergenceReport) -> Table:
    rows = [[row.index, row.isomorphic, row.vertex_deviation, row.edge_deviation] for row in r.weight_sup_deviation]
    return ["index", "isomorphic", "vertex_deviation", "edge_deviation"], rows


def _function_convergence_table(r: FunctionConvergenceReport) -> Table:
    return ["index", "deviation"], [[row.index, row.deviation] for row in r.rows]


def _semicontinuity_table(r: SemicontinuityReport) -> Table:
    rows = [[row.index, row.curvature] for row in r.rows] + [["limit", r.limit_curvature]]
    return ["index", "curvature"], rows


def _subharmonic_table(r: SubharmonicityReport) -> Table:
    rows = [[vertex_cell(row.vertex), row.laplacian_of_gamma, row.negative] for row in r.rows]
    return ["vertex", "laplacian_of_gamma", "negative"], rows


def _limit_table(r: LimitBall) -> Table:
    rows = [["vertex", vertex_cell(v), "", r.vertex_weights[v]] for v in sorted_vertices(r.vertex_weights)]
    rows += [["edge", vertex_cell(e[0]), vertex_cell(e[1]), r.edge_weights[e]] for e in sorted_vertices(r.edge_weights)]
    return ["kind", "u", "v", "weight"], rows


TABLES: Dict[type, Callable[[Any], Table]] = {
    EndClassification: _barrier_table,
    DecayProfile: _decay_table,
    GreenLimitTable: _green_table,
    HarmonicSolution: _solution_table,
    GradientField: _gradient_table,
    CurvatureOutsideReport: _outside_table,
    EndsDecomposition: _decomposition_table,
    EndCountReport: _count_table,
    EndSeparatingBasis: _basis_table,
    ConvergenceReport: _convergence_table,
    FunctionConvergenceReport: _function_convergence_table,
    SemicontinuityReport: _semicontinuity_table,
    SubharmonicityReport: _subharmonic_table,
    LimitBall: _limit_table,
}


def _scalar_table(r: BaseModel) -> Table:
    data = r.model_dump(mode="json")
    rows = [[k, v] for k, v in data.items() if not isinstance(v, (dict, list))]
    return ["field", "value"], rows


def to_table(result: Any) -> Table:
    if isinstance(result, list):
        if result and all(isinstance(r, BakryEmeryResult) for r in result):
            return ["vertex", "curvature", "degenerate"], [
                [vertex_cell(r.vertex), r.curvature, r.degenerate] for r in result
            ]
        if result and all(isinstance(r, OllivierResult) for r in result):
            return ["u", "v", "kappa", "duality_gap"], [
                [vertex_cell(r.edge[0]), vertex_cell(r.edge[1]), r.kappa, r.duality_gap] for r in result
            ]
        if result and all(isinstance(r, EndClassification) for r in result):
            header, rows = ["end", "rho", "sentinel_id", "value"], []
            for r in result:
                rows += [[vertex_cell(r.end.representative)] + row for row in _barrier_table(r)[1]]
            return header, rows
        raise DomainError("No tabular form for this list of results.")
    for kind, builder in TABLES.items():
        if isinstance(result, kind):
            return builder(result)
    if isinstance(result, (BakryEmeryResult, OllivierResult, DimensionCertificate, GradientMaxPrinciple,
                           BoundedGeometryReport, RefinementReport)):
        return _scalar_table(result)
    raise DomainError(f"No tabular form for {type(result).__name__}.")


def _finite(data: Any) -> Any:
    """Non-finite floats become null (curvature of an isolated vertex is +inf)."""
    if isinstance(data, float):
        return data if math.isfinite(data) else None
    if isinstance(data, dict):
        return {k: _finite(v) for k, v in data.items()}
    if isinstance(data, list):
        return [_finite(v) for v in data]
    return data


def render_json(result: Any, extra: Optional[Dict[str, Any]] = None) -> str:
    if isinstance(result, list):
        data = [r.model_dump(mode="json") if isinstance(r, BaseModel) else r for r in result]
    elif isinstance(result, BaseModel):
        data = result.model_dump(mode="json")
    else:
        data = result
    if extra:
        data = {**data, **extra} if isinstance(data, dict) else {"results": data, **extra}
    return json.dumps(_finite(data), indent=2, allow_nan=False, default=str) + "\n"


def table_text(header: List[str], rows: List[List[Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([number_cell(cell) for cell in row])
    return buffer.getvalue()


def render_csv(result: Any) -> str:
    return table_text(*to_table(result))


def _write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    try:
        os.makedirs(directory, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", text=True)
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except OSError as e:
        raise ResourceError(f"Cannot write report to {path}: {e}", {"path": path}) from e


def emit_report(
    result: Any,
    fmt: str = "json",
    path: Optional[str] = None,
    extra: Optional[Dict[str, Any]] = None,
) -> str:
    """Render `result` and write it to `path` (returned text is what was written).

    `extra` adds top-level keys to JSON output; CSV ignores it.
    """
    if fmt == "json":
        text = render_json(result, extra)
    elif fmt == "csv":
        text = render_csv(result)
    else:
        raise DomainError(f"Unknown output format {fmt!r}.")
    if path:
        _write_atomic(path, text)
        logger.info(f"Wrote {fmt} report to {path}.")
    return text


def emit_table(header: List[str], rows: List[List[Any]], path: Optional[str] = None) -> str:
    """CSV for tables assembled by the caller rather than taken from a report type."""
    text = table_text(header, rows)
    if path:
        _write_atomic(path, text)
    return text
