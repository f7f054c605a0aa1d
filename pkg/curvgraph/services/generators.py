"""
Finitely-presented infinite graphs as pure neighbor oracles.

A `GraphGenerator` wraps a combinatorial family (lattice, regular tree,
product, glued pair) with base weights and a finite perturbation table. Balls
of any radius are materialized on demand into `RootedBall`s.
"""
import logging
import threading
from abc import ABC, abstractmethod
from collections import deque
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from ..core.config import settings
from ..core.exceptions import DomainError, IntegrityError, PreconditionError, ResourceError
from ..schemas.generator import (
    BoundedGeometryReport,
    DriftSpec,
    GeneratorSpec,
    GeometryViolation,
    RaySpec,
)
from .graph_core import RootedBall, VertexId, WeightedGraph, ball

logger = logging.getLogger(__name__)


def as_token(obj: Any) -> Any:
    """JSON nested lists to hashable nested tuples."""
    if isinstance(obj, (list, tuple)):
        return tuple(as_token(x) for x in obj)
    return obj


def edge_key(u: VertexId, v: VertexId) -> Tuple[VertexId, VertexId]:
    return (u, v) if u <= v else (v, u)


class Family(ABC):
    """Combinatorial skeleton plus the weights it carries before perturbation."""

    root: Any

    @abstractmethod
    def contains(self, v: Any) -> bool: ...

    @abstractmethod
    def neighbors(self, v: Any) -> List[Any]: ...

    @abstractmethod
    def advance(self, start: Any, step: Any, i: int) -> Any:
        """The i-th point of the ray start, start + step, ..."""

    def base_m(self, v: Any) -> float:
        return self.m

    def base_w(self, u: Any, v: Any) -> float:
        return self.w


class LatticeFamily(Family):
    def __init__(self, d: int, m: float = 1.0, w: float = 1.0):
        self.d = d
        self.m = m
        self.w = w
        self.root = (0,) * d

    def contains(self, v):
        return isinstance(v, tuple) and len(v) == self.d and all(isinstance(c, int) for c in v)

    def neighbors(self, v):
        out = []
        for i in range(self.d):
            for delta in (-1, 1):
                out.append(v[:i] + (v[i] + delta,) + v[i + 1:])
        return sorted(out)

    def advance(self, start, step, i):
        if not (self.contains(start) and self.contains(step)):
            raise DomainError(f"Ray start/step must be integer {self.d}-tuples, got {start!r}, {step!r}.")
        return tuple(s + i * t for s, t in zip(start, step))


class TreeFamily(Family):
    """d-regular tree; vertices are child-index paths from the root ()."""

    def __init__(self, d: int, m: float = 1.0, w: float = 1.0):
        self.d = d
        self.m = m
        self.w = w
        self.root = ()

    def _children(self, v):
        count = self.d if len(v) == 0 else self.d - 1
        return [v + (k,) for k in range(count)]

    def contains(self, v):
        if not isinstance(v, tuple):
            return False
        for depth, k in enumerate(v):
            limit = self.d if depth == 0 else self.d - 1
            if not isinstance(k, int) or not 0 <= k < limit:
                return False
        return True

    def neighbors(self, v):
        out = self._children(v)
        if v:
            out.append(v[:-1])
        return sorted(out)

    def advance(self, start, step, i):
        path = start + step * i
        if not self.contains(path):
            raise DomainError(f"Ray reaches invalid tree path {path!r}.")
        return path


class ProductFamily(Family):
    """Cartesian product; an edge moves one factor and inherits that factor's weight."""

    def __init__(self, first: Family, second: Family, m: float = 1.0):
        self.first = first
        self.second = second
        self.m = m
        self.root = (first.root, second.root)

    def contains(self, v):
        return isinstance(v, tuple) and len(v) == 2 and self.first.contains(v[0]) and self.second.contains(v[1])

    def neighbors(self, v):
        a, b = v
        out = [(y, b) for y in self.first.neighbors(a)] + [(a, y) for y in self.second.neighbors(b)]
        return sorted(out)

    def advance(self, start, step, i):
        return (self.first.advance(start[0], step[0], i), self.second.advance(start[1], step[1], i))

    def base_w(self, u, v):
        if u[0] == v[0]:
            return self.second.base_w(u[1], v[1])
        return self.first.base_w(u[0], v[0])


class GluedFamily(Family):
    """Two copies of `base` with the listed base tokens identified (copy 0 is canonical)."""

    def __init__(self, base: Family, identify: Iterable[Any]):
        self.base = base
        self.identify = frozenset(identify)
        for t in self.identify:
            if not base.contains(t):
                raise DomainError(f"Glue token {t!r} is not a vertex of the base family.")
        self.root = self.canonical(0, base.root)

    def canonical(self, copy: int, t: Any) -> Tuple[int, Any]:
        return (0, t) if t in self.identify else (copy, t)

    def contains(self, v):
        if not (isinstance(v, tuple) and len(v) == 2 and v[0] in (0, 1) and self.base.contains(v[1])):
            return False
        return v == self.canonical(v[0], v[1])

    def neighbors(self, v):
        copy, t = v
        copies = (0, 1) if t in self.identify else (copy,)
        # edges between identified tokens exist in both copies and are merged
        return sorted({self.canonical(c, y) for c in copies for y in self.base.neighbors(t)})

    def advance(self, start, step, i, copy: int = 0):
        return self.canonical(copy, self.base.advance(start, step, i))

    def base_m(self, v):
        return self.base.base_m(v[1])

    def base_w(self, u, v):
        return self.base.base_w(u[1], v[1])


def build_family(spec: GeneratorSpec) -> Family:
    if spec.family == "lattice":
        family = LatticeFamily(spec.d, spec.m, spec.w)
    elif spec.family == "tree":
        family = TreeFamily(spec.d, spec.m, spec.w)
    else:
        first, second = (build_family(f) for f in spec.factors)
        family = ProductFamily(first, second, spec.m)
    if spec.glue is not None:
        identify = [as_token(t) for t in spec.glue.identify] if spec.glue.identify else [family.root]
        family = GluedFamily(family, identify)
    return family


class GraphGenerator:
    """Immutable neighbor oracle; materialized balls are memoized behind a lock."""

    def __init__(
        self,
        family: Family,
        C: Optional[float] = None,
        R_pert: int = 8,
        perturb_m: Optional[Dict[Any, float]] = None,
        perturb_w: Optional[Dict[Tuple[Any, Any], float]] = None,
        validate: bool = True,
    ):
        self.family = family
        self.C = C
        self.R_pert = R_pert
        self.perturb_m = dict(perturb_m or {})
        self.perturb_w = {edge_key(*e): w for e, w in (perturb_w or {}).items()}
        self._lock = threading.Lock()
        self._balls: Dict[Any, RootedBall] = {}
        if validate:
            self._validate_perturbations()

    @classmethod
    def from_spec(cls, spec: GeneratorSpec) -> "GraphGenerator":
        family = build_family(spec)
        perturb_m = {as_token(p.v): p.m for p in spec.perturb_m}
        perturb_w = {(as_token(p.u), as_token(p.v)): p.w for p in spec.perturb_w}
        return cls(family, C=spec.C, R_pert=spec.R_pert, perturb_m=perturb_m, perturb_w=perturb_w)

    @property
    def root(self) -> Any:
        return self.family.root

    def _validate_perturbations(self) -> None:
        if not self.perturb_m and not self.perturb_w:
            return
        touched = set(self.perturb_m)
        for u, v in self.perturb_w:
            self.require(u, v)
            if v not in self.family.neighbors(u):
                raise PreconditionError(f"Perturbed edge ({u!r}, {v!r}) is not an edge of the family.")
            touched.update((u, v))
        for v in self.perturb_m:
            self.require(v)
        within = self._bfs_depths(self.root, self.R_pert)
        outside = sorted((v for v in touched if v not in within), key=repr)
        if outside:
            raise PreconditionError(
                f"Perturbation touches {outside[0]!r}, farther than R_pert={self.R_pert} from the root.",
                {"R_pert": self.R_pert, "vertices": [repr(v) for v in outside]},
            )

    def require(self, *vertices: Any) -> None:
        for v in vertices:
            if not self.family.contains(v):
                raise DomainError(f"{v!r} is not a vertex of this generator.", {"vertex": repr(v)})

    # -- oracle ------------------------------------------------------------

    def m(self, v: Any) -> float:
        return self.perturb_m.get(v, self.family.base_m(v))

    def w(self, u: Any, v: Any) -> float:
        return self.perturb_w.get(edge_key(u, v), self.family.base_w(u, v))

    def neighbors(self, v: Any) -> List[Tuple[Any, float]]:
        return [(y, self.w(v, y)) for y in self.family.neighbors(v)]

    def with_edge_weight(self, u: Any, v: Any, w: float) -> "GraphGenerator":
        """Copy of this generator with one more edge override (used by drifting sequences)."""
        perturb_w = dict(self.perturb_w)
        perturb_w[edge_key(u, v)] = w
        return GraphGenerator(self.family, self.C, self.R_pert, self.perturb_m, perturb_w)

    # -- balls ---------------------------------------------------------------

    def _bfs_depths(self, x0: Any, R: int, budget: Optional[int] = None) -> Dict[Any, int]:
        depth = {x0: 0}
        queue = deque([x0])
        while queue:
            x = queue.popleft()
            if depth[x] == R:
                continue
            for y in self.family.neighbors(x):
                if y not in depth:
                    depth[y] = depth[x] + 1
                    if budget is not None and len(depth) > budget:
                        raise ResourceError(
                            f"Ball B_{R}({x0!r}) exceeds the vertex budget of {budget}.",
                            {"budget": budget, "radius": R},
                        )
                    queue.append(y)
        return depth

    def materialize_ball(self, x0: Any, R: int, budget: Optional[int] = None) -> RootedBall:
        self.require(x0)
        if R < 0:
            raise DomainError(f"Radius must be non-negative, got {R}.")
        budget = budget or settings.BUDGET
        with self._lock:
            cached = self._balls.get(x0)
        if cached is not None and cached.radius >= R:
            return cached if cached.radius == R else ball(cached.graph, x0, R)

        depth = self._bfs_depths(x0, R, budget)
        edges = [
            (x, y, self.w(x, y))
            for x in depth
            for y in self.family.neighbors(x)
            if y in depth and x < y
        ]
        graph = WeightedGraph({v: self.m(v) for v in depth}, edges)
        result = ball(graph, x0, R)
        logger.debug(f"Materialized B_{R}({x0!r}) with {len(graph)} vertices.")
        with self._lock:
            current = self._balls.get(x0)
            if current is None or current.radius < R:
                self._balls[x0] = result
        return result

    def __repr__(self):
        return f"<GraphGenerator(family={type(self.family).__name__}, root={self.root!r})>"


def load_generator(path: str) -> GraphGenerator:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as e:
        raise DomainError(f"Cannot read generator file {path}: {e}") from e
    return GraphGenerator.from_spec(GeneratorSpec.model_validate_json(text))


def validate_bounded_geometry(gen: GraphGenerator, sample_radius: int) -> BoundedGeometryReport:
    """Check deg <= C and C^-1 <= m, w <= C on B_r(root) and on the perturbation table."""
    if gen.C is None:
        raise PreconditionError("Generator declares no bounded-geometry constant C.")
    C = gen.C
    depth = gen._bfs_depths(gen.root, sample_radius, settings.BUDGET)
    violations: List[GeometryViolation] = []
    max_degree = 0

    def check_weight(kind, witness, value):
        if not (1.0 / C <= value <= C):
            violations.append(GeometryViolation(kind=kind, witness=list(witness), value=value))

    edges_seen = set()
    for x in sorted(depth, key=repr):
        nbrs = gen.neighbors(x)
        max_degree = max(max_degree, len(nbrs))
        if len(nbrs) > C:
            violations.append(GeometryViolation(kind="degree", witness=[x], value=len(nbrs)))
        check_weight("vertex_weight", [x], gen.m(x))
        for y, w in nbrs:
            back = dict(gen.neighbors(y))
            if x not in back or back[x] != w:
                raise IntegrityError(
                    f"Oracle asymmetry between {x!r} and {y!r}.", {"u": repr(x), "v": repr(y)}
                )
            key = edge_key(x, y)
            if key not in edges_seen:
                edges_seen.add(key)
                check_weight("edge_weight", key, w)

    for v in sorted(gen.perturb_m, key=repr):
        if v not in depth:
            check_weight("vertex_weight", [v], gen.m(v))
    for key in sorted(gen.perturb_w, key=repr):
        if key not in edges_seen:
            check_weight("edge_weight", key, gen.w(*key))

    report = BoundedGeometryReport(
        C=C,
        sample_radius=sample_radius,
        sampled_vertices=len(depth),
        max_degree=max_degree,
        violations=violations,
        passed=not violations,
    )
    if not report.passed:
        logger.warning(f"Bounded geometry BG({C}) fails with {len(violations)} violation(s).")
    return report


class RootedGeneratorSequence:
    """(G_i, p_i): roots marching along a ray, optionally with a drifting edge weight."""

    def __init__(self, generator: GraphGenerator, ray: RaySpec):
        self.generator = generator
        self.start = as_token(ray.start)
        self.step = as_token(ray.step)
        self.copy = ray.copy_index
        self.drift: Optional[DriftSpec] = ray.drift
        self._graphs: Dict[int, GraphGenerator] = {}
        self._lock = threading.Lock()

    def root(self, i: int) -> Any:
        family = self.generator.family
        if isinstance(family, GluedFamily):
            p = family.advance(self.start, self.step, i, copy=self.copy)
        else:
            p = family.advance(self.start, self.step, i)
        self.generator.require(p)
        return p

    def graph(self, i: int) -> GraphGenerator:
        if self.drift is None:
            return self.generator
        if i <= 0:
            raise DomainError("Drifting sequences are indexed from 1.")
        with self._lock:
            if i not in self._graphs:
                u, v = as_token(self.drift.u), as_token(self.drift.v)
                base = self.generator.w(u, v)
                self._graphs[i] = self.generator.with_edge_weight(u, v, base + self.drift.amplitude / i)
            return self._graphs[i]

    def ball(self, i: int, R: int, budget: Optional[int] = None) -> RootedBall:
        return self.graph(i).materialize_ball(self.root(i), R, budget)


def lattice(d: int, **kwargs) -> GraphGenerator:
    return GraphGenerator(LatticeFamily(d, kwargs.pop("m", 1.0), kwargs.pop("w", 1.0)), **kwargs)


def regular_tree(d: int, **kwargs) -> GraphGenerator:
    return GraphGenerator(TreeFamily(d, kwargs.pop("m", 1.0), kwargs.pop("w", 1.0)), **kwargs)


def glued(base: Family, identify: Optional[Sequence[Any]] = None, **kwargs) -> GraphGenerator:
    return GraphGenerator(GluedFamily(base, identify or [base.root]), **kwargs)


def glued_lattice(d: int, **kwargs) -> GraphGenerator:
    """Two copies of Z^d identified at the origin."""
    return glued(LatticeFamily(d), **kwargs)


def sphere_sizes(gen: GraphGenerator, x0: Any, R: int) -> List[int]:
    depth = gen._bfs_depths(x0, R, settings.BUDGET)
    sizes = [0] * (R + 1)
    for d in depth.values():
        sizes[d] += 1
    return sizes
