import pytest
from pydantic import ValidationError

from curvgraph.core.exceptions import DomainError, IntegrityError, PreconditionError, ResourceError
from curvgraph.schemas import GeneratorSpec, RaySpec
from curvgraph.services.generators import (
    GraphGenerator,
    LatticeFamily,
    RootedGeneratorSequence,
    glued_lattice,
    lattice,
    load_generator,
    regular_tree,
    sphere_sizes,
    validate_bounded_geometry,
)

from .conftest import write_json


@pytest.mark.parametrize("R", [1, 2, 5])
def test_lattice_sphere_sizes(R):
    assert sphere_sizes(lattice(2), (0, 0), R)[1:] == [4 * r for r in range(1, R + 1)]
    assert sphere_sizes(lattice(3), (0, 0, 0), R)[1:] == [4 * r * r + 2 for r in range(1, R + 1)]


def test_tree_and_glued_sphere_sizes():
    assert sphere_sizes(regular_tree(3), (), 4) == [1, 3, 6, 12, 24]
    glued = glued_lattice(2)
    assert glued.root == (0, (0, 0))
    assert len(glued.neighbors(glued.root)) == 8
    assert sphere_sizes(glued, glued.root, 3) == [1, 8, 16, 24]


def test_glued_copies_are_distinct_away_from_the_glue():
    glued = glued_lattice(2)
    assert (1, (1, 0)) in [y for y, _ in glued.neighbors(glued.root)]
    glued.require((1, (2, 0)))
    with pytest.raises(DomainError):
        glued.require((1, (0, 0)))


def test_product_of_lines_is_the_square_lattice():
    spec = GeneratorSpec.model_validate({
        "family": "product",
        "factors": [{"family": "lattice", "d": 1, "w": 2.0}, {"family": "lattice", "d": 1}],
    })
    gen = GraphGenerator.from_spec(spec)
    assert sphere_sizes(gen, gen.root, 3) == [1, 4, 8, 12]
    assert gen.w(((0,), (0,)), ((1,), (0,))) == 2.0
    assert gen.w(((0,), (0,)), ((0,), (1,))) == 1.0


def test_spec_requires_family_fields():
    with pytest.raises(ValidationError):
        GeneratorSpec.model_validate({"family": "lattice"})
    with pytest.raises(ValidationError):
        GeneratorSpec.model_validate({"family": "product", "factors": [{"family": "lattice", "d": 1}]})


def test_load_generator_with_perturbations(tmp_path):
    path = write_json(tmp_path / "gen.json", {
        "family": "lattice",
        "d": 2,
        "C": 4,
        "perturb_m": [{"v": [1, 0], "m": 3.0}],
        "perturb_w": [{"u": [0, 0], "v": [0, 1], "w": 0.5}],
    })
    gen = load_generator(path)
    assert gen.m((1, 0)) == 3.0
    assert gen.w((0, 1), (0, 0)) == 0.5
    b = gen.materialize_ball((0, 0), 1)
    assert b.graph.m((1, 0)) == 3.0
    assert b.graph.w((0, 0), (0, 1)) == 0.5


def test_perturbations_must_be_edges_within_radius():
    with pytest.raises(PreconditionError):
        lattice(1, perturb_w={((0,), (2,)): 2.0})
    with pytest.raises(PreconditionError):
        lattice(1, R_pert=3, perturb_m={(5,): 2.0})


def test_budget_refusal_carries_the_budget():
    with pytest.raises(ResourceError) as info:
        lattice(3).materialize_ball((0, 0, 0), 10, budget=100)
    assert info.value.payload["budget"] == 100
    assert info.value.exit_code == 3


def test_materialized_balls_are_cached_and_restricted():
    gen = lattice(2)
    big = gen.materialize_ball((0, 0), 4)
    small = gen.materialize_ball((0, 0), 2)
    assert gen.materialize_ball((0, 0), 4) is big
    assert set(small.vertices) == {v for v, d in big.depth.items() if d <= 2}
    assert small.radius == 2


def test_bounded_geometry():
    assert validate_bounded_geometry(lattice(2, C=4), 3).passed
    report = validate_bounded_geometry(lattice(2, C=4, perturb_w={((0, 0), (1, 0)): 10.0}), 3)
    assert not report.passed
    assert [v.kind for v in report.violations] == ["edge_weight"]
    degree = validate_bounded_geometry(lattice(3, C=5), 1)
    assert any(v.kind == "degree" for v in degree.violations)
    with pytest.raises(PreconditionError):
        validate_bounded_geometry(lattice(2), 1)


class OneWayFamily(LatticeFamily):
    """Broken oracle: the origin lists (1,) but (1,) does not list the origin."""

    def neighbors(self, v):
        if v == (1,):
            return [(2,)]
        return super().neighbors(v)


def test_asymmetric_oracle_is_an_integrity_error():
    gen = GraphGenerator(OneWayFamily(1), C=4)
    with pytest.raises(IntegrityError):
        validate_bounded_geometry(gen, 2)


def test_marching_roots_and_drift():
    seq = RootedGeneratorSequence(glued_lattice(2), RaySpec(start=[0, 0], step=[1, 0], copy=1))
    assert seq.root(0) == (0, (0, 0))
    assert seq.root(3) == (1, (3, 0))

    drift = RootedGeneratorSequence(
        lattice(1), RaySpec(start=[0], step=[0], drift={"u": [0], "v": [1], "amplitude": 2.0})
    )
    assert drift.graph(4).w((0,), (1,)) == pytest.approx(1.5)
    assert drift.ball(4, 1).graph.w((0,), (1,)) == pytest.approx(1.5)
    with pytest.raises(DomainError):
        drift.graph(0)
