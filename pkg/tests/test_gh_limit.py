import pytest

from curvgraph.core.exceptions import DomainError, ResourceError, VerdictFailure
from curvgraph.schemas import RaySpec
from curvgraph.services.curvature import BAKRY_EMERY, OLLIVIER
from curvgraph.services.generators import RootedGeneratorSequence, lattice
from curvgraph.services.gh_limit import (
    curvature_semicontinuity_check,
    function_convergence,
    limit_consistent,
    pgh_converges,
    pgh_limit,
    rooted_isomorphism,
)


@pytest.fixture
def constant(z2):
    return RootedGeneratorSequence(z2, RaySpec(start=[0, 0], step=[0, 0]))


@pytest.fixture
def marching(glued_z2):
    return RootedGeneratorSequence(glued_z2, RaySpec(start=[0, 0], step=[1, 0]))


def _drifting(amplitude=1.0):
    return RootedGeneratorSequence(
        lattice(1), RaySpec(start=[0], step=[0], drift={"u": [0], "v": [1], "amplitude": amplitude})
    )


def test_constant_sequence_converges_immediately(constant):
    report = pgh_converges(constant, range(1, 6), 3, 1e-3)
    assert report.verdict == "converged"
    assert report.stabilization_index == 1
    assert all(row.deviation == 0.0 for row in report.weight_sup_deviation)
    assert report.tested_indices == [1, 2, 3, 4, 5]
    assert report.caveat


def test_marching_root_leaves_the_glue(marching, z2):
    indices = list(range(1, 13))
    report = pgh_converges(marching, indices, 3, 1e-3)
    assert report.verdict == "converged"
    # from index 3 on the glue sits on the sphere and only its copy-0 edge is inside the ball
    assert report.stabilization_index == 3
    assert [row.isomorphic for row in report.weight_sup_deviation[:3]] == [False, False, True]

    limit = pgh_limit(marching, indices, 3, report=report)
    assert limit.provenance == list(range(3, 13))
    assert rooted_isomorphism(limit.ball, z2.materialize_ball(z2.root, 3)) is not None
    assert len(limit.vertex_weights) == 25


def test_drifting_weight():
    seq = _drifting()
    converging = pgh_converges(seq, [10, 100, 1000, 10000], 2, 1e-3)
    assert converging.verdict == "converged"
    assert converging.stabilization_index == 10

    diverging = pgh_converges(seq, range(1, 11), 2, 1e-3)
    assert diverging.verdict == "weights-diverge"
    with pytest.raises(VerdictFailure):
        pgh_limit(seq, range(1, 11), 2)


def test_indices_must_increase(constant):
    with pytest.raises(DomainError):
        pgh_converges(constant, [3, 2], 2, 1e-3)
    with pytest.raises(DomainError):
        pgh_converges(constant, [], 2, 1e-3)


def test_limit_is_consistent_across_radii(marching):
    assert limit_consistent(marching, range(1, 13), 3)


def test_rooted_isomorphism(z2, glued_z2):
    here = z2.materialize_ball((0, 0), 2)
    there = z2.materialize_ball((5, 0), 2)
    iso = rooted_isomorphism(here, there)
    assert iso is not None
    assert iso.mapping[(0, 0)] == (5, 0)
    assert iso.inverse().mapping[(5, 0)] == (0, 0)
    assert rooted_isomorphism(here, here).mapping == {v: v for v in here.vertices}
    assert rooted_isomorphism(here, glued_z2.materialize_ball(glued_z2.root, 2)) is None


def test_isomorphism_search_budget(z2):
    here = z2.materialize_ball((0, 0), 2)
    there = z2.materialize_ball((5, 0), 2)
    with pytest.raises(ResourceError):
        rooted_isomorphism(here, there, budget=1)


def test_function_convergence(constant):
    indices = range(1, 7)
    functions = {i: {v: 1.0 + 1.0 / i for v in constant.ball(i, 2).vertices} for i in indices}
    limit_u = {v: 1.0 for v in constant.ball(6, 2).vertices}
    converged = function_convergence(constant, functions, limit_u, 2, 0.3)
    assert converged.verdict == "converged"
    assert converged.rows[0].deviation == pytest.approx(1.0)
    assert function_convergence(constant, functions, limit_u, 2, 0.1).verdict == "diverges"

    with pytest.raises(DomainError):
        function_convergence(constant, functions, {(0, 0): 1.0}, 2, 0.3)


@pytest.mark.parametrize("mode", [BAKRY_EMERY, OLLIVIER])
def test_curvature_semicontinuity_on_marching_sequence(marching, mode):
    report = curvature_semicontinuity_check(marching, list(range(1, 13)), mode)
    assert report.holds
    assert report.limit_curvature == pytest.approx(0.0, abs=1e-7)
    assert report.limit_curvature >= report.tail_min - report.tolerance


def test_semicontinuity_rejects_unknown_mode(marching):
    with pytest.raises(DomainError):
        curvature_semicontinuity_check(marching, [1, 2, 3], "forman")


@pytest.mark.parametrize("mode", [BAKRY_EMERY, OLLIVIER])
def test_curvature_semicontinuity_under_converging_weights(mode):
    indices = [10, 100, 1000, 10000]
    report = curvature_semicontinuity_check(_drifting(), indices, mode)
    assert [row.index for row in report.rows] == indices
    assert report.holds
    assert report.rows[-1].curvature == pytest.approx(report.limit_curvature, abs=1e-12)
    if mode == OLLIVIER:
        assert abs(report.rows[0].curvature - report.rows[-1].curvature) > 1e-6
