import pytest

from curvgraph.core.exceptions import DomainError, PreconditionError, VerdictFailure
from curvgraph.schemas import ProbeRule
from curvgraph.services.ends import (
    barrier,
    classify_end,
    classify_ends,
    count_ends,
    end_refinement_check,
    ends_wrt,
    limit_estimates,
    separating_harmonics,
)
from curvgraph.services.generators import glued_lattice, lattice, regular_tree, sphere_sizes


def _tree_barrier(rho):
    # probability that the walk from a child of the root hits the root before depth rho
    return (0.5 - 0.5**rho) / (1 - 0.5**rho)


def test_line_has_two_ends(z1):
    decomposition = ends_wrt(z1, {(0,)}, 8)
    assert decomposition.count == 2
    assert decomposition.stable
    negative, positive = decomposition.ends
    assert negative.representative == (-8,)
    assert positive.representative == (1,)
    assert positive.anchor == (1,)
    assert negative.anchor == (-1,)
    assert positive.sentinels == [(4,), (6,), (7,)]


def test_empty_omega_gives_one_end(z2):
    assert ends_wrt(z2, set(), 6).count == 1
    assert ends_wrt(z2, {z2.root}, 6).count == 1


def test_omega_must_stay_inside_probe(z1):
    with pytest.raises(PreconditionError):
        ends_wrt(z1, {(8,)}, 8)
    with pytest.raises(PreconditionError):
        ends_wrt(z1, {(12,)}, 8)


@pytest.mark.parametrize("rho", [5, 10, 20])
def test_line_barrier_is_linear(z1, rho):
    positive = ends_wrt(z1, {(0,)}, 8).ends[1]
    values = barrier(z1, positive, rho)
    assert values[(1,)] == pytest.approx(1 - 1 / rho, abs=1e-10)
    assert values[(0,)] == 1.0
    assert values[(rho,)] == 0.0


def test_line_ends_are_parabolic(z1):
    classes = classify_ends(z1, ends_wrt(z1, {(0,)}, 8))
    assert [c.verdict for c in classes] == ["parabolic", "parabolic"]
    for c in classes:
        assert c.limit_estimate == pytest.approx(1.0, abs=1e-9)
        assert not c.low_confidence
        assert c.monotone


def test_line_count_along_exhaustion(z1):
    exhaustion = [{(0,)}, {(-1,), (0,), (1,)}, {(k,) for k in range(-2, 3)}]
    report = count_ends(z1, exhaustion)
    assert [row.N for row in report.rows] == [2, 2, 2]
    assert report.monotone
    assert (report.N, report.N0, report.Nprime) == (2, 0, 2)
    assert report.rows[0].probe_radius == 8


def test_count_rejects_bad_exhaustions(z1):
    with pytest.raises(DomainError):
        count_ends(z1, [])
    with pytest.raises(DomainError):
        count_ends(z1, [{(0,), (1,)}, {(0,)}])


def test_probe_rule_moves_with_omega(z1):
    report = count_ends(z1, [{(k,) for k in range(-3, 4)}], probe_rule=ProbeRule(offset=2, minimum=4))
    assert report.rows[0].probe_radius == 5


@pytest.mark.parametrize("rho", [4, 6, 8])
def test_tree_barrier_matches_gamblers_ruin(rho):
    tree = regular_tree(3)
    end = ends_wrt(tree, {()}, 8).ends[0]
    assert barrier(tree, end, rho)[end.anchor] == pytest.approx(_tree_barrier(rho), abs=1e-9)


def test_tree_ends_are_non_parabolic():
    tree = regular_tree(3)
    classes = classify_ends(tree, ends_wrt(tree, {()}, 8), rho_schedule=(8, 10, 12))
    assert len(classes) == 3
    for c in classes:
        assert c.verdict == "non-parabolic"
        assert c.limit_estimate < 0.95
        assert c.domination_ratio is not None and c.domination_ratio > 0


def test_short_schedule_is_inconclusive(z1):
    end = ends_wrt(z1, {(0,)}, 8).ends[0]
    c = classify_end(z1, end, rho_schedule=(4, 8))
    assert c.verdict == "inconclusive"
    assert c.barrier_trace == []
    with pytest.raises(DomainError):
        classify_end(z1, end, rho_schedule=(8, 4, 12))


def test_limit_estimates_are_exact_for_polynomials_in_inverse_rho():
    rhos = [4, 6, 8, 10]
    values = [1 - 2 / r + 3 / r**2 for r in rhos]
    assert limit_estimates(rhos, values)[-1] == pytest.approx(1.0, abs=1e-12)


def test_plane_is_never_non_parabolic(z2):
    classes = classify_ends(z2, ends_wrt(z2, {z2.root}, 8))
    assert len(classes) == 1
    assert classes[0].verdict != "non-parabolic"


def test_refinement_on_the_line(z1):
    report = end_refinement_check(z1, {(0,)}, {(-1,), (0,), (1,)}, 8)
    assert report.holds
    assert [row.fine_verdicts for row in report.rows] == [["parabolic"], ["parabolic"]]
    with pytest.raises(DomainError):
        end_refinement_check(z1, {(0,), (1,)}, {(0,)}, 8)


def test_separating_basis_degenerates_to_constant(z1):
    basis = separating_harmonics(z1, set(), 8, 6)
    assert basis.constant
    assert basis.rank == 1
    assert basis.gram_matrix == [[1.0]]


def test_separating_basis_refused_without_non_parabolic_end(z1):
    with pytest.raises(VerdictFailure):
        separating_harmonics(z1, {(0,)}, 8, 6)


@pytest.mark.slow
def test_space_barrier_stays_below_one():
    z3 = lattice(3)
    (c,) = classify_ends(z3, ends_wrt(z3, {z3.root}, 8))
    last = [row.value for row in c.barrier_trace if row.rho == 12 and row.vertex == c.end.anchor]
    assert last[0] < 0.95
    assert c.verdict == "non-parabolic"


@pytest.mark.slow
def test_glued_space_has_two_transient_ends():
    glued = glued_lattice(3)
    omega = {glued.root}
    report = count_ends(glued, [omega])
    assert report.N == 2
    assert report.N0 == 2
    assert report.Nprime == 0
    for c in report.rows[0].classifications:
        last = [row.value for row in c.barrier_trace if row.rho == 12 and row.vertex == c.end.anchor]
        assert last[0] < 0.95


def test_tree_ends_are_separated_by_bounded_harmonics():
    tree = regular_tree(3)
    basis = separating_harmonics(tree, {()}, 8, 10, rho_schedule=(8, 10, 12))
    assert not basis.constant
    assert basis.gram_depth == 6
    assert basis.rank == 3
    assert basis.identity_deviation < 0.15
    assert all(norm <= 1.0 + 1e-9 for norm in basis.sup_norms)


@pytest.mark.slow
def test_glued_space_ends_are_separated_by_bounded_harmonics():
    glued = glued_lattice(3)
    omega = {glued.root}
    counted = count_ends(glued, [omega])
    basis = separating_harmonics(
        glued, omega, 10, 12, gram_depth=8, classifications=counted.rows[0].classifications
    )
    assert basis.rank == 2
    assert basis.identity_deviation < 0.15
    assert all(norm <= 1.0 + 1e-9 for norm in basis.sup_norms)
    S2 = sphere_sizes(glued, glued.root, 2)[2]
    assert S2 == 36
    assert counted.N0 <= basis.rank <= S2


@pytest.mark.parametrize("rho", [4, 8, 12])
def test_barrier_stays_between_zero_and_one(z1, z2, rho):
    tree = regular_tree(3)
    cases = [
        (z1, ends_wrt(z1, {(0,)}, 8).ends[1]),
        (z2, ends_wrt(z2, {z2.root}, 4).ends[0]),
        (tree, ends_wrt(tree, {()}, 4).ends[0]),
    ]
    for gen, end in cases:
        values = barrier(gen, end, rho)
        assert min(values.values()) >= 0.0
        assert max(values.values()) <= 1.0


def test_tree_end_count_grows_along_exhaustion():
    tree = regular_tree(3)
    exhaustion = [set(tree.materialize_ball(tree.root, r).depth) for r in (0, 1, 2)]
    report = count_ends(tree, exhaustion, rho_schedule=(8, 10, 12))
    assert [row.N for row in report.rows] == [3, 6, 12]
    assert report.monotone
    for row in report.rows:
        assert row.N0 + row.Nprime + row.inconclusive == row.N
        assert row.Nprime == 0


def test_count_rejects_foreign_tokens_before_growing_balls(z1):
    with pytest.raises(DomainError):
        count_ends(z1, [{(0, 0)}])
    with pytest.raises(DomainError):
        count_ends(z1, [{(0,)}, {(0,), (1, 1)}])
