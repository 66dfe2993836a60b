from fractions import Fraction

import pytest

from simpol.errors import InvalidArgumentError
from simpol.modules.analysis import is_vertex
from simpol.modules.cycleclass import enumerate_vertices
from simpol.modules.dist import OutcomeProfile, deterministic, is_valid, mix, preceq, restrict_distribution, uniform
from simpol.modules.glue import (
    GlueStatus,
    Provenance,
    glue_vertex_check,
    verify_233_example,
    verify_pr_box_example,
    verify_trichotomic_example,
    vsupp,
)
from simpol.modules.oracle import hull_membership
from simpol.modules.space import make_cycle, restrict
from simpol.serialization import distribution_from_json, distribution_to_json

HALF = Fraction(1, 2)


def test_pr_box_glue(pr_box):
    result = glue_vertex_check(pr_box, ["e1"], ["e2", "e3", "e4"])
    assert result.status == GlueStatus.VERTEX
    assert result.vsupp_a.shape == result.vsupp_b.shape == "forest"
    assert len(result.vsupp_a.elements) == len(result.vsupp_b.elements) == 2
    assert result.weights_a == [HALF, HALF]
    assert result.weights_b == [HALF, HALF]


def test_trichotomic_glue(trichotomic):
    result = glue_vertex_check(trichotomic, ["s1", "s2"], ["s3", "s4"])
    assert result.is_vertex
    assert result.vsupp_a.shape == "cycle"
    assert [x.label for x in result.vsupp_a.elements] == ["DETERMINISTIC", "K_ORDER(2)"]
    assert result.weights_a == [Fraction(1, 3), Fraction(2, 3)]
    assert result.weights_b == [Fraction(1, 3), Fraction(2, 3)]


def test_cycle_vsupp_handles_reversed_edges(bell_233):
    piece = restrict(bell_233.space, ["s1", "s6", "s2", "s8"])
    result = vsupp(bell_233, piece)
    assert result.shape == "cycle"
    assert result.elements
    assert all(preceq(q, result.restricted) for q in result.vertices)
    assert all(is_valid(q) and is_vertex(q) for q in result.vertices)


def test_general_piece_falls_back_to_enumeration(trichotomic):
    result = vsupp(trichotomic, trichotomic.space)
    assert result.shape == "general"
    assert [x.provenance for x in result.elements] == [Provenance.ORACLE]
    assert result.vertices == [trichotomic]


def test_mixture_is_rejected_with_a_witness(pr_box):
    zeros = deterministic(pr_box.space, pr_box.profile, {v: 0 for v in pr_box.space.vertices})
    m = mix([("1/2", pr_box), ("1/2", zeros)])
    result = glue_vertex_check(m, ["e1"], ["e2", "e3", "e4"])
    assert result.status == GlueStatus.NOT_VERTEX
    assert result.varying_cell is not None
    assert is_valid(result.witness)
    assert result.witness != m
    assert preceq(result.witness, m)


def test_piece_arguments(pr_box):
    with pytest.raises(InvalidArgumentError):
        glue_vertex_check(pr_box, ["e1", "e2"], ["e2", "e3", "e4"])
    with pytest.raises(InvalidArgumentError):
        glue_vertex_check(pr_box, ["e1"], ["e2", "e3"])
    with pytest.raises(InvalidArgumentError):
        glue_vertex_check(pr_box, [], ["e1", "e2", "e3", "e4"])


def test_glue_agrees_with_vertex_test(rng):
    vertices = [p for _, p in enumerate_vertices(3, 2)]
    for p in vertices:
        assert glue_vertex_check(p, ["e1"], ["e2", "e3"]).is_vertex
    for _ in range(15):
        a, b = rng.sample(vertices, 2)
        m = mix([("1/2", a), ("1/2", b)])
        result = glue_vertex_check(m, ["e1", "e2"], ["e3"])
        assert not result.is_vertex
        assert not is_vertex(m)
        assert preceq(result.witness, m) and result.witness != m


# ============= 示例核对 =============

def test_worked_examples_pass():
    assert verify_pr_box_example().passed
    assert verify_trichotomic_example().passed
    report = verify_233_example()
    assert report.passed, [c for c in report.checks if not c.passed]


def test_perturbed_bell_fixture_fails(bell_233):
    data = distribution_to_json(bell_233)
    data["matrices"]["s5"] = [["1/4", "0", "1/4"], ["1/4", "0", "0"], ["0", "1/4", "0"]]
    perturbed = distribution_from_json(data)
    report = verify_233_example(perturbed)
    assert not report.passed
    assert report.checks[0].passed


def test_pr_box_claims_fail_on_a_deterministic_input(pr_box):
    zeros = deterministic(pr_box.space, pr_box.profile, {v: 0 for v in pr_box.space.vertices})
    report = verify_pr_box_example(zeros)
    assert not report.passed
    assert any(c.claim.startswith("alpha") and not c.passed for c in report.checks)


# ============= 凸包与粘合的对应 =============

def _random_weights(rng, count):
    raw = [rng.randint(0, 4) for _ in range(count)]
    if not any(raw):
        raw[rng.randrange(count)] = 1
    total = sum(raw)
    return [Fraction(w, total) for w in raw]


def test_hull_of_vsupp_stays_below_restriction(rng, pr_box, trichotomic, bell_233):
    cases = [
        (pr_box, ["e1"]),
        (pr_box, ["e2", "e3", "e4"]),
        (trichotomic, ["s1", "s2"]),
        (bell_233, ["s1", "s6", "s2", "s8"]),
    ]
    for p, edges in cases:
        result = vsupp(p, restrict(p.space, edges))
        assert result.vertices
        for _ in range(10):
            weights = _random_weights(rng, len(result.vertices))
            q = mix(list(zip(weights, result.vertices)))
            assert is_valid(q)
            assert preceq(q, result.restricted)


def test_uniform_cycle_is_not_a_glued_vertex():
    space = make_cycle(4)
    u = uniform(space, OutcomeProfile.uniform(space, 2))
    result = glue_vertex_check(u, ["e1"], ["e2", "e3", "e4"])
    assert result.status == GlueStatus.NOT_VERTEX
    assert is_valid(result.witness)
    assert preceq(result.witness, u)
    assert result.witness != u


def test_restrictions_of_smaller_points_lie_in_vsupp_hulls(rng):
    pool = [p for _, p in enumerate_vertices(4, 2)]
    for _ in range(10):
        chosen = rng.sample(pool, 3)
        p = mix([(Fraction(1, 3), x) for x in chosen])
        below = [x for x in pool if preceq(x, p)]
        weights = _random_weights(rng, len(below))
        q = mix(list(zip(weights, below)))
        assert preceq(q, p)
        for edges in (["e1"], ["e2", "e3", "e4"], ["e1", "e2"], ["e3", "e4"]):
            result = vsupp(p, restrict(p.space, edges))
            assert hull_membership(restrict_distribution(q, result.piece), result.vertices) is not None

        glued = glue_vertex_check(p, ["e1", "e2"], ["e3", "e4"])
        if not glued.is_vertex:
            assert preceq(glued.witness, p)
