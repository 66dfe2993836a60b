from fractions import Fraction

import pytest

from simpol.errors import PreconditionError, ResourceLimitError
from simpol.modules.analysis import (
    ClassificationTag,
    cell_system,
    classify,
    find_sections,
    is_contextual,
    is_deterministic,
    is_strongly_contextual,
    is_vertex,
    noncontextual_decomposition,
    vertex_test,
)
from simpol.modules.cycleclass import enumerate_vertices
from simpol.modules.dist import (
    OutcomeProfile,
    SimplicialDistribution,
    deterministic,
    is_valid,
    mix,
    preceq,
)
from simpol.modules.space import make_cycle


def _zero_section(p):
    return deterministic(p.space, p.profile, {v: 0 for v in p.space.vertices})


def test_pr_box_has_no_sections(pr_box):
    assert find_sections(pr_box) == []
    assert is_strongly_contextual(pr_box)
    assert is_contextual(pr_box)
    assert is_vertex(pr_box)


def test_uniform_is_a_noncontextual_interior_point(uniform_c3):
    sections = find_sections(uniform_c3)
    assert len(sections) == 8
    assert sections[0].as_dict() == {"v1": 0, "v2": 0, "v3": 0}

    weights = noncontextual_decomposition(uniform_c3)
    assert weights is not None
    assert sum(w for w, _ in weights) == 1
    rebuilt = mix([(w, deterministic(uniform_c3.space, uniform_c3.profile, s)) for w, s in weights])
    assert rebuilt == uniform_c3
    assert not is_contextual(uniform_c3)


def test_non_vertex_comes_with_a_perturbation(uniform_c3):
    test = vertex_test(uniform_c3)
    assert not test.is_vertex
    assert test.dimension > 0
    assert test.epsilon > 0
    plus, minus = test.perturbations(uniform_c3)
    assert is_valid(plus) and is_valid(minus)
    assert plus != minus
    assert mix([("1/2", plus), ("1/2", minus)]) == uniform_c3


def test_vertex_test_rejects_signaling_input():
    space = make_cycle(2)
    p = SimplicialDistribution(space, OutcomeProfile.uniform(space, 2),
                               {"e1": [[1, 0], [0, 0]], "e2": [[0, 0], [0, 1]]})
    with pytest.raises(PreconditionError):
        vertex_test(p)


def test_section_limit(uniform_c3):
    with pytest.raises(ResourceLimitError) as info:
        find_sections(uniform_c3, limit=3)
    assert info.value.limit == 3


def test_section_cap_from_environment(uniform_c3, monkeypatch):
    monkeypatch.setenv("SIMPOL_SECTION_CAP", "2")
    with pytest.raises(ResourceLimitError):
        is_contextual(uniform_c3)


def test_cell_system_on_support(pr_box):
    system = cell_system(pr_box.space, pr_box.profile, [cell for cell, v in pr_box.cells() if v])
    point = {cell: pr_box.cell(*cell) for cell in system.variables}
    assert system.satisfied_by(point)


# ============= 分类 =============

def test_classify_deterministic(pr_box):
    delta = _zero_section(pr_box)
    assert is_deterministic(delta)
    result = classify(delta)
    assert result.tag is ClassificationTag.DETERMINISTIC
    assert result.tag is ClassificationTag.NONCONTEXTUAL_VERTEX
    assert result.weights == [(1, result.sections[0])]


def test_classify_pr_box(pr_box):
    result = classify(pr_box)
    assert result.tag == ClassificationTag.CONTEXTUAL_VERTEX
    assert result.strongly_contextual
    assert result.tag.is_vertex and result.tag.is_contextual


def test_classify_uniform(uniform_c3):
    assert classify(uniform_c3).tag == ClassificationTag.NONCONTEXTUAL_NONVERTEX


def test_contextual_non_vertex(pr_box):
    """PR 盒与全 0 截面的等权混合：有截面但不可分解"""
    m = mix([("1/2", pr_box), ("1/2", _zero_section(pr_box))])
    result = classify(m)
    assert result.tag == ClassificationTag.CONTEXTUAL_NONVERTEX
    assert not result.strongly_contextual
    assert len(result.sections) == 1
    assert not is_deterministic(m)


@pytest.mark.parametrize("n, d", [(2, 2), (3, 2), (2, 3), (3, 3)])
def test_hierarchy_on_cycle_vertices(n, d):
    for seq, p in enumerate_vertices(n, d):
        result = classify(p)
        if seq.k == 1:
            assert result.tag == ClassificationTag.DETERMINISTIC
        else:
            assert result.tag == ClassificationTag.CONTEXTUAL_VERTEX
            assert is_strongly_contextual(p) and is_contextual(p)


def _parity_box(anti_edges):
    space = make_cycle(4)
    half = Fraction(1, 2)
    diagonal, antidiagonal = [[half, 0], [0, half]], [[0, half], [half, 0]]
    matrices = {e: antidiagonal if e in anti_edges else diagonal for e in space.edge_ids}
    return SimplicialDistribution(space, OutcomeProfile.uniform(space, 2), matrices)


def test_mixture_of_two_pr_boxes_is_noncontextual():
    """σ₁ 与 σ₂ 各自取反对角的两个 PR 盒：等权混合后 e1、e2 变为均匀，可由截面分解"""
    first, second = _parity_box({"e1"}), _parity_box({"e2"})
    assert classify(first).tag == classify(second).tag == ClassificationTag.CONTEXTUAL_VERTEX
    m = mix([("1/2", first), ("1/2", second)])
    assert m.matrix("e1") == ((Fraction(1, 4),) * 2,) * 2

    result = classify(m)
    assert result.tag == ClassificationTag.NONCONTEXTUAL_NONVERTEX
    assert len(result.sections) == 4
    weights = noncontextual_decomposition(m)
    assert mix([(w, deterministic(m.space, m.profile, s)) for w, s in weights]) == m


def test_all_pairs_of_pr_boxes_mix_to_interior_points():
    boxes = [p for seq, p in enumerate_vertices(4, 2, contextual_only=True)]
    assert len(boxes) == 8
    for i, a in enumerate(boxes):
        for b in boxes[i + 1:]:
            m = mix([("1/2", a), ("1/2", b)])
            assert classify(m).tag == ClassificationTag.NONCONTEXTUAL_NONVERTEX


def test_mixtures_of_vertices_are_not_vertices(rng):
    vertices = [p for _, p in enumerate_vertices(3, 2)]
    for _ in range(20):
        a, b = rng.sample(vertices, 2)
        m = mix([("1/2", a), ("1/2", b)])
        test = vertex_test(m)
        assert not test.is_vertex
        assert preceq(a, m) and preceq(b, m)
        plus, minus = test.perturbations(m)
        assert is_valid(plus) and is_valid(minus) and plus != m
        assert classify(m).tag in (ClassificationTag.NONCONTEXTUAL_NONVERTEX, ClassificationTag.CONTEXTUAL_NONVERTEX)


def test_epsilon_is_exact(uniform_c3):
    assert isinstance(vertex_test(uniform_c3).epsilon, Fraction)
