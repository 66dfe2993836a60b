"""
端到端核对：内置示例、计数公式、层级一致性与非顶点检测
"""
from fractions import Fraction

import pytest

from simpol.fixtures import FIXTURES, load_fixture, verify_all, verify_counting_formula, verify_cycle_example
from simpol.modules.analysis import ClassificationTag, classify, is_contextual, is_strongly_contextual, vertex_test
from simpol.modules.cycleclass import enumerate_vertices
from simpol.modules.dist import is_valid, mix, preceq
from simpol.modules.glue import glue_vertex_check


def test_all_examples_pass():
    reports = verify_all()
    failed = [(r.name, c.claim, c.detail) for r in reports for c in r.checks if not c.passed]
    assert failed == []
    assert len(reports) == 5


def test_cycle_example_and_counts():
    assert verify_cycle_example().passed
    report = verify_counting_formula()
    assert report.passed
    assert len(report.checks) == 5


def test_cycle_example_rejects_other_distribution():
    assert not verify_cycle_example(load_fixture("uniform_c3_d2")).passed


def _corpus():
    for name in FIXTURES:
        yield load_fixture(name)
    for n, d in [(2, 2), (3, 2), (2, 3)]:
        for _, p in enumerate_vertices(n, d):
            yield p


def test_hierarchy_over_corpus():
    for p in _corpus():
        if not is_valid(p):
            continue
        tag = classify(p).tag
        strong = is_strongly_contextual(p)
        if tag == ClassificationTag.CONTEXTUAL_VERTEX:
            assert strong
        if strong:
            assert is_contextual(p)


def _mixture_detection(rng, samples):
    pools = {
        (n, d): [p for _, p in enumerate_vertices(n, d)]
        for n, d in [(3, 2), (4, 2), (2, 3)]
    }
    keys = sorted(pools)
    for _ in range(samples):
        n, d = rng.choice(keys)
        a, b = rng.sample(pools[(n, d)], 2)
        m = mix([(Fraction(1, 2), a), (Fraction(1, 2), b)])

        test = vertex_test(m)
        assert not test.is_vertex
        plus, minus = test.perturbations(m)
        assert is_valid(plus) and is_valid(minus)
        assert mix([(Fraction(1, 2), plus), (Fraction(1, 2), minus)]) == m

        edges = list(m.space.edge_ids)
        result = glue_vertex_check(m, edges[:1], edges[1:])
        assert not result.is_vertex
        assert is_valid(result.witness) and preceq(result.witness, m) and result.witness != m


def test_mixtures_are_detected(rng):
    _mixture_detection(rng, 20)


@pytest.mark.slow
def test_mixtures_are_detected_full(rng):
    _mixture_detection(rng, 200)
