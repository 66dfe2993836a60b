import itertools
from fractions import Fraction

import pytest

from simpol.errors import InvalidArgumentError
from simpol.modules.analysis import ClassificationTag, classify
from simpol.modules.cycleclass import from_sequence, staircase_sequence
from simpol.modules.dist import is_valid
from simpol.modules.homotopy import (
    EdgeLabeling,
    FaceKind,
    certify_face_vertex,
    face,
    find_lift,
    is_null_homotopic,
    is_null_homotopic_cycle,
    kappa_pushforward,
    labeling_of,
    staircase_labeling,
)
from simpol.modules.space import make_cycle, make_path


@pytest.mark.parametrize("n, d", [(n, d) for n in (2, 3, 4) for d in (2, 3, 4)])
def test_null_homotopy_agrees_with_lift(n, d):
    """圈上标号和为 0 当且仅当存在提升，且提升满足每条边的差分"""
    space = make_cycle(n)
    for labels in itertools.product(range(d), repeat=n):
        phi = EdgeLabeling.on_cycle(space, d, labels)
        lift = find_lift(phi, space)
        assert is_null_homotopic_cycle(phi, space) == (lift is not None)
        if lift is not None:
            assert all((lift[e.tgt] - lift[e.src]) % d == phi[e.id] for e in space.edges)


def test_lift_on_two_glued_cycles(trichotomic):
    space = trichotomic.space
    good = EdgeLabeling.of(3, {"s1": 1, "s2": 2, "s3": 0, "s4": 0})
    bad = EdgeLabeling.of(3, {"s1": 1, "s2": 2, "s3": 0, "s4": 1})
    assert is_null_homotopic(good, space)
    assert find_lift(good, space)["v"] == 0
    assert not is_null_homotopic(bad, space)
    assert find_lift(bad, space) is None


def test_forest_labelings_always_lift():
    space = make_path(3)
    phi = EdgeLabeling.of(5, {"e1": 4, "e2": 3, "e3": 1})
    assert find_lift(phi, space) == {"v1": 0, "v2": 4, "v3": 2, "v4": 3}


def test_labeling_arguments():
    space = make_cycle(4)
    phi = EdgeLabeling.on_cycle(space, 2, [3, 0, 0, 0])
    assert phi["e1"] == 1
    with pytest.raises(InvalidArgumentError):
        EdgeLabeling.on_cycle(space, 2, [0, 1])
    with pytest.raises(InvalidArgumentError):
        is_null_homotopic_cycle(EdgeLabeling.of(2, {"e1": 0}), make_path(1))
    with pytest.raises(InvalidArgumentError):
        face(EdgeLabeling.of(2, {"e1": 1}), space)


def test_kappa_pushforward(pr_box, uniform_c3):
    masses = kappa_pushforward(pr_box)
    assert masses["e1"] == (0, 1)
    assert masses["e2"] == (1, 0)
    assert labeling_of(pr_box).labels == (("e1", 1), ("e2", 0), ("e3", 0), ("e4", 0))
    assert labeling_of(uniform_c3) is None


# ============= Face =============

@pytest.mark.parametrize("n, k", [(n, k) for n in (2, 3, 4, 5) for k in (2, 3, 4)])
def test_staircase_face_is_the_staircase_distribution(n, k):
    space, phi = staircase_labeling(n, k)
    result = face(phi, space)
    assert result.kind == FaceKind.SINGLETON
    assert result.dimension == 0
    assert result.point == from_sequence(staircase_sequence(n, k))


def test_pr_box_face(pr_box):
    space = make_cycle(4)
    phi = EdgeLabeling.on_cycle(space, 2, [1, 0, 0, 0])
    assert not is_null_homotopic(phi, space)
    assert face(phi, space).point == pr_box
    certificate = certify_face_vertex(phi, space)
    assert certificate.distribution == pr_box
    assert certificate.labeling == phi
    assert certificate.tag == ClassificationTag.CONTEXTUAL_VERTEX == classify(pr_box).tag


def test_null_homotopic_face_is_not_certified():
    space = make_cycle(4)
    phi = EdgeLabeling.on_cycle(space, 2, [0, 0, 0, 0])
    result = face(phi, space)
    assert result.kind == FaceKind.NONEMPTY_DIM
    assert result.dimension == 1
    assert is_valid(result.point)
    assert labeling_of(result.point) == phi
    assert certify_face_vertex(phi, space) is None


def test_face_with_shift_invariant_marginal():
    """C^(2) 上 Z_4 的 (1, 1)：边缘分布只需在平移 2 下不变，面为一维"""
    space = make_cycle(2)
    phi = EdgeLabeling.on_cycle(space, 4, [1, 1])
    result = face(phi, space)
    assert result.kind == FaceKind.NONEMPTY_DIM
    assert result.dimension == 1
    assert sum(result.point.matrix("e1")[0]) > 0
    assert certify_face_vertex(phi, space) is None


def test_face_point_is_exact():
    space, phi = staircase_labeling(3, 3)
    point = face(phi, space).point
    assert point.cell("e3", 2, 0) == Fraction(1, 3)
