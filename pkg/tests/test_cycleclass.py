import pytest

from simpol.errors import InvalidArgumentError
from simpol.modules.analysis import is_contextual, is_strongly_contextual, is_vertex
from simpol.modules.cycleclass import (
    CycleSequence,
    canonicalize,
    count_k,
    count_vertices,
    enumerate_sequences,
    enumerate_vertices,
    from_sequence,
    growth_ratio,
    is_canonical,
    random_sequence,
    recognize,
    rotate,
    staircase_sequence,
)
from simpol.modules.dist import is_valid
from simpol.modules.space import make_path


# ============= 计数 =============

@pytest.mark.parametrize("n, d, expected", [(4, 2, 24), (3, 2, 12), (2, 2, 6), (2, 3, 39)])
def test_count_vertices(n, d, expected):
    assert count_vertices(n, d) == expected


def test_count_split():
    assert (count_k(4, 2, 1), count_k(4, 2, 2)) == (16, 8)
    assert [count_k(2, 4, k) for k in (2, 3, 4)] == [72, 192, 144]
    assert count_vertices(2, 4, contextual_only=True) == 408
    assert count_k(3, 2, 3) == 0


def test_count_rejects_small_scenarios():
    with pytest.raises(InvalidArgumentError):
        count_vertices(1, 3)
    with pytest.raises(InvalidArgumentError):
        count_k(3, 0, 1)


@pytest.mark.parametrize("n", range(2, 7))
@pytest.mark.parametrize("d", range(1, 7))
def test_deterministic_count_is_d_to_the_n(n, d):
    assert count_k(n, d, 1) == d ** n


def test_single_outcome_has_one_vertex():
    assert count_vertices(5, 1) == 1
    assert count_vertices(5, 1, contextual_only=True) == 0


@pytest.mark.parametrize("n, d", [(2, 2), (3, 2), (4, 2), (2, 3), (3, 3)])
def test_enumeration_matches_formula(n, d):
    found = list(enumerate_vertices(n, d))
    assert len(found) == count_vertices(n, d)
    assert len({p.key() for _, p in found}) == len(found)
    assert all(is_canonical(seq) for seq, _ in found)


@pytest.mark.slow
@pytest.mark.parametrize("n, d", [(n, d) for n in (2, 3, 4) for d in (2, 3, 4)] + [(5, 2), (5, 3)])
def test_sequence_enumeration_matches_formula_grid(n, d):
    for k in range(1, d + 1):
        sequences = list(enumerate_sequences(n, d, k))
        assert len(sequences) == count_k(n, d, k)
        assert len({s.flat() for s in sequences}) == len(sequences)


def test_growth_ratio():
    ratio = growth_ratio(3, 40)
    assert 0.8 <= ratio <= 1.2


# ============= 序列 =============

def test_sequence_validation():
    with pytest.raises(InvalidArgumentError):
        CycleSequence(2, 3, ((0, 1), (0, 2)))
    with pytest.raises(InvalidArgumentError):
        CycleSequence(2, 2, ((0, 1), (1, 0), (0, 1)))
    with pytest.raises(InvalidArgumentError):
        CycleSequence(2, 2, ((0, 2),))
    with pytest.raises(InvalidArgumentError):
        CycleSequence(2, 2, ((0, 1, 1),))


def test_canonical_form():
    seq = CycleSequence(2, 2, ((1, 0), (0, 1)))
    assert not is_canonical(seq)
    assert canonicalize(seq).rows == ((0, 1), (1, 0))
    assert from_sequence(rotate(seq, 1)) == from_sequence(seq)


def test_fixture_sequence(cycle_z4):
    seq = CycleSequence(2, 4, ((0, 1), (3, 2), (2, 3)))
    p = from_sequence(seq)
    assert p == cycle_z4
    assert is_valid(p)
    assert recognize(p) == (3, seq)


def test_staircase_sequence():
    seq = staircase_sequence(4, 2)
    assert seq.rows == ((0, 0, 0, 0), (1, 1, 1, 1))
    p = from_sequence(seq)
    assert p.cell("e4", 0, 1) == p.cell("e4", 1, 0) == p.cell("e1", 1, 1)


def test_recognize_rejects_non_cycle_distributions(uniform_c3, pr_box):
    assert recognize(uniform_c3) is None
    k, seq = recognize(pr_box)
    assert k == 2
    assert seq.rows == ((0, 1, 1, 1), (1, 0, 0, 0))


def test_from_sequence_needs_a_directed_cycle():
    seq = CycleSequence(2, 2, ((0, 1), (1, 0)))
    with pytest.raises(InvalidArgumentError):
        from_sequence(seq, space=make_path(2))


def test_enumerate_sequences_sorted():
    sequences = list(enumerate_sequences(2, 3, 2))
    assert [s.flat() for s in sequences] == sorted(s.flat() for s in sequences)
    assert sequences[0].rows == ((0, 0), (1, 1))


def test_enumerate_sequences_streams():
    first = next(enumerate_sequences(8, 8, 8))
    assert first == staircase_sequence(8, 8, 8)


def test_bundle_arities_bound_each_column():
    sequences = list(enumerate_sequences(2, 3, 2, arities=[2, 3]))
    assert len(sequences) == 6
    assert all(s.rows[j][0] < 2 for s in sequences for j in range(2))


def _random_order_property(rng, samples):
    for _ in range(samples):
        d = rng.randint(2, 6)
        k = rng.randint(2, d)
        n = rng.randint(2, 8)
        seq = random_sequence(n, d, k, rng)
        p = from_sequence(seq)
        assert is_vertex(p)
        assert is_strongly_contextual(p)
        assert is_contextual(p)
        assert recognize(p) == (k, seq)


def test_random_k_order_distributions(rng):
    _random_order_property(rng, 40)


@pytest.mark.slow
def test_random_k_order_distributions_full(rng):
    _random_order_property(rng, 1000)
