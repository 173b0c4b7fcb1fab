from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bullseye.sequences import (Constant, DisjointnessViolation, DivisibleBy,
                                Patched, PatchFamily, PatchInterval, Periodic,
                                RecursionBudgetExceeded, Rich, SingleOnes,
                                Sturmian, evaluate, materialize, rich_prefix,
                                rich_sequence, shortlex_word)


def brute_find(stream: bytes, word: bytes) -> int:
    """Independent linear-scan oracle for word occurrence."""
    for p in range(len(stream) - len(word) + 1):
        if stream[p:p + len(word)] == word:
            return p
    return -1


def test_constant_everywhere():
    assert evaluate(Constant(1), -7) == 1
    assert evaluate(Constant(0), 10 ** 12) == 0


def test_divisible_examples():
    assert evaluate(DivisibleBy(3), 6) == 1
    assert evaluate(DivisibleBy(3), 7) == 0
    assert evaluate(DivisibleBy(3), -9) == 1


def test_sturmian_half_prefix():
    # direct evaluation of the floor-difference formula:
    # floor((k+1)/2) - floor(k/2) = 0, 1, 0, 1, ... from k = 0
    seq = Sturmian(Fraction(1, 2))
    assert [evaluate(seq, k) for k in range(8)] == [0, 1, 0, 1, 0, 1, 0, 1]


def test_sturmian_negative_indices_defined():
    seq = Sturmian(Fraction(2, 5))
    window = [evaluate(seq, k) for k in range(-10, 11)]
    assert all(b in (0, 1) for b in window)


def test_sturmian_slope_range():
    with pytest.raises(ValueError):
        Sturmian(Fraction(3, 2))


def test_rich_first_entries():
    # shortlex concatenation 0|1|00|01|...
    assert list(materialize(rich_sequence(), 1, 7)) == [0, 1, 0, 0, 0, 1, 1]


def test_rich_negative_part_zero():
    seq = rich_sequence()
    assert all(evaluate(seq, k) == 0 for k in range(-20, 1))


def test_rich_word_occurrence_101():
    stream = rich_prefix(10 ** 5)
    assert brute_find(stream, bytes([1, 0, 1])) >= 0


def test_rich_word_11_occurs_at_least_twice():
    stream = rich_prefix(10 ** 4)
    first = brute_find(stream, bytes([1, 1]))
    assert first >= 0
    second = brute_find(stream[first + 1:], bytes([1, 1]))
    assert second >= 0


def test_rich_completeness_up_to_len8():
    # every word of length <= 8 inside the first 2**12 positions
    stream = rich_prefix(1 << 12)
    for length in range(1, 9):
        for j in range(1 << length):
            word = bytes((j >> (length - 1 - t)) & 1 for t in range(length))
            assert stream.find(word) >= 0, word


def test_shortlex_word_enumeration():
    words = [shortlex_word(j) for j in range(6)]
    assert words == [(0,), (1,), (0, 0), (0, 1), (1, 0), (1, 1)]


def test_single_ones():
    seq = SingleOnes(frozenset({-3, 5}))
    assert evaluate(seq, -3) == 1
    assert evaluate(seq, 5) == 1
    assert evaluate(seq, 0) == 0


def test_periodic_offset():
    seq = Periodic((1, 0, 0), offset=1)
    assert [evaluate(seq, k) for k in range(1, 7)] == [1, 0, 0, 1, 0, 0]


def test_periodic_rejects_empty():
    with pytest.raises(ValueError):
        Periodic(())


def test_patch_family_rejects_overlap():
    src = Constant(1)
    with pytest.raises(DisjointnessViolation):
        PatchFamily((PatchInterval(10, 3, src), PatchInterval(12, 3, src)))


def test_patch_family_rejects_unsorted():
    src = Constant(1)
    with pytest.raises(DisjointnessViolation):
        PatchFamily((PatchInterval(30, 1, src), PatchInterval(10, 1, src)))


def test_patched_delegation():
    patched = Patched(
        base=Constant(0),
        patches=PatchFamily((PatchInterval(100, 2, DivisibleBy(2), source_offset=0),)))
    # inside [98, 102] index k maps to k - 100
    assert [evaluate(patched, k) for k in range(98, 103)] == [1, 0, 1, 0, 1]
    assert evaluate(patched, 97) == 0
    assert evaluate(patched, 103) == 0


def test_budget_exceeded_on_non_shrinking_family():
    from bullseye.sequences import FamilyMember

    class LoopingFamily:
        """Malformed: delegation maps an index to itself forever."""

        def delegation_budget(self):
            return 8

        def member_bit(self, i, k, budget):
            while True:
                if k == 5:
                    if budget <= 0:
                        raise RecursionBudgetExceeded("delegation does not shrink")
                    budget -= 1
                    continue
                return 0

    member = FamilyMember(LoopingFamily(), 0)
    with pytest.raises(RecursionBudgetExceeded):
        evaluate(member, 5)
    assert evaluate(member, 4) == 0


def test_patched_budget_grows_with_nesting():
    deep = Patched(base=Constant(0),
                   patches=PatchFamily((PatchInterval(0, 5, Constant(1)),)))
    for _ in range(4):
        deep = Patched(base=Constant(0),
                       patches=PatchFamily((PatchInterval(0, 5, deep, source_offset=0),)))
    assert deep.delegation_budget() == 5
    assert evaluate(deep, 3) == 1


def test_structural_equality_implies_pointwise():
    a = Sturmian(Fraction(2, 7))
    b = Sturmian(Fraction(2, 7))
    assert a == b
    assert all(evaluate(a, k) == evaluate(b, k) for k in range(-50, 51))


def test_determinism():
    seq = Patched(base=Sturmian(Fraction(1, 3)),
                  patches=PatchFamily((PatchInterval(40, 4, Rich(), 1),)))
    first = [evaluate(seq, k) for k in range(-60, 61)]
    second = [evaluate(seq, k) for k in range(-60, 61)]
    assert first == second


@settings(max_examples=60)
@given(st.integers(min_value=1, max_value=60), st.integers(min_value=-10 ** 6, max_value=10 ** 6))
def test_divisible_matches_definition(d, k):
    assert evaluate(DivisibleBy(d), k) == (1 if k % d == 0 else 0)


@settings(max_examples=60)
@given(st.fractions(min_value=0, max_value=1, max_denominator=50),
       st.integers(min_value=-10 ** 4, max_value=10 ** 4))
def test_sturmian_matches_floor_difference(t, k):
    expected = ((k + 1) * t.numerator) // t.denominator - (k * t.numerator) // t.denominator
    assert evaluate(Sturmian(t), k) == expected


@settings(max_examples=40)
@given(st.lists(st.sampled_from([0, 1]), min_size=1, max_size=8),
       st.integers(min_value=-100, max_value=100),
       st.integers(min_value=-1000, max_value=1000))
def test_periodic_matches_pattern_lookup(pattern, offset, k):
    seq = Periodic(tuple(pattern), offset)
    assert evaluate(seq, k) == pattern[(k - offset) % len(pattern)]
