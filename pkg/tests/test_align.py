import random
from collections import Counter

import pytest

from cushlepor import align

from naive_reference import naive_align


def test_identity_alignment():
    result = align(["a", "b", "c"], ["a", "b", "c"], 2)
    assert result.pairs == ((1, 1), (2, 2), (3, 3))
    assert result.aligned_num == 3


def test_disjoint_vocabularies():
    result = align(["a", "b"], ["c", "d"], 2)
    assert result.pairs == ()
    assert result.aligned_num == 0


def test_consumed_reference_blocks_rematch():
    # hyp position 3 stays unmatched because ref "a" is already consumed
    result = align(["a", "b", "a"], ["b", "a", "x"], 1)
    assert result.pairs == ((1, 2), (2, 1))


def test_context_beats_distance():
    # hyp "a" at position 2 prefers the distant ref "a" whose neighbors match
    result = align(["x", "a", "y"], ["a", "z", "x", "a", "y"], 1)
    assert result.pairs == ((1, 3), (2, 4), (3, 5))


def test_tie_breaks_on_distance_then_position():
    assert align(["a"], ["a", "a"], 1).pairs == ((1, 1),)
    # equal context, equal distance: smallest ref position wins
    assert align(["x", "a"], ["a", "y", "a"], 1).pairs == ((2, 1),)


def test_window_must_be_positive():
    with pytest.raises(ValueError):
        align(["a"], ["a"], 0)


def _random_case(rng, vocab_size=5, max_len=10):
    vocab = [chr(ord("a") + i) for i in range(vocab_size)]
    hyp = [rng.choice(vocab) for _ in range(rng.randint(1, max_len))]
    ref = [rng.choice(vocab) for _ in range(rng.randint(1, max_len))]
    return hyp, ref


def test_alignment_invariants_on_random_cases():
    rng = random.Random(42)
    for _ in range(300):
        hyp, ref = _random_case(rng)
        n = rng.randint(1, 4)
        result = align(hyp, ref, n)
        hyp_positions = [i for i, _ in result.pairs]
        ref_positions = [j for _, j in result.pairs]
        assert len(set(hyp_positions)) == len(hyp_positions)
        assert len(set(ref_positions)) == len(ref_positions)
        assert result.aligned_num <= min(len(hyp), len(ref))
        for i, j in result.pairs:
            assert hyp[i - 1] == ref[j - 1]
        # every hyp token with an available identical ref token is matched
        matched_per_token = Counter(hyp[i - 1] for i, _ in result.pairs)
        hyp_counts = Counter(hyp)
        ref_counts = Counter(ref)
        for token in hyp_counts:
            assert matched_per_token[token] == min(hyp_counts[token], ref_counts[token])


def test_matches_naive_reference_on_random_cases():
    rng = random.Random(7)
    for _ in range(500):
        hyp, ref = _random_case(rng, vocab_size=3, max_len=8)
        n = rng.randint(1, 3)
        assert list(align(hyp, ref, n).pairs) == naive_align(hyp, ref, n)


def test_deterministic():
    hyp, ref = ["a", "b", "a", "c"], ["c", "a", "b", "a"]
    assert align(hyp, ref, 2) == align(hyp, ref, 2)
