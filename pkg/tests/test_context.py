from fractions import Fraction

import numpy as np
import pytest

import oracles
from pfca.context import (
    Concept,
    FormalContext,
    derive_extent,
    derive_intent,
    enumerate_tem,
    enumerate_tia,
    generate_context,
    granular_concepts,
    is_concept,
    iter_bits,
    mask_to_set,
    set_to_mask,
    stats,
    validate_context,
)
from pfca.errors import InvalidIndex, InvalidParameter, TooLarge

EXAMPLE_CONCEPTS = {
    (frozenset(), frozenset({0, 1, 2, 3, 4})),
    (frozenset({2}), frozenset({2, 4})),
    (frozenset({3}), frozenset({0, 1, 2, 3})),
    (frozenset({1, 3}), frozenset({0, 1})),
    (frozenset({2, 3}), frozenset({2})),
    (frozenset({0, 1, 3}), frozenset({0})),
    (frozenset({0, 1, 2, 3}), frozenset()),
}


def as_pairs(concepts):
    return {(c.extent, c.intent) for c in concepts}


def test_sample_brute_force_matches_worked_example():
    assert oracles.concepts(oracles.SAMPLE) == EXAMPLE_CONCEPTS


@pytest.mark.parametrize("enumerate_", [enumerate_tem, enumerate_tia])
def test_sample_enumerators(sample, enumerate_):
    assert as_pairs(enumerate_(sample)) == EXAMPLE_CONCEPTS


def test_derivations_on_sample(sample):
    assert derive_intent(sample, [0, 1]) == {0}
    assert derive_extent(sample, [0, 2]) == {3}
    assert derive_intent(sample, []) == set(range(5))
    assert derive_extent(sample, []) == set(range(4))
    assert is_concept(sample, [1, 3], [0, 1])
    assert not is_concept(sample, [1], [0, 1])


def test_derivations_match_definitions():
    ctx = generate_context(9, 7, 0.4, 3)
    rows = ctx.incidence.tolist()
    for objs in oracles.subsets(9):
        assert derive_intent(ctx, objs) == oracles.common_attributes(rows, objs)
    for attrs in oracles.subsets(7):
        assert derive_extent(ctx, attrs) == oracles.common_objects(rows, attrs)


@pytest.mark.parametrize("seed", range(12))
def test_enumerators_match_brute_force(seed):
    ctx = generate_context(7, 6, (0.2, 0.5, 0.8)[seed % 3], seed)
    expected = oracles.concepts(ctx.incidence.tolist())
    assert as_pairs(enumerate_tem(ctx)) == expected
    assert as_pairs(enumerate_tia(ctx)) == expected


def test_tem_walks_the_smaller_side():
    wide = generate_context(3, 40, 0.5, 1)
    assert as_pairs(enumerate_tem(wide, limit=3)) == as_pairs(enumerate_tia(wide))
    with pytest.raises(TooLarge):
        enumerate_tem(generate_context(30, 30, 0.5, 1), limit=20)


def test_enumeration_output_is_canonical(sample):
    concepts = enumerate_tem(sample)
    assert concepts == sorted(set(concepts), key=Concept.sort_key)


def test_granular_concepts_are_concepts(sample):
    for c in granular_concepts(sample):
        assert is_concept(sample, c.extent, c.intent)
    assert Concept(frozenset({3}), frozenset({0, 1, 2, 3})) in granular_concepts(sample)


def test_stats_on_sample(sample):
    s = stats(sample)
    assert (s.ones_count, s.zeros_count) == (9, 11)
    assert s.density == Fraction(9, 20)


def test_generator_is_deterministic_and_hits_density():
    a = generate_context(100, 100, 0.3, 5)
    assert a == generate_context(100, 100, 0.3, 5)
    assert a != generate_context(100, 100, 0.3, 6)
    assert abs(float(stats(a).density) - 0.3) <= 0.02


@pytest.mark.parametrize("args", [(1, 5, 0.5, 0), (5, 5, 0.0, 0), (5, 5, 1.5, 0), (5, 5, 0.5, -1)])
def test_generator_rejects_bad_arguments(args):
    with pytest.raises(InvalidParameter):
        generate_context(*args)


def test_validate_context_lints():
    ctx = FormalContext([[1, 1, 0], [0, 1, 0], [1, 1, 0]])
    assert validate_context(ctx) == ["full column a2", "empty column a3"]
    assert validate_context(FormalContext([[1, 1], [0, 0]])) == ["full row o1", "empty row o2"]


@pytest.mark.parametrize(
    "matrix", [[[1, 0]], [[1], [0]], [[0, 2], [1, 1]], [[[0]]], np.zeros((0, 3))]
)
def test_context_rejects_bad_incidence(matrix):
    with pytest.raises(InvalidParameter):
        FormalContext(matrix)


def test_context_is_immutable(sample):
    with pytest.raises(ValueError):
        sample.incidence[0, 0] = 0


def test_index_checks(sample):
    with pytest.raises(InvalidIndex):
        derive_intent(sample, [4])
    with pytest.raises(InvalidIndex):
        derive_extent(sample, [-1])
    with pytest.raises(InvalidIndex):
        set_to_mask([True], 3)


def test_bit_helpers_round_trip():
    for mask in (0, 1, 0b1011, (1 << 300) | 5, (1 << 4000) - 1):
        assert set_to_mask(mask_to_set(mask), 5000) == mask
        assert list(iter_bits(mask)) == sorted(mask_to_set(mask))
