"""Property tests over random contexts, circuits and vectors."""

import random
from functools import reduce

import numpy as np
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

import oracles
from conftest import encrypted
from pfca.context import (
    FormalContext,
    derive_extent,
    derive_intent,
    enumerate_tem,
    enumerate_tia,
    granular_concepts,
    stats,
)
from pfca.engine import (
    aggregate_subsets,
    alpha_compare,
    classify,
    enumerate_privacy_concepts,
    product_P,
    recover_concepts,
    sum_S,
    uniform_singleton_test,
)
from pfca.enums import Direction
from pfca.formats import format_cxt, format_plain, parse_cxt, parse_plain
from pfca.he import derive_params, make_backend
from pfca.parallel import parallel_enumerate

SETTINGS = settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@st.composite
def contexts(draw, max_m=8, max_n=8):
    m = draw(st.integers(2, max_m))
    n = draw(st.integers(2, max_n))
    rows = draw(st.lists(st.lists(st.integers(0, 1), min_size=n, max_size=n), min_size=m, max_size=m))
    return FormalContext(rows)


def index_sets(size):
    return st.frozensets(st.integers(0, size - 1), max_size=size)


# --- derivation operators -------------------------------------------------------


@SETTINGS
@given(st.data())
def test_galois_connection_is_antitone_and_closes(data):
    ctx = data.draw(contexts())
    m, n = ctx.shape
    x1 = data.draw(index_sets(m))
    x2 = x1 | data.draw(index_sets(m))
    assert derive_intent(ctx, x2) <= derive_intent(ctx, x1)
    b1 = data.draw(index_sets(n))
    b2 = b1 | data.draw(index_sets(n))
    assert derive_extent(ctx, b2) <= derive_extent(ctx, b1)
    closed = derive_extent(ctx, derive_intent(ctx, x1))
    assert closed >= x1
    assert derive_intent(ctx, closed) == derive_intent(ctx, x1)


@SETTINGS
@given(st.data())
def test_bitset_derivation_matches_quantifier(data):
    ctx = data.draw(contexts(max_m=10, max_n=10))
    rows = ctx.incidence.tolist()
    x = data.draw(index_sets(ctx.object_count))
    assert derive_intent(ctx, x) == oracles.common_attributes(rows, x)


@SETTINGS
@given(contexts())
def test_enumerators_agree_with_granule_closure(ctx):
    tem = {(c.extent, c.intent) for c in enumerate_tem(ctx)}
    assert {(c.extent, c.intent) for c in enumerate_tia(ctx)} == tem
    extents = {frozenset(range(ctx.object_count))} | {c.extent for c in granular_concepts(ctx)}
    while True:
        grown = extents | {a & b for a in extents for b in extents}
        if grown == extents:
            break
        extents = grown
    assert extents == {e for e, _ in tem}


@SETTINGS
@given(contexts(max_m=12, max_n=12))
def test_density_counts_ones(ctx):
    s = stats(ctx)
    m, n = ctx.shape
    assert s.density * m * n == s.ones_count
    assert (s.ones_count, m * n) == oracles.density(ctx.incidence.tolist())


@SETTINGS
@given(contexts(max_m=12, max_n=12))
def test_file_formats_round_trip(ctx):
    assert parse_plain(format_plain(ctx)) == ctx
    assert parse_cxt(format_cxt(ctx)) == ctx


# --- homomorphic backends ---------------------------------------------------------


@st.composite
def circuits(draw):
    """Factor lists of a sum of products, inputs in [0, 11)."""
    k = draw(st.integers(1, 8))
    terms_count = draw(st.integers(1, 10))
    return [draw(st.lists(st.integers(0, 10), min_size=1, max_size=k)) for _ in range(terms_count)]


@settings(max_examples=250, deadline=None)
@given(circuits(), st.integers(0, 2**32))
def test_random_circuits_decrypt_correctly_on_both_backends(terms, seed):
    params = derive_params(8, 10, "f")  # t = 11, depth 8, 10 terms
    t = params.plaintext_modulus
    expected = sum(reduce(lambda a, b: a * b, factors) for factors in terms) % t
    results = []
    for name in ("oracle", "she"):
        he = make_backend(name, params)
        key = he.keygen(seed)
        rng = random.Random(seed)
        total = None
        for factors in terms:
            prod = reduce(he.hom_mul, [he.encrypt(key, f, rng) for f in factors])
            total = prod if total is None else he.hom_add(total, prod)
        results.append(he.decrypt(key, total))
    assert results == [expected, expected]


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10), st.integers(0, 10), st.integers(0, 2**32))
def test_zero_product_iff_zero_factor(a, b, seed):
    he = make_backend("she", derive_params(10, 10, "f"))
    key = he.keygen(seed)
    rng = random.Random(seed)
    product = he.decrypt(key, he.hom_mul(he.encrypt(key, a, rng), he.encrypt(key, b, rng)))
    assert (product == 0) == (a == 0 or b == 0)


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_alpha_is_containment(data):
    length = data.draw(st.integers(1, 9))
    vec = st.lists(st.integers(0, 1), min_size=length, max_size=length)
    u, v = data.draw(vec), data.draw(vec)
    ec, dec = encrypted(FormalContext(np.eye(10, dtype=np.uint8)), data.draw(st.sampled_from(["oracle", "she"])))
    he, key, rng = ec.backend, dec._key, random.Random(0)
    cu, cv = he.encrypt_vector(key, u, rng), he.encrypt_vector(key, v, rng)
    assert alpha_compare(cu, cv, he, dec, rng) == oracles.contains_support(u, v)


# --- encrypted pipeline ------------------------------------------------------------


@SETTINGS
@given(st.data())
def test_bridging_identity_and_monotonicity(data):
    ctx = data.draw(contexts(max_m=6, max_n=6))
    rows = ctx.incidence.tolist()
    direction = data.draw(st.sampled_from(["f", "g"]))
    ec, dec = encrypted(ctx, "oracle", direction)
    table, _, _ = aggregate_subsets(ec.vectors(Direction.parse(direction)), dec)
    count = oracles.f_count if direction == "f" else oracles.g_count
    for mask, value in table.items():
        members = frozenset(i for i in range(mask.bit_length()) if mask >> i & 1)
        assert value == count(rows, members)
        for sub in table:
            if sub & mask == sub:
                assert table[sub] >= value


@SETTINGS
@given(contexts(max_m=6, max_n=6))
def test_strict_decrease_rule_characterizes_closed_sets(ctx):
    rows = ctx.incidence.tolist()
    ec, dec = encrypted(ctx, "oracle", "f")
    table, _, _ = aggregate_subsets(ec.rows, dec)
    m = ctx.object_count
    found = classify(table, table, m, Direction.OBJECT, uniform_singleton_test(table, m))
    expected = {a for a, b in oracles.concepts(rows) if a and b}
    assert {pc.extent for pc in found} == expected


@SETTINGS
@given(st.data())
def test_product_is_order_invariant_and_idempotent(data):
    ctx = data.draw(contexts(max_m=6, max_n=6))
    ec, dec = encrypted(ctx, data.draw(st.sampled_from(["oracle", "she"])))
    order = data.draw(st.permutations(range(ctx.object_count)))
    forward = dec.decrypt(sum_S(product_P([ec.rows[i] for i in range(ctx.object_count)])))
    assert dec.decrypt(sum_S(product_P([ec.rows[i] for i in order]))) == forward
    v = ec.rows[order[0]]
    doubled = product_P([v, v])
    assert [dec.decrypt(c) for c in doubled.elements] == list(ctx.incidence[order[0]])


@SETTINGS
@given(contexts(max_m=6, max_n=6), st.sampled_from(["alpha", "uniform"]))
def test_both_algorithms_recover_the_same_lattice(ctx, mode):
    recovered = []
    for direction in ("f", "g"):
        ec, dec = encrypted(ctx, "oracle", direction)
        pcs = enumerate_privacy_concepts(ec, direction, dec, singleton_mode=mode)
        recovered.append(recover_concepts(pcs, ctx))
        assert dec.transcript.violations() == []
    assert recovered[0] == recovered[1] == enumerate_tem(ctx)


@settings(max_examples=15, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(contexts(max_m=5, max_n=5), st.sampled_from(["f", "g"]))
def test_backends_agree(ctx, direction):
    outputs = []
    for name in ("oracle", "she"):
        ec, dec = encrypted(ctx, name, direction)
        outputs.append(enumerate_privacy_concepts(ec, direction, dec))
    assert outputs[0] == outputs[1]


@SETTINGS
@given(contexts(max_m=7, max_n=7), st.sampled_from([1, 2, 3]), st.booleans())
def test_parallel_equals_sequential(ctx, workers, prune):
    for direction in ("f", "g"):
        ec, dec = encrypted(ctx, "oracle", direction)
        sequential = enumerate_privacy_concepts(ec, direction, dec)
        assert parallel_enumerate(ec, direction, workers, prune, dec)[0] == sequential
