import random

import pytest

from pfca.enums import Provenance
from pfca.errors import (
    EmptyInput,
    InvalidParameter,
    LengthMismatch,
    NoiseOverflow,
    ParamsInfeasible,
    ParamsMismatch,
    PlaintextOutOfRange,
)
from pfca.he import CipherVector, HEParams, OracleBackend, SHEBackend, derive_params, make_backend

BACKENDS = ["oracle", "she"]


def setup(name, m=4, n=5, direction="f", seed=0):
    he = make_backend(name, derive_params(m, n, direction))
    return he, he.keygen(seed), random.Random(seed)


def test_derived_params_for_sample():
    p = derive_params(4, 5, "f")
    assert (p.plaintext_modulus, p.max_mul_depth, p.max_sum_terms) == (7, 4, 5)
    assert p.public_bits > 2 * p.secret_bits
    p.validate()
    assert derive_params(4, 5, "g").max_mul_depth == 5


def test_noise_budget_covers_circuit():
    for m, n, d in [(4, 5, "f"), (50, 12, "g"), (2000, 12, "g"), (10, 10, "f")]:
        p = derive_params(m, n, d)
        assert p.circuit_noise() < p.noise_ceiling
        # minimality: one bit less would not do
        assert p.circuit_noise() >= 1 << (p.secret_bits - 3)


def test_params_infeasible():
    with pytest.raises(ParamsInfeasible):
        derive_params(2000, 12, "f")
    with pytest.raises(InvalidParameter):
        derive_params(1, 5, "f")


def test_params_validate_rejects_composite_modulus():
    with pytest.raises(InvalidParameter):
        HEParams(8, 8, 64, 200, 2, 2).validate()


@pytest.mark.parametrize("name", BACKENDS)
def test_scalar_homomorphism(name):
    he, key, rng = setup(name)
    t = he.t
    for _ in range(200):
        a, b = rng.randrange(t), rng.randrange(t)
        ca, cb = he.encrypt(key, a, rng), he.encrypt(key, b, rng)
        assert he.decrypt(key, he.hom_add(ca, cb)) == (a + b) % t
        assert he.decrypt(key, he.hom_sub(ca, cb)) == (a - b) % t
        assert he.decrypt(key, he.hom_mul(ca, cb)) == (a * b) % t


@pytest.mark.parametrize("name", BACKENDS)
def test_vector_operations(name):
    he, key, rng = setup(name, 9, 9)
    u = [rng.randrange(2) for _ in range(9)]
    v = [rng.randrange(2) for _ in range(9)]
    cu, cv = he.encrypt_vector(key, u, rng), he.encrypt_vector(key, v, rng)
    prod = he.elementwise_mul(cu, cv)
    assert [he.decrypt(key, c) for c in prod.elements] == [a * b for a, b in zip(u, v)]
    assert he.decrypt(key, he.sum_elements(prod)) == sum(a * b for a, b in zip(u, v))
    assert prod.provenance is Provenance.DERIVED and prod.fan_in == 2


@pytest.mark.parametrize("name", BACKENDS)
def test_matrix_rows_and_columns_share_cells(name):
    he, key, rng = setup(name)
    matrix = [[1, 0, 0, 0, 0], [1, 1, 0, 0, 0], [0, 0, 1, 0, 1], [1, 1, 1, 1, 0]]
    rows, cols = he.encrypt_matrix(key, matrix, rng)
    for i in range(4):
        for j in range(5):
            assert rows[i][j].value == cols[j][i].value
            assert he.decrypt(key, rows[i][j]) == matrix[i][j]


@pytest.mark.parametrize("name", BACKENDS)
def test_encryption_is_randomized(name):
    he, key, rng = setup(name)
    values = {he.encrypt(key, 3, rng).value for _ in range(50)}
    assert len(values) == 50


@pytest.mark.parametrize("name", BACKENDS)
def test_range_and_type_checks(name):
    he, key, rng = setup(name)
    for bad in (-1, he.t, True, 1.0):
        with pytest.raises(PlaintextOutOfRange):
            he.encrypt(key, bad, rng)
    with pytest.raises(PlaintextOutOfRange):
        he.encrypt_vector(key, [0, he.t], rng)
    with pytest.raises(LengthMismatch):
        he.elementwise_mul(he.encrypt_vector(key, [1, 0], rng), he.encrypt_vector(key, [1], rng))
    one = he.encrypt_vector(key, [1], rng)
    with pytest.raises(EmptyInput):
        he.sum_elements(CipherVector(one.data[..., :0], Provenance.DERIVED, key.fingerprint, he))
    with pytest.raises(InvalidParameter):
        he.encrypt(key, 1, rng, Provenance.DERIVED)


@pytest.mark.parametrize("name", BACKENDS)
def test_keys_do_not_mix(name):
    he, key, rng = setup(name)
    other = he.keygen(99)
    a, b = he.encrypt(key, 1, rng), he.encrypt(other, 1, rng)
    with pytest.raises(ParamsMismatch):
        he.hom_add(a, b)
    with pytest.raises(ParamsMismatch):
        he.decrypt(other, a)


def test_blinding_provenance():
    he, key, rng = setup("she")
    r = he.encrypt_random_nonzero(key, rng)
    assert r.provenance is Provenance.BLINDED and r.fan_in == 0
    assert 0 < he.decrypt(key, r) < he.t


def test_noise_overflow_is_detected():
    params = HEParams(7, 8, 30, 124, 2, 2)
    he = SHEBackend(params)
    key = he.keygen(1)
    rng = random.Random(1)
    c = he.encrypt(key, 1, rng)
    acc = c
    with pytest.raises(NoiseOverflow):
        for _ in range(4):
            acc = he.hom_mul(acc, c)
    # without bookkeeping nothing is checked
    quiet = SHEBackend(params, debug=False)
    acc = c
    for _ in range(4):
        acc = quiet.hom_mul(acc, c)
    assert acc.noise_bound is None


def test_she_ciphertexts_grow_and_oracle_stays_compact():
    params = derive_params(6, 6, "f")
    for cls, grows in ((SHEBackend, True), (OracleBackend, False)):
        he = cls(params)
        key = he.keygen(0)
        rng = random.Random(0)
        c = he.encrypt(key, 1, rng)
        fresh = he.value_bits(c)
        acc = c
        for _ in range(5):
            acc = he.hom_mul(acc, he.encrypt(key, 1, rng))
        assert (he.value_bits(acc) > 3 * fresh) is grows
        assert he.value_bits(acc) <= (10 * fresh if grows else 64)


def test_secret_is_not_printed():
    he, key, _ = setup("she")
    assert str(key.secret) not in repr(key)


def test_unknown_backend():
    with pytest.raises(InvalidParameter):
        make_backend("paillier", derive_params(4, 5, "f"))
