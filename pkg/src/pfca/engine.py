"""Privacy-preserving concept construction over an encrypted context.

The flow has four steps:

1. the data owner encrypts every cell of the context (:func:`encrypt_context`);
2. an evaluator folds encrypted rows (or columns) into aggregates with
   elementwise products and sums, never seeing a plaintext;
3. the evaluator asks the data owner's :class:`Decryptor` to open only those
   aggregates and blinded comparison results, and picks out the subsets that
   pass the strict-decrease test (:func:`algorithm1_f_induced`,
   :func:`algorithm2_g_induced`);
4. the data owner maps each privacy-preserving concept back to a plaintext
   concept (:func:`recover_concepts`).

Every decryption goes through the :class:`Decryptor`, whose transcript can
be audited afterwards to show that no raw cell was ever opened.
"""

from __future__ import annotations

import random
import threading
from dataclasses import dataclass
from functools import reduce
from typing import Callable, Iterable, Sequence

from .context import (
    DEFAULT_ENUMERATION_LIMIT,
    Concept,
    FormalContext,
    canonical,
    iter_bits,
    mask_to_set,
    set_to_mask,
)
from .enums import Direction, Provenance, Purpose
from .errors import (
    EmptyInput,
    IntegrityError,
    InvalidParameter,
    LengthMismatch,
    TooLarge,
    TranscriptViolation,
)
from .he import Backend, Ciphertext, CipherVector, SecretKey


def stream(seed: int, *labels: object) -> random.Random:
    """Independent, reproducible randomness stream for one role/purpose."""
    return random.Random(":".join(map(str, (seed, *labels))))


# --- encrypted context ---------------------------------------------------------


@dataclass(frozen=True, eq=False)
class EncryptedContext:
    """Cellwise encryption of a formal context, addressable by row or column."""

    object_count: int
    attribute_count: int
    backend: Backend
    key_fingerprint: int
    rows: tuple[CipherVector, ...]
    columns: tuple[CipherVector, ...]

    @property
    def params(self):
        return self.backend.params

    def cell(self, i: int, j: int) -> Ciphertext:
        return self.rows[i][j]

    def side(self, direction: Direction) -> int:
        return self.object_count if direction is Direction.OBJECT else self.attribute_count

    def vectors(self, direction: Direction) -> tuple[CipherVector, ...]:
        return self.rows if direction is Direction.OBJECT else self.columns


def encrypt_context(ctx: FormalContext, backend: Backend, key: SecretKey, *, seed: int = 0) -> EncryptedContext:
    """Encrypt every incidence entry under ``key``; cells are tagged Entry."""
    rows, columns = backend.encrypt_matrix(key, ctx.incidence, stream(seed, "encrypt-context"))
    return EncryptedContext(ctx.object_count, ctx.attribute_count, backend, key.fingerprint, tuple(rows), tuple(columns))


# --- decryption service and transcript -----------------------------------------


@dataclass(frozen=True)
class TranscriptRecord:
    provenance: Provenance
    value: int
    purpose: Purpose
    fan_in: int


class DecryptionTranscript(Sequence[TranscriptRecord]):
    """What the decryption oracle revealed, in request order."""

    def __init__(self, records: Iterable[TranscriptRecord]):
        self._records = tuple(records)

    def __getitem__(self, i):
        return self._records[i]

    def __len__(self) -> int:
        return len(self._records)

    def violations(self) -> list[TranscriptRecord]:
        bad = []
        for rec in self._records:
            if rec.provenance is Provenance.ENTRY or rec.purpose is Purpose.CELL_RECOVERY:
                bad.append(rec)
            elif rec.purpose is Purpose.AGGREGATE and rec.fan_in < 2:
                bad.append(rec)
        return bad

    def audit(self) -> None:
        bad = self.violations()
        if bad:
            raise TranscriptViolation(f"{len(bad)} decryption(s) exposed raw or single-cell values: {bad[:3]}")

    def count_purpose(self, purpose: Purpose) -> int:
        return sum(1 for r in self._records if r.purpose is purpose)


class Decryptor:
    """The data owner's decryption service.

    Requests are serialized through one lock and logged. Decrypting an
    Entry ciphertext is not refused, but it is logged as a forbidden
    cell recovery so the audit fails.
    """

    def __init__(self, backend: Backend, key: SecretKey):
        self.backend = backend
        self._key = key
        self._lock = threading.Lock()
        self._records: list[TranscriptRecord] = []
        self._rng = stream(key.fingerprint, "blinding")

    def decrypt(self, c: Ciphertext, purpose: Purpose = Purpose.AGGREGATE) -> int:
        if c.provenance is Provenance.ENTRY:
            purpose = Purpose.CELL_RECOVERY
        with self._lock:
            value = self.backend.decrypt(self._key, c)
            self._records.append(TranscriptRecord(c.provenance, value, purpose, c.fan_in))
        return value

    def blinding_factor(self, rng: random.Random | None = None) -> Ciphertext:
        """Fresh encryption of a uniform nonzero r, drawn from ``rng`` if given."""
        with self._lock:
            return self.backend.encrypt_random_nonzero(self._key, rng or self._rng)

    @property
    def transcript(self) -> DecryptionTranscript:
        with self._lock:
            return DecryptionTranscript(self._records)


# --- homomorphic operators -----------------------------------------------------


def elementwise_product(u: CipherVector, v: CipherVector) -> CipherVector:
    return u.backend.elementwise_mul(u, v)


def product_P(vectors: Sequence[CipherVector]) -> CipherVector:
    """Left fold of elementwise products; a single vector is returned unchanged."""
    if not vectors:
        raise EmptyInput("product over zero vectors is undefined")
    return reduce(elementwise_product, vectors)


def sum_S(v: CipherVector) -> Ciphertext:
    return v.backend.sum_elements(v)


def _aggregate(vectors: Sequence[CipherVector]) -> Ciphertext:
    return sum_S(product_P(vectors))


def _index_mask(indices: Iterable[int], size: int, kind: str) -> int:
    mask = set_to_mask(indices, size, kind)
    if not mask:
        raise EmptyInput(f"empty {kind} set; use the boundary rules instead")
    return mask


def f_tilde(ec: EncryptedContext, objects: Iterable[int], decryptor: Decryptor) -> int:
    """Decrypted number of attributes shared by ``objects``."""
    mask = _index_mask(objects, ec.object_count, "object")
    return decryptor.decrypt(_aggregate([ec.rows[i] for i in iter_bits(mask)]), Purpose.AGGREGATE)


def g_tilde(ec: EncryptedContext, attributes: Iterable[int], decryptor: Decryptor) -> int:
    """Decrypted number of objects having all ``attributes``."""
    mask = _index_mask(attributes, ec.attribute_count, "attribute")
    return decryptor.decrypt(_aggregate([ec.columns[j] for j in iter_bits(mask)]), Purpose.AGGREGATE)


def alpha_compare(
    u: CipherVector,
    v: CipherVector,
    backend: Backend,
    decryptor: Decryptor,
    rng: random.Random | None = None,
) -> bool:
    """Blinded containment test on 0/1 vectors: True iff support(u) is inside support(v).

    Computes ``(S(u) - S(u * v)) * E(r)`` with r nonzero and checks the
    decryption for zero. With a prime plaintext modulus the product is zero
    only when the difference is, and the difference counts the positions
    where u is 1 and v is 0.
    """
    if len(u) != len(v):
        raise LengthMismatch(f"vector lengths differ: {len(u)} vs {len(v)}")
    if len(u) >= backend.t:
        # The difference could wrap to 0 mod t.
        raise InvalidParameter(f"vectors of length {len(u)} need a plaintext modulus above {len(u)}")
    diff = backend.hom_sub(sum_S(u), sum_S(elementwise_product(u, v)))
    blinded = backend.hom_mul(diff, decryptor.blinding_factor(rng))
    return decryptor.decrypt(blinded, Purpose.ALPHA_TEST) == 0


# --- privacy-preserving concepts -----------------------------------------------


@dataclass(frozen=True)
class PrivacyConcept:
    """``(extent, |intent|)`` when f-induced, ``(|extent|, intent)`` when g-induced."""

    kind: Direction
    extent: frozenset[int] | None = None
    intent: frozenset[int] | None = None
    extent_cardinality: int | None = None
    intent_cardinality: int | None = None

    def __post_init__(self):
        if self.kind is Direction.OBJECT:
            ok = self.extent is not None and self.intent_cardinality is not None
            ok = ok and self.intent is None and self.extent_cardinality is None
        else:
            ok = self.intent is not None and self.extent_cardinality is not None
            ok = ok and self.extent is None and self.intent_cardinality is None
        if not ok:
            raise InvalidParameter("f-induced concepts carry (extent, intent_cardinality); g-induced the dual")
        if (self.extent_cardinality or 0) < 0 or (self.intent_cardinality or 0) < 0:
            raise InvalidParameter("cardinalities are non-negative")

    @classmethod
    def f_induced(cls, extent: Iterable[int], intent_cardinality: int) -> "PrivacyConcept":
        return cls(Direction.OBJECT, extent=frozenset(extent), intent_cardinality=int(intent_cardinality))

    @classmethod
    def g_induced(cls, extent_cardinality: int, intent: Iterable[int]) -> "PrivacyConcept":
        return cls(Direction.ATTRIBUTE, intent=frozenset(intent), extent_cardinality=int(extent_cardinality))

    @property
    def known_set(self) -> frozenset[int]:
        return self.extent if self.kind is Direction.OBJECT else self.intent

    @property
    def cardinality(self) -> int:
        return self.intent_cardinality if self.kind is Direction.OBJECT else self.extent_cardinality

    def sort_key(self) -> tuple:
        if self.kind is Direction.OBJECT:
            return (0, len(self.extent), sorted(self.extent))
        return (1, self.extent_cardinality, sorted(self.intent))


def canonical_privacy(concepts: Iterable[PrivacyConcept]) -> list[PrivacyConcept]:
    by_set: dict[tuple, PrivacyConcept] = {}
    for pc in concepts:
        ident = (pc.kind, pc.known_set)
        prior = by_set.setdefault(ident, pc)
        if prior.cardinality != pc.cardinality:
            raise IntegrityError(f"conflicting cardinalities for {sorted(pc.known_set)}")
    return sorted(by_set.values(), key=PrivacyConcept.sort_key)


def _make(direction: Direction, mask: int, value: int) -> PrivacyConcept:
    if direction is Direction.OBJECT:
        return PrivacyConcept.f_induced(mask_to_set(mask), value)
    return PrivacyConcept.g_induced(value, mask_to_set(mask))


def aggregate_subsets(
    vectors: Sequence[CipherVector],
    decryptor: Decryptor,
    *,
    prefix: int = 0,
    free_from: int = 0,
    prune: bool = False,
) -> tuple[dict[int, int], int, int]:
    """Decrypted aggregates for every subset of one prefix block.

    The block is ``{prefix | S : S a subset of range(free_from, k)}``; with the
    defaults that is the whole power set. Subsets are walked depth first so
    each child's product costs one elementwise multiplication of its
    parent's. With ``prune`` a zero aggregate skips every superset below it
    in the walk: those aggregates are zero too.

    Returns ``(table, visited, pruned)`` where ``table`` maps non-empty subset
    masks to aggregates and ``visited + pruned`` is the block size.
    """
    k = len(vectors)
    backend = vectors[0].backend
    table: dict[int, int] = {}
    counts = [0, 0]

    def evaluate(mask: int, product: CipherVector) -> int:
        value = decryptor.decrypt(backend.sum_elements(product), Purpose.AGGREGATE)
        table[mask] = value
        counts[0] += 1
        return value

    def descend(mask: int, product: CipherVector | None, start: int) -> None:
        for j in range(start, k):
            child = mask | (1 << j)
            child_product = vectors[j] if product is None else backend.elementwise_mul(product, vectors[j])
            if evaluate(child, child_product) == 0 and prune:
                counts[1] += (1 << (k - j - 1)) - 1
                continue
            descend(child, child_product, j + 1)

    if prefix:
        product = product_P([vectors[i] for i in iter_bits(prefix)])
        if evaluate(prefix, product) == 0 and prune:
            return table, counts[0], (1 << (k - free_from)) - 1
        descend(prefix, product, free_from)
    else:
        counts[0] += 1  # the empty set; handled by the boundary rules
        descend(0, None, free_from)
    return table, counts[0], counts[1]


SingletonTest = Callable[[int, int], bool]


def _strictly_decreasing(table: dict[int, int], mask: int, value: int, k: int) -> bool:
    # Missing supersets were pruned, so their aggregate is 0.
    for x in range(k):
        bit = 1 << x
        if not mask & bit and table.get(mask | bit, 0) >= value:
            return False
    return True


def uniform_singleton_test(table: dict[int, int], k: int) -> SingletonTest:
    """The strict-decrease rule applied to a one-element subset."""

    def test(mask: int, value: int) -> bool:
        return value > 0 and _strictly_decreasing(table, mask, value, k)

    return test


def alpha_singleton_test(ec: EncryptedContext, direction: Direction, decryptor: Decryptor, seed: int = 0) -> SingletonTest:
    """{x} qualifies iff no other vector's support contains x's support."""
    vectors = ec.vectors(direction)

    def test(mask: int, value: int) -> bool:
        x = mask.bit_length() - 1
        rng = stream(seed, direction.value, "alpha", x)
        for other in range(len(vectors)):
            if other != x and alpha_compare(vectors[x], vectors[other], ec.backend, decryptor, rng):
                return False
        return True

    return test


def classify(
    table: dict[int, int],
    masks: Iterable[int],
    k: int,
    direction: Direction,
    singleton_test: SingletonTest,
) -> list[PrivacyConcept]:
    """Apply the privacy-concept rules to the given non-empty subsets."""
    found = []
    for mask in masks:
        value = table[mask]
        size = mask.bit_count()
        if size == 1:
            if singleton_test(mask, value):
                found.append(_make(direction, mask, value))
        elif value > 0 and _strictly_decreasing(table, mask, value, k):
            found.append(_make(direction, mask, value))
    return found


def boundary_concepts(table: dict[int, int], k: int, other_side: int, direction: Direction) -> list[PrivacyConcept]:
    """Concepts for the empty and the full subset of the enumerated side.

    The empty subset qualifies iff the dual aggregate over the whole other
    side is zero. That dual aggregate equals the number of enumerated
    elements whose singleton aggregate is ``other_side`` (e.g. the number of
    objects carrying every attribute), so it is read off values already
    decrypted instead of evaluating a product as deep as the other side.
    The full subset qualifies with value 0 iff its own aggregate is zero;
    a non-zero full subset is handled by :func:`classify`.
    """
    full = (1 << k) - 1
    dual_full = sum(1 for x in range(k) if table.get(1 << x, 0) == other_side)
    found = []
    if dual_full == 0:
        if direction is Direction.OBJECT:
            found.append(PrivacyConcept.f_induced((), other_side))
        else:
            found.append(PrivacyConcept.g_induced(other_side, ()))
    if table.get(full, 0) == 0:
        found.append(_make(direction, full, 0))
    return found


def enumerate_privacy_concepts(
    ec: EncryptedContext,
    direction: Direction | str,
    decryptor: Decryptor,
    *,
    singleton_mode: str = "alpha",
    prune: bool = False,
    seed: int = 0,
    limit: int = DEFAULT_ENUMERATION_LIMIT,
) -> list[PrivacyConcept]:
    direction = Direction.parse(direction)
    k = ec.side(direction)
    if k > limit:
        raise TooLarge(f"enumerated side has {k} elements; limit is {limit}")
    table, _, _ = aggregate_subsets(ec.vectors(direction), decryptor, prune=prune)
    test = make_singleton_test(singleton_mode, ec, direction, decryptor, table, seed)
    other_side = ec.side(Direction.ATTRIBUTE if direction is Direction.OBJECT else Direction.OBJECT)
    found = classify(table, table, k, direction, test)
    found += boundary_concepts(table, k, other_side, direction)
    return canonical_privacy(found)


def make_singleton_test(mode, ec, direction, decryptor, table, seed) -> SingletonTest:
    if mode == "alpha":
        return alpha_singleton_test(ec, direction, decryptor, seed)
    if mode == "uniform":
        return uniform_singleton_test(table, ec.side(direction))
    raise InvalidParameter(f"unknown singleton mode {mode!r}")


def algorithm1_f_induced(ec: EncryptedContext, decryptor: Decryptor, **kwargs) -> list[PrivacyConcept]:
    """f-induced privacy-preserving concepts from the object power set."""
    return enumerate_privacy_concepts(ec, Direction.OBJECT, decryptor, **kwargs)


def algorithm2_g_induced(ec: EncryptedContext, decryptor: Decryptor, **kwargs) -> list[PrivacyConcept]:
    """g-induced privacy-preserving concepts from the attribute power set."""
    return enumerate_privacy_concepts(ec, Direction.ATTRIBUTE, decryptor, **kwargs)


def recover_concepts(pcs: Iterable[PrivacyConcept], ctx: FormalContext) -> list[Concept]:
    """Look up the missing half of each privacy-preserving concept in the plaintext context."""
    out = []
    for pc in pcs:
        if pc.kind is Direction.OBJECT:
            extent = set_to_mask(pc.extent, ctx.object_count, "object")
            intent = ctx.intent_mask(extent)
            if intent.bit_count() != pc.intent_cardinality:
                raise IntegrityError(
                    f"extent {sorted(pc.extent)}: |f(X)| = {intent.bit_count()}, pipeline said {pc.intent_cardinality}"
                )
        else:
            intent = set_to_mask(pc.intent, ctx.attribute_count, "attribute")
            extent = ctx.extent_mask(intent)
            if extent.bit_count() != pc.extent_cardinality:
                raise IntegrityError(
                    f"intent {sorted(pc.intent)}: |g(B)| = {extent.bit_count()}, pipeline said {pc.extent_cardinality}"
                )
        out.append(Concept(mask_to_set(extent), mask_to_set(intent)))
    return canonical(out)
