"""Plaintext formal contexts, derivation operators and classical concept baselines.

Indices are 0-based throughout the library; the CLI and report writers
shift them to the 1-based ``o1..om`` / ``a1..an`` numbering on output.
Object and attribute sets are stored internally as int bitsets (bit ``i``
set means index ``i`` is a member), which keeps the closure operators to a
handful of big-int ANDs even for tens of thousands of objects.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import InvalidIndex, InvalidParameter, TooLarge

DEFAULT_ENUMERATION_LIMIT = 24


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``mask`` in increasing order."""
    if mask.bit_length() > 256:
        # Clearing bits one at a time is quadratic on wide masks.
        raw = np.frombuffer(mask.to_bytes((mask.bit_length() + 7) // 8, "little"), dtype=np.uint8)
        yield from np.flatnonzero(np.unpackbits(raw, bitorder="little")).tolist()
        return
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_to_set(mask: int) -> frozenset[int]:
    return frozenset(iter_bits(mask))


def set_to_mask(indices: Iterable[int], size: int, kind: str = "index") -> int:
    mask = 0
    for i in indices:
        if not isinstance(i, (int, np.integer)) or isinstance(i, bool):
            raise InvalidIndex(f"{kind} {i!r} is not an integer")
        if not 0 <= i < size:
            raise InvalidIndex(f"{kind} {i} out of range [0, {size})")
        mask |= 1 << int(i)
    return mask


def _pack_bits(vector: np.ndarray) -> int:
    return int.from_bytes(np.packbits(vector, bitorder="little").tobytes(), "little")


class FormalContext:
    """Immutable binary incidence relation between m objects and n attributes."""

    __slots__ = ("_incidence", "_rows", "_columns", "_object_labels", "_attribute_labels")

    def __init__(
        self,
        incidence: Sequence[Sequence[int]] | np.ndarray,
        object_labels: Sequence[str] | None = None,
        attribute_labels: Sequence[str] | None = None,
    ):
        arr = np.asarray(incidence)
        if arr.ndim != 2:
            raise InvalidParameter(f"incidence must be a 2-D matrix, got {arr.ndim}-D")
        if arr.dtype == bool:
            arr = arr.astype(np.uint8)
        if arr.size and not np.isin(arr, (0, 1)).all():
            raise InvalidParameter("incidence entries must be exactly 0 or 1")
        m, n = arr.shape
        if m < 2 or n < 2:
            raise InvalidParameter(f"context must be at least 2x2, got {m}x{n}")
        arr = np.ascontiguousarray(arr, dtype=np.uint8)
        arr.setflags(write=False)
        self._incidence = arr
        self._rows = tuple(_pack_bits(arr[i]) for i in range(m))
        self._columns = tuple(_pack_bits(arr[:, j]) for j in range(n))

        if object_labels is None:
            object_labels = [f"o{i + 1}" for i in range(m)]
        if attribute_labels is None:
            attribute_labels = [f"a{j + 1}" for j in range(n)]
        if len(object_labels) != m or len(attribute_labels) != n:
            raise InvalidParameter("label counts must match the context dimensions")
        self._object_labels = tuple(str(s) for s in object_labels)
        self._attribute_labels = tuple(str(s) for s in attribute_labels)

    @property
    def object_count(self) -> int:
        return self._incidence.shape[0]

    @property
    def attribute_count(self) -> int:
        return self._incidence.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self._incidence.shape

    @property
    def incidence(self) -> np.ndarray:
        """Read-only ``uint8`` view of the m x n matrix."""
        return self._incidence

    @property
    def rows(self) -> tuple[int, ...]:
        """Row bitsets: bit j of ``rows[i]`` is I(o_i, a_j)."""
        return self._rows

    @property
    def columns(self) -> tuple[int, ...]:
        """Column bitsets: bit i of ``columns[j]`` is I(o_i, a_j)."""
        return self._columns

    @property
    def object_labels(self) -> tuple[str, ...]:
        return self._object_labels

    @property
    def attribute_labels(self) -> tuple[str, ...]:
        return self._attribute_labels

    @property
    def all_objects(self) -> int:
        return (1 << self.object_count) - 1

    @property
    def all_attributes(self) -> int:
        return (1 << self.attribute_count) - 1

    def intent_mask(self, objects: int) -> int:
        """f on bitsets: attributes shared by every object in ``objects``."""
        if objects.bit_count() <= self.attribute_count:
            acc = self.all_attributes
            for i in iter_bits(objects):
                acc &= self._rows[i]
                if not acc:
                    break
            return acc
        # Wide extents: test each column for containment instead of AND-ing rows.
        acc = 0
        for j, col in enumerate(self._columns):
            if objects & ~col == 0:
                acc |= 1 << j
        return acc

    def extent_mask(self, attributes: int) -> int:
        """g on bitsets: objects having every attribute in ``attributes``."""
        acc = self.all_objects
        for j in iter_bits(attributes):
            acc &= self._columns[j]
            if not acc:
                break
        return acc

    def with_labels(self, object_labels=None, attribute_labels=None) -> "FormalContext":
        return FormalContext(
            self._incidence,
            object_labels or self._object_labels,
            attribute_labels or self._attribute_labels,
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FormalContext):
            return NotImplemented
        return (
            np.array_equal(self._incidence, other._incidence)
            and self._object_labels == other._object_labels
            and self._attribute_labels == other._attribute_labels
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"FormalContext(m={self.object_count}, n={self.attribute_count})"


@dataclass(frozen=True)
class Concept:
    extent: frozenset[int]
    intent: frozenset[int]

    def sort_key(self) -> tuple:
        return (len(self.extent), sorted(self.extent), sorted(self.intent))


@dataclass(frozen=True)
class ContextStats:
    ones_count: int
    zeros_count: int
    density: Fraction


def canonical(concepts: Iterable[Concept]) -> list[Concept]:
    """Deduplicate and order by extent size, then lexicographic extent."""
    return sorted(set(concepts), key=Concept.sort_key)


def derive_intent(ctx: FormalContext, objects: Iterable[int]) -> frozenset[int]:
    return mask_to_set(ctx.intent_mask(set_to_mask(objects, ctx.object_count, "object")))


def derive_extent(ctx: FormalContext, attributes: Iterable[int]) -> frozenset[int]:
    return mask_to_set(ctx.extent_mask(set_to_mask(attributes, ctx.attribute_count, "attribute")))


def is_concept(ctx: FormalContext, objects: Iterable[int], attributes: Iterable[int]) -> bool:
    x = set_to_mask(objects, ctx.object_count, "object")
    b = set_to_mask(attributes, ctx.attribute_count, "attribute")
    return ctx.intent_mask(x) == b and ctx.extent_mask(b) == x


def _subset_meets(vectors: Sequence[int], full: int) -> Iterator[tuple[int, int]]:
    # Depth-first walk of the power set of range(len(vectors)); yields
    # (subset mask, AND of the selected vectors starting from ``full``).
    k = len(vectors)
    stack = [(0, full, 0)]
    while stack:
        mask, acc, start = stack.pop()
        yield mask, acc
        for j in range(start, k):
            stack.append((mask | (1 << j), acc & vectors[j], j + 1))


def _concept(extent: int, intent: int) -> Concept:
    return Concept(mask_to_set(extent), mask_to_set(intent))


def enumerate_tem(ctx: FormalContext, limit: int = DEFAULT_ENUMERATION_LIMIT) -> list[Concept]:
    """Enumeration method: close every subset of the smaller side."""
    m, n = ctx.shape
    side = min(m, n)
    if side > limit:
        raise TooLarge(f"enumerated side has {side} elements; limit is {limit}")
    found: set[tuple[int, int]] = set()
    if m <= n:
        for _, intent in _subset_meets(ctx.rows, ctx.all_attributes):
            found.add((ctx.extent_mask(intent), intent))
    else:
        for _, extent in _subset_meets(ctx.columns, ctx.all_objects):
            found.add((extent, ctx.intent_mask(extent)))
    return canonical(_concept(e, i) for e, i in found)


def enumerate_tia(ctx: FormalContext) -> list[Concept]:
    """Object-incremental construction of the concept set.

    Objects are inserted one at a time. The closed intents of the context
    restricted to the first k objects are the full attribute set plus every
    intersection of rows seen so far, so inserting row r adds ``B & r`` for
    each existing intent B. A row identical to one already inserted cannot
    create an intent and is skipped. Extents are read off once at the end.
    """
    intents: set[int] = {ctx.all_attributes}
    seen_rows: set[int] = set()
    for row in ctx.rows:
        if row in seen_rows:
            continue
        seen_rows.add(row)
        novel = {b & row for b in intents}
        intents |= novel
    return canonical(_concept(ctx.extent_mask(b), b) for b in intents)


def granular_concepts(ctx: FormalContext) -> list[Concept]:
    found = set()
    for row in ctx.rows:
        found.add((ctx.extent_mask(row), row))
    for col in ctx.columns:
        found.add((col, ctx.intent_mask(col)))
    return canonical(_concept(e, i) for e, i in found)


def stats(ctx: FormalContext) -> ContextStats:
    ones = int(ctx.incidence.sum(dtype=np.int64))
    total = ctx.object_count * ctx.attribute_count
    return ContextStats(ones, total - ones, Fraction(ones, total))


def generate_context(m: int, n: int, p: float, seed: int) -> FormalContext:
    """Draw an m x n context with independent Bernoulli(p) entries.

    The generator is NumPy's PCG64 seeded through ``SeedSequence(seed)``.
    Cell (i, j) consumes the ``i*n + j``-th double of that stream (row-major),
    so any cell's draw is addressable with ``PCG64.advance``; both the
    bit generator and ``Generator.random`` produce identical streams on
    every platform.
    """
    if m < 2 or n < 2:
        raise InvalidParameter(f"context must be at least 2x2, got {m}x{n}")
    if not 0.0 < p < 1.0:
        raise InvalidParameter(f"density must lie in (0, 1), got {p}")
    if not 0 <= seed < 2**64:
        raise InvalidParameter("seed must be an unsigned 64-bit integer")
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    return FormalContext(rng.random((m, n)) < p)


def validate_context(ctx: FormalContext) -> list[str]:
    """Lint warnings for full/empty rows and columns. Never raises."""
    warnings = []
    full_row, full_col = ctx.all_attributes, ctx.all_objects
    for i, row in enumerate(ctx.rows):
        if row == full_row:
            warnings.append(f"full row {ctx.object_labels[i]}")
        elif row == 0:
            warnings.append(f"empty row {ctx.object_labels[i]}")
    for j, col in enumerate(ctx.columns):
        if col == full_col:
            warnings.append(f"full column {ctx.attribute_labels[j]}")
        elif col == 0:
            warnings.append(f"empty column {ctx.attribute_labels[j]}")
    return warnings
