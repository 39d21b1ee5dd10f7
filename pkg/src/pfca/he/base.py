"""Backend-independent ciphertext types and the homomorphic backend interface."""

from __future__ import annotations

import hashlib
import random
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..enums import Provenance
from ..errors import (
    EmptyInput,
    InvalidParameter,
    LengthMismatch,
    NoiseOverflow,
    ParamsMismatch,
    PlaintextOutOfRange,
)
from .params import HEParams


@dataclass(frozen=True)
class SecretKey:
    secret: int
    params: HEParams
    backend: str
    fingerprint: int = field(init=False)

    def __post_init__(self):
        digest = hashlib.blake2b(
            repr((self.backend, self.params, self.secret)).encode(), digest_size=8
        ).digest()
        object.__setattr__(self, "fingerprint", int.from_bytes(digest, "little"))

    @property
    def p(self) -> int:
        return self.secret

    def __repr__(self) -> str:
        # Never print the secret itself.
        return f"SecretKey(backend={self.backend!r}, fingerprint={self.fingerprint:#018x})"


@dataclass(frozen=True)
class Ciphertext:
    """One encrypted integer.

    ``fan_in`` counts the entry ciphertexts folded into this value; it lets
    the transcript auditor tell a raw cell from an aggregate. ``noise_bound``
    is ``None`` when the backend runs without debug accounting.
    """

    value: int
    provenance: Provenance
    lineage: int
    noise_bound: int | None = None
    fan_in: int = 0


@dataclass(frozen=True, eq=False)
class CipherVector:
    """An ordered run of ciphertexts held in a backend-specific array.

    Every element shares one provenance, lineage, fan-in and noise bound,
    which is always the case for rows/columns of an encrypted context and
    for anything derived from them elementwise.
    """

    data: np.ndarray
    provenance: Provenance
    lineage: int
    backend: "Backend" = field(repr=False)
    noise_bound: int | None = None
    fan_in: int = 0

    def __len__(self) -> int:
        return self.data.shape[-1]

    def __getitem__(self, i: int) -> Ciphertext:
        return Ciphertext(
            self.backend.element_value(self.data, i),
            self.provenance,
            self.lineage,
            self.noise_bound,
            self.fan_in,
        )

    @property
    def elements(self) -> list[Ciphertext]:
        return [self[i] for i in range(len(self))]


class Backend(ABC):
    """Homomorphic arithmetic over ciphertexts sharing one parameter set.

    Subclasses supply the payload encoding; this class owns range checks,
    lineage checks, provenance and the debug noise/fan-in bookkeeping.
    """

    name: str = ""

    def __init__(self, params: HEParams, *, debug: bool = True):
        self.params = params
        self.debug = debug

    @property
    def t(self) -> int:
        return self.params.plaintext_modulus

    # payload hooks -----------------------------------------------------

    @abstractmethod
    def keygen(self, seed: int) -> SecretKey: ...

    @abstractmethod
    def _encrypt_values(self, key: SecretKey, msgs: np.ndarray, rng: random.Random) -> np.ndarray: ...

    @abstractmethod
    def _decrypt_value(self, key: SecretKey, value: int) -> int: ...

    @abstractmethod
    def _add(self, a: int, b: int) -> int: ...

    @abstractmethod
    def _sub(self, a: int, b: int) -> int: ...

    @abstractmethod
    def _mul(self, a: int, b: int) -> int: ...

    @abstractmethod
    def _vmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray: ...

    @abstractmethod
    def _vsum(self, a: np.ndarray) -> int: ...

    @abstractmethod
    def element_value(self, data: np.ndarray, i: int) -> int: ...

    @abstractmethod
    def columns_of(self, matrix_payload: np.ndarray) -> list[np.ndarray]: ...

    @abstractmethod
    def rows_of(self, matrix_payload: np.ndarray) -> list[np.ndarray]: ...

    fresh_noise: int = 0

    # bookkeeping -------------------------------------------------------

    def _fresh_bound(self) -> int | None:
        return self.fresh_noise if self.debug else None

    def _combine_bound(self, b1, b2, op) -> int | None:
        if not self.debug or b1 is None or b2 is None:
            return None
        bound = op(b1, b2)
        if bound >= self.params.noise_ceiling:
            raise NoiseOverflow(
                f"noise bound of {bound.bit_length()} bits exceeds the "
                f"{self.params.secret_bits - 2}-bit ceiling"
            )
        return bound

    def _check_lineage(self, *operands) -> int:
        lineage = operands[0].lineage
        for op in operands[1:]:
            if op.lineage != lineage:
                raise ParamsMismatch("operands were encrypted under different keys or parameters")
        return lineage

    def _check_message(self, msg: int) -> int:
        if isinstance(msg, bool) or not isinstance(msg, (int, np.integer)):
            raise PlaintextOutOfRange(f"message {msg!r} is not an integer")
        if not 0 <= msg < self.t:
            raise PlaintextOutOfRange(f"message {msg} outside [0, {self.t})")
        return int(msg)

    @staticmethod
    def _check_fresh_provenance(provenance: Provenance) -> None:
        if provenance is Provenance.DERIVED:
            raise InvalidParameter("fresh encryptions are Entry or Blinded; only arithmetic produces Derived")

    # public API -------------------------------------------------------------

    def encrypt(
        self,
        key: SecretKey,
        msg: int,
        rng: random.Random,
        provenance: Provenance = Provenance.ENTRY,
    ) -> Ciphertext:
        self._check_fresh_provenance(provenance)
        msg = self._check_message(msg)
        value = self.element_value(self._encrypt_values(key, np.array([msg], dtype=np.int64), rng), 0)
        fan_in = 1 if provenance is Provenance.ENTRY else 0
        return Ciphertext(value, provenance, key.fingerprint, self._fresh_bound(), fan_in)

    def encrypt_vector(
        self,
        key: SecretKey,
        msgs: Sequence[int] | np.ndarray,
        rng: random.Random,
        provenance: Provenance = Provenance.ENTRY,
    ) -> CipherVector:
        self._check_fresh_provenance(provenance)
        arr = np.asarray(msgs, dtype=np.int64)
        if arr.ndim != 1 or arr.size == 0:
            raise InvalidParameter("expected a non-empty 1-D message vector")
        if arr.min() < 0 or arr.max() >= self.t:
            raise PlaintextOutOfRange(f"messages must lie in [0, {self.t})")
        fan_in = 1 if provenance is Provenance.ENTRY else 0
        return CipherVector(
            self._encrypt_values(key, arr, rng), provenance, key.fingerprint, self, self._fresh_bound(), fan_in
        )

    def encrypt_matrix(
        self, key: SecretKey, matrix: np.ndarray, rng: random.Random
    ) -> tuple[list[CipherVector], list[CipherVector]]:
        """Encrypt every cell once; return (row vectors, column vectors) over the same ciphertexts."""
        arr = np.asarray(matrix, dtype=np.int64)
        if arr.size and (arr.min() < 0 or arr.max() >= self.t):
            raise PlaintextOutOfRange(f"messages must lie in [0, {self.t})")
        m, n = arr.shape
        payload = self._encrypt_values(key, arr.reshape(-1), rng)
        payload = payload.reshape(payload.shape[:-1] + (m, n))
        bound = self._fresh_bound()

        def wrap(data):
            return CipherVector(data, Provenance.ENTRY, key.fingerprint, self, bound, 1)

        return [wrap(d) for d in self.rows_of(payload)], [wrap(d) for d in self.columns_of(payload)]

    def decrypt(self, key: SecretKey, c: Ciphertext) -> int:
        if c.lineage != key.fingerprint:
            raise ParamsMismatch("ciphertext was not produced under this key")
        if self.debug and c.noise_bound is not None and 2 * c.noise_bound >= key.secret:
            raise NoiseOverflow("tracked noise exceeds p/2; parameters are misconfigured")
        return self._decrypt_value(key, c.value)

    def hom_add(self, c1: Ciphertext, c2: Ciphertext) -> Ciphertext:
        lineage = self._check_lineage(c1, c2)
        bound = self._combine_bound(c1.noise_bound, c2.noise_bound, lambda a, b: a + b)
        return Ciphertext(self._add(c1.value, c2.value), Provenance.DERIVED, lineage, bound, c1.fan_in + c2.fan_in)

    def hom_sub(self, c1: Ciphertext, c2: Ciphertext) -> Ciphertext:
        lineage = self._check_lineage(c1, c2)
        bound = self._combine_bound(c1.noise_bound, c2.noise_bound, lambda a, b: a + b)
        return Ciphertext(self._sub(c1.value, c2.value), Provenance.DERIVED, lineage, bound, c1.fan_in + c2.fan_in)

    def hom_mul(self, c1: Ciphertext, c2: Ciphertext) -> Ciphertext:
        lineage = self._check_lineage(c1, c2)
        bound = self._combine_bound(c1.noise_bound, c2.noise_bound, lambda a, b: a * b)
        return Ciphertext(self._mul(c1.value, c2.value), Provenance.DERIVED, lineage, bound, c1.fan_in + c2.fan_in)

    def elementwise_mul(self, u: CipherVector, v: CipherVector) -> CipherVector:
        if len(u) != len(v):
            raise LengthMismatch(f"vector lengths differ: {len(u)} vs {len(v)}")
        lineage = self._check_lineage(u, v)
        bound = self._combine_bound(u.noise_bound, v.noise_bound, lambda a, b: a * b)
        return CipherVector(self._vmul(u.data, v.data), Provenance.DERIVED, lineage, self, bound, u.fan_in + v.fan_in)

    def sum_elements(self, u: CipherVector) -> Ciphertext:
        if len(u) == 0:
            raise EmptyInput("cannot sum an empty vector")
        bound = None
        if self.debug and u.noise_bound is not None:
            bound = self._combine_bound(u.noise_bound, len(u), lambda a, b: a * b)
        return Ciphertext(self._vsum(u.data), Provenance.DERIVED, u.lineage, bound, u.fan_in * len(u))

    def encrypt_random_nonzero(self, key: SecretKey, rng: random.Random) -> Ciphertext:
        return self.encrypt(key, rng.randrange(1, self.t), rng, Provenance.BLINDED)

    def value_bits(self, c: Ciphertext) -> int:
        """Payload size of ``c`` in bits (compactness diagnostics)."""
        return max(c.value.bit_length(), 1)

    def __repr__(self) -> str:
        return f"{type(self).__name__}(t={self.t}, debug={self.debug})"
