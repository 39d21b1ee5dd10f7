"""Transparent backend: the payload is the plaintext plus a random nonce.

Each ciphertext packs ``nonce << 32 | plaintext`` into one 64-bit word, so
payload size never grows (compact), equal plaintexts encrypt to different
words (randomized), and vector arithmetic runs as NumPy array operations.
It offers no secrecy and exists to test the protocol at sizes the integer
scheme cannot reach.
"""

from __future__ import annotations

import random

import numpy as np

from ..errors import ParamsInfeasible
from .base import Backend, SecretKey

_LOW = 0xFFFFFFFF
_MIX = 0x9E3779B1


class OracleBackend(Backend):
    name = "oracle"
    fresh_noise = 0

    def __init__(self, params, *, debug: bool = True):
        super().__init__(params, debug=debug)
        if self.t >= 1 << 31:
            raise ParamsInfeasible("oracle backend supports plaintext moduli below 2^31")

    def keygen(self, seed: int) -> SecretKey:
        return SecretKey(random.Random(seed).getrandbits(64) | 1, self.params, self.name)

    def _encrypt_values(self, key, msgs, rng):
        count = msgs.size
        raw = rng.getrandbits(32 * count).to_bytes(4 * count, "little")
        nonces = np.frombuffer(raw, dtype="<u4").astype(np.int64)
        return np.stack([msgs.astype(np.int64), nonces])

    def _decrypt_value(self, key, value):
        return (value & _LOW) % self.t

    @staticmethod
    def _split(value):
        return value & _LOW, value >> 32

    def _pack(self, plain, nonce):
        return ((nonce & _LOW) << 32) | (plain % self.t)

    def _add(self, a, b):
        (pa, na), (pb, nb) = self._split(a), self._split(b)
        return self._pack(pa + pb, na * _MIX ^ nb)

    def _sub(self, a, b):
        (pa, na), (pb, nb) = self._split(a), self._split(b)
        return self._pack(pa - pb, na * _MIX ^ ~nb)

    def _mul(self, a, b):
        (pa, na), (pb, nb) = self._split(a), self._split(b)
        return self._pack(pa * pb, (na ^ nb) * _MIX)

    def _vmul(self, a, b):
        out = np.empty_like(a)
        np.multiply(a[0], b[0], out=out[0])
        # Reduce only when needed: 0/1 contexts never leave [0, t).
        if out[0].max() >= self.t:
            np.remainder(out[0], self.t, out=out[0])
        np.bitwise_xor(a[1], b[1], out=out[1])
        return out

    def _vsum(self, a):
        plain = int(a[0].sum()) % self.t
        nonce = int(np.bitwise_xor.reduce(a[1]))
        return self._pack(plain, nonce)

    def element_value(self, data, i):
        return (int(data[1, i]) << 32) | int(data[0, i])

    def rows_of(self, payload):
        return [payload[:, i, :] for i in range(payload.shape[1])]

    def columns_of(self, payload):
        return [np.ascontiguousarray(payload[:, :, j]) for j in range(payload.shape[2])]
