"""Symmetric somewhat-homomorphic scheme over the integers.

A message ``msg`` in [0, t) encrypts to ``c = q*p + t*r + msg`` with p the
secret odd modulus, q uniform in [0, 2^gamma / p) and r uniform in
(-2^rho, 2^rho). Addition and multiplication are plain integer operations;
decryption reduces c into (-p/2, p/2] and then mod t, which is correct as
long as the accumulated ``t*r + msg`` terms stay below p/2.

Ciphertexts are not reduced after multiplication, so their bit length grows
linearly with product depth (roughly depth * gamma bits). The parameters
give no cryptographic security; the scheme demonstrates the homomorphic
information flow only.
"""

from __future__ import annotations

import random
from math import gcd

import numpy as np

from ..errors import InvalidParameter
from .base import Backend, SecretKey


class SHEBackend(Backend):
    name = "she"

    def __init__(self, params, *, debug: bool = True):
        super().__init__(params, debug=debug)
        if params.secret_bits < 3:
            raise InvalidParameter("secret_bits must be at least 3")
        self.fresh_noise = params.fresh_noise_bound

    def keygen(self, seed: int) -> SecretKey:
        rng = random.Random(seed)
        eta = self.params.secret_bits
        while True:
            p = rng.getrandbits(eta) | (1 << (eta - 1)) | 1
            if gcd(p, self.t) == 1:
                return SecretKey(p, self.params, self.name)

    def _encrypt_values(self, key, msgs, rng):
        p, t = key.secret, self.t
        q_range = (1 << self.params.public_bits) // p
        r_span = 1 << self.params.noise_bits
        randrange = rng.randrange
        out = np.empty(msgs.size, dtype=object)
        out[:] = [randrange(q_range) * p + t * randrange(1 - r_span, r_span) + int(m) for m in msgs.tolist()]
        return out

    def _decrypt_value(self, key, value):
        p = key.secret
        centered = value % p
        if centered > p // 2:
            centered -= p
        return centered % self.t

    def _add(self, a, b):
        return a + b

    def _sub(self, a, b):
        return a - b

    def _mul(self, a, b):
        return a * b

    def _vmul(self, a, b):
        return a * b

    def _vsum(self, a):
        return sum(a.tolist())

    def element_value(self, data, i):
        return int(data[i])

    def rows_of(self, payload):
        return [payload[i] for i in range(payload.shape[0])]

    def columns_of(self, payload):
        return [payload[:, j].copy() for j in range(payload.shape[1])]
