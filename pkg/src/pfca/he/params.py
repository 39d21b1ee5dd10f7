"""Parameter sizing for the integer somewhat-homomorphic scheme."""

from __future__ import annotations

from dataclasses import dataclass

from ..enums import Direction
from ..errors import InvalidParameter, ParamsInfeasible

DEFAULT_NOISE_BITS = 8
DEFAULT_ETA_CEILING = 8192
# Headroom of gamma over 2*eta.
GAMMA_SLACK_BITS = 64


@dataclass(frozen=True)
class HEParams:
    """Plaintext modulus, noise widths and the circuit shape they support.

    Attributes:
        plaintext_modulus: prime t; every message and decrypted aggregate lives in [0, t).
        noise_bits: rho, fresh noise term r is drawn from (-2^rho, 2^rho).
        secret_bits: eta, bit length of the secret odd modulus p.
        public_bits: gamma, fresh ciphertexts are below roughly 2^gamma.
        max_mul_depth: longest product chain (number of fresh factors) supported.
        max_sum_terms: longest sum of such products supported.
    """

    plaintext_modulus: int
    noise_bits: int
    secret_bits: int
    public_bits: int
    max_mul_depth: int
    max_sum_terms: int

    @property
    def fresh_noise_bound(self) -> int:
        """Strict upper bound on |t*r + msg| for a fresh ciphertext."""
        t = self.plaintext_modulus
        return t * (1 << self.noise_bits) + t

    @property
    def noise_ceiling(self) -> int:
        """Largest tracked noise tolerated: 2^(eta-2) < p/2 for every valid key."""
        return 1 << (self.secret_bits - 2)

    def circuit_noise(self) -> int:
        """Worst-case noise of the circuits the pipeline evaluates.

        Covers a sum of ``max_sum_terms`` products of ``max_mul_depth`` fresh
        factors, and the blinded comparison, whose noise is at most
        ``2 * L * B^3`` (difference of a depth-1 and a depth-2 sum, times one
        fresh factor).
        """
        b = self.fresh_noise_bound
        terms = self.max_sum_terms
        return max(terms * b**self.max_mul_depth, 2 * terms * b**3)

    def validate(self) -> None:
        from sympy import isprime

        if not isprime(self.plaintext_modulus):
            raise InvalidParameter(f"plaintext modulus {self.plaintext_modulus} is not prime")
        if min(self.noise_bits, self.secret_bits, self.max_mul_depth, self.max_sum_terms) < 1:
            raise InvalidParameter("parameter widths and circuit bounds must be positive")
        if self.public_bits <= 2 * self.secret_bits:
            raise InvalidParameter("public_bits must exceed 2 * secret_bits")
        if self.circuit_noise() >= self.noise_ceiling:
            raise InvalidParameter("noise budget does not cover the declared circuit shape")


def derive_params(
    m: int,
    n: int,
    direction: Direction | str,
    *,
    noise_bits: int = DEFAULT_NOISE_BITS,
    eta_ceiling: int = DEFAULT_ETA_CEILING,
) -> HEParams:
    """Size the scheme for enumerating one side of an m x n context.

    The multiplicative depth is the cardinality of the enumerated side
    (m when walking object subsets, n for attribute subsets) and sums run
    over at most max(m, n) terms. eta is the smallest secret size whose
    noise ceiling covers that circuit.
    """
    from sympy import nextprime

    if m < 2 or n < 2:
        raise InvalidParameter(f"dimensions must be at least 2, got {m}x{n}")
    if noise_bits < 1:
        raise InvalidParameter("noise_bits must be positive")
    direction = Direction.parse(direction)
    t = int(nextprime(max(m, n)))
    depth = m if direction is Direction.OBJECT else n
    draft = HEParams(t, noise_bits, 2, 5, depth, max(m, n))
    # noise < 2^(eta-2)  <=>  eta >= noise.bit_length() + 2
    eta = draft.circuit_noise().bit_length() + 2
    if eta > eta_ceiling:
        raise ParamsInfeasible(
            f"{m}x{n} {direction.name.lower()}-first needs a {eta}-bit secret; ceiling is {eta_ceiling}"
        )
    return HEParams(t, noise_bits, eta, 2 * eta + GAMMA_SLACK_BITS, depth, max(m, n))
