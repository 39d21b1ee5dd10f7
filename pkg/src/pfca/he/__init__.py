"""Pluggable homomorphic-encryption backends."""

from __future__ import annotations

from ..errors import InvalidParameter
from .base import Backend, Ciphertext, CipherVector, SecretKey
from .oracle import OracleBackend
from .params import HEParams, derive_params
from .she import SHEBackend

BACKENDS = {"oracle": OracleBackend, "she": SHEBackend}


def make_backend(name: str, params: HEParams, *, debug: bool = True) -> Backend:
    try:
        cls = BACKENDS[name]
    except KeyError:
        raise InvalidParameter(f"unknown backend {name!r}; choose from {sorted(BACKENDS)}") from None
    return cls(params, debug=debug)


__all__ = [
    "BACKENDS",
    "Backend",
    "CipherVector",
    "Ciphertext",
    "HEParams",
    "OracleBackend",
    "SHEBackend",
    "SecretKey",
    "derive_params",
    "make_backend",
]
