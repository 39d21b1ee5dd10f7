from __future__ import annotations

from enum import Enum


class Direction(str, Enum):
    """Which side of the context is enumerated.

    ``OBJECT`` walks the object power set with the f-tilde aggregate
    (rows of the encrypted matrix); ``ATTRIBUTE`` walks the attribute
    power set with g-tilde (columns).
    """

    OBJECT = "f"
    ATTRIBUTE = "g"

    @classmethod
    def parse(cls, value: "str | Direction") -> "Direction":
        if isinstance(value, Direction):
            return value
        aliases = {
            "f": cls.OBJECT,
            "object": cls.OBJECT,
            "object-first": cls.OBJECT,
            "g": cls.ATTRIBUTE,
            "attribute": cls.ATTRIBUTE,
            "attribute-first": cls.ATTRIBUTE,
        }
        try:
            return aliases[value.lower()]
        except (KeyError, AttributeError):
            from .errors import InvalidParameter

            raise InvalidParameter(f"unknown direction {value!r}") from None


class Provenance(str, Enum):
    ENTRY = "entry"
    DERIVED = "derived"
    BLINDED = "blinded"


class Purpose(str, Enum):
    AGGREGATE = "aggregate"
    ALPHA_TEST = "alpha-test"
    CELL_RECOVERY = "final-cell-recovery-forbidden"
