"""Seeded multiply-shift binning of integers.

The hash permutes the w-bit integers with y -> (a y + c) mod 2^w, a odd, and
keeps the top bits of the image as the bin index. Bins of every size are
prefixes of the same permutation, so a bin of b bits is recovered from a bin
of more bits by a shift, and the members of a bin are listed by inverting
the permutation.
"""

from dataclasses import dataclass
from typing import List

import jax

from pirtradeoff.types import RNGKey


@dataclass(frozen=True)
class MultiplyShiftHash:
    width: int
    multiplier: int
    increment: int

    def __post_init__(self) -> None:
        if self.width < 0:
            raise ValueError(f"Hash width must be nonnegative, got {self.width}")
        if self.width > 0 and self.multiplier % 2 == 0:
            raise ValueError("Hash multiplier must be odd")

    @classmethod
    def from_key(cls, random_key: RNGKey, width: int) -> "MultiplyShiftHash":
        if width == 0:
            return cls(0, 1, 0)
        key_a, key_c = jax.random.split(random_key)
        half = jax.random.randint(key_a, (), 0, 2 ** (width - 1))
        increment = jax.random.randint(key_c, (), 0, 2**width)
        return cls(width, 2 * int(half) + 1, int(increment))

    @property
    def modulus(self) -> int:
        return 1 << self.width

    def permute(self, value: int) -> int:
        return (self.multiplier * value + self.increment) % self.modulus

    def digest(self, value: int, bits: int) -> int:
        """Bin index of a value among 2^bits bins."""
        image = self.permute(value)
        if bits >= self.width:
            return image
        return image >> (self.width - bits)

    def members(self, index: int, bits: int) -> List[int]:
        """All values whose bin index among 2^bits bins is `index`."""
        inverse = pow(self.multiplier, -1, self.modulus) if self.width else 1
        if bits >= self.width:
            images = [index] if index < self.modulus else []
        else:
            shift = self.width - bits
            images = [(index << shift) | low for low in range(1 << shift)]
        return sorted(
            ((image - self.increment) * inverse) % self.modulus for image in images
        )

    def to_json(self) -> dict:
        return {
            "width": self.width,
            "multiplier": self.multiplier,
            "increment": self.increment,
        }
