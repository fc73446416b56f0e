"""The hidden bit string and its basis-index mapping."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class HiddenString:
    """Bit string ``s_1 s_2 ... s_n``; ``s_1`` maps to the most significant index bit."""

    bits: tuple[int, ...]

    def __post_init__(self):
        bits = tuple(int(b) for b in self.bits)
        if not bits:
            raise ValueError("hidden string needs at least one bit")
        if any(b not in (0, 1) for b in bits):
            raise ValueError(f"bits must be 0 or 1, got {self.bits!r}")
        object.__setattr__(self, "bits", bits)

    @classmethod
    def parse(cls, text: str) -> "HiddenString":
        text = text.strip()
        if not text or set(text) - {"0", "1"}:
            raise ValueError(f"not a bit string: {text!r}")
        return cls(tuple(int(c) for c in text))

    @classmethod
    def ones(cls, n: int) -> "HiddenString":
        return cls((1,) * n)

    @classmethod
    def zeros(cls, n: int) -> "HiddenString":
        return cls((0,) * n)

    @classmethod
    def from_index(cls, index: int, n: int) -> "HiddenString":
        if not 0 <= index < 2**n:
            raise ValueError(f"index {index} out of range for n={n}")
        return cls(tuple((index >> (n - 1 - k)) & 1 for k in range(n)))

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> "HiddenString":
        return cls(tuple(int(b) for b in rng.integers(0, 2, size=n)))

    @property
    def n(self) -> int:
        return len(self.bits)

    @property
    def basis_index(self) -> int:
        idx = 0
        for b in self.bits:
            idx = (idx << 1) | b
        return idx

    def dot(self, x: "HiddenString") -> int:
        if x.n != self.n:
            raise ValueError("length mismatch")
        return sum(a & b for a, b in zip(self.bits, x.bits)) % 2

    def __str__(self) -> str:
        return "".join(str(b) for b in self.bits)
