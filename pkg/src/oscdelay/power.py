"""Sign-preserving rational powers.

Exponents are kept as exact integer pairs m/n with m and n odd and coprime.
Odd numerator and denominator make t -> t**(m/n) an odd bijection of the
reals, so the map is well defined for negative bases.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class RationalExponent:
    """A positive rational exponent m/n with m, n odd coprime positive integers."""

    num: int
    den: int

    def __post_init__(self):
        if not isinstance(self.num, int) or not isinstance(self.den, int):
            raise ValueError("exponent numerator and denominator must be integers")
        if self.num <= 0 or self.den <= 0:
            raise ValueError(f"exponent must be positive, got {self.num}/{self.den}")
        if self.num % 2 == 0 or self.den % 2 == 0:
            raise ValueError(
                f"exponent {self.num}/{self.den}: numerator and denominator must both be odd"
            )
        if math.gcd(self.num, self.den) != 1:
            raise ValueError(f"exponent {self.num}/{self.den} is not in lowest terms")

    @property
    def value(self) -> float:
        return self.num / self.den

    def reciprocal(self) -> "RationalExponent":
        # odd/odd stays odd/odd under inversion
        return RationalExponent(self.den, self.num)

    @classmethod
    def parse(cls, text: str) -> "RationalExponent":
        """Parse 'm/n' or a bare integer 'm'."""
        parts = text.strip().split("/")
        try:
            if len(parts) == 1:
                return cls(int(parts[0]), 1)
            if len(parts) == 2:
                return cls(int(parts[0]), int(parts[1]))
        except ValueError as exc:
            # re-raise with the original text for context
            raise ValueError(f"invalid exponent {text!r}: {exc}") from None
        raise ValueError(f"invalid exponent {text!r}")

    def __str__(self) -> str:
        return f"{self.num}/{self.den}" if self.den != 1 else str(self.num)


def signed_pow(t: float, e: RationalExponent) -> float:
    """sign(t) * |t|**(m/n).

    Odd symmetry holds exactly at the sign level: signed_pow(-t, e) is the
    bit-level negation of signed_pow(t, e).  Overflow raises OverflowError.
    """
    t = float(t)
    if not math.isfinite(t):
        raise ValueError(f"signed_pow requires a finite base, got {t}")
    if t == 0.0:
        return 0.0
    try:
        mag = abs(t) ** e.value
    except OverflowError:
        raise OverflowError(f"signed_pow({t}, {e}) overflows") from None
    if math.isinf(mag):
        raise OverflowError(f"signed_pow({t}, {e}) overflows")
    return math.copysign(mag, t)


def signed_pow_array(t: np.ndarray, e: RationalExponent) -> np.ndarray:
    """Vectorized signed power; overflow propagates as +-inf for the caller to check."""
    t = np.asarray(t, dtype=float)
    with np.errstate(over="ignore"):
        return np.sign(t) * np.abs(t) ** e.value
